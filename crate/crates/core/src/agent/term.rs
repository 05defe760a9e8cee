//! Ground beliefs, plan patterns and their textual syntax.
//!
//! ```text
//! belief := functor | functor '(' term (',' term)* ')'
//! term   := atom | string | list | param
//! param  := 'param' '(' string ',' string ')'
//! list   := '[' (term (',' term)*)? ']'
//! ```
//!
//! Patterns use the same syntax plus variables (uppercase-initial names or
//! `_`). Whitespace between tokens is ignored; rendering is canonical and
//! contains none.

use std::fmt::{self, Write as _};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Atom(String),
    Str(String),
    List(Vec<Term>),
    Param(String, String),
}

impl Term {
    pub fn str(s: impl Into<String>) -> Self {
        Term::Str(s.into())
    }

    pub fn atom(s: impl Into<String>) -> Self {
        Term::Atom(s.into())
    }

    /// Plain-text view used when a term is handed to an action: strings
    /// and atoms lose their quoting, anything else renders canonically.
    pub fn as_text(&self) -> String {
        match self {
            Term::Atom(s) | Term::Str(s) => s.clone(),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(a) => f.write_str(a),
            Term::Str(s) => write_quoted(f, s),
            Term::List(items) => {
                f.write_char('[')?;
                for (i, t) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_char(',')?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_char(']')
            }
            Term::Param(name, value) => {
                f.write_str("param(")?;
                write_quoted(f, name)?;
                f.write_char(',')?;
                write_quoted(f, value)?;
                f.write_char(')')
            }
        }
    }
}

fn write_quoted(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\r' => f.write_str("\\r")?,
            '\t' => f.write_str("\\t")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}

/// A ground fact: a functor applied to zero or more terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Belief {
    pub functor: String,
    pub args: Vec<Term>,
}

impl Belief {
    pub fn new(functor: impl Into<String>, args: Vec<Term>) -> Self {
        Self {
            functor: functor.into(),
            args,
        }
    }

    pub fn atom(functor: impl Into<String>) -> Self {
        Self::new(functor, Vec::new())
    }
}

impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.functor)?;
        if !self.args.is_empty() {
            f.write_char('(')?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_char(',')?;
                }
                write!(f, "{t}")?;
            }
            f.write_char(')')?;
        }
        Ok(())
    }
}

/// Canonical text of a belief.
pub fn render_belief(belief: &Belief) -> String {
    belief.to_string()
}

pub fn parse_belief(text: &str) -> Result<Belief, ParseError> {
    let mut p = Parser::new(text, false);
    let lit = p.literal()?;
    p.finish()?;
    Ok(lit.into_belief())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Pattern {
    /// `None` is the anonymous variable `_`.
    Var(Option<String>),
    Atom(String),
    Str(String),
    List(Vec<Pattern>),
    Param(Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    fn into_term(self) -> Term {
        match self {
            Pattern::Atom(a) => Term::Atom(a),
            Pattern::Str(s) => Term::Str(s),
            Pattern::List(items) => Term::List(items.into_iter().map(Pattern::into_term).collect()),
            Pattern::Param(n, v) => match (n.into_term(), v.into_term()) {
                (Term::Str(n), Term::Str(v)) => Term::Param(n, v),
                _ => unreachable!("ground param arguments are strings"),
            },
            Pattern::Var(_) => unreachable!("ground parse never yields variables"),
        }
    }

    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            Pattern::Var(Some(v)) => out.push(v.clone()),
            Pattern::List(items) => items.iter().for_each(|p| p.vars(out)),
            Pattern::Param(n, v) => {
                n.vars(out);
                v.vars(out);
            }
            _ => {}
        }
    }
}

/// A belief-shaped pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Literal {
    pub functor: String,
    pub args: Vec<Pattern>,
}

impl Literal {
    fn into_belief(self) -> Belief {
        Belief {
            functor: self.functor,
            args: self.args.into_iter().map(Pattern::into_term).collect(),
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.args.iter().for_each(|p| p.vars(&mut out));
        out
    }
}

pub(crate) fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    let mut p = Parser::new(text, true);
    let lit = p.literal()?;
    p.finish()?;
    Ok(lit)
}

#[cfg(test)]
pub(crate) fn parse_pattern(text: &str) -> Result<Pattern, ParseError> {
    let mut p = Parser::new(text, true);
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub(crate) struct Parser<'a> {
    src: &'a str,
    pos: usize,
    allow_vars: bool,
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str, allow_vars: bool) -> Self {
        Self {
            src,
            pos: 0,
            allow_vars,
        }
    }

    fn err<T>(&self, position: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(found) if found == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(found) => self.err(self.pos, format!("expected '{c}', found '{found}'")),
            None => self.err(self.pos, format!("expected '{c}', found end of input")),
        }
    }

    pub fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(self.pos, format!("unexpected '{c}' after end of term")),
        }
    }

    fn identifier(&mut self) -> &'a str {
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.src.len() - start);
        self.pos += len;
        &self.src[start..start + len]
    }

    pub fn literal(&mut self) -> Result<Literal, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {}
            Some(c) => return self.err(self.pos, format!("expected a functor, found '{c}'")),
            None => return self.err(self.pos, "expected a functor, found end of input"),
        }
        let functor = self.identifier().to_string();
        let mut args = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            args.push(self.term()?);
            while self.peek() == Some(',') {
                self.pos += 1;
                args.push(self.term()?);
            }
            self.expect(')')?;
        }
        Ok(Literal { functor, args })
    }

    pub fn term(&mut self) -> Result<Pattern, ParseError> {
        let start = match self.peek() {
            None => return self.err(self.pos, "expected a term, found end of input"),
            Some(_) => self.pos,
        };
        match self.peek().unwrap() {
            '"' => self.string().map(Pattern::Str),
            '[' => {
                self.pos += 1;
                let mut items = Vec::new();
                if self.peek() == Some(']') {
                    self.pos += 1;
                    return Ok(Pattern::List(items));
                }
                items.push(self.term()?);
                while self.peek() == Some(',') {
                    self.pos += 1;
                    items.push(self.term()?);
                }
                self.expect(']')?;
                Ok(Pattern::List(items))
            }
            c if c.is_ascii_lowercase() => {
                let name = self.identifier();
                if name == "param" && self.peek() == Some('(') {
                    self.pos += 1;
                    let n = self.param_arg()?;
                    self.expect(',')?;
                    let v = self.param_arg()?;
                    self.expect(')')?;
                    Ok(Pattern::Param(Box::new(n), Box::new(v)))
                } else {
                    Ok(Pattern::Atom(name.to_string()))
                }
            }
            c if c.is_ascii_uppercase() || c == '_' => {
                if !self.allow_vars {
                    return self.err(start, "variables are not allowed in beliefs");
                }
                let name = self.identifier();
                Ok(Pattern::Var((name != "_").then(|| name.to_string())))
            }
            c => self.err(start, format!("expected a term, found '{c}'")),
        }
    }

    fn param_arg(&mut self) -> Result<Pattern, ParseError> {
        let at = match self.peek() {
            Some(_) => self.pos,
            None => return self.err(self.pos, "expected a string, found end of input"),
        };
        match self.term()? {
            p @ (Pattern::Str(_) | Pattern::Var(_)) => Ok(p),
            _ => self.err(at, "param arguments must be strings"),
        }
    }

    fn string(&mut self) -> Result<String, ParseError> {
        let open = self.pos;
        self.pos += 1;
        let mut out = String::new();
        let mut chars = self.src[self.pos..].char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                '\\' => {
                    let esc = match chars.next() {
                        Some((_, '"')) => '"',
                        Some((_, '\\')) => '\\',
                        Some((_, 'n')) => '\n',
                        Some((_, 'r')) => '\r',
                        Some((_, 't')) => '\t',
                        Some((_, other)) => {
                            return self.err(self.pos + i, format!("unknown escape '\\{other}'"))
                        }
                        None => break,
                    };
                    out.push(esc);
                }
                c => out.push(c),
            }
        }
        self.err(open, "unterminated string")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LISTING: &str = r#"request(
        "undefined",
        "5b485464-f275-42ab-853e-59514b115359-cf898478",
        "AddObject",
        [
            param("posX","right"),
            param("posY","front"),
            param("objName","Yaskawa MA2010")
        ],
        none)"#;

    #[test]
    fn parses_request_listing() {
        let b = parse_belief(LISTING).unwrap();
        assert_eq!(b.functor, "request");
        assert_eq!(b.args.len(), 5);
        let Term::List(params) = &b.args[3] else { panic!("params list") };
        assert_eq!(params.len(), 3);
        assert_eq!(params[2], Term::Param("objName".into(), "Yaskawa MA2010".into()));
        assert_eq!(
            render_belief(&b),
            r#"request("undefined","5b485464-f275-42ab-853e-59514b115359-cf898478","AddObject",[param("posX","right"),param("posY","front"),param("objName","Yaskawa MA2010")],none)"#
        );
    }

    #[test]
    fn bare_functor() {
        assert_eq!(parse_belief("x").unwrap(), Belief::atom("x"));
        assert_eq!(render_belief(&Belief::atom("x")), "x");
    }

    #[test]
    fn empty_param_list() {
        let b = Belief::new(
            "request",
            vec![Term::str("a"), Term::str("b"), Term::str("C"), Term::List(vec![]), Term::atom("none")],
        );
        let text = render_belief(&b);
        assert_eq!(text, r#"request("a","b","C",[],none)"#);
        assert_eq!(parse_belief(&text).unwrap(), b);
    }

    #[test]
    fn unbalanced_reports_position() {
        let err = parse_belief("request(").unwrap_err();
        assert_eq!(err.position, 8);
        assert_eq!(parse_belief("x(\"a\"").unwrap_err().position, 5);
        assert_eq!(parse_belief("x y").unwrap_err().position, 2);
        assert_eq!(parse_belief("x(\"abc").unwrap_err().position, 2);
        assert_eq!(parse_belief("x(\"a\\q\")").unwrap_err().position, 4);
        assert_eq!(parse_belief("").unwrap_err().position, 0);
        assert_eq!(parse_belief("Foo").unwrap_err().position, 0);
    }

    #[test]
    fn variables_only_in_patterns() {
        assert_eq!(parse_belief("x(Y)").unwrap_err().position, 2);
        let lit = parse_literal("request(_, S, \"AddObject\", P, _)").unwrap();
        assert_eq!(lit.vars(), ["S", "P"]);
        assert_eq!(
            parse_pattern("param(\"posX\", X)").unwrap(),
            Pattern::Param(Box::new(Pattern::Str("posX".into())), Box::new(Pattern::Var(Some("X".into()))))
        );
        assert!(parse_pattern("param(a, X)").is_err());
    }

    #[test]
    fn escapes_round_trip() {
        let b = Belief::new("say", vec![Term::str("a \"quoted\"\\ line\nnext\ttab")]);
        let text = render_belief(&b);
        assert_eq!(text, r#"say("a \"quoted\"\\ line\nnext\ttab")"#);
        assert_eq!(parse_belief(&text).unwrap(), b);
    }
}
