use proptest::prelude::*;
use vesna_core::agent::{parse_belief, render_belief, Belief, RequestBelief, Term};
use vesna_core::protocol::FulfillmentRequest;

fn atom() -> impl Strategy<Value = String> {
    "[a-z][a-zA-Z0-9_]{0,8}"
}

fn text() -> impl Strategy<Value = String> {
    prop_oneof![
        "[ -~]{0,12}",
        ".{0,12}",
        Just("say \"hi\"\\n".to_string()),
    ]
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        atom().prop_map(Term::Atom),
        text().prop_map(Term::Str),
        (text(), text()).prop_map(|(n, v)| Term::Param(n, v)),
    ];
    leaf.prop_recursive(3, 24, 5, |inner| prop::collection::vec(inner, 0..5).prop_map(Term::List))
}

fn belief() -> impl Strategy<Value = Belief> {
    (atom(), prop::collection::vec(term(), 0..6)).prop_map(|(f, args)| Belief::new(f, args))
}

/// Renders with random whitespace between tokens, from an independent
/// writer so the parser is checked against a second formatting.
fn spaced(b: &Belief, ws: &mut impl Iterator<Item = &'static str>) -> String {
    fn quote(s: &str) -> String {
        let mut o = String::from("\"");
        for c in s.chars() {
            match c {
                '"' => o.push_str("\\\""),
                '\\' => o.push_str("\\\\"),
                '\n' => o.push_str("\\n"),
                '\r' => o.push_str("\\r"),
                '\t' => o.push_str("\\t"),
                c => o.push(c),
            }
        }
        o.push('"');
        o
    }
    fn t(term: &Term, ws: &mut dyn Iterator<Item = &'static str>) -> String {
        let mut w = || ws.next().unwrap_or("");
        match term {
            Term::Atom(a) => a.clone(),
            Term::Str(s) => quote(s),
            Term::Param(n, v) => format!("param{}({}{}{},{}{}{})", w(), w(), quote(n), w(), w(), quote(v), w()),
            Term::List(items) => {
                let parts: Vec<String> = items.iter().map(|i| t(i, ws)).collect();
                let mut w = || ws.next().unwrap_or("");
                format!("[{}{}{}]", w(), parts.join(&format!("{},{}", w(), w())), w())
            }
        }
    }
    let mut out = format!("{}{}", ws.next().unwrap_or(""), b.functor);
    if !b.args.is_empty() {
        let parts: Vec<String> = b.args.iter().map(|a| format!("{}{}{}", ws.next().unwrap_or(""), t(a, ws), ws.next().unwrap_or(""))).collect();
        out.push('(');
        out.push_str(&parts.join(","));
        out.push(')');
    }
    out.push_str(ws.next().unwrap_or(""));
    out
}

#[test]
fn request_listing_byte_for_byte() {
    let req = RequestBelief::new(
        "undefined",
        "5b485464-f275-42ab-853e-59514b115359-cf898478",
        "AddObject",
        [("posX", "right"), ("posY", "front"), ("objName", "Yaskawa MA2010")].map(|(k, v)| (k.to_string(), v.to_string())),
    );
    assert_eq!(
        render_belief(&req.to_belief()),
        r#"request("undefined","5b485464-f275-42ab-853e-59514b115359-cf898478","AddObject",[param("posX","right"),param("posY","front"),param("objName","Yaskawa MA2010")],none)"#
    );
}

#[test]
fn webhook_maps_field_for_field() {
    let body = r#"{"responseId":"r-1","session":"sess","queryResult":{"queryText":"Add a Pallet in front on the left",
        "intent":{"displayName":"AddObject"},"parameters":{"posX":"left","posY":"front","objName":"Pallet"}}}"#;
    let req = FulfillmentRequest::from_json(body).unwrap();
    assert_eq!(
        render_belief(&req.to_request_belief().to_belief()),
        r#"request("undefined","sess","AddObject",[param("posX","left"),param("posY","front"),param("objName","Pallet")],none)"#
    );
}

#[test]
fn error_positions() {
    assert_eq!(parse_belief("request(").unwrap_err().position, 8);
    assert_eq!(parse_belief("").unwrap_err().position, 0);
    assert_eq!(parse_belief("x(A)").unwrap_err().position, 2);
    assert!(parse_belief("x()").is_err());
    assert!(parse_belief("x(a) y").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parse_inverts_render(b in belief()) {
        let text = render_belief(&b);
        prop_assert_eq!(parse_belief(&text).unwrap(), b);
    }

    #[test]
    fn whitespace_is_insignificant(b in belief(), ws in prop::collection::vec(prop::sample::select(vec!["", " ", "\n  ", "\t"]), 0..200)) {
        let mut it = ws.into_iter();
        let text = spaced(&b, &mut it);
        prop_assert_eq!(parse_belief(&text).unwrap(), b);
    }

    #[test]
    fn request_beliefs_round_trip(
        session in ".{0,20}",
        intent in "[A-Z][a-zA-Z]{0,10}",
        params in prop::collection::vec(("[a-z][A-Za-z]{0,6}", ".{0,10}"), 0..5),
    ) {
        let req = RequestBelief::new("undefined", &session, &intent, params.clone());
        let parsed = parse_belief(&render_belief(&req.to_belief())).unwrap();
        prop_assert_eq!(RequestBelief::from_belief(&parsed).unwrap(), req);
    }
}
