//! Scene-command wire format spoken between the agent and the scene
//! listener.
//!
//! Requests are URL paths:
//!
//! | command | path                         |
//! |---------|------------------------------|
//! | add     | `/{objName}/{posX}/{posY}`   |
//! | remove  | `/remove/{refName}`          |
//! | list    | `/list`                      |
//!
//! Every segment is percent-encoded over the RFC 3986 unreserved set.
//! Responses are plain text, `done:<payload>` or `error:<code>:<message>`.

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

use super::ProtocolError;
use crate::scene::SceneError;

/// Everything but ALPHA / DIGIT / "-" / "." / "_" / "~".
const SEGMENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SceneCommandRequest {
    Add {
        obj_name: String,
        pos_x: String,
        pos_y: String,
    },
    Remove {
        ref_name: String,
    },
    List,
}

fn check_field(what: &str, value: &str) -> Result<(), ProtocolError> {
    if value.is_empty() {
        return Err(ProtocolError::Malformed(format!("{what} is empty")));
    }
    if value.contains(['/', '\\']) {
        return Err(ProtocolError::Malformed(format!("{what} contains a path separator")));
    }
    Ok(())
}

impl SceneCommandRequest {
    pub fn add(obj_name: impl Into<String>, pos_x: impl Into<String>, pos_y: impl Into<String>) -> Self {
        Self::Add {
            obj_name: obj_name.into(),
            pos_x: pos_x.into(),
            pos_y: pos_y.into(),
        }
    }

    pub fn remove(ref_name: impl Into<String>) -> Self {
        Self::Remove {
            ref_name: ref_name.into(),
        }
    }

    pub fn verb(&self) -> &'static str {
        match self {
            Self::Add { .. } => "add",
            Self::Remove { .. } => "remove",
            Self::List => "list",
        }
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        match self {
            Self::Add { obj_name, pos_x, pos_y } => {
                check_field("object name", obj_name)?;
                check_field("posX", pos_x)?;
                check_field("posY", pos_y)
            }
            Self::Remove { ref_name } => check_field("reference name", ref_name),
            Self::List => Ok(()),
        }
    }

    pub fn encode(&self) -> String {
        let enc = |s: &str| utf8_percent_encode(s, SEGMENT).to_string();
        match self {
            Self::Add { obj_name, pos_x, pos_y } => {
                format!("/{}/{}/{}", enc(obj_name), enc(pos_x), enc(pos_y))
            }
            Self::Remove { ref_name } => format!("/remove/{}", enc(ref_name)),
            Self::List => "/list".to_string(),
        }
    }

    pub fn decode(path: &str) -> Result<Self, ProtocolError> {
        let rest = path
            .strip_prefix('/')
            .ok_or_else(|| ProtocolError::Malformed(format!("path '{path}' must start with '/'")))?;
        let segments = rest
            .split('/')
            .map(decode_segment)
            .collect::<Result<Vec<_>, _>>()?;
        let req = match segments.as_slice() {
            [one] if one == "list" => Self::List,
            [verb, name] if verb == "remove" => Self::Remove {
                ref_name: name.clone(),
            },
            [obj, x, y] => Self::Add {
                obj_name: obj.clone(),
                pos_x: x.clone(),
                pos_y: y.clone(),
            },
            _ => {
                return Err(ProtocolError::Malformed(format!(
                    "path '{path}' is not an add, remove or list command"
                )))
            }
        };
        req.validate()?;
        Ok(req)
    }
}

fn decode_segment(raw: &str) -> Result<String, ProtocolError> {
    let bytes = raw.as_bytes();
    for (i, b) in bytes.iter().enumerate() {
        if *b == b'%' && !bytes.get(i + 1..i + 3).is_some_and(|h| h.iter().all(u8::is_ascii_hexdigit)) {
            return Err(ProtocolError::Malformed(format!("bad percent-encoding in '{raw}'")));
        }
    }
    let decoded = percent_decode_str(raw)
        .decode_utf8()
        .map_err(|_| ProtocolError::Malformed(format!("segment '{raw}' is not UTF-8")))?;
    if decoded.is_empty() {
        return Err(ProtocolError::Malformed("empty path segment".into()));
    }
    Ok(decoded.into_owned())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SceneCommandResponse {
    /// Ref-name for add/remove; `", "`-joined ref-names for list.
    Done(String),
    Error { code: String, message: String },
}

impl SceneCommandResponse {
    pub fn error(code: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Error {
            code: code.into(),
            message: message.into(),
        }
    }

    pub fn is_done(&self) -> bool {
        matches!(self, Self::Done(_))
    }

    /// HTTP status the scene listener answers with.
    pub fn status(&self) -> u16 {
        match self {
            Self::Done(_) => 200,
            Self::Error { code, .. } => match code.as_str() {
                "occupied" | "out_of_bounds" => 409,
                "not_found" | "unknown_anchor" | "unknown_prototype" => 404,
                _ => 400,
            },
        }
    }

    pub fn to_body(&self) -> String {
        match self {
            Self::Done(payload) => format!("done:{payload}"),
            Self::Error { code, message } => format!("error:{code}:{message}"),
        }
    }

    pub fn parse_body(body: &str) -> Result<Self, ProtocolError> {
        if let Some(payload) = body.strip_prefix("done:") {
            return Ok(Self::Done(payload.to_string()));
        }
        if let Some(rest) = body.strip_prefix("error:") {
            if let Some((code, message)) = rest.split_once(':') {
                if !code.is_empty() {
                    return Ok(Self::error(code, message));
                }
            }
        }
        Err(ProtocolError::Malformed(format!("unrecognised scene response '{body}'")))
    }
}

impl From<&SceneError> for SceneCommandResponse {
    fn from(e: &SceneError) -> Self {
        Self::error(e.code(), e.to_string())
    }
}

impl From<&ProtocolError> for SceneCommandResponse {
    fn from(e: &ProtocolError) -> Self {
        Self::error(e.code(), e.to_string())
    }
}
