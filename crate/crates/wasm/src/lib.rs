//! In-browser demo. The full pipeline (NLU, agent, wire encoding, scene)
//! runs inside the page on the built-in workspace; JavaScript only draws.
//!
//! Every method returns a JSON string so the same API is usable from
//! native tests.

use serde::Serialize;
use serde_json::json;
use vesna_core::scene::Placement;
use vesna_core::store::default_workspace;
use vesna_core::LocalSession;
use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct Demo {
    session: LocalSession,
}

#[derive(Serialize)]
struct Preview {
    fits: bool,
    ref_name: Option<String>,
    center: Option<[f64; 3]>,
    error: Option<String>,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Demo {
        Demo {
            session: LocalSession::from_workspace(default_workspace()),
        }
    }

    /// Runs one utterance through the pipeline. Returns the turn as JSON:
    /// reply, status, matched intent and parameters, request belief and
    /// scene version.
    pub fn chat(&mut self, text: &str) -> String {
        serde_json::to_string(&self.session.chat(text)).expect("turn json")
    }

    /// Classifies without acting: intent, parameters and confidence.
    pub fn classify(&self, text: &str) -> String {
        let refs = self.session.service().ref_names();
        serde_json::to_string(&self.session.vesna().classify(text, &refs)).expect("match json")
    }

    /// Where `prototype` would land for the given position tokens, without
    /// changing the scene.
    pub fn preview(&self, prototype: &str, pos_x: &str, pos_y: &str) -> String {
        let svc = self.session.service();
        let mut scene = svc.scene().clone();
        let p = Placement::from_tokens(pos_x, pos_y).and_then(|pl| scene.add_object(svc.catalog(), prototype, &pl));
        let preview = match p {
            Ok(r) => Preview {
                fits: true,
                center: scene.get(&r).map(|o| o.center),
                ref_name: Some(r),
                error: None,
            },
            Err(e) => Preview {
                fits: false,
                ref_name: None,
                center: None,
                error: Some(e.to_string()),
            },
        };
        serde_json::to_string(&preview).expect("preview json")
    }

    /// Current scene snapshot as JSON.
    pub fn scene(&self) -> String {
        serde_json::to_string(&self.session.snapshot()).expect("snapshot json")
    }

    /// Catalog names and the position vocabulary, for building menus.
    pub fn vocabulary(&self) -> String {
        let names: Vec<&str> = self.session.service().catalog().names().collect();
        json!({
            "prototypes": names,
            "columns": ["left", "center", "right"],
            "rows": ["front", "center", "back"],
            "relations": ["left of", "right of", "behind", "in front of"],
        })
        .to_string()
    }

    pub fn reset(&mut self) {
        *self = Demo::new();
    }
}

impl Default for Demo {
    fn default() -> Self {
        Self::new()
    }
}
