use serde_json::Value;
use vesna_wasm::Demo;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn chat_updates_scene() {
    let mut d = Demo::new();
    let t = parse(d.chat("Add a Yaskawa MA2010 in front on the right"));
    assert_eq!(t["status"], "fulfilled");
    assert_eq!(t["scene_version"], 1);
    assert_eq!(t["match"]["intent"], "AddObject");
    let s = parse(d.scene());
    assert_eq!(s["objects"][0]["center"], serde_json::json!([10.0, 1.0, -10.0]));
    d.reset();
    assert_eq!(parse(d.scene())["objects"].as_array().unwrap().len(), 0);
}

#[test]
fn classify_has_no_side_effects() {
    let d = Demo::new();
    let m = parse(d.classify("remove the Pallet"));
    // no Pallet in the scene yet, so the reference cannot bind
    assert_eq!(m["intent"], "Fallback");
    let m = parse(d.classify("what is in the scene"));
    assert_eq!(m["intent"], "ListObjects");
    assert_eq!(m["confidence"], 1.0);
    assert_eq!(parse(d.scene())["scene_version"], 0);
}

#[test]
fn preview_does_not_place() {
    let mut d = Demo::new();
    let p = parse(d.preview("Pallet", "center", "center"));
    assert_eq!(p["fits"], true);
    assert_eq!(p["ref_name"], "Pallet");
    d.chat("Add a Pallet in center on the center");
    let p = parse(d.preview("Workbench", "center", "center"));
    assert_eq!(p["fits"], false);
    assert_eq!(p["error"], "the position is already taken by Pallet");
    let p = parse(d.preview("Workbench", "behind", "Pallet"));
    assert_eq!(p["center"], serde_json::json!([0.0, 0.45, 1.7]));
    assert_eq!(parse(d.scene())["objects"].as_array().unwrap().len(), 1);
    assert_eq!(parse(d.vocabulary())["prototypes"].as_array().unwrap().len(), 6);
}
