use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use vesna_core::nlu::{NluConfig, ValueDomain};
use vesna_core::store::default_workspace;

const PEOPLE: [&str; 3] = ["Bob", "Ada Lovelace", "Dr Smith"];

fn domain_values(nlu: &NluConfig, entity: &str, catalog: &[String], refs: &[String]) -> Vec<String> {
    match nlu.entity(entity).unwrap().domain {
        ValueDomain::CatalogName => catalog.to_vec(),
        ValueDomain::ReferenceName => refs.to_vec(),
        ValueDomain::GridColumnToken => ["left", "center", "right"].map(String::from).to_vec(),
        ValueDomain::GridRowToken => ["front", "center", "back"].map(String::from).to_vec(),
        ValueDomain::RelativeRelationToken => ["left of", "right of", "behind", "in front of"].map(String::from).to_vec(),
        ValueDomain::FreeText => PEOPLE.map(String::from).to_vec(),
    }
}

/// Every instantiation of every training phrase, over the whole catalog.
/// intent, phrase, expected params
type Instance = (String, String, Vec<(String, String)>);

fn instantiations(nlu: &NluConfig, catalog: &[String], refs: &[String]) -> Vec<Instance> {
    let mut out = Vec::new();
    for intent in nlu.intents() {
        for pi in 0..intent.phrases().len() {
            let slots = intent.phrase_slots(pi);
            let choices: Vec<Vec<String>> = slots.iter().map(|(e, _)| domain_values(nlu, e, catalog, refs)).collect();
            let total: usize = choices.iter().map(Vec::len).product();
            for mut n in 0..total {
                let pick: Vec<String> = choices
                    .iter()
                    .map(|c| {
                        let v = c[n % c.len()].clone();
                        n /= c.len();
                        v
                    })
                    .collect();
                let mut k = 0;
                let text = intent.instantiate_phrase(pi, |_, _| {
                    k += 1;
                    pick[k - 1].clone()
                });
                let expected = slots.iter().map(|(_, p)| p.clone()).zip(pick).collect();
                out.push((intent.name.clone(), text, expected));
            }
        }
    }
    out
}

#[test]
fn every_training_phrase_classifies_to_its_intent() {
    let ws = default_workspace();
    let catalog: Vec<String> = ws.catalog.names().map(String::from).collect();
    let mut refs = catalog.clone();
    refs.push("Pallet#2".into());
    let cases = instantiations(&ws.nlu, &catalog, &refs);
    assert!(cases.len() > 1000, "{} cases", cases.len());
    for (intent, text, expected) in &cases {
        let m = ws.nlu.classify(&catalog, &refs, text);
        assert_eq!(&m.intent, intent, "{text:?}");
        assert!(m.confidence >= ws.nlu.confidence_threshold(), "{text:?}: {}", m.confidence);
        for (p, v) in expected {
            assert_eq!(m.params.get(p), Some(v), "{text:?}: param {p}");
        }
        assert_eq!(m.params.len(), expected.len(), "{text:?}");
    }
}

#[test]
fn case_and_punctuation_do_not_matter() {
    let ws = default_workspace();
    let catalog: Vec<String> = ws.catalog.names().map(String::from).collect();
    let m = ws.nlu.classify(&catalog, &[] as &[String], "ADD a yaskawa ma2010, in FRONT on the right!");
    assert_eq!(m.intent, "AddObject");
    let got: Vec<(&str, &str)> = m.params.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    assert_eq!(got, [("posX", "right"), ("posY", "front"), ("objName", "Yaskawa MA2010")]);
}

pub fn garbage(n: usize, seed: u64) -> Vec<String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out: Vec<String> = [
        "",
        "   ",
        "?!?!",
        "asdf qwer zxcv",
        "the the the the",
        "add",
        "remove",
        "add a Unobtainium in front on the right",
        "remove the Ghost",
        "put a Pallet somewhere nice",
    ]
    .map(String::from)
    .to_vec();
    while out.len() < n {
        let words = rng.random_range(1..8);
        let s: Vec<String> = (0..words)
            .map(|_| {
                let len = rng.random_range(1..9);
                (0..len).map(|_| rng.random_range(b'a'..=b'z') as char).collect()
            })
            .collect();
        out.push(s.join(" "));
    }
    out
}

#[test]
fn garbage_falls_back() {
    let ws = default_workspace();
    let catalog: Vec<String> = ws.catalog.names().map(String::from).collect();
    for g in garbage(50, 7) {
        let m = ws.nlu.classify(&catalog, &[] as &[String], &g);
        assert!(m.is_fallback(), "{g:?} classified as {}", m.intent);
        assert_eq!(m.intent, ws.nlu.fallback_intent());
    }
}

#[test]
fn classification_is_deterministic() {
    let ws = default_workspace();
    let catalog: Vec<String> = ws.catalog.names().map(String::from).collect();
    let refs = catalog.clone();
    for (_, text, _) in instantiations(&ws.nlu, &catalog, &refs).iter().step_by(37) {
        let a = ws.nlu.classify(&catalog, &refs, text);
        let b = ws.nlu.clone().classify(&catalog, &refs, text);
        assert_eq!(a, b);
    }
}
