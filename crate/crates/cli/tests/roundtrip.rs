//! Canonical emission is a fixpoint of parsing.

use std::fs;
use std::path::Path;

use netchain::parse;
use proptest::prelude::*;
use serde_json::{json, Value};

fn assert_fixpoint(text: &str) {
    let doc = parse(text).unwrap();
    let canonical = doc.to_canonical_string();
    let again = parse(&canonical).unwrap();
    assert_eq!(again, doc);
    assert_eq!(again.to_canonical_string(), canonical);
}

#[test]
fn fixtures_round_trip() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        assert_fixpoint(&fs::read_to_string(&path).unwrap());
    }
}

fn number() -> impl Strategy<Value = Value> {
    prop_oneof![
        (-1000i64..1000).prop_map(Value::from),
        (-50i64..50, 1i64..12).prop_map(|(p, q)| Value::from(format!("{p}/{q}"))),
        any::<f64>().prop_filter("finite", |x| x.is_finite()).prop_map(|x| json!(x)),
    ]
}

fn series(samples: usize) -> impl Strategy<Value = Value> {
    prop_oneof![number(), prop::collection::vec(number(), samples).prop_map(Value::Array)]
}

fn vector_series(n: usize, samples: usize) -> impl Strategy<Value = Value> {
    let v = move || prop::collection::vec(number(), n).prop_map(Value::Array);
    prop_oneof![v(), prop::collection::vec(v(), samples).prop_map(Value::Array)]
}

prop_compose! {
    fn document()(
        nodes in 1usize..6,
        samples in 3usize..5,
        seed in prop::collection::vec(any::<(bool, bool, usize, usize)>(), 8),
    )(
        masses in prop::collection::vec(prop::option::of(series(samples)), nodes),
        positions in prop::collection::vec(prop::option::of(vector_series(2, samples)), nodes),
        currents in prop::collection::vec(prop::option::of(series(samples)), seed.len()),
        nodes in Just(nodes),
        samples in Just(samples),
        seed in Just(seed),
    ) -> String {
        let node_list: Vec<Value> = (0..nodes)
            .map(|i| {
                let mut m = serde_json::Map::new();
                m.insert("id".into(), json!(format!("N{i}")));
                if let Some(x) = &masses[i] {
                    m.insert("mass".into(), x.clone());
                }
                if let Some(x) = &positions[i] {
                    m.insert("pos".into(), x.clone());
                }
                Value::Object(m)
            })
            .collect();
        let mut branches = Vec::new();
        for (k, &(keep, _, a, b)) in seed.iter().enumerate() {
            let (a, b) = (a % nodes, b % nodes);
            if !keep || a == b {
                continue;
            }
            let mut m = serde_json::Map::new();
            m.insert("id".into(), json!(format!("E{k}")));
            m.insert("tail".into(), json!(format!("N{a}")));
            m.insert("head".into(), json!(format!("N{b}")));
            if let Some(c) = &currents[k] {
                m.insert("current".into(), c.clone());
            }
            branches.push(Value::Object(m));
        }
        let doc = json!({
            "dimension": 2,
            "signal": {"dt": 0.125, "samples": samples},
            "nodes": node_list,
            "branches": branches,
            "analyses": ["kcl", {"command": "statics", "tolerance": 1e-6, "t0": 1}],
        });
        serde_json::to_string(&doc).unwrap()
    }
}

proptest! {
    #[test]
    fn parse_emit_parse_is_idempotent(text in document()) {
        assert_fixpoint(&text);
    }
}
