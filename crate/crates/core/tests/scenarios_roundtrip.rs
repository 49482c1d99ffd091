use std::collections::BTreeMap;

use pcc_core::scenarios::{
    execute, fixture_texts, library, parse_report, parse_scenario, render_document, render_report, ComplexLit, Format,
    ObservableDoc, QueryDoc, QueryKind, RunOptions, Scalar, ScenarioDoc,
};
use pcc_core::CMatrix;
use proptest::prelude::*;

fn fixture(stem: &str) -> &'static str {
    fixture_texts().iter().find(|(f, _)| *f == stem).unwrap().1
}

fn e(n: usize, i: usize) -> Vec<ComplexLit> {
    (0..n)
        .map(|j| ComplexLit::from(if j + 1 == i { 1.0 } else { 0.0 }))
        .collect()
}

fn layout(n: usize, plus: &[usize], minus: &[usize]) -> ObservableDoc {
    ObservableDoc::Eigenspaces {
        eigenvalues: vec![Scalar::from(1.0), Scalar::from(-1.0)],
        eigenspaces: vec![
            plus.iter().map(|&i| e(n, i)).collect(),
            minus.iter().map(|&i| e(n, i)).collect(),
        ],
    }
}

#[test]
fn dim4_fixture_is_reconstructed() {
    let text = fixture("dim4_amb");
    let s = parse_scenario(text).unwrap();
    assert_eq!(render_document(&s.doc), text);

    // oracle: the 2/2 layouts written out directly
    let a = layout(4, &[1, 2], &[3, 4]);
    let b = layout(4, &[1, 3], &[2, 4]);
    assert_eq!(s.doc.observables["A"], a);
    assert_eq!(s.doc.observables["B"], b);
    assert_eq!(s.doc.dimension, Some(4));
    let pa = s.observables["A"].projector(1.0).unwrap();
    assert!(pa.approx_eq(&CMatrix::diag_real(&[1.0, 1.0, 0.0, 0.0]), 0.0));
    let pb = s.observables["B"].projector(-1.0).unwrap();
    assert!(pb.approx_eq(&CMatrix::diag_real(&[0.0, 1.0, 0.0, 1.0]), 0.0));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let want = [0.0, r, r, 0.0];
    for (c, w) in s.states["psi"].as_slice().iter().zip(want) {
        assert!((c - pcc_core::C64::new(w, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn parse_render_parse_is_idempotent() {
    for (file, text) in fixture_texts() {
        let once = parse_scenario(text).unwrap();
        let rendered = render_document(&once.doc);
        let twice = parse_scenario(&rendered).unwrap();
        assert_eq!(once.doc, twice.doc, "{file}");
        assert_eq!(render_document(&twice.doc), rendered, "{file}");
    }
}

#[test]
fn loose_input_canonicalizes() {
    let loose = r#"{"queries": [{"expect": {"probability": 0.5}, "state": "s", "value": 1,
        "observable": "Z", "kind": "born"}], "states": {"s": ["0.70710678118654752440", [0, "0.70710678118654752440"]]},
        "observables": {"Z": {"matrix": [[1, 0], [0, -1]]}}, "dimension": 2, "name": "loose"}"#;
    let s = parse_scenario(loose).unwrap();
    let canonical = render_document(&s.doc);
    assert!(canonical.starts_with("{\n  \"name\": \"loose\",\n  \"dimension\": 2,\n"));
    assert!(canonical.contains("\"0.70710678118654752440\""));
    assert_eq!(render_document(&parse_scenario(&canonical).unwrap().doc), canonical);
    assert!(execute(&s, RunOptions::default()).success());
}

#[test]
fn reports_round_trip_for_every_fixture() {
    for s in library().unwrap().values() {
        let report = execute(s, RunOptions::default());
        let json = render_report(&report, Format::Json);
        let back = parse_report(&json).unwrap();
        assert_eq!(back, report, "{}", s.name());
        assert_eq!(render_report(&back, Format::Json), json);
        assert_eq!(render_report(&back, Format::Text), render_report(&report, Format::Text));
    }
}

#[test]
fn reports_do_not_carry_negative_zero() {
    for s in library().unwrap().values() {
        let json = render_report(&execute(s, RunOptions::default()), Format::Json);
        assert!(!json.contains("-0.0,") && !json.contains("-0.0\n"), "{}", s.name());
    }
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        (-1e6f64..1e6).prop_map(Scalar::Number),
        any::<f64>()
            .prop_filter("finite", |x| x.is_finite())
            .prop_map(Scalar::Number),
        (-999_999i64..999_999, 0u32..12).prop_map(|(m, k)| Scalar::Text(format!("{}e-{k}", m))),
    ]
}

fn complex() -> impl Strategy<Value = ComplexLit> {
    prop_oneof![
        scalar().prop_map(ComplexLit::Real),
        (scalar(), scalar()).prop_map(|(a, b)| ComplexLit::Pair([a, b]))
    ]
}

fn document() -> impl Strategy<Value = ScenarioDoc> {
    (
        1usize..4,
        prop::collection::vec(prop::collection::vec(complex(), 1..4), 0..3),
        any::<u64>(),
    )
        .prop_map(|(n, states, seed)| {
            let mut observables = BTreeMap::new();
            observables.insert(
                "Z".to_string(),
                ObservableDoc::Eigenspaces {
                    eigenvalues: (0..n).map(|k| Scalar::from(k as f64)).collect(),
                    eigenspaces: (1..=n).map(|i| vec![e(n, i)]).collect(),
                },
            );
            let states: BTreeMap<String, Vec<ComplexLit>> = states
                .into_iter()
                .enumerate()
                .map(|(i, v)| (format!("s{i}"), v))
                .collect();
            let queries = states
                .keys()
                .map(|k| QueryDoc {
                    label: None,
                    query: QueryKind::Born {
                        observable: "Z".into(),
                        value: 0.0,
                        state: k.clone(),
                    },
                    expect: None,
                })
                .collect();
            ScenarioDoc {
                name: "generated".into(),
                description: None,
                dimension: Some(n),
                factors: None,
                locals: BTreeMap::new(),
                observables,
                states,
                queries,
                tolerance: None,
                seed: Some(seed),
            }
        })
}

proptest! {
    #[test]
    fn documents_round_trip(doc in document()) {
        let text = render_document(&doc);
        let back: ScenarioDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(render_document(&back), text);
    }
}
