use proptest::prelude::*;

use super::*;
use crate::coxeter::{ambient_form, parse_diagram, parse_diagram_named};
use crate::mqfield::parse_element_in;

fn tower(rads: &[i64]) -> FieldTower {
    FieldTower::new(rads).unwrap()
}

fn form(rads: &[i64], diag: &[&str]) -> QuadraticForm {
    let t = tower(rads);
    let d = diag.iter().map(|s| parse_element_in(s, &t).unwrap()).collect();
    QuadraticForm::new(&t, d).unwrap()
}

fn corpus(name: &str) -> CoxeterDiagram {
    let path = format!("{}/../../corpus/{name}.cox", env!("CARGO_MANIFEST_DIR"));
    parse_diagram_named(&std::fs::read_to_string(path).unwrap(), name).unwrap()
}

const DELTA5: &str = "dim 5\nvertices 6\nedge 1 2 3\nedge 2 3 4\nedge 3 4 3\nedge 4 5 3\nedge 5 6 3\nedge 6 1 3\n";

#[test]
fn ladder_on_rational_triangles() {
    // ideal triangle group (3,3,∞): integral cyclic products
    let d = parse_diagram("dim 2\nvertices 3\nedge 1 2 3\nedge 2 3 3\nedge 1 3 inf\n").unwrap();
    let r = classify(&d).unwrap();
    assert_eq!(r.trace_field.degree, 1);
    assert_eq!(r.verdict, Verdict::Arithmetic);
    assert!(r.quasi_arithmetic && r.arithmetic);

    // an ultraparallel weight 5/4 breaks integrality but not admissibility
    let d = parse_diagram("dim 2\nvertices 3\nedge 1 2 3\nedge 2 3 3\nedge 1 3 w 5/4\n").unwrap();
    let r = classify(&d).unwrap();
    assert_eq!(r.verdict, Verdict::QuasiArithmetic);
    assert!(r.witnesses.iter().any(|w| w.contains("not integral")));
}

#[test]
fn delta5_end_to_end() {
    let r = classify(&parse_diagram_named(DELTA5, "delta5").unwrap()).unwrap();
    assert_eq!(r.trace_field.radicands, vec![2]);
    assert_eq!(r.verdict, Verdict::PseudoArithmeticFirstType);
    assert!(!r.quasi_arithmetic && !r.arithmetic);
    assert_eq!(r.descent_field.degree, 1);
    let m = r.model.as_ref().unwrap();
    assert_eq!(m.a, 1);
    assert_eq!(m.diagonal, vec!["-1", "1", "1", "1", "1", "1"]);
    let lasts: Vec<&str> = r.subordinated.iter().map(|s| s.last.as_str()).collect();
    assert_eq!(lasts, vec!["1", "2"]);
    assert_eq!(r.transfers.len(), 1);
    assert!(r.transfers[0].hyperbolic);
}

#[test]
fn stored_model_recomputes() {
    for name in ["delta5", "fig3a", "fig3e"] {
        let d = corpus(name);
        let g = gram_matrix(&d).unwrap();
        let k = trace_field(&g);
        let f = ambient_form(&g, &k).unwrap().form;
        let r = classify(&d).unwrap();
        let m = r.model.unwrap();
        let q = FieldTower::rational();
        let model = QuadraticForm::standard_with_last(&q, d.n, &FieldElement::from_int(&q, m.a as i64)).unwrap();
        assert!(is_admissible(&model, d.n).unwrap());
        let lambda = parse_element_in(&m.scale, &k).unwrap();
        assert!(globally_isometric(&f.scaled(&lambda).unwrap(), &model.extend_to(&k).unwrap()), "{name}");
    }
}

#[test]
fn descent_examples() {
    let d = descend_field(&form(&[2], &["1", "sqrt(2)"]), Execution::Sequential).unwrap();
    assert_eq!(d.k, tower(&[2]));
    assert!(!d.transfers[0].hyperbolic);

    let d = descend_field(&form(&[2, 3], &["-1", "1", "1"]), Execution::Sequential).unwrap();
    assert!(d.k.is_rational());
    assert_eq!(d.transfers.len(), 3);
    assert!(d.transfers.iter().all(|t| t.hyperbolic));

    // defined over Q(√2) but not over Q
    let d = descend_field(&form(&[2, 3], &["1", "sqrt(2)", "1"]), Execution::Sequential).unwrap();
    assert_eq!(d.k, tower(&[2]));
}

#[test]
fn execution_modes_agree() {
    let f = form(&[2, 3, 5], &["-1", "1", "sqrt(6)", "1 + sqrt(5)"]);
    let a = descend_field(&f, Execution::Sequential).unwrap();
    let b = descend_field(&f, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn model_search() {
    let q = FieldTower::rational();
    // ⟨-1,1,1,3⟩ over Q(√3) is ⟨-1,1,1,1⟩
    let f = form(&[3], &["-1", "1", "1", "3"]);
    let m = find_admissible_model(&f, &q, 3, 30).unwrap().unwrap();
    assert_eq!(m.a, 1);
    let f = form(&[2], &["-1", "1", "1", "7"]);
    assert_eq!(find_admissible_model(&f, &q, 3, 30).unwrap().unwrap().a, 7);
    assert_eq!(determinant_candidates(&f), vec![7, 14]);
    // wrong signature at the conjugate: no rational model can match
    let f = form(&[2], &["-1", "1", "1", "sqrt(2)"]);
    assert_eq!(find_admissible_model(&f, &q, 3, 30).unwrap(), None);
    assert!(find_admissible_model(&f, &tower(&[3]), 3, 30).is_err());
}

#[test]
fn subordinated_examples() {
    let q = FieldTower::rational();
    let g = QuadraticForm::standard_with_last(&q, 3, &FieldElement::from_int(&q, 3)).unwrap();
    let subs = subordinated_forms(&g, &tower(&[2, 5]), 3).unwrap();
    let lasts: Vec<String> = subs.iter().map(|s| s.diagonal()[3].to_string()).collect();
    assert_eq!(lasts, vec!["3", "6", "15", "30"]);
    for s in &subs {
        assert!(is_admissible(s, 3).unwrap());
    }
    let bad = form(&[], &["1", "1", "1", "1"]);
    assert_eq!(subordinated_forms(&bad, &tower(&[2]), 3), Err(Error::NotAdmissible));
    assert_eq!(relative_basis(&tower(&[2, 3]), &tower(&[6])), vec![2]);
}

#[test]
fn basis_det_quadratic() {
    let b = basis_det_check(&tower(&[2]), &FieldTower::rational());
    assert_eq!(b.det_b, FieldElement::from_int(&tower(&[2]), -2));
    assert_eq!(b.trace_discriminant, FieldElement::from_int(&tower(&[2]), 8));
    assert!(b.nonzero && b.identity_holds);
}

#[test]
fn basis_det_nonzero_up_to_rank_three() {
    let pool = [2i64, 3, 5, 6, 7, 10, 13, 15];
    let mut checked = 0;
    for mask in 1u32..(1 << pool.len()) {
        if mask.count_ones() > 3 {
            continue;
        }
        let rads: Vec<i64> = pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &d)| d).collect();
        let big = tower(&rads);
        if big.rank() < rads.len() {
            continue;
        }
        let mut subs = vec![FieldTower::rational()];
        subs.extend(big.subfields_index2());
        for k in subs {
            let b = basis_det_check(&big, &k);
            assert!(b.nonzero, "{big} / {k}");
            assert!(b.identity_holds, "{big} / {k}");
            assert!(b.det_b.to_rational().is_some());
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn scales_form_a_group() {
    let g = gram_matrix(&corpus("fig3a")).unwrap();
    let k = trace_field(&g);
    let scales = similarity_scales(&g, &k);
    assert!(scales[0].is_one());
    assert!(scales.len().is_power_of_two());
    for x in &scales {
        for y in &scales {
            let p = x * y;
            assert!(scales.iter().any(|s| p.checked_div(s).unwrap().is_square()));
        }
    }
}

#[test]
fn report_json_round_trip() {
    let r = classify(&corpus("fig3b")).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: ClassificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["diagram", "n", "K", "f", "verdict", "k", "transfers", "model", "subordinated", "witnesses", "ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["verdict"], "pseudo-arithmetic-first-type");
    assert_eq!(v["K"]["radicands"], serde_json::json!([2, 5]));
    assert_eq!(r.tsv_row().split('\t').count(), TSV_HEADER.split('\t').count());
}

#[test]
fn batch_keeps_input_order() {
    let inputs = vec![
        ("a".to_string(), DELTA5.to_string()),
        ("b".to_string(), "dim 2\nvertices 3\nedge 1 2 7\n".to_string()),
        ("c".to_string(), "dim 2\nvertices 3\nedge 1 2 3\nedge 2 3 3\nedge 1 3 inf\n".to_string()),
    ];
    let out = classify_batch(&inputs, &ClassifyOptions::default());
    assert_eq!(out[0].as_ref().unwrap().diagram, "a");
    assert!(matches!(out[1], Err(Error::UnsupportedLabel { .. })));
    assert_eq!(out[2].as_ref().unwrap().verdict, Verdict::Arithmetic);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn verdict_is_monotone(m1 in prop::sample::select(vec![3u64, 4, 5, 6]), m2 in prop::sample::select(vec![3u64, 4, 6])) {
        let text = format!("dim 2\nvertices 3\nedge 1 2 {m1}\nedge 2 3 {m2}\nedge 1 3 inf\n");
        let r = classify(&parse_diagram(&text).unwrap()).unwrap();
        prop_assert!(!r.arithmetic || r.quasi_arithmetic);
        if r.quasi_arithmetic {
            prop_assert!(matches!(r.verdict, Verdict::Arithmetic | Verdict::QuasiArithmetic));
        }
        if r.verdict == Verdict::PseudoArithmeticFirstType {
            prop_assert!(r.model.is_some());
        }
    }
}
