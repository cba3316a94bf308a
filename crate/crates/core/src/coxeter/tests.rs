use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::mqfield::parse_element_in;

const DELTA5: &str = "dim 5\nvertices 6\nedge 1 2 3\nedge 2 3 4\nedge 3 4 3\nedge 4 5 3\nedge 5 6 3\nedge 6 1 3\n";

fn corpus(name: &str) -> CoxeterDiagram {
    let path = format!("{}/../../corpus/{name}.cox", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).unwrap();
    parse_diagram_named(&text, name).unwrap()
}

fn tower(rads: &[i64]) -> FieldTower {
    FieldTower::new(rads).unwrap()
}

#[test]
fn parses_delta5() {
    let d = parse_diagram(DELTA5).unwrap();
    assert_eq!((d.n, d.vertices, d.edges.len()), (5, 6, 6));
    assert_eq!(d.label(1, 2), Some(&Label::Finite(4)));
    assert_eq!(d.label(0, 2), None);
    assert_eq!(parse_diagram(&d.to_text()).unwrap(), d);
}

#[test]
fn parse_errors() {
    let bad7 = "dim 2\nvertices 3\nedge 1 2 7\nedge 2 3 3\nedge 1 3 3\n";
    assert!(matches!(parse_diagram(bad7), Err(Error::UnsupportedLabel { line: 3, .. })));
    let dup = "dim 2\nvertices 3\nedge 1 2 3\nedge 2 1 4\nedge 2 3 3\n";
    assert!(matches!(parse_diagram(dup), Err(Error::DuplicateEdge { line: 4, i: 1, j: 2 })));
    let apart = "dim 2\nvertices 3\nedge 1 2 3\n";
    assert_eq!(parse_diagram(apart), Err(Error::Disconnected));
    let early = "dim 2\nedge 1 2 3\n";
    assert!(matches!(parse_diagram(early), Err(Error::Parse { line: 2, .. })));
    let unit = "dim 2\nvertices 3\nedge 1 2 w 1\nedge 2 3 3\n";
    assert!(matches!(parse_diagram(unit), Err(Error::Parse { .. })));
    let small = "dim 2\nvertices 3\nedge 1 2 w 1/2\nedge 2 3 3\n";
    assert!(matches!(parse_diagram(small), Err(Error::Parse { .. })));
    let nested = "dim 2\nvertices 3\nedge 1 2 w sqrt(1 + sqrt(2))\nedge 2 3 3\n";
    assert!(matches!(parse_diagram(nested), Err(Error::NestedRadical(_))));
    let few = "dim 3\nvertices 3\nedge 1 2 3\nedge 2 3 3\n";
    assert!(matches!(parse_diagram(few), Err(Error::Parse { line: 0, .. })));
    assert!(matches!(parse_diagram("dim 2\nfoo\n"), Err(Error::Parse { line: 2, .. })));
}

#[test]
fn weights_and_label_two() {
    let text = "dim 2\nvertices 3\n# comment\nedge 1 2 w 1/2 + 1/2*sqrt(10)  # weight\nedge 2 3 3\nedge 1 3 2\n";
    let d = parse_diagram(text).unwrap();
    assert_eq!(d.edges.len(), 2);
    let w = parse_element_in("1/2 + 1/2*sqrt(10)", &tower(&[10])).unwrap();
    assert_eq!(d.label(0, 1), Some(&Label::Weight(w.clone())));
    assert_eq!(gram_entry(d.label(0, 1)), -&w);
}

#[test]
fn gram_entries_match_cosines() {
    for m in [7u64, 8, 9, 10, 11] {
        assert!(cos_pi_over(m).is_none(), "m = {m} has a nested-radical cosine");
    }
    for m in [3u64, 4, 5, 6, 12] {
        let x = gram_entry(Some(&Label::Finite(m)));
        let want = -(std::f64::consts::PI / m as f64).cos();
        assert!((x.to_f64() - want).abs() < 1e-12, "m = {m}");
    }
    assert_eq!(gram_entry(Some(&Label::Infinite)).to_f64(), -1.0);
    assert!(gram_entry(None).is_zero());
}

#[test]
fn signature_checks() {
    let g = gram_matrix(&parse_diagram(DELTA5).unwrap()).unwrap();
    assert!(g.matrix.determinant().sign_at(&Embedding::identity(g.tower.rank())) < 0);
    // (3,3,3) triangle is Euclidean; (3,3,4) is hyperbolic
    let euclid = "dim 2\nvertices 3\nedge 1 2 3\nedge 2 3 3\nedge 1 3 3\n";
    assert!(matches!(
        gram_matrix(&parse_diagram(euclid).unwrap()),
        Err(Error::NotHyperbolic { pos: 2, neg: 0, zero: 1, .. })
    ));
    let hyp = "dim 2\nvertices 3\nedge 1 2 3\nedge 2 3 3\nedge 1 3 4\n";
    assert!(gram_matrix(&parse_diagram(hyp).unwrap()).is_ok());
    // a spherical simplex declared hyperbolic
    let sph = "dim 2\nvertices 3\nedge 1 2 3\nedge 2 3 3\n";
    assert!(matches!(gram_matrix(&parse_diagram(sph).unwrap()), Err(Error::NotHyperbolic { neg: 0, .. })));
}

#[test]
fn cycles_and_trace_fields() {
    let g = gram_matrix(&parse_diagram(DELTA5).unwrap()).unwrap();
    let cycles = g.simple_cycles();
    assert_eq!(cycles, vec![vec![0, 1, 2, 3, 4, 5]]);
    // (-1/2)^5 · (-√2/2)
    let want = parse_element_in("1/64*sqrt(2)", &tower(&[2])).unwrap();
    assert_eq!(g.cyclic_product(&cycles[0]).coerce(&tower(&[2])).unwrap(), want);
    assert_eq!(trace_field(&g), tower(&[2]));

    let tri = "dim 2\nvertices 3\nedge 1 2 3\nedge 2 3 3\nedge 1 3 inf\n";
    let g = gram_matrix(&parse_diagram(tri).unwrap()).unwrap();
    assert_eq!(trace_field(&g), FieldTower::rational());

    let expected: [(&str, &[i64]); 8] = [
        ("delta5", &[2]),
        ("fig2a", &[2, 3, 5]),
        ("fig2b", &[2, 3, 5]),
        ("fig3a", &[2, 3]),
        ("fig3b", &[2, 5]),
        ("fig3c", &[2, 5]),
        ("fig3d", &[2, 3]),
        ("fig3e", &[2, 13]),
    ];
    for (name, rads) in expected {
        let g = gram_matrix(&corpus(name)).unwrap();
        assert_eq!(trace_field(&g), tower(rads), "{name}");
    }
}

#[test]
fn complete_graph_cycle_count() {
    // K4: three 4-cycles and four triangles
    let text = "dim 3\nvertices 4\nedge 1 2 3\nedge 1 3 3\nedge 1 4 3\nedge 2 3 3\nedge 2 4 3\nedge 3 4 3\n";
    let d = parse_diagram(text).unwrap();
    let rows = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| if i == j { FieldElement::one(&FieldTower::rational()) } else { gram_entry(d.label(i, j)) })
                .collect()
        })
        .collect();
    let g = GramData {
        n: 3,
        tower: FieldTower::rational(),
        matrix: Matrix::new(&FieldTower::rational(), rows).unwrap(),
    };
    let cycles = g.simple_cycles();
    assert_eq!(cycles.iter().filter(|c| c.len() == 3).count(), 4);
    assert_eq!(cycles.iter().filter(|c| c.len() == 4).count(), 3);
}

#[test]
fn ambient_form_lies_in_trace_field() {
    for name in ["delta5", "fig2a", "fig3a", "fig3e"] {
        let g = gram_matrix(&corpus(name)).unwrap();
        let k = trace_field(&g);
        for i in 0..g.size() {
            for j in 0..g.size() {
                assert!(g.entry(i, j).square().coerce(&k).is_ok(), "{name} a_{i}{j}²");
            }
        }
        let amb = ambient_form(&g, &k).unwrap();
        assert_eq!(amb.form.tower(), &k);
        assert_eq!(amb.form.rank(), g.n + 1);
        assert_eq!(amb.form.signature(&Embedding::identity(k.rank())), (g.n, 1));
        assert_eq!(amb.minor.len(), g.n + 1);
        // rebuild the rescaled minor and check it is congruent to f
        let a: Vec<Vec<FieldElement>> = (0..=g.n)
            .map(|j| {
                (0..=g.n)
                    .map(|l| {
                        let x = &(&amb.path_products[j] * &amb.path_products[l])
                            * g.entry(amb.minor[j], amb.minor[l]);
                        x.coerce(&k).unwrap()
                    })
                    .collect()
            })
            .collect();
        let (d, _) = diagonalize(&Matrix::new(&k, a).unwrap()).unwrap();
        assert!(crate::qspace::globally_isometric(&d, &amb.form), "{name}");
    }
}

#[test]
fn path_products_cover_connected_diagrams() {
    let g = gram_matrix(&corpus("fig3b")).unwrap();
    for base in 0..g.size() {
        let paths = path_products(&g, base);
        assert!(paths.iter().all(Option::is_some));
        assert!(paths[base].as_ref().unwrap().is_one());
    }
}

#[test]
fn relabeling_preserves_trace_field_and_signature() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in ["delta5", "fig3c", "fig2b"] {
        let d = corpus(name);
        let g = gram_matrix(&d).unwrap();
        let k = trace_field(&g);
        for _ in 0..20 {
            let mut perm: Vec<usize> = (0..d.vertices).collect();
            perm.shuffle(&mut rng);
            let e = d.relabeled(&perm);
            assert_eq!(e.edges.len(), d.edges.len());
            let h = gram_matrix(&e).unwrap();
            assert_eq!(trace_field(&h), k, "{name} {perm:?}");
            assert_eq!(h.simple_cycles().len(), g.simple_cycles().len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = corpus("fig3d");
        let mut perm: Vec<usize> = (0..d.vertices).collect();
        perm.shuffle(&mut rng);
        let e = d.relabeled(&perm);
        prop_assert_eq!(parse_diagram_named(&e.to_text(), &e.name).unwrap(), e);
    }
}
