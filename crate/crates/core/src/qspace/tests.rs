use proptest::prelude::*;

use super::*;
use crate::arith::{rat, rat_int};
use crate::localarith::is_hyperbolic;
use crate::mqfield::{parse_element_in, Embedding, FieldElement, FieldTower};

fn k(rads: &[i64]) -> FieldTower {
    FieldTower::new(rads).unwrap()
}

fn el(s: &str, t: &FieldTower) -> FieldElement {
    parse_element_in(s, t).unwrap()
}

fn matrix(t: &FieldTower, rows: &[&[&str]]) -> Matrix {
    Matrix::new(
        t,
        rows.iter()
            .map(|r| r.iter().map(|s| el(s, t)).collect())
            .collect(),
    )
    .unwrap()
}

fn check_congruence(g: &Matrix, f: &QuadraticForm, t: &Matrix) -> bool {
    t.transpose().mul(g).mul(t) == f.gram()
}

#[test]
fn diagonalize_examples() {
    let q = FieldTower::rational();
    let g = matrix(&q, &[&["0", "1"], &["1", "0"]]);
    let (f, t) = diagonalize(&g).unwrap();
    assert!(check_congruence(&g, &f, &t));
    assert!(globally_isometric(&f, &QuadraticForm::from_ints(&q, &[1, -1]).unwrap()));

    let g = Matrix::identity(&q, 3);
    let (f, t) = diagonalize(&g).unwrap();
    assert_eq!(f, QuadraticForm::from_ints(&q, &[1, 1, 1]).unwrap());
    assert!(check_congruence(&g, &f, &t));

    let g = matrix(&q, &[&["1", "-1/2"], &["-1/2", "1"]]);
    let (f, t) = diagonalize(&g).unwrap();
    assert_eq!(f.diagonal(), &[el("1", &q), el("3/4", &q)]);
    assert!(check_congruence(&g, &f, &t));

    let g = matrix(&q, &[&["1", "1"], &["1", "1"]]);
    assert_eq!(diagonalize(&g).unwrap_err(), crate::Error::DegenerateForm);
}

#[test]
fn invariants_examples() {
    let q = FieldTower::rational();
    let f0 = QuadraticForm::from_ints(&q, &[-1, 1, 1, 1, 1, 1]).unwrap();
    let inv = f0.invariants();
    assert_eq!(inv.rank, 6);
    assert_eq!(inv.det, FieldElement::from_int(&q, -1));
    assert_eq!(inv.signatures, vec![(Embedding::identity(0), 5, 1)]);

    let h = QuadraticForm::from_ints(&q, &[1, -1]).unwrap();
    assert_eq!(h.invariants().det, FieldElement::from_int(&q, -1));
    assert_eq!(h.signature(&Embedding::identity(0)), (1, 1));

    let t = k(&[2]);
    let f = QuadraticForm::new(&t, vec![el("-1", &t), el("1", &t), el("sqrt(2)", &t)]).unwrap();
    let emb = t.embeddings();
    assert_eq!(f.signature(&emb[0]), (2, 1));
    assert_eq!(f.signature(&emb[1]), (1, 2));
}

#[test]
fn transfer_examples() {
    let q = FieldTower::rational();
    let t = k(&[2]);
    let one = QuadraticForm::from_ints(&t, &[1]).unwrap();
    let s = transfer(&one, &q).unwrap();
    assert_eq!(s.rank(), 2);
    assert!(is_hyperbolic(&s));

    let r2 = QuadraticForm::new(&t, vec![el("sqrt(2)", &t)]).unwrap();
    let s = transfer(&r2, &q).unwrap();
    assert!(globally_isometric(&s, &QuadraticForm::from_ints(&q, &[1, 2]).unwrap()));
    assert!(!is_hyperbolic(&s));

    let h = QuadraticForm::from_ints(&t, &[1, -1]).unwrap();
    let s = transfer(&h, &q).unwrap();
    assert_eq!(s.rank(), 4);
    assert!(is_hyperbolic(&s));

    assert!(transfer(&one, &k(&[3])).is_err());
    let k23 = k(&[2, 3]);
    assert!(transfer(&QuadraticForm::from_ints(&k23, &[1]).unwrap(), &q).is_err());
    assert_eq!(transfer_generator(&k23, &k(&[6])).unwrap(), 2);
    assert_eq!(transfer_generator(&k23, &k(&[2])).unwrap(), 3);
}

#[test]
fn isometry_examples() {
    let q = FieldTower::rational();
    let f = |d: &[i64]| QuadraticForm::from_ints(&q, d).unwrap();
    assert!(globally_isometric(&f(&[1, 1]), &f(&[2, 2])));
    assert!(!globally_isometric(&f(&[1, 1]), &f(&[1, -1])));
    assert!(globally_isometric(&f(&[1, -2]), &f(&[2, -1])));
    assert!(!globally_isometric(&f(&[1, 1]), &f(&[3, 3])));
    assert!(!globally_isometric(&f(&[1, 1]), &f(&[1, 1, 1])));
    // equal rank, signature and determinant, different Hasse invariant at 3
    assert!(!globally_isometric(&f(&[1, 1, 1]), &f(&[3, 3, 1])));
    let t = k(&[2]);
    let g = QuadraticForm::new(&t, vec![el("1", &t), el("1", &t)]).unwrap();
    let h = QuadraticForm::new(&t, vec![el("3", &t), el("3", &t)]).unwrap();
    // 3 is not a norm from Q(√2, i) at the primes above 3
    assert_eq!(globally_isometric(&g, &h), globally_isometric(&h, &g));
}

#[test]
fn admissibility_examples() {
    let q = FieldTower::rational();
    let f0 = QuadraticForm::from_ints(&q, &[-1, 1, 1, 1, 1, 1]).unwrap();
    assert!(is_admissible(&f0, 5).unwrap());
    assert!(is_admissible(&f0, 4).is_err());

    let t = k(&[2]);
    let f = QuadraticForm::new(&t, vec![el("-1", &t), el("1", &t), el("sqrt(2)", &t)]).unwrap();
    assert!(!is_admissible(&f, 2).unwrap());
    let f = QuadraticForm::new(
        &t,
        ["-1", "1", "1", "1", "1", "2 + sqrt(2)"].iter().map(|s| el(s, &t)).collect(),
    )
    .unwrap();
    assert!(!is_admissible(&f, 5).unwrap());
    // ⟨−√2, 1, 1⟩: (2,1) at the identity, positive definite at the conjugate
    let f = QuadraticForm::new(&t, vec![el("-sqrt(2)", &t), el("1", &t), el("1", &t)]).unwrap();
    assert!(is_admissible(&f, 2).unwrap());
}

#[test]
fn form_json_round_trip() {
    let t = k(&[2, 3]);
    let f = QuadraticForm::new(&t, vec![el("-1", &t), el("1/2 + 1/2*sqrt(6)", &t), el("sqrt(3)", &t)])
        .unwrap()
        .with_note("test");
    let s = serde_json::to_string(&f).unwrap();
    assert!(s.contains("\"radicands\":[2,3]"));
    let back: QuadraticForm = serde_json::from_str(&s).unwrap();
    assert_eq!(back, f);
    assert_eq!(back.note(), "test");
    assert!(serde_json::from_str::<QuadraticForm>(r#"{"radicands":[2],"diagonal":["0"]}"#).is_err());
}

const TOWERS: [&[i64]; 4] = [&[], &[2], &[5], &[2, 3]];

fn element(t: FieldTower, nonzero: bool) -> impl Strategy<Value = FieldElement> {
    proptest::collection::vec((-6i64..=6, 1i64..=3), t.degree()).prop_filter_map(
        "nonzero",
        move |c| {
            let x = FieldElement::from_coeffs(&t, c.into_iter().map(|(n, d)| rat(n, d)).collect());
            (!nonzero || !x.is_zero()).then_some(x)
        },
    )
}

fn symmetric(t: FieldTower, n: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(element(t.clone(), false), n * (n + 1) / 2).prop_map(move |xs| {
        let mut rows = vec![vec![FieldElement::zero(&t); n]; n];
        let mut it = xs.into_iter();
        for i in 0..n {
            for j in i..n {
                let x = it.next().unwrap();
                rows[i][j] = x.clone();
                rows[j][i] = x;
            }
        }
        Matrix::new(&t, rows).unwrap()
    })
}

fn tower_index() -> impl Strategy<Value = FieldTower> {
    (0..3usize).prop_map(|i| k(TOWERS[i]))
}

fn form(t: FieldTower, max_rank: usize) -> impl Strategy<Value = QuadraticForm> {
    proptest::collection::vec(element(t.clone(), true), 1..=max_rank)
        .prop_map(move |d| QuadraticForm::new(&t, d).unwrap())
}

fn same_profile(f: &QuadraticForm, g: &QuadraticForm) -> bool {
    let (a, b) = (f.invariants(), g.invariants());
    a.rank == b.rank
        && a.signatures == b.signatures
        && a.det.checked_div(&b.det).unwrap().is_square()
}

/// The automorphism of `K` fixing the index-2 subfield `F`.
fn galois_over(kt: &FieldTower, f: &FieldTower) -> Embedding {
    kt.embeddings()
        .into_iter()
        .find(|s| {
            !s.is_identity()
                && (0..kt.degree())
                    .filter(|&m| f.locate_sqrt(kt.squarefree_of(m)).is_some())
                    .all(|m| s.sign_of_mask(m) == 1)
        })
        .unwrap()
}

/// (K, F) pairs with `[K:F] = 2`.
fn extension() -> impl Strategy<Value = (FieldTower, FieldTower)> {
    prop_oneof![
        Just((k(&[2]), FieldTower::rational())),
        Just((k(&[5]), FieldTower::rational())),
        Just((k(&[2, 3]), k(&[2]))),
        Just((k(&[2, 3]), k(&[6]))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn diagonalization_is_a_congruence(
        g in (tower_index(), 1usize..=6).prop_flat_map(|(t, n)| symmetric(t, n))
    ) {
        match diagonalize(&g) {
            Ok((f, t)) => {
                prop_assert!(check_congruence(&g, &f, &t));
                prop_assert!(!t.determinant().is_zero());
            }
            Err(e) => {
                prop_assert_eq!(e, crate::Error::DegenerateForm);
                prop_assert!(g.determinant().is_zero());
            }
        }
    }

    #[test]
    fn invariants_are_congruence_invariant(
        (g, p) in (tower_index(), 1usize..=4).prop_flat_map(|(t, n)| (symmetric(t.clone(), n), symmetric(t, n)))
    ) {
        // p + p' with a shifted diagonal is a generic change of basis
        let t = g.tower().clone();
        let n = g.size();
        let mut rows = p.rows().to_vec();
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = &row[i] + &FieldElement::from_int(&t, 7 + i as i64);
        }
        let basis = Matrix::new(&t, rows).unwrap();
        prop_assume!(!basis.determinant().is_zero());
        let moved = basis.transpose().mul(&g).mul(&basis);
        match (diagonalize(&g), diagonalize(&moved)) {
            (Ok((f1, _)), Ok((f2, _))) => {
                prop_assert!(same_profile(&f1, &f2));
                if t.is_rational() && n <= 3 {
                    prop_assert!(globally_isometric(&f1, &f2));
                }
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "regularity is not congruence invariant"),
        }
    }

    #[test]
    fn transfer_rank_and_disc_laws(
        ((kt, ft), c) in extension().prop_flat_map(|(kt, ft)| (Just((kt.clone(), ft)), element(kt, true)))
    ) {
        let f = QuadraticForm::new(&kt, vec![c.clone()]).unwrap();
        let s = transfer(&f, &ft).unwrap();
        prop_assert_eq!(s.rank(), 2);
        let sigma = galois_over(&kt, &ft);
        let norm = (&c * &c.conjugate(&sigma)).coerce(&ft).unwrap();
        let ratio = s.determinant().checked_div(&-norm).unwrap();
        prop_assert!(ratio.is_square());
    }

    #[test]
    fn transfer_of_extended_form_is_hyperbolic(
        ((kt, ft), g) in extension().prop_flat_map(|(kt, ft)| (Just((kt, ft.clone())), form(ft, 3)))
    ) {
        let gk = g.extend_to(&kt).unwrap();
        let s = transfer(&gk, &ft).unwrap();
        prop_assert_eq!(s.rank(), 2 * g.rank());
        prop_assert!(is_hyperbolic(&s));
    }

    #[test]
    fn isometry_is_an_equivalence(
        (f, perm, sq1, sq2) in tower_index().prop_flat_map(|t| (
            form(t.clone(), 3),
            any::<prop::sample::Index>(),
            element(t.clone(), true),
            element(t, true),
        ))
    ) {
        let n = f.rank();
        let mut diag = f.diagonal().to_vec();
        diag.rotate_left(perm.index(n));
        diag[0] = &diag[0] * &sq1.square();
        let g = QuadraticForm::new(f.tower(), diag.clone()).unwrap();
        diag[n - 1] = &diag[n - 1] * &sq2.square();
        let h = QuadraticForm::new(f.tower(), diag).unwrap();
        prop_assert!(globally_isometric(&f, &f));
        prop_assert!(globally_isometric(&f, &g));
        prop_assert!(globally_isometric(&g, &f));
        prop_assert!(globally_isometric(&g, &h));
        prop_assert!(globally_isometric(&f, &h));
        let neg = f.negated();
        prop_assert_eq!(globally_isometric(&f, &neg), globally_isometric(&neg, &f));
    }

    #[test]
    fn rational_square_scaling_preserves_invariants(
        (f, num, den) in (tower_index().prop_flat_map(|t| form(t, 4)), 1i64..=12, 1i64..=12)
    ) {
        let q = rat(num, den);
        let lambda = FieldElement::from_rational(f.tower(), &q * &q);
        let g = f.scaled(&lambda).unwrap();
        let (a, b) = (f.invariants(), g.invariants());
        prop_assert_eq!(a.rank, b.rank);
        prop_assert_eq!(a.signatures, b.signatures);
        let det_scale = FieldElement::from_rational(f.tower(), (&q * &q).pow(f.rank() as i32));
        prop_assert_eq!(&a.det * &det_scale, b.det);
        prop_assert!(globally_isometric(&f, &g));
        prop_assert_eq!(f.cleared(), g.cleared());
    }
}

#[test]
fn integer_rescaling_is_visible() {
    // scaling by a non-square changes the class of odd-rank forms
    let q = FieldTower::rational();
    let f = QuadraticForm::from_ints(&q, &[1, 1, 1]).unwrap();
    let g = f.scaled(&FieldElement::from_rational(&q, rat_int(2))).unwrap();
    assert!(!globally_isometric(&f, &g));
}
