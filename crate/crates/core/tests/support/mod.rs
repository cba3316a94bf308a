//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use pseudoarith::arith::{rat_int, val_rat};
use pseudoarith::coxeter::{parse_diagram_named, CoxeterDiagram};
use pseudoarith::localarith::{hilbert_symbol_local, splitting, FinitePlace, Place};
use pseudoarith::mqfield::parse_element_in;
use pseudoarith::qspace::QuadraticForm;
use pseudoarith::{FieldElement, FieldTower};

pub const CORPUS: [&str; 8] = ["delta5", "fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d", "fig3e"];

pub fn corpus(name: &str) -> CoxeterDiagram {
    let path = format!("{}/../../corpus/{name}.cox", env!("CARGO_MANIFEST_DIR"));
    parse_diagram_named(&std::fs::read_to_string(path).unwrap(), name).unwrap()
}

pub fn tower(rads: &[i64]) -> FieldTower {
    FieldTower::new(rads).unwrap()
}

fn finite(pl: &Place) -> &FinitePlace {
    match pl {
        Place::Finite(fp) => fp,
        Place::Real(_) => panic!("expected a finite place"),
    }
}

/// Nonzero element with coefficients `n/d`, `|n| ≤ 12`, `d ≤ 3`.
pub fn random_element(rng: &mut impl Rng, t: &FieldTower) -> FieldElement {
    loop {
        let coeffs = (0..t.degree())
            .map(|_| BigRational::new(rng.gen_range(-12i64..=12).into(), rng.gen_range(1i64..=3).into()))
            .collect();
        let x = FieldElement::from_coeffs(t, coeffs);
        if !x.is_zero() {
            return x;
        }
    }
}

/// `m ± √d` or `m` with `1 ≤ m ≤ 4` and `d` one of the radicands.
pub fn small_random_element(rng: &mut impl Rng, t: &FieldTower) -> FieldElement {
    let m = FieldElement::from_int(t, rng.gen_range(1..=4));
    match t.radicands().choose(rng) {
        Some(&d) if rng.gen_bool(0.5) => {
            let root = FieldElement::sqrt_of(t, d).unwrap();
            if rng.gen_bool(0.5) {
                &m + &root
            } else {
                &m - &root
            }
        }
        _ => m,
    }
}

/// Regular diagonal form of the given rank.
pub fn random_form(rng: &mut impl Rng, t: &FieldTower, rank: usize) -> QuadraticForm {
    let diag = (0..rank).map(|_| random_element(rng, t)).collect();
    QuadraticForm::new(t, diag).unwrap()
}

// Brute-force oracle for odd p over Q and quadratic fields. Split places are handled by
// embedding into Q_p through a root of d lifted digit by digit; otherwise elements of
// Z_p[√d] are pairs (x, y) ↔ x + y√d and the search runs over residues modulo P.

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Rational,
    Inert,
    Ramified,
}

struct Oracle {
    p: i64,
    d: i64,
    kind: Kind,
}

impl Oracle {
    fn mul(&self, a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
        let p = self.p;
        (
            (a.0 * b.0 + self.d * a.1 * b.1).rem_euclid(p),
            (a.0 * b.1 + a.1 * b.0).rem_euclid(p),
        )
    }

    fn in_prime(&self, a: (i64, i64)) -> bool {
        match self.kind {
            Kind::Inert => a.0 == 0 && a.1 == 0,
            _ => a.0 == 0,
        }
    }

    fn residues(&self) -> Vec<(i64, i64)> {
        let p = self.p;
        match self.kind {
            Kind::Inert => (0..p).flat_map(|x| (0..p).map(move |y| (x, y))).collect(),
            _ => (0..p).map(|x| (x, 0)).collect(),
        }
    }

    /// A residue solution of `z² = a x² + b y²` with a unit gradient component lifts by
    /// Hensel; for `v(a), v(b) ≤ 1` not both odd, every isotropic form has one.
    fn search(&self, a: (i64, i64), b: (i64, i64)) -> i8 {
        let reps = self.residues();
        for x in &reps {
            for y in &reps {
                for z in &reps {
                    let ax2 = self.mul(a, self.mul(*x, *x));
                    let by2 = self.mul(b, self.mul(*y, *y));
                    let z2 = self.mul(*z, *z);
                    let q = (
                        (ax2.0 + by2.0 - z2.0).rem_euclid(self.p),
                        (ax2.1 + by2.1 - z2.1).rem_euclid(self.p),
                    );
                    if !self.in_prime(q) {
                        continue;
                    }
                    let grads = [self.mul(a, *x), self.mul(b, *y), *z];
                    if grads.iter().any(|g| !self.in_prime(*g)) {
                        return 1;
                    }
                }
            }
        }
        -1
    }

    fn val(&self, u: &BigRational, v: &BigRational) -> i64 {
        let p = self.p as u64;
        let mut best = i64::MAX;
        let (wu, wv) = match self.kind {
            Kind::Ramified => (2, 1),
            _ => (1, 0),
        };
        if !u.is_zero() {
            best = best.min(wu * val_rat(u, p));
        }
        if !v.is_zero() {
            best = best.min(wu * val_rat(v, p) + wv);
        }
        best
    }

    fn reduce(&self, u: &BigRational, v: &BigRational) -> (i64, i64) {
        let p = BigInt::from(self.p);
        let red = |q: &BigRational| -> i64 {
            if q.is_zero() {
                return 0;
            }
            let inv = q.denom().mod_floor(&p).modpow(&(&p - 2), &p);
            (q.numer() * inv).mod_floor(&p).to_i64().unwrap()
        };
        (red(u), red(v))
    }

    /// Square of valuation 2 used to strip even valuations (`π² = d` when ramified).
    fn p_squared(&self) -> BigRational {
        match self.kind {
            Kind::Ramified => BigRational::from_integer(self.d.into()),
            _ => BigRational::from_integer((self.p * self.p).into()),
        }
    }

    fn strip(&self, mut u: BigRational, mut v: BigRational) -> (BigRational, BigRational, i64) {
        let sq = self.p_squared();
        let mut val = self.val(&u, &v);
        while val >= 2 {
            u /= &sq;
            v /= &sq;
            val -= 2;
        }
        while val < 0 {
            u *= &sq;
            v *= &sq;
            val += 2;
        }
        (u, v, val)
    }

    fn symbol(&self, a: (BigRational, BigRational), b: (BigRational, BigRational)) -> i8 {
        let (au, av, va) = self.strip(a.0, a.1);
        let (mut bu, mut bv, vb) = self.strip(b.0, b.1);
        if va == 1 && vb == 1 {
            // (a, b) = (a, −ab) and −ab has valuation 2
            let d = BigRational::from_integer(self.d.into());
            let nu = -(&au * &bu + d * &av * &bv);
            let nv = -(&au * &bv + &av * &bu);
            let sq = self.p_squared();
            bu = nu / &sq;
            bv = nv / &sq;
        }
        self.search(self.reduce(&au, &av), self.reduce(&bu, &bv))
    }
}

/// A square root of `d` modulo `p^n`, lifted one digit at a time from the least residue root.
fn lifted_root(d: i64, p: i64, n: u32) -> BigInt {
    let d = BigInt::from(d);
    let pb = BigInt::from(p);
    let mut t = BigInt::from((0..p).find(|x| (x * x - &d).mod_floor(&pb).is_zero()).unwrap());
    for k in 1..n {
        let pk = pb.pow(k);
        let pk1 = pb.pow(k + 1);
        t = (0..p)
            .map(|j| &t + BigInt::from(j) * &pk)
            .find(|c| (c * c - &d).mod_floor(&pk1).is_zero())
            .unwrap();
    }
    t
}

fn small_element(t: &FieldTower, u: i64, v: i64, d: i64) -> FieldElement {
    if t.is_rational() || v == 0 {
        return FieldElement::from_int(t, u);
    }
    parse_element_in(&format!("{u} + {v}*sqrt({d})"), t).unwrap()
}

/// Compares `hilbert_symbol_local` with the residue search for odd `p ≤ 13` over `Q` and
/// quadratic fields; returns the number of symbols checked.
pub fn check_odd_symbols() -> Result<usize, String> {
    let mut checked = 0;
    for p in [3i64, 5, 7, 11, 13] {
        // d = 1 stands for Q; the others give split, inert and ramified primes
        for d in [1i64, 2, 3, 5, 6, 7, 10, 11, 13] {
            let tower = if d == 1 { FieldTower::rational() } else { tower(&[d]) };
            for pl in splitting(&tower, p as u64) {
                let fp = finite(&pl);
                let (kind, root) = if d == 1 {
                    (Kind::Rational, None)
                } else if d % p == 0 {
                    (Kind::Ramified, None)
                } else if fp.g() == 2 {
                    let t = BigRational::from_integer(lifted_root(d, p, 12));
                    (Kind::Rational, Some(if fp.signs()[0] < 0 { -t } else { t }))
                } else {
                    (Kind::Inert, None)
                };
                if kind == Kind::Inert && p > 7 {
                    // the residue search is cubic in p²
                    continue;
                }
                let o = Oracle { p, d, kind };
                let as_pair = |u: i64, v: i64| -> (BigRational, BigRational) {
                    let (u, v) = (rat_int(u), rat_int(v));
                    match &root {
                        Some(t) => (u + v * t, BigRational::zero()),
                        None => (u, v),
                    }
                };
                for u1 in -6i64..=6 {
                    for v1 in [-1i64, 0, 2] {
                        for u2 in [-p, -3, -1, 1, 2, p, 2 * p] {
                            for v2 in [0i64, 1] {
                                let a = small_element(&tower, u1, v1, d);
                                let b = small_element(&tower, u2, v2, d);
                                if a.is_zero() || b.is_zero() {
                                    continue;
                                }
                                let (v1, v2) = if tower.is_rational() { (0, 0) } else { (v1, v2) };
                                let expected = o.symbol(as_pair(u1, v1), as_pair(u2, v2));
                                let got = hilbert_symbol_local(&a, &b, &pl);
                                if got != expected {
                                    return Err(format!("p={p} d={d} {pl} a={a} b={b}: {got} vs {expected}"));
                                }
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

