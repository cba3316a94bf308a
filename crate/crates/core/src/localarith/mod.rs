//! Hilbert symbols, Hasse invariants and hyperbolicity over multiquadratic fields.

mod model;
mod rational;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

pub use model::{square_class, LocalFieldModel};
pub use rational::{hilbert_symbol_q, RationalPlace};

use crate::arith::primes_of_rational;
use crate::mqfield::{Embedding, FieldElement, FieldTower};
use crate::qspace::QuadraticForm;

/// A place of a [`FieldTower`].
#[derive(Clone)]
pub enum Place {
    Real(Embedding),
    Finite(FinitePlace),
}

/// A prime of `K` above `p`, identified by root signs on the `p`-adic square kernel.
#[derive(Clone)]
pub struct FinitePlace {
    model: Arc<LocalFieldModel>,
    signs: Vec<i8>,
    index: usize,
}

impl FinitePlace {
    pub fn p(&self) -> u64 {
        self.model.p()
    }

    pub fn e(&self) -> i64 {
        self.model.ramification()
    }

    pub fn f(&self) -> i64 {
        self.model.residue_degree()
    }

    pub fn g(&self) -> usize {
        self.model.prime_count()
    }

    /// Which of the `g` primes above `p`.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn model(&self) -> &LocalFieldModel {
        &self.model
    }

    /// Image of `x` in the exact model of the completion.
    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        self.model.embed(x, &self.signs)
    }
}

impl Place {
    pub fn is_real(&self) -> bool {
        matches!(self, Place::Real(_))
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Real(_) => None,
            Place::Finite(fp) => Some(fp.p()),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real(s) => write!(f, "real{:?}", s.signs),
            Place::Finite(fp) => write!(
                f,
                "P{}|{} (e={}, f={}, g={})",
                fp.index,
                fp.p(),
                fp.e(),
                fp.f(),
                fp.g()
            ),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

type ModelCache = RwLock<HashMap<(FieldTower, u64), Arc<LocalFieldModel>>>;

fn cache() -> &'static ModelCache {
    static CACHE: OnceLock<ModelCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The memoized completion model of `tower` at `p`.
pub fn local_model(tower: &FieldTower, p: u64) -> Arc<LocalFieldModel> {
    let key = (tower.clone(), p);
    if let Some(m) = cache().read().expect("model cache poisoned").get(&key) {
        return m.clone();
    }
    let model = Arc::new(LocalFieldModel::new(tower, p));
    cache()
        .write()
        .expect("model cache poisoned")
        .entry(key)
        .or_insert(model)
        .clone()
}

/// The primes of `tower` above `p`.
pub fn splitting(tower: &FieldTower, p: u64) -> Vec<Place> {
    let model = local_model(tower, p);
    let k = model.kernel().len();
    (0..1usize << k)
        .map(|idx| Place::Finite(FinitePlace {
            model: model.clone(),
            signs: (0..k).map(|j| if idx >> j & 1 == 1 { -1 } else { 1 }).collect(),
            index: idx,
        }))
        .collect()
}

pub fn real_places(tower: &FieldTower) -> Vec<Place> {
    tower.embeddings().into_iter().map(Place::Real).collect()
}

/// `(a, b)_P` at any place of the common tower of `a` and `b`.
pub fn hilbert_symbol_local(a: &FieldElement, b: &FieldElement, place: &Place) -> i8 {
    match place {
        Place::Real(sigma) => {
            if a.sign_at(sigma) < 0 && b.sign_at(sigma) < 0 {
                -1
            } else {
                1
            }
        }
        Place::Finite(fp) => {
            let ea = fp.embed(a);
            let eb = fp.embed(b);
            let s = fp.model.hilbert(&ea, &eb);
            if cfg!(debug_assertions) && fp.p() == 2 {
                self_check_dyadic(a, b, fp, s, &ea, &eb);
            }
            s
        }
    }
}

/// Redundant routes for a dyadic symbol: the rational closed form through the projection
/// formula `(a, b)_P = (a, N(b))_2` when one argument is rational, and the product formula
/// when `2` has a single prime above it.
fn self_check_dyadic(
    a: &FieldElement,
    b: &FieldElement,
    fp: &FinitePlace,
    s: i8,
    ea: &FieldElement,
    eb: &FieldElement,
) {
    // the completion of the local tower E is E itself tensored with Q_2, so N_{E/Q} is the
    // local norm
    let projected = match (ea.to_rational(), eb.to_rational()) {
        (Some(qa), _) => Some(hilbert_symbol_q(&qa, &eb.norm(), Some(2))),
        (_, Some(qb)) => Some(hilbert_symbol_q(&ea.norm(), &qb, Some(2))),
        _ => None,
    };
    if let Some(expected) = projected {
        assert_eq!(s, expected, "dyadic symbol vs closed form for ({a}, {b})");
    }
    // places above primes beyond u64 cannot be modelled, so such pairs are not checked
    let primes = match symbol_primes(a, b) {
        Some(primes) if fp.g() == 1 => primes,
        _ => return,
    };
    {
        let tower = a.tower();
        let mut prod = s;
        for pl in real_places(tower) {
            prod *= hilbert_symbol_local(a, b, &pl);
        }
        for p in primes {
            if p == 2 {
                continue;
            }
            for pl in splitting(tower, p) {
                prod *= hilbert_symbol_local(a, b, &pl);
            }
        }
        assert_eq!(prod, 1, "product formula fails for ({a}, {b})");
    }
}

/// Rational primes outside which both `a` and `b` are units, plus 2. `None` when one of
/// them exceeds the `u64` range.
pub fn symbol_primes(a: &FieldElement, b: &FieldElement) -> Option<BTreeSet<u64>> {
    let mut out = BTreeSet::from([2u64]);
    out.extend(primes_of_rational(&a.norm())?);
    out.extend(primes_of_rational(&b.norm())?);
    Some(out)
}

/// Product of `(a, b)_v` over every place where it can be nontrivial; `None` when such a
/// place lies above a prime beyond the `u64` range.
pub fn symbol_product(a: &FieldElement, b: &FieldElement) -> Option<i8> {
    let tower = a.tower().join(b.tower());
    let a = a.coerce(&tower).expect("join");
    let b = b.coerce(&tower).expect("join");
    let primes = symbol_primes(&a, &b)?;
    let mut prod = 1;
    for pl in real_places(&tower) {
        prod *= hilbert_symbol_local(&a, &b, &pl);
    }
    for p in primes {
        for pl in splitting(&tower, p) {
            prod *= hilbert_symbol_local(&a, &b, &pl);
        }
    }
    Some(prod)
}

/// `∏_{i<j} (c_i, c_j)_P`.
pub fn hasse_invariant(f: &QuadraticForm, place: &Place) -> i8 {
    let diag = f.diagonal();
    match place {
        Place::Real(_) => {
            let mut s = 1;
            for i in 0..diag.len() {
                for j in i + 1..diag.len() {
                    s *= hilbert_symbol_local(&diag[i], &diag[j], place);
                }
            }
            s
        }
        Place::Finite(fp) => {
            let images: Vec<FieldElement> = diag.iter().map(|c| fp.embed(c)).collect();
            let mut s = 1;
            for i in 0..images.len() {
                for j in i + 1..images.len() {
                    s *= fp.model.hilbert(&images[i], &images[j]);
                }
            }
            s
        }
    }
}

/// Places above 2 and above primes dividing the norm of any diagonal entry.
pub fn relevant_finite_places<'a>(
    tower: &FieldTower,
    forms: impl IntoIterator<Item = &'a QuadraticForm>,
) -> Vec<Place> {
    let mut primes = BTreeSet::from([2u64]);
    for f in forms {
        for c in f.diagonal() {
            primes.extend(primes_of_rational(&c.norm()).expect("primes within u64 range"));
        }
    }
    primes.into_iter().flat_map(|p| splitting(tower, p)).collect()
}

/// Whether `f` is a sum of hyperbolic planes, via the local–global principle.
pub fn is_hyperbolic(f: &QuadraticForm) -> bool {
    let rank = f.rank();
    if rank % 2 == 1 {
        return false;
    }
    let m = rank / 2;
    if f.tower().embeddings().iter().any(|s| f.signature(s) != (m, m)) {
        return false;
    }
    let mut d = f.determinant();
    if m % 2 == 1 {
        d = -d;
    }
    if !d.is_square() {
        return false;
    }
    let f = f.cleared();
    let tower = f.tower().clone();
    let minus_one = FieldElement::from_int(&tower, -1);
    let exp_odd = (m * m.saturating_sub(1) / 2) % 2 == 1;
    relevant_finite_places(&tower, [&f]).iter().all(|pl| {
        let target = if exp_odd {
            hilbert_symbol_local(&minus_one, &minus_one, pl)
        } else {
            1
        };
        hasse_invariant(&f, pl) == target
    })
}

/// Local data of one place, for audit dumps.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PlaceAudit {
    /// `None` at real places.
    pub p: Option<u64>,
    /// Root signs of the embedding or of the `p`-adic model.
    pub signs: Vec<i8>,
    pub e: i64,
    pub f: i64,
    pub g: usize,
    pub hasse: i8,
    /// `(positive, negative)` at real places.
    pub signature: Option<(usize, usize)>,
}

/// Hasse invariants of `f` at every real place and at the places where they can be
/// nontrivial.
pub fn audit_form(f: &QuadraticForm) -> Vec<PlaceAudit> {
    let cleared = f.cleared();
    let tower = cleared.tower().clone();
    let mut places = real_places(&tower);
    places.extend(relevant_finite_places(&tower, [&cleared]));
    places
        .iter()
        .map(|pl| {
            let hasse = hasse_invariant(&cleared, pl);
            match pl {
                Place::Real(s) => PlaceAudit {
                    p: None,
                    signs: s.signs.clone(),
                    e: 1,
                    f: 1,
                    g: 1,
                    hasse,
                    signature: Some(cleared.signature(s)),
                },
                Place::Finite(fp) => PlaceAudit {
                    p: Some(fp.p()),
                    signs: fp.signs().to_vec(),
                    e: fp.e(),
                    f: fp.f(),
                    g: fp.g(),
                    hasse,
                    signature: None,
                },
            }
        })
        .collect()
}
