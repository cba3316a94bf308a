use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{congruence_diagonal, Matrix};
use crate::arith::{factor_big, squarefree_mul};
use crate::error::{Error, Result};
use crate::localarith;
use crate::mqfield::{parse_element_in, Embedding, FieldElement, FieldTower};

/// A regular diagonal form `⟨c₁,…,c_m⟩` over a [`FieldTower`].
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "FormJson", try_from = "FormJson")]
pub struct QuadraticForm {
    tower: FieldTower,
    diagonal: Vec<FieldElement>,
    note: String,
}

/// Serialized shape of a form: radicands plus element literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub radicands: Vec<u64>,
    pub diagonal: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl From<QuadraticForm> for FormJson {
    fn from(f: QuadraticForm) -> Self {
        FormJson {
            radicands: f.tower.radicands().to_vec(),
            diagonal: f.diagonal.iter().map(ToString::to_string).collect(),
            note: f.note,
        }
    }
}

impl TryFrom<FormJson> for QuadraticForm {
    type Error = Error;

    fn try_from(j: FormJson) -> Result<Self> {
        let rads: Vec<i64> = j.radicands.iter().map(|&d| d as i64).collect();
        let tower = FieldTower::new(&rads)?;
        let diag = j
            .diagonal
            .iter()
            .map(|s| parse_element_in(s, &tower))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuadraticForm::new(&tower, diag)?.with_note(j.note))
    }
}

/// Global invariants of a regular form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormInvariants {
    pub rank: usize,
    pub det: FieldElement,
    /// `(−1)^{m(m−1)/2} det`.
    pub signed_disc: FieldElement,
    /// `(p, q)` at every real embedding.
    pub signatures: Vec<(Embedding, usize, usize)>,
}

impl QuadraticForm {
    pub fn new(tower: &FieldTower, diagonal: Vec<FieldElement>) -> Result<Self> {
        let diagonal = diagonal
            .iter()
            .map(|c| c.coerce(tower))
            .collect::<Result<Vec<_>>>()?;
        if diagonal.iter().any(FieldElement::is_zero) {
            return Err(Error::DegenerateForm);
        }
        Ok(Self {
            tower: tower.clone(),
            diagonal,
            note: String::new(),
        })
    }

    pub fn from_ints(tower: &FieldTower, diag: &[i64]) -> Result<Self> {
        Self::new(
            tower,
            diag.iter().map(|&c| FieldElement::from_int(tower, c)).collect(),
        )
    }

    /// `⟨−1, 1, …, 1, a⟩` of rank `n + 1`.
    pub fn standard_with_last(tower: &FieldTower, n: usize, a: &FieldElement) -> Result<Self> {
        let mut diag = vec![FieldElement::from_int(tower, -1)];
        diag.extend((1..n).map(|_| FieldElement::one(tower)));
        diag.push(a.clone());
        Self::new(tower, diag)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn diagonal(&self) -> &[FieldElement] {
        &self.diagonal
    }

    pub fn note(&self) -> &str {
        &self.note
    }

    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn determinant(&self) -> FieldElement {
        self.diagonal
            .iter()
            .fold(FieldElement::one(&self.tower), |acc, c| &acc * c)
    }

    pub fn signed_discriminant(&self) -> FieldElement {
        let m = self.rank();
        let d = self.determinant();
        if (m * (m.saturating_sub(1)) / 2) % 2 == 1 {
            -d
        } else {
            d
        }
    }

    /// `(positives, negatives)` at `sigma`.
    pub fn signature(&self, sigma: &Embedding) -> (usize, usize) {
        let pos = self
            .diagonal
            .iter()
            .filter(|c| c.sign_at(sigma) > 0)
            .count();
        (pos, self.rank() - pos)
    }

    pub fn invariants(&self) -> FormInvariants {
        FormInvariants {
            rank: self.rank(),
            det: self.determinant(),
            signed_disc: self.signed_discriminant(),
            signatures: self
                .tower
                .embeddings()
                .into_iter()
                .map(|s| {
                    let (p, q) = self.signature(&s);
                    (s, p, q)
                })
                .collect(),
        }
    }

    pub fn gram(&self) -> Matrix {
        Matrix::diagonal(&self.tower, &self.diagonal)
    }

    pub fn extend_to(&self, tower: &FieldTower) -> Result<Self> {
        Ok(Self::new(tower, self.diagonal.clone())?.with_note(self.note.clone()))
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Result<Self> {
        let mut diag = self.diagonal.clone();
        diag.extend(other.diagonal.iter().map(|c| c.coerce(&self.tower)).collect::<Result<Vec<_>>>()?);
        Self::new(&self.tower, diag)
    }

    pub fn scaled(&self, lambda: &FieldElement) -> Result<Self> {
        let diag = self.diagonal.iter().map(|c| c * lambda).collect();
        Self::new(&self.tower, diag)
    }

    pub fn negated(&self) -> Self {
        Self {
            tower: self.tower.clone(),
            diagonal: self.diagonal.iter().map(|c| -c).collect(),
            note: self.note.clone(),
        }
    }

    /// Each entry rescaled by a rational square so its coordinates are integers
    /// with square-free content.
    pub fn cleared(&self) -> Self {
        Self {
            tower: self.tower.clone(),
            diagonal: self.diagonal.iter().map(clear_entry).collect(),
            note: self.note.clone(),
        }
    }
}

/// `c · t²` for a rational `t` making the coordinates integral with square-free content.
pub(crate) fn clear_entry(c: &FieldElement) -> FieldElement {
    let lcm = c
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = c
        .coeffs()
        .iter()
        .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if content.is_zero() {
        return c.clone();
    }
    // c·lcm² has integer coordinates with content `content·lcm`
    let mut square = BigInt::one();
    for (p, e) in factor_big(&(content * &lcm)) {
        square *= BigInt::from(p).pow((e / 2) as u32 * 2);
    }
    // c · lcm² / square
    let scale = BigRational::new(&lcm * &lcm, square);
    c.scale(&scale)
}

/// Symmetric diagonalization `Tᵀ G T = diag(D)` for a regular symmetric `G`.
pub fn diagonalize(g: &Matrix) -> Result<(QuadraticForm, Matrix)> {
    let (diag, t) = congruence_diagonal(g)?;
    if diag.iter().any(FieldElement::is_zero) {
        return Err(Error::DegenerateForm);
    }
    Ok((QuadraticForm::new(g.tower(), diag)?, t))
}

/// The element `a` with `K = F(√a)` used by [`transfer`]: the smallest square class of `K`
/// outside `F`.
pub fn transfer_generator(k: &FieldTower, f: &FieldTower) -> Result<u64> {
    if !k.contains_tower(f) || k.degree() != 2 * f.degree() {
        return Err(Error::NotIndexTwo(f.to_string(), k.to_string()));
    }
    Ok(k
        .smallest_generator_over(f)
        .expect("index-2 subfield misses some square class"))
}

/// Coordinates `(u, v)` of `c = u + v√a` over `F`.
fn split_over(c: &FieldElement, f: &FieldTower, a: u64) -> (FieldElement, FieldElement) {
    let k = c.tower();
    let mut u = FieldElement::zero(f);
    let mut v = FieldElement::zero(f);
    let a_rat = BigRational::from_integer(BigInt::from(a));
    for (mask, coeff) in c.coeffs().iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let m = k.squarefree_of(mask);
        // c_I α_I = c_I s_I √m
        let cs = coeff * BigRational::from_integer(k.cofactor(mask).clone());
        if let Some(root) = FieldElement::sqrt_of(f, m) {
            u = &u + &root.scale(&cs);
        } else {
            // √m = g √m' √a / a with m a = m' g²
            let g = num_integer::gcd(m, a);
            let m2 = squarefree_mul(m, a);
            let root = FieldElement::sqrt_of(f, m2).expect("m·a lies in F");
            let factor = cs * BigRational::from_integer(BigInt::from(g)) / &a_rat;
            v = &v + &root.scale(&factor);
        }
    }
    (u, v)
}

/// Scharlau transfer `s_*` along the trace-like map `F(√a) → F`, `1 ↦ 0`, `√a ↦ 1`.
pub fn transfer(f: &QuadraticForm, sub: &FieldTower) -> Result<QuadraticForm> {
    let a = transfer_generator(f.tower(), sub)?;
    let a_el = FieldElement::from_int(sub, a as i64);
    let mut diag = Vec::with_capacity(2 * f.rank());
    for c in f.diagonal() {
        let (u, v) = split_over(c, sub, a);
        let block = Matrix::new(
            sub,
            vec![vec![v.clone(), u.clone()], vec![u, &a_el * &v]],
        )?;
        let (d, _) = diagonalize(&block)?;
        diag.extend(d.diagonal().iter().cloned());
    }
    Ok(QuadraticForm::new(sub, diag)?.with_note(format!("transfer to {sub} along √{a}")))
}

/// Hasse–Minkowski: equal rank, signatures, determinant class and local Hasse invariants.
pub fn globally_isometric(f: &QuadraticForm, g: &QuadraticForm) -> bool {
    let Ok(g) = g.extend_to(f.tower()) else {
        return false;
    };
    if f.rank() != g.rank() {
        return false;
    }
    if f.tower()
        .embeddings()
        .iter()
        .any(|s| f.signature(s) != g.signature(s))
    {
        return false;
    }
    let ratio = f
        .determinant()
        .checked_div(&g.determinant())
        .expect("regular forms");
    if !ratio.is_square() {
        return false;
    }
    let fc = f.cleared();
    let gc = g.cleared();
    localarith::relevant_finite_places(f.tower(), [&fc, &gc])
        .iter()
        .all(|p| localarith::hasse_invariant(&fc, p) == localarith::hasse_invariant(&gc, p))
}

/// Signature `(n, 1)` at the identity and definite at every other embedding.
pub fn is_admissible(g: &QuadraticForm, n: usize) -> Result<bool> {
    if g.rank() != n + 1 {
        return Err(Error::RankMismatch {
            expected: n + 1,
            found: g.rank(),
        });
    }
    for sigma in g.tower().embeddings() {
        let (p, q) = g.signature(&sigma);
        let ok = if sigma.is_identity() {
            (p, q) == (n, 1)
        } else {
            p == 0 || q == 0
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, c) in self.diagonal.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "⟩ over {}", self.tower)
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
