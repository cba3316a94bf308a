use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Embedding, FieldTower};
use crate::arith::rational_sqrt;
use crate::error::{Error, Result};

/// An element of a [`FieldTower`], as rational coordinates in the `α_I` basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    tower: FieldTower,
    coeffs: Vec<BigRational>,
}

impl FieldElement {
    pub fn zero(tower: &FieldTower) -> Self {
        Self {
            tower: tower.clone(),
            coeffs: vec![BigRational::zero(); tower.degree()],
        }
    }

    pub fn one(tower: &FieldTower) -> Self {
        Self::from_rational(tower, BigRational::one())
    }

    pub fn from_rational(tower: &FieldTower, q: BigRational) -> Self {
        let mut x = Self::zero(tower);
        x.coeffs[0] = q;
        x
    }

    pub fn from_int(tower: &FieldTower, n: i64) -> Self {
        Self::from_rational(tower, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_coeffs(tower: &FieldTower, coeffs: Vec<BigRational>) -> Self {
        assert_eq!(coeffs.len(), tower.degree());
        Self {
            tower: tower.clone(),
            coeffs,
        }
    }

    /// `√m` for a positive integer `m`, if it lies in the tower.
    pub fn sqrt_of(tower: &FieldTower, m: u64) -> Option<Self> {
        let sq = crate::arith::squarefree_part(m);
        let s2 = m / sq;
        let s = (s2 as f64).sqrt().round() as u64;
        debug_assert_eq!(s * s, s2);
        let mask = tower.locate_sqrt(sq)?;
        let mut x = Self::zero(tower);
        // √sq = α_I / s_I
        x.coeffs[mask] =
            BigRational::new(BigInt::from(s), tower.cofactor(mask).clone());
        Some(x)
    }

    /// The basis element `α_I`.
    pub fn basis(tower: &FieldTower, mask: usize) -> Self {
        let mut x = Self::zero(tower);
        x.coeffs[mask] = BigRational::one();
        x
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value, when the element is rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Squarefree integers `m_I` whose basis coefficient is nonzero.
    pub fn support(&self) -> Vec<u64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.tower.squarefree_of(i))
            .collect()
    }

    /// Re-express the element over another tower containing it.
    pub fn coerce(&self, target: &FieldTower) -> Result<Self> {
        if &self.tower == target {
            return Ok(self.clone());
        }
        let mut out = Self::zero(target);
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = self.tower.squarefree_of(mask);
            let Some(j) = target.locate_sqrt(m) else {
                return Err(Error::NotInField {
                    found: self.to_string(),
                    target: target.to_string(),
                });
            };
            // α_I = s_I √m = (s_I / s_J) α_J
            let factor = BigRational::new(
                self.tower.cofactor(mask).clone(),
                target.cofactor(j).clone(),
            );
            out.coeffs[j] += c * factor;
        }
        Ok(out)
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        let t = self.tower.join(&other.tower);
        (
            self.coerce(&t).expect("coerce into join"),
            other.coerce(&t).expect("coerce into join"),
        )
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Image under the automorphism flipping the signs of `√d_j` for `j` in `flip`.
    pub fn conjugate_mask(&self, flip: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if (i & flip).count_ones() % 2 == 1 {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect();
        Self {
            tower: self.tower.clone(),
            coeffs,
        }
    }

    pub fn conjugate(&self, sigma: &Embedding) -> Self {
        self.conjugate_mask(sigma.flip_mask())
    }

    /// `N_{K/Q}(x)`.
    pub fn norm(&self) -> BigRational {
        let mut cur = self.clone();
        for j in 0..self.tower.rank() {
            let c = cur.conjugate_mask(1 << j);
            cur = &cur * &c;
        }
        cur.coeffs[0].clone()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = Self::one(&self.tower);
        let mut cur = self.clone();
        for j in 0..self.tower.rank() {
            let c = cur.conjugate_mask(1 << j);
            num = &num * &c;
            cur = &cur * &c;
        }
        let n = cur.coeffs[0].clone();
        Ok(num.scale(&n.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.tower);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Exact sign of `σ(x)` for a real embedding `σ`.
    pub fn sign_at(&self, sigma: &Embedding) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let mut bits = 64u32;
        loop {
            let (lo, hi) = self.interval_at(sigma, bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    /// Enclosure of `σ(x)` using square roots truncated to `bits` fractional bits.
    pub fn interval_at(&self, sigma: &Embedding, bits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::one() << bits;
        let ulp = BigRational::new(BigInt::one(), scale.clone());
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = if sigma.sign_of_mask(mask) < 0 { -c } else { c.clone() };
            if mask == 0 {
                lo += &c;
                hi += &c;
                continue;
            }
            let p = self.tower.product(mask);
            let root = (p * &scale * &scale).sqrt();
            let r_lo = BigRational::new(root, scale.clone());
            let r_hi = &r_lo + &ulp;
            if c.is_positive() {
                lo += &c * &r_lo;
                hi += &c * &r_hi;
            } else {
                lo += &c * &r_hi;
                hi += &c * &r_lo;
            }
        }
        (lo, hi)
    }

    /// Floating-point value of `σ(x)`, for diagnostics.
    pub fn to_f64_at(&self, sigma: &Embedding) -> f64 {
        use num_traits::ToPrimitive;
        let (lo, hi) = self.interval_at(sigma, 80);
        ((lo + hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_at(&Embedding::identity(self.tower.rank()))
    }

    /// Square test with witness: `Some(y)` with `y² = x` when `x` is a square.
    pub fn sqrt(&self) -> Option<Self> {
        let r = self.tower.rank();
        let root = prefix_sqrt(&self.coeffs, &self.tower, r)?;
        let y = Self::from_coeffs(&self.tower, root);
        debug_assert_eq!(&y * &y, *self);
        Some(y)
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// Minimal polynomial over `Q`, monic, coefficients from constant term upwards.
    pub fn minimal_polynomial(&self) -> Vec<BigRational> {
        let mut orbit: Vec<Self> = Vec::new();
        for flip in 0..self.tower.degree() {
            let c = self.conjugate_mask(flip);
            if !orbit.contains(&c) {
                orbit.push(c);
            }
        }
        // ∏ (T - c) with field coefficients, low degree first
        let mut poly = vec![Self::one(&self.tower)];
        for c in &orbit {
            let mut next = vec![Self::zero(&self.tower); poly.len() + 1];
            for (i, a) in poly.iter().enumerate() {
                next[i + 1] = &next[i + 1] + a;
                next[i] = &next[i] - &(a * c);
            }
            poly = next;
        }
        poly.into_iter()
            .map(|a| a.to_rational().expect("orbit product has rational coefficients"))
            .collect()
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.minimal_polynomial().iter().all(|c| c.is_integer())
    }
}

fn prefix_mul(a: &[BigRational], b: &[BigRational], t: &FieldTower) -> Vec<BigRational> {
    let n = a.len();
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let shared = t.product(i & j);
            out[i ^ j] += x * y * shared;
        }
    }
    out
}

fn prefix_conj(a: &[BigRational], bit: usize) -> Vec<BigRational> {
    a.iter()
        .enumerate()
        .map(|(i, c)| if i >> bit & 1 == 1 { -c } else { c.clone() })
        .collect()
}

fn prefix_inverse(a: &[BigRational], t: &FieldTower, depth: usize) -> Vec<BigRational> {
    let n = a.len();
    let mut num = vec![BigRational::zero(); n];
    num[0] = BigRational::one();
    let mut cur = a.to_vec();
    for bit in 0..depth {
        let c = prefix_conj(&cur, bit);
        num = prefix_mul(&num, &c, t);
        cur = prefix_mul(&cur, &c, t);
    }
    let inv = cur[0].recip();
    num.into_iter().map(|c| c * &inv).collect()
}

/// Square root in the subfield generated by the first `depth` radicands.
///
/// For `F(√d)`, `x = u + v√d` is a square iff `N(x) = u² − d v²` is a square `s²` in `F`
/// and one of `(u ± s)/2` is a square `p²` in `F`; then `x = (p + v/(2p) √d)²`.
fn prefix_sqrt(x: &[BigRational], t: &FieldTower, depth: usize) -> Option<Vec<BigRational>> {
    if depth == 0 {
        return rational_sqrt(&x[0]).map(|r| vec![r]);
    }
    let half = 1usize << (depth - 1);
    let d = BigRational::from_integer(BigInt::from(t.radicands()[depth - 1]));
    let u = &x[..half];
    let v = &x[half..2 * half];
    let join = |lo: Vec<BigRational>, hi: Vec<BigRational>| -> Vec<BigRational> {
        lo.into_iter().chain(hi).collect()
    };
    let zeros = || vec![BigRational::zero(); half];
    if v.iter().all(Zero::is_zero) {
        if let Some(w) = prefix_sqrt(u, t, depth - 1) {
            return Some(join(w, zeros()));
        }
        // u = d·w²  ⇒  u = (w√d)²
        let u_over_d: Vec<BigRational> = u.iter().map(|c| c / &d).collect();
        return prefix_sqrt(&u_over_d, t, depth - 1).map(|w| join(zeros(), w));
    }
    let u2 = prefix_mul(u, u, t);
    let v2 = prefix_mul(v, v, t);
    let norm: Vec<BigRational> = u2.iter().zip(&v2).map(|(a, b)| a - b * &d).collect();
    let s = prefix_sqrt(&norm, t, depth - 1)?;
    let two = BigRational::from_integer(BigInt::from(2));
    for sign in [1i32, -1] {
        let cand: Vec<BigRational> = u
            .iter()
            .zip(&s)
            .map(|(a, b)| if sign > 0 { (a + b) / &two } else { (a - b) / &two })
            .collect();
        let Some(p) = prefix_sqrt(&cand, t, depth - 1) else {
            continue;
        };
        if p.iter().all(Zero::is_zero) {
            continue;
        }
        let two_p: Vec<BigRational> = p.iter().map(|c| c * &two).collect();
        let q = prefix_mul(v, &prefix_inverse(&two_p, t, depth - 1), t);
        let y = join(p, q);
        let full_len = 2 * half;
        let y2 = prefix_mul(&y, &y, t);
        if y2[..full_len] == x[..full_len] {
            return Some(y);
        }
    }
    None
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        if self.tower != rhs.tower {
            let (a, b) = self.unify(rhs);
            return &a + &b;
        }
        FieldElement {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        if self.tower != rhs.tower {
            let (a, b) = self.unify(rhs);
            return &a - &b;
        }
        FieldElement {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    /// `α_I · α_J = (∏_{j ∈ I∩J} d_j) · α_{I xor J}`.
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        if self.tower != rhs.tower {
            let (a, b) = self.unify(rhs);
            return &a * &b;
        }
        FieldElement {
            tower: self.tower.clone(),
            coeffs: prefix_mul(&self.coeffs, &rhs.coeffs, &self.tower),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        &self * &rhs
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Literal form: `1/2 + 1/2*sqrt(6)`; parses back with [`super::parse_element`].
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // c α_I = (c s_I) √m_I
            let c = c * BigRational::from_integer(self.tower.cofactor(mask).clone());
            let m = self.tower.squarefree_of(mask);
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if mask == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "sqrt({m})")?;
            } else {
                write!(f, "{mag}*sqrt({m})")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] in {}", self, self.tower)
    }
}
