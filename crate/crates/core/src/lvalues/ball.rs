//! Binary fixed-point numbers with a certified error radius.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The interval `(mid ± rad) · 2^exp`, `rad ≥ 0`.
///
/// Every operation returns an interval containing all results of the exact operation on
/// points of its operands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigDecimal {
    mid: BigInt,
    rad: BigInt,
    exp: i64,
}

fn shl(x: &BigInt, k: i64) -> BigInt {
    debug_assert!(k >= 0);
    x << (k as usize)
}

/// `⌈x / 2^k⌉` for `x ≥ 0`.
fn ceil_shr(x: &BigInt, k: i64) -> BigInt {
    let d = BigInt::one() << (k as usize);
    x.div_ceil(&d)
}

impl BigDecimal {
    /// The exact integer `n`.
    pub fn from_int(n: i64, exp: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()), exp)
    }

    /// `q` rounded to a multiple of `2^exp`, with radius one unit.
    pub fn from_rational(q: &BigRational, exp: i64) -> Self {
        let scaled = if exp <= 0 {
            q * BigRational::from_integer(BigInt::one() << (-exp) as usize)
        } else {
            q / BigRational::from_integer(BigInt::one() << exp as usize)
        };
        let mid = scaled.floor().to_integer();
        let rad = if BigRational::from_integer(mid.clone()) == scaled {
            BigInt::zero()
        } else {
            BigInt::one()
        };
        BigDecimal { mid, rad, exp }
    }

    /// `√n` by integer square root, radius one unit.
    pub fn sqrt_int(n: u64, exp: i64) -> Self {
        assert!(exp <= 0, "sqrt needs a fractional exponent");
        let scaled = BigInt::from(n) << (-2 * exp) as usize;
        let mid = scaled.sqrt();
        let rad = if &mid * &mid == scaled {
            BigInt::zero()
        } else {
            BigInt::one()
        };
        BigDecimal { mid, rad, exp }
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn midpoint(&self) -> BigRational {
        scale(&self.mid, self.exp)
    }

    /// The certified error bound.
    pub fn radius(&self) -> BigRational {
        scale(&self.rad, self.exp)
    }

    pub fn lower(&self) -> BigRational {
        scale(&(&self.mid - &self.rad), self.exp)
    }

    pub fn upper(&self) -> BigRational {
        scale(&(&self.mid + &self.rad), self.exp)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    /// Whether `other` lies inside `self`.
    pub fn encloses(&self, other: &BigDecimal) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &BigDecimal) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Widens the radius by `e ≥ 0`, rounded up to the grid.
    pub fn widen(&self, e: &BigRational) -> Self {
        assert!(!e.is_negative(), "negative widening");
        let units = if self.exp <= 0 {
            e * BigRational::from_integer(BigInt::one() << (-self.exp) as usize)
        } else {
            e / BigRational::from_integer(BigInt::one() << self.exp as usize)
        };
        BigDecimal {
            mid: self.mid.clone(),
            rad: &self.rad + units.ceil().to_integer(),
            exp: self.exp,
        }
    }

    /// Rounds onto the coarser grid `2^exp`.
    pub fn round_to(&self, exp: i64) -> Self {
        if exp <= self.exp {
            return self.align(exp);
        }
        let k = exp - self.exp;
        let d = BigInt::one() << k as usize;
        let (mid, rem) = self.mid.div_mod_floor(&d);
        let extra = if rem.is_zero() { 0 } else { 1 };
        BigDecimal {
            mid,
            rad: ceil_shr(&self.rad, k) + extra,
            exp,
        }
    }

    fn align(&self, exp: i64) -> Self {
        debug_assert!(exp <= self.exp);
        let k = self.exp - exp;
        BigDecimal {
            mid: shl(&self.mid, k),
            rad: shl(&self.rad, k),
            exp,
        }
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, d: i64) -> Self {
        assert!(d != 0, "division by zero");
        let d = BigInt::from(d);
        let (mid, rem) = self.mid.div_mod_floor(&d);
        let extra = if rem.is_zero() { 0 } else { 1 };
        BigDecimal {
            mid,
            rad: self.rad.div_ceil(&d.abs()) + extra,
            exp: self.exp,
        }
    }

    /// Fixed-point decimal with `places` digits after the point, truncated toward −∞.
    pub fn to_decimal(&self, places: usize) -> String {
        let q = self.midpoint() * BigRational::from_integer(BigInt::from(10u32).pow(places as u32));
        let n = q.floor().to_integer();
        let sign = if n.sign() == Sign::Minus { "-" } else { "" };
        let digits = n.abs().to_string();
        let digits = format!("{digits:0>width$}", width = places + 1);
        let (int, frac) = digits.split_at(digits.len() - places);
        if places == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    pub fn radius_f64(&self) -> f64 {
        self.radius().to_f64().unwrap_or(f64::INFINITY)
    }
}

fn scale(x: &BigInt, exp: i64) -> BigRational {
    if exp >= 0 {
        BigRational::from_integer(shl(x, exp))
    } else {
        BigRational::new(x.clone(), BigInt::one() << (-exp) as usize)
    }
}

impl Add for &BigDecimal {
    type Output = BigDecimal;
    fn add(self, other: &BigDecimal) -> BigDecimal {
        let exp = self.exp.min(other.exp);
        let (a, b) = (self.align(exp), other.align(exp));
        BigDecimal {
            mid: a.mid + b.mid,
            rad: a.rad + b.rad,
            exp,
        }
    }
}

impl Sub for &BigDecimal {
    type Output = BigDecimal;
    fn sub(self, other: &BigDecimal) -> BigDecimal {
        self + &(-other)
    }
}

impl Neg for &BigDecimal {
    type Output = BigDecimal;
    fn neg(self) -> BigDecimal {
        BigDecimal {
            mid: -&self.mid,
            rad: self.rad.clone(),
            exp: self.exp,
        }
    }
}

impl Mul for &BigDecimal {
    type Output = BigDecimal;
    /// Rounded onto the finer of the two operand grids.
    fn mul(self, other: &BigDecimal) -> BigDecimal {
        // |xy − ab| ≤ |a|·r_b + |b|·r_a + r_a·r_b
        let rad = self.mid.abs() * &other.rad + other.mid.abs() * &self.rad + &self.rad * &other.rad;
        let exact = BigDecimal {
            mid: &self.mid * &other.mid,
            rad,
            exp: self.exp + other.exp,
        };
        exact.round_to(self.exp.min(other.exp))
    }
}

impl fmt::Display for BigDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = ((-self.exp).max(0) as f64 * std::f64::consts::LOG10_2) as usize;
        write!(f, "{} ± {:.3e}", self.to_decimal(places), self.radius_f64())
    }
}
