//! Certified high-precision values of `ζ(s)` and `L(χ₈, s)` and the volume identity of
//! the Coxeter simplex `Δ₅`.

mod ball;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

pub use ball::BigDecimal;

/// Largest supported number of requested digits.
pub const MAX_DIGITS: u32 = 60;
/// Extra decimal digits carried beyond the request.
pub const GUARD_DIGITS: u32 = 15;
/// Euler–Maclaurin uses `B_2, …, B_{2M}`; `B_{2M+2}` bounds the remainder.
const EM_TERMS: usize = 14;
/// The published value of the `Δ₅` volume.
pub const DELTA5_VOLUME: &str = "0.00757347442200786763497722";

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Binary exponent giving `digits + GUARD_DIGITS` decimal digits.
pub fn working_exponent(digits: u32) -> i64 {
    let bits = ((digits + GUARD_DIGITS) as f64 * std::f64::consts::LOG2_10).ceil() as i64;
    -(bits + 16)
}

fn ten_pow_neg(d: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u32).pow(d))
}

/// Exact `B_0, …, B_30` (with `B_1 = +1/2`) by the Akiyama–Tanigawa algorithm.
pub fn bernoulli() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let count = 2 * (EM_TERMS + 1) + 1;
        let mut a: Vec<BigRational> = Vec::with_capacity(count);
        let mut out = Vec::with_capacity(count);
        for m in 0..count {
            a.push(rat(1, m as i64 + 1));
            for j in (1..=m).rev() {
                a[j - 1] = int(j as i64) * (&a[j - 1] - &a[j]);
            }
            out.push(a[0].clone());
        }
        out
    })
}

/// The primitive character of conductor 8 attached to `Q(√2)`.
pub fn chi8(n: i64) -> i8 {
    match n.rem_euclid(8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

/// `s(s+1)⋯(s+k−1)`.
fn rising(s: u32, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(s as u64 + i as u64))
}

fn pow_neg(x: &BigRational, e: u32) -> BigRational {
    let mut p = BigRational::one();
    for _ in 0..e {
        p *= x;
    }
    p.recip()
}

/// `k`-th Euler–Maclaurin correction `B_{2k}/(2k)! · (s)_{2k−1} · x^{−s−2k+1}`.
fn em_term(s: u32, x: &BigRational, k: usize) -> BigRational {
    let b = &bernoulli()[2 * k];
    let fact: BigInt = (1..=2 * k as u64).map(BigInt::from).product();
    b * int(rising(s, 2 * k - 1)) / int(fact) * pow_neg(x, s + 2 * k as u32 - 1)
}

/// Bound on the Euler–Maclaurin remainder after `EM_TERMS` corrections at cutoff `x`.
///
/// All even derivatives of `x^{−s}` are positive, so the remainder is a fraction of the
/// first omitted correction.
pub fn em_remainder_bound(s: u32, x: &BigRational) -> BigRational {
    em_term(s, x, EM_TERMS + 1).abs()
}

/// Smallest cutoff in a geometric ladder whose remainder bound is below `target`.
fn cutoff_for(s: u32, offset: &BigRational, target: &BigRational) -> u64 {
    let mut n = 4u64;
    while &em_remainder_bound(s, &(int(n) + offset)) > target {
        n += n / 4 + 1;
    }
    n
}

/// `ζ(s, a) = Σ_{n≥0} (n + a)^{−s}` summed to `n = N − 1`, with Euler–Maclaurin tail.
pub fn hurwitz_zeta_cutoff(s: u32, a: &BigRational, n_cut: u64, exp: i64) -> BigDecimal {
    assert!(s >= 2, "s ≥ 2");
    assert!(a.is_positive(), "a > 0");
    let mut acc = BigDecimal::from_int(0, exp);
    // small terms first
    for n in (0..n_cut).rev() {
        acc = &acc + &BigDecimal::from_rational(&pow_neg(&(int(n) + a), s), exp);
    }
    let x = int(n_cut) + a;
    let mut tail = pow_neg(&x, s - 1) / int(s as i64 - 1) + pow_neg(&x, s) / int(2);
    for k in 1..=EM_TERMS {
        tail += em_term(s, &x, k);
    }
    let acc = &acc + &BigDecimal::from_rational(&tail, exp);
    acc.widen(&em_remainder_bound(s, &x))
}

/// `ζ(s)` with certified error at most `10^{−digits}`.
pub fn zeta(s: u32, digits: u32) -> BigDecimal {
    assert!(digits <= MAX_DIGITS, "digits ≤ {MAX_DIGITS}");
    let exp = working_exponent(digits);
    let one = BigRational::one();
    let n = cutoff_for(s, &one, &ten_pow_neg(digits + GUARD_DIGITS));
    hurwitz_zeta_cutoff(s, &one, n, exp)
}

/// `ζ(s)` at an explicit cutoff; used to compare independent summations.
pub fn zeta_cutoff(s: u32, n_cut: u64, digits: u32) -> BigDecimal {
    hurwitz_zeta_cutoff(s, &BigRational::one(), n_cut, working_exponent(digits))
}

/// `L(χ₈, s) = 8^{−s} Σ_j χ₈(j) ζ(s, j/8)` with certified error at most `10^{−digits}`.
pub fn dirichlet_l_chi8(s: u32, digits: u32) -> BigDecimal {
    assert!(digits <= MAX_DIGITS, "digits ≤ {MAX_DIGITS}");
    let exp = working_exponent(digits);
    let target = ten_pow_neg(digits + GUARD_DIGITS);
    let mut acc = BigDecimal::from_int(0, exp);
    for j in [1i64, 3, 5, 7] {
        let a = rat(j, 8);
        let n = cutoff_for(s, &a, &target);
        let h = hurwitz_zeta_cutoff(s, &a, n, exp);
        acc = if chi8(j) > 0 { &acc + &h } else { &acc - &h };
    }
    let eight_s = int(BigInt::from(8u32).pow(s));
    &acc * &BigDecimal::from_rational(&eight_s.recip(), exp - 8)
}

/// `L(χ₈, s)` from the first `8·blocks` terms of the series alone.
///
/// Each block `1/(8m+1)^s − 1/(8m+3)^s − 1/(8m+5)^s + 1/(8m+7)^s` is positive and at most
/// `1/(8m+1)^s − 1/(8m+9)^s`, so `L` lies in `[S, S + (8·blocks + 1)^{−s}]`.
pub fn dirichlet_l_chi8_direct(s: u32, blocks: u64, digits: u32) -> BigDecimal {
    let exp = working_exponent(digits);
    let mut acc = BigDecimal::from_int(0, exp);
    for n in (1..=8 * blocks).rev() {
        let c = chi8(n as i64);
        if c == 0 {
            continue;
        }
        let t = BigDecimal::from_rational(&pow_neg(&int(n), s), exp);
        acc = if c > 0 { &acc + &t } else { &acc - &t };
    }
    let tail = pow_neg(&int(8 * blocks + 1), s);
    let half = &tail / int(2);
    (&acc + &BigDecimal::from_rational(&half, exp)).widen(&half)
}

/// `arctan(1/x)` by its alternating series, truncation error added to the radius.
fn arctan_inv(x: i64, exp: i64) -> BigDecimal {
    let eps = {
        let e = -exp;
        BigRational::new(BigInt::one(), BigInt::one() << e as usize)
    };
    let mut acc = BigDecimal::from_int(0, exp);
    let mut k = 0i64;
    loop {
        let term = BigRational::new(BigInt::one(), BigInt::from(2 * k + 1) * BigInt::from(x).pow(2 * k as u32 + 1));
        if term < eps {
            return acc.widen(&term);
        }
        let t = BigDecimal::from_rational(&term, exp);
        acc = if k % 2 == 0 { &acc + &t } else { &acc - &t };
        k += 1;
    }
}

/// `π = 16 arctan(1/5) − 4 arctan(1/239)`.
pub fn pi(digits: u32) -> BigDecimal {
    let exp = working_exponent(digits);
    let a = arctan_inv(5, exp);
    let b = arctan_inv(239, exp);
    &(&a * &BigDecimal::from_int(16, exp)) - &(&b * &BigDecimal::from_int(4, exp))
}

/// Outcome of [`delta5_volume_check`].
#[derive(Clone, Debug, Serialize)]
pub struct VolumeCheck {
    pub digits: u32,
    /// Numerator of the `ζ(3)` coefficient over `2⁹·3²·5`.
    pub zeta_numerator: i64,
    pub value: String,
    pub error: f64,
    pub reference: &'static str,
    /// `|value − reference|` upper bound, from the certified interval.
    pub distance: f64,
    pub tolerance: f64,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(skip)]
    pub ball: BigDecimal,
}

/// Evaluates `73/(2⁹·3²·5)·ζ(3) + 1/(2³·3²·5)·√2·L(χ₈,3)` and compares it with
/// [`DELTA5_VOLUME`].
pub fn delta5_volume_check(digits: u32) -> VolumeCheck {
    volume_check_with(73, digits)
}

/// The volume check with the `ζ(3)` coefficient numerator replaced; a control for
/// the sensitivity of the comparison.
///
/// The match tolerance is `10^{−digits}·|reference| + 10^{−26} + error`: the relative part
/// asks for `digits` significant digits and the absolute part covers the rounding of
/// the 26-place reference.
pub fn volume_check_with(zeta_numerator: i64, digits: u32) -> VolumeCheck {
    assert!((1..=MAX_DIGITS).contains(&digits), "digits in 1..={MAX_DIGITS}");
    let exp = working_exponent(digits);
    let z3 = zeta(3, digits);
    let l3 = dirichlet_l_chi8(3, digits);
    let sqrt2 = BigDecimal::sqrt_int(2, exp);
    let c1 = BigDecimal::from_rational(&rat(zeta_numerator, 512 * 9 * 5), exp);
    let c2 = BigDecimal::from_rational(&rat(1, 8 * 9 * 5), exp);
    let value = &(&c1 * &z3) + &(&(&c2 * &sqrt2) * &l3);
    let reference = parse_decimal(DELTA5_VOLUME);
    let error = value.radius();
    let tolerance = ten_pow_neg(digits) * reference.abs() + ten_pow_neg(26) + &error;
    let distance = (value.midpoint() - &reference).abs() + &error;
    let matches = (value.midpoint() - &reference).abs() <= tolerance;
    let places = digits as usize + 3;
    VolumeCheck {
        digits,
        zeta_numerator,
        value: value.to_decimal(places),
        error: value.radius_f64(),
        reference: DELTA5_VOLUME,
        distance: distance.to_f64().unwrap_or(f64::INFINITY),
        tolerance: tolerance.to_f64().unwrap_or(f64::INFINITY),
        matches,
        ball: value,
    }
}

/// Exact value of a plain decimal literal.
pub fn parse_decimal(s: &str) -> BigRational {
    let (neg, s) = s.strip_prefix('-').map_or((false, s), |r| (true, r));
    let (int_part, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int_part}{frac}").parse().expect("decimal literal");
    let q = BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32));
    if neg {
        -q
    } else {
        q
    }
}

/// `ζ(2) − π²/6` should vanish; returns both sides.
pub fn zeta2_against_pi(digits: u32) -> (BigDecimal, BigDecimal) {
    let p = pi(digits);
    let rhs = (&p * &p).div_int(6);
    (zeta(2, digits), rhs)
}
