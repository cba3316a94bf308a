//! Integer and p-adic helpers shared by the field and local-arithmetic code.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Squarefree part of a positive integer.
pub fn squarefree_part(n: u64) -> u64 {
    assert!(n > 0, "squarefree_part of zero");
    factor_u64(n)
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product()
}

/// Product of two squarefree integers reduced to its squarefree part.
pub fn squarefree_mul(a: u64, b: u64) -> u64 {
    let g = a.gcd(&b);
    (a / g).checked_mul(b / g).expect("radicand overflow")
}

pub fn factor_u64(n: u64) -> BTreeMap<u64, usize> {
    if n <= 1 {
        return BTreeMap::new();
    }
    num_prime::nt_funcs::factorize64(n)
}

/// Prime factors of `|n|`, with multiplicity.
pub fn factor_big(n: &BigInt) -> BTreeMap<BigUint, usize> {
    let m = n.magnitude().clone();
    if m <= BigUint::one() {
        return BTreeMap::new();
    }
    if let Some(small) = m.to_u64() {
        return factor_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
    }
    num_prime::nt_funcs::factorize(m)
}

/// Rational primes dividing the numerator or the denominator of `q`, or `None` when one of
/// them does not fit in a `u64`.
pub fn primes_of_rational(q: &BigRational) -> Option<Vec<u64>> {
    let mut out = factor_big(q.numer())
        .into_keys()
        .chain(factor_big(q.denom()).into_keys())
        .map(|p| p.to_u64())
        .collect::<Option<Vec<u64>>>()?;
    out.sort_unstable();
    out.dedup();
    Some(out)
}

/// Exact square root of a non-negative rational, when it is a square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// p-adic valuation of a nonzero integer.
pub fn val_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn val_rat(q: &BigRational, p: u64) -> i64 {
    val_int(q.numer(), p) - val_int(q.denom(), p)
}

/// `q / p^v(q)` split into numerator and denominator, both prime to `p`.
pub fn unit_part(q: &BigRational, p: u64) -> (i64, BigInt, BigInt) {
    let v = val_rat(q, p);
    let pp = BigInt::from(p);
    let mut num = q.numer().clone();
    let mut den = q.denom().clone();
    if v > 0 {
        num /= pp.pow(v as u32);
    } else if v < 0 {
        den /= pp.pow((-v) as u32);
    }
    (v, num, den)
}

/// Legendre symbol `(a | p)` for an odd prime `p`, returning 0 when `p | a`.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return 0;
    }
    let r = a.modpow(&BigInt::from((p - 1) / 2), &pb);
    if r.is_one() {
        1
    } else {
        -1
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible modulo m");
    e.x.mod_floor(m)
}

/// Reduce a rational with `p`-integral value modulo `p^k` to an integer in `[0, p^k)`.
pub fn rational_mod_pk(q: &BigRational, p: u64, k: u32) -> BigInt {
    let m = BigInt::from(p).pow(k);
    let d = q.denom().mod_floor(&m);
    (q.numer() * mod_inverse(&d, &m)).mod_floor(&m)
}

/// Replace `q` by a rational agreeing with it to p-adic absolute precision `abs_prec`
/// (difference has valuation at least `abs_prec`), with small height.
pub fn truncate_padic(q: &BigRational, p: u64, abs_prec: i64) -> BigRational {
    if q.is_zero() {
        return BigRational::zero();
    }
    let (v, num, den) = unit_part(q, p);
    if v >= abs_prec {
        return BigRational::zero();
    }
    let k = (abs_prec - v) as u32;
    let unit = rational_mod_pk(&BigRational::new(num, den), p, k);
    let pp = BigInt::from(p);
    if v >= 0 {
        BigRational::from_integer(unit * pp.pow(v as u32))
    } else {
        BigRational::new(unit, pp.pow((-v) as u32))
    }
}

/// A p-adic square root of the rational `q` to absolute precision `abs_prec`.
///
/// Returns `None` when `q` is not a square in `Q_p`.
pub fn padic_sqrt(q: &BigRational, p: u64, abs_prec: i64) -> Option<BigRational> {
    assert!(!q.is_zero());
    let (v, num, den) = unit_part(q, p);
    if v % 2 != 0 {
        return None;
    }
    let half = v / 2;
    // unit square root to relative precision abs_prec - half (+ slack for p = 2)
    let rel = (abs_prec - half).max(1) as u32 + 2;
    let modulus = BigInt::from(p).pow(rel + 1);
    let u = (&num * mod_inverse(&den, &modulus)).mod_floor(&modulus);
    let root = if p == 2 {
        if u.mod_floor(&BigInt::from(8)) != BigInt::one() {
            return None;
        }
        // x^2 = u mod 2^k (k >= 3): one of x, x + 2^(k-1) works mod 2^(k+1)
        let mut x = BigInt::one();
        for k in 3..=rel {
            let m = BigInt::from(2).pow(k + 1);
            if !(&x * &x - &u).mod_floor(&m).is_zero() {
                x += BigInt::from(2).pow(k - 1);
            }
        }
        x
    } else {
        if legendre(&u, p) != 1 {
            return None;
        }
        let pb = BigInt::from(p);
        // the root with least residue fixes the labelling of split primes
        let r = sqrt_mod_prime(&u, p);
        let mut x = std::cmp::min(r.clone(), &pb - r);
        let mut prec = 1u32;
        while prec < rel + 1 {
            prec = (2 * prec).min(rel + 1);
            let m = pb.pow(prec);
            let two_x = (&x * BigInt::from(2)).mod_floor(&m);
            let corr = ((&x * &x - &u) * mod_inverse(&two_x, &m)).mod_floor(&m);
            x = (&x - corr).mod_floor(&m);
        }
        x
    };
    let pp = BigInt::from(p);
    let scaled = if half >= 0 {
        BigRational::from_integer(root * pp.pow(half as u32))
    } else {
        BigRational::new(root, pp.pow((-half) as u32))
    };
    Some(truncate_padic(&scaled, p, abs_prec))
}

/// Tonelli–Shanks square root of a quadratic residue modulo an odd prime.
pub fn sqrt_mod_prime(a: &BigInt, p: u64) -> BigInt {
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return a;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p)
        .map(BigInt::from)
        .find(|z| legendre(z, p) == -1)
        .expect("nonresidue exists");
    let mut m = s;
    let mut c = z.modpow(&BigInt::from(q), &pb);
    let mut t = a.modpow(&BigInt::from(q), &pb);
    let mut r = a.modpow(&BigInt::from((q + 1) / 2), &pb);
    while !t.is_one() {
        let mut i = 0u32;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2).mod_floor(&pb);
            i += 1;
        }
        assert!(i < m, "not a quadratic residue");
        let b = c.modpow(&BigInt::from(1u64 << (m - i - 1)), &pb);
        m = i;
        c = (&b * &b).mod_floor(&pb);
        t = (&t * &c).mod_floor(&pb);
        r = (&r * &b).mod_floor(&pb);
    }
    r
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_positive(q: &BigRational) -> bool {
    q.numer().sign() == Sign::Plus
}
