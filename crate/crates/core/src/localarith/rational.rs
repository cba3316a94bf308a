use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{legendre, unit_part};

/// A rational place: a prime, or `None` for the real place.
pub type RationalPlace = Option<u64>;

/// Classical Hilbert symbol `(a, b)_v` over `Q`.
pub fn hilbert_symbol_q(a: &BigRational, b: &BigRational, v: RationalPlace) -> i8 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    match v {
        None => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Some(2) => {
            let (al, ua) = odd_unit(a);
            let (be, ub) = odd_unit(b);
            let e = eps(&ua) * eps(&ub) + al * omega(&ub) + be * omega(&ua);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Some(p) => {
            let (al, ua) = unit_mod(a, p);
            let (be, ub) = unit_mod(b, p);
            let mut s: i8 = if (al * be) % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
            if be % 2 == 1 {
                s *= legendre(&ua, p);
            }
            if al % 2 == 1 {
                s *= legendre(&ub, p);
            }
            s
        }
    }
}

/// Valuation at 2 and the 2-adic unit part reduced modulo 8.
fn odd_unit(q: &BigRational) -> (i64, BigInt) {
    let (v, num, den) = unit_part(q, 2);
    // num/den ≡ num·den mod 8 since den² ≡ 1
    let u = (num * den).mod_floor(&BigInt::from(8));
    (v.rem_euclid(2), u)
}

fn unit_mod(q: &BigRational, p: u64) -> (i64, BigInt) {
    let (v, num, den) = unit_part(q, p);
    (v.rem_euclid(2), num * den)
}

fn eps(u: &BigInt) -> i64 {
    let u = u.to_i64().expect("reduced mod 8");
    ((u - 1) / 2) % 2
}

fn omega(u: &BigInt) -> i64 {
    let u = u.to_i64().expect("reduced mod 8");
    ((u * u - 1) / 8) % 2
}
