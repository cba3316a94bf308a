//! Element literals: sums of `RAT`, `RAT*sqrt(INT)`, `sqrt(INT)` and `cospi(m)` terms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{FieldElement, FieldTower};
use crate::arith::squarefree_part;
use crate::error::{Error, Result};

/// `cos(π/m)` for the labels whose cosine lies in a multiquadratic field.
pub fn cos_pi_over(m: u64) -> Option<FieldElement> {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let terms: Vec<(BigRational, u64)> = match m {
        2 => vec![],
        3 => vec![(q(1, 2), 1)],
        4 => vec![(q(1, 2), 2)],
        5 => vec![(q(1, 4), 1), (q(1, 4), 5)],
        6 => vec![(q(1, 2), 3)],
        12 => vec![(q(1, 4), 6), (q(1, 4), 2)],
        _ => return None,
    };
    Some(sum_terms(&terms))
}

fn sum_terms(terms: &[(BigRational, u64)]) -> FieldElement {
    let tower = FieldTower::from_group_generators(terms.iter().map(|t| t.1));
    let mut acc = FieldElement::zero(&tower);
    for (c, m) in terms {
        let root = FieldElement::sqrt_of(&tower, *m).expect("radicand in generated tower");
        acc = &acc + &root.scale(c);
    }
    acc
}

/// Parses a literal over the smallest tower containing its radicals.
pub fn parse_element(text: &str) -> Result<FieldElement> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Literal("empty literal".into()));
    }
    let mut p = Parser {
        s: compact.as_bytes(),
        pos: 0,
        text,
    };
    let mut terms: Vec<(BigRational, u64)> = Vec::new();
    let mut extra: Vec<FieldElement> = Vec::new();
    let mut first = true;
    while p.pos < p.s.len() {
        let mut sign = BigRational::one();
        match p.peek() {
            Some(b'+') => p.pos += 1,
            Some(b'-') => {
                sign = -sign;
                p.pos += 1;
            }
            _ if first => {}
            _ => return Err(p.err("expected '+' or '-'")),
        }
        first = false;
        // RAT carries its own optional sign, as in `1 + -2*sqrt(3)`
        match p.peek() {
            Some(b'-') => {
                sign = -sign;
                p.pos += 1;
            }
            Some(b'+') => p.pos += 1,
            _ => {}
        }
        p.term(&sign, &mut terms, &mut extra)?;
    }
    let mut acc = sum_terms(&terms);
    for x in &extra {
        acc = &acc + x;
    }
    let minimal = super::minimal_field_of([&acc]);
    Ok(acc.coerce(&minimal).expect("element lies in its minimal field"))
}

/// Parses a literal and coerces it into `tower`.
pub fn parse_element_in(text: &str, tower: &FieldTower) -> Result<FieldElement> {
    parse_element(text)?.coerce(tower)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Literal(format!("{msg} in `{}`", self.text.trim()))
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn rational(&mut self) -> Result<Option<BigRational>> {
        let Some(n) = self.integer() else {
            return Ok(None);
        };
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.integer().ok_or_else(|| self.err("expected denominator"))?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(Some(BigRational::new(n, d)));
        }
        Ok(Some(BigRational::from_integer(n)))
    }

    fn term(
        &mut self,
        sign: &BigRational,
        terms: &mut Vec<(BigRational, u64)>,
        extra: &mut Vec<FieldElement>,
    ) -> Result<()> {
        let coeff = match self.rational()? {
            Some(c) => {
                if self.peek() != Some(b'*') {
                    terms.push((sign * c, 1));
                    return Ok(());
                }
                self.pos += 1;
                sign * c
            }
            None => sign.clone(),
        };
        let mut coeff = coeff;
        if self.eat("sqrt(") {
            let arg = self.closing_arg()?;
            let m = parse_radicand(&arg, self)?;
            coeff *= self.divisor()?;
            let sq = squarefree_part(m);
            let s = ((m / sq) as f64).sqrt().round() as i64;
            terms.push((coeff * BigRational::from_integer(s.into()), sq));
        } else if self.eat("cospi(") {
            let arg = self.closing_arg()?;
            let m: u64 = arg.parse().map_err(|_| self.err("expected integer in cospi"))?;
            let c = cos_pi_over(m)
                .ok_or_else(|| self.err(&format!("cospi({m}) is not multiquadratic")))?;
            coeff *= self.divisor()?;
            extra.push(c.scale(&coeff));
        } else {
            return Err(self.err("expected a rational, sqrt(..) or cospi(..)"));
        }
        Ok(())
    }

    /// Optional `/INT` after a radical, as in `sqrt(2)/2`.
    fn divisor(&mut self) -> Result<BigRational> {
        if self.peek() != Some(b'/') {
            return Ok(BigRational::one());
        }
        self.pos += 1;
        let d = self.integer().ok_or_else(|| self.err("expected denominator"))?;
        if d.is_zero() {
            return Err(self.err("zero denominator"));
        }
        Ok(BigRational::new(BigInt::one(), d))
    }

    fn closing_arg(&mut self) -> Result<String> {
        let start = self.pos;
        let mut depth = 1;
        while let Some(c) = self.peek() {
            self.pos += 1;
            match c {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        let arg = &self.s[start..self.pos - 1];
                        return Ok(String::from_utf8_lossy(arg).into_owned());
                    }
                }
                _ => {}
            }
        }
        Err(self.err("unbalanced parenthesis"))
    }
}

fn parse_radicand(arg: &str, p: &Parser<'_>) -> Result<u64> {
    if arg.contains("sqrt") || arg.contains("cospi") {
        return Err(Error::NestedRadical(p.text.trim().to_string()));
    }
    let n: BigInt = arg
        .parse()
        .map_err(|_| p.err("sqrt argument must be an integer"))?;
    if !n.is_positive() {
        return Err(Error::NotTotallyReal(n.to_i64().unwrap_or(i64::MIN)));
    }
    n.to_u64().ok_or_else(|| p.err("radicand too large"))
}
