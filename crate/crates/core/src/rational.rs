//! Exact rationals, extended bounds and closed intervals.
//!
//! All numeric data in the crate is a [`Rational`]. Infinities only ever
//! appear as a [`Bound`] of an [`Interval`]; they never enter arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational in canonical form (positive denominator,
/// coprime parts).
pub type Rational = BigRational;

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds `num/den`, reduced. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational {input:?}: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

fn digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Parses `"p"` or `"p/q"` where `p` may carry a leading `-`. Whitespace,
/// `+` signs and zero denominators are rejected.
pub fn parse_rational(input: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: input.to_string(),
        reason,
    };
    let (neg, body) = match input.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, input),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    if !digits(num) {
        return Err(err("numerator must be a decimal integer"));
    }
    let mut numer: BigInt = num.parse().map_err(|_| err("numerator out of range"))?;
    if neg {
        numer = -numer;
    }
    let denom: BigInt = match den {
        None => BigInt::one(),
        Some(d) => {
            if !digits(d) {
                return Err(err("denominator must be a decimal integer"));
            }
            d.parse().map_err(|_| err("denominator out of range"))?
        }
    };
    if denom.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A value in the extended reals. Derived ordering puts `NegInf` below every
/// finite value and `PosInf` above.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Bound {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Bound::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    /// Accepts any rational plus `"inf"` and `"-inf"`.
    pub fn parse(input: &str) -> Result<Bound, ParseRationalError> {
        match input {
            "inf" => Ok(Bound::PosInf),
            "-inf" => Ok(Bound::NegInf),
            other => parse_rational(other).map(Bound::Finite),
        }
    }
}

impl From<Rational> for Bound {
    fn from(q: Rational) -> Self {
        Bound::Finite(q)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::PosInf => f.write_str("inf"),
            Bound::Finite(q) => f.write_str(&format_rational(q)),
        }
    }
}

/// Which end of an interval a value sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Lower,
    Upper,
}

/// Closed interval `[lo, hi]` in the extended reals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Self {
        Interval { lo, hi }
    }

    pub fn free() -> Self {
        Interval::new(Bound::NegInf, Bound::PosInf)
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Interval::new(Bound::Finite(lo), Bound::Finite(hi))
    }

    pub fn point(x: Rational) -> Self {
        Interval::closed(x.clone(), x)
    }

    pub fn at_most(hi: Rational) -> Self {
        Interval::new(Bound::NegInf, Bound::Finite(hi))
    }

    pub fn at_least(lo: Rational) -> Self {
        Interval::new(Bound::Finite(lo), Bound::PosInf)
    }

    /// Symmetric interval `[-c, c]`.
    pub fn symmetric(c: Rational) -> Self {
        Interval::closed(-c.clone(), c)
    }

    /// Lower bound may not be `+inf`, upper may not be `-inf`, and `lo <= hi`.
    pub fn is_well_formed(&self) -> bool {
        self.lo != Bound::PosInf && self.hi != Bound::NegInf && self.lo <= self.hi
    }

    pub fn has_finite_side(&self) -> bool {
        self.lo.is_finite() || self.hi.is_finite()
    }

    pub fn is_fixed(&self) -> bool {
        matches!((&self.lo, &self.hi), (Bound::Finite(a), Bound::Finite(b)) if a == b)
    }

    pub fn bound(&self, side: Side) -> &Bound {
        match side {
            Side::Lower => &self.lo,
            Side::Upper => &self.hi,
        }
    }

    /// Finite sides, lower first; a fixed interval reports only `Lower`.
    pub fn finite_sides(&self) -> Vec<(Side, &Rational)> {
        let mut out = Vec::with_capacity(2);
        if let Bound::Finite(a) = &self.lo {
            out.push((Side::Lower, a));
        }
        if let Bound::Finite(b) = &self.hi {
            if self.lo.finite() != Some(b) {
                out.push((Side::Upper, b));
            }
        }
        out
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.above_lower(x) && self.below_upper(x)
    }

    pub fn above_lower(&self, x: &Rational) -> bool {
        match &self.lo {
            Bound::NegInf => true,
            Bound::Finite(a) => a <= x,
            Bound::PosInf => false,
        }
    }

    pub fn below_upper(&self, x: &Rational) -> bool {
        match &self.hi {
            Bound::PosInf => true,
            Bound::Finite(b) => x <= b,
            Bound::NegInf => false,
        }
    }

    pub fn at_lower(&self, x: &Rational) -> bool {
        self.lo.finite() == Some(x)
    }

    pub fn at_upper(&self, x: &Rational) -> bool {
        self.hi.finite() == Some(x)
    }

    /// True when `x` equals one of the finite bounds.
    pub fn is_active(&self, x: &Rational) -> bool {
        self.at_lower(x) || self.at_upper(x)
    }

    /// Largest `t >= 0` such that `x + t*|d|` and `x - t*|d|` both stay inside,
    /// per finite side hit by a nonzero `d`. `None` if no finite side limits it.
    pub(crate) fn two_sided_slack(&self, x: &Rational, d: &Rational) -> Option<Rational> {
        if d.is_zero() {
            return None;
        }
        let mag = d.abs();
        let mut best: Option<Rational> = None;
        for (side, b) in self.finite_sides_all() {
            let gap = match side {
                Side::Lower => x - b,
                Side::Upper => b - x,
            };
            let t = gap / &mag;
            best = Some(match best {
                Some(cur) if cur <= t => cur,
                _ => t,
            });
        }
        best
    }

    fn finite_sides_all(&self) -> Vec<(Side, &Rational)> {
        let mut out = Vec::with_capacity(2);
        if let Bound::Finite(a) = &self.lo {
            out.push((Side::Lower, a));
        }
        if let Bound::Finite(b) = &self.hi {
            out.push((Side::Upper, b));
        }
        out
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
