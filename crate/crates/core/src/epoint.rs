//! Exact points of `E = ℂ/(ℤ+ℤη)` written as `a + bη` with `(a,b) ∈ (ℚ/ℤ)²`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cplx::C64;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EPoint {
    a: Rational64,
    b: Rational64,
}

fn frac(x: Rational64) -> Rational64 {
    x - x.floor()
}

impl EPoint {
    pub fn new(a: Rational64, b: Rational64) -> Self {
        EPoint { a: frac(a), b: frac(b) }
    }

    pub fn from_ints(p: i64, q: i64, r: i64, s: i64) -> Self {
        Self::new(Rational64::new(p, q), Rational64::new(r, s))
    }

    pub fn zero() -> Self {
        EPoint { a: Rational64::zero(), b: Rational64::zero() }
    }

    /// Real coordinate (in `[0,1)`).
    pub fn a(&self) -> Rational64 {
        self.a
    }

    /// `η`-coordinate (in `[0,1)`).
    pub fn b(&self) -> Rational64 {
        self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Smallest `m ≥ 1` with `m·p = 0`.
    pub fn order(&self) -> i64 {
        num_integer::lcm(*self.a.denom(), *self.b.denom())
    }

    /// The representative `a + bη` in the fundamental parallelogram.
    pub fn to_complex(&self, eta: C64) -> C64 {
        let a = *self.a.numer() as f64 / *self.a.denom() as f64;
        let b = *self.b.numer() as f64 / *self.b.denom() as f64;
        C64::new(a, 0.0) + eta * b
    }

    pub fn mul_int(self, m: i64) -> Self {
        EPoint::new(self.a * m, self.b * m)
    }
}

impl Add for EPoint {
    type Output = EPoint;
    fn add(self, o: EPoint) -> EPoint {
        EPoint::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for EPoint {
    type Output = EPoint;
    fn sub(self, o: EPoint) -> EPoint {
        EPoint::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for EPoint {
    type Output = EPoint;
    fn neg(self) -> EPoint {
        EPoint::new(-self.a, -self.b)
    }
}

impl Mul<EPoint> for i64 {
    type Output = EPoint;
    fn mul(self, p: EPoint) -> EPoint {
        p.mul_int(self)
    }
}

impl Zero for EPoint {
    fn zero() -> Self {
        EPoint::zero()
    }
    fn is_zero(&self) -> bool {
        EPoint::is_zero(self)
    }
}

impl fmt::Display for EPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: i64 = q.trim().parse().ok()?;
            if q == 0 {
                return None;
            }
            Some(Rational64::new(p.trim().parse().ok()?, q))
        }
        None => Some(Rational64::new(s.parse().ok()?, 1)),
    }
}

/// Parses `p/q,r/s` (integers allowed for either half).
impl FromStr for EPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let err = || Error::Parse(s.to_string());
        let (x, y) = s.split_once(',').ok_or_else(err)?;
        let a = parse_rational(x).ok_or_else(err)?;
        let b = parse_rational(y).ok_or_else(err)?;
        Ok(EPoint::new(a, b))
    }
}
