//! One-variable theta functions.
//!
//! `θ(z) = Σₙ (−1)ⁿ e(nz + ½n(n−1)η)` satisfies `θ(z+1) = θ(z)` and
//! `θ(z+η) = −e(−z)θ(z)`, with simple zeros exactly at `Λ = ℤ+ℤη`.
//!
//! `θ_α(z) = e(αz + α/2n + α(α−n)η/2n) Π_{j<n} θ(z + j/n + αη/n)` spans `Θ_n(Λ)`.

use serde::{Deserialize, Serialize};

use crate::cplx::{e, e_frac, C64};
use crate::{Error, Result};

/// The lattice `ℤ+ℤη`, a point `τ` and the series precision policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    pub eta: C64,
    pub tau: C64,
    pub tolerance: f64,
    pub max_terms: usize,
}

impl Default for LatticeParams {
    fn default() -> Self {
        LatticeParams { eta: C64::new(0.0, 0.8), tau: C64::new(0.0, 0.0), tolerance: 1e-12, max_terms: 512 }
    }
}

impl LatticeParams {
    pub fn new(eta: C64) -> Result<Self> {
        Self { eta, ..Default::default() }.validated()
    }

    pub fn with_tau(mut self, tau: C64) -> Self {
        self.tau = tau;
        self
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.eta.im > 0.0) || !self.eta.re.is_finite() {
            return Err(Error::BadEta(crate::cplx::format_complex(self.eta)));
        }
        if !(self.tolerance > 0.0) || self.max_terms == 0 {
            return Err(Error::Parse("tolerance and max_terms must be positive".into()));
        }
        Ok(self)
    }

    /// The nome `q = e(η)`.
    pub fn nome(&self) -> C64 {
        e(self.eta)
    }

    /// Coordinates `(a,b)` with `z = a + bη`.
    pub fn coords(&self, z: C64) -> (f64, f64) {
        let b = z.im / self.eta.im;
        (z.re - b * self.eta.re, b)
    }

    /// Whether `z` lies in `(1/m)Λ`, up to `tol` in lattice coordinates.
    pub fn in_torsion(&self, z: C64, m: i64, tol: f64) -> bool {
        let (a, b) = self.coords(z * m as f64);
        (a - a.round()).abs() < tol && (b - b.round()).abs() < tol
    }
}

/// A theta value with its truncation record.
///
/// `tail_bound` bounds the omitted terms of the series at the reduced argument;
/// the returned `value` equals that series times the exact factor `scale`-sized
/// multiplier from the quasi-periodicity law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaValue {
    pub value: C64,
    pub truncation_terms_used: usize,
    pub tail_bound: f64,
    pub scale: f64,
}

/// Bound on `Σ_{|m|>N}` of the term moduli when `|Im z| ≤ ½ Im η`, with `x = |q|`.
fn tail(x: f64, big_n: usize) -> f64 {
    let nf = big_n as f64;
    let first = x.powf((nf + 1.0) * (nf - 1.0) / 2.0);
    let ratio = x.powf((2.0 * nf + 1.0) / 2.0);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    2.0 * first / (1.0 - ratio)
}

/// Number of terms on each side needed so that the tail is below `target`.
pub(crate) fn terms_needed(p: &LatticeParams, target: f64) -> Result<(usize, f64)> {
    let x = (-2.0 * std::f64::consts::PI * p.eta.im).exp();
    for big_n in 1..=p.max_terms {
        let t = tail(x, big_n);
        if t <= target {
            return Ok((big_n, t));
        }
    }
    Err(Error::NoConvergence(p.max_terms))
}

/// Series target: four digits below the tolerance, so relative comparisons of
/// small values stay meaningful.
fn series_target(p: &LatticeParams) -> f64 {
    p.tolerance * 1e-4
}

/// `θ(z)` with argument reduction to `|Im z| ≤ ½ Im η`, `0 ≤ Re z < 1`.
pub fn theta(z: C64, p: &LatticeParams) -> Result<ThetaValue> {
    let (big_n, tb) = terms_needed(p, series_target(p))?;
    Ok(theta_with(z, p.eta, big_n, tb))
}

pub(crate) fn theta_with(z: C64, eta: C64, big_n: usize, tb: f64) -> ThetaValue {
    let m = (z.im / eta.im).round();
    let z1 = z - eta * m;
    let z0 = z1 - z1.re.floor();
    // θ(z0 + mη) = (−1)^m e(−m z0 − m(m−1)η/2) θ(z0)
    let mut factor = e(-(z0 * m) - eta * (m * (m - 1.0) / 2.0));
    if (m as i64).rem_euclid(2) == 1 {
        factor = -factor;
    }
    let mut sum = C64::new(0.0, 0.0);
    let big_n = big_n as i64;
    for j in -big_n..=big_n {
        let jf = j as f64;
        let t = e(z0 * jf + eta * (jf * (jf - 1.0) / 2.0));
        if j.rem_euclid(2) == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    ThetaValue {
        value: factor * sum,
        truncation_terms_used: (2 * big_n + 1) as usize,
        tail_bound: tb,
        scale: factor.norm(),
    }
}

/// Cached series length for repeated evaluation with the same lattice.
#[derive(Debug, Clone, Copy)]
pub struct Theta {
    eta: C64,
    big_n: usize,
    tail: f64,
}

impl Theta {
    pub fn new(p: &LatticeParams) -> Result<Self> {
        let (big_n, tail) = terms_needed(p, series_target(p))?;
        Ok(Theta { eta: p.eta, big_n, tail })
    }

    pub fn eta(&self) -> C64 {
        self.eta
    }

    /// `θ(z)`.
    pub fn at(&self, z: C64) -> C64 {
        theta_with(z, self.eta, self.big_n, self.tail).value
    }

    /// `θ_α(z)` for `θ_α ∈ Θ_n(Λ)`; `alpha` is used literally (not reduced mod n).
    pub fn alpha(&self, alpha: i64, n: i64, z: C64) -> C64 {
        let (a, nf) = (alpha as f64, n as f64);
        let pre = e(z * a + self.eta * (a * (a - nf) / (2.0 * nf))) * e_frac(alpha, 2 * n);
        let shift = self.eta * (a / nf);
        (0..n).fold(pre, |acc, j| acc * self.at(z + j as f64 / nf + shift))
    }

    /// `θ(1/n)θ(2/n)⋯θ((n−1)/n)`.
    pub fn torsion_product(&self, n: i64) -> C64 {
        (1..n).fold(C64::new(1.0, 0.0), |acc, j| acc * self.at(C64::new(j as f64 / n as f64, 0.0)))
    }
}

/// `θ_α(z)` for the `n`-dimensional space `Θ_n(Λ)`.
pub fn theta_alpha(alpha: i64, n: i64, z: C64, p: &LatticeParams) -> Result<ThetaValue> {
    if n < 1 {
        return Err(Error::Dimension(format!("n = {n} must be positive")));
    }
    let (big_n, tb) = terms_needed(p, series_target(p))?;
    let (a, nf) = (alpha as f64, n as f64);
    let pre = e(z * a + p.eta * (a * (a - nf) / (2.0 * nf))) * e_frac(alpha, 2 * n);
    let shift = p.eta * (a / nf);
    let mut value = pre;
    let mut scale = pre.norm();
    for j in 0..n {
        let t = theta_with(z + j as f64 / nf + shift, p.eta, big_n, tb);
        value *= t.value;
        scale *= t.scale;
    }
    Ok(ThetaValue { value, truncation_terms_used: (2 * big_n + 1) * n as usize, tail_bound: tb, scale })
}

/// A letter of a Heisenberg word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HLetter {
    S,
    T,
}

pub fn parse_word(w: &str) -> Result<Vec<HLetter>> {
    w.chars()
        .map(|c| match c {
            'S' | 's' => Ok(HLetter::S),
            'T' | 't' => Ok(HLetter::T),
            _ => Err(Error::Parse(w.to_string())),
        })
        .collect()
}

/// Action of an operator word on `θ_α`: returns `(β, p)` with `word·θ_α = e(p/n)θ_β`.
///
/// The word is read as an operator product, so its last letter acts first.
/// `S·θ_α = e(α/n)θ_α`, `T·θ_α = θ_{α+1}`.
pub fn h1_word_action(word: &[HLetter], alpha: i64, n: i64) -> (i64, i64) {
    let mut idx = alpha.rem_euclid(n);
    let mut phase = 0i64;
    for l in word.iter().rev() {
        match l {
            HLetter::S => phase = (phase + idx).rem_euclid(n),
            HLetter::T => idx = (idx + 1).rem_euclid(n),
        }
    }
    (idx, phase)
}

/// `(S·f)(z) = f(z + 1/n)`.
pub fn op_s(n: i64, f: impl Fn(C64) -> C64) -> impl Fn(C64) -> C64 {
    move |z| f(z + 1.0 / n as f64)
}

/// `(T·f)(z) = e(z + 1/2n − (n−1)η/2n) f(z + η/n)`.
pub fn op_t(n: i64, eta: C64, f: impl Fn(C64) -> C64) -> impl Fn(C64) -> C64 {
    let nf = n as f64;
    move |z| e(z + 1.0 / (2.0 * nf) - eta * ((nf - 1.0) / (2.0 * nf))) * f(z + eta / nf)
}
