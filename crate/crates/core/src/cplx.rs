//! Complex helpers: `e(x) = exp(2πix)` and projective comparison.

use std::f64::consts::PI;

pub use num_complex::Complex64 as C64;

/// `e(x) = exp(2πi x)`.
#[inline]
pub fn e(x: C64) -> C64 {
    let t = 2.0 * PI * x;
    // exp(i t) = exp(-Im t) · (cos Re t + i sin Re t)
    C64::from_polar((-t.im).exp(), t.re)
}

/// `e(x)` for real `x`.
#[inline]
pub fn e_re(x: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * x)
}

/// `e(p/q)` with the fraction reduced modulo 1 first, so large `p` costs no accuracy.
#[inline]
pub fn e_frac(p: i64, q: i64) -> C64 {
    e_re(p.rem_euclid(q) as f64 / q as f64)
}

/// Parse `a+bi`, `bi`, `a` (the format used on the command line).
pub fn parse_complex(s: &str) -> crate::Result<C64> {
    s.trim()
        .parse::<C64>()
        .map_err(|_| crate::Error::Parse(s.to_string()))
}

pub fn format_complex(z: C64) -> String {
    if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Scale a homogeneous vector so its largest-magnitude entry equals 1.
pub fn normalize_projective(v: &[C64]) -> Option<Vec<C64>> {
    let (idx, big) = v
        .iter()
        .enumerate()
        .map(|(i, x)| (i, x.norm()))
        .fold((0, 0.0), |acc, (i, m)| if m > acc.1 { (i, m) } else { acc });
    if !(big > 0.0) || !big.is_finite() {
        return None;
    }
    let pivot = v[idx];
    Some(v.iter().map(|x| x / pivot).collect())
}

/// Chordal distance `|u ∧ v| / (|u||v|)` between two points of projective space.
///
/// Computed from the 2×2 minors rather than `1 - |⟨u,v⟩|²`, which would lose
/// half of the available digits for nearby points.
pub fn chordal_distance(u: &[C64], v: &[C64]) -> f64 {
    let nu = u.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let mut wedge = 0.0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            wedge += ((u[i] / nu) * (v[j] / nv) - (u[j] / nu) * (v[i] / nv)).norm_sqr();
        }
    }
    wedge.sqrt()
}

/// Relative discrepancy `|a-b| / max(|a|,|b|)` (zero when both vanish).
pub fn rel_diff(a: C64, b: C64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}
