//! Helpers and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use num_integer::Integer;
use qnk::contfrac::{self, Ncf};
use qnk::cplx::e;
use qnk::{LatticeParams, Slope, ThetaSpace, ThetaSpaceParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A point with `0 ≤ Re < 1` and `|Im| ≤ spread · Im η`.
pub fn rand_point(rng: &mut impl Rng, eta: C64, spread: f64) -> C64 {
    let a: f64 = rng.random_range(0.0..1.0);
    let b: f64 = rng.random_range(-spread..spread);
    C64::new(a, 0.0) + eta * b
}

pub fn rand_vec(rng: &mut impl Rng, g: usize, eta: C64, spread: f64) -> Vec<C64> {
    (0..g).map(|_| rand_point(rng, eta, spread)).collect()
}

/// `|a − b| / max(|a|, |b|)`, 0 when both vanish.
pub fn rel(a: C64, b: C64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

pub fn slopes(nmax: i64) -> impl Iterator<Item = (i64, i64)> {
    (2..=nmax).flat_map(|n| (1..n).filter(move |k| n.gcd(k) == 1).map(move |k| (n, k)))
}

pub fn ncf_of(n: i64, k: i64) -> Ncf {
    contfrac::expand(&Slope::new(n, k).unwrap())
}

/// Every entry tuple with `1 ≤ g ≤ gmax` and `2 ≤ nᵢ ≤ emax`.
pub fn all_entry_tuples(gmax: usize, emax: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..gmax {
        layer = layer
            .into_iter()
            .flat_map(|t| {
                (2..=emax).map(move |x| {
                    let mut u = t.clone();
                    u.push(x);
                    u
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn space(n: i64, k: i64, lat: LatticeParams) -> Arc<ThetaSpace> {
    Arc::new(ThetaSpace::new(ThetaSpaceParams::new(ncf_of(n, k), lat).unwrap()).unwrap())
}

/// `θ(z)` from the Jacobi triple product
/// `Π_{m≥1} (1 − q^m)(1 − x q^{m−1})(1 − x⁻¹ q^m)`, `x = e(z)`, `q = e(η)`.
pub fn theta_product(z: C64, eta: C64) -> C64 {
    let q = e(eta);
    let x = e(z);
    let mut acc = C64::new(1.0, 0.0);
    let mut qm = C64::new(1.0, 0.0); // q^{m−1}
    for _ in 0..400 {
        let qn = qm * q;
        acc *= (1.0 - qn) * (1.0 - x * qm) * (1.0 - qn / x);
        qm = qn;
        if qm.norm() < 1e-20 {
            break;
        }
    }
    acc
}

/// `θ_α(z)` built from the triple product.
pub fn theta_alpha_product(alpha: i64, n: i64, z: C64, eta: C64) -> C64 {
    let (a, nf) = (alpha as f64, n as f64);
    let pre = e(z * a + a / (2.0 * nf) + eta * (a * (a - nf) / (2.0 * nf)));
    (0..n).fold(pre, |acc, j| acc * theta_product(z + j as f64 / nf + eta * (a / nf), eta))
}

/// Fourier coefficients of the seed of class `r`, grown directly from the recursion
/// `a_{β+Deᵢ} = e(βᵢη − cᵢ) a_β` over every `β = ρ + Dm` with `|m|_∞ ≤ radius`.
pub fn wide_seed(sp: &ThetaSpace, r: usize, radius: i64) -> HashMap<Vec<i64>, C64> {
    let g = sp.g();
    let ent = sp.entries();
    let eta = sp.eta();
    let cs = sp.c();
    let col = |i: usize| -> Vec<i64> {
        (0..g)
            .map(|j| match i.abs_diff(j) {
                0 => ent[i],
                1 => -1,
                _ => 0,
            })
            .collect()
    };
    let rho = sp.coset_reps()[r].clone();
    let mut coeffs: HashMap<Vec<i64>, C64> = HashMap::new();
    let mut ms: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    coeffs.insert(rho.clone(), C64::new(1.0, 0.0));
    ms.insert(rho.clone(), vec![0; g]);
    let mut queue = VecDeque::from([rho]);
    while let Some(beta) = queue.pop_front() {
        let a = coeffs[&beta];
        let m = ms[&beta].clone();
        for i in 0..g {
            let d = col(i);
            for s in [1i64, -1] {
                let mut m2 = m.clone();
                m2[i] += s;
                if m2[i].abs() > radius {
                    continue;
                }
                let b2: Vec<i64> = beta.iter().zip(&d).map(|(x, y)| x + s * y).collect();
                if coeffs.contains_key(&b2) {
                    continue;
                }
                let val = if s == 1 {
                    a * e(eta * beta[i] as f64 - cs[i])
                } else {
                    a / e(eta * b2[i] as f64 - cs[i])
                };
                coeffs.insert(b2.clone(), val);
                ms.insert(b2.clone(), m2);
                queue.push_back(b2);
            }
        }
    }
    coeffs
}

pub fn naive_eval(coeffs: &HashMap<Vec<i64>, C64>, z: &[C64]) -> C64 {
    coeffs
        .iter()
        .map(|(b, a)| a * e(b.iter().zip(z).map(|(&x, zi)| zi * x as f64).sum::<C64>()))
        .sum()
}
