//! The space `Θ_{n/k}(Λ)` of theta functions in `g` variables.
//!
//! `f(z + eᵢ) = f(z)` and `f(z + ηeᵢ) = e(z_{i−1} − nᵢzᵢ + z_{i+1} + cᵢ) f(z)` with
//! `z₀ = z_{g+1} = 0`. Writing `f = Σ a_β e(β·z)`, the coefficients obey
//! `a_{β+Deᵢ} = e(βᵢη − cᵢ) a_β`, hence on a whole coset
//!
//! ```text
//! a_{ρ+Dm} = a_ρ · e(Q(ρ,m)),  Q(ρ,m) = (ρ·m + ½mᵀDm − ½Σnᵢmᵢ)η − c·m.
//! ```
//!
//! Each coset of `Dℤ^g` therefore carries one free coefficient, and the map
//! `β ↦ β·k mod n` identifies `ℤ^g/Dℤ^g` with `ℤ/n` (because `Dkᵀ = n e₁ᵀ` and
//! `k_g = 1`). An element is stored as its `n` coordinates on the seed functions
//! `f_r` (coefficient 1 at the chosen representative `ρ_r` of the class `r`).

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_traits::ToPrimitive;

use crate::contfrac::{self, Ncf};
use crate::cplx::{e, e_frac, normalize_projective, C64};
use crate::theta1::{LatticeParams, Theta};
use crate::zlinalg;
use crate::{Error, Result};

/// Parameters of `Θ_{n/k}(Λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSpaceParams {
    pub ncf: Ncf,
    pub c: Vec<C64>,
    pub lattice: LatticeParams,
    /// Cap on the coefficient window (in steps of `Dℤ^g` from its centre);
    /// `None` picks the cap from the Gaussian decay rate.
    pub trunc_radius: Option<usize>,
}

impl ThetaSpaceParams {
    /// `cᵢ = nᵢ/2 + mᵢη` with `mᵢ = δ_{1,i} − 1`.
    pub fn new(ncf: Ncf, lattice: LatticeParams) -> Result<Self> {
        let m: Vec<i64> = (0..ncf.g()).map(|i| i64::from(i == 0) - 1).collect();
        Self::with_m(ncf, &m, lattice)
    }

    /// `cᵢ = nᵢ/2 + mᵢη`.
    pub fn with_m(ncf: Ncf, m: &[i64], lattice: LatticeParams) -> Result<Self> {
        if m.len() != ncf.g() {
            return Err(Error::Dimension(format!("{} values of m for g = {}", m.len(), ncf.g())));
        }
        let e = ncf.entries_i64()?;
        let c = e.iter().zip(m).map(|(&ni, &mi)| C64::new(ni as f64 / 2.0, 0.0) + lattice.eta * mi as f64).collect();
        Ok(ThetaSpaceParams { ncf, c, lattice: lattice.validated()?, trunc_radius: None })
    }

    /// Arbitrary constants `c` (the h-section then needs `c − n/2 ∈ ℤ^g η`).
    pub fn with_c(ncf: Ncf, c: Vec<C64>, lattice: LatticeParams) -> Result<Self> {
        if c.len() != ncf.g() {
            return Err(Error::Dimension(format!("{} constants for g = {}", c.len(), ncf.g())));
        }
        Ok(ThetaSpaceParams { ncf, c, lattice: lattice.validated()?, trunc_radius: None })
    }

    /// The integers `mᵢ` if `c = n/2 + mη`.
    pub fn good_m(&self) -> Option<Vec<i64>> {
        let e = self.ncf.entries_i64().ok()?;
        self.c
            .iter()
            .zip(&e)
            .map(|(ci, &ni)| {
                let x = (ci - ni as f64 / 2.0) / self.lattice.eta;
                let r = x.re.round();
                ((x - r).norm() < 1e-9).then_some(r as i64)
            })
            .collect()
    }
}

/// The operators of the Heisenberg action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    /// `f(z + k/n)`
    S,
    /// `e(z₁ + C) f(z + kη/n)`
    T,
    /// `f(z + l/n)`
    SPrime,
    /// `e(z_g + C′) f(z + lη/n)`
    TPrime,
}

#[derive(Debug, Clone)]
struct Seed {
    terms: Vec<(Vec<i64>, C64)>,
    tail: f64,
}

/// A constructed `Θ_{n/k}(Λ)`: coset representatives, truncated seed series and constants.
#[derive(Debug, Clone)]
pub struct ThetaSpace {
    params: ThetaSpaceParams,
    entries: Vec<i64>,
    g: usize,
    n: i64,
    k: Vec<i64>,
    l: Vec<i64>,
    k_prime: i64,
    dm: Vec<Vec<i64>>,
    dinv: Vec<Vec<i64>>,
    reps: Vec<Vec<i64>>,
    seeds: Vec<Seed>,
    radius: usize,
    big_c: C64,
    big_c_prime: C64,
    theta: Theta,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn matvec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|r| dot(r, v)).collect()
}

fn to_i64_vec(v: &[num_bigint::BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))).collect()
}

/// Representatives of `ℤ^g/Dℤ^g`, indexed by `r = β·k mod n`.
///
/// Each class gets the vector minimising `βᵀ(nD⁻¹)β`, ties broken lexicographically.
pub fn coset_reps(f: &Ncf) -> Result<Vec<Vec<i64>>> {
    let entries = f.entries_i64()?;
    let seq = contfrac::sequences(f);
    let n = seq.k_seq[0].to_i64().ok_or_else(|| Error::Overflow(seq.k_seq[0].to_string()))?;
    let k = to_i64_vec(&seq.k_seq[1..=f.g()])?;
    let (_, dinv) = zlinalg::d_inverse(f)?;
    let dinv: Vec<Vec<i64>> = dinv.rows().iter().map(|r| to_i64_vec(r)).collect::<Result<_>>()?;
    Ok(coset_reps_raw(&entries, &k, n, &dinv))
}

fn coset_reps_raw(entries: &[i64], k: &[i64], n: i64, dinv: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let g = entries.len();
    let form = |b: &[i64]| -> i128 {
        (0..g).map(|i| (0..g).map(|j| b[i] as i128 * dinv[i][j] as i128 * b[j] as i128).sum::<i128>()).sum()
    };
    // λ_max(D) ≤ max nᵢ + 2, so |β|_∞ > B forces βᵀ(nD⁻¹)β > n(B+1)²/λ_max
    let lam_max = entries.iter().max().copied().unwrap_or(2) as i128 + 2;
    let mut best: Vec<Option<(i128, Vec<i64>)>> = vec![None; n as usize];
    let mut radius: i64 = 0;
    loop {
        let mut b = vec![-radius; g];
        'outer: loop {
            let r = dot(&b, k).rem_euclid(n) as usize;
            let cand = (form(&b), b.clone());
            if best[r].as_ref().is_none_or(|cur| cand < *cur) {
                best[r] = Some(cand);
            }
            for i in (0..g).rev() {
                if b[i] < radius {
                    b[i] += 1;
                    continue 'outer;
                }
                b[i] = -radius;
            }
            break;
        }
        if best.iter().all(Option::is_some) {
            let worst = best.iter().map(|x| x.as_ref().unwrap().0).max().unwrap();
            let r1 = radius as i128 + 1;
            if n as i128 * r1 * r1 > worst * lam_max {
                break;
            }
        }
        radius += 1;
    }
    best.into_iter().map(|x| x.unwrap().1).collect()
}

impl ThetaSpace {
    pub fn new(params: ThetaSpaceParams) -> Result<Self> {
        let f = &params.ncf;
        let entries = f.entries_i64()?;
        let g = entries.len();
        let seq = contfrac::sequences(f);
        let n = seq.k_seq[0].to_i64().ok_or_else(|| Error::Overflow(seq.k_seq[0].to_string()))?;
        let k = to_i64_vec(&seq.k_seq[1..=g])?;
        let l = to_i64_vec(&seq.l_seq[1..=g])?;
        let k_prime = seq.k_prime.to_i64().ok_or_else(|| Error::Overflow(seq.k_prime.to_string()))?;
        let (_, dinv) = zlinalg::d_inverse(f)?;
        let dinv: Vec<Vec<i64>> = dinv.rows().iter().map(|r| to_i64_vec(r)).collect::<Result<_>>()?;
        let dm: Vec<Vec<i64>> = (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| match i.abs_diff(j) {
                        0 => entries[i],
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let reps = coset_reps_raw(&entries, &k, n, &dinv);
        let eta = params.lattice.eta;
        let nf = n as f64;
        let kc: C64 = k.iter().zip(&params.c).map(|(&ki, ci)| (ci + eta) * ki as f64).sum();
        let lc: C64 = l.iter().zip(&params.c).map(|(&li, ci)| (ci + eta) * li as f64).sum();
        let kk = k[0] as f64;
        let big_c = -(kc + eta * ((nf - 1.0) / 2.0 - kk)) / nf;
        let big_c_prime = -(lc + eta * ((nf - 1.0) / 2.0 - k_prime as f64)) / nf;
        let theta = Theta::new(&params.lattice)?;
        let mut space = ThetaSpace {
            params,
            entries,
            g,
            n,
            k,
            l,
            k_prime,
            dm,
            dinv,
            reps,
            seeds: Vec::new(),
            radius: 0,
            big_c,
            big_c_prime,
            theta,
        };
        space.build_seeds()?;
        Ok(space)
    }

    pub fn params(&self) -> &ThetaSpaceParams {
        &self.params
    }
    pub fn g(&self) -> usize {
        self.g
    }
    pub fn n(&self) -> i64 {
        self.n
    }
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }
    /// `(k₁,…,k_g)`.
    pub fn k_vec(&self) -> &[i64] {
        &self.k
    }
    /// `(l₁,…,l_g)`.
    pub fn l_vec(&self) -> &[i64] {
        &self.l
    }
    pub fn k_prime(&self) -> i64 {
        self.k_prime
    }
    pub fn eta(&self) -> C64 {
        self.params.lattice.eta
    }
    pub fn c(&self) -> &[C64] {
        &self.params.c
    }
    /// The constant `C` in the definition of `T`.
    pub fn big_c(&self) -> C64 {
        self.big_c
    }
    /// The constant `C′` in the definition of `T′`.
    pub fn big_c_prime(&self) -> C64 {
        self.big_c_prime
    }
    pub fn coset_reps(&self) -> &[Vec<i64>] {
        &self.reps
    }
    pub fn truncation_radius(&self) -> usize {
        self.radius
    }
    pub fn theta(&self) -> &Theta {
        &self.theta
    }
    /// Estimated omitted mass of each seed series.
    pub fn tails(&self) -> Vec<f64> {
        self.seeds.iter().map(|s| s.tail).collect()
    }
    pub fn support_sizes(&self) -> Vec<usize> {
        self.seeds.iter().map(|s| s.terms.len()).collect()
    }

    /// Class of `β` in `ℤ^g/Dℤ^g ≅ ℤ/n`.
    pub fn class_of(&self, beta: &[i64]) -> usize {
        dot(beta, &self.k).rem_euclid(self.n) as usize
    }

    /// `(r, m)` with `β = ρ_r + Dm`.
    pub fn split(&self, beta: &[i64]) -> (usize, Vec<i64>) {
        let r = self.class_of(beta);
        let diff: Vec<i64> = beta.iter().zip(&self.reps[r]).map(|(a, b)| a - b).collect();
        let m = matvec(&self.dinv, &diff).into_iter().map(|x| {
            debug_assert_eq!(x.rem_euclid(self.n), 0);
            x / self.n
        });
        (r, m.collect())
    }

    /// `Q(ρ,m)`, so that `a_{ρ+Dm} = e(Q(ρ,m)) a_ρ`.
    pub fn q_exponent(&self, rho: &[i64], m: &[i64]) -> C64 {
        // ½mᵀDm − ½Σnᵢmᵢ = Σ nᵢ mᵢ(mᵢ−1)/2 − Σ mᵢm_{i+1}, an integer
        let mut int_part = dot(rho, m);
        for i in 0..self.g {
            int_part += self.entries[i] * m[i] * (m[i] - 1) / 2;
            if i + 1 < self.g {
                int_part -= m[i] * m[i + 1];
            }
        }
        let cm: C64 = self.params.c.iter().zip(m).map(|(c, &mi)| c * mi as f64).sum();
        self.eta() * int_part as f64 - cm
    }

    fn build_seeds(&mut self) -> Result<()> {
        let g = self.g;
        let eta = self.eta();
        let ei = eta.im;
        let target = self.params.lattice.tolerance * 1e-4;
        let ln_thr = target.ln();
        let explore = ln_thr - 18.0;

        let dmat = DMatrix::from_fn(g, g, |i, j| self.dm[i][j] as f64);
        let eig = dmat.symmetric_eigenvalues();
        let lam_min = eig.min();
        let lam_max = eig.max();
        let r0 = (-ln_thr / (PI * ei * lam_min)).sqrt().ceil() as usize;
        let cap = self.params.trunc_radius.unwrap_or_else(|| {
            r0 + 4 + ((g as f64).sqrt() * lam_max / (2.0 * lam_min)).ceil() as usize
        });
        self.radius = cap;

        let nf = self.n as f64;
        let cim: Vec<f64> = self.params.c.iter().map(|c| c.im).collect();
        let mut seeds = Vec::with_capacity(self.reps.len());
        for rho in self.reps.clone() {
            // log of |a_{ρ+Dm}| · max over the reduced domain of |e(β·z)|
            let log_b = |m: &[i64]| -> f64 {
                let beta: Vec<i64> = rho.iter().zip(matvec(&self.dm, m)).map(|(a, b)| a + b).collect();
                let q = self.q_exponent(&rho, m);
                let l1: i64 = beta.iter().map(|x| x.abs()).sum();
                -2.0 * PI * q.im + PI * ei * l1 as f64
            };
            // continuous maximiser of the Gaussian part: Dm = n/2 − ρ + Im c / Im η
            let rhs: Vec<f64> =
                (0..g).map(|i| self.entries[i] as f64 / 2.0 - rho[i] as f64 + cim[i] / ei).collect();
            let centre: Vec<i64> = (0..g)
                .map(|i| ((0..g).map(|j| self.dinv[i][j] as f64 * rhs[j]).sum::<f64>() / nf).round() as i64)
                .collect();
            let zero = vec![0i64; g];
            let log_ref = log_b(&zero).max(log_b(&centre));
            let mut seen: HashSet<Vec<i64>> = HashSet::new();
            let mut queue = VecDeque::new();
            for start in [zero.clone(), centre.clone()] {
                if seen.insert(start.clone()) {
                    queue.push_back(start);
                }
            }
            let mut terms = Vec::new();
            let mut frontier = 0usize;
            while let Some(m) = queue.pop_front() {
                let lb = log_b(&m) - log_ref;
                if lb < explore {
                    frontier += 1;
                    continue;
                }
                if m.iter().zip(&centre).any(|(a, c)| (a - c).unsigned_abs() as usize > cap) {
                    return Err(Error::Truncation(cap));
                }
                if lb >= ln_thr {
                    let beta: Vec<i64> = rho.iter().zip(matvec(&self.dm, &m)).map(|(a, b)| a + b).collect();
                    terms.push((beta, e(self.q_exponent(&rho, &m))));
                } else {
                    frontier += 1;
                }
                for i in 0..g {
                    for s in [-1, 1] {
                        let mut nb = m.clone();
                        nb[i] += s;
                        if seen.insert(nb.clone()) {
                            queue.push_back(nb);
                        }
                    }
                }
            }
            let tail = frontier as f64 * (log_ref + ln_thr).exp();
            seeds.push(Seed { terms, tail });
        }
        self.seeds = seeds;
        Ok(())
    }

    /// `z = z₀ + a + pη` with `a ∈ ℤ^g`, `|Im z₀ᵢ| ≤ ½ Im η`; returns `(z₀, X)` with
    /// `f(z) = e(X) f(z₀)` for every `f ∈ Θ_{n/k}(Λ)`.
    pub fn reduce(&self, z: &[C64]) -> (Vec<C64>, C64) {
        let eta = self.eta();
        let p: Vec<i64> = z.iter().map(|zi| (zi.im / eta.im).round() as i64).collect();
        let z0: Vec<C64> = z
            .iter()
            .zip(&p)
            .map(|(zi, &pi)| {
                let w = zi - eta * pi as f64;
                w - w.re.floor()
            })
            .collect();
        // f(z₀ + pη) = e(−z₀·Dp − ½pᵀDpη + Σ(cᵢ + nᵢη/2)pᵢ) f(z₀)
        let dp = matvec(&self.dm, &p);
        let z_dp: C64 = z0.iter().zip(&dp).map(|(a, &b)| a * b as f64).sum();
        let pdp = dot(&p, &dp) as f64;
        let lin: C64 = (0..self.g)
            .map(|i| (self.params.c[i] + eta * (self.entries[i] as f64 / 2.0)) * p[i] as f64)
            .sum();
        (z0, -z_dp - eta * (pdp / 2.0) + lin)
    }

    fn seeds_at_reduced(&self, z0: &[C64]) -> Vec<C64> {
        self.seeds
            .iter()
            .map(|s| {
                s.terms
                    .iter()
                    .map(|(beta, a)| {
                        let x: C64 = beta.iter().zip(z0).map(|(&b, zi)| zi * b as f64).sum();
                        a * e(x)
                    })
                    .sum()
            })
            .collect()
    }

    /// Values of all seed functions `f_r` at `z`.
    pub fn eval_seeds(&self, z: &[C64]) -> Vec<C64> {
        let (z0, x) = self.reduce(z);
        let factor = e(x);
        self.seeds_at_reduced(&z0).into_iter().map(|v| v * factor).collect()
    }

    /// Seed values at `z` up to the common quasi-periodicity factor, which can
    /// overflow far from the strip `|Im zᵢ| ≤ ½ Im η` and is the same for every seed.
    pub fn eval_seeds_projective(&self, z: &[C64]) -> Vec<C64> {
        self.seeds_at_reduced(&self.reduce(z).0)
    }

    /// `Σ x_r f_r(z)`.
    pub fn eval_coords(&self, x: &[C64], z: &[C64]) -> C64 {
        self.eval_seeds(z).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// The seed functions as coefficient maps.
    pub fn basis_functions(self: &Arc<Self>) -> Vec<GLatticeFn> {
        (0..self.n as usize)
            .map(|r| {
                let mut x = vec![C64::new(0.0, 0.0); self.n as usize];
                x[r] = C64::new(1.0, 0.0);
                GLatticeFn::from_coords(self, &x)
            })
            .collect()
    }

    /// Action of an operator on coordinates.
    pub fn apply_coords(&self, op: Op, x: &[C64]) -> Vec<C64> {
        let n = self.n;
        let nu = n as usize;
        let eta = self.eta();
        let mut out = vec![C64::new(0.0, 0.0); nu];
        for r in 0..nu {
            if x[r] == C64::new(0.0, 0.0) {
                continue;
            }
            let rho = &self.reps[r];
            match op {
                Op::S => out[r] += x[r] * e_frac(r as i64, n),
                Op::SPrime => out[r] += x[r] * e_frac(dot(rho, &self.l), n),
                Op::T | Op::TPrime => {
                    let (vec, konst, pos) = match op {
                        Op::T => (&self.k, self.big_c, 0),
                        _ => (&self.l, self.big_c_prime, self.g - 1),
                    };
                    let mut beta = rho.clone();
                    beta[pos] += 1;
                    let (r2, m) = self.split(&beta);
                    let coeff = e(konst + eta * (dot(rho, vec) as f64 / n as f64));
                    let q = e(self.q_exponent(&self.reps[r2], &m));
                    out[r2] += x[r] * coeff / q;
                }
            }
        }
        out
    }

    /// The adapted basis `w_α`: `S w_α = e(kα/n) w_α`, `T w_α = w_{α+1}`, `w₀ = f₀`.
    pub fn w_basis(self: &Arc<Self>) -> WBasis {
        let nu = self.n as usize;
        let k = self.k[0];
        let cls = |a: usize| (a as i64 * k).rem_euclid(self.n) as usize;
        let one_hot = |r: usize, v: C64| {
            let mut x = vec![C64::new(0.0, 0.0); nu];
            x[r] = v;
            x
        };
        let mut scalars = vec![C64::new(1.0, 0.0)];
        for a in 0..nu - 1 {
            let tx = self.apply_coords(Op::T, &one_hot(cls(a), scalars[a]));
            scalars.push(tx[cls(a + 1)]);
        }
        let closure = self.apply_coords(Op::T, &one_hot(cls(nu - 1), scalars[nu - 1]))[0];
        let closure_error = (closure - 1.0).norm();

        let mut c1 = Vec::with_capacity(nu);
        let mut ceta = Vec::with_capacity(nu);
        for a in 0..nu {
            let x = one_hot(cls(a), scalars[a]);
            let sp = self.apply_coords(Op::SPrime, &x);
            c1.push(sp[cls(a)] / scalars[a] / e_frac(a as i64, self.n));
            let target = (a as i64 + self.k_prime).rem_euclid(self.n) as usize;
            let tp = self.apply_coords(Op::TPrime, &x);
            ceta.push(tp[cls(target)] / scalars[target]);
        }
        let spread = |v: &[C64]| v.iter().map(|c| (c - v[0]).norm() / v[0].norm()).fold(0.0, f64::max);
        WBasis {
            space: Arc::clone(self),
            scalars,
            c_one_over_n: c1[0],
            c_eta_over_n: ceta[0],
            scalar_spread: spread(&c1).max(spread(&ceta)),
            closure_error,
        }
    }

    /// `h(z) = Π e(mᵢzᵢ)θ(zᵢ)^{nᵢ} · Π_{i<g} e(z_{i+1})θ(zᵢ−z_{i+1})/(θ(zᵢ)θ(z_{i+1}))`,
    /// evaluated with the cancelling `θ(zᵢ)` factors removed, so it has no poles.
    pub fn h_section(&self, z: &[C64]) -> Result<C64> {
        let m = self.params.good_m().ok_or(Error::BadConstant("the h-section"))?;
        if z.len() != self.g {
            return Err(Error::Dimension(format!("point has {} coordinates, g = {}", z.len(), self.g)));
        }
        let g = self.g;
        let th = &self.theta;
        let mut h = C64::new(1.0, 0.0);
        for i in 0..g {
            let p = self.entries[i] - 2 + i64::from(i == 0) + i64::from(i + 1 == g);
            h *= e(z[i] * m[i] as f64) * th.at(z[i]).powi(p as i32);
            if i + 1 < g {
                h *= e(z[i + 1]) * th.at(z[i] - z[i + 1]);
            }
        }
        Ok(h)
    }
}

/// A theta function given by finitely many Fourier coefficients `a_β`.
#[derive(Debug, Clone)]
pub struct GLatticeFn {
    space: Arc<ThetaSpace>,
    coeffs: BTreeMap<Vec<i64>, C64>,
}

impl GLatticeFn {
    pub fn new(space: &Arc<ThetaSpace>, coeffs: BTreeMap<Vec<i64>, C64>) -> Self {
        GLatticeFn { space: Arc::clone(space), coeffs }
    }

    /// Materialise `Σ x_r f_r` on the stored windows of the seeds.
    pub fn from_coords(space: &Arc<ThetaSpace>, x: &[C64]) -> Self {
        let mut coeffs = BTreeMap::new();
        for (r, xr) in x.iter().enumerate() {
            if *xr == C64::new(0.0, 0.0) {
                continue;
            }
            for (beta, a) in &space.seeds[r].terms {
                *coeffs.entry(beta.clone()).or_insert(C64::new(0.0, 0.0)) += xr * a;
            }
        }
        GLatticeFn { space: Arc::clone(space), coeffs }
    }

    pub fn space(&self) -> &Arc<ThetaSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<i64>, C64> {
        &self.coeffs
    }

    /// Coordinates on the seeds, read from the largest stored coefficient of each class.
    pub fn coords(&self) -> Vec<C64> {
        let sp = &self.space;
        let mut best: Vec<Option<(&Vec<i64>, C64)>> = vec![None; sp.n as usize];
        for (beta, a) in &self.coeffs {
            let r = sp.class_of(beta);
            if best[r].is_none_or(|(_, b)| a.norm() > b.norm()) {
                best[r] = Some((beta, *a));
            }
        }
        best.into_iter()
            .map(|x| match x {
                None => C64::new(0.0, 0.0),
                Some((beta, a)) => {
                    let (r, m) = sp.split(beta);
                    a / e(sp.q_exponent(&sp.reps[r], &m))
                }
            })
            .collect()
    }

    /// The truncated Fourier sum `Σ a_β e(β·z)` over the stored coefficients.
    pub fn evaluate_series(&self, z: &[C64]) -> C64 {
        self.coeffs
            .iter()
            .map(|(beta, a)| a * e(beta.iter().zip(z).map(|(&b, zi)| zi * b as f64).sum()))
            .sum()
    }

    /// Value at `z` (any point of `ℂ^g`), using the quasi-periodicity to reduce `z` first.
    pub fn evaluate(&self, z: &[C64]) -> C64 {
        self.space.eval_coords(&self.coords(), z)
    }

    /// Exact action on Fourier data.
    pub fn apply(&self, op: Op) -> GLatticeFn {
        let sp = &self.space;
        let n = sp.n;
        let eta = sp.eta();
        let coeffs = self
            .coeffs
            .iter()
            .map(|(beta, a)| match op {
                Op::S => (beta.clone(), a * e_frac(dot(beta, &sp.k), n)),
                Op::SPrime => (beta.clone(), a * e_frac(dot(beta, &sp.l), n)),
                Op::T => {
                    let mut b = beta.clone();
                    b[0] += 1;
                    (b, a * e(sp.big_c + eta * (dot(beta, &sp.k) as f64 / n as f64)))
                }
                Op::TPrime => {
                    let mut b = beta.clone();
                    b[sp.g - 1] += 1;
                    (b, a * e(sp.big_c_prime + eta * (dot(beta, &sp.l) as f64 / n as f64)))
                }
            })
            .collect();
        GLatticeFn { space: Arc::clone(sp), coeffs }
    }
}

/// The basis `w₀,…,w_{n−1}` with `w_α = scalars[α] · f_{αk mod n}`.
#[derive(Debug, Clone)]
pub struct WBasis {
    pub space: Arc<ThetaSpace>,
    pub scalars: Vec<C64>,
    /// `S′w_α = c_{1/n} e(α/n) w_α`.
    pub c_one_over_n: C64,
    /// `T′w_α = c_{η/n} w_{α+k′}`.
    pub c_eta_over_n: C64,
    /// Largest relative deviation of the two scalars across `α`.
    pub scalar_spread: f64,
    /// `|T w_{n−1} − w₀|` in coordinates.
    pub closure_error: f64,
}

impl WBasis {
    pub fn n(&self) -> usize {
        self.scalars.len()
    }

    fn class(&self, alpha: i64) -> usize {
        let sp = &self.space;
        (alpha * sp.k[0]).rem_euclid(sp.n) as usize
    }

    /// Coordinates of `w_α`.
    pub fn coords(&self, alpha: i64) -> Vec<C64> {
        let a = alpha.rem_euclid(self.space.n) as usize;
        let mut x = vec![C64::new(0.0, 0.0); self.n()];
        x[self.class(a as i64)] = self.scalars[a];
        x
    }

    pub fn function(&self, alpha: i64) -> GLatticeFn {
        GLatticeFn::from_coords(&self.space, &self.coords(alpha))
    }

    /// `(w₀(z),…,w_{n−1}(z))`.
    pub fn eval_all(&self, z: &[C64]) -> Vec<C64> {
        let seeds = self.space.eval_seeds(z);
        (0..self.n()).map(|a| self.scalars[a] * seeds[self.class(a as i64)]).collect()
    }

    /// `(w₀(z),…,w_{n−1}(z))` up to a common nonzero factor.
    pub fn eval_all_projective(&self, z: &[C64]) -> Vec<C64> {
        let seeds = self.space.eval_seeds_projective(z);
        (0..self.n()).map(|a| self.scalars[a] * seeds[self.class(a as i64)]).collect()
    }

    /// `w_α(z)`.
    pub fn eval(&self, alpha: i64, z: &[C64]) -> C64 {
        self.eval_all(z)[alpha.rem_euclid(self.space.n) as usize]
    }

    /// `Φ_{n/k}(z)`, scaled so the largest coordinate is 1.
    pub fn phi(&self, z: &[C64]) -> Result<Vec<C64>> {
        normalize_projective(&self.eval_all_projective(z)).ok_or(Error::BasePoint)
    }
}
