//! Structure of the characteristic variety `X_{n/k} ≅ E^g/Σ_{n/k}`.
//!
//! `Σ_{g+1}` acts on `E^g` through the embedding `ε: E^g → E^{g+1}`,
//! `ε(z) = (z₁, z₂−z₁, …, z_g−z_{g−1}, −z_g)`, whose image is the kernel of `sum`;
//! the transposition `(i,i+1)` becomes `sᵢ`, which replaces `zᵢ` by `z_{i−1}−zᵢ+z_{i+1}`.
//! `Σ_{n/k}` is generated by the `sᵢ` with `nᵢ = 2`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::contfrac::{self, Ncf};
use crate::cplx::{chordal_distance, C64};
use crate::epoint::EPoint;
use crate::thetag::WBasis;
use crate::{Error, Result};

/// `Σ_{n/k} ≅ Σ_{t₁+1} × ⋯ × Σ_{t_r+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaGroup {
    /// `{i : nᵢ = 2}`, 1-based.
    pub generator_indices: Vec<usize>,
    /// Lengths of the maximal runs of consecutive 2's.
    pub run_lengths: Vec<usize>,
    pub order: BigUint,
}

impl SigmaGroup {
    pub fn is_trivial(&self) -> bool {
        self.generator_indices.is_empty()
    }
}

fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, x| acc * BigUint::from(x))
}

fn is_two(x: &BigInt) -> bool {
    *x == BigInt::from(2)
}

pub fn sigma_group(f: &Ncf) -> SigmaGroup {
    let generator_indices: Vec<usize> =
        f.entries().iter().enumerate().filter(|(_, x)| is_two(x)).map(|(i, _)| i + 1).collect();
    let mut run_lengths = Vec::new();
    let mut run = 0usize;
    for x in f.entries() {
        if is_two(x) {
            run += 1;
        } else if run > 0 {
            run_lengths.push(run);
            run = 0;
        }
    }
    if run > 0 {
        run_lengths.push(run);
    }
    let order = run_lengths.iter().fold(BigUint::one(), |acc, &t| acc * factorial(t + 1));
    SigmaGroup { generator_indices, run_lengths, order }
}

/// Orbits of `Σ_{n/k}` on `{1,…,g+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPartition {
    pub g: usize,
    /// `J`, the fixed points.
    pub fixed: Vec<usize>,
    /// `I₁,…,I_s`, each an interval of size at least 2.
    pub orbits: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }
}

pub fn orbit_partition(f: &Ncf) -> OrbitPartition {
    let g = f.g();
    let mut uf = UnionFind::<usize>::new(g + 1);
    for (i, x) in f.entries().iter().enumerate() {
        if is_two(x) {
            uf.union(i, i + 1);
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for p in 0..=g {
        let root = uf.find(p);
        let idx = *slot.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[idx].push(p + 1);
    }
    let (orbits, singles): (Vec<_>, Vec<_>) = classes.into_iter().partition(|c| c.len() >= 2);
    OrbitPartition { g, fixed: singles.into_iter().flatten().collect(), orbits }
}

/// Which closed-form case `X_{n/k}` falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    /// All `nᵢ ≥ 3`: `X_{n/k} ≅ E^g`.
    #[serde(rename = "E^g")]
    Eg,
    /// `[m,2,…,2]` or `[2,…,2,m]`, `m ≥ 3`, `g ≥ 2`: `X_{n/k} ≅ S^gE`.
    #[serde(rename = "S^gE")]
    SgE,
    /// All `nᵢ = 2`: `X_{n/k} ≅ ℙ^g`.
    #[serde(rename = "P^g")]
    Pg,
    #[serde(rename = "generic")]
    Generic,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Eg => "E^g",
            Tag::SgE => "S^gE",
            Tag::Pg => "P^g",
            Tag::Generic => "generic",
        })
    }
}

/// `X_{n/k}` as a bundle over `E^{|J|+s−1}` with fibre `ℙ^{i₁−1}×⋯×ℙ^{i_s−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleStructure {
    pub base_dim: usize,
    pub fibers: Vec<usize>,
    pub tag: Tag,
    pub very_ample: bool,
}

/// `[m,2,…,2]` (`Some(true)`) or `[2,…,2,m]` (`Some(false)`) with `m ≥ 3` and `g ≥ 2`.
fn symmetric_shape(f: &Ncf) -> Option<bool> {
    let e = f.entries();
    let g = e.len();
    if g < 2 {
        return None;
    }
    let three = BigInt::from(3);
    if e[0] >= three && e[1..].iter().all(is_two) {
        Some(true)
    } else if e[g - 1] >= three && e[..g - 1].iter().all(is_two) {
        Some(false)
    } else {
        None
    }
}

pub fn bundle_structure(f: &Ncf) -> BundleStructure {
    let p = orbit_partition(f);
    let base_dim = p.fixed.len() + p.orbits.len() - 1;
    let fibers = p.orbits.iter().map(|o| o.len() - 1).collect();
    let three = BigInt::from(3);
    let very_ample = f.entries().iter().all(|x| *x >= three);
    let tag = if very_ample {
        Tag::Eg
    } else if f.entries().iter().all(is_two) {
        Tag::Pg
    } else if symmetric_shape(f).is_some() {
        Tag::SgE
    } else {
        Tag::Generic
    };
    BundleStructure { base_dim, fibers, tag, very_ample }
}

/// Order of the Galois group of the étale cover of `X_{n/k}`.
///
/// `Π i_α²` when `J ≠ ∅`; otherwise the order of the kernel of
/// `(z_α) ↦ Σ (i_α/d) z_α` on `E[i₁]×⋯×E[i_s]`, `d = gcd(i_α)`, counted by
/// enumerating the groups `ℤ_{i_α}²` one factor at a time.
pub fn etale_cover_group_order(p: &OrbitPartition) -> BigUint {
    let sizes = p.orbit_sizes();
    if sizes.is_empty() {
        return BigUint::one();
    }
    if !p.fixed.is_empty() {
        return sizes.iter().fold(BigUint::one(), |acc, &i| acc * BigUint::from(i * i));
    }
    let d = sizes.iter().fold(0usize, |acc, &i| acc.gcd(&i));
    // E[i] = (1/i)ℤ²/ℤ²; the point (x,y)/i maps to (i/d)(x,y)/i = (x,y)/d in E[d]
    let mut counts: HashMap<(usize, usize), BigUint> = HashMap::from([((0, 0), BigUint::one())]);
    for &i in &sizes {
        let mut next: HashMap<(usize, usize), BigUint> = HashMap::new();
        for ((a, b), c) in &counts {
            for x in 0..i {
                for y in 0..i {
                    *next.entry(((a + x) % d, (b + y) % d)).or_default() += c;
                }
            }
        }
        counts = next;
    }
    counts.remove(&(0, 0)).unwrap_or_default()
}

/// The combined report.
#[derive(Debug, Clone, PartialEq)]
pub struct CharVarReport {
    pub ncf: Ncf,
    pub sigma_group: SigmaGroup,
    pub partition: OrbitPartition,
    pub bundle: BundleStructure,
    pub etale_order: BigUint,
}

pub fn charvar_report(f: &Ncf) -> CharVarReport {
    let partition = orbit_partition(f);
    CharVarReport {
        ncf: f.clone(),
        sigma_group: sigma_group(f),
        bundle: bundle_structure(f),
        etale_order: etale_cover_group_order(&partition),
        partition,
    }
}

/// Coordinates on which the Weyl-type maps make sense: `ℤ`, `E`, `ℂ`, ….
pub trait Additive: Clone + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> + Zero {}
impl<T: Clone + Add<Output = T> + Sub<Output = T> + Neg<Output = T> + Zero> Additive for T {}

/// `ε(z) = (z₁, z₂−z₁, …, z_g−z_{g−1}, −z_g)`.
pub fn epsilon<T: Additive>(z: &[T]) -> Vec<T> {
    let g = z.len();
    (0..=g)
        .map(|i| {
            let cur = if i < g { z[i].clone() } else { T::zero() };
            if i == 0 {
                cur
            } else {
                cur - z[i - 1].clone()
            }
        })
        .collect()
}

/// `ω(x) = (x₁, x₁+x₂, …, x₁+⋯+x_g)`, a left inverse of `ε`.
pub fn omega<T: Additive>(x: &[T]) -> Vec<T> {
    let g = x.len().saturating_sub(1);
    x[..g]
        .iter()
        .scan(T::zero(), |acc, v| {
            *acc = acc.clone() + v.clone();
            Some(acc.clone())
        })
        .collect()
}

pub fn sum<T: Additive>(x: &[T]) -> T {
    x.iter().cloned().fold(T::zero(), |a, b| a + b)
}

fn check_index(i: usize, g: usize) -> Result<()> {
    if i == 0 || i > g {
        return Err(Error::Index { index: i, max: g });
    }
    Ok(())
}

/// `sᵢ` (1-based): `zᵢ ↦ z_{i−1} − zᵢ + z_{i+1}` with `z₀ = z_{g+1} = 0`.
pub fn s_action<T: Additive>(i: usize, z: &[T]) -> Result<Vec<T>> {
    check_index(i, z.len())?;
    let g = z.len();
    let mut out = z.to_vec();
    let prev = if i >= 2 { z[i - 2].clone() } else { T::zero() };
    let next = if i < g { z[i].clone() } else { T::zero() };
    out[i - 1] = prev - z[i - 1].clone() + next;
    Ok(out)
}

/// The lift of `sᵢ` to `ℂ^g` compatible with the quasi-periodicity of `Θ_{n/k}(Λ)`:
/// `zᵢ ↦ z_{i−1} − zᵢ + z_{i+1} + η`.
pub fn s_action_lift(i: usize, z: &[C64], eta: C64) -> Result<Vec<C64>> {
    let mut out = s_action(i, z)?;
    out[i - 1] += eta;
    Ok(out)
}

/// `tᵢ = (kᵢ + lᵢ − n)τ` and the integer identity behind its `Σ_{n/k}`-invariance.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaTranslation {
    /// `kᵢ + lᵢ − n`.
    pub multipliers: Vec<BigInt>,
    pub t: Vec<C64>,
    /// `(j, 2(kⱼ+lⱼ) = k_{j−1}+l_{j−1}+k_{j+1}+l_{j+1})` for every `j` with `nⱼ = 2`.
    pub certificate: Vec<(usize, bool)>,
}

impl SigmaTranslation {
    pub fn certified(&self) -> bool {
        self.certificate.iter().all(|&(_, ok)| ok)
    }
}

pub fn sigma_translation(f: &Ncf, tau: C64) -> SigmaTranslation {
    let seq = contfrac::sequences(f);
    let g = f.g();
    let n = &seq.k_seq[0];
    let s: Vec<BigInt> = (0..=g + 1).map(|i| &seq.k_seq[i] + &seq.l_seq[i]).collect();
    let multipliers: Vec<BigInt> = (1..=g).map(|i| &s[i] - n).collect();
    let t = multipliers.iter().map(|m| tau * m.to_f64().unwrap_or(f64::NAN)).collect();
    let certificate = (1..=g)
        .filter(|&j| is_two(&f.entries()[j - 1]))
        .map(|j| (j, BigInt::from(2) * &s[j] == &s[j - 1] + &s[j + 1]))
        .collect();
    SigmaTranslation { multipliers, t, certificate }
}

/// The translation over exact points.
pub fn sigma_translation_exact(f: &Ncf, tau: EPoint) -> Result<Vec<EPoint>> {
    sigma_translation(f, C64::new(0.0, 0.0))
        .multipliers
        .iter()
        .map(|m| m.to_i64().map(|m| tau.mul_int(m)).ok_or_else(|| Error::Overflow(m.to_string())))
        .collect()
}

type QMat = Vec<Vec<BigRational>>;

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn qmul(a: &QMat, b: &QMat) -> QMat {
    let (r, m, c) = (a.len(), b.len(), b[0].len());
    (0..r).map(|i| (0..c).map(|j| (0..m).map(|t| &a[i][t] * &b[t][j]).sum()).collect()).collect()
}

fn qtranspose(a: &QMat) -> QMat {
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Gauss–Jordan inverse over `ℚ`.
fn qinverse(a: &QMat) -> Option<QMat> {
    let g = a.len();
    let mut m: QMat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..g).map(|j| q(i64::from(i == j))));
            r
        })
        .collect();
    for col in 0..g {
        let piv = (col..g).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..g {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(pivot_row) {
                    *x = &*x - &factor * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[g..].to_vec()).collect())
}

/// Outcome of the exact descent conditions for one generator `sⱼ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDescent {
    pub j: usize,
    /// `eⱼ = d(E − (Aᵀ)⁻¹)N⁻¹` with `d = −½(n₁,…,n_g)`.
    pub shift_condition: bool,
    /// `ANAᵀ = N`.
    pub form_condition: bool,
    /// `(1/n)k(A − E) ∈ ℤ^g`.
    pub integrality_condition: bool,
}

impl ExactDescent {
    pub fn holds(&self) -> bool {
        self.shift_condition && self.form_condition && self.integrality_condition
    }
}

/// Exact rational verification, for each `j` with `nⱼ = 2`, that `Φ_{n/k}` descends along `sⱼ`.
///
/// Here `N = −D`, `A = E + vⱼᵀeⱼ` with `vⱼ` the `j`-th row of `N`, so that `sⱼ(z) = zA`.
/// A failed condition is an error, since the conditions hold for every slope.
pub fn descent_exact(f: &Ncf) -> Result<Vec<ExactDescent>> {
    let g = f.g();
    let e = f.entries();
    let seq = contfrac::sequences(f);
    let n = BigRational::from_integer(seq.k_seq[0].clone());
    let big_n: QMat = (0..g)
        .map(|i| {
            (0..g)
                .map(|j| match i.abs_diff(j) {
                    0 => BigRational::from_integer(-e[i].clone()),
                    1 => q(1),
                    _ => q(0),
                })
                .collect()
        })
        .collect();
    let n_inv = qinverse(&big_n).ok_or(Error::ZeroDeterminant)?;
    let d_row: QMat = vec![e.iter().map(|x| BigRational::new(-x.clone(), BigInt::from(2))).collect()];
    let k_row: QMat = vec![seq.k_seq[1..=g].iter().map(|x| BigRational::from_integer(x.clone())).collect()];
    let ident: QMat = (0..g).map(|i| (0..g).map(|j| q(i64::from(i == j))).collect()).collect();

    let mut out = Vec::new();
    for j in 0..g {
        if !is_two(&e[j]) {
            continue;
        }
        let mut a = ident.clone();
        for (i, row) in a.iter_mut().enumerate() {
            row[j] += &big_n[j][i];
        }
        let at_inv = qinverse(&qtranspose(&a)).ok_or(Error::ZeroDeterminant)?;
        let diff: QMat = (0..g).map(|r| (0..g).map(|c| &ident[r][c] - &at_inv[r][c]).collect()).collect();
        let lhs = qmul(&qmul(&d_row, &diff), &n_inv);
        let shift_condition = (0..g).all(|c| lhs[0][c] == q(i64::from(c == j)));
        let form_condition = qmul(&qmul(&a, &big_n), &qtranspose(&a)) == big_n;
        let a_minus: QMat = (0..g).map(|r| (0..g).map(|c| &a[r][c] - &ident[r][c]).collect()).collect();
        let ka = qmul(&k_row, &a_minus);
        let integrality_condition = ka[0].iter().all(|x| (x / &n).is_integer());
        let res = ExactDescent { j: j + 1, shift_condition, form_condition, integrality_condition };
        if !res.holds() {
            return Err(Error::ExactCheck(format!("descent conditions fail for s_{} on {:?}", j + 1, f.entries())));
        }
        out.push(res);
    }
    Ok(out)
}

/// Worst chordal distance between `Φ(z)` and `Φ(sⱼ(z))` for each generator.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericDescent {
    pub per_generator: Vec<(usize, f64)>,
    pub samples: usize,
}

impl NumericDescent {
    pub fn worst(&self) -> f64 {
        self.per_generator.iter().map(|x| x.1).fold(0.0, f64::max)
    }
}

pub fn descent_numeric(w: &WBasis, samples: &[Vec<C64>]) -> Result<NumericDescent> {
    let sp = &w.space;
    let eta = sp.eta();
    let gens: Vec<usize> = (0..sp.g()).filter(|&i| sp.entries()[i] == 2).map(|i| i + 1).collect();
    let mut per_generator = Vec::with_capacity(gens.len());
    for &j in &gens {
        let mut worst: f64 = 0.0;
        for z in samples {
            let a = w.phi(z)?;
            let b = w.phi(&s_action_lift(j, z, eta)?)?;
            worst = worst.max(chordal_distance(&a, &b));
        }
        per_generator.push((j, worst));
    }
    Ok(NumericDescent { per_generator, samples: samples.len() })
}

/// `ρ(z)` as a sorted multiset when `f` is `[m,2,…,2]` or `[2,…,2,m]`.
///
/// `[m,2,…,2]`: `(z₂−z₁, …, z_g−z_{g−1}, −z_g)`; `[2,…,2,m]`: `(−z₁, z₁−z₂, …, z_{g−1}−z_g)`.
pub fn symmetric_power_quotient(f: &Ncf, z: &[EPoint]) -> Result<Option<Vec<EPoint>>> {
    let g = f.g();
    if z.len() != g {
        return Err(Error::Dimension(format!("point has {} coordinates, g = {g}", z.len())));
    }
    let mut out: Vec<EPoint> = match symmetric_shape(f) {
        None => return Ok(None),
        Some(true) => epsilon(z)[1..].to_vec(),
        Some(false) => epsilon(z)[..g].iter().map(|x| -*x).collect(),
    };
    out.sort();
    Ok(Some(out))
}
