//! The quadratic relations of `Q_{n,k}(E,τ)`, the theta identities behind them and
//! the point modules attached to the `σ`-orbits of the characteristic variety.
//!
//! `R_{ij} = Σ_r c_{ij,r} x_{j−r}x_{i+r}` with
//! `c_{ij,r} = θ_{j−i+(k−1)r}(0) / (θ_{j−i−r}(−τ) θ_{kr}(τ))`.

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::contfrac::{self, Ncf};
use crate::cplx::{chordal_distance, normalize_projective, C64};
use crate::epoint::EPoint;
use crate::theta1::{LatticeParams, Theta};
use crate::thetag::WBasis;
use crate::{Error, Result};

/// Relative margin below which a denominator counts as a near-zero.
pub const ADMISSIBILITY_MARGIN: f64 = 1e-3;

/// The `n²` relations; `coefficients[i][j][r] = c_{ij,r}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationSet {
    pub n: i64,
    pub k: i64,
    pub tau: C64,
    pub coefficients: Vec<Vec<Vec<C64>>>,
}

impl RelationSet {
    /// `c_{ij,r}` with all indices read mod `n`.
    pub fn coeff(&self, i: i64, j: i64, r: i64) -> C64 {
        let n = self.n;
        self.coefficients[i.rem_euclid(n) as usize][j.rem_euclid(n) as usize][r.rem_euclid(n) as usize]
    }

    /// `R_{ij}` as the list `(c, a, b)` of terms `c·x_a x_b`.
    pub fn relation_terms(&self, i: i64, j: i64) -> Vec<(C64, i64, i64)> {
        let n = self.n;
        (0..n).map(|r| (self.coeff(i, j, r), (j - r).rem_euclid(n), (i + r).rem_euclid(n))).collect()
    }

    /// `R_{ij}` as a vector in the basis `x_a ⊗ x_b` (index `a·n + b`) of `V⊗V`.
    pub fn relation_vector(&self, i: i64, j: i64) -> Vec<C64> {
        let n = self.n as usize;
        let mut v = vec![C64::new(0.0, 0.0); n * n];
        for (c, a, b) in self.relation_terms(i, j) {
            v[a as usize * n + b as usize] += c;
        }
        v
    }
}

/// `|θ(x)|`-style value with a local scale check: near-zeros are rejected.
fn admissible(value: C64, nearby: C64, what: impl FnOnce() -> String) -> Result<C64> {
    let scale = value.norm().max(nearby.norm());
    if !(value.norm() >= ADMISSIBILITY_MARGIN * scale) || scale == 0.0 {
        return Err(Error::NearZero(what()));
    }
    Ok(value)
}

/// `θ_a(0)`, which vanishes exactly when `a ≡ 0 (mod n)` because of the factor `θ(0)`.
fn theta_alpha_at_zero(th: &Theta, a: i64, n: i64) -> C64 {
    if a.rem_euclid(n) == 0 {
        C64::new(0.0, 0.0)
    } else {
        th.alpha(a, n, C64::new(0.0, 0.0))
    }
}

fn theta_den(th: &Theta, x: C64, name: &str) -> Result<C64> {
    admissible(th.at(x), th.at(x + 0.1), || format!("θ({name})"))
}

fn theta_alpha_den(th: &Theta, a: i64, n: i64, x: C64, name: &str) -> Result<C64> {
    admissible(th.alpha(a, n, x), th.alpha(a, n, x + 0.1), || format!("θ_{a}({name})"))
}

/// The relations of `Q_{n,k}(E,τ)` with `τ = lattice.tau`.
pub fn relations(n: i64, k: i64, lattice: &LatticeParams) -> Result<RelationSet> {
    if !(n > k && k >= 1) || n.gcd(&k) != 1 {
        return Err(Error::InvalidSlope { n: n.to_string(), k: k.to_string(), reason: "need coprime n > k ≥ 1" });
    }
    let lattice = lattice.validated()?;
    let tau = lattice.tau;
    if lattice.in_torsion(tau, n, 1e-12) {
        return Err(Error::DegenerateTau);
    }
    let th = Theta::new(&lattice)?;
    let nu = n as usize;
    let num: Vec<C64> = (0..n).map(|a| theta_alpha_at_zero(&th, a, n)).collect();
    let den_minus: Vec<C64> = (0..n).map(|a| th.alpha(a, n, -tau)).collect();
    let den_plus: Vec<C64> = (0..n).map(|a| th.alpha(a, n, tau)).collect();
    let idx = |x: i64| x.rem_euclid(n) as usize;
    let mut coefficients = vec![vec![vec![C64::new(0.0, 0.0); nu]; nu]; nu];
    for i in 0..n {
        for j in 0..n {
            for r in 0..n {
                let d = den_minus[idx(j - i - r)] * den_plus[idx(k * r)];
                if d.norm() == 0.0 || !d.is_finite() {
                    return Err(Error::DegenerateTau);
                }
                coefficients[i as usize][j as usize][r as usize] = num[idx(j - i + (k - 1) * r)] / d;
            }
        }
    }
    Ok(RelationSet { n, k, tau, coefficients })
}

/// `σ`-translation vector `tᵢ = (kᵢ + lᵢ − n)τ` of the space behind `w`.
fn sigma_shift(w: &WBasis, tau: C64) -> Vec<C64> {
    let sp = &w.space;
    (0..sp.g()).map(|i| tau * (sp.k_vec()[i] + sp.l_vec()[i] - sp.n()) as f64).collect()
}

fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn check_slope(rs: &RelationSet, w: &WBasis) -> Result<()> {
    let sp = &w.space;
    if sp.n() != rs.n || sp.k_vec()[0] != rs.k {
        return Err(Error::Dimension(format!(
            "relations for ({},{}) but basis for ({},{})",
            rs.n,
            rs.k,
            sp.n(),
            sp.k_vec()[0]
        )));
    }
    Ok(())
}

/// `|Σ_r a_r| / max_r |a_r|`; an all-zero sum is flagged.
fn relative_sum(terms: &[C64], what: &str) -> Result<f64> {
    let max = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    if max == 0.0 || !max.is_finite() {
        return Err(Error::NearZero(format!("all terms of {what} vanish")));
    }
    Ok(terms.iter().sum::<C64>().norm() / max)
}

/// Relative residual of `Σ_r c_{αβ,r} w_{β−r}(y) w_{α+r}(σ(y))`.
pub fn graph_vanishing_residual(rs: &RelationSet, w: &WBasis, y: &[C64], alpha: i64, beta: i64) -> Result<f64> {
    check_slope(rs, w)?;
    let sy = add(y, &sigma_shift(w, rs.tau));
    let wy = w.eval_all(y);
    let wsy = w.eval_all(&sy);
    let n = rs.n;
    if (0..n).all(|r| rs.coeff(alpha, beta, r) == C64::new(0.0, 0.0)) {
        // the relation R_{αβ} is identically zero
        return Ok(0.0);
    }
    let terms: Vec<C64> = (0..n)
        .map(|r| rs.coeff(alpha, beta, r) * wy[(beta - r).rem_euclid(n) as usize] * wsy[(alpha + r).rem_euclid(n) as usize])
        .collect();
    relative_sum(&terms, "the graph relation")
}

/// Both sides of the exchange identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentitySides {
    pub lhs: C64,
    pub rhs: C64,
    /// Largest single term on either side.
    pub max_term: f64,
}

impl IdentitySides {
    /// `|LHS − RHS| / max(|LHS|, |RHS|, largest term)`.
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm() / self.lhs.norm().max(self.rhs.norm()).max(self.max_term)
    }
}

/// Evaluate both sides of the exchange identity for `Θ_{n/k}(Λ)`.
#[allow(clippy::too_many_arguments)]
pub fn exchange_identity_sides(
    w: &WBasis,
    u: C64,
    v: C64,
    y: &[C64],
    z: &[C64],
    alpha: i64,
    beta: i64,
) -> Result<IdentitySides> {
    let sp = &w.space;
    let (g, n) = (sp.g(), sp.n());
    if y.len() != g || z.len() != g {
        return Err(Error::Dimension(format!("points must have {g} coordinates")));
    }
    let th = sp.theta();
    let nf = n as f64;
    let (kv, lv) = (sp.k_vec(), sp.l_vec());
    let k = kv[0];
    let mut terms = Vec::with_capacity(g + 1 + n as usize);

    // mixed arguments: first factor takes z on 1..=t and y after, second the reverse
    let mixed = |t: usize| -> (Vec<C64>, Vec<C64>) {
        let a = (0..g).map(|s| if s < t { z[s] } else { y[s] } + u * kv[s] as f64).collect();
        let b = (0..g).map(|s| if s < t { y[s] } else { z[s] } + v * lv[s] as f64).collect();
        (a, b)
    };
    let mut lhs = C64::new(0.0, 0.0);
    for t in 0..=g {
        let coeff = if t == 0 {
            th.at(-u * nf + y[0] - z[0]) / (theta_den(th, -u * nf, "−nu")? * theta_den(th, y[0] - z[0], "y₁−z₁")?)
        } else if t == g {
            th.at(z[g - 1] - y[g - 1] + v * nf)
                / (theta_den(th, z[g - 1] - y[g - 1], "z_g−y_g")? * theta_den(th, v * nf, "nv")?)
        } else {
            let (s, s1) = (t - 1, t);
            th.at(z[s] - y[s] + y[s1] - z[s1])
                / (theta_den(th, z[s] - y[s], &format!("z_{t}−y_{t}"))?
                    * theta_den(th, y[s1] - z[s1], &format!("y_{}−z_{}", t + 1, t + 1))?)
        };
        let (a, b) = mixed(t);
        let term = coeff * w.eval(alpha, &a) * w.eval(beta, &b);
        terms.push(term.norm());
        lhs += term;
    }

    let wy = w.eval_all(y);
    let shifted: Vec<C64> = (0..g).map(|s| z[s] + u * kv[s] as f64 + v * lv[s] as f64).collect();
    let wz = w.eval_all(&shifted);
    let pref = th.torsion_product(n) / nf;
    let mut rhs = C64::new(0.0, 0.0);
    for r in 0..n {
        let c = th.alpha(beta - alpha + r * (k - 1), n, v - u)
            / (theta_alpha_den(th, beta - alpha - r, n, -u, "−u")? * theta_alpha_den(th, r * k, n, v, "v")?);
        let term = pref * c * wy[(beta - r).rem_euclid(n) as usize] * wz[(alpha + r).rem_euclid(n) as usize];
        terms.push(term.norm());
        rhs += term;
    }
    let max_term = terms.into_iter().fold(0.0, f64::max);
    Ok(IdentitySides { lhs, rhs, max_term })
}

/// Relative residual of the exchange identity.
pub fn exchange_identity_residual(
    w: &WBasis,
    u: C64,
    v: C64,
    y: &[C64],
    z: &[C64],
    alpha: i64,
    beta: i64,
) -> Result<f64> {
    Ok(exchange_identity_sides(w, u, v, y, z, alpha, beta)?.residual())
}

fn k1_coefficients(th: &Theta, n: i64, tau: C64, alpha: i64, beta: i64) -> Result<Vec<C64>> {
    let num = theta_alpha_at_zero(th, beta - alpha, n);
    (0..n)
        .map(|r| {
            Ok(num
                / (theta_alpha_den(th, beta - alpha - r, n, -tau, "−τ")? * theta_alpha_den(th, r, n, tau, "τ")?))
        })
        .collect()
}

/// Relative residual of `Σ_r θ_{β−α}(0)/(θ_{β−α−r}(−τ)θ_r(τ)) θ_{β−r}(y)θ_{α+r}(y+(2−n)τ) = 0`.
pub fn degenerate_identities_residual(
    lattice: &LatticeParams,
    n: i64,
    tau: C64,
    y: C64,
    alpha: i64,
    beta: i64,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::Dimension(format!("n = {n} must be at least 2")));
    }
    if lattice.in_torsion(tau, n, 1e-12) {
        return Err(Error::DegenerateTau);
    }
    let th = Theta::new(lattice)?;
    let c = k1_coefficients(&th, n, tau, alpha, beta)?;
    if (alpha - beta).rem_euclid(n) == 0 {
        // every coefficient carries the factor θ_0(0) = 0
        return Ok(0.0);
    }
    let y2 = y + tau * (2 - n) as f64;
    let terms: Vec<C64> =
        (0..n).map(|r| c[r as usize] * th.alpha(beta - r, n, y) * th.alpha(alpha + r, n, y2)).collect();
    relative_sum(&terms, "the degenerate identity")
}

/// Both sides of the `k = 1` specialisation
/// `θ(−nτ+y−z)/(θ(−nτ)θ(y−z))·(θ_α(y+τ)θ_β(z+τ) − θ_α(z+τ)θ_β(y+τ))
///  = (1/n)Πθ(j/n)·Σ_r θ_{β−α}(0)/(θ_{β−α−r}(−τ)θ_r(τ))·θ_{β−r}(y)θ_{α+r}(z+2τ)`.
#[allow(clippy::too_many_arguments)]
pub fn k1_identity_sides(
    lattice: &LatticeParams,
    n: i64,
    tau: C64,
    y: C64,
    z: C64,
    alpha: i64,
    beta: i64,
) -> Result<IdentitySides> {
    if lattice.in_torsion(tau, n, 1e-12) {
        return Err(Error::DegenerateTau);
    }
    let th = Theta::new(lattice)?;
    let nf = n as f64;
    let pre = th.at(-tau * nf + y - z) / (theta_den(&th, -tau * nf, "−nτ")? * theta_den(&th, y - z, "y−z")?);
    let t1 = pre * th.alpha(alpha, n, y + tau) * th.alpha(beta, n, z + tau);
    let t2 = pre * th.alpha(alpha, n, z + tau) * th.alpha(beta, n, y + tau);
    let c = k1_coefficients(&th, n, tau, alpha, beta)?;
    let pref = th.torsion_product(n) / nf;
    let mut terms = vec![t1.norm(), t2.norm()];
    let mut rhs = C64::new(0.0, 0.0);
    for r in 0..n {
        let t = pref * c[r as usize] * th.alpha(beta - r, n, y) * th.alpha(alpha + r, n, z + tau * 2.0);
        terms.push(t.norm());
        rhs += t;
    }
    Ok(IdentitySides { lhs: t1 - t2, rhs, max_term: terms.into_iter().fold(0.0, f64::max) })
}

/// A point module `M(z)`: `x_α·vᵢ = w_α(σ^{−i}(z)) v_{i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointModuleTable {
    pub base: Vec<C64>,
    pub depth: usize,
    /// `rows[i]` is `(w_α(z − i(k+l−n)τ))_α` up to a common factor, `0 ≤ i ≤ depth`.
    pub rows: Vec<Vec<C64>>,
    /// Worst relation residual on `vᵢ`, for `0 ≤ i < depth`.
    pub residuals: Vec<f64>,
    /// Smallest chordal distance between two distinct rows.
    pub min_row_distance: f64,
}

impl PointModuleTable {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Build the table of `M(z)` to depth `N` and check every relation on `v₀,…,v_{N−1}`.
///
/// `R_{ij}·vᵢ = Σ_r c_{ij,r} w_{j−r}(row i+1) w_{i+r}(row i) · v_{i+2}`.
pub fn point_module(rs: &RelationSet, w: &WBasis, z: &[C64], depth: usize) -> Result<PointModuleTable> {
    check_slope(rs, w)?;
    let shift = sigma_shift(w, rs.tau);
    let rows: Vec<Vec<C64>> = (0..=depth)
        .map(|i| {
            let p: Vec<C64> = z.iter().zip(&shift).map(|(a, t)| a - t * i as f64).collect();
            w.eval_all_projective(&p)
        })
        .collect();
    let normalized: Vec<Vec<C64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| normalize_projective(r).ok_or_else(|| Error::NearZero(format!("row {i} of the point module"))))
        .collect::<Result<_>>()?;
    let n = rs.n;
    let mut residuals = Vec::with_capacity(depth);
    for lvl in 0..depth {
        let (first, second) = (&rows[lvl + 1], &rows[lvl]);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if (0..n).all(|r| rs.coeff(i, j, r) == C64::new(0.0, 0.0)) {
                    continue;
                }
                let terms: Vec<C64> = (0..n)
                    .map(|r| {
                        rs.coeff(i, j, r)
                            * first[(j - r).rem_euclid(n) as usize]
                            * second[(i + r).rem_euclid(n) as usize]
                    })
                    .collect();
                worst = worst.max(relative_sum(&terms, "a relation")?);
            }
        }
        residuals.push(worst);
    }
    let mut min_row_distance = f64::INFINITY;
    for a in 0..normalized.len() {
        for b in a + 1..normalized.len() {
            min_row_distance = min_row_distance.min(chordal_distance(&normalized[a], &normalized[b]));
        }
    }
    Ok(PointModuleTable { base: z.to_vec(), depth, rows, residuals, min_row_distance })
}

/// Which of the conditions `(n − kᵢ − lᵢ)τ = 0` hold; the first one is `(n−k−1)τ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    pub per_index: Vec<bool>,
    pub headline: bool,
}

impl Obstruction {
    pub fn all(&self) -> bool {
        self.per_index.iter().all(|&b| b)
    }
}

fn multipliers(f: &Ncf) -> Result<Vec<i64>> {
    let seq = contfrac::sequences(f);
    let n = &seq.k_seq[0];
    (1..=f.g())
        .map(|i| {
            let m = n - &seq.k_seq[i] - &seq.l_seq[i];
            m.to_i64().ok_or_else(|| Error::Overflow(m.to_string()))
        })
        .collect()
}

/// Exact test for `τ` a rational point `a + bη`.
pub fn commutativity_obstruction_exact(f: &Ncf, tau: EPoint) -> Result<Obstruction> {
    let per_index: Vec<bool> = multipliers(f)?.into_iter().map(|m| tau.mul_int(m).is_zero()).collect();
    Ok(Obstruction { headline: per_index[0], per_index })
}

/// Numerical test, `mτ ∈ Λ` up to `tol` in lattice coordinates.
pub fn commutativity_obstruction_numeric(f: &Ncf, tau: C64, lattice: &LatticeParams, tol: f64) -> Result<Obstruction> {
    let per_index: Vec<bool> =
        multipliers(f)?.into_iter().map(|m| m == 0 || lattice.in_torsion(tau, m.abs(), tol)).collect();
    Ok(Obstruction { headline: per_index[0], per_index })
}
