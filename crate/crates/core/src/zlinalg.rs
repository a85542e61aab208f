//! Exact integer linear algebra around `D(n₁,…,n_g)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::contfrac::{d_range, Ncf};
use crate::epoint::EPoint;
use crate::{Error, Result};

/// A square matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let g = rows.len();
        if g == 0 {
            return Err(Error::Empty);
        }
        if rows.iter().any(|r| r.len() != g) {
            return Err(Error::Dimension("matrix is not square".into()));
        }
        Ok(IntMatrix { rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect())
    }

    pub fn identity(g: usize) -> Self {
        let rows = (0..g)
            .map(|i| (0..g).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        IntMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        let g = self.dim();
        if other.dim() != g {
            return Err(Error::Dimension(format!("{g} vs {}", other.dim())));
        }
        let rows = (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| (0..g).map(|t| &self.rows[i][t] * &other.rows[t][j]).sum())
                    .collect()
            })
            .collect();
        Ok(IntMatrix { rows })
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows.iter().map(|r| r.iter().map(|x| x * c).collect()).collect() }
    }

    pub fn transpose(&self) -> IntMatrix {
        let g = self.dim();
        IntMatrix { rows: (0..g).map(|i| (0..g).map(|j| self.rows[j][i].clone()).collect()).collect() }
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> BigInt {
        let g = self.dim();
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for p in 0..g {
            if a[p][p].is_zero() {
                match (p + 1..g).find(|&r| !a[r][p].is_zero()) {
                    Some(r) => {
                        a.swap(p, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in p + 1..g {
                for j in p + 1..g {
                    let v = &a[i][j] * &a[p][p] - &a[i][p] * &a[p][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[p][p].clone();
        }
        sign * &a[g - 1][g - 1]
    }
}

/// Smith invariant factors `s₁ | s₂ | ⋯`, nonnegative, zeros last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantFactors {
    pub factors: Vec<BigInt>,
}

impl InvariantFactors {
    /// Order `Π sᵢ²` of `⊕ E[sᵢ]`, or `None` when some factor is zero.
    pub fn torsion_order(&self) -> Option<BigInt> {
        if self.factors.iter().any(Zero::is_zero) {
            return None;
        }
        Some(self.factors.iter().map(|s| s * s).product())
    }

    /// The factors different from 1 — the `m` in each nontrivial summand `E[m]`.
    pub fn nontrivial(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|s| !s.is_one()).cloned().collect()
    }
}

/// `D(n₁,…,n_g)`: diagonal `nᵢ`, off-diagonals `−1`.
pub fn dmatrix(entries: &[BigInt]) -> Result<IntMatrix> {
    tridiagonal(entries, &vec![-BigInt::one(); entries.len().saturating_sub(1)])
}

fn tridiagonal(diag: &[BigInt], off: &[BigInt]) -> Result<IntMatrix> {
    let g = diag.len();
    if g == 0 {
        return Err(Error::Empty);
    }
    if off.len() + 1 != g {
        return Err(Error::Dimension(format!("{} off-diagonal entries for size {g}", off.len())));
    }
    let mut rows = vec![vec![BigInt::zero(); g]; g];
    for i in 0..g {
        rows[i][i] = diag[i].clone();
        if i + 1 < g {
            rows[i][i + 1] = off[i].clone();
            rows[i + 1][i] = off[i].clone();
        }
    }
    Ok(IntMatrix { rows })
}

/// Smith normal form by row and column reduction.
pub fn smith_invariants(m: &IntMatrix) -> InvariantFactors {
    let g = m.dim();
    let mut a = m.rows.clone();
    let mut out = Vec::with_capacity(g);
    for t in 0..g {
        // smallest nonzero entry of the trailing block becomes the pivot
        loop {
            let pivot = (t..g)
                .flat_map(|i| (t..g).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i, j), &(r, s)| a[i][j].abs().cmp(&a[r][s].abs()));
            let Some((pi, pj)) = pivot else {
                out.resize(g, BigInt::zero());
                return finish(out);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..g {
                let q = a[i][t].div_floor(&p);
                if !q.is_zero() {
                    for j in t..g {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..g {
                let q = a[t][j].div_floor(&p);
                if !q.is_zero() {
                    for i in t..g {
                        let v = &q * &a[i][t];
                        a[i][j] -= v;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest; otherwise fold the offending row in
            let bad = (t + 1..g).find(|&i| (t + 1..g).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    for j in t..g {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => {
                    out.push(p.abs());
                    break;
                }
            }
        }
    }
    finish(out)
}

fn finish(mut f: Vec<BigInt>) -> InvariantFactors {
    // the elimination already yields a divisibility chain; zeros trail
    let zeros = f.iter().filter(|x| x.is_zero()).count();
    f.retain(|x| !x.is_zero());
    f.extend(std::iter::repeat_n(BigInt::zero(), zeros));
    InvariantFactors { factors: f }
}

/// Numerator of `D⁻¹ = (1/n)·(d[i,j])` with
/// `d[i,j] = d(n₁,…,n_{min−1})·d(n_{max+1},…,n_g)`. Returns `(n, (d[i,j]))`.
pub fn d_inverse(f: &Ncf) -> Result<(BigInt, IntMatrix)> {
    d_inverse_entries(f.entries())
}

/// Same as [`d_inverse`] for arbitrary integer entries; fails if `d = 0`.
pub fn d_inverse_entries(e: &[BigInt]) -> Result<(BigInt, IntMatrix)> {
    let g = e.len();
    if g == 0 {
        return Err(Error::Empty);
    }
    let n = crate::contfrac::d(e);
    if n.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let rows = (1..=g)
        .map(|i| {
            (1..=g)
                .map(|j| {
                    let (lo, hi) = (i.min(j), i.max(j));
                    d_range(e, 1, lo - 1) * d_range(e, hi + 1, g)
                })
                .collect()
        })
        .collect();
    Ok((n, IntMatrix { rows }))
}

/// The symmetric tridiagonal `A(a;b)`: diagonal `a₁+b₁, aᵢ+b_{i−1}+bᵢ, a_g+b_{g−1}`,
/// off-diagonal `bᵢ`.
pub fn amatrix(a: &[BigInt], b: &[BigInt]) -> Result<IntMatrix> {
    let g = a.len();
    if g == 0 {
        return Err(Error::Empty);
    }
    if b.len() + 1 != g {
        return Err(Error::Dimension(format!("a has {g} entries, b has {}", b.len())));
    }
    let diag: Vec<BigInt> = (0..g)
        .map(|i| {
            let mut x = a[i].clone();
            if i > 0 {
                x += &b[i - 1];
            }
            if i + 1 < g {
                x += &b[i];
            }
            x
        })
        .collect();
    tridiagonal(&diag, b)
}

/// Top self-intersection `D^g/g!` of `Σ aᵢXᵢ + Σ bᵢΔ_{i,i+1}`, i.e. `det A(a;b)`.
pub fn intersection_number(a: &[BigInt], b: &[BigInt]) -> Result<BigInt> {
    Ok(amatrix(a, b)?.det())
}

/// Degrees `nᵢ − 2 + δ_{i,1} + δ_{i,g}` of the divisors `Dᵢ` in `D_{n/k}`.
pub fn standard_degrees(f: &Ncf) -> Vec<BigInt> {
    let g = f.g();
    f.entries()
        .iter()
        .enumerate()
        .map(|(i, x)| x - 2 + i64::from(i == 0) + i64::from(i + 1 == g))
        .collect()
}

/// A graph with integer edge labels (loops allowed); vertices are `1..=vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, BigInt)>,
}

impl WeightedGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize, BigInt)>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::Empty);
        }
        for (i, j, label) in &edges {
            for &v in [i, j] {
                if v == 0 || v > vertices {
                    return Err(Error::Index { index: v, max: vertices });
                }
            }
            if label.is_zero() {
                return Err(Error::Dimension(format!("edge ({i},{j}) has label 0")));
            }
        }
        Ok(WeightedGraph { vertices, edges })
    }

    /// The graph whose divisor is `D_{n/k}`: a path with labels −1 and loops
    /// `nᵢ + 2 − δ_{i,1} − δ_{i,g}`.
    pub fn dnk(f: &Ncf) -> Self {
        let g = f.g();
        let mut edges = Vec::new();
        for (i, x) in f.entries().iter().enumerate() {
            let loop_label = x + 2 - i64::from(i == 0) - i64::from(i + 1 == g);
            edges.push((i + 1, i + 1, loop_label));
            if i + 1 < g {
                edges.push((i + 1, i + 2, -BigInt::one()));
            }
        }
        WeightedGraph { vertices: g, edges }
    }

    /// `M_G = Deg_G + A_G`.
    pub fn m_matrix(&self) -> IntMatrix {
        let g = self.vertices;
        let mut rows = vec![vec![BigInt::zero(); g]; g];
        for (i, j, label) in &self.edges {
            let (i, j) = (i - 1, j - 1);
            if i == j {
                rows[i][i] += label;
            } else {
                rows[i][j] += label;
                rows[j][i] += label;
                rows[i][i] += label;
                rows[j][j] += label;
            }
        }
        IntMatrix { rows }
    }
}

/// Kernel of `M_G` on `E^g`, read off from the invariant factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelStructure {
    pub invariant_factors: InvariantFactors,
    /// `Π sᵢ²`; `None` when the kernel is positive-dimensional.
    pub order: Option<BigInt>,
    /// Order `|det|^{2g}` of `E[det]^g`, the alternative reading of the kernel.
    pub literal_reading_order: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInvariants {
    pub m: IntMatrix,
    pub selfint: BigInt,
    pub kernel: KernelStructure,
}

pub fn graph_divisor_invariants(gr: &WeightedGraph) -> GraphInvariants {
    let m = gr.m_matrix();
    let selfint = m.det();
    let invariant_factors = smith_invariants(&m);
    let order = invariant_factors.torsion_order();
    let literal_reading_order = num_traits::pow(selfint.abs(), 2 * gr.vertices);
    GraphInvariants {
        m,
        selfint,
        kernel: KernelStructure { invariant_factors, order, literal_reading_order },
    }
}

/// Data of a standard divisor: effective divisors `𝔡ᵢ` on `E` (as lists of points,
/// repeated for multiplicity) and points `z₁,…,z_{g−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StdDivisor {
    pub d: Vec<Vec<EPoint>>,
    pub z: Vec<EPoint>,
}

impl StdDivisor {
    pub fn new(d: Vec<Vec<EPoint>>, z: Vec<EPoint>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::Empty);
        }
        if z.len() + 1 != d.len() {
            return Err(Error::Dimension(format!("{} divisors need {} points z", d.len(), d.len() - 1)));
        }
        Ok(StdDivisor { d, z })
    }

    /// `D_{n/k}` itself: `𝔡ᵢ = Dᵢ` supported at the origin, all `zⱼ = 0`.
    pub fn dnk(f: &Ncf) -> Result<Self> {
        let d = standard_degrees(f)
            .iter()
            .map(|m| {
                let m = usize::try_from(m).map_err(|_| Error::Overflow(m.to_string()))?;
                Ok(vec![EPoint::zero(); m])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StdDivisor { z: vec![EPoint::zero(); d.len() - 1], d })
    }

    pub fn g(&self) -> usize {
        self.d.len()
    }

    fn zz(&self, j: usize) -> EPoint {
        // z₀ = z_g = 0
        if j == 0 || j == self.g() {
            EPoint::zero()
        } else {
            self.z[j - 1]
        }
    }

    /// `sum(𝔡ᵢ) − zᵢ + z_{i−1}` for `i = 1..=g`.
    pub fn balances(&self) -> Vec<EPoint> {
        (1..=self.g())
            .map(|i| {
                let s = self.d[i - 1].iter().fold(EPoint::zero(), |acc, p| acc + *p);
                s - self.zz(i) + self.zz(i - 1)
            })
            .collect()
    }
}

/// Linear equivalence of two standard divisors: equal degrees of each `𝔡ᵢ` and equal
/// `sum(𝔡ᵢ) − zᵢ + z_{i−1}` in `E` for every `i`.
pub fn std_divisor_equivalent(x: &StdDivisor, y: &StdDivisor) -> Result<bool> {
    if x.g() != y.g() {
        return Err(Error::Dimension(format!("g = {} vs g = {}", x.g(), y.g())));
    }
    let degrees = x.d.iter().zip(&y.d).all(|(a, b)| a.len() == b.len());
    Ok(degrees && x.balances() == y.balances())
}

/// Criterion for `D_{𝔡ᵢ,zⱼ} ∼ D_{n/k}`: `deg 𝔡ᵢ = nᵢ − 2 + δ_{i,1} + δ_{i,g}` and
/// `sum(𝔡ᵢ) = zᵢ − z_{i−1}`.
pub fn equivalent_to_dnk(x: &StdDivisor, f: &Ncf) -> Result<bool> {
    if x.g() != f.g() {
        return Err(Error::Dimension(format!("g = {} vs g = {}", x.g(), f.g())));
    }
    let degrees = standard_degrees(f)
        .iter()
        .zip(&x.d)
        .all(|(m, di)| *m == BigInt::from(di.len()));
    Ok(degrees && x.balances().iter().all(EPoint::is_zero))
}
