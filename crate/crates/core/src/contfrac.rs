//! Negative continued fractions `n/k = [n₁,…,n_g] = n₁ − 1/(n₂ − 1/(⋯ − 1/n_g))`
//! and the determinants `d(n₁,…,n_g)` of the tridiagonal matrices `D(n₁,…,n_g)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// A coprime pair `n > k ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slope {
    n: BigInt,
    k: BigInt,
}

impl Slope {
    pub fn new(n: impl Into<BigInt>, k: impl Into<BigInt>) -> Result<Self> {
        let (n, k) = (n.into(), k.into());
        let bad = |reason| Error::InvalidSlope { n: n.to_string(), k: k.to_string(), reason };
        if k < BigInt::one() {
            return Err(bad("need k ≥ 1"));
        }
        if n <= k {
            return Err(bad("need n > k"));
        }
        if !n.gcd(&k).is_one() {
            return Err(bad("n and k must be coprime"));
        }
        Ok(Slope { n, k })
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn k(&self) -> &BigInt {
        &self.k
    }
}

/// A negative continued fraction with all entries `≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ncf {
    entries: Vec<BigInt>,
}

impl TryFrom<Vec<BigInt>> for Ncf {
    type Error = Error;
    fn try_from(v: Vec<BigInt>) -> Result<Self> {
        Ncf::new(v)
    }
}

impl From<Ncf> for Vec<BigInt> {
    fn from(f: Ncf) -> Self {
        f.entries
    }
}

impl Ncf {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidNcf("no entries".into()));
        }
        if let Some(bad) = entries.iter().find(|x| **x < BigInt::from(2)) {
            return Err(Error::InvalidNcf(format!("entry {bad} is below 2")));
        }
        Ok(Ncf { entries })
    }

    pub fn from_i64(entries: &[i64]) -> Result<Self> {
        Ncf::new(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// Entries as machine integers, for the numerical layers.
    pub fn entries_i64(&self) -> Result<Vec<i64>> {
        self.entries
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string())))
            .collect()
    }

    pub fn g(&self) -> usize {
        self.entries.len()
    }

    pub fn reversed(&self) -> Ncf {
        Ncf { entries: self.entries.iter().rev().cloned().collect() }
    }
}

/// The integer sequences `k₀,…,k_{g+1}`, `l₀,…,l_{g+1}` and `k′`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeSequences {
    pub k_seq: Vec<BigInt>,
    pub l_seq: Vec<BigInt>,
    pub k_prime: BigInt,
}

/// Determinant of the tridiagonal matrix with diagonal `entries` and `−1` off the diagonal.
///
/// `d() = 1`. Any integers are accepted.
pub fn d(entries: &[BigInt]) -> BigInt {
    // continuant: d_j = n_j d_{j-1} - d_{j-2}
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for x in entries {
        let next = x * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

pub fn d_i64(entries: &[i64]) -> BigInt {
    d(&entries.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
}

/// `d` of the entries between positions `from` and `to` (1-based, inclusive);
/// an empty range gives 1 and a range of length −1 gives 0.
pub fn d_range(entries: &[BigInt], from: usize, to: usize) -> BigInt {
    if to + 1 == from {
        BigInt::one()
    } else if to + 2 == from {
        BigInt::zero()
    } else {
        d(&entries[from - 1..to])
    }
}

/// Greedy expansion: `n₁ = ⌈n/k⌉`, then continue with `(k, n₁k − n)`.
pub fn expand(s: &Slope) -> Ncf {
    let (mut n, mut k) = (s.n.clone(), s.k.clone());
    let mut entries = Vec::new();
    while !k.is_zero() {
        let q = n.div_ceil(&k);
        let r = &q * &k - &n;
        entries.push(q);
        n = std::mem::replace(&mut k, r);
    }
    Ncf { entries }
}

/// `(d(n₁,…,n_g), d(n₂,…,n_g))`.
pub fn evaluate(f: &Ncf) -> Slope {
    let n = d(&f.entries);
    let k = d(&f.entries[1..]);
    Slope { n, k }
}

pub fn sequences(f: &Ncf) -> SlopeSequences {
    let e = &f.entries;
    let g = e.len();
    // k_i = d(n_{i+1},…,n_g), l_i = d(n_{i-1},…,n_1)
    let k_seq: Vec<BigInt> = (0..=g + 1).map(|i| d_range(e, i + 1, g)).collect();
    let rev: Vec<BigInt> = e.iter().rev().cloned().collect();
    let l_seq: Vec<BigInt> = (0..=g + 1)
        .map(|i| if i == 0 { BigInt::zero() } else { d_range(&rev, g + 2 - i, g) })
        .collect();
    let k_prime = l_seq[g].clone();
    SlopeSequences { k_seq, l_seq, k_prime }
}

/// `n` as the signed sum over subsequences `i₁ < ⋯ < i_j` that alternate in parity,
/// start odd and end with the parity of `g`, each weighted by `(−1)^{(g−j)/2}`.
///
/// Equivalently, the gaps between chosen indices (and before the first / after the
/// last) all have even length. Computed by dynamic programming over the last chosen
/// index, so it is quadratic rather than exponential in `g`.
pub fn combinatorial_n(f: &Ncf) -> BigInt {
    let e = &f.entries;
    let g = e.len();
    let sign = |gap: usize| if (gap / 2).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    // ending[i] = signed sum over admissible subsequences whose last index is i (1-based)
    let mut ending = vec![BigInt::zero(); g + 1];
    for i in 1..=g {
        let mut acc = if (i - 1) % 2 == 0 { sign(i - 1) } else { BigInt::zero() };
        for j in 1..i {
            let gap = i - j - 1;
            if gap % 2 == 0 {
                acc += sign(gap) * &ending[j];
            }
        }
        ending[i] = &e[i - 1] * acc;
    }
    let mut total = if g.is_multiple_of(2) { sign(g) } else { BigInt::zero() };
    for (i, v) in ending.iter().enumerate().skip(1) {
        if (g - i).is_multiple_of(2) {
            total += sign(g - i) * v;
        }
    }
    total
}

/// Output of [`slope_via_sl2`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2Bookkeeping {
    /// `T^{n₁}S⋯T^{n_g}S·(1,0)ᵀ` in the (degree, rank) basis.
    pub vector: [BigInt; 2],
    /// `T^{n₁}S⋯ST^{n_g}`, row-major.
    pub matrix: [[BigInt; 2]; 2],
    pub slope: Slope,
    /// Rank and degree of the image of a rank-1 degree-0 class.
    pub rank: BigInt,
    pub degree: BigInt,
}

type M2 = [[BigInt; 2]; 2];

fn mul2(a: &M2, b: &M2) -> M2 {
    let c = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]]
}

/// Products of `S = [[0,−1],[1,0]]` and `T = [[1,1],[0,1]]` acting on (degree, rank).
pub fn slope_via_sl2(f: &Ncf) -> Sl2Bookkeeping {
    let i = |x: i64| BigInt::from(x);
    let s: M2 = [[i(0), i(-1)], [i(1), i(0)]];
    let t_pow = |m: &BigInt| -> M2 { [[i(1), m.clone()], [i(0), i(1)]] };
    let mut m: M2 = [[i(1), i(0)], [i(0), i(1)]];
    for (idx, x) in f.entries.iter().enumerate() {
        if idx > 0 {
            m = mul2(&m, &s);
        }
        m = mul2(&m, &t_pow(x));
    }
    // (T^{n₁}S⋯T^{n_g}) S (1,0)ᵀ = M (0,1)ᵀ
    let vector = [m[0][1].clone(), m[1][1].clone()];
    let (degree, rank) = (vector[0].clone(), vector[1].clone());
    let g = degree.gcd(&rank);
    let slope = Slope { n: &degree / &g, k: &rank / &g };
    Sl2Bookkeeping { vector, matrix: m, slope, rank, degree }
}

/// `true` iff every entry is 2.
pub fn all_twos(f: &Ncf) -> bool {
    f.entries.iter().all(|x| *x == BigInt::from(2))
}
