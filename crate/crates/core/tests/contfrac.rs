mod common;

use num_bigint::BigInt;
use qnk::contfrac::{self, d, d_i64, d_range, Ncf};
use qnk::Slope;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Determinant of the tridiagonal matrix by cofactor expansion along the first row.
fn det_oracle(m: &[Vec<i64>]) -> i64 {
    let g = m.len();
    if g == 0 {
        return 1;
    }
    (0..g)
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det_oracle(&minor)
        })
        .sum()
}

fn tridiag(e: &[i64]) -> Vec<Vec<i64>> {
    let g = e.len();
    (0..g).map(|i| (0..g).map(|j| if i == j { e[i] } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect()).collect()
}

/// `Σ (−1)^{(g−j)/2} n_{i₁}⋯n_{i_j}` over all subsequences whose complement splits into
/// adjacent pairs — enumerated over all `2^g` subsets.
fn combinatorial_oracle(e: &[i64]) -> i64 {
    let g = e.len();
    let mut total = 0;
    'subsets: for mask in 0u32..(1 << g) {
        let mut prod = 1;
        let mut i = 0;
        let mut removed = 0;
        while i < g {
            if mask & (1 << i) != 0 {
                prod *= e[i];
                i += 1;
            } else {
                if i + 1 >= g || mask & (1 << (i + 1)) != 0 {
                    continue 'subsets;
                }
                removed += 2;
                i += 2;
            }
        }
        total += if (removed / 2) % 2 == 0 { prod } else { -prod };
    }
    total
}

#[test]
fn expand_examples() {
    assert_eq!(common::ncf_of(8, 3).entries_i64().unwrap(), vec![3, 3]);
    assert_eq!(common::ncf_of(4, 3).entries_i64().unwrap(), vec![2, 2, 2]);
    assert_eq!(common::ncf_of(5, 1).entries_i64().unwrap(), vec![5]);
}

#[test]
fn evaluate_examples() {
    let s = contfrac::evaluate(&Ncf::from_i64(&[2, 2, 5]).unwrap());
    assert_eq!((s.n().clone(), s.k().clone()), (BigInt::from(13), BigInt::from(9)));
    let s = contfrac::evaluate(&Ncf::from_i64(&[7]).unwrap());
    assert_eq!((s.n().clone(), s.k().clone()), (BigInt::from(7), BigInt::from(1)));
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(Slope::new(3, 3).is_err());
    assert!(Slope::new(6, 4).is_err());
    assert!(Slope::new(3, 0).is_err());
    assert!(Ncf::from_i64(&[3, 1]).is_err());
    assert!(Ncf::from_i64(&[]).is_err());
}

#[test]
fn sequences_examples() {
    let s = contfrac::sequences(&Ncf::from_i64(&[3, 3]).unwrap());
    assert_eq!(s.k_seq, big(&[8, 3, 1, 0]));
    assert_eq!(s.l_seq, big(&[0, 1, 3, 8]));
    assert_eq!(s.k_prime, BigInt::from(3));
    let s = contfrac::sequences(&Ncf::from_i64(&[6]).unwrap());
    assert_eq!(s.k_seq, big(&[6, 1, 0]));
    assert_eq!(s.l_seq, big(&[0, 1, 6]));
    assert_eq!(s.k_prime, BigInt::from(1));
}

#[test]
fn sequences_satisfy_recursions_and_tails() {
    for (n, k) in common::slopes(60) {
        let f = common::ncf_of(n, k);
        let e = f.entries_i64().unwrap();
        let s = contfrac::sequences(&f);
        let g = f.g();
        for i in 1..=g {
            let ni = BigInt::from(e[i - 1]);
            assert_eq!(&s.k_seq[i] * &ni, &s.k_seq[i - 1] + &s.k_seq[i + 1]);
            assert_eq!(&s.l_seq[i] * &ni, &s.l_seq[i - 1] + &s.l_seq[i + 1]);
            // k_{i−1}/kᵢ = [nᵢ,…,n_g] and l_{i+1}/lᵢ = [nᵢ,…,n₁]
            let tail = contfrac::evaluate(&Ncf::from_i64(&e[i - 1..]).unwrap());
            assert_eq!((tail.n().clone(), tail.k().clone()), (s.k_seq[i - 1].clone(), s.k_seq[i].clone()));
            let mut head: Vec<i64> = e[..i].to_vec();
            head.reverse();
            let head = contfrac::evaluate(&Ncf::from_i64(&head).unwrap());
            assert_eq!((head.n().clone(), head.k().clone()), (s.l_seq[i + 1].clone(), s.l_seq[i].clone()));
        }
        assert_eq!((&s.k_seq[1] * &s.k_prime) % BigInt::from(n), BigInt::from(1 % n));
    }
}

#[test]
fn d_examples_and_conventions() {
    assert_eq!(d_i64(&[3, 3]), BigInt::from(8));
    assert_eq!(d_i64(&[]), BigInt::from(1));
    // d(2,3)·d(3,4) = d(3)·d(2,3,4) + 1
    assert_eq!(d_i64(&[2, 3]) * d_i64(&[3, 4]), d_i64(&[3]) * d_i64(&[2, 3, 4]) + 1);
    assert_eq!(d_i64(&[2, 3, 4]), BigInt::from(18));
    let e = big(&[2, 3, 4]);
    assert_eq!(d_range(&e, 2, 1), BigInt::from(1));
    assert_eq!(d_range(&e, 3, 1), BigInt::from(0));
    assert_eq!(d_range(&e, 1, 3), BigInt::from(18));
}

#[test]
fn d_matches_cofactor_expansion() {
    for e in [vec![3, -1, 4], vec![0, 5, 2, 7], vec![-2, -2, 3, 1, 9], vec![1, 1, 1, 1, 1, 1]] {
        assert_eq!(d_i64(&e), BigInt::from(det_oracle(&tridiag(&e))), "{e:?}");
    }
}

#[test]
fn combinatorial_n_matches_subset_enumeration() {
    for e in common::all_entry_tuples(6, 5) {
        let f = Ncf::from_i64(&e).unwrap();
        assert_eq!(contfrac::combinatorial_n(&f), BigInt::from(combinatorial_oracle(&e)), "{e:?}");
    }
    assert_eq!(contfrac::combinatorial_n(&Ncf::from_i64(&[2, 2, 2]).unwrap()), BigInt::from(4));
}

#[test]
fn sl2_bookkeeping() {
    for (n, k) in common::slopes(40) {
        let f = common::ncf_of(n, k);
        let b = contfrac::slope_via_sl2(&f);
        assert_eq!((b.slope.n().clone(), b.slope.k().clone()), (BigInt::from(n), BigInt::from(k)));
        assert_eq!((b.rank.clone(), b.degree.clone()), (BigInt::from(k), BigInt::from(n)));
    }
    let b = contfrac::slope_via_sl2(&Ncf::from_i64(&[5]).unwrap());
    assert_eq!(b.vector, [BigInt::from(5), BigInt::from(1)]);
}

#[test]
fn large_entries_do_not_overflow() {
    let f = Ncf::from_i64(&[1_000_000_007; 6]).unwrap();
    let s = contfrac::evaluate(&f);
    assert_eq!(contfrac::expand(&s), f);
    assert!(s.n().bits() > 150);
    assert_eq!(d(f.entries()), contfrac::combinatorial_n(&f));
}
