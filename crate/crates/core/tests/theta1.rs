mod common;

use common::{c, rand_point, rel, rng, theta_alpha_product, theta_product};
use qnk::cplx::{e, e_frac};
use qnk::theta1::{self, h1_word_action, parse_word, HLetter, Theta};
use qnk::{LatticeParams, C64};
use rand::Rng;

fn etas() -> [C64; 2] {
    [c(0.0, 0.8), c(0.3, 0.9)]
}

#[test]
fn series_matches_triple_product() {
    let mut r = rng(11);
    for eta in etas().into_iter().chain([c(-0.2, 0.45)]) {
        let p = LatticeParams::new(eta).unwrap();
        for _ in 0..200 {
            let z = rand_point(&mut r, eta, 2.5) + r.random_range(-3.0..3.0);
            let v = theta1::theta(z, &p).unwrap();
            assert!(v.tail_bound <= p.tolerance);
            assert!(rel(v.value, theta_product(z, eta)) < 1e-11, "z = {z}");
        }
    }
}

#[test]
fn zero_at_origin_and_periods() {
    let p = LatticeParams::default();
    let v = theta1::theta(c(0.0, 0.0), &p).unwrap();
    assert!(v.value.norm() < 1e-14);
    let th = Theta::new(&p).unwrap();
    let mut r = rng(3);
    for _ in 0..100 {
        let z = rand_point(&mut r, p.eta, 0.5);
        assert!(rel(th.at(z + 1.0), th.at(z)) < 1e-13);
        assert!(rel(th.at(z + p.eta), e(-z + 0.5) * th.at(z)) < 1e-12);
    }
}

#[test]
fn slow_nome_needs_terms_and_can_fail() {
    let p = LatticeParams { eta: c(0.0, 1e-4), max_terms: 8, ..Default::default() };
    assert!(theta1::theta(c(0.1, 0.0), &p).is_err());
    assert!(LatticeParams::new(c(0.0, -1.0)).is_err());
}

#[test]
fn theta_alpha_matches_product_oracle_and_properties() {
    let mut r = rng(5);
    for eta in etas() {
        let p = LatticeParams::new(eta).unwrap();
        let th = Theta::new(&p).unwrap();
        for n in 1..=6i64 {
            for _ in 0..20 {
                let z = rand_point(&mut r, eta, 0.7);
                let a = r.random_range(-n..2 * n);
                let v = theta1::theta_alpha(a, n, z, &p).unwrap();
                assert!(rel(v.value, theta_alpha_product(a, n, z, eta)) < 1e-10);
                assert!(rel(th.alpha(a + n, n, z), v.value) < 1e-10);
                assert!(rel(th.alpha(a, n, z + 1.0 / n as f64), e_frac(a, n) * v.value) < 1e-10);
            }
        }
    }
}

#[test]
fn theta_alpha_zeros() {
    let p = LatticeParams::default();
    let th = Theta::new(&p).unwrap();
    for n in 2..=7i64 {
        for a in 0..n {
            for m in 0..n {
                let z0 = (p.eta * -(a as f64) + m as f64) / n as f64;
                let scale = th.alpha(a, n, z0 + 0.1).norm();
                assert!(th.alpha(a, n, z0).norm() < 1e-8 * scale, "n={n} α={a} m={m}");
            }
        }
    }
}

#[test]
fn word_action_examples() {
    let n = 5;
    assert_eq!(h1_word_action(&[HLetter::S], 3, n), (3, 3));
    assert_eq!(h1_word_action(&[HLetter::T], 4, n), (0, 0));
    // STS⁻¹T⁻¹ = S T S^{n−1} T^{n−1} acts as e(1/n)
    let mut w = vec![HLetter::S, HLetter::T];
    w.extend(std::iter::repeat_n(HLetter::S, (n - 1) as usize));
    w.extend(std::iter::repeat_n(HLetter::T, (n - 1) as usize));
    for a in 0..n {
        assert_eq!(h1_word_action(&w, a, n), (a, 1));
    }
    assert!(parse_word("STx").is_err());
    assert_eq!(parse_word("sTS").unwrap(), vec![HLetter::S, HLetter::T, HLetter::S]);
}

#[test]
fn numeric_action_agrees_with_symbolic() {
    let p = LatticeParams::new(c(0.1, 0.7)).unwrap();
    let th = Theta::new(&p).unwrap();
    let mut r = rng(9);
    for _ in 0..40 {
        let n = r.random_range(2..=6i64);
        let len = r.random_range(1..=6usize);
        let word: Vec<HLetter> = (0..len).map(|_| if r.random_bool(0.5) { HLetter::S } else { HLetter::T }).collect();
        let a = r.random_range(0..n);
        let mut f: Box<dyn Fn(C64) -> C64> = Box::new(move |z| th.alpha(a, n, z));
        for l in word.iter().rev() {
            f = match l {
                HLetter::S => Box::new(theta1::op_s(n, f)),
                HLetter::T => Box::new(theta1::op_t(n, p.eta, f)),
            };
        }
        let (b, ph) = h1_word_action(&word, a, n);
        let z = rand_point(&mut r, p.eta, 0.4);
        assert!(rel(f(z), e_frac(ph, n) * th.alpha(b, n, z)) < 1e-10);
    }
}
