//! Independent cross-checks of the weight and Pochhammer machinery.

use approx::assert_relative_eq;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use polya_approx::num::{lupas_weights, pochhammer_k, pochhammer_k_signed_log, polya_weight_row, Sign};
use statrs::function::gamma::ln_gamma;

fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap()
}

fn binomial(n: u32, m: u32) -> BigRational {
    let mut c = BigInt::one();
    for i in 0..m {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(c)
}

/// Stancu weights from the product form with Polya parameter `alpha`.
fn stancu_product(n: u32, alpha: &BigRational, x: &BigRational) -> Vec<BigRational> {
    let rising = |start: &BigRational, len: u32| {
        (0..len).fold(BigRational::one(), |acc, i| acc * (start + alpha * BigRational::from_integer(i.into())))
    };
    let one = BigRational::one();
    let denom = rising(&one, n);
    let y = &one - x;
    (0..=n).map(|m| binomial(n, m) * rising(x, m) * rising(&y, n - m) / &denom).collect()
}

#[test]
fn weights_match_stancu_product_form() {
    for (n, k) in [(10u32, 0.1), (1, 3.0), (7, 0.5), (25, 1.0), (40, 0.0)] {
        let alpha = exact(k) / BigRational::from_integer(n.into());
        for x in [0.0, 0.3, 0.5, 0.71, 1.0] {
            let row = polya_weight_row(n, k, x).unwrap();
            let reference = stancu_product(n, &alpha, &exact(x));
            assert_eq!(row.weights.len(), reference.len());
            for (w, r) in row.weights.iter().zip(&reference) {
                let r = r.to_f64().unwrap();
                assert!((w - r).abs() <= 1e-14 * r.abs().max(1e-300) + 1e-300, "n={n} k={k} x={x}: {w} vs {r}");
            }
            let total: BigRational = reference.iter().fold(BigRational::zero(), |a, b| a + b);
            assert_eq!(total, BigRational::one());
        }
    }
}

#[test]
fn spec_weight_row_n10_k01_x03() {
    let row = polya_weight_row(10, 0.1, 0.3).unwrap();
    assert!((row.sum() - 1.0).abs() <= 1e-12);
    assert!(row.weights.iter().all(|&w| w >= 0.0));
}

#[test]
fn lupas_weights_are_k_one() {
    for x in [0.0, 0.2, 0.9] {
        let a = lupas_weights(12, x).unwrap();
        let b = polya_weight_row(12, 1.0, x).unwrap().weights;
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).abs() < 1e-15);
        }
    }
}

#[test]
fn rising_factorial_log_matches_log_gamma() {
    let s = pochhammer_k_signed_log(100.0, 100, 1.0);
    assert_eq!(s.sign, Sign::Positive);
    let reference = ln_gamma(200.0) - ln_gamma(100.0);
    assert_relative_eq!(s.log_magnitude, reference, max_relative = 1e-13);
    for (lambda, m) in [(0.5, 30u32), (3.7, 150), (12.25, 400)] {
        let s = pochhammer_k_signed_log(lambda, m, 1.0);
        assert_relative_eq!(s.log_magnitude, ln_gamma(lambda + f64::from(m)) - ln_gamma(lambda), max_relative = 1e-12);
    }
}

#[test]
fn k_symbol_scaling_identity() {
    for (lambda, m, k) in [(1.5, 4u32, 0.5), (2.0, 6, 3.0), (0.3, 10, 0.25), (7.0, 3, 1.75)] {
        let lhs = pochhammer_k(lambda, m, k);
        let rhs = k.powi(m as i32) * pochhammer_k(lambda / k, m, 1.0);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
    }
}

#[test]
fn pochhammer_examples() {
    assert_eq!(pochhammer_k(2.0, 3, 1.0), 24.0);
    assert_eq!(pochhammer_k(1.5, 2, 0.5), 3.0);
    assert_eq!(pochhammer_k(7.3, 0, 2.0), 1.0);
    assert_eq!(pochhammer_k_signed_log(0.0, 3, 1.0).sign, Sign::Zero);
    let s = pochhammer_k_signed_log(2.0, 3, 1.0);
    assert_eq!(s.sign, Sign::Positive);
    assert_relative_eq!(s.log_magnitude, 24f64.ln(), max_relative = 1e-15);
}
