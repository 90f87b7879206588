//! Basis weight rows for the Polya-type operators.
//!
//! All rows are built in the log domain from compensated prefix sums and
//! exponentiated at the end, so `(n)_{n,k}` never has to be materialized.

use serde::Serialize;

use super::pochhammer::{LogFactorials, LogPochhammerPrefix};
use super::summation::{compensated_sum, NeumaierSum};
use crate::{Error, Result};

/// The n+1 weights of `P_{n,k}` at a point x.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightRow {
    pub n: u32,
    pub k: f64,
    pub x: f64,
    pub weights: Vec<f64>,
}

impl WeightRow {
    /// Compensated left-to-right sum of the weights.
    pub fn sum(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

pub(crate) fn check_unit_point(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("x = {x} is outside [0, 1]")));
    }
    Ok(())
}

pub(crate) fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

pub(crate) fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::InvalidArgument(format!("{name} = {v} must be a finite nonnegative number")));
    }
    Ok(())
}

/// Weights `C(n,m) (a)_{m,s} (b)_{n−m,s} / (total)_{n,s}` for m = 0..=n.
///
/// With `a = nx`, `b = n − nx`, `total = n`, `s = k` this is the Lupaş
/// k-row; with `a = x`, `b = 1 − x`, `total = 1`, `s = α` the Stancu row.
/// Requires `a, b ≥ 0`, `total > 0`, `s ≥ 0`.
pub(crate) fn polya_weights(n: u32, a: f64, b: f64, total: f64, step: f64) -> Vec<f64> {
    let facts = LogFactorials::new(n);
    let pa = LogPochhammerPrefix::new(a, step, n);
    let pb = LogPochhammerPrefix::new(b, step, n);
    let denom = LogPochhammerPrefix::new(total, step, n);
    let denom = *denom.get(n).expect("total must be positive");
    (0..=n)
        .map(|m| match (pa.get(m), pb.get(n - m)) {
            (Some(la), Some(lb)) => {
                let mut acc = NeumaierSum::new();
                facts.add_ln_binomial(&mut acc, n, m);
                acc.add_pair(la);
                acc.add_pair(lb);
                acc.sub_pair(&denom);
                acc.value().exp()
            }
            _ => 0.0,
        })
        .collect()
}

/// The weight row of `P_{n,k}` at x.
pub fn polya_weight_row(n: u32, k: f64, x: f64) -> Result<WeightRow> {
    check_n(n)?;
    check_nonneg("k", k)?;
    check_unit_point(x)?;
    let nf = f64::from(n);
    let weights = polya_weights(n, nf * x, nf * (1.0 - x), nf, k);
    Ok(WeightRow { n, k, x, weights })
}

/// Stancu row `p_{n,m}^{⟨α⟩}(x)` from the product form
/// `C(n,m) Π(x+να) Π(1−x+μα) / Π_{i<n}(1+iα)`.
pub fn stancu_weights(n: u32, alpha: f64, x: f64) -> Result<Vec<f64>> {
    check_n(n)?;
    check_nonneg("alpha", alpha)?;
    check_unit_point(x)?;
    Ok(polya_weights(n, x, 1.0 - x, 1.0, alpha))
}

/// Classical Bernstein row `C(n,m) x^m (1−x)^{n−m}`.
pub fn bernstein_weights(n: u32, x: f64) -> Result<Vec<f64>> {
    check_n(n)?;
    check_unit_point(x)?;
    let facts = LogFactorials::new(n);
    let (lx, l1x) = (x.ln(), (1.0 - x).ln());
    Ok((0..=n)
        .map(|m| {
            let r = n - m;
            if (m > 0 && x == 0.0) || (r > 0 && x == 1.0) {
                return 0.0;
            }
            let mut acc = NeumaierSum::new();
            facts.add_ln_binomial(&mut acc, n, m);
            if m > 0 {
                acc.add(f64::from(m) * lx);
            }
            if r > 0 {
                acc.add(f64::from(r) * l1x);
            }
            acc.value().exp()
        })
        .collect())
}

/// Lupaş row `(2·n!/(2n)!) C(n,m) (nx)_m (n−nx)_{n−m}` with the classical
/// rising factorial and the factorial-form normalizer.
pub fn lupas_weights(n: u32, x: f64) -> Result<Vec<f64>> {
    check_n(n)?;
    check_unit_point(x)?;
    let nf = f64::from(n);
    let facts = LogFactorials::new(2 * n);
    let pa = LogPochhammerPrefix::new(nf * x, 1.0, n);
    let pb = LogPochhammerPrefix::new(nf * (1.0 - x), 1.0, n);
    let mut norm = NeumaierSum::new();
    norm.add(std::f64::consts::LN_2);
    norm.add_pair(facts.get(n));
    norm.sub_pair(facts.get(2 * n));
    Ok((0..=n)
        .map(|m| match (pa.get(m), pb.get(n - m)) {
            (Some(la), Some(lb)) => {
                let mut acc = norm;
                facts.add_ln_binomial(&mut acc, n, m);
                acc.add_pair(la);
                acc.add_pair(lb);
                acc.value().exp()
            }
            _ => 0.0,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, m: u64) -> f64 {
        (0..m).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn n_one_is_linear() {
        for &k in &[0.0, 0.3, 1.0, 7.0] {
            for &x in &[0.0, 0.2, 0.5, 0.9, 1.0] {
                let row = polya_weight_row(1, k, x).unwrap();
                assert!((row.weights[0] - (1.0 - x)).abs() < 1e-15);
                assert!((row.weights[1] - x).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn k_zero_half_is_binomial_over_two_to_n() {
        let row = polya_weight_row(10, 0.0, 0.5).unwrap();
        for (m, w) in row.weights.iter().enumerate() {
            let expect = binom(10, m as u64) / 1024.0;
            assert!((w - expect).abs() < 1e-15, "m={m}: {w} vs {expect}");
        }
    }

    #[test]
    fn endpoint_rows_are_exact_unit_vectors() {
        for &k in &[0.0, 0.1, 1.0, 3.0] {
            for n in [1, 2, 7, 50, 200] {
                let left = polya_weight_row(n, k, 0.0).unwrap();
                assert_eq!(left.weights[0], 1.0);
                assert!(left.weights[1..].iter().all(|&w| w == 0.0));
                let right = polya_weight_row(n, k, 1.0).unwrap();
                assert_eq!(right.weights[n as usize], 1.0);
                assert!(right.weights[..n as usize].iter().all(|&w| w == 0.0));
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(polya_weight_row(0, 1.0, 0.5).is_err());
        assert!(polya_weight_row(3, -0.1, 0.5).is_err());
        assert!(polya_weight_row(3, f64::NAN, 0.5).is_err());
        assert!(polya_weight_row(3, 1.0, 1.5).is_err());
        assert!(stancu_weights(3, -1.0, 0.5).is_err());
    }

    #[test]
    fn partition_of_unity_for_large_n() {
        for n in [400, 1600] {
            for &k in &[0.0, 0.2, 1.0] {
                for &x in &[0.001, 0.25, 0.5, 0.999] {
                    let row = polya_weight_row(n, k, x).unwrap();
                    assert!((row.sum() - 1.0).abs() < 1e-11, "n={n} k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn classical_rows_agree_with_k_symbol_rows() {
        for &x in &[0.0, 0.13, 0.5, 0.87, 1.0] {
            let b = bernstein_weights(25, x).unwrap();
            let l = lupas_weights(25, x).unwrap();
            let r0 = polya_weight_row(25, 0.0, x).unwrap();
            let r1 = polya_weight_row(25, 1.0, x).unwrap();
            for m in 0..=25 {
                assert!((b[m] - r0.weights[m]).abs() < 1e-14);
                assert!((l[m] - r1.weights[m]).abs() < 1e-14);
            }
        }
    }
}
