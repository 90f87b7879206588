//! Pochhammer k-symbol `(λ)_{m,k} = λ(λ+k)(λ+2k)···(λ+(m−1)k)`.
//!
//! `k = 1` is the classical rising factorial and `k = 0` gives `λ^m`.
//! The empty product `(λ)_{0,k}` is 1 for every λ, including λ = 0, which
//! keeps the endpoint weight rows at x ∈ {0, 1} well formed.

use super::signed_log::{Sign, SignedLog};
use super::summation::NeumaierSum;

/// Direct product in `f64`. Overflows for large arguments; use
/// [`pochhammer_k_signed_log`] when that matters.
pub fn pochhammer_k(lambda: f64, m: u32, k: f64) -> f64 {
    (0..m).fold(1.0, |acc, j| acc * (lambda + f64::from(j) * k))
}

/// `(λ)_{m,k}` in signed-log form. Factors are accumulated as compensated log
/// sums; any exactly-zero factor gives an exact zero.
pub fn pochhammer_k_signed_log(lambda: f64, m: u32, k: f64) -> SignedLog {
    let mut negative = false;
    let mut logs = NeumaierSum::new();
    for j in 0..m {
        let factor = lambda + f64::from(j) * k;
        if factor == 0.0 {
            return SignedLog::ZERO;
        }
        if factor < 0.0 {
            negative = !negative;
        }
        logs.add(factor.abs().ln());
    }
    let sign = if negative { Sign::Negative } else { Sign::Positive };
    SignedLog::new(sign, logs.value())
}

/// Prefix table of `ln (λ)_{m,k}` for `m = 0..=len`, for λ ≥ 0 and k ≥ 0.
///
/// Entries are kept as unevaluated compensated pairs so that differences of
/// large prefixes stay accurate. `None` marks an exact zero, which happens
/// exactly when λ = 0 and m ≥ 1.
#[derive(Debug, Clone)]
pub struct LogPochhammerPrefix {
    entries: Vec<Option<NeumaierSum>>,
}

impl LogPochhammerPrefix {
    pub fn new(lambda: f64, k: f64, len: u32) -> Self {
        debug_assert!(lambda >= 0.0 && k >= 0.0);
        let mut entries = Vec::with_capacity(len as usize + 1);
        let mut acc = NeumaierSum::new();
        let mut zero = false;
        entries.push(Some(acc));
        for j in 0..len {
            let factor = lambda + f64::from(j) * k;
            if factor == 0.0 {
                zero = true;
            } else {
                acc.add(factor.ln());
            }
            entries.push(if zero { None } else { Some(acc) });
        }
        Self { entries }
    }

    pub fn get(&self, m: u32) -> Option<&NeumaierSum> {
        self.entries[m as usize].as_ref()
    }
}

/// Prefix table of `ln m!` for `m = 0..=len` as compensated pairs.
#[derive(Debug, Clone)]
pub struct LogFactorials {
    entries: Vec<NeumaierSum>,
}

impl LogFactorials {
    pub fn new(len: u32) -> Self {
        let mut entries = Vec::with_capacity(len as usize + 1);
        let mut acc = NeumaierSum::new();
        entries.push(acc);
        for j in 1..=len {
            acc.add(f64::from(j).ln());
            entries.push(acc);
        }
        Self { entries }
    }

    pub fn get(&self, m: u32) -> &NeumaierSum {
        &self.entries[m as usize]
    }

    /// Adds `ln C(n, m)` to `acc`.
    pub fn add_ln_binomial(&self, acc: &mut NeumaierSum, n: u32, m: u32) {
        acc.add_pair(self.get(n));
        acc.sub_pair(self.get(m));
        acc.sub_pair(self.get(n - m));
    }
}

/// `ln C(n, m)`.
pub fn ln_binomial(n: u32, m: u32) -> f64 {
    assert!(m <= n);
    let table = LogFactorials::new(n);
    let mut acc = NeumaierSum::new();
    table.add_ln_binomial(&mut acc, n, m);
    acc.value()
}
