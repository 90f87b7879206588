use serde::Serialize;
use std::ops::{Div, Mul};

/// Sign of a [`SignedLog`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    fn product(self, other: Sign) -> Sign {
        match self.as_i8() * other.as_i8() {
            0 => Sign::Zero,
            1 => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// A real number stored as `sign · exp(log_magnitude)`.
///
/// `Sign::Zero` is an exact zero; its `log_magnitude` is ignored and kept at
/// `-inf` so that accidental use still yields zero after exponentiation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignedLog {
    pub sign: Sign,
    pub log_magnitude: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: Sign::Zero, log_magnitude: f64::NEG_INFINITY };

    pub const ONE: SignedLog = SignedLog { sign: Sign::Positive, log_magnitude: 0.0 };

    pub fn new(sign: Sign, log_magnitude: f64) -> Self {
        if sign == Sign::Zero {
            Self::ZERO
        } else {
            Self { sign, log_magnitude }
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else if v > 0.0 {
            Self::new(Sign::Positive, v.ln())
        } else {
            Self::new(Sign::Negative, (-v).ln())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// Materializes the value; overflows to ±inf and underflows to 0 like `exp`.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            Sign::Zero => 0.0,
            Sign::Positive => self.log_magnitude.exp(),
            Sign::Negative => -self.log_magnitude.exp(),
        }
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;

    fn mul(self, rhs: SignedLog) -> SignedLog {
        let sign = self.sign.product(rhs.sign);
        #[allow(clippy::suspicious_arithmetic_impl)]
        SignedLog::new(sign, self.log_magnitude + rhs.log_magnitude)
    }
}

impl Div for SignedLog {
    type Output = SignedLog;

    /// Division by an exact zero is a logic error in every caller.
    fn div(self, rhs: SignedLog) -> SignedLog {
        assert!(!rhs.is_zero(), "SignedLog division by zero");
        let sign = self.sign.product(rhs.sign);
        SignedLog::new(sign, self.log_magnitude - rhs.log_magnitude)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_ignores_magnitude() {
        let z = SignedLog::new(Sign::Zero, 12.0);
        assert!(z.is_zero());
        assert_eq!(z.to_f64(), 0.0);
        assert_eq!(z, SignedLog::ZERO);
    }

    #[test]
    fn products_beyond_f64_range() {
        let big = SignedLog::new(Sign::Positive, 600.0);
        let prod = big * big;
        assert_eq!(prod.log_magnitude, 1200.0);
        assert!((prod / big).to_f64() > 1e260);
    }

    proptest! {
        #[test]
        fn round_trip_preserves_value(v in prop_oneof![
            -1e300f64..-1e-300,
            1e-300f64..1e300,
            Just(0.0),
        ]) {
            let enc = SignedLog::from_f64(v);
            let back = enc.to_f64();
            let re = SignedLog::from_f64(back);
            prop_assert_eq!(enc.sign, re.sign);
            if !enc.is_zero() {
                let tol = 4.0 * f64::EPSILON * enc.log_magnitude.abs().max(1.0);
                prop_assert!((enc.log_magnitude - re.log_magnitude).abs() <= tol);
                prop_assert!(((back - v) / v).abs() <= 1e-12);
            }
        }

        #[test]
        fn multiplication_matches_f64(a in -1e3f64..1e3, b in -1e3f64..1e3) {
            let prod = (SignedLog::from_f64(a) * SignedLog::from_f64(b)).to_f64();
            let expect = a * b;
            prop_assert!((prod - expect).abs() <= 1e-12 * expect.abs().max(1e-300));
        }
    }
}
