//! Generalized Lupaş operators built on the Polya distribution with the
//! Pochhammer k-symbol, their Kantorovich–Stancu modification and the
//! bivariate tensor operator.
//!
//! The crate evaluates the operators, computes their moments both in closed
//! form and by brute force, and checks the error bounds and Voronovskaja
//! limits numerically.
//!
//! ```
//! use polya_approx::catalog::lookup;
//! use polya_approx::operators::eval_lupas_k;
//!
//! let e1 = lookup("e1").unwrap();
//! let v = eval_lupas_k(&e1, 10, 0.5, 0.3).unwrap();
//! assert!((v - 0.3).abs() < 1e-14);
//! ```

pub mod analysis;
pub mod bivariate;
pub mod catalog;
pub mod figures;
pub mod moments;
pub mod num;
pub mod operators;
pub mod report;
pub mod verify;

pub use catalog::FunctionSpec;
pub use num::{QuadratureRule, WeightRow};
pub use operators::{EvalResult, Operator, OperatorParams, OperatorTag};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("quadrature order {0} is outside 1..=64")]
    QuadratureOrder(usize),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("function `{0}` has no analytic derivative")]
    MissingDerivative(String),
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),
    #[error("exact oracle supports n <= {max}, got n = {n}")]
    OracleRange { n: u32, max: u32 },
    #[error("non-finite result: {0}")]
    NonFinite(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
