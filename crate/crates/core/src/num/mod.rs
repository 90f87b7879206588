//! Numerically stable primitives shared by every operator.

pub mod pochhammer;
pub mod quadrature;
pub mod signed_log;
pub mod summation;
pub mod weights;

pub use pochhammer::{ln_binomial, pochhammer_k, pochhammer_k_signed_log};
pub use quadrature::{gauss_legendre, QuadratureRule, DEFAULT_QUAD_ORDER, MAX_QUAD_ORDER};
pub use signed_log::{Sign, SignedLog};
pub use summation::{compensated_dot, compensated_sum, NeumaierSum};
pub use weights::{bernstein_weights, lupas_weights, polya_weight_row, stancu_weights, WeightRow};
