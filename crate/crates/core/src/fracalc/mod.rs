//! Riemann-Liouville fractional integration and numerical Laplace
//! transforms.
//!
//! The RL integral of order ν is
//! (I^ν f)(t) = 1/Γ(ν) ∫₀ᵗ (t−u)^{ν−1} f(u) du.
//! It is available three ways: in closed form on a single power
//! ([`rl_power_rule`]), term by term on a [`GeneralizedPowerSeries`]
//! ([`rl_integral_series`]), and numerically by product integration
//! ([`rl_integral_quad`]).

mod laplace;
mod quad;
mod series;

pub use laplace::{
    laplace_numeric, laplace_numeric_from, verify_laplace_pair, LaplacePair, LaplacePairId, LAPLACE_T_MAX,
};
pub use quad::{rl_integral_auto, rl_integral_quad, rl_integral_tanh_sinh, tanh_sinh, DEFAULT_PANELS};
pub use series::{rl_integral_series, rl_power_rule, GeneralizedPowerSeries};
