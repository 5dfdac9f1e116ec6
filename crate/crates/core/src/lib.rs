//! # frackin
//!
//! Special functions and fractional calculus for generalized fractional
//! kinetic equations.
//!
//! - [`gammakit`]: real gamma, reciprocal gamma and Pochhammer kernels.
//! - [`mlkit`]: series evaluation of the Mittag-Leffler family
//!   E_α, E_{α,β}, the Prabhakar function E^γ_{α,β}, the generalized Wright
//!   function pΨq and the Hartley-Lorenzo F- and R-functions.
//! - [`fracalc`]: Riemann-Liouville fractional integrals (term-by-term on
//!   power series and by product integration) and numerical Laplace
//!   transforms used to verify closed-form transform pairs.
//! - [`kinetics`]: the four kinetic-equation families, their closed-form
//!   solutions, reduction identities and residual checks.
//! - [`cli`]: the `frackin` command-line surface and its table formats.
//!
//! All routines work on real `f64` arguments and are pure.

// Guards like `!(x > 0.0)` are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dd;
pub mod error;
pub mod fracalc;
pub mod gammakit;
pub mod kinetics;
pub mod mlkit;

pub use error::{Error, Result};
pub use fracalc::{
    laplace_numeric, rl_integral_quad, rl_integral_series, rl_power_rule, verify_laplace_pair, GeneralizedPowerSeries,
    LaplacePair, LaplacePairId,
};
pub use gammakit::{gamma_fn, ln_gamma, pochhammer, reciprocal_gamma};
pub use kinetics::{q_exponential, reduce, residual, solve, ClosedFormSolution, KineticFamily, KineticProblem, MLTerm};

pub use mlkit::{
    eval_f_function, eval_ml, eval_ml2, eval_prabhakar, eval_r_function, eval_wright, EvalConfig, EvalResult, MLParams,
    WrightParams,
};
