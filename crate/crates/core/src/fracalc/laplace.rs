//! Numerical Laplace transforms on the real axis and verification of the
//! closed-form transform pairs of the Mittag-Leffler family.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::quad::tanh_sinh;
use crate::error::{Error, Result};
use crate::mlkit::{eval_f_function, eval_ml2, eval_prabhakar, eval_r_function, EvalConfig, MLParams};

/// Largest truncation point tried for ∫₀^∞.
pub const LAPLACE_T_MAX: f64 = 1e4;

// Share of the requested tolerance granted to each panel and to the tail.
const PANEL_TOL_SHARE: f64 = 1e-2;
const TAIL_TOL_SHARE: f64 = 1e-2;

/// ∫₀^∞ e^{−pt} f(t) dt for real p > 0.
pub fn laplace_numeric<F>(f: F, p: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    laplace_numeric_from(f, p, 0.0, tol)
}

/// ∫_s^∞ e^{−pt} f(t) dt, for f that vanishes on [0, s).
///
/// The half line is cut into panels [s, s+L], [s+L, s+2L], [s+2L, s+4L], …
/// with L = 1/p, each integrated by tanh-sinh so that integrable
/// singularities at t = s are resolved by the node clustering. Panels are
/// added until the last one and the integrand at its right end are both
/// negligible against the running total. Fails with [`Error::Tail`] if that
/// does not happen before [`LAPLACE_T_MAX`].
pub fn laplace_numeric_from<F>(mut f: F, p: f64, start: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::Domain(format!("Laplace variable must be positive, got {p}")));
    }
    if !(start.is_finite() && start >= 0.0) {
        return Err(Error::Domain(format!("lower limit must be >= 0, got {start}")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    let mut integrand = |t: f64| -> Result<f64> { Ok((-p * t).exp() * f(t)?) };
    let width = 1.0 / p;
    let mut total: f64 = 0.0;
    let mut left = start;
    let mut right = start + width;
    loop {
        let floor = tol * PANEL_TOL_SHARE * total.abs();
        let (panel, _) = tanh_sinh(&mut integrand, left, right, tol * PANEL_TOL_SHARE, floor)?;
        total += panel;
        let edge = integrand(right)?.abs() * (right - start).max(width);
        let small = tol * TAIL_TOL_SHARE * total.abs();
        if panel.abs() <= small && edge <= small {
            return Ok(total);
        }
        if right >= LAPLACE_T_MAX {
            return Err(Error::Tail { t_max: LAPLACE_T_MAX });
        }
        left = right;
        right = (start + 2.0 * (right - start)).min(LAPLACE_T_MAX);
    }
}

/// The transform pairs that can be verified numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LaplacePairId {
    Eq16,
    Eq18,
    Eq21,
    Eq24,
    Eq25,
}

impl LaplacePairId {
    pub const ALL: [LaplacePairId; 5] = [Self::Eq16, Self::Eq18, Self::Eq21, Self::Eq24, Self::Eq25];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Eq16 => "eq16",
            Self::Eq18 => "eq18",
            Self::Eq21 => "eq21",
            Self::Eq24 => "eq24",
            Self::Eq25 => "eq25",
        }
    }
}

impl fmt::Display for LaplacePairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LaplacePairId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown Laplace pair '{s}'")))
    }
}

/// A transform pair with its parameters.
///
/// | pair | time side | image |
/// |------|-----------|-------|
/// | `Eq16` | t^{β−1} E^γ_{α,β}(a t^α) | p^{−β} (1 − a p^{−α})^{−γ} |
/// | `Eq18` | t^{β−1} E_{α,β}(a t^α) | p^{−β} (1 − a p^{−α})^{−1} |
/// | `Eq21` | t^{q−1} E_{q,q}(a t^q) | 1 / (p^q − a) |
/// | `Eq24` | R_{ν,μ}(a, c, t) | e^{−cp} p^μ / (p^ν − a) |
/// | `Eq25` | R_{ν,μ}(a, 0, t) | p^μ / (p^ν − a) |
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LaplacePair {
    Eq16 { alpha: f64, beta: f64, gamma: f64, a: f64 },
    Eq18 { alpha: f64, beta: f64, a: f64 },
    Eq21 { q: f64, a: f64 },
    Eq24 { nu: f64, mu: f64, a: f64, c: f64 },
    Eq25 { nu: f64, mu: f64, a: f64 },
}

impl LaplacePair {
    pub fn id(&self) -> LaplacePairId {
        match self {
            Self::Eq16 { .. } => LaplacePairId::Eq16,
            Self::Eq18 { .. } => LaplacePairId::Eq18,
            Self::Eq21 { .. } => LaplacePairId::Eq21,
            Self::Eq24 { .. } => LaplacePairId::Eq24,
            Self::Eq25 { .. } => LaplacePairId::Eq25,
        }
    }

    /// Checks parameter constraints and that p lies in the region where the
    /// image formula holds: p > 0 and p > |a|^{1/order}.
    pub fn check_validity(&self, p: f64) -> Result<()> {
        let invalid = |msg: String| Err(Error::Validity(msg));
        if !(p.is_finite() && p > 0.0) {
            return invalid(format!("p = {p} must be positive"));
        }
        let (order, a) = match *self {
            Self::Eq16 { alpha, beta, a, .. } | Self::Eq18 { alpha, beta, a } => {
                if !(alpha > 0.0) {
                    return invalid(format!("alpha = {alpha} must be positive"));
                }
                if !(beta > 0.0) {
                    return invalid(format!("beta = {beta} must be positive"));
                }
                (alpha, a)
            }
            Self::Eq21 { q, a } => {
                if !(q > 0.0) {
                    return invalid(format!("q = {q} must be positive"));
                }
                (q, a)
            }
            Self::Eq24 { nu, mu, a, c } => {
                if !(c >= 0.0) {
                    return invalid(format!("delay c = {c} must be non-negative"));
                }
                if !(nu > mu) {
                    return invalid(format!("need nu - mu > 0, got nu = {nu}, mu = {mu}"));
                }
                (nu, a)
            }
            Self::Eq25 { nu, mu, a } => {
                if !(nu > mu) {
                    return invalid(format!("need nu - mu > 0, got nu = {nu}, mu = {mu}"));
                }
                (nu, a)
            }
        };
        if !(order > 0.0) {
            return invalid(format!("order {order} must be positive"));
        }
        let bound = a.abs().powf(1.0 / order);
        if !(p > bound) {
            return invalid(format!("p = {p} must exceed |a|^(1/{order}) = {bound}"));
        }
        Ok(())
    }

    /// Image side of the pair in closed form.
    pub fn image(&self, p: f64) -> f64 {
        match *self {
            Self::Eq16 { alpha, beta, gamma, a } => p.powf(-beta) * (1.0 - a * p.powf(-alpha)).powf(-gamma),
            Self::Eq18 { alpha, beta, a } => p.powf(-beta) / (1.0 - a * p.powf(-alpha)),
            Self::Eq21 { q, a } => 1.0 / (p.powf(q) - a),
            Self::Eq24 { nu, mu, a, c } => (-c * p).exp() * p.powf(mu) / (p.powf(nu) - a),
            Self::Eq25 { nu, mu, a } => p.powf(mu) / (p.powf(nu) - a),
        }
    }

    /// Time side of the pair at t > 0, evaluated through the series
    /// routines.
    pub fn time_fn(&self, t: f64, cfg: &EvalConfig) -> Result<f64> {
        match *self {
            Self::Eq16 { alpha, beta, gamma, a } => {
                let e = eval_prabhakar(MLParams::new(alpha, beta, gamma)?, a * t.powf(alpha), cfg)?;
                Ok(t.powf(beta - 1.0) * e.value)
            }
            Self::Eq18 { alpha, beta, a } => {
                Ok(t.powf(beta - 1.0) * eval_ml2(alpha, beta, a * t.powf(alpha), cfg)?.value)
            }
            Self::Eq21 { q, a } => Ok(eval_f_function(q, -a, t, cfg)?.value),
            Self::Eq24 { nu, mu, a, c } => Ok(eval_r_function(nu, mu, a, c, t, cfg)?.value),
            Self::Eq25 { nu, mu, a } => Ok(eval_r_function(nu, mu, a, 0.0, t, cfg)?.value),
        }
    }

    fn support_start(&self) -> f64 {
        match *self {
            Self::Eq24 { c, .. } => c,
            _ => 0.0,
        }
    }
}

/// Series settings for the time side. The Laplace weight e^{−pt} suppresses
/// the region where the series argument is large, and p > |a|^{1/order}
/// keeps even the rounding noise there decaying, so the argument bound is
/// lifted.
fn time_side_config() -> EvalConfig {
    EvalConfig::new(1e-15).with_z_max(1e6)
}

/// Quadrature tolerance used by [`verify_laplace_pair`].
pub const VERIFY_QUAD_TOL: f64 = 1e-10;

/// Relative discrepancy |numeric − closed| / |closed| between the numerical
/// transform of the time side and the closed-form image at p.
pub fn verify_laplace_pair(pair: &LaplacePair, p: f64) -> Result<f64> {
    pair.check_validity(p)?;
    let cfg = time_side_config();
    let closed = pair.image(p);
    let numeric = laplace_numeric_from(|t| pair.time_fn(t, &cfg), p, pair.support_start(), VERIFY_QUAD_TOL)?;
    Ok((numeric - closed).abs() / closed.abs())
}
