use serde::{Deserialize, Serialize};

use crate::dd::CompensatedSum;
use crate::error::{Error, Result};
use crate::gammakit::{gamma_fn, ln_gamma};

/// A series Σ c_n (t−b)^{ρ−1+n·σ}, supported on t > b.
///
/// `shift` is b, `rho` is ρ and `step` is σ. Every retained power must be
/// integrable at the origin, i.e. ρ > 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedPowerSeries {
    pub shift: f64,
    pub rho: f64,
    pub step: f64,
    pub coeffs: Vec<f64>,
}

impl GeneralizedPowerSeries {
    pub fn new(shift: f64, rho: f64, step: f64, coeffs: Vec<f64>) -> Result<Self> {
        let s = Self { shift, rho, step, coeffs };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.shift.is_finite() && self.shift >= 0.0) {
            return Err(Error::Domain(format!("series shift must be >= 0, got {}", self.shift)));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::Domain(format!("series step must be > 0, got {}", self.step)));
        }
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return Err(Error::Domain(format!("leading power {} is not integrable at the origin", self.rho - 1.0)));
        }
        if self.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("non-finite series coefficient".into()));
        }
        Ok(())
    }

    /// Exponent of (t−b) in term n.
    pub fn exponent(&self, n: usize) -> f64 {
        self.rho - 1.0 + n as f64 * self.step
    }

    /// Value at t; zero for t ≤ b.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.shift {
            return 0.0;
        }
        let s = t - self.shift;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(n, c)| c * s.powf(self.exponent(n)))
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| k * c).collect(), ..self.clone() }
    }

    /// Coefficient-wise sum of two series with the same shift, ρ and step.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.shift != other.shift || self.rho != other.rho || self.step != other.step {
            return Err(Error::Domain("series shapes differ".into()));
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        let coeffs = (0..len).map(|i| get(&self.coeffs, i) + get(&other.coeffs, i)).collect();
        Ok(Self { coeffs, ..self.clone() })
    }
}

// Γ(x)/Γ(x+ν) for x > 0, ν > 0.
fn gamma_ratio(x: f64, nu: f64) -> Result<f64> {
    if x + nu < 150.0 {
        Ok(gamma_fn(x)? / gamma_fn(x + nu)?)
    } else {
        Ok((ln_gamma(x)?.0 - ln_gamma(x + nu)?.0).exp())
    }
}

fn check_order(nu: f64) -> Result<()> {
    if nu.is_finite() && nu > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("integration order must be positive, got {nu}")))
    }
}

/// RL integral of u^{ρ−1}: Γ(ρ)/Γ(ρ+ν) · t^{ρ+ν−1}.
pub fn rl_power_rule(rho: f64, nu: f64, t: f64) -> Result<f64> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::Domain(format!("power rule needs rho > 0, got {rho}")));
    }
    check_order(nu)?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("power rule needs t > 0, got {t}")));
    }
    Ok(gamma_ratio(rho, nu)? * t.powf(rho + nu - 1.0))
}

/// Term-by-term RL integral of order ν.
///
/// Each power (t−b)^{ρ−1+nσ} maps to Γ(ρ+nσ)/Γ(ρ+nσ+ν) (t−b)^{ρ−1+nσ+ν}; the
/// shift is kept because the integrand vanishes on [0, b].
pub fn rl_integral_series(s: &GeneralizedPowerSeries, nu: f64) -> Result<GeneralizedPowerSeries> {
    s.validate()?;
    check_order(nu)?;
    let coeffs = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, &c)| if c == 0.0 { Ok(0.0) } else { Ok(c * gamma_ratio(s.exponent(n) + 1.0, nu)?) })
        .collect::<Result<Vec<_>>>()?;
    GeneralizedPowerSeries::new(s.shift, s.rho + nu, s.step, coeffs)
}
