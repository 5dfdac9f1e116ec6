//! Fractional kinetic equations N(t) − S(t) = −c^ν (I^ν N)(t).
//!
//! Four source terms S are supported:
//!
//! | family | S(t) | N(t) |
//! |--------|------|------|
//! | `Standard` | N₀ | N₀ E_ν(−c^ν t^ν) |
//! | `Prabhakar` | N₀ t^{μ−1} E^γ_{ν,μ}(−c^ν t^ν) | N₀ t^{μ−1} E^{γ+1}_{ν,μ}(−c^ν t^ν) |
//! | `RDriven` | N₀ R_{ν,μ}(−c^ν, b, t) | (N₀/ν)(t−b)^{ν−μ−1} [E_{ν,ν−μ−1} + (μ+1) E_{ν,ν−μ}](−c^ν (t−b)^ν) |
//! | `FDriven` | N₀ F_ν[−c^ν, t] | (N₀/ν) t^{ν−1} [E_{ν,ν−1} + E_{ν,ν}](−c^ν t^ν) |
//!
//! The Prabhakar source takes its argument as −c^ν t^ν. Only that reading
//! makes the Laplace image of the source N₀ p^{−μ}(1 + (c/p)^ν)^{−γ}, which
//! is what the closed-form solution is built from.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracalc::{rl_integral_quad, rl_integral_tanh_sinh, GeneralizedPowerSeries};
use crate::gammakit::reciprocal_gamma;
use crate::mlkit::{eval_f_function, eval_prabhakar, eval_r_function, EvalConfig, MLParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KineticFamily {
    Standard,
    Prabhakar,
    RDriven,
    FDriven,
}

impl KineticFamily {
    pub const ALL: [KineticFamily; 4] = [Self::Standard, Self::Prabhakar, Self::RDriven, Self::FDriven];

    /// Name used on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            Self::Standard => "standard",
            Self::Prabhakar => "theorem1",
            Self::RDriven => "theorem2",
            Self::FDriven => "ffun",
        }
    }
}

impl fmt::Display for KineticFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for KineticFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(Self::Standard),
            "theorem1" | "prabhakar" => Ok(Self::Prabhakar),
            "theorem2" | "r_driven" | "r-driven" => Ok(Self::RDriven),
            "ffun" | "f_driven" | "f-driven" => Ok(Self::FDriven),
            _ => Err(Error::Domain(format!("unknown kinetic family '{s}'"))),
        }
    }
}

/// One kinetic equation with its physical parameters.
///
/// `mu` is used by `Prabhakar` and `RDriven`, `gamma` by `Prabhakar` only
/// and the delay `b` by `RDriven` only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KineticProblem {
    pub family: KineticFamily,
    pub n0: f64,
    pub c: f64,
    pub nu: f64,
    pub mu: f64,
    pub gamma: f64,
    pub b: f64,
}

impl KineticProblem {
    pub fn standard(n0: f64, c: f64, nu: f64) -> Self {
        Self { family: KineticFamily::Standard, n0, c, nu, mu: 0.0, gamma: 0.0, b: 0.0 }
    }

    pub fn prabhakar(n0: f64, c: f64, nu: f64, mu: f64, gamma: f64) -> Self {
        Self { family: KineticFamily::Prabhakar, n0, c, nu, mu, gamma, b: 0.0 }
    }

    pub fn r_driven(n0: f64, c: f64, nu: f64, mu: f64, b: f64) -> Self {
        Self { family: KineticFamily::RDriven, n0, c, nu, mu, gamma: 0.0, b }
    }

    pub fn f_driven(n0: f64, c: f64, nu: f64) -> Self {
        Self { family: KineticFamily::FDriven, n0, c, nu, mu: 0.0, gamma: 0.0, b: 0.0 }
    }

    fn check_rate(&self) -> Result<()> {
        let fields = [self.n0, self.c, self.nu, self.mu, self.gamma, self.b];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invariant("all parameters must be finite".into()));
        }
        if !(self.c > 0.0) {
            return Err(Error::Invariant(format!("c > 0 (got c = {})", self.c)));
        }
        if !(self.nu > 0.0) {
            return Err(Error::Invariant(format!("nu > 0 (got nu = {})", self.nu)));
        }
        Ok(())
    }

    /// Checks the family's parameter conditions; the error names the
    /// violated condition.
    pub fn validate(&self) -> Result<()> {
        self.check_rate()?;
        if !(self.n0 > 0.0) {
            return Err(Error::Invariant(format!("n0 > 0 (got n0 = {})", self.n0)));
        }
        match self.family {
            KineticFamily::Standard => {}
            KineticFamily::Prabhakar => {
                if !(self.mu > 0.0) {
                    return Err(Error::Invariant(format!("mu > 0 (got mu = {})", self.mu)));
                }
                if !(self.gamma >= 0.0) {
                    return Err(Error::Invariant(format!("gamma >= 0 (got gamma = {})", self.gamma)));
                }
            }
            KineticFamily::RDriven => {
                if !(self.nu > self.mu + 1.0) {
                    return Err(Error::Invariant(format!("nu > mu + 1 (got nu = {}, mu = {})", self.nu, self.mu)));
                }
                if !(self.b >= 0.0) {
                    return Err(Error::Invariant(format!("b >= 0 (got b = {})", self.b)));
                }
            }
            KineticFamily::FDriven => {
                if !(self.nu > 1.0) {
                    return Err(Error::Invariant(format!("nu > 1 (got nu = {})", self.nu)));
                }
            }
        }
        Ok(())
    }

    /// c^ν, the coefficient in front of the RL integral.
    pub fn rate(&self) -> f64 {
        self.c.powf(self.nu)
    }

    /// Start of the support of the source and solution.
    pub fn support_start(&self) -> f64 {
        match self.family {
            KineticFamily::RDriven => self.b,
            _ => 0.0,
        }
    }

    /// Source term S(t), for t > 0.
    pub fn source(&self, t: f64, cfg: &EvalConfig) -> Result<f64> {
        let lam = -self.rate();
        Ok(match self.family {
            KineticFamily::Standard => self.n0,
            KineticFamily::Prabhakar => {
                let p = MLParams::new(self.nu, self.mu, self.gamma)?;
                self.n0 * t.powf(self.mu - 1.0) * eval_prabhakar(p, lam * t.powf(self.nu), cfg)?.value
            }
            KineticFamily::RDriven => self.n0 * eval_r_function(self.nu, self.mu, lam, self.b, t, cfg)?.value,
            KineticFamily::FDriven => self.n0 * eval_f_function(self.nu, -lam, t, cfg)?.value,
        })
    }
}

/// weight · (t−shift)^power · E^γ_{α,β}(scale · (t−shift)^α), zero for
/// t ≤ shift when shift > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MLTerm {
    pub weight: f64,
    pub shift: f64,
    pub power: f64,
    pub params: MLParams,
    pub scale: f64,
}

impl MLTerm {
    pub fn eval(&self, t: f64, cfg: &EvalConfig) -> Result<f64> {
        if self.shift > 0.0 && t <= self.shift {
            return Ok(0.0);
        }
        let s = t - self.shift;
        if !(s >= 0.0) {
            return Err(Error::Domain(format!("term evaluated at t = {t} before its origin")));
        }
        if self.weight == 0.0 {
            return Ok(0.0);
        }
        if s == 0.0 {
            return if self.power > 0.0 {
                Ok(0.0)
            } else if self.power == 0.0 {
                Ok(self.weight * eval_prabhakar(self.params, 0.0, cfg)?.value)
            } else {
                Err(Error::Domain(format!("term with power {} is singular at its origin", self.power)))
            };
        }
        let e = eval_prabhakar(self.params, self.scale * s.powf(self.params.alpha), cfg)?;
        Ok(self.weight * s.powf(self.power) * e.value)
    }

    /// The first `n_terms` coefficients as a [`GeneralizedPowerSeries`] in
    /// (t − shift): ρ = power + 1, step α.
    pub fn power_series(&self, n_terms: usize) -> Result<GeneralizedPowerSeries> {
        let MLParams { alpha, beta, gamma } = self.params;
        let mut coeffs = Vec::with_capacity(n_terms);
        let mut c = self.weight;
        for n in 0..n_terms {
            let nf = n as f64;
            coeffs.push(c * reciprocal_gamma(alpha * nf + beta));
            c *= (gamma + nf) * self.scale / (nf + 1.0);
        }
        GeneralizedPowerSeries::new(self.shift, self.power + 1.0, alpha, coeffs)
    }
}

/// A sum of [`MLTerm`]s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSolution {
    pub terms: Vec<MLTerm>,
}

impl ClosedFormSolution {
    pub fn new(terms: Vec<MLTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain("a solution needs at least one term".into()));
        }
        Ok(Self { terms })
    }

    pub fn eval(&self, t: f64, cfg: &EvalConfig) -> Result<f64> {
        let mut acc = crate::dd::CompensatedSum::new();
        for term in &self.terms {
            acc.add(term.eval(t, cfg)?);
        }
        Ok(acc.value())
    }

    /// The solution vanishes on [0, support_start()].
    pub fn support_start(&self) -> f64 {
        self.terms.iter().map(|t| t.shift).fold(f64::INFINITY, f64::min)
    }
}

/// Closed-form solution of a kinetic problem.
pub fn solve(prob: &KineticProblem) -> Result<ClosedFormSolution> {
    prob.validate()?;
    let KineticProblem { n0, nu, mu, gamma, b, .. } = *prob;
    let scale = -prob.rate();
    let term = |weight: f64, shift: f64, power: f64, beta: f64, g: f64| -> Result<MLTerm> {
        Ok(MLTerm { weight, shift, power, params: MLParams::new(nu, beta, g)?, scale })
    };
    let terms = match prob.family {
        KineticFamily::Standard => vec![term(n0, 0.0, 0.0, 1.0, 1.0)?],
        KineticFamily::Prabhakar => vec![term(n0, 0.0, mu - 1.0, mu, gamma + 1.0)?],
        KineticFamily::RDriven => {
            let power = nu - mu - 1.0;
            vec![term(n0 / nu, b, power, nu - mu - 1.0, 1.0)?, term(n0 * (mu + 1.0) / nu, b, power, nu - mu, 1.0)?]
        }
        KineticFamily::FDriven => {
            vec![term(n0 / nu, 0.0, nu - 1.0, nu - 1.0, 1.0)?, term(n0 / nu, 0.0, nu - 1.0, nu, 1.0)?]
        }
    };
    ClosedFormSolution::new(terms)
}

/// Coefficients (k₀, k₁) with β E²_{β,γ} = … , i.e.
/// E²_{β,γ}(z) = k₀ E_{β,γ−1}(z) + k₁ E_{β,γ}(z).
pub fn e2_reduction_coefficients(beta: f64, gamma: f64) -> [f64; 2] {
    [1.0 / beta, (1.0 - gamma + beta) / beta]
}

/// Coefficients (k₀, k₁, k₂) with
/// E³_{β,γ}(z) = k₀ E_{β,γ−2}(z) + k₁ E_{β,γ−1}(z) + k₂ E_{β,γ}(z).
pub fn e3_reduction_coefficients(beta: f64, gamma: f64) -> [f64; 3] {
    let d = 2.0 * beta * beta;
    [
        1.0 / d,
        (3.0 * beta + 3.0 - 2.0 * gamma) / d,
        (2.0 * beta * beta + gamma * gamma + 3.0 * beta - 2.0 * gamma - 3.0 * beta * gamma + 1.0) / d,
    ]
}

// Coefficient of zⁿ in E^m_{β,γ}, multiplied by Γ(βn+γ): (m)_n / n!.
fn normalized_lhs(m: u32, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (f64::from(m) + k as f64) / (k as f64 + 1.0))
}

// Same normalization of Σ_j k_j E_{β,γ−2+j}: 1/Γ(x−2) = (x−1)(x−2)/Γ(x).
fn normalized_rhs(beta: f64, gamma: f64, k: &[f64; 3], n: usize) -> f64 {
    let x = beta * n as f64 + gamma;
    k[0] * (x - 1.0) * (x - 2.0) + k[1] * (x - 1.0) + k[2]
}

/// Derives the E³ reduction coefficients by matching the first three series
/// coefficients of E³_{β,γ} against k₀ E_{β,γ−2} + k₁ E_{β,γ−1} + k₂ E_{β,γ}.
///
/// Both sides are compared after multiplying the zⁿ coefficient by
/// Γ(βn+γ), which turns the system into a 3×3 polynomial fit with no gamma
/// evaluations.
pub fn match_e3_coefficients(beta: f64, gamma: f64) -> Result<[f64; 3]> {
    if !(beta > 0.0 && beta.is_finite() && gamma.is_finite()) {
        return Err(Error::Domain(format!("need beta > 0 and finite gamma, got ({beta}, {gamma})")));
    }
    let row = |n: usize| {
        let x = beta * n as f64 + gamma;
        [(x - 1.0) * (x - 2.0), x - 1.0, 1.0]
    };
    let (r0, r1, r2) = (row(0), row(1), row(2));
    let m = Matrix3::new(r0[0], r0[1], r0[2], r1[0], r1[1], r1[2], r2[0], r2[1], r2[2]);
    let rhs = Vector3::new(normalized_lhs(3, 0), normalized_lhs(3, 1), normalized_lhs(3, 2));
    let k = m.lu().solve(&rhs).ok_or_else(|| Error::Domain("singular coefficient-matching system".into()))?;
    Ok([k[0], k[1], k[2]])
}

/// Largest relative mismatch between the zⁿ coefficients of E³_{β,γ} and
/// of the three-term combination `k`, over n in `range`.
pub fn e3_series_mismatch(beta: f64, gamma: f64, k: &[f64; 3], range: std::ops::Range<usize>) -> f64 {
    range
        .map(|n| {
            let lhs = normalized_lhs(3, n);
            (lhs - normalized_rhs(beta, gamma, k, n)).abs() / lhs.abs()
        })
        .fold(0.0, f64::max)
}

fn reduce_term(term: &MLTerm) -> Result<Vec<MLTerm>> {
    let MLParams { alpha, beta, gamma } = term.params;
    let with = |k: f64, beta_shift: f64| -> Result<MLTerm> {
        let b = beta - beta_shift;
        let w = term.weight * k;
        if !(b.is_finite() && w.is_finite()) {
            return Err(Error::Pole(b));
        }
        Ok(MLTerm { weight: w, params: MLParams::new(alpha, b, 1.0)?, ..*term })
    };
    if gamma == 1.0 {
        Ok(vec![*term])
    } else if gamma == 2.0 {
        let [k0, k1] = e2_reduction_coefficients(alpha, beta);
        Ok(vec![with(k0, 1.0)?, with(k1, 0.0)?])
    } else if gamma == 3.0 {
        let [k0, k1, k2] = e3_reduction_coefficients(alpha, beta);
        Ok(vec![with(k0, 2.0)?, with(k1, 1.0)?, with(k2, 0.0)?])
    } else {
        Err(Error::UnsupportedReduction(gamma))
    }
}

/// Rewrites every E² and E³ term as a combination of two-parameter
/// Mittag-Leffler terms (γ = 1). γ = 1 terms pass through unchanged.
pub fn reduce(sol: &ClosedFormSolution) -> Result<ClosedFormSolution> {
    let mut terms = Vec::new();
    for term in &sol.terms {
        terms.extend(reduce_term(term)?);
    }
    ClosedFormSolution::new(terms)
}

// Relative tolerance of the tanh-sinh RL integral used for solutions that
// are singular at their origin; far below any residual threshold in use.
const SINGULAR_RL_TOL: f64 = 1e-8;

/// max over the grid of |N − S + c^ν I^ν N| / max(1, |N|).
///
/// The RL integral is computed by product integration with `quad_n`
/// panels. N vanishes below its support start b, so I^ν N at t is taken as
/// the RL integral of s ↦ N(s + b) at t − b, which puts the mesh origin on
/// the point where N stops being smooth. When N itself is infinite there
/// (a term with negative power), the product rule cannot sample it and a
/// tanh-sinh RL integral is used instead.
pub fn residual(
    prob: &KineticProblem,
    sol: &ClosedFormSolution,
    grid: &[f64],
    quad_n: usize,
    cfg: &EvalConfig,
) -> Result<f64> {
    prob.check_rate()?;
    let start = sol.support_start().min(prob.support_start()).max(0.0);
    let rate = prob.rate();
    let singular = sol.terms.iter().any(|term| term.weight != 0.0 && term.power < 0.0 && term.shift <= start);
    let mut worst: f64 = 0.0;
    for &t in grid {
        if !(t > prob.support_start() && t > 0.0) {
            return Err(Error::Domain(format!("grid point {t} must lie beyond {}", prob.support_start())));
        }
        let n = sol.eval(t, cfg)?;
        let s = prob.source(t, cfg)?;
        let f = |u: f64| sol.eval(u + start, cfg);
        let rl = if singular {
            rl_integral_tanh_sinh(f, prob.nu, t - start, SINGULAR_RL_TOL)?.0
        } else {
            rl_integral_quad(f, prob.nu, t - start, quad_n)?
        };
        let r = (n - s + rate * rl).abs() / n.abs().max(1.0);
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Tsallis q-exponential shape [1 − (1−q) x²/kT]^{1/(1−q)}.
///
/// q = 1 gives exp(−x²/kT). For q < 1 the shape has compact support and is
/// 0 where the bracket is non-positive.
pub fn q_exponential(x: f64, q: f64, kt: f64) -> Result<f64> {
    if !(x.is_finite() && q.is_finite() && kt.is_finite()) {
        return Err(Error::Domain("q-exponential arguments must be finite".into()));
    }
    if !(kt > 0.0) {
        return Err(Error::Domain(format!("kT must be positive, got {kt}")));
    }
    let u = x * x / kt;
    if q == 1.0 {
        return Ok((-u).exp());
    }
    let d = 1.0 - q;
    let bracket = 1.0 - d * u;
    if bracket <= 0.0 {
        return if q < 1.0 {
            Ok(0.0)
        } else {
            Err(Error::Divergence(format!("bracket {bracket} <= 0 with q = {q} > 1")))
        };
    }
    if d.abs() < 1e-4 {
        Ok(((-d * u).ln_1p() / d).exp())
    } else {
        Ok(bracket.powf(1.0 / d))
    }
}
