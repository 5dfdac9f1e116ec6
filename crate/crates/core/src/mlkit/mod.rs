//! Series evaluation of the Mittag-Leffler family.
//!
//! Every function here is a power series in its argument whose coefficients
//! are gamma-function ratios. Summation stops once three consecutive terms
//! fall below `tol · |partial sum|` and a geometric bound on the remaining
//! tail does too. A plain f64 pass runs first; when its rounding bound is
//! not within `tol` the series is summed again in double-double arithmetic.
//!
//! Arguments are limited to |z| ≤ [`EvalConfig::z_max`] (50 by default). For
//! z < 0 and α < 1 the terms grow like exp(|z|^{1/α}) before they decay, so
//! there the Prabhakar function switches to a Hankel-contour integral once
//! the series is too ill-conditioned. For z > 0 the same growth means the
//! value itself leaves the f64 range quickly; that is reported as
//! [`Error::Overflow`].

use serde::{Deserialize, Serialize};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dd::{ldexp, CompensatedSum, DoubleDouble};
use crate::error::{Error, Result};
use crate::fracalc::tanh_sinh;
use crate::gammakit::{gamma_dd, gamma_fn, ln_gamma};

pub mod identities;

pub const DEFAULT_Z_MAX: f64 = 50.0;
pub const DEFAULT_TERM_CAP: usize = 10_000;
pub const DEFAULT_TOL: f64 = 1e-15;
/// Environment variable overriding [`DEFAULT_TERM_CAP`].
pub const TERM_CAP_ENV: &str = "FRACKIN_TERM_CAP";

const MAX_TOL: f64 = 1e-3;
// Consecutive small terms required before a series is declared converged.
const SMALL_RUN: usize = 3;

/// Truncation controls shared by all series evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub tol: f64,
    pub term_cap: usize,
    pub z_max: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, term_cap: DEFAULT_TERM_CAP, z_max: DEFAULT_Z_MAX }
    }
}

impl EvalConfig {
    pub fn new(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    /// Like [`EvalConfig::new`], with the term cap taken from
    /// `FRACKIN_TERM_CAP` when it is set to a positive integer.
    pub fn from_env(tol: f64) -> Self {
        let mut cfg = Self::new(tol);
        if let Some(cap) =
            std::env::var(TERM_CAP_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&c| c > 0)
        {
            cfg.term_cap = cap;
        }
        cfg
    }

    pub fn with_term_cap(mut self, cap: usize) -> Self {
        self.term_cap = cap;
        self
    }

    pub fn with_z_max(mut self, z_max: f64) -> Self {
        self.z_max = z_max;
        self
    }

    fn check(&self, z: f64) -> Result<()> {
        if !(self.tol > 0.0 && self.tol <= MAX_TOL) {
            return Err(Error::Domain(format!("tol must lie in (0, {MAX_TOL}], got {}", self.tol)));
        }
        if self.term_cap == 0 {
            return Err(Error::Domain("term cap must be positive".into()));
        }
        if !z.is_finite() {
            return Err(Error::Domain(format!("non-finite argument z = {z}")));
        }
        if z.abs() > self.z_max {
            return Err(Error::Domain(format!("|z| = {} exceeds the supported bound {}", z.abs(), self.z_max)));
        }
        Ok(())
    }
}

/// Value of a truncated series together with its truncation estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub error_estimate: f64,
    pub terms_used: usize,
}

impl EvalResult {
    fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            terms_used: self.terms_used,
        }
    }
}

/// Parameters (α, β, γ) of the Prabhakar function E^γ_{α,β}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MLParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let p = Self { alpha, beta, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.beta.is_finite() && self.gamma.is_finite()) {
            return Err(Error::Domain(format!("non-finite parameters {self:?}")));
        }
        if self.alpha <= 0.0 {
            return Err(Error::Domain(format!("alpha must be positive, got {}", self.alpha)));
        }
        Ok(())
    }
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && is_integer(x)
}

// Exponent step used to keep the running coefficient inside the f64 range.
const RESCALE_BITS: i32 = 600;
// Relative error of gamma_fn away from poles.
const GAMMA_F64_ERR: f64 = 4e-14;
// Relative error of the double-double gamma per unit of |ln Γ|.
const GAMMA_DD_ERR: f64 = 1e-31;
// Rounding of one double-double update of the running coefficient.
const DD_STEP_ERR: f64 = 1e-31;
// Above this ratio Σ|term| / |sum| even the double-double pass loses too
// many digits and the Hankel integral is preferred.
const HANKEL_CONDITION: f64 = 1e16;

// m·2^k with a relative error bound.
struct Split<T> {
    m: T,
    k: i32,
    err: f64,
}

fn is_integer(x: f64) -> bool {
    x.abs() >= 4.5e15 || (x as i64) as f64 == x
}

// Γ(x) in plain f64. The bound covers gamma_fn itself, the rounding of x
// and, past the f64 range, the logarithmic route.
fn gamma_split_f64(x: f64) -> Result<Split<f64>> {
    let ax = x.abs();
    if (1.0..=23.0).contains(&x) && is_integer(x) {
        return Ok(Split { m: gamma_fn(x)?, k: 0, err: 0.0 });
    }
    // |x ψ(x)| ≤ |x|(ln(1+|x|) + 1) + 1 away from poles; the log is taken
    // from the exponent bits
    let log_bound = f64::from(((ax + 1.0).to_bits() >> 52) as u32 - 1022) * std::f64::consts::LN_2;
    let err = GAMMA_F64_ERR + (ax * (log_bound + 1.0) + 1.0) * 1.2e-16;
    if ax < 170.0 {
        let g = gamma_fn(x)?;
        if g.abs() > 1e-290 {
            return Ok(Split { m: g, k: 0, err });
        }
    }
    let (lg, sign) = ln_gamma(x)?;
    let k = (lg / std::f64::consts::LN_2).floor();
    let m = sign * (lg - k * std::f64::consts::LN_2).exp();
    Ok(Split { m, k: k as i32, err: err + lg.abs() * 2.3e-16 })
}

fn renormalize(m: f64, k: i32) -> (f64, i32) {
    let a = m.abs();
    if a == 0.0 || (1e-150..1e150).contains(&a) {
        return (m, k);
    }
    let e = a.log2().floor() as i32;
    (ldexp(m, -e), k + e)
}

fn renormalize_dd(m: DoubleDouble, k: i32) -> (DoubleDouble, i32) {
    let (_, e) = renormalize(m.hi, 0);
    (m.ldexp(-e), k + e)
}

// Π Γ(a + A n) / Π Γ(b + B n) in f64, or None when a lower gamma sits on a
// pole.
fn gamma_ratio_f64(upper: &[(f64, f64)], lower: &[(f64, f64)], n: f64) -> Result<Option<Split<f64>>> {
    let mut m = 1.0;
    let mut k = 0;
    let mut err = 0.0;
    for &(c, s) in upper {
        let arg = c + s * n;
        if is_pole(arg) {
            return Err(Error::Pole(arg));
        }
        let g = gamma_split_f64(arg)?;
        (m, k) = renormalize(m * g.m, k + g.k);
        err += g.err;
    }
    for &(c, s) in lower {
        let arg = c + s * n;
        if is_pole(arg) {
            return Ok(None);
        }
        let g = gamma_split_f64(arg)?;
        (m, k) = renormalize(m / g.m, k - g.k);
        err += g.err;
    }
    Ok(Some(Split { m, k, err }))
}

// The same ratio in double-double, with exact gamma arguments.
fn gamma_ratio_dd(upper: &[(f64, f64)], lower: &[(f64, f64)], n: f64) -> Result<Option<Split<DoubleDouble>>> {
    let mut m = DoubleDouble::ONE;
    let mut k = 0;
    let mut err = 0.0;
    for (list, invert) in [(upper, false), (lower, true)] {
        for &(c, s) in list {
            let arg = DoubleDouble::from_prod(s, n) + DoubleDouble::new(c);
            let pole = arg.lo == 0.0 && is_pole(arg.hi);
            let Some((g, gk)) = gamma_dd(arg).filter(|_| !pole) else {
                if invert {
                    return Ok(None);
                }
                return Err(Error::Pole(arg.hi));
            };
            (m, k) = if invert { renormalize_dd(m / g, k - gk) } else { renormalize_dd(m * g, k + gk) };
            err += GAMMA_DD_ERR * (25.0 + (f64::from(gk) * std::f64::consts::LN_2).abs());
        }
    }
    Ok(Some(Split { m, k, err }))
}

// Σ c_n zⁿ/n! · Π Γ(a + A n) / Π Γ(b + B n) with c_n = (γ)_n when a
// Pochhammer index is given and 1 otherwise.
struct Series<'a> {
    upper: &'a [(f64, f64)],
    lower: &'a [(f64, f64)],
    poch: Option<f64>,
    z: f64,
    // every term is known to be non-negative
    positive: bool,
}

struct SeriesSum {
    value: f64,
    truncation: f64,
    rounding: f64,
    magnitude: f64,
    terms: usize,
}

impl SeriesSum {
    fn result(&self) -> EvalResult {
        EvalResult {
            value: self.value,
            error_estimate: self.truncation + self.rounding + 0.5 * f64::EPSILON * self.value.abs(),
            terms_used: self.terms,
        }
    }
}

// Running sum shared by both precisions.
struct Accumulator<'a> {
    series: &'a Series<'a>,
    sum: DoubleDouble,
    stop: Stopper,
    rounding: f64,
    magnitude: f64,
}

enum Step {
    Continue,
    Done(SeriesSum),
}

impl<'a> Accumulator<'a> {
    fn new(series: &'a Series<'a>, tol: f64) -> Self {
        Self { series, sum: DoubleDouble::ZERO, stop: Stopper::new(tol), rounding: 0.0, magnitude: 0.0 }
    }

    fn push(&mut self, n: usize, term: DoubleDouble, rel_err: f64) -> Result<Step> {
        self.sum += term;
        let t = term.to_f64();
        if !(self.sum.is_finite() && t.is_finite()) {
            if self.series.positive {
                return Err(Error::Overflow(format!("series value exceeds the f64 range after {} terms", n + 1)));
            }
            // terms overflowed before the series turned over
            return Err(Error::NoConvergence { terms: n + 1 });
        }
        self.magnitude += t.abs();
        self.rounding += t.abs() * rel_err;
        if self.stop.push(t, self.sum.to_f64()) {
            return Ok(Step::Done(self.finish(n, self.stop.estimate())));
        }
        Ok(Step::Continue)
    }

    fn finish(&self, n: usize, truncation: f64) -> SeriesSum {
        SeriesSum {
            value: self.sum.to_f64(),
            truncation,
            rounding: self.rounding,
            magnitude: self.magnitude,
            terms: n + 1,
        }
    }
}

fn sum_series_f64(s: &Series, cfg: &EvalConfig) -> Result<SeriesSum> {
    let mut acc = Accumulator::new(s, cfg.tol);
    let mut coef = 1.0;
    let mut scale = 0;
    // relative rounding of the running coefficient per step
    let step_err = if s.poch.is_some() { 3.5e-16 } else { 2.3e-16 };
    for n in 0..cfg.term_cap {
        let nf = n as f64;
        if let Some(r) = gamma_ratio_f64(s.upper, s.lower, nf)? {
            let mut t = coef * r.m;
            if scale + r.k != 0 {
                t = ldexp(t, scale + r.k);
            }
            if let Step::Done(out) = acc.push(n, DoubleDouble::new(t), r.err + nf * step_err)? {
                return Ok(out);
            }
        }
        if let Some(g) = s.poch {
            coef *= g + nf;
        }
        coef = coef * s.z / (nf + 1.0);
        if coef == 0.0 {
            // (γ)_n vanished or z = 0: the series terminates exactly.
            return Ok(acc.finish(n, 0.0));
        }
        if coef.abs() > 2f64.powi(RESCALE_BITS) {
            coef = ldexp(coef, -RESCALE_BITS);
            scale += RESCALE_BITS;
        }
    }
    Err(Error::NoConvergence { terms: cfg.term_cap })
}

fn sum_series_dd(s: &Series, cfg: &EvalConfig) -> Result<SeriesSum> {
    let mut acc = Accumulator::new(s, cfg.tol);
    let mut coef = DoubleDouble::ONE;
    let mut scale = 0;
    for n in 0..cfg.term_cap {
        let nf = n as f64;
        if let Some(r) = gamma_ratio_dd(s.upper, s.lower, nf)? {
            let mut term = coef * r.m;
            if scale + r.k != 0 {
                term = term.ldexp(scale + r.k);
            }
            if let Step::Done(out) = acc.push(n, term, r.err + (nf + 1.0) * DD_STEP_ERR)? {
                return Ok(out);
            }
        }
        if let Some(g) = s.poch {
            coef = coef * (DoubleDouble::new(g) + DoubleDouble::new(nf));
        }
        coef = coef.mul_f64(s.z).div_f64(nf + 1.0);
        if coef.hi == 0.0 {
            return Ok(acc.finish(n, 0.0));
        }
        if coef.hi.abs() > 2f64.powi(RESCALE_BITS) {
            coef = coef.ldexp(-RESCALE_BITS);
            scale += RESCALE_BITS;
        }
    }
    Err(Error::NoConvergence { terms: cfg.term_cap })
}

// Plain f64 pass first; the double-double pass or the Hankel integral only
// when its rounding bound misses the tolerance.
fn evaluate(s: &Series, cfg: &EvalConfig, hankel: Option<&MLParams>) -> Result<EvalResult> {
    let fast = sum_series_f64(s, cfg);
    let ill_conditioned = match &fast {
        Ok(f) => {
            if f.rounding <= cfg.tol * f.value.abs() {
                return Ok(f.result());
            }
            f.magnitude > HANKEL_CONDITION * f.value.abs()
        }
        Err(Error::NoConvergence { terms }) if *terms < cfg.term_cap => true,
        Err(e) => return Err(e.clone()),
    };
    let hankel = hankel.filter(|p| hankel_applies(p, s.z));
    if let Some(p) = hankel {
        if ill_conditioned {
            return hankel_prabhakar(p, -s.z, cfg);
        }
    }
    let fast = fast?;
    let best = match sum_series_dd(s, cfg) {
        Ok(accurate) if accurate.rounding < fast.rounding => accurate.result(),
        Ok(_) => fast.result(),
        Err(e) if hankel.is_none() => return Err(e),
        Err(_) => fast.result(),
    };
    // A noisy f64 sum can understate the cancellation; the contour integral
    // then decides, keeping whichever result has the tighter estimate.
    if let Some(p) = hankel {
        if best.error_estimate > cfg.tol * best.value.abs() {
            if let Ok(h) = hankel_prabhakar(p, -s.z, cfg) {
                if h.error_estimate < best.error_estimate {
                    return Ok(h);
                }
            }
        }
    }
    Ok(best)
}

fn hankel_applies(p: &MLParams, z: f64) -> bool {
    z < 0.0 && p.alpha < 1.0 && p.beta > 0.0 && p.gamma > 0.0
}

// For 0 < α < 1 and x > 0, E^γ_{α,β}(−x) is the inverse Laplace transform
// of F(s) = s^{αγ−β} (s^α + x)^{−γ} at t = 1. F has only the branch cut
// on the negative axis, so the Bromwich line folds onto a Hankel contour:
// a circle of radius ρ plus both banks of the cut beyond ρ,
//
//   E = (1/π) ∫₀^π Re[s e^s F(s)]_{s=ρe^{iθ}} dθ − (1/π) ∫_ρ^∞ e^{−r} Im F(r e^{iπ}) dr.
//
// ρ sits at the saddle point of e^s s^{αγ−β} when that is beyond 1.
fn hankel_prabhakar(p: &MLParams, x: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    let MLParams { alpha, beta, gamma } = *p;
    let expo = alpha * gamma - beta;
    let rho = (-expo).max(1.0);
    let log_w = |r: f64, theta: f64| {
        let w = Complex64::from_polar(r.powf(alpha), alpha * theta) + x;
        w.ln()
    };
    let tol = cfg.tol.max(1e-15);
    let circle = |theta: f64| -> Result<f64> {
        let s = Complex64::from_polar(rho, theta);
        let log_s = Complex64::new(rho.ln(), theta);
        let v = ((1.0 + expo) * log_s + s - gamma * log_w(rho, theta)).exp();
        Ok(v.re)
    };
    let bank = |r: f64| -> Result<f64> {
        let log_s = Complex64::new(r.ln(), PI);
        let v = (expo * log_s - r - gamma * log_w(r, PI)).exp();
        Ok(v.im)
    };
    // The arc integral can cancel far below its integrand, so its stopping
    // test also accepts an absolute floor at the rounding level of the sum.
    let mut peak = 0.0f64;
    for k in 0..=16 {
        peak = peak.max(circle(PI * k as f64 / 16.0)?.abs());
    }
    let arc_mag = PI * peak;
    let (c, c_err) = tanh_sinh(circle, 0.0, PI, tol, 16.0 * f64::EPSILON * arc_mag)?;
    let scale = c.abs().max(f64::MIN_POSITIVE);
    let mut ray = CompensatedSum::new();
    let mut ray_abs = 0.0;
    let mut ray_err = 0.0;
    let (mut lo, mut width) = (rho, 1.0);
    let reach = 2.0 * expo.max(0.0) + 50.0;
    loop {
        let (v, e) = tanh_sinh(bank, lo, lo + width, tol, 1e-3 * tol * scale)?;
        ray.add(v);
        ray_abs += v.abs();
        ray_err += e;
        lo += width;
        width *= 2.0;
        if lo >= reach && v.abs() <= 1e-3 * tol * (scale + ray_abs) {
            break;
        }
        if lo > 1e4 {
            return Err(Error::Quadrature("Hankel ray integral did not decay".into()));
        }
    }
    let value = (c - ray.value()) / PI;
    let rounding = 4.0 * f64::EPSILON * (arc_mag + ray_abs) / PI;
    Ok(EvalResult { value, error_estimate: (c_err + ray_err) / PI + rounding, terms_used: 0 })
}

/// Tracks the stopping rule: `SMALL_RUN` consecutive terms with
/// |term| ≤ tol·|sum|. Terms zeroed by a gamma pole do not count.
///
/// Slowly decaying positive series can satisfy that rule while the tail
/// is still many times the last term, so a geometric bound on the tail
/// from the last term ratio must also fall below tol·|sum|.
struct Stopper {
    tol: f64,
    run: usize,
    window: [f64; SMALL_RUN],
    prev: f64,
    tail: f64,
}

impl Stopper {
    fn new(tol: f64) -> Self {
        Self { tol, run: 0, window: [0.0; SMALL_RUN], prev: f64::NAN, tail: f64::INFINITY }
    }

    fn push(&mut self, term: f64, sum: f64) -> bool {
        let t = term.abs();
        let ratio = t / self.prev;
        self.tail = if ratio < 1.0 { t * ratio / (1.0 - ratio) } else { f64::INFINITY };
        if t > 0.0 {
            self.prev = t;
        }
        if t <= self.tol * sum.abs() {
            self.window[self.run % SMALL_RUN] = t;
            self.run += 1;
        } else {
            self.run = 0;
        }
        self.run >= SMALL_RUN && self.tail <= self.tol * sum.abs()
    }

    fn estimate(&self) -> f64 {
        self.window.iter().fold(self.tail, |a: f64, &b| a.max(b))
    }
}

/// Prabhakar function E^γ_{α,β}(z) = Σ (γ)_n zⁿ / (Γ(αn+β) n!).
///
/// β ≤ 0 is allowed; terms whose gamma argument is a pole contribute zero.
/// The error estimate covers truncation and the rounding of the terms.
///
/// For z < 0 with α < 1 the series cancels catastrophically once
/// |z|^{1/α} is large; there the value comes from a Hankel-contour integral
/// of its Laplace transform instead, and `terms_used` is 0.
pub fn eval_prabhakar(p: MLParams, z: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    p.validate()?;
    cfg.check(z)?;
    let lower = [(p.beta, p.alpha)];
    let series = Series {
        upper: &[],
        lower: &lower,
        poch: Some(p.gamma),
        z,
        positive: z >= 0.0 && p.gamma >= 0.0 && p.beta > 0.0,
    };
    evaluate(&series, cfg, Some(&p))
}

/// One-parameter Mittag-Leffler function E_α(z) = E^1_{α,1}(z).
pub fn eval_ml(alpha: f64, z: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    eval_prabhakar(MLParams { alpha, beta: 1.0, gamma: 1.0 }, z, cfg)
}

/// Two-parameter Mittag-Leffler function E_{α,β}(z) = E^1_{α,β}(z).
pub fn eval_ml2(alpha: f64, beta: f64, z: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    eval_prabhakar(MLParams { alpha, beta, gamma: 1.0 }, z, cfg)
}

/// Parameter lists of the generalized Wright function pΨq.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WrightParams {
    /// Pairs (a_j, A_j) in the numerator gammas Γ(a_j + A_j n).
    pub upper: Vec<(f64, f64)>,
    /// Pairs (b_j, B_j) in the denominator gammas Γ(b_j + B_j n).
    pub lower: Vec<(f64, f64)>,
}

impl WrightParams {
    pub fn new(upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Self {
        Self { upper, lower }
    }

    /// 1 + ΣB_j − ΣA_j; the series is entire when this is positive.
    pub fn margin(&self) -> f64 {
        1.0 + self.lower.iter().map(|&(_, b)| b).sum::<f64>() - self.upper.iter().map(|&(_, a)| a).sum::<f64>()
    }

    fn validate(&self) -> Result<()> {
        for &(a, s) in self.upper.iter().chain(&self.lower) {
            if !(a.is_finite() && s.is_finite()) || s <= 0.0 {
                return Err(Error::Domain(format!("invalid Wright pair ({a}, {s})")));
            }
        }
        Ok(())
    }
}

/// Generalized Wright function
/// pΨq(z) = Σ Π Γ(a_j + A_j n) / Π Γ(b_j + B_j n) · zⁿ/n!.
///
/// Requires a non-negative convergence margin, and |z| < 1 when the margin
/// is exactly zero.
pub fn eval_wright(w: &WrightParams, z: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    w.validate()?;
    let margin = w.margin();
    if margin < 0.0 {
        return Err(Error::ConvergenceDomain(format!("1 + ΣB − ΣA = {margin} < 0")));
    }
    if margin == 0.0 && z.abs() >= 1.0 {
        return Err(Error::ConvergenceDomain(format!("margin is 0 and |z| = {} >= 1", z.abs())));
    }
    cfg.check(z)?;
    let positive = z >= 0.0 && w.upper.iter().chain(&w.lower).all(|&(c, _)| c > 0.0);
    let series = Series { upper: &w.upper, lower: &w.lower, poch: None, z, positive };
    evaluate(&series, cfg, None)
}

/// Hartley-Lorenzo F-function F_q[−a, t] = t^{q−1} E_{q,q}(−a t^q).
pub fn eval_f_function(q: f64, a: f64, t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("F-function order q must be positive, got {q}")));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("F-function needs t > 0, got {t}")));
    }
    let inner = eval_ml2(q, q, -a * t.powf(q), cfg)?;
    Ok(inner.scaled(t.powf(q - 1.0)))
}

/// Lorenzo-Hartley R-function
/// R_{ν,μ}[a, c, t] = (t−c)^{ν−μ−1} E_{ν,ν−μ}(a (t−c)^ν) for t > c, and 0
/// for t ≤ c.
pub fn eval_r_function(nu: f64, mu: f64, a: f64, c: f64, t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    if !(nu.is_finite() && mu.is_finite() && a.is_finite() && c.is_finite() && t.is_finite()) {
        return Err(Error::Domain("R-function arguments must be finite".into()));
    }
    if nu <= mu {
        return Err(Error::Domain(format!("R-function needs nu > mu, got nu = {nu}, mu = {mu}")));
    }
    if nu <= 0.0 {
        return Err(Error::Domain(format!("R-function needs nu > 0, got {nu}")));
    }
    if c < 0.0 {
        return Err(Error::Domain(format!("R-function delay must be non-negative, got {c}")));
    }
    if t <= c {
        return Ok(EvalResult { value: 0.0, error_estimate: 0.0, terms_used: 1 });
    }
    let s = t - c;
    let inner = eval_ml2(nu, nu - mu, a * s.powf(nu), cfg)?;
    Ok(inner.scaled(s.powf(nu - mu - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> EvalConfig {
        EvalConfig::new(1e-15)
    }

    #[test]
    fn prabhakar_examples() {
        let v = eval_prabhakar(MLParams::new(1.0, 1.0, 1.0).unwrap(), 1.0, &cfg()).unwrap();
        assert_relative_eq!(v.value, std::f64::consts::E, max_relative = 1e-15);
        let v = eval_prabhakar(MLParams::new(0.7, 2.3, 1.9).unwrap(), 0.0, &cfg()).unwrap();
        assert_relative_eq!(v.value, 1.0 / gamma_fn(2.3).unwrap(), max_relative = 1e-15);
        assert_relative_eq!(v.value, 0.857_109_622, max_relative = 1e-9);
        assert_eq!(v.terms_used, 1);
        let v = eval_prabhakar(MLParams::new(2.0, 1.0, 1.0).unwrap(), -1.0, &cfg()).unwrap();
        assert_relative_eq!(v.value, 0.540_302_305_868_140, max_relative = 1e-14);
        let v = eval_prabhakar(MLParams::new(1.0, 2.0, 1.0).unwrap(), 1.0, &cfg()).unwrap();
        assert_relative_eq!(v.value, 1.718_281_828_459_045, max_relative = 1e-15);
    }

    #[test]
    fn ml_and_ml2_examples() {
        assert_relative_eq!(eval_ml(1.0, 1.0, &cfg()).unwrap().value, 1f64.exp(), max_relative = 1e-15);
        for alpha in [0.1, 0.5, 1.0, 2.7] {
            assert_eq!(eval_ml(alpha, 0.0, &cfg()).unwrap().value, 1.0);
        }
        assert_relative_eq!(eval_ml(2.0, -1.0, &cfg()).unwrap().value, 1f64.cos(), max_relative = 1e-15);
        assert_relative_eq!(eval_ml2(1.0, 2.0, 1.0, &cfg()).unwrap().value, 1f64.exp() - 1.0, max_relative = 1e-15);
        assert_relative_eq!(
            eval_ml2(0.8, 1.4, 0.0, &cfg()).unwrap().value,
            1.0 / gamma_fn(1.4).unwrap(),
            max_relative = 1e-15
        );
        assert_relative_eq!(eval_ml2(1.0, 1.0, -2.0, &cfg()).unwrap().value, (-2f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn domain_and_convergence_errors() {
        assert!(matches!(eval_ml(1.0, 50.5, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(MLParams::new(0.0, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(eval_ml(-1.0, 1.0, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(eval_ml(1.0, 1.0, &EvalConfig::new(0.0)), Err(Error::Domain(_))));
        assert!(matches!(eval_ml(1.0, 1.0, &EvalConfig::new(1e-2)), Err(Error::Domain(_))));
        let tight = EvalConfig::new(1e-15).with_term_cap(5);
        assert_eq!(eval_ml(1.0, 10.0, &tight), Err(Error::NoConvergence { terms: 5 }));
        // E_{0.05}(40) is far beyond f64; every term is positive
        assert!(matches!(eval_ml(0.05, 40.0, &cfg()), Err(Error::Overflow(_))));
        // same size with alternating signs and no integral fallback (β < 0)
        let p = MLParams::new(0.05, -0.5, 1.0).unwrap();
        assert!(matches!(eval_prabhakar(p, -40.0, &cfg()), Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn non_positive_beta_uses_zero_pole_terms() {
        // E_{1,0}(z) = z e^z, E_{1,-1}(z) = z² e^z
        let z = 0.7;
        assert_relative_eq!(eval_ml2(1.0, 0.0, z, &cfg()).unwrap().value, z * z.exp(), max_relative = 1e-14);
        assert_relative_eq!(eval_ml2(1.0, -1.0, z, &cfg()).unwrap().value, z * z * z.exp(), max_relative = 1e-14);
        // the leading four terms of E_{1,-3} are pole terms and must not stop the sum
        assert_relative_eq!(eval_ml2(1.0, -3.0, z, &cfg()).unwrap().value, z.powi(4) * z.exp(), max_relative = 1e-14);
    }

    #[test]
    fn gamma_zero_collapses_to_reciprocal_gamma() {
        for z in [-7.0, -0.3, 0.0, 2.5, 40.0] {
            let v = eval_prabhakar(MLParams::new(0.6, 1.7, 0.0).unwrap(), z, &cfg()).unwrap();
            // 1/Γ(1.7) = 1.10054740552366572282... (mpmath)
            assert_relative_eq!(v.value, 1.100_547_405_523_665_7, max_relative = 2e-16);
            assert!(v.error_estimate <= 1e-13 * v.value);
        }
    }

    #[test]
    fn wright_examples() {
        let w = WrightParams::new(vec![(1.0, 1.0)], vec![(1.0, 1.0)]);
        assert_relative_eq!(eval_wright(&w, 1.0, &cfg()).unwrap().value, 1f64.exp(), max_relative = 1e-15);
        let w = WrightParams::new(vec![(2.0, 1.0)], vec![(1.0, 1.0)]);
        let x: f64 = 0.5;
        let v = eval_wright(&w, x, &cfg()).unwrap().value;
        assert_relative_eq!(v, x.exp() * (1.0 + x), max_relative = 1e-15);
        assert_relative_eq!(v, 2.473_081_906, max_relative = 1e-9);
    }

    #[test]
    fn wright_errors() {
        let w = WrightParams::new(vec![(1.0, 2.0)], vec![]);
        assert!(matches!(eval_wright(&w, 0.1, &cfg()), Err(Error::ConvergenceDomain(_))));
        let w = WrightParams::new(vec![(1.0, 1.0)], vec![]);
        assert_eq!(w.margin(), 0.0);
        assert!(matches!(eval_wright(&w, 1.0, &cfg()), Err(Error::ConvergenceDomain(_))));
        // margin 0, |z| < 1: 1Ψ0[(1,1)] = Σ zⁿ = 1/(1−z)
        let v = eval_wright(&w, 0.5, &EvalConfig::new(1e-14)).unwrap().value;
        assert_relative_eq!(v, 2.0, max_relative = 1e-13);
        let w = WrightParams::new(vec![(-2.0, 1.0)], vec![(1.0, 1.0)]);
        assert_eq!(eval_wright(&w, 0.5, &cfg()), Err(Error::Pole(-2.0)));
        let w = WrightParams::new(vec![(1.0, -1.0)], vec![]);
        assert!(matches!(eval_wright(&w, 0.5, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn wright_lower_poles_vanish() {
        // 1Ψ1[(1,1); (0,1)] = Σ n zⁿ/n! = z e^z; the n = 0 term sits on a pole
        let w = WrightParams::new(vec![(1.0, 1.0)], vec![(0.0, 1.0)]);
        let z = 0.9;
        assert_relative_eq!(eval_wright(&w, z, &cfg()).unwrap().value, z * z.exp(), max_relative = 1e-14);
    }

    #[test]
    fn f_function_examples() {
        let v = eval_f_function(1.0, 1.0, 2.0, &cfg()).unwrap();
        assert_relative_eq!(v.value, (-2f64).exp(), max_relative = 1e-14);
        let v = eval_f_function(2.0, 0.0, 3.0, &cfg()).unwrap();
        assert_relative_eq!(v.value, 3.0, max_relative = 1e-15);
        let v = eval_f_function(0.5, 1.0, 1.0, &cfg()).unwrap();
        assert_eq!(v.value, eval_ml2(0.5, 0.5, -1.0, &cfg()).unwrap().value);
        assert!(matches!(eval_f_function(1.0, 1.0, 0.0, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(eval_f_function(0.0, 1.0, 1.0, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn r_function_examples() {
        let v = eval_r_function(1.0, 0.0, 1.0, 0.0, 1.0, &cfg()).unwrap();
        assert_relative_eq!(v.value, std::f64::consts::E, max_relative = 1e-15);
        let v = eval_r_function(1.7, 0.2, -0.4, 1.2, 0.6, &cfg()).unwrap();
        assert_eq!(v.value, 0.0);
        let v = eval_r_function(1.7, 0.2, -0.4, 1.2, 1.2, &cfg()).unwrap();
        assert_eq!(v.value, 0.0);
        for (q, a, t) in [(0.6, 0.8, 1.3), (1.9, -0.5, 2.2)] {
            let r = eval_r_function(q, 0.0, a, 0.0, t, &cfg()).unwrap().value;
            let f = eval_f_function(q, -a, t, &cfg()).unwrap().value;
            assert_relative_eq!(r, f, max_relative = 1e-15);
        }
        assert!(matches!(eval_r_function(1.0, 1.0, 1.0, 0.0, 1.0, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(eval_r_function(1.0, 0.0, 1.0, -0.1, 1.0, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn error_estimate_within_tolerance() {
        let tol = 1e-10;
        for z in [-20.0, -3.0, 0.5, 10.0] {
            let r = eval_ml2(0.9, 1.3, z, &EvalConfig::new(tol)).unwrap();
            assert!(r.error_estimate <= tol * r.value.abs().max(1.0));
        }
    }

    #[test]
    fn term_cap_from_env() {
        std::env::set_var(TERM_CAP_ENV, "17");
        let cfg = EvalConfig::from_env(1e-12);
        std::env::remove_var(TERM_CAP_ENV);
        assert_eq!(cfg.term_cap, 17);
        assert_eq!(EvalConfig::from_env(1e-12).term_cap, DEFAULT_TERM_CAP);
    }
}
