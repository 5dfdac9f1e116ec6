//! Double-double arithmetic built from error-free transformations.
//!
//! Series partial sums and running term products are carried as an
//! unevaluated sum `hi + lo`, which keeps alternating Mittag-Leffler series
//! accurate well past the point where plain `f64` summation loses digits.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

// Veltkamp splitting: hi carries the top 26 bits. Used instead of mul_add,
// which is a slow library call on targets without hardware FMA.
#[inline]
fn split(a: f64) -> (f64, f64) {
    const FACTOR: f64 = 134_217_729.0; // 2^27 + 1
    if a.abs() > 6.696_928_794_914_17e299 {
        let (h, l) = split(a * 3.725_290_298_461_914e-9); // 2^-28
        return (h * 268_435_456.0, l * 268_435_456.0);
    }
    let t = FACTOR * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = self.lo * b + e;
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, f) = two_sum(self.hi, -p);
        let f = f - e + self.lo;
        let q2 = (s + f) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }
}

// ln 2 split into two doubles.
const LN2: DoubleDouble = DoubleDouble { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };

// 1/k! for the reduced exponential Taylor series.
const EXP_TAYLOR_TERMS: usize = 13;

impl DoubleDouble {
    /// Exact product of two doubles.
    pub fn from_prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    /// Multiplies by 2^k; exact unless the result leaves the normal range.
    pub fn ldexp(self, k: i32) -> Self {
        Self { hi: ldexp(self.hi, k), lo: ldexp(self.lo, k) }
    }

    /// e^self as a mantissa and binary exponent, e^self = m·2^k, so that
    /// results far outside the `f64` range stay usable.
    pub fn exp_split(self) -> (Self, i32) {
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_f64(k);
        // e^r = (e^{r/32})^32
        let s = r.ldexp(-5);
        let mut term = Self::ONE;
        let mut sum = Self::ONE;
        for i in 1..=EXP_TAYLOR_TERMS {
            term = (term * s).div_f64(i as f64);
            sum += term;
        }
        for _ in 0..5 {
            sum = sum * sum;
        }
        (sum, k as i32)
    }

    /// Natural logarithm of a positive value.
    pub fn ln(self) -> Self {
        let y = Self::new(self.hi.ln());
        // one Newton step on e^y = x
        let (m, k) = (-y).exp_split();
        y + (self * m.ldexp(k)) - Self::ONE
    }
}

/// x·2^k without overflow in the scale factor.
pub fn ldexp(mut x: f64, mut k: i32) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
    }
    x * 2f64.powi(k)
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::new(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (hi, lo) = quick_two_sum(s, e);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + -b
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self + -(b.mul_f64(q1));
        let q2 = r.hi / b.hi;
        let r = r + -(b.mul_f64(q2));
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::new(q3)
    }
}

/// Compensated accumulator for a stream of `f64` terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    acc: DoubleDouble,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        self.acc += DoubleDouble::new(x);
    }

    pub fn add_dd(&mut self, x: DoubleDouble) {
        self.acc += x;
    }

    pub fn value(&self) -> f64 {
        self.acc.to_f64()
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_bits_lost_by_naive_summation() {
        let terms = [1e16, 1.0, -1e16, 1.0];
        let naive: f64 = terms.iter().sum();
        let comp: CompensatedSum = terms.iter().copied().collect();
        assert_eq!(comp.value(), 2.0);
        assert_ne!(naive, 2.0);
    }

    #[test]
    fn division_is_accurate_beyond_f64() {
        let third = DoubleDouble::ONE / DoubleDouble::new(3.0);
        let back = third.mul_f64(3.0);
        assert!((back.hi - 1.0).abs() + back.lo.abs() < 1e-30);
        let q = DoubleDouble::new(1.0).div_f64(3.0);
        assert_eq!(q.mul_f64(3.0).to_f64(), 1.0);
    }

    #[test]
    fn products_near_the_top_of_the_range() {
        let big = 1.5e302;
        let p = DoubleDouble::new(big).mul_f64(1.000_000_000_000_1);
        assert!(p.is_finite());
        assert_eq!(p.hi, big * 1.000_000_000_000_1);
    }

    #[test]
    fn exp_and_ln_at_double_double_precision() {
        // e = 2.718281828459045 + 1.4456468917292502e-16 (mpmath)
        let (m, k) = DoubleDouble::ONE.exp_split();
        let e = m.ldexp(k);
        assert_eq!(e.hi, std::f64::consts::E);
        assert!((e.lo - 1.445_646_891_729_250_2e-16).abs() < 3e-30);
        let back = e.ln();
        assert!((back - DoubleDouble::ONE).to_f64().abs() < 3e-30);
        // large arguments come back split: e^1000 = m·2^k
        let (m, k) = DoubleDouble::new(1000.0).exp_split();
        let ln = m.ln() + LN2.mul_f64(f64::from(k));
        assert!((ln - DoubleDouble::new(1000.0)).to_f64().abs() < 1e-28);
    }
}
