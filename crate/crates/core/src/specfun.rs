//! Log-gamma, Beta, Jacobi polynomials and the terminating Gauss series.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

// Godfrey's coefficients for g = 607/128.
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(x)` for `x > 0`.
///
/// Lanczos sum for `x >= 1/2`; smaller arguments are shifted up once with
/// `ln Γ(x) = ln Γ(x+1) - ln x`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            func: "ln_gamma",
            detail: format!("argument must be positive and finite, got {x}"),
        });
    }
    if x < 0.5 {
        return Ok(lanczos_ln_gamma(x + 1.0) - x.ln());
    }
    // exact zeros
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    Ok(lanczos_ln_gamma(x))
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// `ln B(p, q) = ln Γ(p) + ln Γ(q) - ln Γ(p+q)`.
pub fn ln_beta(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::Domain {
            func: "beta_function",
            detail: format!("arguments must be positive, got ({p}, {q})"),
        });
    }
    Ok(ln_gamma(p)? + ln_gamma(q)? - ln_gamma(p + q)?)
}

pub fn beta_function(p: f64, q: f64) -> Result<f64> {
    ln_beta(p, q).map(f64::exp)
}

/// Rising factorial `(x)_k`.
pub fn pochhammer(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (x + j as f64))
}

/// Degree and parameters of `P_n^(alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(n: u32, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) {
            return Err(Error::InvalidJacobi { alpha, beta });
        }
        Ok(Self { n, alpha, beta })
    }
}

/// `P_n^(alpha, beta)(x)` by the three-term recurrence in the degree.
pub fn jacobi_poly(jp: JacobiParams, x: f64) -> f64 {
    let JacobiParams { n, alpha: a, beta: b } = jp;
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c0 = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
        let c1 = (s + 1.0) * (s * (s + 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (k + a) * (k + b) * (s + 2.0);
        let next = (c1 * cur - c2 * prev) / c0;
        prev = cur;
        cur = next;
    }
    cur
}

/// `2F1(-n, b; c; x)` as its finite sum of `n + 1` terms.
///
/// The series alternates for `x > 0` and its terms can exceed the result by
/// many orders of magnitude, so it is accumulated in double-double
/// arithmetic.
pub fn hyp2f1_terminating(n: u32, b: f64, c: f64, x: f64) -> Result<f64> {
    if n > 0 && c <= 0.0 && c >= -(n as f64) && c.fract() == 0.0 {
        return Err(Error::HypergeometricPole { c });
    }
    let mut term = DoubleDouble::from(1.0);
    let mut sum = term;
    let x = DoubleDouble::from(x);
    for k in 0..n {
        let kf = k as f64;
        let num = DoubleDouble::sum(b, kf) * DoubleDouble::from(kf - n as f64) * x;
        let den = DoubleDouble::sum(c, kf) * DoubleDouble::from(kf + 1.0);
        term = term * num / den;
        sum = sum + term;
    }
    Ok(sum.hi + sum.lo)
}

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    fn sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self::renormalized(s, err)
    }

    fn renormalized(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self {
            hi: s,
            lo: lo - (s - hi),
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(hi: f64) -> Self {
        Self { hi, lo: 0.0 }
    }
}

impl std::ops::Add for DoubleDouble {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        let s = Self::sum(self.hi, o.hi);
        Self::renormalized(s.hi, s.lo + self.lo + o.lo)
    }
}

impl std::ops::Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        self + Self { hi: -o.hi, lo: -o.lo }
    }
}

impl std::ops::Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let err = self.hi.mul_add(o.hi, -p) + self.hi * o.lo + self.lo * o.hi;
        Self::renormalized(p, err)
    }
}

impl std::ops::Div for DoubleDouble {
    type Output = Self;

    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self - o * Self::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Self::from(q2);
        let q3 = r.hi / o.hi;
        let q = Self::renormalized(q1, q2);
        q + Self::from(q3)
    }
}
