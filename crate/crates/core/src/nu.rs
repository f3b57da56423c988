//! Parametric Nikiforov-Uvarov engine.
//!
//! Solves equations of the form
//!
//! ```text
//! psi'' + (c1 - c2 s)/(s (1 - c3 s)) psi' + (-A s^2 + B s - C)/(s^2 (1 - c3 s)^2) psi = 0
//! ```
//!
//! From the template `(c1, c2, c3, A, B, C)` it derives the constants
//! `c4..c13`, the quantization condition and the factors of
//! `psi_n(s) = s^c12 (1 - c3 s)^c13 P_n^(c10, c11)(1 - 2 c3 s)`.
//! Nothing here knows about a particular potential.

use crate::error::{Error, Result};
use crate::specfun::{hyp2f1_terminating, jacobi_poly, JacobiParams};

/// Coefficients of the hypergeometric-type equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuTemplate {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Coefficient of `-s^2` in the numerator polynomial.
    pub a: f64,
    /// Coefficient of `s`.
    pub b: f64,
    /// Constant term (enters with a minus sign).
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuConstants {
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    pub c11: f64,
    pub c12: f64,
    pub c13: f64,
}

// Neumaier-compensated sum; the c9 combination cancels large terms.
fn compensated_sum(terms: &[f64]) -> (f64, f64) {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut magnitude = 0.0f64;
    for &t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
        magnitude += t.abs();
    }
    (sum + comp, magnitude)
}

// Values within the rounding floor of their operands are zero.
fn snap_to_zero(value: f64, magnitude: f64) -> f64 {
    if value.abs() <= 64.0 * f64::EPSILON * magnitude {
        0.0
    } else {
        value
    }
}

pub fn derive_constants(t: &NuTemplate) -> Result<NuConstants> {
    if t.c3 == 0.0 || !t.c3.is_finite() {
        return Err(Error::UnphysicalTemplate(format!(
            "c3 must be non-zero, got {}",
            t.c3
        )));
    }
    let c4 = 0.5 * (1.0 - t.c1);
    let c5 = 0.5 * (t.c2 - 2.0 * t.c3);
    let c6 = c5 * c5 + t.a;
    let c7 = 2.0 * c4 * c5 - t.b;
    let (c8, c8_mag) = compensated_sum(&[c4 * c4, t.c]);
    let c8 = snap_to_zero(c8, c8_mag);
    let (c9, c9_mag) = compensated_sum(&[
        c5 * c5,
        t.a,
        2.0 * t.c3 * c4 * c5,
        -t.c3 * t.b,
        t.c3 * t.c3 * c4 * c4,
        t.c3 * t.c3 * t.c,
    ]);
    let c9 = snap_to_zero(c9, c9_mag);
    if c8 < 0.0 || c9 < 0.0 || !c8.is_finite() || !c9.is_finite() {
        return Err(Error::UnphysicalTemplate(format!(
            "square-root arguments must be non-negative: c8 = {c8}, c9 = {c9}"
        )));
    }
    let (r8, r9) = (c8.sqrt(), c9.sqrt());
    let k = NuConstants {
        c4,
        c5,
        c6,
        c7,
        c8,
        c9,
        c10: t.c1 + 2.0 * c4 + 2.0 * r8 - 1.0,
        c11: 1.0 - t.c1 - 2.0 * c4 + 2.0 / t.c3 * r9,
        c12: c4 + r8,
        c13: -c4 + (r9 - c5) / t.c3,
    };
    let slope = tau_slope(t, &k);
    if !(slope < 0.0) {
        return Err(Error::UnphysicalTemplate(format!(
            "tau'(s) = {slope} must be negative"
        )));
    }
    Ok(k)
}

// pi(s) = c4 + c5 s - [(sqrt c9 + c3 sqrt c8) s - sqrt c8]
#[cfg(test)]
fn pi_poly(t: &NuTemplate, k: &NuConstants, s: f64) -> f64 {
    k.c4 + k.c5 * s - ((k.c9.sqrt() + t.c3 * k.c8.sqrt()) * s - k.c8.sqrt())
}

#[cfg(test)]
fn pi_slope(t: &NuTemplate, k: &NuConstants) -> f64 {
    k.c5 - (k.c9.sqrt() + t.c3 * k.c8.sqrt())
}

// k = -(c7 + 2 c3 c8) - 2 sqrt(c8 c9)
#[cfg(test)]
fn k_constant(t: &NuTemplate, k: &NuConstants) -> f64 {
    -(k.c7 + 2.0 * t.c3 * k.c8) - 2.0 * (k.c8 * k.c9).sqrt()
}

// tau(s) = tau~(s) + 2 pi(s)
#[cfg(test)]
fn tau_poly(t: &NuTemplate, k: &NuConstants, s: f64) -> f64 {
    t.c1 + 2.0 * k.c4 - (t.c2 - 2.0 * k.c5) * s
        - 2.0 * ((k.c9.sqrt() + t.c3 * k.c8.sqrt()) * s - k.c8.sqrt())
}

fn tau_slope(t: &NuTemplate, k: &NuConstants) -> f64 {
    -2.0 * t.c3 - 2.0 * (k.c9.sqrt() + t.c3 * k.c8.sqrt())
}

/// Left side of the energy equation; zero for a bound state with `n` nodes.
pub fn quantization_residual(t: &NuTemplate, k: &NuConstants, n: u32) -> f64 {
    let n = n as f64;
    let (r8, r9) = (k.c8.sqrt(), k.c9.sqrt());
    t.c2 * n - (2.0 * n + 1.0) * k.c5
        + (2.0 * n + 1.0) * (r9 + t.c3 * r8)
        + n * (n - 1.0) * t.c3
        + k.c7
        + 2.0 * t.c3 * k.c8
        + 2.0 * (k.c8 * k.c9).sqrt()
}

/// Exponents and Jacobi parameters of the polynomial solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionFactors {
    /// Weight `rho(s) = s^c10 (1 - c3 s)^c11`.
    pub rho_exponents: (f64, f64),
    /// `phi(s) = s^c12 (1 - c3 s)^c13`.
    pub phi_exponents: (f64, f64),
    /// `(alpha, beta)` of `P_n^(alpha, beta)(1 - 2 c3 s)`.
    pub jacobi: (f64, f64),
    pub c3: f64,
}

pub fn wavefunction_factors(t: &NuTemplate, k: &NuConstants) -> Result<WavefunctionFactors> {
    if !(k.c10 > -1.0 && k.c11 > -1.0) {
        return Err(Error::InvalidJacobi {
            alpha: k.c10,
            beta: k.c11,
        });
    }
    if !(k.c12 > 0.0 && k.c13 > 0.0) {
        return Err(Error::NonNormalizable {
            c12: k.c12,
            c13: k.c13,
        });
    }
    Ok(WavefunctionFactors {
        rho_exponents: (k.c10, k.c11),
        phi_exponents: (k.c12, k.c13),
        jacobi: (k.c10, k.c11),
        c3: t.c3,
    })
}

impl WavefunctionFactors {
    pub fn jacobi_params(&self, n: u32) -> JacobiParams {
        JacobiParams {
            n,
            alpha: self.jacobi.0,
            beta: self.jacobi.1,
        }
    }

    /// `(-n, 1 + c10 + c11 + n, c10 + 1)` of the hypergeometric form.
    pub fn hypergeometric_params(&self, n: u32) -> (f64, f64, f64) {
        let (alpha, beta) = self.jacobi;
        (-(n as f64), 1.0 + alpha + beta + n as f64, alpha + 1.0)
    }

    pub fn phi(&self, s: f64) -> f64 {
        s.powf(self.phi_exponents.0) * (1.0 - self.c3 * s).powf(self.phi_exponents.1)
    }

    pub fn rho(&self, s: f64) -> f64 {
        s.powf(self.rho_exponents.0) * (1.0 - self.c3 * s).powf(self.rho_exponents.1)
    }

    /// Unnormalized `phi(s) P_n^(c10, c11)(1 - 2 c3 s)`.
    pub fn eval_jacobi_form(&self, n: u32, s: f64) -> f64 {
        self.phi(s) * jacobi_poly(self.jacobi_params(n), 1.0 - 2.0 * self.c3 * s)
    }

    /// Unnormalized `phi(s) 2F1(-n, 1 + c10 + c11 + n; c10 + 1; c3 s)`.
    pub fn eval_hypergeometric_form(&self, n: u32, s: f64) -> Result<f64> {
        let (_, b, c) = self.hypergeometric_params(n);
        Ok(self.phi(s) * hyp2f1_terminating(n, b, c, self.c3 * s)?)
    }
}
