//! Closed-form and transcendental solutions for the Yukawa problem.
//!
//! With the exponential substitution `s = exp(-2 a r)` and the
//! exponential-ratio forms of `1/r` and `1/r^2`, the reduced radial
//! equation maps onto the NU template with `c1 = c2 = c3 = 1` and
//! energy-dependent `(A, B, C)`. The bound-state energy is then the root of
//!
//! ```text
//! sqrt(A(E)) - sqrt(C(E)) = n + nu + 1/2
//! ```
//!
//! and the wavefunction is `s^eps (1-s)^(1/2+nu) P_n^(2 eps, 2 nu)(1 - 2s)`.
//! The nonrelativistic and Coulomb closed forms live here as well.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{nu_parameter, PhysicalParams, QuantumNumbers, System};
use crate::nu::{derive_constants, quantization_residual, NuTemplate};
use crate::quad::simpson;
use crate::specfun::{jacobi_poly, ln_beta, ln_gamma, JacobiParams};

/// Where a [`BoundState`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    AnalyticSs,
    AnalyticNr,
    NumericFd,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::AnalyticSs => "analytic-SS",
            Provenance::AnalyticNr => "analytic-NR",
            Provenance::NumericFd => "numeric-FD",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub qn: QuantumNumbers,
    /// Energy in fm⁻¹; negative for a bound state.
    pub energy: f64,
    /// `nu` for the semirelativistic problem, `l + 1/2` for the Schrödinger one.
    pub nu: f64,
    /// Decay exponent in `s`-space: `eps` (semirelativistic) or `lambda`
    /// (nonrelativistic). Absent for numeric states and for `a = 0`.
    pub exponent: Option<f64>,
    pub norm_constant: Option<f64>,
    pub provenance: Provenance,
}

impl BoundState {
    pub fn binding_energy(&self) -> f64 {
        -self.energy
    }
}

/// Which form of the second radical to use in the energy equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResidualForm {
    /// `sqrt(-mu E/(2 hbar^2 a^2) (1 + E/2m~))`, identical to `sqrt(C)`.
    #[default]
    Consistent,
    /// The variant with `(V0 + E/2m~)` in place of `(1 + E/2m~)`; the two
    /// agree only for `V0 = 1`.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

fn require_screening(sys: &System) -> Result<f64> {
    let a = sys.params.a;
    if a == 0.0 {
        Err(Error::CoulombLimit)
    } else {
        Ok(a)
    }
}

fn require_negative(energy: f64) -> Result<()> {
    if energy < 0.0 && energy.is_finite() {
        Ok(())
    } else {
        Err(Error::OutsidePhysicalBranch {
            energy,
            detail: "energy must be negative".into(),
        })
    }
}

/// Energy-dependent coefficients `(A, B, C)` of the transformed equation.
pub fn abc_coefficients(energy: f64, l: u32, sys: &System) -> Result<AbcCoefficients> {
    let a = require_screening(sys)?;
    require_negative(energy)?;
    let mu = sys.mu();
    let mt = sys.m_tilde();
    let v0 = sys.params.v0;
    let hb2 = sys.hbar2();
    let ll = l as f64 * (l as f64 + 1.0);

    let shifted = v0 - energy / (2.0 * a);
    let big_a = mu / hb2 * shifted * (1.0 / a - shifted / mt);
    let big_b = -ll + mu / (hb2 * a) * ((v0 - energy / a) + energy / mt * shifted);
    let big_c = -mu / hb2 * energy / (2.0 * a * a) * (1.0 + energy / (2.0 * mt));
    Ok(AbcCoefficients {
        a: big_a,
        b: big_b,
        c: big_c,
    })
}

/// The NU template of the Yukawa problem at trial energy `energy`.
pub fn yukawa_template(energy: f64, l: u32, sys: &System) -> Result<NuTemplate> {
    let abc = abc_coefficients(energy, l, sys)?;
    Ok(NuTemplate {
        c1: 1.0,
        c2: 1.0,
        c3: 1.0,
        a: abc.a,
        b: abc.b,
        c: abc.c,
    })
}

/// `eps = sqrt(-(mu/2 hbar^2)(E/a^2)(1 + E/2m~))`.
pub fn epsilon(energy: f64, sys: &System) -> Result<f64> {
    let a = require_screening(sys)?;
    require_negative(energy)?;
    let rel = 1.0 + energy / (2.0 * sys.m_tilde());
    if rel <= 0.0 {
        return Err(Error::OutsidePhysicalBranch {
            energy,
            detail: format!("1 + E/2m~ = {rel} is not positive"),
        });
    }
    Ok((-sys.mu() / (2.0 * sys.hbar2()) * energy / (a * a) * rel).sqrt())
}

/// `sqrt(A) - sqrt(C) - (n + nu + 1/2)`; a bound state is a root.
pub fn ss_energy_residual(
    energy: f64,
    n: u32,
    l: u32,
    sys: &System,
    form: ResidualForm,
) -> Result<f64> {
    let nu = nu_parameter(l, sys)?;
    let abc = abc_coefficients(energy, l, sys)?;
    let second = match form {
        ResidualForm::Consistent => abc.c,
        ResidualForm::Printed => {
            let a = sys.params.a;
            -sys.mu() / sys.hbar2() * energy / (2.0 * a * a)
                * (sys.params.v0 + energy / (2.0 * sys.m_tilde()))
        }
    };
    if abc.a < 0.0 || second < 0.0 {
        return Err(Error::OutsidePhysicalBranch {
            energy,
            detail: format!("radicands A = {}, C = {second}", abc.a),
        });
    }
    Ok(abc.a.sqrt() - second.sqrt() - (n as f64 + nu + 0.5))
}

/// The energy equation evaluated through the generic NU engine.
pub fn nu_energy_residual(energy: f64, n: u32, l: u32, sys: &System) -> Result<f64> {
    let t = yukawa_template(energy, l, sys)?;
    let k = derive_constants(&t)?;
    Ok(quantization_residual(&t, &k, n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Accept a root when `|f(E)| <= tol (n + nu + 1/2)`.
    pub tol: f64,
    pub form: ResidualForm,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            form: ResidualForm::Consistent,
        }
    }
}

const SCAN_POINTS: usize = 2000;
const SCAN_TOP: f64 = -1e-10;

/// Bisection on a sign-changing bracket down to the f64 resolution.
pub(crate) fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok((lo, 0.0));
    }
    if f_hi == 0.0 {
        return Ok((hi, 0.0));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Numerical(format!(
            "bracket [{lo}, {hi}] does not change sign"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= rel_tol * mid.abs() {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok((mid, 0.0));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(if f_lo.abs() <= f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    })
}

/// Solves the transcendental energy equation for the state `(n, l)`.
///
/// The residual is scanned on 2000 log-spaced energies between
/// `-min(0.99 * 2 m~, 2 mu V0^2/hbar^2)` and `-1e-10`, the sign change
/// closest to threshold is refined by bisection, and the resulting
/// wavefunction must have exactly `n` nodes.
pub fn solve_ss_energy(n: u32, l: u32, sys: &System, opts: &SolveOptions) -> Result<BoundState> {
    let nu = nu_parameter(l, sys)?;
    let a = require_screening(sys)?;
    let residual = |e: f64| ss_energy_residual(e, n, l, sys, opts.form);

    let deepest = (0.99 * 2.0 * sys.m_tilde()).min(2.0 * sys.mu() * sys.params.v0.powi(2) / sys.hbar2());
    let (ln_lo, ln_hi) = (deepest.ln(), (-SCAN_TOP).ln());
    let samples: Vec<(f64, f64)> = (0..SCAN_POINTS)
        .filter_map(|k| {
            let t = k as f64 / (SCAN_POINTS - 1) as f64;
            let e = -(ln_lo + t * (ln_hi - ln_lo)).exp();
            residual(e).ok().map(|f| (e, f))
        })
        .collect();

    let monotone = samples.windows(2).all(|w| w[1].1 >= w[0].1)
        || samples.windows(2).all(|w| w[1].1 <= w[0].1);
    if !monotone {
        log::warn!("energy residual for ({n},{l}) is not monotone over the scan window");
    }

    let bracket = samples
        .windows(2)
        .rev()
        .find(|w| w[0].1 == 0.0 || w[1].1 == 0.0 || w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0].0, w[1].0))
        .ok_or_else(|| Error::NoBoundState {
            n,
            l,
            detail: format!(
                "energy residual has no sign change in [{:.3e}, {SCAN_TOP:.0e}]",
                -deepest
            ),
        })?;

    let (energy, f) = bisect(residual, bracket.0, bracket.1, 4.0 * f64::EPSILON)?;
    let scale = n as f64 + nu + 0.5;
    if f.abs() > opts.tol * scale {
        return Err(Error::Numerical(format!(
            "root of ({n},{l}) refined only to |f| = {:e} > {:e}",
            f.abs(),
            opts.tol * scale
        )));
    }

    let eps = epsilon(energy, sys)?;
    // c10 of the generic engine must equal 2 eps on every solve
    let k = derive_constants(&yukawa_template(energy, l, sys)?)?;
    if (k.c10 - 2.0 * eps).abs() > 1e-9 * (2.0 * eps).max(1.0) {
        return Err(Error::Numerical(format!(
            "Jacobi parameter mismatch: c10 = {} but 2 eps = {}",
            k.c10,
            2.0 * eps
        )));
    }

    let state = BoundState {
        qn: QuantumNumbers::new(n, l),
        energy,
        nu,
        exponent: Some(eps),
        norm_constant: Some(ss_norm_constant(n, nu, eps, a)?),
        provenance: Provenance::AnalyticSs,
    };
    let nodes = analytic_node_count(&state, sys)?;
    if nodes != n as usize {
        return Err(Error::NodeMismatch { n, l, found: nodes });
    }
    Ok(state)
}

/// Normalization constant of the semirelativistic wavefunction, assembled
/// in log space.
pub fn ss_norm_constant(n: u32, nu: f64, eps: f64, a: f64) -> Result<f64> {
    if !(eps > 0.0 && nu >= 0.0 && a > 0.0) {
        return Err(Error::Domain {
            func: "ss_norm_constant",
            detail: format!("need eps > 0, nu >= 0, a > 0; got eps = {eps}, nu = {nu}, a = {a}"),
        });
    }
    let nf = n as f64;
    let ln_sq = (2.0 * a * eps).ln()
        + ln_gamma(nf + 1.0)?
        + (2.0 * nf + 2.0 * nu + 2.0 * eps + 1.0).ln()
        + ln_gamma(nf + 2.0 * nu + 2.0 * eps + 1.0)?
        - (nf + nu + 0.5).ln()
        - ln_gamma(nf + 2.0 * nu + 1.0)?
        - ln_gamma(nf + 2.0 * eps + 1.0)?;
    Ok((0.5 * ln_sq).exp())
}

/// Ground-state (`n = 0`) normalization through the Beta function.
pub fn ss_ground_norm_beta(nu: f64, eps: f64, a: f64) -> Result<f64> {
    let ln_b = ln_beta(2.0 * eps, 2.0 * nu + 1.0)?;
    let ln_sq = (a * (2.0 * nu + 2.0 * eps + 1.0)).ln() - (nu + 0.5).ln() - ln_b;
    Ok((0.5 * ln_sq).exp())
}

// norm * s^p (1-s)^q P_n^(alpha, beta)(1 - 2s) with s = exp(-2 a r), in log space.
fn s_space_psi(r: f64, a: f64, norm: f64, p: f64, q: f64, jp: JacobiParams) -> f64 {
    let x = 2.0 * a * r.max(0.0);
    let one_minus_s = -(-x).exp_m1();
    if one_minus_s <= 0.0 {
        return 0.0;
    }
    let poly = jacobi_poly(jp, 2.0 * one_minus_s - 1.0);
    if poly == 0.0 || !poly.is_finite() {
        return 0.0;
    }
    let ln_mag = norm.ln() - p * x + q * one_minus_s.ln() + poly.abs().ln();
    if ln_mag < -745.0 {
        0.0
    } else {
        poly.signum() * ln_mag.exp()
    }
}

fn analytic_parts(state: &BoundState, expected: Provenance) -> Result<(f64, f64)> {
    match (state.provenance == expected, state.exponent, state.norm_constant) {
        (true, Some(e), Some(c)) => Ok((e, c)),
        _ => Err(Error::Domain {
            func: "wavefunction",
            detail: format!(
                "state {} ({}) carries no {expected} wavefunction parameters",
                state.qn, state.provenance
            ),
        }),
    }
}

/// Normalized semirelativistic wavefunction `psi(r)`.
pub fn ss_wavefunction(r: f64, state: &BoundState, sys: &System) -> Result<f64> {
    let (eps, norm) = analytic_parts(state, Provenance::AnalyticSs)?;
    let jp = JacobiParams::new(state.qn.n, 2.0 * eps, 2.0 * state.nu)?;
    Ok(s_space_psi(r, sys.params.a, norm, eps, 0.5 + state.nu, jp))
}

/// Nonrelativistic closed form, including the `-2 V0` term inside the
/// bracket exactly as tabulated.
///
/// For `a = 0` the Coulomb energy is returned and the state carries no
/// wavefunction parameters.
pub fn schrodinger_energy(n: u32, l: u32, sys: &System) -> Result<BoundState> {
    let qn = QuantumNumbers::new(n, l);
    let a = sys.params.a;
    if a == 0.0 {
        return Ok(BoundState {
            qn,
            energy: coulomb_energy(n, l, sys),
            nu: l as f64 + 0.5,
            exponent: None,
            norm_constant: None,
            provenance: Provenance::AnalyticNr,
        });
    }
    let energy = nr_closed_form(n, l, sys, 2.0);
    if !(energy < 0.0) {
        return Err(Error::NoBoundState {
            n,
            l,
            detail: format!("closed-form energy {energy} is not negative"),
        });
    }
    let lambda = (-sys.mu() * energy / (2.0 * sys.hbar2())).sqrt() / a;
    Ok(BoundState {
        qn,
        energy,
        nu: l as f64 + 0.5,
        exponent: Some(lambda),
        norm_constant: Some(schrodinger_norm_constant(n, l, lambda, a)?),
        provenance: Provenance::AnalyticNr,
    })
}

/// The `m~ -> inf` limit of the transcendental equation (the Hulthén
/// spectrum), which carries `-V0` where the tabulated form has `-2 V0`.
pub fn schrodinger_energy_consistent(n: u32, l: u32, sys: &System) -> Result<f64> {
    if sys.params.a == 0.0 {
        return Ok(coulomb_energy(n, l, sys));
    }
    let energy = nr_closed_form(n, l, sys, 1.0);
    if energy < 0.0 {
        Ok(energy)
    } else {
        Err(Error::NoBoundState {
            n,
            l,
            detail: format!("closed-form energy {energy} is not negative"),
        })
    }
}

fn nr_closed_form(n: u32, l: u32, sys: &System, v0_weight: f64) -> f64 {
    let a = sys.params.a;
    let v0 = sys.params.v0;
    let (mu, hb2) = (sys.mu(), sys.hbar2());
    let big_n = (n + l + 1) as f64;
    -a * (hb2 * a / (2.0 * mu) * big_n * big_n + mu / (2.0 * hb2 * a) * v0 * v0 / (big_n * big_n)
        - v0_weight * v0)
}

pub fn schrodinger_norm_constant(n: u32, l: u32, lambda: f64, a: f64) -> Result<f64> {
    if !(lambda > 0.0 && a > 0.0) {
        return Err(Error::Domain {
            func: "schrodinger_norm_constant",
            detail: format!("need lambda > 0, a > 0; got lambda = {lambda}, a = {a}"),
        });
    }
    let (nf, lf) = (n as f64, l as f64);
    let ln_sq = (4.0 * a * lambda).ln()
        + ln_gamma(nf + 1.0)?
        + (nf + lf + lambda + 1.0).ln()
        + ln_gamma(nf + 2.0 * lf + 2.0 * lambda + 2.0)?
        - (nf + lf + 1.0).ln()
        - ln_gamma(nf + 2.0 * lf + 2.0)?
        - ln_gamma(nf + 2.0 * lambda + 1.0)?;
    Ok((0.5 * ln_sq).exp())
}

/// Normalized nonrelativistic wavefunction.
pub fn schrodinger_wavefunction(r: f64, state: &BoundState, sys: &System) -> Result<f64> {
    let (lambda, norm) = analytic_parts(state, Provenance::AnalyticNr)?;
    let l = state.qn.l as f64;
    let jp = JacobiParams::new(state.qn.n, 2.0 * lambda, 2.0 * l + 1.0)?;
    Ok(s_space_psi(r, sys.params.a, norm, lambda, l + 1.0, jp))
}

/// `E = -mu V0^2 / (2 hbar^2 (n+l+1)^2)`.
pub fn coulomb_energy(n: u32, l: u32, sys: &System) -> f64 {
    let big_n = (n + l + 1) as f64;
    -sys.mu() * sys.params.v0.powi(2) / (2.0 * sys.hbar2() * big_n * big_n)
}

/// `-2 a V0 exp(-2ar)/(1 - exp(-2ar))`, tending to `-V0/r` at small `r`.
pub fn greene_aldrich_potential(r: f64, params: &PhysicalParams) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain {
            func: "greene_aldrich_potential",
            detail: format!("r must be positive, got {r}"),
        });
    }
    let a = params.a;
    if a == 0.0 {
        return Ok(-params.v0 / r);
    }
    let x = 2.0 * a * r;
    Ok(-2.0 * a * params.v0 * (-x).exp() / -(-x).exp_m1())
}

/// Evaluates an analytic state's wavefunction.
pub fn wavefunction(r: f64, state: &BoundState, sys: &System) -> Result<f64> {
    match state.provenance {
        Provenance::AnalyticSs => ss_wavefunction(r, state, sys),
        Provenance::AnalyticNr => schrodinger_wavefunction(r, state, sys),
        Provenance::NumericFd => Err(Error::Domain {
            func: "wavefunction",
            detail: "numeric states are sampled on their grid".into(),
        }),
    }
}

/// Radius beyond which an analytic state is negligible.
pub fn analytic_extent(state: &BoundState, sys: &System) -> Result<f64> {
    let exponent = state.exponent.ok_or_else(|| Error::Domain {
        func: "analytic_extent",
        detail: format!("state {} has no decay exponent", state.qn),
    })?;
    let kappa = 2.0 * sys.params.a * exponent;
    Ok((60.0 + 10.0 * state.qn.n as f64) / kappa)
}

/// `∫ |psi|^2 dr` by composite Simpson quadrature on `[0, extent]`.
pub fn norm_by_quadrature(state: &BoundState, sys: &System) -> Result<f64> {
    let r_max = analytic_extent(state, sys)?;
    wavefunction(0.0, state, sys)?;
    Ok(simpson(
        |r| wavefunction(r, state, sys).map(|v| v * v).unwrap_or(f64::NAN),
        0.0,
        r_max,
        200_000,
    ))
}

/// Interior sign changes of an analytic wavefunction.
pub fn analytic_node_count(state: &BoundState, sys: &System) -> Result<usize> {
    let r_max = analytic_extent(state, sys)?;
    let points = 40_000;
    let values = (1..points)
        .map(|i| wavefunction(r_max * i as f64 / points as f64, state, sys))
        .collect::<Result<Vec<_>>>()?;
    Ok(count_sign_changes(&values))
}

/// Sign changes in `values`, ignoring entries below `1e-8` of the peak.
pub fn count_sign_changes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-8 * peak;
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in values.iter().filter(|v| v.abs() > floor) {
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}
