//! Finite-difference solution of the radial equations with the exact
//! Yukawa potential.
//!
//! The reduced radial function is sampled on a uniform grid with Dirichlet
//! ends, giving a symmetric tridiagonal operator `T`. Eigenvalues `lambda`
//! of `T` correspond to `2 mu E / hbar^2`. For the semirelativistic
//! equation `T` depends on `E` and the energy solves the secular equation
//!
//! ```text
//! g(E) = lambda_n(T(E)) - (2 mu / hbar^2)(E + E^2 / 2m~) = 0,
//! ```
//!
//! with `g` strictly decreasing in `E`.
//!
//! Two discretizations are available. `Plain` is the textbook three-point
//! stencil on `r_i = i h`. `SqrtR` factors `sqrt(r)` out of the solution and
//! discretizes the resulting radial Laplacian on the cell centres
//! `r_i = (i - 1/2) h`; it keeps second-order accuracy when the small-`r`
//! behaviour is `r^(1/2 + nu)` with `nu` close to an integer, where the plain
//! stencil degrades (at `nu = 0` it does not converge to the right limit).

use std::fmt;
use std::str::FromStr;

use crate::analytic::{count_sign_changes, solve_ss_energy, BoundState, Provenance, SolveOptions};
use crate::error::{Error, Result};
use crate::model::{nu_parameter, QuantumNumbers, System};

pub mod tridiag;

pub use tridiag::TridiagonalOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Scheme {
    /// `SqrtR` when `nu` lies within 1/4 of an integer, `Plain` otherwise.
    #[default]
    Auto,
    Plain,
    SqrtR,
}

impl Scheme {
    pub fn resolve(self, nu: f64) -> Scheme {
        match self {
            Scheme::Auto => {
                let frac = nu - nu.floor();
                if !(0.25..=0.75).contains(&frac) {
                    Scheme::SqrtR
                } else {
                    Scheme::Plain
                }
            }
            s => s,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Auto => "auto",
            Scheme::Plain => "plain",
            Scheme::SqrtR => "sqrt-r",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Scheme::Auto),
            "plain" => Ok(Scheme::Plain),
            "sqrt-r" => Ok(Scheme::SqrtR),
            other => Err(Error::InvalidParameter(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    /// Outer radius; `None` picks [`default_r_max`].
    pub r_max: Option<f64>,
    /// Number of interior grid points.
    pub points: usize,
    pub scheme: Scheme,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            r_max: None,
            points: 20_000,
            scheme: Scheme::Auto,
        }
    }
}

impl FdOptions {
    /// Same box with the spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            points: 2 * self.points + 1,
            ..*self
        }
    }
}

/// `max(40, 60 N^2 hbar^2 / (mu V0))` with `N = n + l + 1`: sixty Bohr
/// radii of the hydrogen-like level, which bounds the screened state too.
pub fn default_r_max(n: u32, l: u32, sys: &System) -> f64 {
    let big_n = (n + l + 1) as f64;
    (60.0 * big_n * big_n * sys.hbar2() / (sys.mu() * sys.params.v0)).max(40.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    /// Either `Plain` or `SqrtR`.
    pub scheme: Scheme,
    pub r_max: f64,
    pub h: f64,
    pub r: Vec<f64>,
}

impl RadialGrid {
    pub fn new(scheme: Scheme, r_max: f64, points: usize) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) || points < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs r_max > 0 and at least 2 points, got r_max = {r_max}, points = {points}"
            )));
        }
        let m = points as f64;
        let (h, offset) = match scheme {
            Scheme::Plain => (r_max / (m + 1.0), 0.0),
            Scheme::SqrtR => (r_max / (m + 0.5), 0.5),
            Scheme::Auto => {
                return Err(Error::InvalidParameter("grid scheme must be resolved".into()))
            }
        };
        let r = (1..=points).map(|i| (i as f64 - offset) * h).collect();
        Ok(Self {
            scheme,
            r_max,
            h,
            r,
        })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Kinetic stencil plus `l(l+1)/r^2`, with `extra(r)` added on the diagonal.
    fn operator<F: Fn(f64) -> f64>(&self, l: u32, extra: F) -> Result<TridiagonalOperator> {
        let h2 = self.h * self.h;
        let mut centrifugal = l as f64 * (l as f64 + 1.0);
        let off = match self.scheme {
            Scheme::SqrtR => {
                centrifugal += 0.25;
                (1..self.len())
                    .map(|i| {
                        let i = i as f64;
                        -i / (i * i - 0.25).sqrt() / h2
                    })
                    .collect()
            }
            _ => vec![-1.0 / h2; self.len() - 1],
        };
        let diag = self
            .r
            .iter()
            .map(|&r| 2.0 / h2 + centrifugal / (r * r) + extra(r))
            .collect();
        TridiagonalOperator::new(diag, off)
    }
}

fn make_grid(n: u32, l: u32, nu: f64, sys: &System, opts: &FdOptions) -> Result<RadialGrid> {
    let r_max = opts.r_max.unwrap_or_else(|| default_r_max(n, l, sys));
    RadialGrid::new(opts.scheme.resolve(nu), r_max, opts.points)
}

fn screened_coulomb(r: f64, sys: &System) -> f64 {
    sys.params.v0 * (-sys.params.a * r).exp() / r
}

/// `-d^2/dr^2 + l(l+1)/r^2 + (2 mu / hbar^2) V(r)` on `grid`.
pub fn build_schrodinger_operator(l: u32, sys: &System, grid: &RadialGrid) -> Result<TridiagonalOperator> {
    let k = 2.0 * sys.mu() / sys.hbar2();
    grid.operator(l, |r| -k * screened_coulomb(r, sys))
}

/// Semirelativistic operator at trial energy `energy`: the Schrödinger one
/// with the potential term scaled by `1 + E/m~` and the attractive
/// `V^2 / 2m~` term added.
pub fn build_ss_operator(energy: f64, l: u32, sys: &System, grid: &RadialGrid) -> Result<TridiagonalOperator> {
    let k = 2.0 * sys.mu() / sys.hbar2();
    let mt = sys.m_tilde();
    grid.operator(l, |r| {
        let w = screened_coulomb(r, sys);
        -k * (w * (1.0 + energy / mt) + w * w / (2.0 * mt))
    })
}

/// The secular function `g(E)` for the `n`-th state.
pub fn ss_secular_value(energy: f64, n: u32, l: u32, sys: &System, grid: &RadialGrid) -> Result<f64> {
    let t = build_ss_operator(energy, l, sys, grid)?;
    let k = 2.0 * sys.mu() / sys.hbar2();
    let target = k * (energy + energy * energy / (2.0 * sys.m_tilde()));
    Ok(t.kth_eigenvalue_near(n as usize, target)? - target)
}

/// A grid eigenstate: energy plus the sampled reduced radial function.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericState {
    pub state: BoundState,
    pub grid: RadialGrid,
    /// `psi(r_i)`, normalized so that `sum h psi_i^2 = 1` and positive near
    /// the origin.
    pub psi: Vec<f64>,
}

impl NumericState {
    pub fn nodes(&self) -> usize {
        count_sign_changes(&self.psi)
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.r.iter().copied().zip(self.psi.iter().copied())
    }
}

fn finish_state(
    qn: QuantumNumbers,
    energy: f64,
    nu: f64,
    grid: RadialGrid,
    op: &TridiagonalOperator,
    lambda: f64,
) -> Result<NumericState> {
    let mut psi = op.eigenvector(lambda)?;
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sign = psi
        .iter()
        .find(|v| v.abs() > 1e-10 * peak)
        .map_or(1.0, |v| v.signum());
    let scale = sign / grid.h.sqrt();
    psi.iter_mut().for_each(|v| *v *= scale);

    let numeric = NumericState {
        state: BoundState {
            qn,
            energy,
            nu,
            exponent: None,
            norm_constant: None,
            provenance: Provenance::NumericFd,
        },
        grid,
        psi,
    };
    let nodes = numeric.nodes();
    if nodes != qn.n as usize {
        return Err(Error::NodeMismatch {
            n: qn.n,
            l: qn.l,
            found: nodes,
        });
    }
    Ok(numeric)
}

/// Schrödinger eigenstate `(n, l)` in the exact Yukawa potential.
pub fn solve_schrodinger_numeric(n: u32, l: u32, sys: &System, opts: &FdOptions) -> Result<NumericState> {
    let nu = l as f64 + 0.5;
    let grid = make_grid(n, l, nu, sys, opts)?;
    let op = build_schrodinger_operator(l, sys, &grid)?;
    let lambda = op.kth_eigenvalue(n as usize)?;
    if lambda >= 0.0 {
        return Err(Error::NotBoundOnGrid {
            n,
            l,
            eigenvalue: lambda,
        });
    }
    let energy = sys.hbar2() * lambda / (2.0 * sys.mu());
    finish_state(QuantumNumbers::new(n, l), energy, nu, grid, &op, lambda)
}

/// Semirelativistic eigenstate `(n, l)` in the exact Yukawa potential.
///
/// Starting from an estimate (the analytic root, or the Coulomb-like
/// `-mu V0^2 / 2 hbar^2 (n + nu + 1/2)^2` when that is unavailable) the
/// secular function is bracketed by geometric steps and the root refined by
/// Illinois regula falsi.
pub fn solve_ss_numeric(n: u32, l: u32, sys: &System, opts: &FdOptions) -> Result<NumericState> {
    let nu = nu_parameter(l, sys)?;
    let grid = make_grid(n, l, nu, sys, opts)?;
    let estimate = solve_ss_energy(n, l, sys, &SolveOptions::default())
        .map(|s| s.energy)
        .unwrap_or_else(|_| {
            let nn = n as f64 + nu + 0.5;
            -sys.mu() * sys.params.v0.powi(2) / (2.0 * sys.hbar2() * nn * nn)
        });
    let deepest = -0.99 * 2.0 * sys.m_tilde();
    let secular = |e: f64| ss_secular_value(e, n, l, sys, &grid);

    let no_root = |detail: String| Error::NoBoundState { n, l, detail };
    let mut a = (estimate.max(deepest), secular(estimate.max(deepest))?);
    let b = loop {
        // g decreases with E: positive means the root is shallower
        let e = if a.1 > 0.0 { a.0 / 1.25 } else { (a.0 * 1.25).max(deepest) };
        if e == a.0 || e.abs() < 1e-12 {
            return Err(no_root(format!("secular function keeps its sign up to E = {e:e}")));
        }
        let g = secular(e)?;
        if g == 0.0 || g.signum() != a.1.signum() {
            break (e, g);
        }
        a = (e, g);
    };
    let energy = illinois(secular, a, b)?;

    let op = build_ss_operator(energy, l, sys, &grid)?;
    let lambda = op.kth_eigenvalue(n as usize)?;
    if lambda >= 0.0 {
        return Err(Error::NotBoundOnGrid {
            n,
            l,
            eigenvalue: lambda,
        });
    }
    finish_state(QuantumNumbers::new(n, l), energy, nu, grid, &op, lambda)
}

// Regula falsi with the Illinois halving on a sign-changing bracket.
fn illinois<F>(mut f: F, mut a: (f64, f64), mut b: (f64, f64)) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut side = 0i8;
    for _ in 0..200 {
        if a.1 == 0.0 {
            return Ok(a.0);
        }
        if b.1 == 0.0 || (b.0 - a.0).abs() <= 1e-13 * b.0.abs() {
            break;
        }
        let e = (a.0 * b.1 - b.0 * a.1) / (b.1 - a.1);
        if !(e > a.0.min(b.0) && e < a.0.max(b.0)) {
            break;
        }
        let g = f(e)?;
        if g.signum() == b.1.signum() {
            b = (e, g);
            if side == 1 {
                a.1 *= 0.5;
            }
            side = 1;
        } else {
            a = (e, g);
            if side == -1 {
                b.1 *= 0.5;
            }
            side = -1;
        }
    }
    Ok(if a.1.abs() < b.1.abs() { a.0 } else { b.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::coulomb_energy;
    use crate::quad::simpson_samples;

    #[test]
    fn scheme_selection() {
        assert_eq!(Scheme::Auto.resolve(0.0), Scheme::SqrtR);
        assert_eq!(Scheme::Auto.resolve(0.5), Scheme::Plain);
        assert_eq!(Scheme::Auto.resolve(2f64.sqrt()), Scheme::Plain);
        assert_eq!(Scheme::Auto.resolve(2.9), Scheme::SqrtR);
        assert_eq!(Scheme::Plain.resolve(0.0), Scheme::Plain);
        assert_eq!("sqrt-r".parse::<Scheme>().unwrap(), Scheme::SqrtR);
        assert!("cubic".parse::<Scheme>().is_err());
    }

    #[test]
    fn grid_layout() {
        let g = RadialGrid::new(Scheme::Plain, 10.0, 9).unwrap();
        assert_eq!(g.h, 1.0);
        assert_eq!(g.r[0], 1.0);
        assert_eq!(g.r[8], 9.0);
        let g = RadialGrid::new(Scheme::SqrtR, 10.0, 9).unwrap();
        assert!((g.r[0] - 0.5 * g.h).abs() < 1e-15);
        assert!((g.r[8] + g.h - 10.0).abs() < 1e-12);
        assert!(RadialGrid::new(Scheme::Auto, 10.0, 9).is_err());
        assert!(RadialGrid::new(Scheme::Plain, -1.0, 9).is_err());
    }

    #[test]
    fn coulomb_levels_on_default_grid() {
        let sys = System::reference(0.0);
        for big_n in 1..=4u32 {
            let st = solve_schrodinger_numeric(big_n - 1, 0, &sys, &FdOptions::default()).unwrap();
            let want = coulomb_energy(big_n - 1, 0, &sys);
            assert!(((st.state.energy - want) / want).abs() <= 1e-4, "N={big_n}: {}", st.state.energy);
        }
    }

    #[test]
    fn plain_scheme_is_second_order() {
        let sys = System::reference(0.0);
        let want = coulomb_energy(1, 0, &sys);
        let opts = FdOptions {
            r_max: Some(100.0),
            points: 2000,
            scheme: Scheme::Plain,
        };
        let e1 = solve_schrodinger_numeric(1, 0, &sys, &opts).unwrap().state.energy;
        let e2 = solve_schrodinger_numeric(1, 0, &sys, &opts.refined()).unwrap().state.energy;
        let ratio = (e1 - want) / (e2 - want);
        assert!((3.5..=4.5).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn states_have_expected_nodes_and_norm() {
        let sys = System::reference(0.01);
        for (n, l) in [(0, 0), (2, 0), (1, 2)] {
            let st = solve_schrodinger_numeric(n, l, &sys, &FdOptions::default()).unwrap();
            assert_eq!(st.nodes(), n as usize);
            let norm: f64 = st.psi.iter().map(|v| v * v).sum::<f64>() * st.grid.h;
            assert!((norm - 1.0).abs() < 1e-12);
            assert!(simpson_samples(&st.psi.iter().map(|v| v * v).collect::<Vec<_>>(), st.grid.h) > 0.99);
            assert!(st.psi.iter().find(|v| v.abs() > 1e-6).unwrap() > &0.0);
        }
    }

    #[test]
    fn ss_secular_function_decreases() {
        let sys = System::reference(0.01);
        let grid = RadialGrid::new(Scheme::Plain, 200.0, 2000).unwrap();
        let g: Vec<f64> = [-2.0, -1.0, -0.5, -0.1, -0.01]
            .iter()
            .map(|&e| ss_secular_value(e, 1, 1, &sys, &grid).unwrap())
            .collect();
        assert!(g.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn ss_critical_state_converges() {
        let sys = System::reference(0.01);
        let st = solve_ss_numeric(1, 0, &sys, &FdOptions::default()).unwrap();
        assert_eq!(st.grid.scheme, Scheme::SqrtR);
        assert!((st.state.energy + 0.50324).abs() < 2e-4, "{}", st.state.energy);
        assert_eq!(st.nodes(), 1);
    }

    #[test]
    fn ss_reduces_to_schrodinger_for_heavy_scale() {
        let sys = System::reference(0.005).with_m_tilde_scale(1e12);
        let opts = FdOptions::default();
        for (n, l) in [(0, 0), (1, 1)] {
            let ss = solve_ss_numeric(n, l, &sys, &opts).unwrap().state.energy;
            let nr = solve_schrodinger_numeric(n, l, &sys, &opts).unwrap().state.energy;
            assert!(((ss - nr) / nr).abs() <= 1e-8, "({n},{l}): {ss} vs {nr}");
        }
    }

    #[test]
    fn unbound_level_is_reported() {
        let sys = System::reference(0.3);
        assert!(matches!(
            solve_schrodinger_numeric(3, 0, &sys, &FdOptions::default()),
            Err(Error::NotBoundOnGrid { .. })
        ));
    }
}
