//! Physical parameters, derived mass quantities and quantum numbers.
//!
//! Units are fm⁻¹ for masses, energies and the screening parameter, fm for
//! lengths; `hbar` defaults to 1 and is carried explicitly so every formula
//! keeps its literal form.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// Masses, Yukawa coupling and screening of the two-body system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub m1: f64,
    pub m2: f64,
    /// Coupling strength multiplying `exp(-a r)/r`.
    pub v0: f64,
    /// Screening parameter (fm⁻¹). `a = 0` is the pure Coulomb case.
    pub a: f64,
    pub hbar: f64,
}

impl PhysicalParams {
    pub fn new(m1: f64, m2: f64, v0: f64, a: f64, hbar: f64) -> Result<Self> {
        let p = Self {
            m1,
            m2,
            v0,
            a,
            hbar,
        };
        p.validate()?;
        Ok(p)
    }

    /// `m1 = m2 = 5 fm⁻¹`, `V0 = 1`, `hbar = 1` with the given screening.
    pub fn reference(a: f64) -> Self {
        Self {
            m1: 5.0,
            m2: 5.0,
            v0: 1.0,
            a,
            hbar: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &str, v: f64| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} (got {v})")))
            }
        };
        check(self.m1.is_finite() && self.m1 > 0.0, "m1 must be positive", self.m1)?;
        check(self.m2.is_finite() && self.m2 > 0.0, "m2 must be positive", self.m2)?;
        check(self.v0.is_finite() && self.v0 > 0.0, "V0 must be positive", self.v0)?;
        check(self.a.is_finite() && self.a >= 0.0, "a must be non-negative", self.a)?;
        check(
            self.hbar.is_finite() && self.hbar > 0.0,
            "hbar must be positive",
            self.hbar,
        )
    }

    pub fn with_screening(mut self, a: f64) -> Self {
        self.a = a;
        self
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::reference(0.01)
    }
}

/// Reduced mass `mu`, the auxiliary mass `eta` and the relativistic
/// correction scale `m_tilde = eta^3/mu^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedMasses {
    pub mu: f64,
    pub eta: f64,
    pub m_tilde: f64,
}

pub fn derive_masses(params: &PhysicalParams) -> Result<DerivedMasses> {
    params.validate()?;
    let prod = params.m1 * params.m2;
    let mu = prod / (params.m1 + params.m2);
    // prod - 3 mu^2 >= prod/4 for positive masses
    let denom = prod - 3.0 * mu * mu;
    let eta = mu * (prod / denom).cbrt();
    let m_tilde = prod * mu / denom;
    Ok(DerivedMasses { mu, eta, m_tilde })
}

/// Validated parameters together with their derived masses.
///
/// `m_tilde` can be rescaled to probe the nonrelativistic limit
/// (`m_tilde -> inf` switches off every `1/m_tilde` term).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct System {
    pub params: PhysicalParams,
    pub masses: DerivedMasses,
}

impl System {
    pub fn new(params: PhysicalParams) -> Result<Self> {
        let masses = derive_masses(&params)?;
        Ok(Self { params, masses })
    }

    /// The reference system `m1 = m2 = 5`, `V0 = 1`, `hbar = 1`.
    pub fn reference(a: f64) -> Self {
        Self::new(PhysicalParams::reference(a)).expect("reference parameters are valid")
    }

    pub fn with_m_tilde_scale(mut self, factor: f64) -> Self {
        self.masses.m_tilde *= factor;
        self
    }

    pub fn with_screening(self, a: f64) -> Result<Self> {
        let masses = self.masses;
        let params = self.params.with_screening(a);
        params.validate()?;
        Ok(Self { params, masses })
    }

    pub fn mu(&self) -> f64 {
        self.masses.mu
    }

    pub fn m_tilde(&self) -> f64 {
        self.masses.m_tilde
    }

    pub fn hbar2(&self) -> f64 {
        self.params.hbar * self.params.hbar
    }

    /// `mu V0^2 / (hbar^2 m_tilde)`: the strength of the attractive
    /// `1/r^2` term generated by `W^2/2m_tilde`.
    pub fn inverse_square_coupling(&self) -> f64 {
        self.mu() * self.params.v0 * self.params.v0 / (self.hbar2() * self.m_tilde())
    }

    /// Bohr-like length `hbar^2/(mu V0)`.
    pub fn bohr_radius(&self) -> f64 {
        self.hbar2() / (self.mu() * self.params.v0)
    }
}

/// Radial node count `n` and orbital angular momentum `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }

    /// `n + l + 1`, the only combination entering the Coulomb and
    /// nonrelativistic closed forms.
    pub fn principal(&self) -> u32 {
        self.n + self.l + 1
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.l)
    }
}

/// `nu = sqrt((l + 1/2)^2 - mu V0^2/(hbar^2 m_tilde))`.
pub fn nu_parameter(l: u32, system: &System) -> Result<f64> {
    let centrifugal = (l as f64 + 0.5).powi(2);
    let coupling = system.inverse_square_coupling();
    let disc = centrifugal - coupling;
    if disc < 0.0 {
        return Err(Error::SupercriticalCoupling {
            l,
            centrifugal,
            coupling,
        });
    }
    Ok(disc.sqrt())
}

/// `V(r) = -V0 exp(-a r)/r`.
pub fn yukawa_potential(r: f64, params: &PhysicalParams) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain {
            func: "yukawa_potential",
            detail: format!("r must be positive, got {r}"),
        });
    }
    Ok(-params.v0 * (-params.a * r).exp() / r)
}

/// A partial parameter set, as read from a `key=value` file or from flags.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamSet {
    pub m1: Option<f64>,
    pub m2: Option<f64>,
    pub v0: Option<f64>,
    pub a: Option<f64>,
    pub hbar: Option<f64>,
}

impl ParamSet {
    /// Parses `key=value` lines with keys `m1, m2, V0, a, hbar`; `#` starts
    /// a comment, blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut set = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::ParamFile {
                line: line_no,
                detail: format!("expected key=value, got {line:?}"),
            })?;
            let value: f64 = value.trim().parse().map_err(|_| Error::ParamFile {
                line: line_no,
                detail: format!("cannot parse {:?} as a number", value.trim()),
            })?;
            let slot = match key.trim() {
                "m1" => &mut set.m1,
                "m2" => &mut set.m2,
                "V0" => &mut set.v0,
                "a" => &mut set.a,
                "hbar" => &mut set.hbar,
                other => {
                    return Err(Error::ParamFile {
                        line: line_no,
                        detail: format!("unknown key {other:?}"),
                    })
                }
            };
            *slot = Some(value);
        }
        Ok(set)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::ParamFile {
            line: 0,
            detail: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    /// Values in `other` take precedence.
    pub fn overridden_by(self, other: ParamSet) -> Self {
        Self {
            m1: other.m1.or(self.m1),
            m2: other.m2.or(self.m2),
            v0: other.v0.or(self.v0),
            a: other.a.or(self.a),
            hbar: other.hbar.or(self.hbar),
        }
    }

    pub fn resolve(self, defaults: PhysicalParams) -> Result<PhysicalParams> {
        PhysicalParams::new(
            self.m1.unwrap_or(defaults.m1),
            self.m2.unwrap_or(defaults.m2),
            self.v0.unwrap_or(defaults.v0),
            self.a.unwrap_or(defaults.a),
            self.hbar.unwrap_or(defaults.hbar),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equal_masses() {
        let m = derive_masses(&PhysicalParams::reference(0.01)).unwrap();
        assert_eq!(m.mu, 2.5);
        assert!((m.m_tilde - 10.0).abs() < 1e-12);
        assert!((m.eta - 2.5 * 4f64.cbrt()).abs() < 1e-12);
        assert!((m.eta - 3.968503).abs() < 1e-6);
        // m_tilde = eta^3/mu^2
        assert!((m.eta.powi(3) / (m.mu * m.mu) - m.m_tilde).abs() < 1e-10);
    }

    #[test]
    fn nonpositive_mass_rejected() {
        assert!(matches!(
            derive_masses(&PhysicalParams {
                m1: 0.0,
                ..PhysicalParams::default()
            }),
            Err(Error::InvalidParameter(_))
        ));
        assert!(PhysicalParams::new(5.0, -1.0, 1.0, 0.01, 1.0).is_err());
        assert!(PhysicalParams::new(5.0, 5.0, 1.0, -0.01, 1.0).is_err());
    }

    #[test]
    fn nu_reference_values() {
        let sys = System::reference(0.01);
        assert_eq!(nu_parameter(0, &sys).unwrap(), 0.0);
        assert!((nu_parameter(1, &sys).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn nu_supercritical() {
        let sys = System::new(PhysicalParams {
            v0: 1.5,
            ..PhysicalParams::reference(0.01)
        })
        .unwrap();
        assert!(matches!(
            nu_parameter(0, &sys),
            Err(Error::SupercriticalCoupling { l: 0, .. })
        ));
        assert!(nu_parameter(1, &sys).is_ok());
    }

    #[test]
    fn yukawa_values() {
        let p = PhysicalParams::reference(0.01);
        assert!((yukawa_potential(1.0, &p).unwrap() + (-0.01f64).exp()).abs() < 1e-15);
        assert!((yukawa_potential(1.0, &p).unwrap() + 0.990050).abs() < 1e-6);
        assert!((yukawa_potential(100.0, &p).unwrap() + 0.0036788).abs() < 1e-7);
        let coulomb = p.with_screening(0.0);
        assert_eq!(yukawa_potential(4.0, &coulomb).unwrap(), -0.25);
        assert!(yukawa_potential(0.0, &p).is_err());
        assert!(yukawa_potential(-1.0, &p).is_err());
    }

    #[test]
    fn param_file() {
        let text = "# reference set\nm1 = 5\nm2=5 # equal\n\nV0=1\na=0.001\n";
        let set = ParamSet::parse(text).unwrap();
        assert_eq!(set.a, Some(0.001));
        assert_eq!(set.hbar, None);
        let flags = ParamSet {
            a: Some(0.01),
            ..Default::default()
        };
        let p = set.overridden_by(flags).resolve(PhysicalParams::default()).unwrap();
        assert_eq!(p.a, 0.01);
        assert_eq!(p.hbar, 1.0);
        assert!(matches!(
            ParamSet::parse("mass=3"),
            Err(Error::ParamFile { line: 1, .. })
        ));
        assert!(ParamSet::parse("a=abc").is_err());
        assert!(ParamSet::parse("a 3").is_err());
    }

    proptest! {
        #[test]
        fn masses_positive_and_symmetric(m1 in 1e-3f64..1e3, m2 in 1e-3f64..1e3) {
            let p = PhysicalParams::new(m1, m2, 1.0, 0.01, 1.0).unwrap();
            let q = PhysicalParams::new(m2, m1, 1.0, 0.01, 1.0).unwrap();
            let a = derive_masses(&p).unwrap();
            let b = derive_masses(&q).unwrap();
            prop_assert!(m1 * m2 - 3.0 * a.mu * a.mu >= m1 * m2 / 4.0 * (1.0 - 1e-12));
            prop_assert!(a.m_tilde.is_finite() && a.m_tilde > 0.0);
            prop_assert!(a.mu > 0.0 && a.mu <= m1.min(m2));
            prop_assert!((a.mu - b.mu).abs() <= 1e-12 * a.mu);
            prop_assert!((a.m_tilde - b.m_tilde).abs() <= 1e-12 * a.m_tilde);
        }

        #[test]
        fn nu_increasing_in_l(v0 in 0.01f64..1.0, l in 0u32..20) {
            let sys = System::new(PhysicalParams { v0, ..PhysicalParams::reference(0.01) }).unwrap();
            let lo = nu_parameter(l, &sys).unwrap();
            let hi = nu_parameter(l + 1, &sys).unwrap();
            prop_assert!(hi > lo);
            prop_assert!(lo >= 0.0 && lo <= l as f64 + 0.5);
        }

        #[test]
        fn yukawa_tends_to_coulomb(r in 0.01f64..100.0) {
            let p = PhysicalParams::reference(1e-12);
            let v = yukawa_potential(r, &p).unwrap();
            prop_assert!((v + 1.0 / r).abs() <= 1e-10 / r);
            prop_assert!(v < 0.0);
        }
    }

    #[test]
    fn nu_weak_coupling_limit() {
        let sys = System::new(PhysicalParams {
            v0: 1e-8,
            ..PhysicalParams::reference(0.01)
        })
        .unwrap();
        for l in 0..5 {
            assert!((nu_parameter(l, &sys).unwrap() - (l as f64 + 0.5)).abs() < 1e-12);
        }
    }
}
