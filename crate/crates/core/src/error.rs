use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error(
        "supercritical coupling at l = {l}: (l+1/2)^2 = {centrifugal} < mu V0^2/(hbar^2 m~) = {coupling}; nu would be imaginary"
    )]
    SupercriticalCoupling {
        l: u32,
        centrifugal: f64,
        coupling: f64,
    },

    #[error("pole in 2F1: c = {c} is a non-positive integer reached by the terminating sum")]
    HypergeometricPole { c: f64 },

    #[error("unphysical NU template: {0}")]
    UnphysicalTemplate(String),

    #[error("invalid Jacobi parameters: alpha = {alpha}, beta = {beta} (both must exceed -1)")]
    InvalidJacobi { alpha: f64, beta: f64 },

    #[error("non-normalizable wavefunction factors: c12 = {c12}, c13 = {c13} (both must be positive)")]
    NonNormalizable { c12: f64, c13: f64 },

    #[error("energy {energy} lies outside the physical branch: {detail}")]
    OutsidePhysicalBranch { energy: f64, detail: String },

    #[error("screening a = 0 makes the NU coefficients singular; use coulomb_energy instead")]
    CoulombLimit,

    #[error("no bound state for n = {n}, l = {l}: {detail}")]
    NoBoundState { n: u32, l: u32, detail: String },

    #[error("state n = {n}, l = {l} is not bound on this grid (eigenvalue {eigenvalue} >= 0); try a larger --rmax")]
    NotBoundOnGrid { n: u32, l: u32, eigenvalue: f64 },

    #[error("node count mismatch for n = {n}, l = {l}: wavefunction has {found} interior sign changes")]
    NodeMismatch { n: u32, l: u32, found: usize },

    #[error("eigenvalue index {k} out of range 1..={size}")]
    IndexOutOfRange { k: usize, size: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parameter file line {line}: {detail}")]
    ParamFile { line: usize, detail: String },
}
