//! Method dispatch, table regeneration and comparison against the
//! embedded golden data.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analytic::{
    coulomb_energy, schrodinger_energy, solve_ss_energy, BoundState, Provenance, SolveOptions,
};
use crate::error::{Error, Result};
use crate::golden::{golden_table, percentage_error, GoldenEntry, TableId};
use crate::model::{PhysicalParams, QuantumNumbers, System};
use crate::numeric::{solve_schrodinger_numeric, solve_ss_numeric, FdOptions, NumericState};

/// Approximation columns are printed to four decimals.
pub const APPROX_TOLERANCE: f64 = 5e-4;
/// Loose relative agreement expected of the numerical columns.
pub const NUMERIC_TOLERANCE: f64 = 0.05;
/// Relative change under grid halving below which a numeric value counts
/// as converged.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    SsAnalytic,
    SsNumeric,
    NrAnalytic,
    NrNumeric,
    Coulomb,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::SsAnalytic,
        Method::SsNumeric,
        Method::NrAnalytic,
        Method::NrNumeric,
        Method::Coulomb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::SsAnalytic => "ss-analytic",
            Method::SsNumeric => "ss-numeric",
            Method::NrAnalytic => "nr-analytic",
            Method::NrNumeric => "nr-numeric",
            Method::Coulomb => "coulomb",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveConfig {
    pub analytic: SolveOptions,
    pub fd: FdOptions,
}

/// A solved state; numeric methods also carry the sampled eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub state: BoundState,
    pub grid_state: Option<NumericState>,
}

pub fn solve(method: Method, n: u32, l: u32, sys: &System, cfg: &SolveConfig) -> Result<Solution> {
    let analytic = |state| Solution {
        state,
        grid_state: None,
    };
    let numeric = |g: NumericState| Solution {
        state: g.state,
        grid_state: Some(g),
    };
    match method {
        Method::SsAnalytic => solve_ss_energy(n, l, sys, &cfg.analytic).map(analytic),
        Method::NrAnalytic => schrodinger_energy(n, l, sys).map(analytic),
        Method::SsNumeric => solve_ss_numeric(n, l, sys, &cfg.fd).map(numeric),
        Method::NrNumeric => solve_schrodinger_numeric(n, l, sys, &cfg.fd).map(numeric),
        Method::Coulomb => Ok(analytic(BoundState {
            qn: QuantumNumbers::new(n, l),
            energy: coulomb_energy(n, l, sys),
            nu: l as f64 + 0.5,
            exponent: None,
            norm_constant: None,
            provenance: Provenance::AnalyticNr,
        })),
    }
}

/// Formats `x` with nine significant digits.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..9).contains(&exp) {
        format!("{:.*}", (8 - exp).max(0) as usize, x)
    } else {
        format!("{x:.8e}")
    }
}

type Outcome = std::result::Result<f64, String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumericStatus {
    Match,
    /// Outside the tolerance, but stable under grid halving.
    ConvergedMismatch,
    Mismatch,
    Error,
}

impl NumericStatus {
    pub fn label(&self) -> &'static str {
        match self {
            NumericStatus::Match => "ok",
            NumericStatus::ConvergedMismatch => "mismatch-converged",
            NumericStatus::Mismatch => "mismatch",
            NumericStatus::Error => "error",
        }
    }
}

/// One table cell pair: regenerated binding energies beside the printed ones.
#[derive(Debug, Clone, PartialEq)]
pub struct RowReport {
    pub golden: GoldenEntry,
    pub approx: Outcome,
    pub numeric: Outcome,
    /// Numeric value on the refined grid, computed only for mismatches.
    pub numeric_refined: Option<Outcome>,
}

impl RowReport {
    pub fn approx_deviation(&self) -> Option<f64> {
        self.approx.as_ref().ok().map(|b| b - self.golden.approx.value)
    }

    pub fn approx_ok(&self) -> bool {
        self.approx_deviation()
            .is_some_and(|d| d.abs() <= APPROX_TOLERANCE)
    }

    pub fn numeric_relative_deviation(&self) -> Option<f64> {
        let g = self.golden.numeric.value;
        self.numeric.as_ref().ok().map(|b| (b - g) / g)
    }

    /// Relative change of the numeric value under grid halving.
    pub fn grid_change(&self) -> Option<f64> {
        match (&self.numeric, &self.numeric_refined) {
            (Ok(b), Some(Ok(fine))) => Some(((fine - b) / fine).abs()),
            _ => None,
        }
    }

    pub fn numeric_status(&self) -> NumericStatus {
        match self.numeric_relative_deviation() {
            None => NumericStatus::Error,
            Some(d) if d.abs() <= NUMERIC_TOLERANCE => NumericStatus::Match,
            Some(_) if self.grid_change().is_some_and(|c| c <= CONVERGENCE_TOLERANCE) => {
                NumericStatus::ConvergedMismatch
            }
            Some(_) => NumericStatus::Mismatch,
        }
    }

    /// `|E_approx - E_num| / |E_num|` in percent from the regenerated columns.
    pub fn percent_error_computed(&self) -> Option<f64> {
        match (&self.approx, &self.numeric) {
            (Ok(a), Ok(n)) => Some(percentage_error(*a, *n)),
            _ => None,
        }
    }

    pub fn percent_error_golden(&self) -> f64 {
        percentage_error(self.golden.approx.value, self.golden.numeric.value)
    }

    pub fn passes(&self) -> bool {
        self.approx_ok()
            && matches!(
                self.numeric_status(),
                NumericStatus::Match | NumericStatus::ConvergedMismatch
            )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub id: TableId,
    pub rows: Vec<RowReport>,
}

pub const REPORT_HEADER: [&str; 15] = [
    "n",
    "l",
    "a",
    "golden_approx",
    "approx",
    "approx_dev",
    "approx_status",
    "golden_numeric",
    "numeric",
    "numeric_rel_dev",
    "grid_change",
    "numeric_status",
    "pct_err_golden",
    "pct_err_computed",
    "note",
];

impl TableReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.passes()).count()
    }

    /// Rows as CSV fields in [`REPORT_HEADER`] order.
    pub fn records(&self) -> Vec<Vec<String>> {
        let opt = |v: Option<f64>| v.map(format_sig).unwrap_or_default();
        self.rows
            .iter()
            .map(|r| {
                let note = [&r.approx, &r.numeric]
                    .iter()
                    .filter_map(|o| o.as_ref().err().cloned())
                    .collect::<Vec<_>>()
                    .join("; ");
                vec![
                    r.golden.n.to_string(),
                    r.golden.l.to_string(),
                    r.golden.a.to_string(),
                    r.golden.approx.text.to_string(),
                    opt(r.approx.as_ref().ok().copied()),
                    opt(r.approx_deviation()),
                    if r.approx_ok() { "ok" } else { "mismatch" }.to_string(),
                    r.golden.numeric.text.to_string(),
                    opt(r.numeric.as_ref().ok().copied()),
                    opt(r.numeric_relative_deviation()),
                    opt(r.grid_change()),
                    r.numeric_status().label().to_string(),
                    format_sig(r.percent_error_golden()),
                    opt(r.percent_error_computed()),
                    note,
                ]
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TableConfig {
    /// Masses, coupling and `hbar`; the screening is set per column.
    pub base: PhysicalParams,
    pub solve: SolveConfig,
}

fn binding(r: Result<f64>) -> Outcome {
    r.map(|e| -e).map_err(|e| e.to_string())
}

/// Regenerates both columns of a table, in parallel over entries.
///
/// Per-entry solver failures are recorded in the row, not propagated.
pub fn regenerate_table(id: TableId, cfg: &TableConfig) -> Result<TableReport> {
    let golden = golden_table(id)?;
    let rows = golden
        .entries
        .par_iter()
        .map(|g| regenerate_entry(id, g, cfg))
        .collect();
    Ok(TableReport { id, rows })
}

fn regenerate_entry(id: TableId, g: &GoldenEntry, cfg: &TableConfig) -> RowReport {
    let sys = match System::new(cfg.base.with_screening(g.a)) {
        Ok(s) => s,
        Err(e) => {
            let msg = e.to_string();
            return RowReport {
                golden: *g,
                approx: Err(msg.clone()),
                numeric: Err(msg),
                numeric_refined: None,
            };
        }
    };
    let (n, l) = (g.n, g.l);
    let (approx_method, numeric_method) = match id {
        TableId::Ss => (Method::SsAnalytic, Method::SsNumeric),
        TableId::Nr => (Method::NrAnalytic, Method::NrNumeric),
    };
    let run = |m: Method, c: &SolveConfig| solve(m, n, l, &sys, c).map(|s| s.state.energy);
    let mut row = RowReport {
        golden: *g,
        approx: binding(run(approx_method, &cfg.solve)),
        numeric: binding(run(numeric_method, &cfg.solve)),
        numeric_refined: None,
    };
    if row.numeric_status() == NumericStatus::Mismatch {
        let fine = SolveConfig {
            fd: cfg.solve.fd.refined(),
            ..cfg.solve
        };
        row.numeric_refined = Some(binding(run(numeric_method, &fine)));
    }
    row
}
