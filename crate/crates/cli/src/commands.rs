use std::io::{self, Write};

use anyhow::{bail, Context};

use yukawa_ss::analytic::{
    greene_aldrich_potential, wavefunction as psi_at, BoundState, Provenance, ResidualForm, SolveOptions,
};
use yukawa_ss::golden::{golden_table, TableId};
use yukawa_ss::model::{yukawa_potential, PhysicalParams, System};
use yukawa_ss::report::{
    format_sig, regenerate_table, solve as solve_state, Method, NumericStatus, SolveConfig, TableConfig,
    REPORT_HEADER,
};

use crate::{ComparisonFailure, DumpArgs, PotentialArgs, SolveArgs, TableArgs, WavefunctionArgs};

fn csv_writer() -> csv::Writer<io::StdoutLock<'static>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(io::stdout().lock())
}

pub fn solve(args: &SolveArgs) -> anyhow::Result<()> {
    let params = args.params.resolve(PhysicalParams::default())?;
    let sys = System::new(params)?;
    let cfg = args.solver.config();
    let sol = solve_state(args.method, args.n, args.l, &sys, &cfg)?;
    let st = &sol.state;

    let mut out = io::stdout().lock();
    let p = &sys.params;
    writeln!(out, "method={}", args.method)?;
    writeln!(out, "n={}\nl={}", args.n, args.l)?;
    writeln!(
        out,
        "m1={}\nm2={}\nV0={}\na={}\nhbar={}",
        p.m1, p.m2, p.v0, p.a, p.hbar
    )?;
    writeln!(out, "energy={}", format_sig(st.energy))?;
    writeln!(out, "binding_energy={}", format_sig(st.binding_energy()))?;
    writeln!(out, "nu={}", format_sig(st.nu))?;
    if let Some(x) = st.exponent {
        let key = match st.provenance {
            Provenance::AnalyticSs => "epsilon",
            _ => "lambda",
        };
        writeln!(out, "{key}={}", format_sig(x))?;
    }
    if let Some(c) = st.norm_constant {
        writeln!(out, "norm_constant={}", format_sig(c))?;
    }
    writeln!(out, "provenance={}", st.provenance)?;
    if let Some(g) = &sol.grid_state {
        writeln!(out, "scheme={}", g.grid.scheme)?;
        writeln!(out, "r_max={}", format_sig(g.grid.r_max))?;
        writeln!(out, "points={}", g.grid.len())?;
        writeln!(out, "nodes={}", g.nodes())?;
    }
    if args.method == Method::SsAnalytic && cfg.analytic.form == ResidualForm::Printed {
        let other = SolveOptions {
            form: ResidualForm::Consistent,
            ..cfg.analytic
        };
        let alt = solve_state(Method::SsAnalytic, args.n, args.l, &sys, &SolveConfig {
            analytic: other,
            ..cfg
        });
        match alt {
            Ok(s) if s.state.energy != st.energy => {
                writeln!(out, "energy_consistent_form={}", format_sig(s.state.energy))?;
            }
            Ok(_) => {}
            Err(e) => writeln!(out, "energy_consistent_form_error={e}")?,
        }
    }
    Ok(())
}

pub fn table(args: &TableArgs) -> anyhow::Result<()> {
    let id = TableId::from_number(args.which)?;
    if args.params.a.is_some() {
        eprintln!("note: --a is ignored; the table fixes the screening per column");
    }
    let base = args.params.resolve(PhysicalParams::default())?;
    let cfg = TableConfig {
        base,
        solve: args.solver.config(),
    };
    let report = regenerate_table(id, &cfg)?;

    let mut w = csv_writer();
    w.write_record(REPORT_HEADER)?;
    for record in report.records() {
        w.write_record(&record)?;
    }
    w.flush()?;

    let count = |s: NumericStatus| report.rows.iter().filter(|r| r.numeric_status() == s).count();
    let approx_ok = report.rows.iter().filter(|r| r.approx_ok()).count();
    eprintln!(
        "{id}: approximation {approx_ok}/{} within tolerance; numerical {} within 5%, {} converged mismatches, {} unexplained, {} errors",
        report.rows.len(),
        count(NumericStatus::Match),
        count(NumericStatus::ConvergedMismatch),
        count(NumericStatus::Mismatch),
        count(NumericStatus::Error),
    );
    match report.failures() {
        0 => Ok(()),
        k => Err(ComparisonFailure(format!("{k} entries of {id} outside tolerance")).into()),
    }
}

pub fn wavefunction(args: &WavefunctionArgs) -> anyhow::Result<()> {
    let (approx, exact) = match args.method {
        Method::SsAnalytic | Method::SsNumeric => (Method::SsAnalytic, Method::SsNumeric),
        Method::NrAnalytic | Method::NrNumeric => (Method::NrAnalytic, Method::NrNumeric),
        Method::Coulomb => bail!("the coulomb method has no wavefunction output; use nr-analytic"),
    };
    let params = args.params.resolve(PhysicalParams::default())?;
    let sys = System::new(params)?;
    let cfg = args.solver.config();
    let analytic = solve_state(approx, args.n, args.l, &sys, &cfg)?.state;
    let numeric = solve_state(exact, args.n, args.l, &sys, &cfg)?
        .grid_state
        .context("numeric solver returned no grid")?;

    let psi_a = aligned_samples(&analytic, &sys, &numeric.grid.r)?;
    let mut w = csv_writer();
    w.write_record(["r", "psi_analytic", "psi_numeric"])?;
    w.write_record(["0", "0", "0"])?;
    for ((r, a), p) in numeric.grid.r.iter().zip(&psi_a).zip(&numeric.psi) {
        w.write_record([format_sig(*r), format_sig(*a), format_sig(*p)])?;
    }
    w.flush()?;
    Ok(())
}

// Samples with the sign chosen so that the first antinode is positive.
fn aligned_samples(state: &BoundState, sys: &System, r: &[f64]) -> anyhow::Result<Vec<f64>> {
    let mut v = r
        .iter()
        .map(|&x| psi_at(x, state, sys))
        .collect::<Result<Vec<_>, _>>()?;
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if v.iter().find(|x| x.abs() > 1e-8 * peak).is_some_and(|x| *x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(v)
}

pub fn potential(args: &PotentialArgs) -> anyhow::Result<()> {
    let params = args.params.resolve(PhysicalParams::default())?;
    if !(args.rmin > 0.0 && args.rmax > args.rmin) || args.points < 2 {
        bail!("need 0 < rmin < rmax and at least 2 points");
    }
    let mut w = csv_writer();
    w.write_record(["r", "V_yukawa", "V_greene_aldrich", "ratio"])?;
    let step = (args.rmax - args.rmin) / (args.points - 1) as f64;
    for i in 0..args.points {
        let r = args.rmin + step * i as f64;
        let vy = yukawa_potential(r, &params)?;
        let vg = greene_aldrich_potential(r, &params)?;
        w.write_record([format_sig(r), format_sig(vy), format_sig(vg), format_sig(vg / vy)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn dump_golden(args: &DumpArgs) -> anyhow::Result<()> {
    let table = golden_table(TableId::from_number(args.which)?)?;
    let mut w = csv_writer();
    w.write_record(["n", "l", "a", "approx", "numeric"])?;
    for e in &table.entries {
        w.write_record([
            e.n.to_string(),
            e.l.to_string(),
            e.a.to_string(),
            e.approx.text.to_string(),
            e.numeric.text.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
