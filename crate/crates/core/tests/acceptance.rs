//! Acceptance gate: one PASS/FAIL line per criterion, details indented
//! underneath. Exits non-zero if any criterion fails.

use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use yukawa_ss::analytic::{
    analytic_node_count, coulomb_energy, norm_by_quadrature, nu_energy_residual,
    schrodinger_energy, schrodinger_energy_consistent, solve_ss_energy, ss_energy_residual,
    ss_ground_norm_beta, ss_norm_constant, BoundState, ResidualForm, SolveOptions,
};
use yukawa_ss::golden::{
    golden_table, percentage_error, percentage_error_interval, GoldenEntry, TableId,
    QUOTED_PERCENTAGES, SCREENINGS,
};
use yukawa_ss::model::System;
use yukawa_ss::numeric::{solve_schrodinger_numeric, solve_ss_numeric, FdOptions, NumericState};
use yukawa_ss::report::{NumericStatus, RowReport};
use yukawa_ss::specfun::{hyp2f1_terminating, jacobi_poly, pochhammer, JacobiParams};

struct Verdict {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, summary: impl Into<String>, details: Vec<String>) -> Self {
        Self {
            pass,
            summary: summary.into(),
            details,
        }
    }
}

struct Solved {
    golden: GoldenEntry,
    analytic: Result<BoundState, String>,
    numeric: Result<NumericState, String>,
    refined: Option<Result<f64, String>>,
}

impl Solved {
    fn row(&self) -> RowReport {
        RowReport {
            golden: self.golden,
            approx: self.analytic.as_ref().map(|s| -s.energy).map_err(Clone::clone),
            numeric: self.numeric.as_ref().map(|s| -s.state.energy).map_err(Clone::clone),
            numeric_refined: self.refined.clone(),
        }
    }
}

fn solve_table(id: TableId) -> Vec<Solved> {
    let fd = FdOptions::default();
    let numeric = |n, l, sys: &System, fd: &FdOptions| match id {
        TableId::Ss => solve_ss_numeric(n, l, sys, fd),
        TableId::Nr => solve_schrodinger_numeric(n, l, sys, fd),
    };
    golden_table(id)
        .unwrap()
        .entries
        .into_iter()
        .map(|g| {
            let sys = System::reference(g.a);
            let analytic = match id {
                TableId::Ss => solve_ss_energy(g.n, g.l, &sys, &SolveOptions::default()),
                TableId::Nr => schrodinger_energy(g.n, g.l, &sys),
            }
            .map_err(|e| e.to_string());
            let mut solved = Solved {
                golden: g,
                analytic,
                numeric: numeric(g.n, g.l, &sys, &fd).map_err(|e| e.to_string()),
                refined: None,
            };
            if solved.row().numeric_status() == NumericStatus::Mismatch {
                solved.refined = Some(
                    numeric(g.n, g.l, &sys, &fd.refined())
                        .map(|s| -s.state.energy)
                        .map_err(|e| e.to_string()),
                );
            }
            solved
        })
        .collect()
}

fn label(g: &GoldenEntry) -> String {
    format!("({},{}) a={}", g.n, g.l, g.a)
}

fn approx_column(rows: &[Solved], allowed_failures: usize) -> Verdict {
    let mut details = Vec::new();
    let mut failures = 0;
    for s in rows {
        let r = s.row();
        if !r.approx_ok() {
            failures += 1;
            details.push(format!(
                "{}: printed {} computed {:?}",
                label(&s.golden),
                s.golden.approx.text,
                r.approx
            ));
        }
    }
    let worst = rows
        .iter()
        .filter_map(|s| s.row().approx_deviation())
        .fold(0.0f64, |m, d| m.max(d.abs()));
    Verdict::new(
        failures <= allowed_failures,
        format!(
            "{}/{} entries within 5e-4 (max |dev| {worst:.2e}, allowed failures {allowed_failures})",
            rows.len() - failures,
            rows.len()
        ),
        details,
    )
}

fn criterion_1(t1: &[Solved]) -> Verdict {
    approx_column(t1, 2)
}

fn criterion_2(t2: &[Solved]) -> Verdict {
    let mut v = approx_column(t2, 0);
    let mut broken = 0;
    let mut pairs = 0;
    for &a in &SCREENINGS {
        let sys = System::reference(a);
        for total in 0..=7u32 {
            let energies: Vec<f64> = (0..=total)
                .map(|l| schrodinger_energy(total - l, l, &sys).unwrap().energy)
                .collect();
            pairs += energies.len() - 1;
            if energies.windows(2).any(|w| w[0] != w[1]) {
                broken += 1;
                v.details.push(format!("degeneracy broken at n+l={total}, a={a}"));
            }
        }
    }
    v.pass &= broken == 0;
    v.summary = format!("{}; degeneracy exact over {pairs} pairs", v.summary);
    v
}

fn criterion_3() -> Verdict {
    let t1 = golden_table(TableId::Ss).unwrap();
    let mut details = Vec::new();
    let mut matched = 0;
    for q in QUOTED_PERCENTAGES {
        let e = t1.get(q.n, q.l, q.a).unwrap();
        let p = percentage_error(e.approx.value, e.numeric.value);
        let (lo, hi) = percentage_error_interval(e);
        let tol = if 0.5 * (hi - lo) <= 0.02 { 0.02 } else { 0.1 };
        let ok = (p - q.percent).abs() <= tol;
        matched += ok as usize;
        details.push(format!(
            "{} ({},{}) a={}: quoted {}% recomputed {p:.4}% (rounding range [{lo:.4}, {hi:.4}], tol {tol})",
            if ok { "ok  " } else { "MISS" },
            q.n,
            q.l,
            q.a,
            q.percent
        ));
    }
    Verdict::new(
        matched == QUOTED_PERCENTAGES.len(),
        format!("{matched}/{} quoted percentages reproduced from the printed columns", QUOTED_PERCENTAGES.len()),
        details,
    )
}

fn criterion_4() -> Verdict {
    let sys = System::reference(0.0);
    let fd = FdOptions::default();
    let mut details = Vec::new();
    let mut pass = true;
    for big_n in 1..=4u32 {
        let want = coulomb_energy(big_n - 1, 0, &sys);
        let coarse = solve_schrodinger_numeric(big_n - 1, 0, &sys, &fd).unwrap().state.energy;
        let fine = solve_schrodinger_numeric(big_n - 1, 0, &sys, &fd.refined())
            .unwrap()
            .state
            .energy;
        let err = ((coarse - want) / want).abs();
        let ratio = (coarse - want) / (fine - want);
        let ok = err <= 1e-4 && (3.5..=4.5).contains(&ratio);
        pass &= ok;
        details.push(format!(
            "N={big_n}: E={coarse:.9} exact={want:.9} rel.err={err:.2e} halving ratio={ratio:.3}"
        ));
    }
    Verdict::new(pass, "Coulomb levels N<=4 within 1e-4, error ratio under halving in [3.5, 4.5]", details)
}

fn criterion_5(t1: &[Solved], t2: &[Solved]) -> Verdict {
    let mut details = Vec::new();
    let mut pass = true;
    let mut within = 0;
    let mut converged = 0;
    let mut considered = 0;
    for (name, rows) in [("table 1", t1), ("table 2", t2)] {
        for s in rows.iter().filter(|s| s.golden.n <= 4) {
            considered += 1;
            let r = s.row();
            match r.numeric_status() {
                NumericStatus::Match => within += 1,
                NumericStatus::ConvergedMismatch => {
                    converged += 1;
                    details.push(format!(
                        "{name} {}: printed {} computed {:.5} ({:+.1}%), grid-halving change {:.1e}",
                        label(&s.golden),
                        s.golden.numeric.text,
                        r.numeric.as_ref().unwrap(),
                        100.0 * r.numeric_relative_deviation().unwrap(),
                        r.grid_change().unwrap()
                    ));
                }
                other => {
                    pass = false;
                    details.push(format!("{name} {}: {other:?} {:?}", label(&s.golden), r.numeric));
                }
            }
        }
    }
    Verdict::new(
        pass,
        format!(
            "{within}/{considered} entries (n<=4) within 5%; {converged} converged mismatches reported"
        ),
        details,
    )
}

fn criterion_6(t1: &[Solved]) -> Verdict {
    let mut details = Vec::new();
    let mut worst_analytic = 0.0f64;
    let mut worst_numeric = 0.0f64;
    for s in t1 {
        let g = s.golden;
        let sys = System::reference(g.a).with_m_tilde_scale(1e9);
        let ss = solve_ss_energy(g.n, g.l, &sys, &SolveOptions::default()).unwrap().energy;
        let hulthen = schrodinger_energy_consistent(g.n, g.l, &sys).unwrap();
        worst_analytic = worst_analytic.max(((ss - hulthen) / hulthen).abs());

        let fd = FdOptions::default();
        let ssn = solve_ss_numeric(g.n, g.l, &sys, &fd).unwrap().state.energy;
        let nr = solve_schrodinger_numeric(g.n, g.l, &sys, &fd).unwrap().state.energy;
        let rel = ((ssn - nr) / nr).abs();
        if rel > 1e-8 {
            details.push(format!("{}: numeric SS {ssn} vs Schrödinger {nr}", label(&g)));
        }
        worst_numeric = worst_numeric.max(rel);
    }
    Verdict::new(
        worst_analytic <= 1e-6 && worst_numeric <= 1e-8,
        format!(
            "m~ x 1e9: analytic vs closed form max rel {worst_analytic:.2e} (<= 1e-6), numeric SS vs Schrödinger max rel {worst_numeric:.2e} (<= 1e-8)"
        ),
        details,
    )
}

fn criterion_7(t1: &[Solved], t2: &[Solved]) -> Verdict {
    let mut details = Vec::new();
    let mut worst_norm = 0.0f64;
    for s in t1.iter().chain(t2) {
        let st = s.analytic.as_ref().unwrap();
        let norm = norm_by_quadrature(st, &System::reference(s.golden.a)).unwrap();
        if (norm - 1.0).abs() > 1e-6 {
            details.push(format!("{}: norm {norm}", label(&s.golden)));
        }
        worst_norm = worst_norm.max((norm - 1.0).abs());
    }
    let mut worst_beta = 0.0f64;
    for &a in &SCREENINGS {
        let sys = System::reference(a);
        for l in 0..=3 {
            let st = solve_ss_energy(0, l, &sys, &SolveOptions::default()).unwrap();
            let eps = st.exponent.unwrap();
            let general = ss_norm_constant(0, st.nu, eps, a).unwrap();
            let beta = ss_ground_norm_beta(st.nu, eps, a).unwrap();
            worst_beta = worst_beta.max((general / beta - 1.0).abs());
        }
    }
    Verdict::new(
        worst_norm <= 1e-6 && worst_beta <= 1e-10,
        format!(
            "{} states: max |norm-1| {worst_norm:.2e} (<= 1e-6); n=0 Beta form max rel {worst_beta:.2e} (<= 1e-10)",
            t1.len() + t2.len()
        ),
        details,
    )
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let samples = 2000;
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for _ in 0..samples {
        let n = rng.gen_range(0..=10u32);
        let alpha = rng.gen_range(-0.9..5.0);
        let beta = rng.gen_range(-0.9..5.0);
        let s: f64 = rng.gen_range(0.0..=1.0);
        let direct = jacobi_poly(JacobiParams::new(n, alpha, beta).unwrap(), 1.0 - 2.0 * s);
        let series = pochhammer(alpha + 1.0, n) / pochhammer(1.0, n)
            * hyp2f1_terminating(n, n as f64 + alpha + beta + 1.0, alpha + 1.0, s).unwrap();
        let rel = (direct - series).abs() / direct.abs().max(series.abs()).max(1.0);
        if rel > 1e-10 && details.len() < 10 {
            details.push(format!("n={n} alpha={alpha} beta={beta} s={s}: {direct} vs {series}"));
        }
        worst = worst.max(rel);
    }
    Verdict::new(
        worst <= 1e-10,
        format!("{samples} random samples, max relative difference {worst:.2e} (<= 1e-10)"),
        details,
    )
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_9(t1: &[Solved]) -> Verdict {
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for s in t1 {
        let g = s.golden;
        let sys = System::reference(g.a);
        let direct = s.analytic.as_ref().unwrap().energy;
        let generic = |e: f64| nu_energy_residual(e, g.n, g.l, &sys).unwrap();
        let (mut lo, mut hi) = (direct * (1.0 + 1e-6), direct * (1.0 - 1e-6));
        while generic(lo).signum() == generic(hi).signum() {
            lo *= 1.1;
            hi /= 1.1;
        }
        let root = bisect(generic, lo, hi);
        let diff = (root - direct).abs();
        let f_direct = ss_energy_residual(root, g.n, g.l, &sys, ResidualForm::Consistent).unwrap();
        if diff > 1e-10 {
            details.push(format!("{}: direct {direct} generic {root}", label(&g)));
        }
        worst = worst.max(diff);
        if f_direct.abs() > 1e-9 {
            details.push(format!("{}: direct residual {f_direct:e} at generic root", label(&g)));
        }
    }
    Verdict::new(
        worst <= 1e-10,
        format!("{} states: max |E_generic - E_direct| {worst:.2e} (<= 1e-10 absolute)", t1.len()),
        details,
    )
}

fn criterion_10(t1: &[Solved], t2: &[Solved]) -> Verdict {
    let mut checked = 0;
    let mut details = Vec::new();
    for s in t1.iter().chain(t2) {
        let sys = System::reference(s.golden.a);
        let n = s.golden.n as usize;
        let analytic = analytic_node_count(s.analytic.as_ref().unwrap(), &sys).unwrap();
        if analytic != n {
            details.push(format!("{} analytic: {analytic} nodes", label(&s.golden)));
        }
        match &s.numeric {
            Ok(st) if st.nodes() == n => {}
            Ok(st) => details.push(format!("{} numeric: {} nodes", label(&s.golden), st.nodes())),
            Err(e) => details.push(format!("{} numeric: {e}", label(&s.golden))),
        }
        checked += 2;
    }
    Verdict::new(
        details.is_empty(),
        format!("{checked} wavefunctions checked, {} with wrong node count", details.len()),
        details,
    )
}

fn main() -> ExitCode {
    let t1 = solve_table(TableId::Ss);
    let t2 = solve_table(TableId::Nr);

    let verdicts = [
        criterion_1(&t1),
        criterion_2(&t2),
        criterion_3(),
        criterion_4(),
        criterion_5(&t1, &t2),
        criterion_6(&t1),
        criterion_7(&t1, &t2),
        criterion_8(),
        criterion_9(&t1),
        criterion_10(&t1, &t2),
    ];
    let mut failed = 0;
    for (k, v) in verdicts.iter().enumerate() {
        println!(
            "criterion {:>2}: {} {}",
            k + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.summary
        );
        for d in &v.details {
            println!("    {d}");
        }
        failed += !v.pass as usize;
    }
    println!("acceptance: {} passed, {failed} failed", verdicts.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
