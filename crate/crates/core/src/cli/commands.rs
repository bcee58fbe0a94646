//! The four experiment commands. Each validates its whole input before
//! solving anything, then returns a [`Table`].

use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{BathSection, ExperimentConfig};
use super::output::{join, Cell, Table};
use crate::chain::ChainSpec;
use crate::classical::{
    conductivity_gap, linearized_a2, rectification_experiment, LinearizedSetup,
};
use crate::error::{Error, Result};
use crate::lindblad::{magnetization_profile, solve_chain, ChainSolution, DissipatorSpec};
use crate::symmetry::{
    dissipator_covariance_error, hamiltonian_invariance_error, inversion_unitary, mirror_check,
    one_way_street_scan, parity_report, ScanFamily, CONJUGATION_TOL, VANISHING_CURRENT,
};

/// Tolerance reported for the exact operator identities.
pub const OPERATOR_IDENTITY_TOL: f64 = 1e-12;
/// Tolerance reported for current parities and the mirror check.
pub const CURRENT_PARITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Steady state, magnetization and currents of one chain.
    Steady,
    /// Bath-inversion symmetry checks and the one-way-street scan.
    Symmetry,
    /// Steady-state currents over a Cartesian parameter grid.
    Sweep,
    /// Graded classical heat-conduction chain, forward and reversed.
    Classical,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Steady => "steady",
            Command::Symmetry => "symmetry",
            Command::Sweep => "sweep",
            Command::Classical => "classical",
        }
    }
}

/// Why a command did not produce a table.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Invalid input, detected before any solve.
    Config(Error),
    /// A solve or check failed.
    Solver(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Solver(_) => 1,
        }
    }

    pub fn error(&self) -> &Error {
        match self {
            Failure::Config(e) | Failure::Solver(e) => e,
        }
    }
}

/// A finished command: its table, the resolved inputs for the output
/// header, and how many checks failed (symmetry only).
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    pub resolved: Value,
    pub failed_checks: usize,
}

fn config<T>(r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(Failure::Config)
}

fn solver<T>(r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(Failure::Solver)
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn execute(command: Command, cfg: &ExperimentConfig) -> std::result::Result<Report, Failure> {
    match command {
        Command::Steady => steady(cfg),
        Command::Symmetry => symmetry(cfg),
        Command::Sweep => sweep(cfg),
        Command::Classical => classical(cfg),
    }
}

fn quantum_inputs(cfg: &ExperimentConfig) -> Result<(ChainSpec, DissipatorSpec)> {
    let chain = cfg.chain_spec()?;
    let baths = cfg.dissipator()?;
    cfg.solver
        .config
        .resolve(cfg.solver.method, chain.n_sites)?;
    Ok((chain, baths))
}

fn steady(cfg: &ExperimentConfig) -> std::result::Result<Report, Failure> {
    let (chain, baths) = config(quantum_inputs(cfg))?;
    let start = Instant::now();
    let sol = solver(solve_chain(
        &chain,
        &baths,
        cfg.solver.method,
        &cfg.solver.config,
    ))?;
    let ms = elapsed_ms(start);
    let mags = solver(magnetization_profile(&sol.steady.rho))?;
    let validity = solver(sol.steady.rho.measure())?;

    let mut t = Table::new(["observable", "index", "value"]);
    let mut row = |name: &str, idx: Option<usize>, v: Cell| {
        t.push(vec![name.into(), idx.map_or(Cell::Empty, Cell::from), v])
    };
    for (j, m) in mags.iter().enumerate() {
        row("sigma_z", Some(j + 1), (*m).into());
    }
    let c = &sol.currents;
    for (b, v) in c.spin.iter().enumerate() {
        row("spin_current", Some(b + 1), (*v).into());
    }
    for (j, v) in c.energy_xxz.iter().enumerate() {
        row("energy_current_xxz", Some(j + 2), (*v).into());
    }
    for (j, v) in c.energy_total.iter().enumerate() {
        row("energy_current_total", Some(j + 2), (*v).into());
    }
    row("spin_current_spread", None, c.spin_spread.into());
    row(
        "energy_current_xxz_spread",
        None,
        c.energy_xxz_spread.into(),
    );
    row(
        "energy_current_total_spread",
        None,
        c.energy_total_spread.into(),
    );
    row("residual", None, sol.steady.residual.into());
    row("trace_error", None, validity.trace_error.into());
    row("hermiticity_error", None, validity.hermiticity_error.into());
    row("min_eigenvalue", None, validity.min_eigenvalue.into());
    row("method", None, sol.steady.method.to_string().into());
    row("route", None, route_name(&sol).into());
    if sol.steady.steps > 0 {
        row("steps", None, sol.steady.steps.into());
    }
    if cfg.output.timing {
        row("wall_ms", None, ms.into());
    }
    Ok(Report {
        table: t,
        resolved: json!({ "chain": chain, "baths": baths }),
        failed_checks: 0,
    })
}

fn route_name(sol: &ChainSolution) -> String {
    serde_json::to_value(sol.steady.route)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

struct GridPoint {
    assignment: Vec<(String, f64)>,
    chain: ChainSpec,
    baths: DissipatorSpec,
}

fn bath_columns(baths: &DissipatorSpec) -> [Cell; 6] {
    match *baths {
        DissipatorSpec::TargetZ {
            gamma,
            f_left,
            f_right,
        } => [
            "target_z".into(),
            gamma.into(),
            f_left.into(),
            f_right.into(),
            Cell::Empty,
            Cell::Empty,
        ],
        DissipatorSpec::TwistedXy {
            k, k_prime, rate, ..
        } => [
            "twisted_xy".into(),
            rate.into(),
            Cell::Empty,
            Cell::Empty,
            k.into(),
            k_prime.into(),
        ],
    }
}

fn sweep(cfg: &ExperimentConfig) -> std::result::Result<Report, Failure> {
    let points = config(cfg.sweep_points())?;
    let grid = points
        .into_iter()
        .map(|assignment| {
            let mut c = cfg.clone();
            for (name, v) in &assignment {
                c = c.with_parameter(name, *v)?;
            }
            let (chain, baths) = quantum_inputs(&c)
                .map_err(|e| Error::Config(format!("grid point {assignment:?}: {e}")))?;
            Ok(GridPoint {
                assignment,
                chain,
                baths,
            })
        })
        .collect::<Result<Vec<_>>>();
    let grid = config(grid)?;

    let method = cfg.solver.method;
    let scfg = &cfg.solver.config;
    let solved = grid
        .par_iter()
        .map(|p| {
            let start = Instant::now();
            let sol = solve_chain(&p.chain, &p.baths, method, scfg)
                .map_err(|e| Error::NoConvergence(format!("grid point {:?}: {e}", p.assignment)));
            let sol = match sol {
                Ok(s) => s,
                Err(e) => return Err(e),
            };
            let mags = magnetization_profile(&sol.steady.rho)?;
            Ok((sol, mags, elapsed_ms(start)))
        })
        .collect::<Result<Vec<_>>>();
    let solved = solver(solved)?;

    let mut columns: Vec<String> = cfg.sweep.axes.iter().map(|a| a.name.clone()).collect();
    columns.extend(
        [
            "n_sites",
            "alpha",
            "delta",
            "b_field",
            "bath",
            "rate",
            "f_left",
            "f_right",
            "k",
            "k_prime",
            "spin_current",
            "energy_current_xxz",
            "energy_current_total",
            "sigma_z_first",
            "sigma_z_last",
            "spin_current_spread",
            "energy_current_xxz_spread",
            "energy_current_total_spread",
            "residual",
            "method",
            "route",
            "wall_ms",
        ]
        .map(String::from),
    );
    let mut t = Table::new(columns);
    for (p, (sol, mags, ms)) in grid.iter().zip(solved) {
        let c = &sol.currents;
        let mut row: Vec<Cell> = p.assignment.iter().map(|(_, v)| (*v).into()).collect();
        row.extend([
            p.chain.n_sites.into(),
            p.chain.alpha.into(),
            join(&p.chain.delta),
            join(&p.chain.b_field),
        ]);
        row.extend(bath_columns(&p.baths));
        row.extend([
            c.spin_current().into(),
            c.energy_xxz_current().into(),
            c.energy_total_current().into(),
            mags.first().copied().into(),
            mags.last().copied().into(),
            c.spin_spread.into(),
            c.energy_xxz_spread.into(),
            c.energy_total_spread.into(),
            sol.steady.residual.into(),
            sol.steady.method.to_string().into(),
            route_name(&sol).into(),
            ms.into(),
        ]);
        t.push(row);
    }
    if !cfg.output.timing {
        t.drop_column("wall_ms");
    }
    Ok(Report {
        table: t,
        resolved: json!({
            "grid": grid.iter().map(|p| json!({"chain": p.chain, "baths": p.baths})).collect::<Vec<_>>(),
        }),
        failed_checks: 0,
    })
}

fn symmetry(cfg: &ExperimentConfig) -> std::result::Result<Report, Failure> {
    let (chain, baths) = config(quantum_inputs(cfg))?;
    if !chain.field_is_zero() {
        return Err(Failure::Config(Error::Config(
            "symmetry checks need B = 0: a longitudinal field breaks the bath-inversion covariance"
                .into(),
        )));
    }
    if chain.n_sites < 3 {
        return Err(Failure::Config(Error::Config(
            "symmetry checks need n_sites >= 3 for the energy current".into(),
        )));
    }
    let transform = config(inversion_unitary(&baths, chain.n_sites))?;
    let drives = &cfg.symmetry.drives;
    if drives.is_empty() {
        return Err(Failure::Config(Error::Config(
            "symmetry.drives is empty".into(),
        )));
    }
    let family = match config(cfg.bath())? {
        BathSection::TargetZ { gamma, .. } => ScanFamily::TargetZ { gamma: *gamma },
        BathSection::TwistedXy { rate, .. } => ScanFamily::TwistedXy { rate: *rate },
    };
    for &d in drives {
        config(family.baths(d).validate())?;
    }

    let (method, scfg) = (cfg.solver.method, &cfg.solver.config);
    let h_err = solver(hamiltonian_invariance_error(&chain, &transform))?;
    let d_err = solver(dissipator_covariance_error(&baths, chain.n_sites))?;
    let conj = solver(crate::symmetry::check_conjugation_identity(
        &chain, &baths, method, scfg,
    ))?;
    let parity = solver(parity_report(&chain, &baths, method, scfg))?;
    let mirror = solver(mirror_check(&chain, &baths, method, scfg))?;
    let scan = solver(one_way_street_scan(&chain, family, drives, method, scfg))?;

    let mut t = Table::new(["check", "drive", "value", "reference", "tolerance", "pass"]);
    let mut failed = 0;
    let mut check = |name: &str,
                     drive: Option<f64>,
                     value: f64,
                     reference: Option<f64>,
                     tol: Option<f64>,
                     pass: bool| {
        if !pass {
            failed += 1;
        }
        t.push(vec![
            name.into(),
            drive.into(),
            value.into(),
            reference.into(),
            tol.into(),
            pass.into(),
        ]);
    };
    check(
        "hamiltonian_invariance",
        None,
        h_err,
        None,
        Some(OPERATOR_IDENTITY_TOL),
        h_err <= OPERATOR_IDENTITY_TOL,
    );
    check(
        "dissipator_covariance",
        None,
        d_err,
        None,
        Some(OPERATOR_IDENTITY_TOL),
        d_err <= OPERATOR_IDENTITY_TOL,
    );
    check(
        "conjugation_identity",
        None,
        conj.max_error,
        None,
        Some(CONJUGATION_TOL),
        conj.pass,
    );
    check(
        "energy_current_xxz_even",
        None,
        parity.f_even_err,
        None,
        Some(CURRENT_PARITY_TOL),
        parity.f_even_err <= CURRENT_PARITY_TOL,
    );
    check(
        "spin_current_odd",
        None,
        parity.j_odd_err,
        None,
        Some(CURRENT_PARITY_TOL),
        parity.j_odd_err <= CURRENT_PARITY_TOL,
    );
    check(
        "mirror_consistency",
        None,
        mirror,
        None,
        Some(CURRENT_PARITY_TOL),
        mirror <= CURRENT_PARITY_TOL,
    );
    for r in &scan.rows {
        check(
            "one_way_street_row",
            Some(r.drive),
            r.forward,
            Some(r.reverse),
            Some(VANISHING_CURRENT),
            r.same_direction,
        );
    }
    let sign = scan.common_sign.map_or(0.0, f64::from);
    check("one_way_street", None, sign, None, None, scan.one_way);

    Ok(Report {
        table: t,
        resolved: json!({ "chain": chain, "baths": baths, "scan_family": family }),
        failed_checks: failed,
    })
}

fn classical(cfg: &ExperimentConfig) -> std::result::Result<Report, Failure> {
    let section = config(cfg.classical_section())?;
    let specs = config(section.specs())?;
    let results = specs
        .par_iter()
        .map(|(_, spec)| rectification_experiment(spec))
        .collect::<Result<Vec<_>>>();
    let results = solver(results)?;

    let mut t = Table::new([
        "eps",
        "t_left",
        "t_right",
        "alpha_exp",
        "n_sites",
        "flux_forward",
        "flux_reverse",
        "magnitude_gap",
        "kappa_forward",
        "kappa_reverse",
        "inverse_kappa_gap",
        "predicted_inverse_kappa_gap",
        "profile_mismatch",
        "profile_forward",
        "profile_reverse",
    ]);
    for ((eps, spec), r) in specs.iter().zip(&results) {
        let predicted = match (eps, &section.linearized, spec.c.as_slice()) {
            (Some(eps), Some(lin), &[c1, c2, c3]) => {
                let c = [c1, c2, c3];
                let setup = LinearizedSetup {
                    t_base: lin.t_base,
                    a: vec![
                        lin.a_left,
                        linearized_a2(c, lin.a_left, lin.a_right),
                        lin.a_right,
                    ],
                    eps: *eps,
                };
                Some(conductivity_gap(&setup, c, spec.alpha_exp))
            }
            _ => None,
        };
        t.push(vec![
            (*eps).into(),
            spec.t_left.into(),
            spec.t_right.into(),
            spec.alpha_exp.into(),
            spec.n_sites().into(),
            r.flux_forward.into(),
            r.flux_reverse.into(),
            r.magnitude_gap.into(),
            r.kappa_forward.into(),
            r.kappa_reverse.into(),
            r.inverse_kappa_gap.into(),
            predicted.into(),
            r.profile_mismatch.into(),
            join(&r.profile_forward),
            join(&r.profile_reverse),
        ]);
    }
    Ok(Report {
        table: t,
        resolved: json!({ "chains": specs.iter().map(|(_, s)| s).collect::<Vec<_>>() }),
        failed_checks: 0,
    })
}
