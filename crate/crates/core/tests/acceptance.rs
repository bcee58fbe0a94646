//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line.

use std::process::ExitCode;

use ness_chain::chain::{expand_graded, ChainSpec, GradedProfile};
use ness_chain::classical::{
    conductivity_gap, linearized_a2, rectification_experiment, ClassicalChainSpec, LinearizedSetup,
};
use ness_chain::lindblad::{
    chain_liouvillian, solve_chain, steady_state, ChainSolution, DissipatorSpec, Method,
    SolverConfig, TwistedLayout,
};
use ness_chain::symmetry::{check_conjugation_identity, invert_baths};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Every solve made by the suite, for the validity criterion.
#[derive(Default)]
struct Ledger {
    solutions: Vec<(String, ChainSolution)>,
}

impl Ledger {
    fn solve(
        &mut self,
        label: &str,
        spec: &ChainSpec,
        baths: &DissipatorSpec,
        method: Method,
    ) -> ChainSolution {
        let sol = solve_chain(spec, baths, method, &SolverConfig::default())
            .unwrap_or_else(|e| panic!("{label}: {e}"));
        self.solutions.push((label.to_string(), sol.clone()));
        sol
    }
}

fn graded(n: usize, delta_step: f64) -> ChainSpec {
    expand_graded(GradedProfile::new(1.0, delta_step), n).unwrap()
}

fn three_site(delta: f64, small_delta: f64, b: f64) -> ChainSpec {
    ChainSpec::new(
        3,
        1.0,
        vec![delta - small_delta, delta + small_delta],
        vec![b; 3],
    )
    .unwrap()
}

fn energy_total(ledger: &mut Ledger, f: f64, b: f64, small_delta: f64) -> f64 {
    let spec = three_site(1.0, small_delta, b);
    let sol = ledger.solve(
        "closed-form grid",
        &spec,
        &DissipatorSpec::target_z(1.0, f),
        Method::DenseNull,
    );
    sol.currents.energy_total_current().unwrap()
}

fn rel_err(x: f64, reference: f64) -> f64 {
    ((x - reference) / reference).abs()
}

fn criterion_1(ledger: &mut Ledger) -> Outcome {
    let (h1, h2, b, d) = (1e-3, 2e-3, 1e-3, 1e-3);
    let mut grid = |f: f64, bb: f64| energy_total(ledger, f, bb, d);
    // Odd part in f, first order in B; Richardson over the two step sizes.
    let odd = |g: &mut dyn FnMut(f64, f64) -> f64, h: f64| {
        let with_b = (g(h, b) - g(-h, b)) / (2.0 * h);
        let without = (g(h, 0.0) - g(-h, 0.0)) / (2.0 * h);
        (with_b - without) / b
    };
    let bf = (4.0 * odd(&mut grid, h1) - odd(&mut grid, h2)) / 3.0;
    let f0 = grid(0.0, 0.0);
    let mut even = |h: f64| (grid(h, 0.0) + grid(-h, 0.0) - 2.0 * f0) / (2.0 * h * h) / d;
    let ffd = (4.0 * even(h1) - even(h2)) / 3.0;

    let bf_ref = 912.0 / 1017.0;
    let ffd_ref = 2668704.0 / 7699707.0;
    let (e1, e2) = (rel_err(bf, bf_ref), rel_err(ffd, ffd_ref));
    let msg = format!(
        "B·f coefficient {bf:.9} vs {bf_ref:.9} (rel {e1:.1e}); f²δ coefficient {ffd:.9} vs {ffd_ref:.9} (rel {e2:.1e}); γ = 1"
    );
    if e1 <= 1e-3 && e2 <= 1e-3 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

const DRIVES: [f64; 3] = [0.2, 0.5, 0.8];

struct InversionPair {
    n: usize,
    f: f64,
    forward: ChainSolution,
    reverse: ChainSolution,
}

fn one_way_grid(ledger: &mut Ledger) -> Vec<InversionPair> {
    let mut out = Vec::new();
    for n in 3..=6 {
        let spec = graded(n, 0.5);
        for f in DRIVES {
            let baths = DissipatorSpec::target_z(1.0, f);
            let forward = ledger.solve(
                &format!("graded N={n} f={f}"),
                &spec,
                &baths,
                Method::DenseNull,
            );
            let reverse = ledger.solve(
                &format!("graded N={n} f={}", -f),
                &spec,
                &invert_baths(&baths).inverted,
                Method::DenseNull,
            );
            out.push(InversionPair {
                n,
                f,
                forward,
                reverse,
            });
        }
    }
    out
}

fn criterion_2(pairs: &[InversionPair]) -> Outcome {
    let mut worst_even: f64 = 0.0;
    let mut smallest = f64::INFINITY;
    for p in pairs {
        let a = p.forward.currents.energy_xxz_current().unwrap();
        let b = p.reverse.currents.energy_xxz_current().unwrap();
        worst_even = worst_even.max((a - b).abs());
        smallest = smallest.min(a.abs());
    }
    let msg = format!(
        "N=3..6, f∈{DRIVES:?}: max |F(f)-F(-f)| = {worst_even:.1e}, min |F| = {smallest:.3e}"
    );
    if worst_even <= 1e-9 && smallest > 1e-6 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_3(pairs: &[InversionPair]) -> Outcome {
    let mut worst = (0.0f64, 0, 0.0);
    let mut magnitude: f64 = 0.0;
    for p in pairs {
        let a = p.forward.currents.spin_current().unwrap();
        let b = p.reverse.currents.spin_current().unwrap();
        let err = (a + b).abs().max((a.abs() - b.abs()).abs());
        if err >= worst.0 {
            worst = (err, p.n, p.f);
        }
        magnitude = magnitude.max(a.abs());
    }
    let (err, n, f) = worst;
    let msg = format!("max |J(f)+J(-f)| = {err:.1e} at N={n}, f={f} (max |J| = {magnitude:.3e})");
    if err <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_4(ledger: &mut Ledger) -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 3..=5 {
        for delta in [0.5, 1.0, 2.0] {
            let spec = ChainSpec::homogeneous_chain(n, 1.0, delta, 0.0).unwrap();
            for f in [-0.8, -0.3, 0.2, 0.5, 0.8] {
                let sol = ledger.solve(
                    &format!("homogeneous N={n} Δ={delta} f={f}"),
                    &spec,
                    &DissipatorSpec::target_z(1.0, f),
                    Method::DenseNull,
                );
                for v in &sol.currents.energy_xxz {
                    worst = worst.max(v.abs());
                }
            }
        }
    }
    let msg = format!("N=3..5, Δ∈{{0.5,1,2}}, 5 drives: max |F_xxz| = {worst:.1e}");
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_5(ledger: &mut Ledger) -> Outcome {
    let (b, f) = (1.0, 0.5);
    let spec = graded(3, 0.5).with_uniform_field(b);
    let fwd = ledger.solve(
        "field N=3 f=0.5",
        &spec,
        &DissipatorSpec::target_z(1.0, f),
        Method::DenseNull,
    );
    let rev = ledger.solve(
        "field N=3 f=-0.5",
        &spec,
        &DissipatorSpec::target_z(1.0, -f),
        Method::DenseNull,
    );
    let diff =
        fwd.currents.energy_total_current().unwrap() - rev.currents.energy_total_current().unwrap();
    let expected = 2.0 * b * fwd.currents.spin_current().unwrap();
    let msg = format!(
        "F(f)-F(-f) = {diff:.9e}, 2B·J(f) = {expected:.9e}, mismatch {:.1e}",
        (diff - expected).abs()
    );
    if diff.abs() > 1e-6 && (diff - expected).abs() <= 1e-8 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_6() -> Outcome {
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 2..=4 {
        let spec = if n == 2 {
            ChainSpec::new(2, 1.0, vec![0.7], vec![0.0; 2]).unwrap()
        } else {
            graded(n, 0.5)
        };
        let cases = [
            DissipatorSpec::target_z(1.0, 0.5),
            DissipatorSpec::target_z(0.7, -0.3),
            DissipatorSpec::twisted_xy(0.4),
            DissipatorSpec::TwistedXy {
                k: -0.6,
                k_prime: 0.6,
                rate: 1.3,
                layout: TwistedLayout::WLeft,
            },
        ];
        for baths in cases {
            let report = check_conjugation_identity(&spec, &baths, Method::DenseNull, &cfg)
                .map_err(|e| format!("N={n}: {e}"))?;
            worst = worst.max(report.max_error);
            count += 1;
        }
    }
    let msg = format!("{count} cases (U_x and U_r, N=2..4): max entrywise error {worst:.1e}");
    if worst <= 1e-8 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_7(ledger: &Ledger) -> Outcome {
    let cfg = SolverConfig::default();
    let mut worst = [0.0f64; 4];
    let mut min_eig = f64::INFINITY;
    let mut failures = Vec::new();
    for (label, sol) in &ledger.solutions {
        let v = sol.steady.rho.measure().map_err(|e| e.to_string())?;
        let c = &sol.currents;
        let spread = c
            .spin_spread
            .max(c.energy_xxz_spread)
            .max(c.energy_total_spread);
        worst[0] = worst[0].max(v.trace_error);
        worst[1] = worst[1].max(v.hermiticity_error);
        worst[2] = worst[2].max(sol.steady.residual);
        worst[3] = worst[3].max(spread);
        min_eig = min_eig.min(v.min_eigenvalue);
        if !(v.holds(&cfg) && sol.steady.residual <= 1e-9 && spread <= 1e-9) {
            failures.push(label.clone());
        }
    }
    let msg = format!(
        "{} steady states: trace {:.1e}, hermiticity {:.1e}, min eig {:.1e}, residual {:.1e}, spread {:.1e}",
        ledger.solutions.len(),
        worst[0],
        worst[1],
        min_eig,
        worst[2],
        worst[3]
    );
    if failures.is_empty() {
        Ok(msg)
    } else {
        Err(format!("{msg}; failing: {failures:?}"))
    }
}

fn criterion_8(ledger: &mut Ledger) -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [3, 4] {
        for baths in [
            DissipatorSpec::target_z(1.0, 0.5),
            DissipatorSpec::target_z(1.0, -0.8),
        ] {
            let spec = graded(n, 0.5);
            let zero = ledger.solve(&format!("B=0 N={n}"), &spec, &baths, Method::DenseNull);
            let field = ledger.solve(
                &format!("B=0.7 N={n}"),
                &spec.with_uniform_field(0.7),
                &baths,
                Method::DenseNull,
            );
            for (a, b) in zero.currents.spin.iter().zip(&field.currents.spin) {
                worst = worst.max((a - b).abs());
            }
            for (a, b) in zero
                .currents
                .energy_xxz
                .iter()
                .zip(&field.currents.energy_xxz)
            {
                worst = worst.max((a - b).abs());
            }
        }
    }
    let msg = format!("max |Δ⟨J⟩|, |Δ⟨F_xxz⟩| between B=0 and B=0.7: {worst:.1e}");
    if worst <= 1e-8 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_9() -> Outcome {
    let c = [2.0, 1.5, 1.0];
    // (a) linear chain never rectifies
    let mut linear_gap: f64 = 0.0;
    for (tl, tr) in [(1.001, 0.999), (1.5, 0.5), (10.0, 0.1), (0.2, 3.0)] {
        let spec = ClassicalChainSpec::new(c.to_vec(), 0.0, tl, tr).map_err(|e| e.to_string())?;
        let r = rectification_experiment(&spec).map_err(|e| e.to_string())?;
        linear_gap = linear_gap.max(r.magnitude_gap.abs());
    }
    // (b) first-order conductivity gap, T_L = 1 + a1 eps, T_R = 1 + a3 eps.
    // For three sites at alpha_exp = 1 the first-order formula happens to be
    // exact, so the measured error sits at round-off and cannot halve with
    // eps; the O(eps^2) convergence rate is observed at alpha_exp = 2.
    let rel = |alpha: f64, eps: f64, a1: f64, a3: f64| -> Result<f64, String> {
        let spec = ClassicalChainSpec::new(c.to_vec(), alpha, 1.0 + a1 * eps, 1.0 + a3 * eps)
            .map_err(|e| e.to_string())?;
        let r = rectification_experiment(&spec).map_err(|e| e.to_string())?;
        let setup = LinearizedSetup {
            t_base: 1.0,
            a: vec![a1, linearized_a2(c, a1, a3), a3],
            eps,
        };
        let predicted = conductivity_gap(&setup, c, alpha);
        Ok(rel_err(r.inverse_kappa_gap, predicted))
    };
    let (e1, e2) = (rel(1.0, 1e-3, 1.0, -1.0)?, rel(1.0, 5e-4, 1.0, -1.0)?);
    let (q1, q2) = (rel(2.0, 1e-3, 1.0, 0.0)?, rel(2.0, 5e-4, 1.0, 0.0)?);
    let ratio = q1 / q2;
    // (c) inverted profile is not the mirrored original
    let spec = ClassicalChainSpec::new(c.to_vec(), 1.0, 1.5, 0.5).map_err(|e| e.to_string())?;
    let mismatch = rectification_experiment(&spec)
        .map_err(|e| e.to_string())?
        .profile_mismatch;
    let msg = format!(
        "(a) α=0 max ||F|-|F'|| = {linear_gap:.1e}; (b) α=1 rel err {e1:.1e} at ε=1e-3, {e2:.1e} at ε=5e-4; α=2 rel err {q1:.2e} → {q2:.2e} (×{ratio:.2}); (c) profile mismatch {mismatch:.3e}"
    );
    if linear_gap <= 1e-12
        && e1 <= 1e-2
        && e2 <= 0.5e-2
        && q1 <= 1e-2
        && (1.5..=2.5).contains(&ratio)
        && mismatch > 1e-6
    {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let n = rng.random_range(2..=4);
        let alpha = rng.random_range(0.5..1.5);
        let delta: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-1.5..1.5)).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let spec = ChainSpec::new(n, alpha, delta, b).unwrap();
        let baths = if rng.random_bool(0.5) {
            DissipatorSpec::TargetZ {
                gamma: rng.random_range(0.5..1.5),
                f_left: rng.random_range(-0.9..0.9),
                f_right: rng.random_range(-0.9..0.9),
            }
        } else {
            DissipatorSpec::TwistedXy {
                k: rng.random_range(-0.9..0.9),
                k_prime: rng.random_range(-0.9..0.9),
                rate: rng.random_range(0.5..1.5),
                layout: TwistedLayout::WLeft,
            }
        };
        let liouv = chain_liouvillian(&spec, &baths).unwrap();
        let dense = steady_state(&liouv, Method::DenseNull, &cfg)
            .map_err(|e| format!("case {case}: {e}"))?;
        let evolved =
            steady_state(&liouv, Method::Evolve, &cfg).map_err(|e| format!("case {case}: {e}"))?;
        let diff = dense
            .rho
            .operator()
            .max_abs_diff(evolved.rho.operator())
            .unwrap();
        worst = worst.max(diff);
    }
    let msg = format!("20 seeded random chains (N=2..4): max |ρ_dense - ρ_evolve| = {worst:.1e}");
    if worst <= 1e-7 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let mut ledger = Ledger::default();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    results.push((
        1,
        "three-site closed-form coefficients",
        criterion_1(&mut ledger),
    ));
    let pairs = one_way_grid(&mut ledger);
    results.push((
        2,
        "one-way street for the exchange energy current",
        criterion_2(&pairs),
    ));
    results.push((
        3,
        "spin current odd, no spin rectification",
        criterion_3(&pairs),
    ));
    results.push((
        4,
        "homogeneous chain carries no exchange energy current",
        criterion_4(&mut ledger),
    ));
    results.push((
        5,
        "rectification with a uniform field",
        criterion_5(&mut ledger),
    ));
    results.push((6, "steady-state conjugation identities", criterion_6()));
    results.push((
        8,
        "uniform field leaves currents unchanged",
        criterion_8(&mut ledger),
    ));
    results.push((7, "steady-state validity", criterion_7(&ledger)));
    results.push((9, "classical contrast", criterion_9()));
    results.push((10, "dense and evolve steady states agree", criterion_10()));
    results.sort_by_key(|r| r.0);

    let mut failed = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Ok(msg) => println!("criterion {id:>2} PASS  {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {msg}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
