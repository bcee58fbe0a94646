//! Small-f expansion of the three-site energy current,
//! F ≈ c1 B f + c2 f² δ, extracted by finite differences and compared with
//! the closed forms at Δ = 1.

use ness_chain::chain::ChainSpec;
use ness_chain::lindblad::{solve_chain, DissipatorSpec, Method, SolverConfig};

fn current(delta: f64, d: f64, b: f64, f: f64) -> ness_chain::Result<f64> {
    let chain = ChainSpec::new(3, 1.0, vec![delta - d, delta + d], vec![b; 3])?;
    let sol = solve_chain(
        &chain,
        &DissipatorSpec::target_z(1.0, f),
        Method::DenseNull,
        &SolverConfig::default(),
    )?;
    Ok(sol.currents.energy_total_current().unwrap())
}

fn main() -> ness_chain::Result<()> {
    let (h, b, d) = (1e-3, 1e-3, 1e-3);
    for delta in [0.5, 1.0, 2.0] {
        let odd = |bb: f64| -> ness_chain::Result<f64> {
            Ok((current(delta, d, bb, h)? - current(delta, d, bb, -h)?) / (2.0 * h))
        };
        let c1 = (odd(b)? - odd(0.0)?) / b;
        let c2 = (current(delta, d, 0.0, h)? + current(delta, d, 0.0, -h)?
            - 2.0 * current(delta, d, 0.0, 0.0)?)
            / (2.0 * h * h * d);
        let d2 = delta * delta;
        let c1_exact = 912.0 / (969.0 + 48.0 * d2);
        let c2_exact = 32.0 * (20224.0 * d2 * d2 + 64256.0 * d2 - 1083.0)
            / ((51.0 + 16.0 * d2) * (323.0 + 16.0 * d2).powi(2));
        println!("Δ = {delta}: B·f {c1:.6} (closed form {c1_exact:.6}), f²δ {c2:.6} (closed form {c2_exact:.6})");
    }
    Ok(())
}
