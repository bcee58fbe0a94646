//! Steady state of a graded 4-site chain between target-z baths.
//!
//!     cargo run --example steady_state

use ness_chain::chain::{expand_graded, GradedProfile};
use ness_chain::lindblad::{
    magnetization_profile, solve_chain, DissipatorSpec, Method, SolverConfig,
};

fn main() -> ness_chain::Result<()> {
    let chain = expand_graded(GradedProfile::new(1.0, 0.5), 4)?;
    let baths = DissipatorSpec::target_z(1.0, 0.5);
    let sol = solve_chain(&chain, &baths, Method::Auto, &SolverConfig::default())?;

    println!("anisotropy per bond: {:?}", chain.delta);
    println!(
        "method {} ({:?}), residual {:.1e}",
        sol.steady.method, sol.steady.route, sol.steady.residual
    );
    for (j, m) in magnetization_profile(&sol.steady.rho)?.iter().enumerate() {
        println!("  <Z_{}> = {m:+.6}", j + 1);
    }
    let c = &sol.currents;
    println!("spin current per bond:   {:?}", c.spin);
    println!("energy current (XXZ):    {:?}", c.energy_xxz);
    println!(
        "spreads: spin {:.1e}, energy {:.1e}",
        c.spin_spread, c.energy_xxz_spread
    );
    Ok(())
}
