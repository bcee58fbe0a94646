//! A uniform field adds an odd part to the total energy current, so its
//! magnitude depends on the bias direction.

use ness_chain::chain::{expand_graded, GradedProfile};
use ness_chain::lindblad::{Method, SolverConfig};
use ness_chain::symmetry::parity_report;
use ness_chain::DissipatorSpec;

fn main() -> ness_chain::Result<()> {
    let cfg = SolverConfig::default();
    let baths = DissipatorSpec::target_z(1.0, 0.5);
    println!(
        "{:>5} {:>14} {:>14} {:>14} {:>14}",
        "B", "F(f)", "F(-f)", "F(f)-F(-f)", "2B J(f)"
    );
    for b in [0.0, 0.25, 0.5, 1.0] {
        let chain = expand_graded(GradedProfile::new(1.0, 0.5), 3)?.with_uniform_field(b);
        let p = parity_report(&chain, &baths, Method::Auto, &cfg)?;
        let fwd = p.forward.energy_total_current().unwrap();
        let rev = p.reverse.energy_total_current().unwrap();
        let j = p.forward.spin_current().unwrap();
        println!(
            "{b:>5} {fwd:>14.6e} {rev:>14.6e} {:>14.6e} {:>14.6e}",
            fwd - rev,
            2.0 * b * j
        );
    }
    Ok(())
}
