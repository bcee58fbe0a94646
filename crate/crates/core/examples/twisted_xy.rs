//! Twisted XY boundary baths: conjugation by R ⊗ R ⊗ … maps the steady state
//! onto that of the inverted baths.

use ness_chain::chain::{expand_graded, GradedProfile};
use ness_chain::lindblad::{solve_chain, Method, SolverConfig};
use ness_chain::symmetry::{check_conjugation_identity, dissipator_covariance_error, invert_baths};
use ness_chain::DissipatorSpec;

fn main() -> ness_chain::Result<()> {
    let cfg = SolverConfig::default();
    let chain = expand_graded(GradedProfile::new(1.0, 0.5), 3)?;
    for k in [0.2, 0.5, 0.8] {
        let baths = DissipatorSpec::twisted_xy(k);
        let inverted = invert_baths(&baths);
        let report = check_conjugation_identity(&chain, &baths, Method::DenseNull, &cfg)?;
        let fwd = solve_chain(&chain, &baths, Method::DenseNull, &cfg)?.currents;
        let rev = solve_chain(&chain, &inverted.inverted, Method::DenseNull, &cfg)?.currents;
        println!(
            "k = {k}: jump covariance {:.1e}, state identity {:.1e}, F = {:+.6e} / {:+.6e}, J = {:+.6e} / {:+.6e}",
            dissipator_covariance_error(&baths, 3)?,
            report.max_error,
            fwd.energy_xxz[0],
            rev.energy_xxz[0],
            fwd.spin[0],
            rev.spin[0],
        );
    }
    Ok(())
}
