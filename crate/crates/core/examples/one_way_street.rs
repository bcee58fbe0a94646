//! The exchange energy current keeps its direction when the baths are
//! inverted, while the spin current reverses.
//!
//!     cargo run --example one_way_street -- 4

use ness_chain::chain::{expand_graded, GradedProfile};
use ness_chain::lindblad::{Method, SolverConfig};
use ness_chain::symmetry::{one_way_street_scan, parity_report, ScanFamily};
use ness_chain::DissipatorSpec;

fn main() -> ness_chain::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4);
    let cfg = SolverConfig::default();
    for step in [0.5, -0.5, 0.0] {
        let chain = expand_graded(GradedProfile::new(1.0, step), n)?;
        let table = one_way_street_scan(
            &chain,
            ScanFamily::TargetZ { gamma: 1.0 },
            &[0.2, 0.5, 0.8],
            Method::Auto,
            &cfg,
        )?;
        println!(
            "N = {n}, delta_step = {step:+}: one-way = {}",
            table.one_way
        );
        for r in &table.rows {
            println!(
                "  f = {:.1}: F(f) = {:+.6e}  F(-f) = {:+.6e}",
                r.drive, r.forward, r.reverse
            );
        }
    }
    let chain = expand_graded(GradedProfile::new(1.0, 0.5), n)?;
    let p = parity_report(
        &chain,
        &DissipatorSpec::target_z(1.0, 0.5),
        Method::Auto,
        &cfg,
    )?;
    println!(
        "spin current J(f) = {:+.6}, J(-f) = {:+.6}",
        p.forward.spin[0], p.reverse.spin[0]
    );
    Ok(())
}
