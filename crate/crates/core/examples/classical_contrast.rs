//! Graded classical chain with a local Fourier law: rectification needs a
//! temperature-dependent conductivity.

use ness_chain::classical::{
    conductivity_gap, linearized_a2, rectification_experiment, ClassicalChainSpec, LinearizedSetup,
};

fn main() -> ness_chain::Result<()> {
    let c = [2.0, 1.5, 1.0];
    for alpha in [0.0, 1.0, 2.0] {
        let spec = ClassicalChainSpec::new(c.to_vec(), alpha, 1.5, 0.5)?;
        let r = rectification_experiment(&spec)?;
        println!(
            "alpha = {alpha}: |F| = {:.9} forward, {:.9} reverse; profile {:?} vs inverted {:?}",
            r.flux_forward.abs(),
            r.flux_reverse.abs(),
            r.profile_forward,
            r.profile_reverse
        );
    }
    println!("small gradients, alpha = 1:");
    for eps in [1e-2, 1e-3, 1e-4] {
        let spec = ClassicalChainSpec::new(c.to_vec(), 1.0, 1.0 + eps, 1.0 - eps)?;
        let r = rectification_experiment(&spec)?;
        let setup = LinearizedSetup {
            t_base: 1.0,
            a: vec![1.0, linearized_a2(c, 1.0, -1.0), -1.0],
            eps,
        };
        println!(
            "  eps = {eps:.0e}: 1/k - 1/k' = {:.9e}, first order {:.9e}",
            r.inverse_kappa_gap,
            conductivity_gap(&setup, c, 1.0)
        );
    }
    Ok(())
}
