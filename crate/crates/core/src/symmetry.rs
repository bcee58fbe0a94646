//! Bath-inversion symmetries of the boundary-driven chain.
//!
//! Two global unitaries relate a chain to the same chain with its baths
//! exchanged, provided the field vanishes:
//!
//! * `U_x = X ⊗ X ⊗ … ⊗ X` for target-z baths with `f_right = -f_left`,
//! * `U_r = R ⊗ R ⊗ … ⊗ R` with `R = [[0, 1], [i, 0]]` for twisted baths
//!   with `k_prime = -k`.
//!
//! In both cases `T rho_ss T†` is the steady state of the inverted baths.
//! Both leave the exchange energy current invariant and flip the spin
//! current, so the exchange energy current is even under bath inversion and
//! the spin current is odd.

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{build_hamiltonian, ChainSpec};
use crate::error::{Error, Result};
use crate::lindblad::{
    jump_operators, solve_chain, ChainSolution, CurrentsProfile, DissipatorSpec, Method,
    SolverConfig, TwistedLayout,
};
use crate::pauli::{adjoint, kron_chain, pauli, trace, Axis, Operator};

/// Tolerance for the steady-state conjugation identity.
pub const CONJUGATION_TOL: f64 = 1e-8;
/// Current magnitudes at or below this are treated as vanishing.
pub const VANISHING_CURRENT: f64 = 1e-9;

/// `X ⊗ … ⊗ X`; Hermitian and involutive.
pub fn u_x(n_sites: usize) -> Result<Operator> {
    kron_chain(&vec![pauli(Axis::X); n_sites])
}

/// `R ⊗ … ⊗ R`. Conjugation `u_r · A · u_r†` maps X to Y, Y to X and Z to -Z
/// on every site.
pub fn u_r(n_sites: usize) -> Result<Operator> {
    kron_chain(&vec![pauli(Axis::R); n_sites])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BathFamily {
    TargetZ,
    TwistedXy,
}

/// What an edge bath does, after inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeContent {
    TargetZ { f: f64 },
    W { k: f64 },
    V { k_prime: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BathInversion {
    pub family: BathFamily,
    pub original: DissipatorSpec,
    pub inverted: DissipatorSpec,
    /// Bath content on site 1 after inversion.
    pub first_site: EdgeContent,
    /// Bath content on site N after inversion.
    pub last_site: EdgeContent,
}

pub fn family_of(spec: &DissipatorSpec) -> BathFamily {
    match spec {
        DissipatorSpec::TargetZ { .. } => BathFamily::TargetZ,
        DissipatorSpec::TwistedXy { .. } => BathFamily::TwistedXy,
    }
}

/// Exchanges the two boundary baths.
pub fn invert_baths(spec: &DissipatorSpec) -> BathInversion {
    match *spec {
        DissipatorSpec::TargetZ {
            gamma,
            f_left,
            f_right,
        } => BathInversion {
            family: BathFamily::TargetZ,
            original: *spec,
            inverted: DissipatorSpec::TargetZ {
                gamma,
                f_left: f_right,
                f_right: f_left,
            },
            first_site: EdgeContent::TargetZ { f: f_right },
            last_site: EdgeContent::TargetZ { f: f_left },
        },
        DissipatorSpec::TwistedXy {
            k,
            k_prime,
            rate,
            layout,
        } => {
            let flipped = match layout {
                TwistedLayout::WLeft => TwistedLayout::VLeft,
                TwistedLayout::VLeft => TwistedLayout::WLeft,
            };
            let (first_site, last_site) = match flipped {
                TwistedLayout::VLeft => (EdgeContent::V { k_prime }, EdgeContent::W { k }),
                TwistedLayout::WLeft => (EdgeContent::W { k }, EdgeContent::V { k_prime }),
            };
            BathInversion {
                family: BathFamily::TwistedXy,
                original: *spec,
                inverted: DissipatorSpec::TwistedXy {
                    k,
                    k_prime,
                    rate,
                    layout: flipped,
                },
                first_site,
                last_site,
            }
        }
    }
}

/// The unitary mapping the steady state onto the inverted-bath steady state,
/// after checking the bath parameters are antisymmetric.
pub fn inversion_unitary(spec: &DissipatorSpec, n_sites: usize) -> Result<Operator> {
    spec.validate()?;
    match *spec {
        DissipatorSpec::TargetZ {
            f_left, f_right, ..
        } => {
            if f_right != -f_left {
                return Err(Error::Spec(format!(
                    "bath inversion by U_x needs f_right = -f_left, got ({f_left}, {f_right})"
                )));
            }
            u_x(n_sites)
        }
        DissipatorSpec::TwistedXy { k, k_prime, .. } => {
            if k_prime != -k {
                return Err(Error::Spec(format!(
                    "bath inversion by U_r needs k_prime = -k, got ({k}, {k_prime})"
                )));
            }
            u_r(n_sites)
        }
    }
}

fn require_zero_field(spec: &ChainSpec) -> Result<()> {
    if !spec.field_is_zero() {
        return Err(Error::Spec(
            "the bath-inversion identity requires zero magnetic field (B = 0)".into(),
        ));
    }
    Ok(())
}

/// `max |T H T† - H|`.
pub fn hamiltonian_invariance_error(spec: &ChainSpec, transform: &Operator) -> Result<f64> {
    let h = build_hamiltonian(spec)?;
    transform.conjugate(&h)?.max_abs_diff(&h)
}

/// Frobenius inner product `tr(A† B)`.
fn inner(a: &Operator, b: &Operator) -> Result<faer::c64> {
    Ok(trace(&adjoint(a).matmul(b)?))
}

/// Largest mismatch between `{T L T†}` for the original jumps and the
/// inverted jump set, allowing each operator a free phase.
pub fn dissipator_covariance_error(spec: &DissipatorSpec, n_sites: usize) -> Result<f64> {
    let t = inversion_unitary(spec, n_sites)?;
    let original = jump_operators(spec, n_sites)?;
    let inverted = jump_operators(&invert_baths(spec).inverted, n_sites)?;
    let mut worst: f64 = 0.0;
    for l in &original {
        let mapped = t.conjugate(l)?;
        let mut best = f64::INFINITY;
        for cand in &inverted {
            let overlap = inner(cand, &mapped)?;
            let phase = if overlap.norm() > 0.0 {
                overlap / overlap.norm()
            } else {
                faer::c64::new(1.0, 0.0)
            };
            best = best.min(mapped.max_abs_diff(&cand.scale(phase))?);
        }
        worst = worst.max(best);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjugationReport {
    pub family: BathFamily,
    /// `max |T rho(original) T† - rho(inverted)|`
    pub max_error: f64,
    pub pass: bool,
}

/// Solves the original and inverted problems and compares
/// `T rho_ss(original) T†` with `rho_ss(inverted)` entrywise.
pub fn check_conjugation_identity(
    spec: &ChainSpec,
    diss: &DissipatorSpec,
    method: Method,
    cfg: &SolverConfig,
) -> Result<ConjugationReport> {
    require_zero_field(spec)?;
    let t = inversion_unitary(diss, spec.n_sites)?;
    let inversion = invert_baths(diss);
    let original = solve_chain(spec, diss, method, cfg)?;
    let inverted = solve_chain(spec, &inversion.inverted, method, cfg)?;
    let mapped = t.conjugate(original.steady.rho.operator())?;
    let max_error = mapped.max_abs_diff(inverted.steady.rho.operator())?;
    Ok(ConjugationReport {
        family: inversion.family,
        max_error,
        pass: max_error <= CONJUGATION_TOL,
    })
}

/// Currents of a chain and of the same chain with inverted baths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParityReport {
    pub family: BathFamily,
    pub forward: CurrentsProfile,
    pub reverse: CurrentsProfile,
    /// `max_j |F_xxz(forward) - F_xxz(reverse)|`; zero when the exchange
    /// energy current is even under bath inversion.
    pub f_even_err: f64,
    /// `max_j |J(forward) + J(reverse)|`; zero when the spin current is odd.
    pub j_odd_err: f64,
    /// `F_total(forward) - F_total(reverse)` at site 2: the rectification signal.
    pub f_total_asym: Option<f64>,
    /// `F_total(forward) + F_total(reverse)` at site 2: zero for an ordinary
    /// conductor whose current simply reverses.
    pub f_total_sum: Option<f64>,
}

fn max_abs_combination(a: &[f64], b: &[f64], sign: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x + sign * y).abs())
        .fold(0.0, f64::max)
}

fn parity_from(
    family: BathFamily,
    forward: &ChainSolution,
    reverse: &ChainSolution,
) -> ParityReport {
    let (f, r) = (&forward.currents, &reverse.currents);
    let total = f.energy_total_current().zip(r.energy_total_current());
    ParityReport {
        family,
        f_even_err: max_abs_combination(&f.energy_xxz, &r.energy_xxz, -1.0),
        j_odd_err: max_abs_combination(&f.spin, &r.spin, 1.0),
        f_total_asym: total.map(|(a, b)| a - b),
        f_total_sum: total.map(|(a, b)| a + b),
        forward: f.clone(),
        reverse: r.clone(),
    }
}

/// Measures the parities of the currents under bath inversion.
///
/// Target-z baths need `f_right = -f_left` (any uniform field is allowed);
/// twisted baths need `k_prime = -k`.
pub fn parity_report(
    spec: &ChainSpec,
    diss: &DissipatorSpec,
    method: Method,
    cfg: &SolverConfig,
) -> Result<ParityReport> {
    inversion_unitary(diss, 1)?;
    let inversion = invert_baths(diss);
    let forward = solve_chain(spec, diss, method, cfg)?;
    let reverse = solve_chain(spec, &inversion.inverted, method, cfg)?;
    Ok(parity_from(inversion.family, &forward, &reverse))
}

/// Bath family and its coupling for a scan over the driving strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScanFamily {
    /// `f_left = f`, `f_right = -f`.
    TargetZ { gamma: f64 },
    /// `k = f`, `k_prime = -f`.
    TwistedXy { rate: f64 },
}

impl ScanFamily {
    pub fn baths(&self, drive: f64) -> DissipatorSpec {
        match *self {
            ScanFamily::TargetZ { gamma } => DissipatorSpec::target_z(gamma, drive),
            ScanFamily::TwistedXy { rate } => DissipatorSpec::TwistedXy {
                k: drive,
                k_prime: -drive,
                rate,
                layout: TwistedLayout::WLeft,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneWayRow {
    pub drive: f64,
    /// Exchange energy current (site 2) with the original baths.
    pub forward: f64,
    /// Exchange energy current (site 2) with the baths inverted.
    pub reverse: f64,
    /// Same sign, or both vanish.
    pub same_direction: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneWayStreetTable {
    pub rows: Vec<OneWayRow>,
    /// Sign shared by every non-vanishing current, `None` if all vanish.
    pub common_sign: Option<i8>,
    /// Every row keeps its direction and all non-vanishing rows agree in sign.
    pub one_way: bool,
}

fn sign_of(x: f64) -> Option<i8> {
    if x.abs() <= VANISHING_CURRENT {
        None
    } else if x > 0.0 {
        Some(1)
    } else {
        Some(-1)
    }
}

/// For each drive strength, records the exchange energy current with the
/// baths in place and inverted. Grid points are solved in parallel; rows
/// keep grid order.
pub fn one_way_street_scan(
    spec: &ChainSpec,
    family: ScanFamily,
    drives: &[f64],
    method: Method,
    cfg: &SolverConfig,
) -> Result<OneWayStreetTable> {
    require_zero_field(spec)?;
    if spec.n_sites < 3 {
        return Err(Error::Spec("energy currents need at least 3 sites".into()));
    }
    let rows = drives
        .par_iter()
        .map(|&drive| {
            let baths = family.baths(drive);
            let inverted = invert_baths(&baths).inverted;
            let fwd = solve_chain(spec, &baths, method, cfg)?;
            let rev = solve_chain(spec, &inverted, method, cfg)?;
            let forward = fwd.currents.energy_xxz[0];
            let reverse = rev.currents.energy_xxz[0];
            let same_direction = match (sign_of(forward), sign_of(reverse)) {
                (None, None) => true,
                (a, b) => a == b,
            };
            Ok(OneWayRow {
                drive,
                forward,
                reverse,
                same_direction,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let signs: Vec<i8> = rows
        .iter()
        .flat_map(|r| [sign_of(r.forward), sign_of(r.reverse)])
        .flatten()
        .collect();
    let common_sign = signs.first().copied();
    let one_way =
        rows.iter().all(|r| r.same_direction) && signs.iter().all(|&s| Some(s) == common_sign);
    Ok(OneWayStreetTable {
        rows,
        common_sign,
        one_way,
    })
}

/// Currents of the physically reversed chain (sites relabeled
/// `j -> N + 1 - j`, baths exchanged) mapped back to the original labels.
///
/// Returns `max` deviation from the original currents; a consistency check
/// on every index convention.
pub fn mirror_check(
    spec: &ChainSpec,
    diss: &DissipatorSpec,
    method: Method,
    cfg: &SolverConfig,
) -> Result<f64> {
    let original = solve_chain(spec, diss, method, cfg)?.currents;
    let mirrored_baths = invert_baths(diss).inverted;
    let mirrored = solve_chain(&spec.reversed(), &mirrored_baths, method, cfg)?.currents;
    let mut back_spin = mirrored.spin.iter().map(|j| -j).collect::<Vec<_>>();
    back_spin.reverse();
    let mut back_energy = mirrored.energy_total.iter().map(|f| -f).collect::<Vec<_>>();
    back_energy.reverse();
    Ok(
        max_abs_combination(&original.spin, &back_spin, -1.0).max(max_abs_combination(
            &original.energy_total,
            &back_energy,
            -1.0,
        )),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{energy_current_xxz_op, expand_graded, spin_current_op, GradedProfile};
    use crate::pauli::embed;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn u_x_is_an_involution_that_swaps_raising_and_lowering() {
        for n in 1..=3 {
            let u = u_x(n).unwrap();
            let sq = &u * &u;
            assert_eq!(
                sq.max_abs_diff(&Operator::identity(1 << n).unwrap())
                    .unwrap(),
                0.0
            );
            for j in 1..=n {
                let plus = embed(&pauli(Axis::Plus), j, n).unwrap();
                let minus = embed(&pauli(Axis::Minus), j, n).unwrap();
                let mapped = &(&u * &plus) * &u;
                assert_eq!(mapped.max_abs_diff(&minus).unwrap(), 0.0);
            }
        }
        let xx = pauli(Axis::X).kron(&pauli(Axis::X));
        assert_eq!(u_x(2).unwrap().max_abs_diff(&xx).unwrap(), 0.0);
    }

    #[test]
    fn u_r_single_site_table_and_unitarity() {
        let r = u_r(1).unwrap();
        let z = r.conjugate(&pauli(Axis::Z)).unwrap();
        assert!(z.max_abs_diff(&(-&pauli(Axis::Z))).unwrap() < 1e-15);
        let x = r.conjugate(&pauli(Axis::X)).unwrap();
        assert!(x.max_abs_diff(&pauli(Axis::Y)).unwrap() < 1e-15);
        for n in 1..=4 {
            let u = u_r(n).unwrap();
            let uu = &adjoint(&u) * &u;
            assert!(
                uu.max_abs_diff(&Operator::identity(1 << n).unwrap())
                    .unwrap()
                    < 1e-15
            );
        }
    }

    #[test]
    fn target_z_inversion_swaps_polarizations() {
        let inv = invert_baths(&DissipatorSpec::target_z(1.0, 0.4));
        assert_eq!(
            inv.inverted,
            DissipatorSpec::TargetZ {
                gamma: 1.0,
                f_left: -0.4,
                f_right: 0.4
            }
        );
        assert_eq!(inv.first_site, EdgeContent::TargetZ { f: -0.4 });
        let fixed = DissipatorSpec::target_z(1.0, 0.0);
        assert_eq!(invert_baths(&fixed).inverted, fixed);
        // inverting twice restores the original
        let twice = invert_baths(&inv.inverted).inverted;
        assert_eq!(twice, inv.original);
    }

    #[test]
    fn twisted_inversion_moves_v_to_the_left() {
        let inv = invert_baths(&DissipatorSpec::twisted_xy(0.3));
        assert_eq!(inv.first_site, EdgeContent::V { k_prime: -0.3 });
        assert_eq!(inv.last_site, EdgeContent::W { k: 0.3 });
        // certified on two sites by the operator covariance
        assert!(dissipator_covariance_error(&DissipatorSpec::twisted_xy(0.3), 2).unwrap() < 1e-12);
    }

    #[test]
    fn jump_sets_are_covariant() {
        for n in 2..=4 {
            for f in [0.0, 0.35, -0.8, 1.0] {
                let err =
                    dissipator_covariance_error(&DissipatorSpec::target_z(0.7, f), n).unwrap();
                assert!(err <= 1e-12, "target_z n={n} f={f}: {err}");
            }
            for k in [0.0, 0.6, -1.0] {
                let err = dissipator_covariance_error(&DissipatorSpec::twisted_xy(k), n).unwrap();
                assert!(err <= 1e-12, "twisted n={n} k={k}: {err}");
            }
        }
    }

    #[test]
    fn both_unitaries_preserve_a_zero_field_graded_hamiltonian() {
        let spec = ChainSpec::new(4, 0.9, vec![-0.3, 0.4, 2.2], vec![0.0; 4]).unwrap();
        assert_eq!(
            hamiltonian_invariance_error(&spec, &u_x(4).unwrap()).unwrap(),
            0.0
        );
        assert!(hamiltonian_invariance_error(&spec, &u_r(4).unwrap()).unwrap() < 1e-14);
        let with_field = spec.with_uniform_field(0.5);
        assert!(hamiltonian_invariance_error(&with_field, &u_x(4).unwrap()).unwrap() > 0.5);
    }

    #[test]
    fn operator_parities_under_u_r() {
        let spec = expand_graded(GradedProfile::new(1.0, 0.5), 3).unwrap();
        let u = u_r(3).unwrap();
        let j = spin_current_op(&spec, 1).unwrap();
        assert!(u.conjugate(&j).unwrap().max_abs_diff(&(-&j)).unwrap() < 1e-14);
        let f = energy_current_xxz_op(&spec, 2).unwrap();
        assert!(u.conjugate(&f).unwrap().max_abs_diff(&f).unwrap() < 1e-14);
    }

    #[test]
    fn conjugation_identity_cases() {
        let homog = ChainSpec::homogeneous_chain(3, 1.0, 1.0, 0.0).unwrap();
        let r = check_conjugation_identity(
            &homog,
            &DissipatorSpec::target_z(1.0, 0.5),
            Method::DenseNull,
            &cfg(),
        )
        .unwrap();
        assert!(r.pass, "{r:?}");

        let graded = expand_graded(GradedProfile::new(1.0, 0.5), 3).unwrap();
        let r = check_conjugation_identity(
            &graded,
            &DissipatorSpec::target_z(1.0, 0.5),
            Method::DenseNull,
            &cfg(),
        )
        .unwrap();
        assert!(r.pass, "{r:?}");

        let r = check_conjugation_identity(
            &graded,
            &DissipatorSpec::twisted_xy(0.6),
            Method::DenseNull,
            &cfg(),
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.family, BathFamily::TwistedXy);
    }

    #[test]
    fn conjugation_identity_preconditions() {
        let spec = expand_graded(GradedProfile::new(1.0, 0.5), 3)
            .unwrap()
            .with_uniform_field(0.3);
        let err = check_conjugation_identity(
            &spec,
            &DissipatorSpec::target_z(1.0, 0.5),
            Method::DenseNull,
            &cfg(),
        );
        assert!(matches!(err, Err(Error::Spec(_))));
        let spec = expand_graded(GradedProfile::new(1.0, 0.5), 3).unwrap();
        let lopsided = DissipatorSpec::TargetZ {
            gamma: 1.0,
            f_left: 0.5,
            f_right: 0.2,
        };
        assert!(matches!(
            check_conjugation_identity(&spec, &lopsided, Method::DenseNull, &cfg()),
            Err(Error::Spec(_))
        ));
    }

    #[test]
    fn one_way_street_on_graded_chain_and_sign_flip_under_mirror_grading() {
        let grid = [0.2, 0.5, 0.8];
        let fam = ScanFamily::TargetZ { gamma: 1.0 };
        let up = expand_graded(GradedProfile::new(1.0, 0.5), 3).unwrap();
        let t_up = one_way_street_scan(&up, fam, &grid, Method::DenseNull, &cfg()).unwrap();
        assert!(t_up.one_way, "{t_up:?}");
        let sign_up = t_up
            .common_sign
            .expect("graded chain carries an energy current");

        let down = expand_graded(GradedProfile::new(1.0, -0.5), 3).unwrap();
        let t_down = one_way_street_scan(&down, fam, &grid, Method::DenseNull, &cfg()).unwrap();
        assert!(t_down.one_way);
        assert_eq!(t_down.common_sign, Some(-sign_up));
    }

    #[test]
    fn homogeneous_scan_vanishes() {
        let flat = expand_graded(GradedProfile::new(1.0, 0.0), 4).unwrap();
        let t = one_way_street_scan(
            &flat,
            ScanFamily::TargetZ { gamma: 1.0 },
            &[0.2, 0.5, 0.8],
            Method::DenseNull,
            &cfg(),
        )
        .unwrap();
        assert!(t.common_sign.is_none());
        for row in &t.rows {
            assert!(
                row.forward.abs() <= VANISHING_CURRENT && row.reverse.abs() <= VANISHING_CURRENT
            );
        }
    }

    #[test]
    fn parity_with_field_shows_rectification() {
        let spec = expand_graded(GradedProfile::new(1.0, 0.5), 3)
            .unwrap()
            .with_uniform_field(1.0);
        let p = parity_report(
            &spec,
            &DissipatorSpec::target_z(1.0, 0.5),
            Method::DenseNull,
            &cfg(),
        )
        .unwrap();
        assert!(p.f_even_err <= 1e-9);
        assert!(p.j_odd_err <= 1e-9);
        let asym = p.f_total_asym.unwrap();
        assert!(asym.abs() > 1e-6);
        assert!((asym - 2.0 * p.forward.spin[0]).abs() <= 1e-8);
    }

    #[test]
    fn mirror_relabeling_reproduces_currents() {
        let spec = ChainSpec::new(4, 1.0, vec![0.4, 1.0, 1.7], vec![0.2, -0.1, 0.3, 0.0]).unwrap();
        let diss = DissipatorSpec::TargetZ {
            gamma: 0.8,
            f_left: 0.6,
            f_right: -0.1,
        };
        assert!(mirror_check(&spec, &diss, Method::DenseNull, &cfg()).unwrap() < 1e-10);
        let twisted = DissipatorSpec::TwistedXy {
            k: 0.3,
            k_prime: 0.5,
            rate: 1.3,
            layout: TwistedLayout::WLeft,
        };
        assert!(mirror_check(&spec, &twisted, Method::DenseNull, &cfg()).unwrap() < 1e-10);
    }
}
