//! Boundary bath families and their jump operators.

use faer::c64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{embed, pauli, Axis, Operator};

fn one() -> f64 {
    1.0
}

/// Which jump family sits on site 1 for the twisted boundary baths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistedLayout {
    /// `W` operators (parameter `k`) on site 1, `V` operators (`k_prime`) on site N.
    #[default]
    WLeft,
    /// `V` operators (`k_prime`) on site 1, `W` operators (`k`) on site N.
    VLeft,
}

/// Boundary bath selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DissipatorSpec {
    /// Edge spins pumped towards `sigma_z` polarizations `f_left` and `f_right`
    /// with coupling `gamma`.
    TargetZ {
        #[serde(default = "one")]
        gamma: f64,
        f_left: f64,
        f_right: f64,
    },
    /// Edge spins polarized along different directions in the XY/Z planes.
    /// `rate` multiplies every jump operator's squared amplitude.
    TwistedXy {
        k: f64,
        k_prime: f64,
        #[serde(default = "one")]
        rate: f64,
        #[serde(default)]
        layout: TwistedLayout,
    },
}

impl DissipatorSpec {
    /// Target-z baths with `f_left = f`, `f_right = -f`.
    pub fn target_z(gamma: f64, f: f64) -> Self {
        Self::TargetZ {
            gamma,
            f_left: f,
            f_right: -f,
        }
    }

    /// Twisted baths with `k_prime = -k`, unit rate, `W` on the left.
    pub fn twisted_xy(k: f64) -> Self {
        Self::TwistedXy {
            k,
            k_prime: -k,
            rate: 1.0,
            layout: TwistedLayout::WLeft,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::TargetZ {
                gamma,
                f_left,
                f_right,
            } => {
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::Spec(format!("gamma must be positive, got {gamma}")));
                }
                for (name, f) in [("f_left", f_left), ("f_right", f_right)] {
                    if !(-1.0..=1.0).contains(&f) {
                        return Err(Error::Spec(format!("{name} must lie in [-1, 1], got {f}")));
                    }
                }
            }
            Self::TwistedXy {
                k, k_prime, rate, ..
            } => {
                if !(rate > 0.0 && rate.is_finite()) {
                    return Err(Error::Spec(format!("rate must be positive, got {rate}")));
                }
                for (name, v) in [("k", k), ("k_prime", k_prime)] {
                    if !(-1.0..=1.0).contains(&v) {
                        return Err(Error::Spec(format!("{name} must lie in [-1, 1], got {v}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `W1(k) = sqrt((1-k)/2)(Z + iX)`, `W2(k) = sqrt((1+k)/2)(Z - iX)` as 2x2 matrices.
pub fn twisted_w_ops(k: f64) -> [Operator; 2] {
    let i = c64::new(0.0, 1.0);
    let z = pauli(Axis::Z);
    let x = pauli(Axis::X).scale(i);
    [
        (&z + &x).scale_real(((1.0 - k) / 2.0).sqrt()),
        (&z - &x).scale_real(((1.0 + k) / 2.0).sqrt()),
    ]
}

/// `V1(k') = sqrt((1+k')/2)(Y + iZ)`, `V2(k') = sqrt((1-k')/2)(Y - iZ)` as 2x2 matrices.
pub fn twisted_v_ops(k_prime: f64) -> [Operator; 2] {
    let i = c64::new(0.0, 1.0);
    let y = pauli(Axis::Y);
    let z = pauli(Axis::Z).scale(i);
    [
        (&y + &z).scale_real(((1.0 + k_prime) / 2.0).sqrt()),
        (&y - &z).scale_real(((1.0 - k_prime) / 2.0).sqrt()),
    ]
}

/// Jump operators on the full `n_sites` Hilbert space.
///
/// Target-z returns `[L+ at 1, L- at 1, L+ at N, L- at N]` with
/// `L± = sqrt(gamma/2 (1 ± f)) sigma±`. Twisted returns the two left
/// operators followed by the two right ones. Zero-amplitude operators
/// (e.g. `f = ±1`) are kept.
pub fn jump_operators(spec: &DissipatorSpec, n_sites: usize) -> Result<Vec<Operator>> {
    spec.validate()?;
    if n_sites == 0 {
        return Err(Error::Spec("chain needs at least one site".into()));
    }
    let last = n_sites;
    match *spec {
        DissipatorSpec::TargetZ {
            gamma,
            f_left,
            f_right,
        } => {
            let amp = |f: f64| (gamma / 2.0 * f).max(0.0).sqrt();
            let plus = pauli(Axis::Plus);
            let minus = pauli(Axis::Minus);
            Ok(vec![
                embed(&plus.scale_real(amp(1.0 + f_left)), 1, n_sites)?,
                embed(&minus.scale_real(amp(1.0 - f_left)), 1, n_sites)?,
                embed(&plus.scale_real(amp(1.0 + f_right)), last, n_sites)?,
                embed(&minus.scale_real(amp(1.0 - f_right)), last, n_sites)?,
            ])
        }
        DissipatorSpec::TwistedXy {
            k,
            k_prime,
            rate,
            layout,
        } => {
            let w = twisted_w_ops(k);
            let v = twisted_v_ops(k_prime);
            let (left, right) = match layout {
                TwistedLayout::WLeft => (w, v),
                TwistedLayout::VLeft => (v, w),
            };
            let s = rate.sqrt();
            let mut out = Vec::with_capacity(4);
            for op in &left {
                out.push(embed(&op.scale_real(s), 1, n_sites)?);
            }
            for op in &right {
                out.push(embed(&op.scale_real(s), last, n_sites)?);
            }
            Ok(out)
        }
    }
}
