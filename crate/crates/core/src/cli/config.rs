//! TOML experiment files.
//!
//! ```toml
//! [model]
//! n_sites = 3
//! alpha = 1.0
//! graded = { delta_mean = 1.0, delta_step = 0.5 }   # or delta = [...], or delta_uniform = 1.0
//! b_uniform = 0.0                                   # or b_field = [...]
//!
//! [bath]
//! type = "target_z"       # or "twisted_xy" with k, k_prime, rate
//! gamma = 1.0
//! f = 0.5                 # f_left = f, f_right = -f; or give f_left / f_right
//!
//! [solver]
//! method = "auto"
//!
//! [[sweep.axes]]
//! name = "f"
//! values = [-0.5, 0.5]
//!
//! [output]
//! format = "csv"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chain::{ChainSpec, GradedProfile};
use crate::classical::ClassicalChainSpec;
use crate::error::{Error, Result};
use crate::lindblad::{DissipatorSpec, Method, SolverConfig, TwistedLayout};

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub n_sites: usize,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_uniform: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graded: Option<GradedProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_field: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_uniform: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BathSection {
    TargetZ {
        #[serde(default = "one")]
        gamma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        f: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        f_left: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        f_right: Option<f64>,
    },
    TwistedXy {
        k: f64,
        /// Defaults to `-k`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_prime: Option<f64>,
        #[serde(default = "one")]
        rate: f64,
        #[serde(default)]
        layout: TwistedLayout,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default)]
    pub method: Method,
    #[serde(flatten)]
    pub config: SolverConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Axes of a Cartesian grid; the last axis varies fastest.
    #[serde(default)]
    pub axes: Vec<SweepAxis>,
}

fn default_drives() -> Vec<f64> {
    vec![0.2, 0.5, 0.8]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetrySection {
    /// Drive strengths (`f` or `k`) for the one-way-street scan.
    #[serde(default = "default_drives")]
    pub drives: Vec<f64>,
}

impl Default for SymmetrySection {
    fn default() -> Self {
        Self {
            drives: default_drives(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearizedSection {
    pub t_base: f64,
    pub a_left: f64,
    pub a_right: f64,
    pub eps: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalSection {
    pub c: Vec<f64>,
    pub alpha_exp: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_right: Option<f64>,
    /// `T_L = t_base + a_left eps`, `T_R = t_base + a_right eps` for each `eps`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linearized: Option<LinearizedSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
    /// Adds a `wall_ms` column; off by default so reruns are byte-identical.
    #[serde(default)]
    pub timing: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bath: Option<BathSection>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub symmetry: SymmetrySection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalSection>,
    #[serde(default)]
    pub output: OutputSection,
}

pub const SWEEP_PARAMETERS: &[&str] = &[
    "n_sites",
    "alpha",
    "delta_uniform",
    "delta_mean",
    "delta_step",
    "b",
    "gamma",
    "f",
    "f_left",
    "f_right",
    "k",
    "k_prime",
    "rate",
];

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn model(&self) -> Result<&ModelSection> {
        self.model
            .as_ref()
            .ok_or_else(|| Error::Config("missing [model] section".into()))
    }

    pub fn bath(&self) -> Result<&BathSection> {
        self.bath
            .as_ref()
            .ok_or_else(|| Error::Config("missing [bath] section".into()))
    }

    pub fn chain_spec(&self) -> Result<ChainSpec> {
        self.model()?.resolve()
    }

    pub fn dissipator(&self) -> Result<DissipatorSpec> {
        let baths = self.bath()?.resolve()?;
        baths.validate()?;
        Ok(baths)
    }

    pub fn classical_section(&self) -> Result<&ClassicalSection> {
        self.classical
            .as_ref()
            .ok_or_else(|| Error::Config("missing [classical] section".into()))
    }

    /// Every grid point of the sweep as `(name, value)` assignments, in
    /// row-major order.
    pub fn sweep_points(&self) -> Result<Vec<Vec<(String, f64)>>> {
        let axes = &self.sweep.axes;
        if axes.is_empty() {
            return Err(Error::Config(
                "sweep needs at least one [[sweep.axes]] entry".into(),
            ));
        }
        for axis in axes {
            if !SWEEP_PARAMETERS.contains(&axis.name.as_str()) {
                return Err(Error::Config(format!(
                    "unknown sweep parameter {:?}; expected one of {SWEEP_PARAMETERS:?}",
                    axis.name
                )));
            }
            if axis.values.is_empty() {
                return Err(Error::Config(format!(
                    "sweep axis {:?} has no values",
                    axis.name
                )));
            }
        }
        let mut points: Vec<Vec<(String, f64)>> = vec![Vec::new()];
        for axis in axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push((axis.name.clone(), v));
                        q
                    })
                })
                .collect();
        }
        Ok(points)
    }

    /// Copy of the config with one sweep parameter overridden.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<Self> {
        let mut out = self.clone();
        let model = out
            .model
            .as_mut()
            .ok_or_else(|| Error::Config("missing [model] section".into()))?;
        let bath = out
            .bath
            .as_mut()
            .ok_or_else(|| Error::Config("missing [bath] section".into()))?;
        fn graded<'a>(m: &'a mut ModelSection, name: &str) -> Result<&'a mut GradedProfile> {
            m.graded.as_mut().ok_or_else(|| {
                Error::Config(format!("sweep parameter {name:?} needs model.graded"))
            })
        }
        match (name, bath) {
            ("n_sites", _) => {
                if value.fract() != 0.0 || value < 1.0 {
                    return Err(Error::Config(format!(
                        "n_sites must be a positive integer, got {value}"
                    )));
                }
                model.n_sites = value as usize;
            }
            ("alpha", _) => model.alpha = value,
            ("delta_uniform", _) => {
                model.delta = None;
                model.graded = None;
                model.delta_uniform = Some(value);
            }
            ("delta_mean", _) => graded(model, name)?.delta_mean = value,
            ("delta_step", _) => graded(model, name)?.delta_step = value,
            ("b", _) => {
                model.b_field = None;
                model.b_uniform = Some(value);
            }
            ("gamma", BathSection::TargetZ { gamma, .. }) => *gamma = value,
            (
                "f",
                BathSection::TargetZ {
                    f, f_left, f_right, ..
                },
            ) => {
                *f = Some(value);
                *f_left = None;
                *f_right = None;
            }
            (
                "f_left" | "f_right",
                BathSection::TargetZ {
                    f, f_left, f_right, ..
                },
            ) => {
                if let Some(shared) = f.take() {
                    f_left.get_or_insert(shared);
                    f_right.get_or_insert(-shared);
                }
                if name == "f_left" {
                    *f_left = Some(value);
                } else {
                    *f_right = Some(value);
                }
            }
            ("k", BathSection::TwistedXy { k, .. }) => *k = value,
            ("k_prime", BathSection::TwistedXy { k_prime, .. }) => *k_prime = Some(value),
            ("rate", BathSection::TwistedXy { rate, .. }) => *rate = value,
            (other, _) if SWEEP_PARAMETERS.contains(&other) => {
                return Err(Error::Config(format!(
                    "sweep parameter {other:?} does not apply to this bath type"
                )))
            }
            (other, _) => return Err(Error::Config(format!("unknown parameter {other:?}"))),
        }
        Ok(out)
    }
}

impl ModelSection {
    pub fn resolve(&self) -> Result<ChainSpec> {
        let n = self.n_sites;
        let given = [
            self.delta.is_some(),
            self.delta_uniform.is_some(),
            self.graded.is_some(),
        ]
        .iter()
        .filter(|&&x| x)
        .count();
        if given != 1 {
            return Err(Error::Config(
                "model needs exactly one of delta, delta_uniform or graded".into(),
            ));
        }
        let delta = match (&self.delta, self.delta_uniform, self.graded) {
            (Some(d), _, _) => d.clone(),
            (_, Some(u), _) => vec![u; n.saturating_sub(1)],
            (_, _, Some(g)) => g.bonds(n)?,
            _ => unreachable!(),
        };
        let b_field = match (&self.b_field, self.b_uniform) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "model accepts b_field or b_uniform, not both".into(),
                ))
            }
            (Some(b), None) => b.clone(),
            (None, Some(b)) => vec![b; n],
            (None, None) => vec![0.0; n],
        };
        ChainSpec::new(n, self.alpha, delta, b_field)
    }
}

impl BathSection {
    pub fn resolve(&self) -> Result<DissipatorSpec> {
        match *self {
            BathSection::TargetZ {
                gamma,
                f,
                f_left,
                f_right,
            } => {
                let (fl, fr) = match (f, f_left, f_right) {
                    (Some(f), None, None) => (f, -f),
                    (None, Some(l), Some(r)) => (l, r),
                    _ => {
                        return Err(Error::Config(
                            "target_z bath needs either f or both f_left and f_right".into(),
                        ))
                    }
                };
                Ok(DissipatorSpec::TargetZ {
                    gamma,
                    f_left: fl,
                    f_right: fr,
                })
            }
            BathSection::TwistedXy {
                k,
                k_prime,
                rate,
                layout,
            } => Ok(DissipatorSpec::TwistedXy {
                k,
                k_prime: k_prime.unwrap_or(-k),
                rate,
                layout,
            }),
        }
    }
}

impl ClassicalSection {
    /// `(eps, spec)` per row; `eps` is `None` without a linearized block.
    pub fn specs(&self) -> Result<Vec<(Option<f64>, ClassicalChainSpec)>> {
        match (&self.linearized, self.t_left, self.t_right) {
            (Some(lin), None, None) => {
                if lin.eps.is_empty() {
                    return Err(Error::Config("classical.linearized.eps is empty".into()));
                }
                lin.eps
                    .iter()
                    .map(|&eps| {
                        let spec = ClassicalChainSpec::new(
                            self.c.clone(),
                            self.alpha_exp,
                            lin.t_base + lin.a_left * eps,
                            lin.t_base + lin.a_right * eps,
                        )?;
                        Ok((Some(eps), spec))
                    })
                    .collect()
            }
            (None, Some(tl), Some(tr)) => Ok(vec![(
                None,
                ClassicalChainSpec::new(self.c.clone(), self.alpha_exp, tl, tr)?,
            )]),
            _ => Err(Error::Config(
                "classical section needs t_left and t_right, or a linearized block".into(),
            )),
        }
    }
}
