//! Scenario files (JSON).
//!
//! ```json
//! {
//!   "model": {"type": "chain", "n": 4, "t": 1.0, "mu": 0.3},
//!   "beta": [0.5, 1.0, 2.0],
//!   "excitations": [{"mode": 0}, {"vector": [1, 0, 0, 0, 0, 0, 0, 0], "symmetrize": true}],
//!   "reference": [{"mode": 2}],
//!   "tasks": ["single", "multi", "between", "verify"]
//! }
//! ```
//!
//! Models: `chain {n, t, mu}`, `random {n, seed}` or `explicit` with either the
//! `n x n` block `h0` or the full `2n x 2n` generator `h`. Complex entries are
//! written as a number or as `[re, im]`. `beta` is a number, a list, or
//! `{"min", "max", "steps"}` for a geometric grid. Mode indices count the
//! positive-energy modes in ascending order, starting at 0.

use std::path::Path;

use carrel_core::models::{chain_hamiltonian, seeded_random_hermitian};
use carrel_core::{CMatrix, CVector, ExcitationVector, OneParticleSpace, SelfDualHamiltonian, C64};
use serde::Deserialize;

use crate::CliError;

/// Models larger than this are refused as a resource limit.
pub const MAX_MODEL_MODES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Single,
    Multi,
    Between,
    Exponential,
    Npoint,
    Verify,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(default)]
    name: Option<String>,
    model: RawModel,
    beta: RawBeta,
    #[serde(default)]
    excitations: Vec<RawExcitation>,
    #[serde(default)]
    reference: Vec<RawExcitation>,
    tasks: Vec<Task>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawModel {
    Chain {
        n: usize,
        t: f64,
        mu: f64,
    },
    Random {
        n: usize,
        seed: u64,
    },
    Explicit {
        #[serde(default)]
        h0: Option<Vec<Vec<Entry>>>,
        #[serde(default)]
        h: Option<Vec<Vec<Entry>>>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Entry> for C64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(re) => C64::new(re, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaSweep {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl BetaSweep {
    /// Geometric grid from `min` to `max` inclusive.
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        check_beta(self.min)?;
        check_beta(self.max)?;
        if self.max < self.min {
            return Err(CliError::Input(format!(
                "beta sweep: max {} below min {}",
                self.max, self.min
            )));
        }
        match self.steps {
            0 => Err(CliError::Input("beta sweep needs at least one step".into())),
            1 => Ok(vec![self.min]),
            k => {
                let ratio = self.max / self.min;
                let mut out: Vec<f64> = (0..k)
                    .map(|j| self.min * ratio.powf(j as f64 / (k - 1) as f64))
                    .collect();
                out[k - 1] = self.max;
                Ok(out)
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawBeta {
    Single(f64),
    List(Vec<f64>),
    Sweep(BetaSweep),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawExcitation {
    Mode(ModeSpec),
    Vector(VectorSpec),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeSpec {
    mode: usize,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorSpec {
    vector: Vec<Entry>,
    #[serde(default)]
    symmetrize: bool,
    #[serde(default)]
    label: Option<String>,
}

/// Command-line overrides applied while validating a scenario.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    /// Replaces the seed of a `random` model.
    pub seed: Option<u64>,
    /// Replaces `beta`.
    pub sweep: Option<BetaSweep>,
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: Option<String>,
    pub hamiltonian: SelfDualHamiltonian,
    pub betas: Vec<f64>,
    pub excitations: Vec<ExcitationVector>,
    pub reference: Vec<ExcitationVector>,
    pub tasks: Vec<Task>,
}

impl Scenario {
    pub fn wants_oracle(&self) -> bool {
        self.tasks.contains(&Task::Verify)
    }
}

pub fn load_scenario(path: &Path, overrides: Overrides) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&text, overrides)
}

pub fn parse_scenario(text: &str, overrides: Overrides) -> Result<Scenario, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawScenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Input(format!("scenario field `{path}`: {}", e.into_inner()))
    })?;

    let hamiltonian = build_model(raw.model, overrides.seed)?;
    let betas = match (overrides.sweep, raw.beta) {
        (Some(sweep), _) => sweep.grid()?,
        (None, RawBeta::Single(b)) => vec![b],
        (None, RawBeta::List(list)) => list,
        (None, RawBeta::Sweep(sweep)) => sweep.grid()?,
    };
    if betas.is_empty() {
        return Err(CliError::Input("beta: empty list".into()));
    }
    betas.iter().try_for_each(|&b| check_beta(b))?;

    if raw.tasks.is_empty() {
        return Err(CliError::Input("tasks: empty list".into()));
    }
    if raw.tasks.iter().all(|&t| t == Task::Verify) {
        return Err(CliError::Input(
            "tasks: `verify` needs at least one computation to check".into(),
        ));
    }

    let excitations = resolve(&hamiltonian, raw.excitations, "excitations", "f")?;
    let reference = resolve(&hamiltonian, raw.reference, "reference", "g")?;
    Ok(Scenario {
        name: raw.name,
        hamiltonian,
        betas,
        excitations,
        reference,
        tasks: raw.tasks,
    })
}

fn check_beta(beta: f64) -> Result<(), CliError> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "beta must be positive and finite, got {beta}"
        )))
    }
}

fn check_size(n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Input("model: n must be at least 1".into()));
    }
    if n > MAX_MODEL_MODES {
        return Err(CliError::Resource(format!(
            "model has {n} modes, above the limit of {MAX_MODEL_MODES}"
        )));
    }
    Ok(())
}

fn matrix(rows: Vec<Vec<Entry>>, what: &str) -> Result<CMatrix, CliError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Input(format!(
            "model.{what}: expected a square matrix"
        )));
    }
    Ok(CMatrix::from_fn(n, n, |r, c| rows[r][c].into()))
}

fn build_model(model: RawModel, seed: Option<u64>) -> Result<SelfDualHamiltonian, CliError> {
    let wrap = |e: carrel_core::Error| CliError::Input(format!("model: {e}"));
    match model {
        RawModel::Chain { n, t, mu } => {
            check_size(n)?;
            let space = OneParticleSpace::canonical(n).map_err(wrap)?;
            let h0 = chain_hamiltonian(n, t, mu).map_err(wrap)?;
            SelfDualHamiltonian::embed(&space, &h0).map_err(wrap)
        }
        RawModel::Random { n, seed: file_seed } => {
            check_size(n)?;
            let space = OneParticleSpace::canonical(n).map_err(wrap)?;
            let h0 = seeded_random_hermitian(n, seed.unwrap_or(file_seed)).map_err(wrap)?;
            SelfDualHamiltonian::embed(&space, &h0).map_err(wrap)
        }
        RawModel::Explicit { h0, h } => match (h0, h) {
            (Some(rows), None) => {
                let h0 = matrix(rows, "h0")?;
                check_size(h0.nrows())?;
                let space = OneParticleSpace::canonical(h0.nrows()).map_err(wrap)?;
                SelfDualHamiltonian::embed(&space, &h0).map_err(wrap)
            }
            (None, Some(rows)) => {
                let h = matrix(rows, "h")?;
                if h.nrows() % 2 == 1 {
                    return Err(CliError::Input("model.h: dimension must be even".into()));
                }
                check_size(h.nrows() / 2)?;
                let space = OneParticleSpace::canonical(h.nrows() / 2).map_err(wrap)?;
                SelfDualHamiltonian::new(&space, h).map_err(wrap)
            }
            _ => Err(CliError::Input(
                "model: explicit models need exactly one of `h0` or `h`".into(),
            )),
        },
    }
}

fn resolve(
    h: &SelfDualHamiltonian,
    specs: Vec<RawExcitation>,
    field: &str,
    prefix: &str,
) -> Result<Vec<ExcitationVector>, CliError> {
    specs
        .into_iter()
        .enumerate()
        .map(|(idx, spec)| {
            let wrap = |e: carrel_core::Error| CliError::Input(format!("{field}[{idx}]: {e}"));
            match spec {
                RawExcitation::Mode(m) => {
                    let f = ExcitationVector::spectral(h, m.mode).map_err(wrap)?;
                    Ok(match m.label {
                        Some(label) => f.with_label(label),
                        None => f,
                    })
                }
                RawExcitation::Vector(v) => {
                    let label = v.label.unwrap_or_else(|| format!("{prefix}{idx}"));
                    let comps =
                        CVector::from_iterator(v.vector.len(), v.vector.into_iter().map(C64::from));
                    if v.symmetrize {
                        ExcitationVector::symmetrize(h.space(), &comps, label).map_err(wrap)
                    } else {
                        ExcitationVector::new(h.space(), comps, label).map_err(wrap)
                    }
                }
            }
        })
        .collect()
}
