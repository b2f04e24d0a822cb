//! Task dispatch and oracle cross-checks.

use std::time::Instant;

use carrel_core::{
    relent_between, relent_exponential, relent_multi, relent_single, umegaki, DensityMatrix,
    ExcitationVector, FockRep, QuasifreeState, C64,
};

use crate::scenario::{Scenario, Task};
use crate::{CliError, HARD_MAX_MODES};

#[derive(Debug, Clone, Copy)]
pub struct Options {
    /// Attach oracle values even when the scenario does not list `verify`.
    pub verify: bool,
    pub max_modes: usize,
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            verify: false,
            max_modes: carrel_core::fock_oracle::DEFAULT_MAX_MODES,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub task: String,
    pub labels: String,
    pub beta: f64,
    pub value: f64,
    pub oracle_value: Option<f64>,
    pub abs_err: Option<f64>,
    pub ms: Option<f64>,
    /// Why no oracle value is attached.
    pub note: Option<String>,
}

impl Row {
    /// Whether the row carries an oracle value that disagrees beyond `tolerance`.
    pub fn breaches(&self, tolerance: f64) -> bool {
        matches!(self.abs_err, Some(e) if e.is_nan() || e > tolerance)
    }
}

type OracleResult = Result<f64, String>;

struct Oracle {
    rep: FockRep,
    rho: DensityMatrix,
}

impl Oracle {
    fn excited(&self, fs: &[ExcitationVector]) -> Result<DensityMatrix, String> {
        self.rep
            .excited_density(&self.rho, fs)
            .map_err(|e| e.to_string())
    }

    fn entropy(&self, fs: &[ExcitationVector]) -> OracleResult {
        umegaki(&self.rho, &self.excited(fs)?).map_err(|e| e.to_string())
    }

    fn between(&self, fs: &[ExcitationVector], gs: &[ExcitationVector]) -> OracleResult {
        umegaki(&self.excited(gs)?, &self.excited(fs)?).map_err(|e| e.to_string())
    }

    fn exponential(&self, f: &ExcitationVector) -> OracleResult {
        let e = self.rep.exponential_unitary(f).map_err(|e| e.to_string())?;
        umegaki(&self.rho, &self.rho.conjugated(&e)).map_err(|e| e.to_string())
    }

    fn n_point(&self, fs: &[ExcitationVector]) -> Result<C64, String> {
        let product = self.rep.product(fs).map_err(|e| e.to_string())?;
        Ok(self.rho.expectation(&product))
    }
}

fn labels(fs: &[ExcitationVector]) -> String {
    fs.iter().map(|f| f.label()).collect::<Vec<_>>().join("+")
}

struct Builder<'a> {
    rows: &'a mut Vec<Row>,
    beta: f64,
    timing: bool,
}

impl Builder<'_> {
    fn push(
        &mut self,
        task: &str,
        labels: String,
        value: f64,
        started: Instant,
        oracle: Option<OracleResult>,
    ) {
        let ms = self.timing.then(|| started.elapsed().as_secs_f64() * 1e3);
        let (oracle_value, abs_err, note) = match oracle {
            None => (None, None, None),
            Some(Ok(o)) => (Some(o), Some((value - o).abs()), None),
            Some(Err(reason)) => (None, None, Some(format!("oracle unavailable: {reason}"))),
        };
        self.rows.push(Row {
            task: task.to_string(),
            labels,
            beta: self.beta,
            value,
            oracle_value,
            abs_err,
            ms,
            note,
        });
    }
}

/// One row per task, inverse temperature and excitation set, in scenario order.
pub fn run(scenario: &Scenario, options: &Options) -> Result<Vec<Row>, CliError> {
    if options.max_modes > HARD_MAX_MODES {
        return Err(CliError::Resource(format!(
            "oracle cap {} exceeds the hard limit of {HARD_MAX_MODES} modes",
            options.max_modes
        )));
    }
    let h = &scenario.hamiltonian;
    let verify = options.verify || scenario.wants_oracle();
    let rep =
        verify.then(|| FockRep::with_max_modes(h, options.max_modes).map_err(|e| e.to_string()));

    let fs = &scenario.excitations;
    let gs = &scenario.reference;
    let mut rows = Vec::new();
    for &task in &scenario.tasks {
        for &beta in &scenario.betas {
            let state = QuasifreeState::kms(h, beta)?;
            let oracle: Option<Result<Oracle, String>> = rep.as_ref().map(|r| {
                let rep = r.clone()?;
                let rho = rep.gibbs_density(beta).map_err(|e| e.to_string())?;
                Ok(Oracle { rep, rho })
            });
            let check = |f: &dyn Fn(&Oracle) -> OracleResult| -> Option<OracleResult> {
                oracle.as_ref().map(|o| match o {
                    Ok(o) => f(o),
                    Err(reason) => Err(reason.clone()),
                })
            };
            let mut out = Builder {
                rows: &mut rows,
                beta,
                timing: options.timing,
            };
            match task {
                Task::Verify => {}
                Task::Single => {
                    for f in fs {
                        let started = Instant::now();
                        let value = relent_single(&state, f)?.value;
                        let one = std::slice::from_ref(f);
                        out.push(
                            "single",
                            f.label().to_string(),
                            value,
                            started,
                            check(&|o| o.entropy(one)),
                        );
                    }
                }
                Task::Multi => {
                    let started = Instant::now();
                    let value = relent_multi(&state, fs)?.value;
                    out.push(
                        "multi",
                        labels(fs),
                        value,
                        started,
                        check(&|o| o.entropy(fs)),
                    );
                }
                Task::Between => {
                    let started = Instant::now();
                    let value = relent_between(&state, fs, gs)?.value;
                    let label = format!("{}|{}", labels(fs), labels(gs));
                    out.push(
                        "between",
                        label,
                        value,
                        started,
                        check(&|o| o.between(fs, gs)),
                    );
                }
                Task::Exponential => {
                    for f in fs {
                        let started = Instant::now();
                        let value = relent_exponential(&state, f)?.value;
                        out.push(
                            "exponential",
                            f.label().to_string(),
                            value,
                            started,
                            check(&|o| o.exponential(f)),
                        );
                    }
                }
                Task::Npoint => {
                    let started = Instant::now();
                    let value = state.n_point(fs)?;
                    let oracle = check(&|o| o.n_point(fs).map(|z| z.re));
                    out.push("npoint", labels(fs), value.re, started, oracle);
                    let oracle = check(&|o| o.n_point(fs).map(|z| z.im));
                    out.push("npoint_im", labels(fs), value.im, started, oracle);
                }
            }
        }
    }
    Ok(rows)
}
