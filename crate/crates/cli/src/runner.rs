//! Experiment execution: instance generation, self-play runs across parallel
//! workers, CSV rows per checkpoint and the cross-instance JSON summary.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use cba_core::data_io::{generate_matrix, generate_synthetic_dro, parse_libsvm, Dataset};
use cba_core::framework::{run, CheckpointSchedule, RunRecord, SaddleProblem};
use cba_core::minimizers::{build_minimizer, theoretical_step_size, StepPolicy};
use cba_core::problems::{DroInstance, MatrixGame};

use crate::config::{Experiment, ProblemKind, StepMode};
use crate::CliError;

/// Labels flipped when generating synthetic classification data.
const SYNTHETIC_FLIP: f64 = 0.1;
/// Metrics beyond this are reported as diverged rather than as numbers.
const DIVERGENCE_GUARD: f64 = 1e12;

pub const CSV_HEADER: &str = "instance,algorithm,iteration,metric,elapsed_s";

#[derive(Debug, Clone)]
pub struct CsvRow {
    pub instance: usize,
    pub algorithm: String,
    pub iteration: usize,
    pub metric: f64,
    pub elapsed_s: f64,
}

impl CsvRow {
    pub fn metric_field(&self) -> String {
        if self.metric.is_finite() && self.metric.abs() <= DIVERGENCE_GUARD {
            format!("{}", self.metric)
        } else {
            "diverged".into()
        }
    }

    fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{:.6}",
            self.instance,
            self.algorithm,
            self.iteration,
            self.metric_field(),
            self.elapsed_s
        )
    }
}

#[derive(Debug)]
pub struct ExperimentOutput {
    pub rows: Vec<CsvRow>,
    pub summary: serde_json::Value,
}

enum BuiltProblem {
    Matrix(MatrixGame),
    Dro(DroInstance),
}

impl BuiltProblem {
    fn as_saddle(&self) -> &dyn SaddleProblem {
        match self {
            BuiltProblem::Matrix(g) => g,
            BuiltProblem::Dro(d) => d,
        }
    }
}

fn load_dataset(path: &Path) -> Result<Dataset, CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::io(format!("cannot open dataset {}: {e}", path.display())))?;
    parse_libsvm(std::io::BufReader::new(file))
        .map_err(|e| CliError::io(format!("cannot parse dataset {}: {e}", path.display())))
}

fn build_problem(
    exp: &Experiment,
    shared_data: Option<&Dataset>,
    instance_seed: u64,
) -> Result<BuiltProblem, CliError> {
    match exp.problem {
        ProblemKind::MatrixGame => {
            let a = generate_matrix(exp.n, exp.m, exp.dist, instance_seed)
                .map_err(CliError::from_core)?;
            Ok(BuiltProblem::Matrix(
                MatrixGame::new(a).map_err(CliError::from_core)?,
            ))
        }
        ProblemKind::Dro => {
            let owned;
            let dataset = match shared_data {
                Some(d) => d,
                None => {
                    owned = generate_synthetic_dro(
                        exp.n,
                        exp.m,
                        exp.dist,
                        SYNTHETIC_FLIP,
                        instance_seed,
                    )
                    .map_err(CliError::from_core)?;
                    &owned
                }
            };
            let lambda = exp
                .lambda
                .unwrap_or(1.0 / (2.0 * dataset.num_samples() as f64));
            Ok(BuiltProblem::Dro(
                DroInstance::new(dataset, exp.radius, lambda).map_err(CliError::from_core)?,
            ))
        }
    }
}

/// Step policies for both players. Theory-based modes resolve the per-player
/// `η_th = √2·Ω/(L√T)` from the instance bounds; the Blackwell family takes
/// no step size at all.
fn step_policies(
    exp: &Experiment,
    problem: &BuiltProblem,
) -> Result<(StepPolicy, StepPolicy), CliError> {
    if exp.algo.is_parameter_free() {
        return Ok((StepPolicy::Fixed(1.0), StepPolicy::Fixed(1.0)));
    }
    let theory = |mult: f64| -> Result<(StepPolicy, StepPolicy), CliError> {
        let (omega_x, l_x, omega_y, l_y) = match problem {
            BuiltProblem::Matrix(g) => {
                let (lx, ly) = g.loss_bounds();
                (
                    g.x_set().diameter(),
                    lx.max(1e-12),
                    g.y_set().diameter(),
                    ly.max(1e-12),
                )
            }
            BuiltProblem::Dro(d) => {
                let b = d.bounds();
                (b.omega_x, b.l_x.max(1e-12), b.omega_y, b.l_y.max(1e-12))
            }
        };
        let eta_x = theoretical_step_size(omega_x, l_x, exp.steps).map_err(CliError::from_core)?;
        let eta_y = theoretical_step_size(omega_y, l_y, exp.steps).map_err(CliError::from_core)?;
        Ok((
            StepPolicy::Fixed(mult * eta_x),
            StepPolicy::Fixed(mult * eta_y),
        ))
    };
    match exp.step_mode {
        StepMode::Theory => theory(1.0),
        StepMode::Multiplier(alpha) => theory(alpha),
        StepMode::Fixed(eta) => Ok((StepPolicy::Fixed(eta), StepPolicy::Fixed(eta))),
        StepMode::Adaptive => Ok((
            StepPolicy::Adaptive { initial: 1.0 },
            StepPolicy::Adaptive { initial: 1.0 },
        )),
    }
}

fn run_instance(
    exp: &Experiment,
    shared_data: Option<&Dataset>,
    instance: usize,
) -> Result<Vec<CsvRow>, CliError> {
    let instance_seed = exp.seed + instance as u64;
    let problem = build_problem(exp, shared_data, instance_seed)?;
    let saddle = problem.as_saddle();
    let (policy_x, policy_y) = step_policies(exp, &problem)?;
    let mut algo_x =
        build_minimizer(exp.algo, &saddle.x_set(), policy_x).map_err(CliError::from_core)?;
    let mut algo_y =
        build_minimizer(exp.algo, &saddle.y_set(), policy_y).map_err(CliError::from_core)?;
    let mut record: RunRecord = run(
        saddle,
        algo_x.as_mut(),
        algo_y.as_mut(),
        exp.steps,
        exp.scheme,
        exp.mode,
        &CheckpointSchedule::Geometric,
    )
    .map_err(CliError::from_core)?;
    record.seed = Some(instance_seed);
    Ok(record
        .checkpoints
        .iter()
        .map(|cp| CsvRow {
            instance,
            algorithm: exp.algo.name().to_string(),
            iteration: cp.iteration,
            metric: cp.metric,
            elapsed_s: cp.elapsed_s,
        })
        .collect())
}

/// Run every instance (in parallel workers) and aggregate the summary.
pub fn run_experiment(exp: &Experiment) -> Result<ExperimentOutput, CliError> {
    let shared_data = match (&exp.data, exp.problem) {
        (Some(path), ProblemKind::Dro) => Some(load_dataset(path)?),
        _ => None,
    };
    let data_ref = shared_data.as_ref();

    let compute = || -> Result<Vec<Vec<CsvRow>>, CliError> {
        (0..exp.instances)
            .into_par_iter()
            .map(|i| run_instance(exp, data_ref, i))
            .collect()
    };
    let per_instance = match exp.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| CliError::config(format!("cannot build worker pool: {e}")))?
            .install(compute),
        None => compute(),
    }?;

    let rows: Vec<CsvRow> = per_instance.into_iter().flatten().collect();
    let summary = summarize(exp, &rows);
    Ok(ExperimentOutput { rows, summary })
}

fn summarize(exp: &Experiment, rows: &[CsvRow]) -> serde_json::Value {
    let mut iterations: Vec<usize> = rows.iter().map(|r| r.iteration).collect();
    iterations.sort_unstable();
    iterations.dedup();

    let checkpoints: Vec<serde_json::Value> = iterations
        .iter()
        .map(|&it| {
            let metrics: Vec<f64> = rows
                .iter()
                .filter(|r| r.iteration == it)
                .map(|r| r.metric)
                .collect();
            let finite: Vec<f64> = metrics
                .iter()
                .copied()
                .filter(|m| m.is_finite() && m.abs() <= DIVERGENCE_GUARD)
                .collect();
            let diverged = metrics.len() - finite.len();
            let (geo, arith) = if finite.is_empty() {
                (None, None)
            } else {
                let arith = finite.iter().sum::<f64>() / finite.len() as f64;
                let geo = (finite
                    .iter()
                    .map(|&m| m.max(1e-300).ln())
                    .sum::<f64>()
                    / finite.len() as f64)
                    .exp();
                (Some(geo), Some(arith))
            };
            json!({
                "iteration": it,
                "geometric_mean": geo,
                "arithmetic_mean": arith,
                "diverged": diverged,
            })
        })
        .collect();

    json!({
        "config": config_echo(exp),
        "checkpoints": checkpoints,
    })
}

fn config_echo(exp: &Experiment) -> serde_json::Value {
    json!({
        "problem": exp.problem.label(),
        "algo": exp.algo.name(),
        "steps": exp.steps,
        "instances": exp.instances,
        "seed": exp.seed,
        "mode": exp.mode.label(),
        "averaging": exp.scheme.label(),
        "step_mode": exp.step_mode.label(),
        "n": exp.n,
        "m": exp.m,
        "dist": exp.dist_label(),
        "data": exp.data.as_ref().map(|p| p.display().to_string()),
        "radius": exp.radius,
        "lambda": exp.lambda,
    })
}

pub fn write_csv<W: Write>(mut w: W, rows: &[CsvRow]) -> Result<(), CliError> {
    writeln!(w, "{CSV_HEADER}").map_err(|e| CliError::io(format!("cannot write csv: {e}")))?;
    for row in rows {
        writeln!(w, "{}", row.to_line())
            .map_err(|e| CliError::io(format!("cannot write csv: {e}")))?;
    }
    Ok(())
}

/// Resolve and print everything a fixed-step baseline needs before running.
pub fn describe(exp: &Experiment) -> Result<String, CliError> {
    let shared_data = match (&exp.data, exp.problem) {
        (Some(path), ProblemKind::Dro) => Some(load_dataset(path)?),
        _ => None,
    };
    let problem = build_problem(exp, shared_data.as_ref(), exp.seed)?;

    let mut out = String::new();
    let mut line = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
    line("problem", exp.problem.label().into());
    line("algo", exp.algo.name().into());
    line("steps", exp.steps.to_string());
    line("mode", exp.mode.label().into());
    line("averaging", exp.scheme.label());
    line("step_mode", exp.step_mode.label());
    match &problem {
        BuiltProblem::Matrix(g) => {
            line("n", g.n().to_string());
            line("m", g.m().to_string());
            line("kappa_x", "1".into());
            line("kappa_y", "1".into());
            line("omega_x", format!("{}", g.x_set().diameter()));
            line("omega_y", format!("{}", g.y_set().diameter()));
            let (lx, ly) = g.loss_bounds();
            line("l_x", format!("{lx}"));
            line("l_y", format!("{ly}"));
            let eta_x = theoretical_step_size(g.x_set().diameter(), lx.max(1e-12), exp.steps)
                .map_err(CliError::from_core)?;
            let eta_y = theoretical_step_size(g.y_set().diameter(), ly.max(1e-12), exp.steps)
                .map_err(CliError::from_core)?;
            line("eta_th_x", format!("{eta_x}"));
            line("eta_th_y", format!("{eta_y}"));
        }
        BuiltProblem::Dro(d) => {
            line("samples", d.num_samples().to_string());
            line("features", d.num_features().to_string());
            if let Some(data) = &shared_data {
                line("data", data.provenance().into());
            }
            line("radius", format!("{}", d.radius()));
            line("epsilon_y", format!("{}", d.y_radius()));
            line("kappa_x", format!("{}", d.radius()));
            let b = d.bounds();
            line("omega_x", format!("{}", b.omega_x));
            line("omega_y", format!("{}", b.omega_y));
            line("l_x", format!("{}", b.l_x));
            line("l_y", format!("{}", b.l_y));
            let eta_x = theoretical_step_size(b.omega_x, b.l_x.max(1e-12), exp.steps)
                .map_err(CliError::from_core)?;
            let eta_y = theoretical_step_size(b.omega_y, b.l_y.max(1e-12), exp.steps)
                .map_err(CliError::from_core)?;
            line("eta_th_x", format!("{eta_x}"));
            line("eta_th_y", format!("{eta_y}"));
            let margin = d.containment_margin();
            line("containment_margin", format!("{margin}"));
            if margin < 0.0 {
                line(
                    "warning",
                    "reweighting ball leaves the simplex; the conic reduction ranges over the full hyperplane slice".into(),
                );
            }
        }
    }
    Ok(out)
}
