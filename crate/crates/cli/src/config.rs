//! Experiment configuration: CLI flags layered over an optional JSON file,
//! resolved into a fully-validated experiment description.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use cba_core::data_io::FeatureDistribution;
use cba_core::framework::{AveragingScheme, RunMode};
use cba_core::minimizers::Algorithm;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    MatrixGame,
    Dro,
}

impl ProblemKind {
    pub fn label(&self) -> &'static str {
        match self {
            ProblemKind::MatrixGame => "matrix-game",
            ProblemKind::Dro => "dro",
        }
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "matrix-game" => Ok(ProblemKind::MatrixGame),
            "dro" => Ok(ProblemKind::Dro),
            other => Err(CliError::config(format!("unknown problem `{other}`"))),
        }
    }
}

/// How the prox-family step size is chosen. The Blackwell family ignores it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepMode {
    Theory,
    Fixed(f64),
    Multiplier(f64),
    Adaptive,
}

impl StepMode {
    pub fn parse(s: &str, alpha_flag: Option<f64>) -> Result<Self, CliError> {
        let bad = |detail: &str| CliError::config(format!("invalid step-mode `{s}`: {detail}"));
        match s.split_once(':') {
            None => match s {
                "theory" => Ok(StepMode::Theory),
                "adaptive" => Ok(StepMode::Adaptive),
                "multiplier" => Ok(StepMode::Multiplier(alpha_flag.unwrap_or(1.0))),
                "fixed" => Err(bad("fixed needs a value, e.g. fixed:0.5")),
                _ => Err(bad("expected theory, fixed:<eta>, multiplier:<alpha> or adaptive")),
            },
            Some(("fixed", v)) => {
                let eta: f64 = v.parse().map_err(|_| bad("bad number"))?;
                if eta > 0.0 {
                    Ok(StepMode::Fixed(eta))
                } else {
                    Err(bad("eta must be positive"))
                }
            }
            Some(("multiplier", v)) => {
                let alpha: f64 = v.parse().map_err(|_| bad("bad number"))?;
                if alpha > 0.0 {
                    Ok(StepMode::Multiplier(alpha))
                } else {
                    Err(bad("alpha must be positive"))
                }
            }
            Some(_) => Err(bad("expected theory, fixed:<eta>, multiplier:<alpha> or adaptive")),
        }
    }

    pub fn label(&self) -> String {
        match self {
            StepMode::Theory => "theory".into(),
            StepMode::Fixed(eta) => format!("fixed:{eta}"),
            StepMode::Multiplier(alpha) => format!("multiplier:{alpha}"),
            StepMode::Adaptive => "adaptive".into(),
        }
    }
}

/// One overlay of settings; CLI flags and the JSON config file share this
/// shape, with flags taking precedence field by field.
#[derive(Debug, Default, Clone, Serialize, Deserialize, clap::Args)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigOverlay {
    /// Algorithm for both self-play players: cba, cba+, rm, rm+, omd, ftrl, oomd, oftrl.
    #[arg(long)]
    pub algo: Option<String>,
    /// Number of repeated-game rounds.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Number of problem instances (seeds seed, seed+1, ...).
    #[arg(long)]
    pub instances: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// simultaneous or alternation.
    #[arg(long)]
    pub mode: Option<String>,
    /// uniform, linear or quadratic iterate averaging.
    #[arg(long)]
    pub averaging: Option<String>,
    /// theory, fixed:ETA, multiplier:ALPHA or adaptive.
    #[arg(long = "step-mode")]
    pub step_mode: Option<String>,
    /// Multiplier on the theoretical step size (used with step-mode multiplier).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Decision dimension of the x player / feature count.
    #[arg(long)]
    pub n: Option<usize>,
    /// Decision dimension of the y player / sample count.
    #[arg(long)]
    pub m: Option<usize>,
    /// uniform or normal synthetic entries.
    #[arg(long)]
    pub dist: Option<String>,
    /// libsvm dataset path (dro only).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Radius R of the model ball (dro).
    #[arg(long)]
    pub radius: Option<f64>,
    /// Squared radius λ of the reweighting ball (dro); default 1/(2m).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Parallel instance workers; defaults to the available cores.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl ConfigOverlay {
    /// Field-wise merge, `self` winning over `fallback`.
    pub fn over(self, fallback: ConfigOverlay) -> ConfigOverlay {
        ConfigOverlay {
            algo: self.algo.or(fallback.algo),
            steps: self.steps.or(fallback.steps),
            instances: self.instances.or(fallback.instances),
            seed: self.seed.or(fallback.seed),
            mode: self.mode.or(fallback.mode),
            averaging: self.averaging.or(fallback.averaging),
            step_mode: self.step_mode.or(fallback.step_mode),
            alpha: self.alpha.or(fallback.alpha),
            n: self.n.or(fallback.n),
            m: self.m.or(fallback.m),
            dist: self.dist.or(fallback.dist),
            data: self.data.or(fallback.data),
            radius: self.radius.or(fallback.radius),
            lambda: self.lambda.or(fallback.lambda),
            workers: self.workers.or(fallback.workers),
        }
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub problem: ProblemKind,
    pub algo: Algorithm,
    pub steps: usize,
    pub instances: usize,
    pub seed: u64,
    pub mode: RunMode,
    pub scheme: AveragingScheme,
    pub step_mode: StepMode,
    pub n: usize,
    pub m: usize,
    pub dist: FeatureDistribution,
    pub data: Option<PathBuf>,
    pub radius: f64,
    pub lambda: Option<f64>,
    pub workers: Option<usize>,
}

impl Experiment {
    pub fn resolve(problem: ProblemKind, overlay: ConfigOverlay) -> Result<Self, CliError> {
        let algo: Algorithm = overlay
            .algo
            .as_deref()
            .unwrap_or("cba+")
            .parse()
            .map_err(|e| CliError::config(format!("{e}")))?;
        let steps = overlay.steps.unwrap_or(1000);
        if steps == 0 {
            return Err(CliError::config("steps must be at least 1"));
        }
        let instances = overlay.instances.unwrap_or(1);
        if instances == 0 {
            return Err(CliError::config("instances must be at least 1"));
        }
        let mode = match overlay.mode.as_deref().unwrap_or("simultaneous") {
            "simultaneous" => RunMode::Simultaneous,
            "alternation" => RunMode::Alternation,
            other => return Err(CliError::config(format!("unknown mode `{other}`"))),
        };
        let scheme = match overlay.averaging.as_deref().unwrap_or("linear") {
            "uniform" => AveragingScheme::UNIFORM,
            "linear" => AveragingScheme::LINEAR,
            "quadratic" => AveragingScheme::QUADRATIC,
            other => return Err(CliError::config(format!("unknown averaging `{other}`"))),
        };
        let step_mode = StepMode::parse(
            overlay.step_mode.as_deref().unwrap_or("theory"),
            overlay.alpha,
        )?;
        if let Some(alpha) = overlay.alpha {
            if alpha <= 0.0 {
                return Err(CliError::config("alpha must be positive"));
            }
        }
        let (default_n, default_m, default_dist) = match problem {
            ProblemKind::MatrixGame => (10, 10, FeatureDistribution::Uniform),
            ProblemKind::Dro => (50, 50, FeatureDistribution::Normal),
        };
        let dist = match overlay.dist.as_deref() {
            None => default_dist,
            Some("uniform") => FeatureDistribution::Uniform,
            Some("normal") => FeatureDistribution::Normal,
            Some(other) => {
                return Err(CliError::config(format!("unknown dist `{other}`")));
            }
        };
        let n = overlay.n.unwrap_or(default_n);
        let m = overlay.m.unwrap_or(default_m);
        if n == 0 || m == 0 {
            return Err(CliError::config("n and m must be at least 1"));
        }
        if overlay.data.is_some() && problem == ProblemKind::MatrixGame {
            return Err(CliError::config("--data applies to the dro problem only"));
        }
        let radius = overlay.radius.unwrap_or(10.0);
        if radius <= 0.0 {
            return Err(CliError::config("radius must be positive"));
        }
        if let Some(lambda) = overlay.lambda {
            if lambda <= 0.0 {
                return Err(CliError::config("lambda must be positive"));
            }
        }
        Ok(Experiment {
            problem,
            algo,
            steps,
            instances,
            seed: overlay.seed.unwrap_or(0),
            mode,
            scheme,
            step_mode,
            n,
            m,
            dist,
            data: overlay.data,
            radius,
            lambda: overlay.lambda,
            workers: overlay.workers,
        })
    }

    pub fn dist_label(&self) -> &'static str {
        match self.dist {
            FeatureDistribution::Uniform => "uniform",
            FeatureDistribution::Normal => "normal",
        }
    }
}

pub fn load_config_file(path: &PathBuf) -> Result<ConfigOverlay, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("bad config {}: {e}", path.display())))
}
