//! The repeated-game solving loop.
//!
//! Two regret minimizers play a saddle problem against each other, either
//! simultaneously or in alternation. The maximizing player is driven as a
//! minimizer of the negated subgradient, so one interface serves both sides.
//! Weighted averages of the iterates are maintained with decision weight
//! `t^p` and the progress metric is recorded on a checkpoint schedule.
//!
//! Alternation runs the four-step order: the x-player chooses from its
//! standing payoff, the y-player observes its subgradient at the fresh `x_t`
//! paired with its previous decision and updates, the y-player chooses, and
//! finally the x-player observes at `(x_t, y_t)` and updates. Both players'
//! round-`t` iterates enter the averages regardless of the update order.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::minimizers::{DecisionSet, Minimizer};
use crate::vecmath::{all_finite, dot};

/// Iterate/payoff weighting: decision weight `t^p`, payoff weight `t^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AveragingScheme {
    pub decision_exponent: u32,
    pub payoff_exponent: u32,
}

impl AveragingScheme {
    pub const UNIFORM: Self = Self {
        decision_exponent: 0,
        payoff_exponent: 0,
    };
    pub const LINEAR: Self = Self {
        decision_exponent: 1,
        payoff_exponent: 0,
    };
    pub const QUADRATIC: Self = Self {
        decision_exponent: 2,
        payoff_exponent: 0,
    };
    pub const LINEAR_ON_BOTH: Self = Self {
        decision_exponent: 1,
        payoff_exponent: 1,
    };

    /// Exponents above 2 are rejected.
    pub fn new(decision_exponent: u32, payoff_exponent: u32) -> Result<Self> {
        if decision_exponent > 2 || payoff_exponent > 2 {
            return Err(Error::InvalidParameter {
                name: "averaging exponent",
                value: decision_exponent.max(payoff_exponent) as f64,
            });
        }
        Ok(Self {
            decision_exponent,
            payoff_exponent,
        })
    }

    pub fn decision_weight(&self, t: usize) -> f64 {
        (t as f64).powi(self.decision_exponent as i32)
    }

    pub fn payoff_weight(&self, t: usize) -> f64 {
        (t as f64).powi(self.payoff_exponent as i32)
    }

    pub fn label(&self) -> String {
        match (self.decision_exponent, self.payoff_exponent) {
            (0, 0) => "uniform".into(),
            (1, 0) => "linear".into(),
            (2, 0) => "quadratic".into(),
            (p, q) => format!("p{p}q{q}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Simultaneous,
    Alternation,
}

impl RunMode {
    pub fn label(&self) -> &'static str {
        match self {
            RunMode::Simultaneous => "simultaneous",
            RunMode::Alternation => "alternation",
        }
    }
}

/// When to record metric checkpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckpointSchedule {
    /// Powers of two up to the horizon, plus the horizon itself.
    Geometric,
    Explicit(Vec<usize>),
}

impl CheckpointSchedule {
    pub fn points(&self, horizon: usize) -> Vec<usize> {
        let mut pts = match self {
            CheckpointSchedule::Geometric => {
                let mut pts = Vec::new();
                let mut p = 1usize;
                while p <= horizon {
                    pts.push(p);
                    p = match p.checked_mul(2) {
                        Some(v) => v,
                        None => break,
                    };
                }
                pts.push(horizon);
                pts
            }
            CheckpointSchedule::Explicit(pts) => {
                pts.iter().copied().filter(|&p| p >= 1 && p <= horizon).collect()
            }
        };
        pts.sort_unstable();
        pts.dedup();
        pts
    }
}

/// A convex-concave saddle problem exposed through subgradient oracles and a
/// progress metric. Oracles must be deterministic functions of `(x, y)`.
pub trait SaddleProblem {
    fn x_set(&self) -> DecisionSet;
    fn y_set(&self) -> DecisionSet;
    /// `f ∈ ∂_x F(x, y)`.
    fn x_subgradient(&self, x: &[f64], y: &[f64]) -> Vec<f64>;
    /// `g ∈ ∂_y F(x, y)`.
    fn y_subgradient(&self, x: &[f64], y: &[f64]) -> Vec<f64>;
    /// Duality gap or worst-case loss of the averaged iterates.
    fn metric(&self, x_avg: &[f64], y_avg: &[f64]) -> f64;
}

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub iteration: usize,
    pub metric: f64,
    pub x_avg: Vec<f64>,
    pub y_avg: Vec<f64>,
    pub elapsed_s: f64,
}

/// Checkpointed trajectory of one run plus the configuration echo.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub checkpoints: Vec<Checkpoint>,
    pub algorithm_x: String,
    pub algorithm_y: String,
    pub scheme: AveragingScheme,
    pub mode: RunMode,
    pub seed: Option<u64>,
}

/// A run together with its full oracle histories, for regret accounting.
#[derive(Debug, Clone)]
pub struct TracedRun {
    pub record: RunRecord,
    pub x_decisions: Vec<Vec<f64>>,
    pub y_decisions: Vec<Vec<f64>>,
    /// `f_t` as observed by the x-player.
    pub x_losses: Vec<Vec<f64>>,
    /// Raw `g_t` (before negation for the y-player's minimizer).
    pub y_gradients: Vec<Vec<f64>>,
}

/// Run `horizon` rounds of self-play and record metric checkpoints.
pub fn run(
    problem: &dyn SaddleProblem,
    algo_x: &mut dyn Minimizer,
    algo_y: &mut dyn Minimizer,
    horizon: usize,
    scheme: AveragingScheme,
    mode: RunMode,
    schedule: &CheckpointSchedule,
) -> Result<RunRecord> {
    run_inner(problem, algo_x, algo_y, horizon, scheme, mode, schedule, false)
        .map(|traced| traced.record)
}

/// As [`run`], but keeps the decision and oracle histories.
pub fn run_traced(
    problem: &dyn SaddleProblem,
    algo_x: &mut dyn Minimizer,
    algo_y: &mut dyn Minimizer,
    horizon: usize,
    scheme: AveragingScheme,
    mode: RunMode,
    schedule: &CheckpointSchedule,
) -> Result<TracedRun> {
    run_inner(problem, algo_x, algo_y, horizon, scheme, mode, schedule, true)
}

#[allow(clippy::too_many_arguments)]
fn run_inner(
    problem: &dyn SaddleProblem,
    algo_x: &mut dyn Minimizer,
    algo_y: &mut dyn Minimizer,
    horizon: usize,
    scheme: AveragingScheme,
    mode: RunMode,
    schedule: &CheckpointSchedule,
    trace: bool,
) -> Result<TracedRun> {
    if horizon == 0 {
        return Err(Error::InvalidParameter {
            name: "horizon",
            value: 0.0,
        });
    }
    let n = problem.x_set().dim();
    let m = problem.y_set().dim();
    let start = Instant::now();
    let points = schedule.points(horizon);
    let mut next_point = 0usize;

    let mut x_sum = vec![0.0; n];
    let mut y_sum = vec![0.0; m];
    let mut weight_sum = 0.0;
    let mut checkpoints = Vec::with_capacity(points.len());
    let mut trace_data = TraceData::new(trace, horizon);

    // The y-player's standing decision; in alternation its first update is
    // paired with this initial point.
    let mut y_prev = algo_y.choose();
    if y_prev.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: y_prev.len(),
        });
    }

    for t in 1..=horizon {
        let payoff_w = scheme.payoff_weight(t);
        let (x_t, y_t) = match mode {
            RunMode::Simultaneous => {
                let x_t = checked_decision(algo_x.choose(), n)?;
                let y_t = checked_decision(algo_y.choose(), m)?;
                let f = checked_oracle(problem.x_subgradient(&x_t, &y_t), n)?;
                let g = checked_oracle(problem.y_subgradient(&x_t, &y_t), m)?;
                algo_x.observe(&f, payoff_w)?;
                algo_y.observe(&negated(&g), payoff_w)?;
                trace_data.push(&x_t, &y_t, f, g);
                (x_t, y_t)
            }
            RunMode::Alternation => {
                let x_t = checked_decision(algo_x.choose(), n)?;
                let g = checked_oracle(problem.y_subgradient(&x_t, &y_prev), m)?;
                algo_y.observe(&negated(&g), payoff_w)?;
                let y_t = checked_decision(algo_y.choose(), m)?;
                let f = checked_oracle(problem.x_subgradient(&x_t, &y_t), n)?;
                algo_x.observe(&f, payoff_w)?;
                trace_data.push(&x_t, &y_t, f, g);
                (x_t, y_t)
            }
        };

        let w = scheme.decision_weight(t);
        for (s, &v) in x_sum.iter_mut().zip(&x_t) {
            *s += w * v;
        }
        for (s, &v) in y_sum.iter_mut().zip(&y_t) {
            *s += w * v;
        }
        weight_sum += w;
        y_prev = y_t;

        if next_point < points.len() && t == points[next_point] {
            let x_avg: Vec<f64> = x_sum.iter().map(|&s| s / weight_sum).collect();
            let y_avg: Vec<f64> = y_sum.iter().map(|&s| s / weight_sum).collect();
            let metric = problem.metric(&x_avg, &y_avg);
            checkpoints.push(Checkpoint {
                iteration: t,
                metric,
                x_avg,
                y_avg,
                elapsed_s: start.elapsed().as_secs_f64(),
            });
            next_point += 1;
        }
    }

    Ok(TracedRun {
        record: RunRecord {
            checkpoints,
            algorithm_x: algo_x.name().to_string(),
            algorithm_y: algo_y.name().to_string(),
            scheme,
            mode,
            seed: None,
        },
        x_decisions: trace_data.x_decisions,
        y_decisions: trace_data.y_decisions,
        x_losses: trace_data.x_losses,
        y_gradients: trace_data.y_gradients,
    })
}

struct TraceData {
    enabled: bool,
    x_decisions: Vec<Vec<f64>>,
    y_decisions: Vec<Vec<f64>>,
    x_losses: Vec<Vec<f64>>,
    y_gradients: Vec<Vec<f64>>,
}

impl TraceData {
    fn new(enabled: bool, horizon: usize) -> Self {
        let cap = if enabled { horizon } else { 0 };
        Self {
            enabled,
            x_decisions: Vec::with_capacity(cap),
            y_decisions: Vec::with_capacity(cap),
            x_losses: Vec::with_capacity(cap),
            y_gradients: Vec::with_capacity(cap),
        }
    }

    fn push(&mut self, x: &[f64], y: &[f64], f: Vec<f64>, g: Vec<f64>) {
        if self.enabled {
            self.x_decisions.push(x.to_vec());
            self.y_decisions.push(y.to_vec());
            self.x_losses.push(f);
            self.y_gradients.push(g);
        }
    }
}

fn checked_decision(v: Vec<f64>, expected: usize) -> Result<Vec<f64>> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        });
    }
    Ok(v)
}

fn checked_oracle(v: Vec<f64>, expected: usize) -> Result<Vec<f64>> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        });
    }
    if !all_finite(&v) {
        return Err(Error::NonFinite {
            what: "oracle output",
        });
    }
    Ok(v)
}

fn negated(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| -x).collect()
}

/// `Σ t^p x_t / Σ t^p` over a nonempty iterate list.
pub fn weighted_average(iterates: &[Vec<f64>], exponent: u32) -> Result<Vec<f64>> {
    if iterates.is_empty() {
        return Err(Error::Empty { what: "iterates" });
    }
    let dim = iterates[0].len();
    let mut sum = vec![0.0; dim];
    let mut total = 0.0;
    for (t, x) in iterates.iter().enumerate() {
        if x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: x.len(),
            });
        }
        let w = ((t + 1) as f64).powi(exponent as i32);
        for (s, &v) in sum.iter_mut().zip(x) {
            *s += w * v;
        }
        total += w;
    }
    Ok(sum.into_iter().map(|s| s / total).collect())
}

/// Weighted regret `Σ ω_t ⟨f_t, x_t⟩ − min_{x∈X} Σ ω_t ⟨f_t, x⟩`, with the
/// comparator minimum in closed form per decision set.
pub fn regret_to_date(
    losses: &[Vec<f64>],
    decisions: &[Vec<f64>],
    weights: &[f64],
    set: &DecisionSet,
) -> Result<f64> {
    if losses.len() != decisions.len() || losses.len() != weights.len() {
        return Err(Error::MisalignedHistories {
            losses: losses.len(),
            decisions: decisions.len(),
            weights: weights.len(),
        });
    }
    let dim = set.dim();
    let mut played = 0.0;
    let mut aggregate = vec![0.0; dim];
    for ((f, x), &w) in losses.iter().zip(decisions).zip(weights) {
        if f.len() != dim || x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: f.len().max(x.len()),
            });
        }
        played += w * dot(f, x);
        for (a, &fi) in aggregate.iter_mut().zip(f) {
            *a += w * fi;
        }
    }
    Ok(played - set.linear_minimum(&aggregate)?)
}
