//! Per-player regret minimizers and the prox subroutines they need.
//!
//! Two families are implemented behind the common [`Minimizer`] trait:
//!
//! * the Blackwell family — CBA and CBA+ aggregate lifted payoffs
//!   `v = (⟨f, x⟩/κ, −f)` and project onto the cone of the decision set; RM
//!   and RM+ are their simplex-specific variants that replace the exact
//!   projection with a cheap feasible point. None of them takes a step size.
//! * the prox family — OMD, FTRL and their optimistic variants, driven by a
//!   fixed or adaptive step size.
//!
//! Decision sets beyond the unit geometries are mapped onto them: an
//! origin-centered ball of radius `r` rescales decisions and losses by `r`,
//! and the confidence region `{y ∈ Δ : ‖y − y₀‖ ≤ ε}` is handled in the
//! hyperplane-slice coordinates `y = y₀ + ε·B·s` with `s` in the unit ball.

use crate::error::{Error, Result};
use crate::geometry::{
    cone_membership, project_cone, project_l1_ball, project_simplex, ConeGeometry,
    HyperplaneBasis, LiftedVector,
};
use crate::vecmath::{all_finite, dot, norm1, norm2, norm_inf};

/// A player's feasible set, in ambient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum DecisionSet {
    Simplex(usize),
    L1Ball(usize),
    L2Ball(usize),
    LInfBall(usize),
    /// ℓ2 ball with arbitrary center.
    Ball { center: Vec<f64>, radius: f64 },
    /// Confidence region Δ(m) ∩ {‖y − center‖₂ ≤ radius}.
    SimplexBall { center: Vec<f64>, radius: f64 },
}

impl DecisionSet {
    pub fn dim(&self) -> usize {
        match self {
            DecisionSet::Simplex(n)
            | DecisionSet::L1Ball(n)
            | DecisionSet::L2Ball(n)
            | DecisionSet::LInfBall(n) => *n,
            DecisionSet::Ball { center, .. } | DecisionSet::SimplexBall { center, .. } => {
                center.len()
            }
        }
    }

    /// Canonical starting point: the barycenter for the simplex, the center
    /// for balls.
    pub fn center(&self) -> Vec<f64> {
        match self {
            DecisionSet::Simplex(n) => vec![1.0 / *n as f64; *n],
            DecisionSet::L1Ball(n) | DecisionSet::L2Ball(n) | DecisionSet::LInfBall(n) => {
                vec![0.0; *n]
            }
            DecisionSet::Ball { center, .. } | DecisionSet::SimplexBall { center, .. } => {
                center.clone()
            }
        }
    }

    /// Euclidean diameter Ω = max ‖x − x′‖₂.
    pub fn diameter(&self) -> f64 {
        match self {
            DecisionSet::Simplex(_) => std::f64::consts::SQRT_2,
            DecisionSet::L1Ball(_) | DecisionSet::L2Ball(_) => 2.0,
            DecisionSet::LInfBall(n) => 2.0 * (*n as f64).sqrt(),
            DecisionSet::Ball { radius, .. } | DecisionSet::SimplexBall { radius, .. } => {
                2.0 * radius
            }
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let simplex_ok =
            |v: &[f64]| v.iter().all(|&c| c >= -tol) && (v.iter().sum::<f64>() - 1.0).abs() <= tol;
        match self {
            DecisionSet::Simplex(_) => simplex_ok(x),
            DecisionSet::L1Ball(_) => norm1(x) <= 1.0 + tol,
            DecisionSet::L2Ball(_) => norm2(x) <= 1.0 + tol,
            DecisionSet::LInfBall(_) => norm_inf(x) <= 1.0 + tol,
            DecisionSet::Ball { center, radius } => dist(x, center) <= radius + tol,
            DecisionSet::SimplexBall { center, radius } => {
                simplex_ok(x) && dist(x, center) <= radius + tol
            }
        }
    }

    /// Euclidean projection onto the set.
    pub fn euclidean_project(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(v.len())?;
        match self {
            DecisionSet::Simplex(_) => project_simplex(v),
            DecisionSet::L1Ball(_) => project_l1_ball(v),
            DecisionSet::L2Ball(_) => {
                let n = norm2(v);
                Ok(if n <= 1.0 {
                    v.to_vec()
                } else {
                    v.iter().map(|&x| x / n).collect()
                })
            }
            DecisionSet::LInfBall(_) => Ok(v.iter().map(|&x| x.clamp(-1.0, 1.0)).collect()),
            DecisionSet::Ball { center, radius } => {
                let shifted: Vec<f64> = v.iter().zip(center).map(|(&a, &c)| a - c).collect();
                let n = norm2(&shifted);
                let scale = radius / radius.max(n);
                Ok(center
                    .iter()
                    .zip(&shifted)
                    .map(|(&c, &s)| c + scale * s)
                    .collect())
            }
            DecisionSet::SimplexBall { center, radius } => {
                let zeros = vec![0.0; v.len()];
                prox_ball_simplex(center, *radius, v, &zeros, 1.0, DEFAULT_PROX_TOL)
            }
        }
    }

    /// Closed-form `min_{x ∈ set} ⟨g, x⟩`, used as the regret comparator.
    pub fn linear_minimum(&self, g: &[f64]) -> Result<f64> {
        self.check_dim(g.len())?;
        Ok(match self {
            DecisionSet::Simplex(_) => g.iter().fold(f64::INFINITY, |m, &v| m.min(v)),
            DecisionSet::L1Ball(_) => -norm_inf(g),
            DecisionSet::L2Ball(_) => -norm2(g),
            DecisionSet::LInfBall(_) => -norm1(g),
            DecisionSet::Ball { center, radius } => dot(g, center) - radius * norm2(g),
            DecisionSet::SimplexBall { center, radius } => {
                let basis = HyperplaneBasis::new(center.len())?;
                dot(g, center) - radius * norm2(&basis.tmul(g))
            }
        })
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

const DEFAULT_PROX_TOL: f64 = 1e-3;

// ---------------------------------------------------------------------------
// Conic Blackwell states
// ---------------------------------------------------------------------------

/// Mutable state of CBA / CBA+ over one decision set.
#[derive(Debug, Clone)]
pub struct CbaState {
    geometry: ConeGeometry,
    aggregate: LiftedVector,
    weight_sum: f64,
    plus_variant: bool,
    initial_decision: Vec<f64>,
}

impl CbaState {
    pub fn new(geometry: ConeGeometry, plus_variant: bool) -> Self {
        let n = geometry.ambient_dim();
        let initial_decision = match &geometry {
            ConeGeometry::Simplex(_) => vec![1.0 / n as f64; n],
            _ => vec![0.0; n],
        };
        Self {
            aggregate: LiftedVector::zeros(n),
            weight_sum: 0.0,
            geometry,
            plus_variant,
            initial_decision,
        }
    }

    /// Resume from an explicit aggregate; for the plus variant the aggregate
    /// must already lie in the cone.
    pub fn from_parts(
        geometry: ConeGeometry,
        aggregate: LiftedVector,
        weight_sum: f64,
        plus_variant: bool,
        initial_decision: Vec<f64>,
    ) -> Result<Self> {
        if aggregate.dim() != geometry.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: geometry.ambient_dim(),
                got: aggregate.dim(),
            });
        }
        if plus_variant && !cone_membership(&geometry, &aggregate, 1e-9)? {
            return Err(Error::Infeasible(
                "aggregate outside the cone for the plus variant".into(),
            ));
        }
        Ok(Self {
            geometry,
            aggregate,
            weight_sum,
            plus_variant,
            initial_decision,
        })
    }

    pub fn geometry(&self) -> &ConeGeometry {
        &self.geometry
    }

    pub fn aggregate(&self) -> &LiftedVector {
        &self.aggregate
    }

    pub fn weight_sum(&self) -> f64 {
        self.weight_sum
    }

    /// `(κ/ũ)·û` of the aggregate (projected onto the cone first for plain
    /// CBA); the initial decision when the aggregate sits at the apex.
    pub fn choose(&self) -> Vec<f64> {
        let source = if self.plus_variant {
            self.aggregate.clone()
        } else {
            project_cone(&self.geometry, &self.aggregate)
                .expect("aggregate stays finite")
                .onto_cone
        };
        if source.tilde <= 0.0 {
            return self.initial_decision.clone();
        }
        let kappa = self.geometry.kappa();
        source.hat.iter().map(|&h| kappa * h / source.tilde).collect()
    }

    /// Fold the payoff of decision `x` under loss `f` into the aggregate with
    /// weight `ω`; the plus variant re-projects onto the cone.
    pub fn update(&mut self, x: &[f64], loss: &[f64], weight: f64) -> Result<()> {
        let n = self.geometry.ambient_dim();
        if x.len() != n || loss.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: if x.len() != n { x.len() } else { loss.len() },
            });
        }
        if !(all_finite(x) && all_finite(loss)) {
            return Err(Error::NonFinite { what: "cba update" });
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "payoff weight",
                value: weight,
            });
        }
        let kappa = self.geometry.kappa();
        let total = self.weight_sum + weight;
        let keep = self.weight_sum / total;
        let add = weight / total;
        let raw = LiftedVector::new(
            keep * self.aggregate.tilde + add * dot(loss, x) / kappa,
            self.aggregate
                .hat
                .iter()
                .zip(loss)
                .map(|(&u, &f)| keep * u - add * f)
                .collect(),
        );
        self.aggregate = if self.plus_variant {
            project_cone(&self.geometry, &raw)?.onto_cone
        } else {
            raw
        };
        self.weight_sum = total;
        Ok(())
    }
}

/// Regret-matching state over Δ(n).
#[derive(Debug, Clone)]
pub struct RmState {
    regret: Vec<f64>,
    plus_variant: bool,
}

impl RmState {
    pub fn new(n: usize, plus_variant: bool) -> Self {
        Self {
            regret: vec![0.0; n],
            plus_variant,
        }
    }

    pub fn regret(&self) -> &[f64] {
        &self.regret
    }

    /// Play proportionally to positive regrets; `fallback` when none.
    pub fn choose(&self, fallback: &[f64]) -> Vec<f64> {
        let total: f64 = self.regret.iter().map(|&r| r.max(0.0)).sum();
        if total <= 0.0 {
            return fallback.to_vec();
        }
        self.regret.iter().map(|&r| r.max(0.0) / total).collect()
    }

    pub fn update(&mut self, x: &[f64], loss: &[f64]) -> Result<()> {
        self.update_weighted(x, loss, 1.0)
    }

    pub fn update_weighted(&mut self, x: &[f64], loss: &[f64], weight: f64) -> Result<()> {
        if x.len() != self.regret.len() || loss.len() != self.regret.len() {
            return Err(Error::DimensionMismatch {
                expected: self.regret.len(),
                got: if x.len() != self.regret.len() {
                    x.len()
                } else {
                    loss.len()
                },
            });
        }
        let value = dot(loss, x);
        for (r, &f) in self.regret.iter_mut().zip(loss) {
            *r += weight * (value - f);
            if self.plus_variant {
                *r = r.max(0.0);
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Prox family
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepPolicy {
    Fixed(f64),
    /// `η_t = 1/√(Σ_{τ<t} ‖f_τ‖²)`, `initial` before any loss is seen.
    Adaptive { initial: f64 },
}

impl StepPolicy {
    fn validate(&self) -> Result<()> {
        let eta = match self {
            StepPolicy::Fixed(eta) => *eta,
            StepPolicy::Adaptive { initial } => *initial,
        };
        if eta > 0.0 && eta.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name: "step size",
                value: eta,
            })
        }
    }
}

/// Shared mutable state for OMD/FTRL and their optimistic variants.
#[derive(Debug, Clone)]
pub struct ProxState {
    iterate: Vec<f64>,
    cumulative: Vec<f64>,
    last_loss: Option<Vec<f64>>,
    step_policy: StepPolicy,
    squared_norm_sum: f64,
}

impl ProxState {
    pub fn new(initial_iterate: Vec<f64>, step_policy: StepPolicy) -> Self {
        let n = initial_iterate.len();
        Self {
            iterate: initial_iterate,
            cumulative: vec![0.0; n],
            last_loss: None,
            step_policy,
            squared_norm_sum: 0.0,
        }
    }

    pub fn iterate(&self) -> &[f64] {
        &self.iterate
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// Record one more observed loss norm and return `1/√(Σ ‖f‖²)`; falls
    /// back to the configured initial step while the sum is still zero.
    pub fn adaptive_step_size(&mut self, new_loss_norm: f64) -> Result<f64> {
        if new_loss_norm < 0.0 || !new_loss_norm.is_finite() {
            return Err(Error::InvalidParameter {
                name: "loss norm",
                value: new_loss_norm,
            });
        }
        self.squared_norm_sum += new_loss_norm * new_loss_norm;
        Ok(self.current_step())
    }

    pub fn current_step(&self) -> f64 {
        match self.step_policy {
            StepPolicy::Fixed(eta) => eta,
            StepPolicy::Adaptive { initial } => {
                if self.squared_norm_sum > 0.0 {
                    1.0 / self.squared_norm_sum.sqrt()
                } else {
                    initial
                }
            }
        }
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
        });
    }
    Ok(())
}

/// `argmin_{‖x−x₀‖ ≤ ε} ⟨c, x⟩ + ‖x − x′‖²/(2η)`, in closed form.
pub fn prox_ball(
    center: &[f64],
    radius: f64,
    anchor: &[f64],
    linear: &[f64],
    eta: f64,
) -> Result<Vec<f64>> {
    check_eta(eta)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "radius",
            value: radius,
        });
    }
    if anchor.len() != center.len() || linear.len() != center.len() {
        return Err(Error::DimensionMismatch {
            expected: center.len(),
            got: anchor.len().max(linear.len()),
        });
    }
    let shifted: Vec<f64> = anchor
        .iter()
        .zip(linear)
        .zip(center)
        .map(|((&a, &c), &x0)| a - eta * c - x0)
        .collect();
    let scale = radius / radius.max(norm2(&shifted));
    Ok(center
        .iter()
        .zip(&shifted)
        .map(|(&x0, &s)| x0 + scale * s)
        .collect())
}

/// Prox step over Δ(m) ∩ {‖y − y₀‖ ≤ ε} by dualizing the ball constraint
/// with a multiplier μ ≥ 0. The inner problem for fixed μ is an orthogonal
/// projection onto the simplex; the concave dual `q(μ)` is maximized by
/// binary search on `[0, μ̄]`, where `μ̄` comes from bounding `q(μ) ≤ q(0)`.
pub fn prox_ball_simplex(
    center: &[f64],
    radius: f64,
    anchor: &[f64],
    linear: &[f64],
    eta: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    check_eta(eta)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "radius",
            value: radius,
        });
    }
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
        });
    }
    let m = center.len();
    if anchor.len() != m || linear.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: anchor.len().max(linear.len()),
        });
    }
    if (center.iter().sum::<f64>() - 1.0).abs() > 1e-6 || center.iter().any(|&c| c < -1e-9) {
        return Err(Error::Infeasible("ball center must lie in the simplex".into()));
    }

    let inner = |mu: f64| -> Result<Vec<f64>> {
        let coef = eta / (eta * mu + 1.0);
        let target: Vec<f64> = anchor
            .iter()
            .zip(center)
            .zip(linear)
            .map(|((&y1, &y0), &c)| coef * (y1 / eta + mu * y0 - c))
            .collect();
        project_simplex(&target)
    };

    let y_at_zero = inner(0.0)?;
    if dist(&y_at_zero, center) <= radius {
        return Ok(y_at_zero);
    }

    // q(0) evaluated at its own argmin, then the concavity bound for μ̄.
    let q0 = dot(linear, &y_at_zero) + dist(&y_at_zero, anchor).powi(2) / (2.0 * eta);
    let mu_bar = 2.0 / (radius * radius)
        * (dot(linear, center) + dist(center, anchor).powi(2) / (2.0 * eta) - q0);
    let mut hi = mu_bar.max(1e-12);
    let mut lo = 0.0;
    for _ in 0..64 {
        if dist(&inner(hi)?, center) <= radius {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    // ‖y(μ) − y₀‖ is nonincreasing in μ; bisect to the constraint boundary.
    let width = tol * 1e-3 * (1.0 + hi);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if dist(&inner(mid)?, center) > radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    inner(hi)
}

/// One OMD step: the Euclidean prox point of `loss` from `anchor`.
pub fn omd_step(set: &DecisionSet, anchor: &[f64], loss: &[f64], eta: f64) -> Result<Vec<f64>> {
    check_eta(eta)?;
    match set {
        DecisionSet::Ball { center, radius } => prox_ball(center, *radius, anchor, loss, eta),
        DecisionSet::L2Ball(n) => prox_ball(&vec![0.0; *n], 1.0, anchor, loss, eta),
        DecisionSet::SimplexBall { center, radius } => {
            prox_ball_simplex(center, *radius, anchor, loss, eta, DEFAULT_PROX_TOL)
        }
        _ => {
            let target: Vec<f64> = anchor
                .iter()
                .zip(loss)
                .map(|(&a, &f)| a - eta * f)
                .collect();
            set.euclidean_project(&target)
        }
    }
}

/// One FTRL decision: the regularized leader of the cumulative loss, which
/// after completing the square is the projection of `−η·G/2`.
pub fn ftrl_step(set: &DecisionSet, cumulative: &[f64], eta: f64) -> Result<Vec<f64>> {
    check_eta(eta)?;
    let target: Vec<f64> = cumulative.iter().map(|&g| -0.5 * eta * g).collect();
    set.euclidean_project(&target)
}

/// FTRL with the cumulative loss shifted by the predictor `m`.
pub fn optimistic_ftrl_step(
    set: &DecisionSet,
    cumulative: &[f64],
    predictor: &[f64],
    eta: f64,
) -> Result<Vec<f64>> {
    if predictor.len() != cumulative.len() {
        return Err(Error::DimensionMismatch {
            expected: cumulative.len(),
            got: predictor.len(),
        });
    }
    let shifted: Vec<f64> = cumulative
        .iter()
        .zip(predictor)
        .map(|(&g, &m)| g + m)
        .collect();
    ftrl_step(set, &shifted, eta)
}

/// The two prox steps of optimistic OMD: the played decision `z` from the
/// predictor, then the new anchor from the observed loss.
pub fn optimistic_omd_step(
    set: &DecisionSet,
    anchor: &[f64],
    predictor: &[f64],
    loss: &[f64],
    eta: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let z = omd_step(set, anchor, predictor, eta)?;
    let next = omd_step(set, anchor, loss, eta)?;
    Ok((z, next))
}

/// `η_th = √2·Ω / (L·√T)`.
pub fn theoretical_step_size(diameter: f64, loss_bound: f64, horizon: usize) -> Result<f64> {
    if !(diameter > 0.0 && diameter.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "diameter",
            value: diameter,
        });
    }
    if !(loss_bound > 0.0 && loss_bound.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "loss bound",
            value: loss_bound,
        });
    }
    if horizon == 0 {
        return Err(Error::InvalidParameter {
            name: "horizon",
            value: 0.0,
        });
    }
    Ok(std::f64::consts::SQRT_2 * diameter / (loss_bound * (horizon as f64).sqrt()))
}

// ---------------------------------------------------------------------------
// The uniform minimizer interface driven by the repeated-game loop
// ---------------------------------------------------------------------------

/// A regret minimizer over one decision set. `choose` returns the decision
/// for the current round in ambient coordinates; `observe` feeds back the
/// loss that decision incurred, paired internally with the decision most
/// recently returned by `choose`.
pub trait Minimizer {
    fn choose(&mut self) -> Vec<f64>;
    fn observe(&mut self, loss: &[f64], weight: f64) -> Result<()>;
    fn name(&self) -> &'static str;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Cba,
    CbaPlus,
    Rm,
    RmPlus,
    Omd,
    Ftrl,
    OptimisticOmd,
    OptimisticFtrl,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Cba => "cba",
            Algorithm::CbaPlus => "cba+",
            Algorithm::Rm => "rm",
            Algorithm::RmPlus => "rm+",
            Algorithm::Omd => "omd",
            Algorithm::Ftrl => "ftrl",
            Algorithm::OptimisticOmd => "oomd",
            Algorithm::OptimisticFtrl => "oftrl",
        }
    }

    /// The Blackwell-family algorithms take no step size at all.
    pub fn is_parameter_free(&self) -> bool {
        matches!(
            self,
            Algorithm::Cba | Algorithm::CbaPlus | Algorithm::Rm | Algorithm::RmPlus
        )
    }

    pub const ALL: [Algorithm; 8] = [
        Algorithm::Cba,
        Algorithm::CbaPlus,
        Algorithm::Rm,
        Algorithm::RmPlus,
        Algorithm::Omd,
        Algorithm::Ftrl,
        Algorithm::OptimisticOmd,
        Algorithm::OptimisticFtrl,
    ];
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cba" => Ok(Algorithm::Cba),
            "cba+" => Ok(Algorithm::CbaPlus),
            "rm" => Ok(Algorithm::Rm),
            "rm+" => Ok(Algorithm::RmPlus),
            "omd" => Ok(Algorithm::Omd),
            "ftrl" => Ok(Algorithm::Ftrl),
            "oomd" => Ok(Algorithm::OptimisticOmd),
            "oftrl" => Ok(Algorithm::OptimisticFtrl),
            other => Err(Error::Unsupported(format!("unknown algorithm `{other}`"))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Build a minimizer of the given family for a decision set. Prox algorithms
/// take their step rule from `policy`; the Blackwell family ignores it.
pub fn build_minimizer(
    algo: Algorithm,
    set: &DecisionSet,
    policy: StepPolicy,
) -> Result<Box<dyn Minimizer>> {
    Ok(match algo {
        Algorithm::Cba => Box::new(CbaMinimizer::for_set(set, false)?),
        Algorithm::CbaPlus => Box::new(CbaMinimizer::for_set(set, true)?),
        Algorithm::Rm => Box::new(RmMinimizer::for_set(set, false)?),
        Algorithm::RmPlus => Box::new(RmMinimizer::for_set(set, true)?),
        Algorithm::Omd => Box::new(ProxMinimizer::new(ProxAlgo::Omd, set.clone(), policy)?),
        Algorithm::Ftrl => Box::new(ProxMinimizer::new(ProxAlgo::Ftrl, set.clone(), policy)?),
        Algorithm::OptimisticOmd => Box::new(ProxMinimizer::new(
            ProxAlgo::OptimisticOmd,
            set.clone(),
            policy,
        )?),
        Algorithm::OptimisticFtrl => Box::new(ProxMinimizer::new(
            ProxAlgo::OptimisticFtrl,
            set.clone(),
            policy,
        )?),
    })
}

#[derive(Debug, Clone)]
enum DecisionMap {
    Identity,
    /// Decisions scale by `r`, losses scale by `r` on the way in.
    Scaled(f64),
    /// `y = center + radius·B·s`; losses map to `radius·Bᵀf`.
    Slice {
        center: Vec<f64>,
        radius: f64,
        basis: HyperplaneBasis,
    },
}

/// CBA / CBA+ over any supported decision set.
#[derive(Debug, Clone)]
pub struct CbaMinimizer {
    state: CbaState,
    map: DecisionMap,
    plus: bool,
    last_inner: Vec<f64>,
}

impl CbaMinimizer {
    pub fn for_set(set: &DecisionSet, plus: bool) -> Result<Self> {
        let (geometry, map) = match set {
            DecisionSet::Simplex(n) => (ConeGeometry::Simplex(*n), DecisionMap::Identity),
            DecisionSet::L1Ball(n) => (ConeGeometry::L1Ball(*n), DecisionMap::Identity),
            DecisionSet::L2Ball(n) => (ConeGeometry::L2Ball(*n), DecisionMap::Identity),
            DecisionSet::LInfBall(n) => (ConeGeometry::LInfBall(*n), DecisionMap::Identity),
            DecisionSet::Ball { center, radius } => {
                if center.iter().any(|&c| c != 0.0) {
                    return Err(Error::Unsupported(
                        "conic minimizer needs an origin-centered ball".into(),
                    ));
                }
                (
                    ConeGeometry::L2Ball(center.len()),
                    DecisionMap::Scaled(*radius),
                )
            }
            DecisionSet::SimplexBall { center, radius } => (
                ConeGeometry::BallHyperplane {
                    m: center.len(),
                    center: center.clone(),
                    radius: *radius,
                },
                DecisionMap::Slice {
                    center: center.clone(),
                    radius: *radius,
                    basis: HyperplaneBasis::new(center.len())?,
                },
            ),
        };
        let state = CbaState::new(geometry, plus);
        let last_inner = state.choose();
        Ok(Self {
            state,
            map,
            plus,
            last_inner,
        })
    }

    pub fn state(&self) -> &CbaState {
        &self.state
    }
}

impl Minimizer for CbaMinimizer {
    fn choose(&mut self) -> Vec<f64> {
        let inner = self.state.choose();
        self.last_inner = inner.clone();
        match &self.map {
            DecisionMap::Identity => inner,
            DecisionMap::Scaled(r) => inner.iter().map(|&s| r * s).collect(),
            DecisionMap::Slice {
                center,
                radius,
                basis,
            } => {
                let lifted = basis.mul(&inner);
                center
                    .iter()
                    .zip(&lifted)
                    .map(|(&c, &l)| c + radius * l)
                    .collect()
            }
        }
    }

    fn observe(&mut self, loss: &[f64], weight: f64) -> Result<()> {
        let inner_loss: Vec<f64> = match &self.map {
            DecisionMap::Identity => loss.to_vec(),
            DecisionMap::Scaled(r) => loss.iter().map(|&f| r * f).collect(),
            DecisionMap::Slice { radius, basis, .. } => {
                if loss.len() != basis.ambient_dim() {
                    return Err(Error::DimensionMismatch {
                        expected: basis.ambient_dim(),
                        got: loss.len(),
                    });
                }
                basis.tmul(loss).iter().map(|&f| radius * f).collect()
            }
        };
        let x = self.last_inner.clone();
        self.state.update(&x, &inner_loss, weight)
    }

    fn name(&self) -> &'static str {
        if self.plus {
            "cba+"
        } else {
            "cba"
        }
    }
}

/// RM / RM+ over the simplex.
#[derive(Debug, Clone)]
pub struct RmMinimizer {
    state: RmState,
    fallback: Vec<f64>,
    plus: bool,
    last: Vec<f64>,
}

impl RmMinimizer {
    pub fn for_set(set: &DecisionSet, plus: bool) -> Result<Self> {
        let DecisionSet::Simplex(n) = set else {
            return Err(Error::Unsupported(
                "regret matching is defined over the simplex only".into(),
            ));
        };
        let fallback = vec![1.0 / *n as f64; *n];
        Ok(Self {
            state: RmState::new(*n, plus),
            last: fallback.clone(),
            fallback,
            plus,
        })
    }

    pub fn state(&self) -> &RmState {
        &self.state
    }
}

impl Minimizer for RmMinimizer {
    fn choose(&mut self) -> Vec<f64> {
        let x = self.state.choose(&self.fallback);
        self.last = x.clone();
        x
    }

    fn observe(&mut self, loss: &[f64], weight: f64) -> Result<()> {
        let x = self.last.clone();
        self.state.update_weighted(&x, loss, weight)
    }

    fn name(&self) -> &'static str {
        if self.plus {
            "rm+"
        } else {
            "rm"
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProxAlgo {
    Omd,
    Ftrl,
    OptimisticOmd,
    OptimisticFtrl,
}

/// OMD / FTRL / optimistic variants over one decision set. Payoff weights
/// fold into the loss vector so weighted schemes stay meaningful here too.
#[derive(Debug, Clone)]
pub struct ProxMinimizer {
    algo: ProxAlgo,
    set: DecisionSet,
    state: ProxState,
    eta: f64,
}

impl ProxMinimizer {
    pub fn new(algo: ProxAlgo, set: DecisionSet, policy: StepPolicy) -> Result<Self> {
        policy.validate()?;
        let state = ProxState::new(set.center(), policy);
        let eta = state.current_step();
        Ok(Self {
            algo,
            set,
            state,
            eta,
        })
    }

    fn predictor(&self) -> Vec<f64> {
        self.state
            .last_loss
            .clone()
            .unwrap_or_else(|| vec![0.0; self.set.dim()])
    }
}

impl Minimizer for ProxMinimizer {
    fn choose(&mut self) -> Vec<f64> {
        match self.algo {
            ProxAlgo::Omd => self.state.iterate.clone(),
            ProxAlgo::Ftrl => ftrl_step(&self.set, &self.state.cumulative, self.eta)
                .expect("cumulative loss stays finite"),
            ProxAlgo::OptimisticFtrl => optimistic_ftrl_step(
                &self.set,
                &self.state.cumulative,
                &self.predictor(),
                self.eta,
            )
            .expect("cumulative loss stays finite"),
            ProxAlgo::OptimisticOmd => {
                omd_step(&self.set, &self.state.iterate, &self.predictor(), self.eta)
                    .expect("iterate stays finite")
            }
        }
    }

    fn observe(&mut self, loss: &[f64], weight: f64) -> Result<()> {
        if loss.len() != self.set.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.set.dim(),
                got: loss.len(),
            });
        }
        if !all_finite(loss) {
            return Err(Error::NonFinite { what: "loss" });
        }
        let scaled: Vec<f64> = loss.iter().map(|&f| weight * f).collect();
        match self.algo {
            ProxAlgo::Omd | ProxAlgo::OptimisticOmd => {
                self.state.iterate = omd_step(&self.set, &self.state.iterate, &scaled, self.eta)?;
            }
            ProxAlgo::Ftrl | ProxAlgo::OptimisticFtrl => {
                for (g, &f) in self.state.cumulative.iter_mut().zip(&scaled) {
                    *g += f;
                }
            }
        }
        let norm = norm2(&scaled);
        self.state.last_loss = Some(scaled);
        self.eta = match self.state.step_policy {
            StepPolicy::Fixed(eta) => eta,
            StepPolicy::Adaptive { .. } => self.state.adaptive_step_size(norm)?,
        };
        Ok(())
    }

    fn name(&self) -> &'static str {
        match self.algo {
            ProxAlgo::Omd => "omd",
            ProxAlgo::Ftrl => "ftrl",
            ProxAlgo::OptimisticOmd => "oomd",
            ProxAlgo::OptimisticFtrl => "oftrl",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_vec_eq(a: &[f64], b: &[f64], eps: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert_abs_diff_eq!(x, y, epsilon = eps);
        }
    }

    #[test]
    fn cba_choose_direct_formula() {
        let state = CbaState::from_parts(
            ConeGeometry::Simplex(2),
            LiftedVector::new(2.0, vec![1.0, 1.0]),
            1.0,
            true,
            vec![0.5, 0.5],
        )
        .unwrap();
        assert_vec_eq(&state.choose(), &[0.5, 0.5], 1e-12);
    }

    #[test]
    fn cba_choose_apex_falls_back_to_initial() {
        let state = CbaState::new(ConeGeometry::Simplex(2), true);
        assert_vec_eq(&state.choose(), &[0.5, 0.5], 1e-15);
    }

    #[test]
    fn cba_choose_projects_for_plain_variant() {
        let state = CbaState::from_parts(
            ConeGeometry::Simplex(2),
            LiftedVector::new(0.5, vec![-1.0, 0.0]),
            1.0,
            false,
            vec![0.5, 0.5],
        )
        .unwrap();
        assert_vec_eq(&state.choose(), &[0.0, 1.0], 1e-12);
    }

    #[test]
    fn cba_first_update_matches_projected_payoff() {
        let mut plus = CbaState::new(ConeGeometry::Simplex(2), true);
        plus.update(&[0.5, 0.5], &[1.0, 0.0], 1.0).unwrap();
        assert_abs_diff_eq!(plus.aggregate().tilde, 0.25, epsilon = 1e-12);
        assert_vec_eq(&plus.aggregate().hat, &[0.0, 0.25], 1e-12);

        let mut plain = CbaState::new(ConeGeometry::Simplex(2), false);
        plain.update(&[0.5, 0.5], &[1.0, 0.0], 1.0).unwrap();
        assert_abs_diff_eq!(plain.aggregate().tilde, 0.5, epsilon = 1e-12);
        assert_vec_eq(&plain.aggregate().hat, &[-1.0, 0.0], 1e-12);
    }

    #[test]
    fn cba_zero_loss_shrinks_within_cone() {
        let mut state = CbaState::from_parts(
            ConeGeometry::Simplex(2),
            LiftedVector::new(2.0, vec![1.0, 1.0]),
            1.0,
            true,
            vec![0.5, 0.5],
        )
        .unwrap();
        state.update(&[0.5, 0.5], &[0.0, 0.0], 1.0).unwrap();
        assert_abs_diff_eq!(state.aggregate().tilde, 1.0, epsilon = 1e-12);
        assert!(cone_membership(state.geometry(), state.aggregate(), 1e-9).unwrap());
    }

    #[test]
    fn cba_update_rejects_bad_input() {
        let mut state = CbaState::new(ConeGeometry::Simplex(2), true);
        assert!(state.update(&[0.5, 0.5], &[1.0, 0.0], 0.0).is_err());
        assert!(state.update(&[0.5], &[1.0, 0.0], 1.0).is_err());
        assert!(state
            .update(&[0.5, 0.5], &[f64::NAN, 0.0], 1.0)
            .is_err());
    }

    #[test]
    fn rm_choose_and_update_examples() {
        let mut state = RmState::new(2, true);
        assert_vec_eq(&state.choose(&[0.5, 0.5]), &[0.5, 0.5], 1e-15);
        state.update(&[0.5, 0.5], &[1.0, 0.0]).unwrap();
        assert_vec_eq(state.regret(), &[0.0, 0.5], 1e-12);
        assert_vec_eq(&state.choose(&[0.5, 0.5]), &[0.0, 1.0], 1e-12);

        let mut plain = RmState::new(2, false);
        plain.update(&[0.5, 0.5], &[1.0, 0.0]).unwrap();
        assert_vec_eq(plain.regret(), &[-0.5, 0.5], 1e-12);

        // constant loss leaves the state untouched
        let before = plain.regret().to_vec();
        plain.update(&[0.3, 0.7], &[2.0, 2.0]).unwrap();
        assert_vec_eq(plain.regret(), &before, 1e-12);
    }

    #[test]
    fn rm_choose_examples() {
        let mut state = RmState::new(2, false);
        state.regret = vec![0.0, 0.5];
        assert_vec_eq(&state.choose(&[0.5, 0.5]), &[0.0, 1.0], 1e-15);
        state.regret = vec![1.0, 1.0];
        assert_vec_eq(&state.choose(&[0.5, 0.5]), &[0.5, 0.5], 1e-15);
        state.regret = vec![-1.0, -2.0];
        assert_vec_eq(&state.choose(&[0.5, 0.5]), &[0.5, 0.5], 1e-15);
    }

    #[test]
    fn rm_plus_regret_stays_nonnegative() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut state = RmState::new(4, true);
        let uniform = vec![0.25; 4];
        for _ in 0..500 {
            let x = state.choose(&uniform);
            let f: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            state.update(&x, &f).unwrap();
            assert!(state.regret().iter().all(|&r| r >= 0.0));
        }
    }

    #[test]
    fn omd_step_examples() {
        let ball = DecisionSet::Ball {
            center: vec![0.0, 0.0],
            radius: 1.0,
        };
        let x = omd_step(&ball, &[0.0, 0.0], &[1.0, 0.0], 2.0).unwrap();
        assert_vec_eq(&x, &[-1.0, 0.0], 1e-12);

        let x = omd_step(&ball, &[0.3, -0.2], &[0.0, 0.0], 1.0).unwrap();
        assert_vec_eq(&x, &[0.3, -0.2], 1e-12);

        let simplex = DecisionSet::Simplex(2);
        let anchor = [0.4, 0.6];
        let x = omd_step(&simplex, &anchor, &[5.0, -3.0], 1e-8).unwrap();
        assert!(dist(&x, &anchor) <= 1e-6);

        assert!(omd_step(&simplex, &anchor, &[1.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn ftrl_step_examples() {
        let simplex = DecisionSet::Simplex(2);
        let x = ftrl_step(&simplex, &[0.0, 0.0], 1.0).unwrap();
        assert_vec_eq(&x, &[0.5, 0.5], 1e-12);

        let ball = DecisionSet::Ball {
            center: vec![0.0, 0.0],
            radius: 1.0,
        };
        let x = ftrl_step(&ball, &[4.0, 0.0], 1.0).unwrap();
        assert_vec_eq(&x, &[-1.0, 0.0], 1e-12);

        let x = ftrl_step(&simplex, &[1.0, -1.0], 2.0).unwrap();
        assert_vec_eq(&x, &[0.0, 1.0], 1e-12);
    }

    #[test]
    fn optimistic_ftrl_examples() {
        let simplex = DecisionSet::Simplex(2);
        let plain = ftrl_step(&simplex, &[1.0, -1.0], 2.0).unwrap();
        let zero_pred =
            optimistic_ftrl_step(&simplex, &[1.0, -1.0], &[0.0, 0.0], 2.0).unwrap();
        assert_vec_eq(&plain, &zero_pred, 1e-15);

        let x = optimistic_ftrl_step(&simplex, &[1.0, -1.0], &[1.0, -1.0], 1.0).unwrap();
        assert_vec_eq(&x, &[0.0, 1.0], 1e-12);
    }

    #[test]
    fn optimistic_omd_examples() {
        let ball = DecisionSet::Ball {
            center: vec![0.0, 0.0],
            radius: 1.0,
        };
        let (z, x) =
            optimistic_omd_step(&ball, &[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], 1.0).unwrap();
        assert_vec_eq(&z, &[-1.0, 0.0], 1e-12);
        assert_vec_eq(&x, &[0.0, -1.0], 1e-12);

        // matching predictor makes both prox problems identical
        let (z, x) =
            optimistic_omd_step(&ball, &[0.2, 0.1], &[0.3, -0.4], &[0.3, -0.4], 0.7).unwrap();
        assert_vec_eq(&z, &x, 1e-15);

        // zero predictor keeps the played point at the anchor
        let (z, _) =
            optimistic_omd_step(&ball, &[0.2, 0.1], &[0.0, 0.0], &[1.0, 1.0], 0.7).unwrap();
        assert_vec_eq(&z, &[0.2, 0.1], 1e-15);
    }

    #[test]
    fn prox_ball_examples() {
        let x = prox_ball(&[0.0, 0.0], 1.0, &[0.0, 0.0], &[0.0, 0.0], 1.0).unwrap();
        assert_vec_eq(&x, &[0.0, 0.0], 1e-15);
        let x = prox_ball(&[0.0, 0.0], 1.0, &[0.0, 0.0], &[1.0, 0.0], 2.0).unwrap();
        assert_vec_eq(&x, &[-1.0, 0.0], 1e-12);
        let x = prox_ball(&[0.0, 0.0], 10.0, &[0.0, 0.0], &[1.0, 0.0], 2.0).unwrap();
        assert_vec_eq(&x, &[-2.0, 0.0], 1e-12);
        assert!(prox_ball(&[0.0], 0.0, &[0.0], &[0.0], 1.0).is_err());
    }

    #[test]
    fn prox_ball_simplex_inactive_ball() {
        let y = prox_ball_simplex(&[0.5, 0.5], 10.0, &[0.5, 0.5], &[1.0, 0.0], 1.0, 1e-3)
            .unwrap();
        assert_vec_eq(&y, &[0.0, 1.0], 1e-9);

        let y = prox_ball_simplex(&[0.5, 0.5], 0.1, &[0.5, 0.5], &[0.0, 0.0], 1.0, 1e-3)
            .unwrap();
        assert_vec_eq(&y, &[0.5, 0.5], 1e-9);
    }

    #[test]
    fn prox_ball_simplex_matches_grid_oracle() {
        use crate::oracles::grid_prox_ball_simplex;
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let m = 3;
            let center = vec![1.0 / m as f64; m];
            let radius = rng.random_range(0.05..0.5);
            let anchor: Vec<f64> = {
                let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
                let s: f64 = raw.iter().sum();
                raw.iter().map(|&v| v / s).collect()
            };
            let linear: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..2.0)).collect();
            let eta = rng.random_range(0.1..2.0);
            let fast = prox_ball_simplex(&center, radius, &anchor, &linear, eta, 1e-3).unwrap();
            let slow =
                grid_prox_ball_simplex(&center, radius, &anchor, &linear, eta, 2000).unwrap();
            assert!(
                dist(&fast, &slow) <= 1e-3,
                "prox mismatch: {:?} vs {:?}",
                fast,
                slow
            );
        }
    }

    #[test]
    fn step_size_examples() {
        let eta = theoretical_step_size(2.0, 10.0, 100).unwrap();
        assert_abs_diff_eq!(eta, 0.028284271247461905, epsilon = 1e-12);
        let eta = theoretical_step_size(std::f64::consts::SQRT_2, 1.0, 1).unwrap();
        assert_abs_diff_eq!(eta, 2.0, epsilon = 1e-12);
        let base = theoretical_step_size(1.0, 1.0, 4).unwrap();
        let halved = theoretical_step_size(1.0, 2.0, 4).unwrap();
        assert_abs_diff_eq!(halved, base / 2.0, epsilon = 1e-15);
        assert!(theoretical_step_size(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn adaptive_step_size_examples() {
        let mut state = ProxState::new(vec![0.0], StepPolicy::Adaptive { initial: 1.0 });
        assert_abs_diff_eq!(state.current_step(), 1.0, epsilon = 1e-15);
        let eta = state.adaptive_step_size(3.0).unwrap();
        assert_abs_diff_eq!(eta, 1.0 / 3.0, epsilon = 1e-12);
        let eta = state.adaptive_step_size(4.0).unwrap();
        assert_abs_diff_eq!(eta, 0.2, epsilon = 1e-12);

        let mut single = ProxState::new(vec![0.0], StepPolicy::Adaptive { initial: 1.0 });
        assert_abs_diff_eq!(single.adaptive_step_size(1.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(single.adaptive_step_size(0.0).unwrap(), 1.0, epsilon = 1e-12);
        assert!(single.adaptive_step_size(-1.0).is_err());
    }

    #[test]
    fn optimistic_variants_reduce_on_constant_losses() {
        let simplex = DecisionSet::Simplex(3);
        let loss = vec![0.5, -0.2, 0.1];
        let policy = StepPolicy::Fixed(0.3);

        let mut omd = ProxMinimizer::new(ProxAlgo::Omd, simplex.clone(), policy).unwrap();
        let mut oomd = ProxMinimizer::new(ProxAlgo::OptimisticOmd, simplex.clone(), policy).unwrap();
        // warm both up with one round so the predictor equals the constant loss
        omd.choose();
        omd.observe(&loss, 1.0).unwrap();
        oomd.choose();
        oomd.observe(&loss, 1.0).unwrap();
        for _ in 0..50 {
            let a = omd.choose();
            omd.observe(&loss, 1.0).unwrap();
            let b = oomd.choose();
            oomd.observe(&loss, 1.0).unwrap();
            // with m = f the played point equals the next OMD iterate
            assert_vec_eq(&b, &omd.state.iterate, 1e-12);
            let _ = a;
        }

        let mut ftrl = ProxMinimizer::new(ProxAlgo::Ftrl, simplex.clone(), policy).unwrap();
        let mut oftrl = ProxMinimizer::new(ProxAlgo::OptimisticFtrl, simplex, policy).unwrap();
        for _ in 0..5 {
            ftrl.choose();
            ftrl.observe(&loss, 1.0).unwrap();
            oftrl.choose();
            oftrl.observe(&loss, 1.0).unwrap();
        }
        // after t rounds O-FTRL leads with G + m = (t+1)·f, i.e. FTRL one round ahead
        ftrl.observe(&loss, 1.0).unwrap();
        assert_vec_eq(&oftrl.choose(), &ftrl.choose(), 1e-12);
    }

    #[test]
    fn cba_minimizer_scaled_ball_stays_feasible() {
        use rand::Rng;
        use rand::SeedableRng;
        let set = DecisionSet::Ball {
            center: vec![0.0; 3],
            radius: 10.0,
        };
        let mut min = CbaMinimizer::for_set(&set, true).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let x = min.choose();
            assert!(set.contains(&x, 1e-9));
            let f: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            min.observe(&f, 1.0).unwrap();
        }
    }

    #[test]
    fn cba_minimizer_slice_stays_feasible() {
        use rand::Rng;
        use rand::SeedableRng;
        let m = 5;
        let set = DecisionSet::SimplexBall {
            center: vec![1.0 / m as f64; m],
            radius: 0.05,
        };
        let mut min = CbaMinimizer::for_set(&set, true).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let y = min.choose();
            assert!(set.contains(&y, 1e-9), "infeasible: {:?}", y);
            let g: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            min.observe(&g, 1.0).unwrap();
        }
    }

    #[test]
    fn off_center_ball_rejected_for_cba() {
        let set = DecisionSet::Ball {
            center: vec![1.0, 0.0],
            radius: 1.0,
        };
        assert!(CbaMinimizer::for_set(&set, true).is_err());
    }

    #[test]
    fn rm_requires_simplex() {
        assert!(RmMinimizer::for_set(&DecisionSet::L2Ball(3), true).is_err());
    }

    #[test]
    fn linear_minimum_closed_forms() {
        assert_abs_diff_eq!(
            DecisionSet::Simplex(3).linear_minimum(&[3.0, -1.0, 2.0]).unwrap(),
            -1.0
        );
        assert_abs_diff_eq!(
            DecisionSet::L2Ball(2).linear_minimum(&[3.0, 4.0]).unwrap(),
            -5.0
        );
        assert_abs_diff_eq!(
            DecisionSet::L1Ball(2).linear_minimum(&[3.0, -4.0]).unwrap(),
            -4.0
        );
        assert_abs_diff_eq!(
            DecisionSet::LInfBall(2).linear_minimum(&[3.0, -4.0]).unwrap(),
            -7.0
        );
        let ball = DecisionSet::Ball {
            center: vec![1.0, 0.0],
            radius: 2.0,
        };
        assert_abs_diff_eq!(ball.linear_minimum(&[3.0, 4.0]).unwrap(), 3.0 - 10.0);
    }

    #[test]
    fn nonpositive_step_policies_rejected_at_construction() {
        let set = DecisionSet::Simplex(2);
        assert!(build_minimizer(Algorithm::Omd, &set, StepPolicy::Fixed(0.0)).is_err());
        assert!(build_minimizer(Algorithm::Ftrl, &set, StepPolicy::Fixed(-1.0)).is_err());
        assert!(
            build_minimizer(Algorithm::Omd, &set, StepPolicy::Adaptive { initial: 0.0 }).is_err()
        );
        // the Blackwell family takes no step size and ignores the policy
        assert!(build_minimizer(Algorithm::CbaPlus, &set, StepPolicy::Fixed(-1.0)).is_ok());
    }

    #[test]
    fn algorithm_round_trips_from_str() {
        for algo in Algorithm::ALL {
            let parsed: Algorithm = algo.name().parse().unwrap();
            assert_eq!(parsed, algo);
        }
        assert!("sgd".parse::<Algorithm>().is_err());
    }
}
