//! Exact orthogonal projections onto lifted decision cones.
//!
//! For a compact convex decision set `X ⊂ R^n` with `κ = max_{x∈X} ‖x‖₂`, the
//! lifted cone is `C = cone({κ} × X) ⊂ R^{n+1}` and its polar is
//! `C° = {z : ⟨z, c⟩ ≤ 0 ∀ c ∈ C}`. Points of the lifted payoff space are
//! written `(ũ, û) ∈ R × R^n`. Every projection routine returns both halves
//! of the Moreau decomposition `u = π_C(u) + π_{C°}(u)`, which are orthogonal
//! to each other; whichever half is cheaper to compute is derived first and
//! the other recovered by subtraction, so the decomposition identity holds to
//! rounding error by construction.
//!
//! Supported cones:
//! * simplex — polar `{(ỹ, ŷ) : max_i ŷ_i ≤ −ỹ}`; solved by a sorted segment
//!   scan of the scalar equation `ỹ + Σ_i (û_i + ỹ)⁺ = ũ`, no binary search;
//! * ℓ2 ball — second-order cone, closed form;
//! * ℓ1 ball — polar `{(ỹ, ŷ) : ‖ŷ‖_∞ ≤ −ỹ}`; exact piecewise-quadratic
//!   minimization over the sorted breakpoints `{±û_i}`;
//! * ℓ∞ ball (κ = √n) — the cone itself is a scaled box slice, handled by the
//!   same piecewise-quadratic machinery with clamp radius `ỹ/κ`;
//! * hyperplane-sliced ball — reduced to an ℓ2 ball in dimension `m − 1` via
//!   the orthonormal zero-sum basis below; this module supplies the basis and
//!   the ℓ2 kernel, the change of coordinates happens in the minimizer layer.

use crate::error::{Error, Result};
use crate::vecmath::{all_finite, dot, norm1, norm2, norm_inf, Matrix};

/// A point `(ũ, û)` in the `(n+1)`-dimensional lifted payoff space.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedVector {
    pub tilde: f64,
    pub hat: Vec<f64>,
}

impl LiftedVector {
    pub fn new(tilde: f64, hat: Vec<f64>) -> Self {
        Self { tilde, hat }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            tilde: 0.0,
            hat: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.hat.len()
    }

    pub fn is_finite(&self) -> bool {
        self.tilde.is_finite() && all_finite(&self.hat)
    }

    pub fn norm2(&self) -> f64 {
        (self.tilde * self.tilde + dot(&self.hat, &self.hat)).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.tilde * other.tilde + dot(&self.hat, &other.hat)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            tilde: c * self.tilde,
            hat: self.hat.iter().map(|v| c * v).collect(),
        }
    }

    fn minus(&self, other: &Self) -> Self {
        Self {
            tilde: self.tilde - other.tilde,
            hat: self
                .hat
                .iter()
                .zip(&other.hat)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Decision-set descriptor carrying the lifting scale κ and the projection
/// machinery for its cone.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeGeometry {
    /// Probability simplex Δ(n); κ = 1.
    Simplex(usize),
    /// Unit ℓ1 ball; κ = 1.
    L1Ball(usize),
    /// Unit ℓ2 ball; κ = 1.
    L2Ball(usize),
    /// Unit ℓ∞ ball; κ = √n.
    LInfBall(usize),
    /// The slice `{y : yᵀe = 1, ‖y − y₀‖₂ ≤ ε}` of an ℓ2 ball. Lifted payoffs
    /// for this kind live in the reduced coordinates `s ∈ B₂(1) ⊂ R^{m−1}`
    /// with `y = y₀ + ε·B·s`, so its ambient dimension is `m − 1` and κ = 1.
    BallHyperplane {
        m: usize,
        center: Vec<f64>,
        radius: f64,
    },
}

impl ConeGeometry {
    /// Dimension of the `hat` part of lifted vectors for this geometry.
    pub fn ambient_dim(&self) -> usize {
        match self {
            ConeGeometry::Simplex(n)
            | ConeGeometry::L1Ball(n)
            | ConeGeometry::L2Ball(n)
            | ConeGeometry::LInfBall(n) => *n,
            ConeGeometry::BallHyperplane { m, .. } => m - 1,
        }
    }

    /// κ = max_{x ∈ X} ‖x‖₂ of the underlying decision set.
    pub fn kappa(&self) -> f64 {
        match self {
            ConeGeometry::Simplex(_) | ConeGeometry::L1Ball(_) | ConeGeometry::L2Ball(_) => 1.0,
            ConeGeometry::LInfBall(n) => (*n as f64).sqrt(),
            ConeGeometry::BallHyperplane { .. } => 1.0,
        }
    }

    /// Whether `x` lies in the decision set `X` within an absolute tolerance.
    /// For `BallHyperplane` the check is on the reduced coordinates `s`.
    pub fn contains_decision(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.ambient_dim() {
            return false;
        }
        match self {
            ConeGeometry::Simplex(_) => {
                x.iter().all(|&v| v >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol
            }
            ConeGeometry::L1Ball(_) => norm1(x) <= 1.0 + tol,
            ConeGeometry::L2Ball(_) | ConeGeometry::BallHyperplane { .. } => {
                norm2(x) <= 1.0 + tol
            }
            ConeGeometry::LInfBall(_) => norm_inf(x) <= 1.0 + tol,
        }
    }

    fn check_dim(&self, u: &LiftedVector) -> Result<()> {
        if u.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: u.dim(),
            });
        }
        Ok(())
    }
}

/// The two halves of the Moreau decomposition of a lifted vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionPair {
    pub onto_cone: LiftedVector,
    pub onto_polar: LiftedVector,
}

/// Orthogonal projection of `u` onto the lifted cone of `geom` and its polar.
pub fn project_cone(geom: &ConeGeometry, u: &LiftedVector) -> Result<ProjectionPair> {
    geom.check_dim(u)?;
    if !u.is_finite() {
        return Err(Error::NonFinite {
            what: "lifted vector",
        });
    }
    let pair = match geom {
        ConeGeometry::Simplex(_) => {
            let root = simplex_root_scan(u);
            let polar = LiftedVector::new(
                root,
                u.hat.iter().map(|&h| h.min(-root)).collect(),
            );
            ProjectionPair {
                onto_cone: u.minus(&polar),
                onto_polar: polar,
            }
        }
        ConeGeometry::L2Ball(_) | ConeGeometry::BallHyperplane { .. } => project_soc(u),
        ConeGeometry::L1Ball(_) => {
            // Polar constraint ‖ŷ‖_∞ ≤ −ỹ: clamp û into [ỹ, −ỹ] for the best
            // ỹ ≤ 0 of the full piecewise-quadratic objective.
            let mut bps: Vec<(f64, f64)> = Vec::with_capacity(2 * u.dim());
            for &h in &u.hat {
                bps.push((-h, h)); // (û_i + ỹ)⁺ becomes active for ỹ > −û_i
                bps.push((h, -h)); // (ỹ − û_i)⁺ becomes active for ỹ > û_i
            }
            let root = piecewise_quadratic_root(u.tilde, bps);
            let y = root.min(0.0);
            let polar = LiftedVector::new(
                y,
                u.hat.iter().map(|&h| h.clamp(y, -y)).collect(),
            );
            ProjectionPair {
                onto_cone: u.minus(&polar),
                onto_polar: polar,
            }
        }
        ConeGeometry::LInfBall(n) => {
            // Direct projection onto C = {(t, v) : ‖v‖_∞ ≤ t/κ}, κ = √n.
            let kappa = (*n as f64).sqrt();
            let mut bps: Vec<(f64, f64)> = Vec::with_capacity(u.dim());
            let mut slope = 1.0;
            let mut intercept = -u.tilde;
            for &h in &u.hat {
                let a = h.abs();
                if a > 0.0 {
                    // (|û_i| − t/κ)⁺ is active on [0, κ|û_i|); it deactivates
                    // at the breakpoint, so it contributes from the start.
                    slope += 1.0 / (kappa * kappa);
                    intercept -= a / kappa;
                    bps.push((kappa * a, a / kappa));
                }
            }
            bps.sort_by(|x, y| x.0.total_cmp(&y.0));
            let mut t_star = None;
            for (v, db) in bps {
                let r = -intercept / slope;
                if r <= v {
                    t_star = Some(r);
                    break;
                }
                slope -= 1.0 / (kappa * kappa);
                intercept += db;
            }
            let t = t_star.unwrap_or(-intercept / slope).max(0.0);
            let bound = t / kappa;
            let cone = LiftedVector::new(
                t,
                u.hat.iter().map(|&h| h.clamp(-bound, bound)).collect(),
            );
            ProjectionPair {
                onto_polar: u.minus(&cone),
                onto_cone: cone,
            }
        }
    };
    Ok(pair)
}

/// Closed-form second-order-cone projection (`C = {(t, v) : ‖v‖₂ ≤ t}`).
fn project_soc(u: &LiftedVector) -> ProjectionPair {
    let h = norm2(&u.hat);
    if h <= u.tilde {
        // u ∈ C
        return ProjectionPair {
            onto_cone: u.clone(),
            onto_polar: LiftedVector::zeros(u.dim()),
        };
    }
    if h <= -u.tilde {
        // u ∈ C°; covers the degenerate û = 0 with ũ ≤ 0
        return ProjectionPair {
            onto_cone: LiftedVector::zeros(u.dim()),
            onto_polar: u.clone(),
        };
    }
    let t = 0.5 * (u.tilde + h);
    let scale = t / h;
    let cone = LiftedVector::new(t, u.hat.iter().map(|&v| scale * v).collect());
    ProjectionPair {
        onto_polar: u.minus(&cone),
        onto_cone: cone,
    }
}

/// Root `ỹ*` of `ỹ + Σ_i max{û_i + ỹ, 0} = ũ`, found by sorting `û` and
/// scanning the linear segments; `O(n log n)`, no binary search.
pub fn simplex_cone_root(u: &LiftedVector) -> Result<f64> {
    if !u.is_finite() {
        return Err(Error::NonFinite {
            what: "lifted vector",
        });
    }
    Ok(simplex_root_scan(u))
}

fn simplex_root_scan(u: &LiftedVector) -> f64 {
    let mut desc = u.hat.clone();
    desc.sort_by(|a, b| b.total_cmp(a));
    let n = desc.len();
    // With the k largest components active the equation is linear:
    // ỹ(1 + k) + Σ_{i≤k} û_(i) = ũ.
    let mut prefix = 0.0;
    let mut candidate = u.tilde;
    for k in 0..=n {
        candidate = (u.tilde - prefix) / (1.0 + k as f64);
        let below = k == n || candidate <= -desc[k];
        let above = k == 0 || candidate >= -desc[k - 1];
        if below && above {
            return candidate;
        }
        if k < n {
            prefix += desc[k];
        }
    }
    candidate
}

/// Minimize `(ỹ − ũ)² + Σ squared hinges` where each hinge `(c_i + ỹ)⁺`
/// activates at a breakpoint. `bps` holds `(breakpoint, intercept delta)`
/// pairs; each activation adds slope 1 to the derivative.
fn piecewise_quadratic_root(tilde: f64, mut bps: Vec<(f64, f64)>) -> f64 {
    bps.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut slope = 1.0;
    let mut intercept = -tilde;
    for (v, db) in bps {
        let r = -intercept / slope;
        if r <= v {
            return r;
        }
        slope += 1.0;
        intercept += db;
    }
    -intercept / slope
}

/// Membership in the polar cone `C°` within a relative tolerance.
pub fn polar_membership(geom: &ConeGeometry, u: &LiftedVector, tol: f64) -> Result<bool> {
    geom.check_dim(u)?;
    let slack = tol * (1.0 + u.norm2());
    let kappa = geom.kappa();
    Ok(match geom {
        ConeGeometry::Simplex(_) => {
            u.hat.iter().fold(f64::NEG_INFINITY, |m, &h| m.max(h)) <= -u.tilde + slack
        }
        ConeGeometry::L2Ball(_) | ConeGeometry::BallHyperplane { .. } => {
            norm2(&u.hat) <= -u.tilde + slack
        }
        // κ-generalized polar of an ℓp ball: ‖ŷ‖_q ≤ −κỹ.
        ConeGeometry::L1Ball(_) => norm_inf(&u.hat) <= -kappa * u.tilde + slack,
        ConeGeometry::LInfBall(_) => norm1(&u.hat) <= -kappa * u.tilde + slack,
    })
}

/// Membership in the lifted cone `C` within a relative tolerance: `ũ ≥ 0` and
/// `(κ/ũ)·û ∈ X`, with the apex requiring `û = 0`.
pub fn cone_membership(geom: &ConeGeometry, u: &LiftedVector, tol: f64) -> Result<bool> {
    geom.check_dim(u)?;
    let slack = tol * (1.0 + u.norm2());
    if u.tilde < -slack {
        return Ok(false);
    }
    if u.tilde.abs() <= slack {
        return Ok(norm_inf(&u.hat) <= slack);
    }
    let kappa = geom.kappa();
    let decision: Vec<f64> = u.hat.iter().map(|&h| kappa * h / u.tilde).collect();
    Ok(geom.contains_decision(&decision, tol))
}

/// Euclidean projection onto the probability simplex Δ(n).
pub fn project_simplex(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::Empty { what: "vector" });
    }
    if !all_finite(v) {
        return Err(Error::NonFinite { what: "vector" });
    }
    let mut sorted = v.to_vec();
    // Descending; stable sort keeps equal values in index order.
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = sorted[0] - 1.0;
    for (j, &s) in sorted.iter().enumerate() {
        cum += s;
        let candidate = (cum - 1.0) / (j as f64 + 1.0);
        if s - candidate > 0.0 {
            theta = candidate;
        } else {
            break;
        }
    }
    Ok(v.iter().map(|&x| (x - theta).max(0.0)).collect())
}

/// Euclidean projection onto the unit ℓ1 ball.
pub fn project_l1_ball(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::Empty { what: "vector" });
    }
    if norm1(v) <= 1.0 {
        return Ok(v.to_vec());
    }
    let abs: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    let w = project_simplex(&abs)?;
    Ok(v
        .iter()
        .zip(&w)
        .map(|(&x, &wi)| wi * x.signum())
        .collect())
}

/// Orthonormal basis of the zero-sum hyperplane `{v ∈ R^m : vᵀe = 0}` with
/// column `i` equal to `√(i/(i+1)) (1/i, …, 1/i, −1, 0, …, 0)`.
///
/// Products with the basis are computed in `O(m)` through prefix sums; the
/// dense matrix is only materialized on request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperplaneBasis {
    m: usize,
}

impl HyperplaneBasis {
    /// `m = 1` is allowed and yields the empty basis (the hyperplane slice
    /// degenerates to a single point).
    pub fn new(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParameter {
                name: "hyperplane dimension",
                value: m as f64,
            });
        }
        Ok(Self { m })
    }

    pub fn ambient_dim(&self) -> usize {
        self.m
    }

    pub fn reduced_dim(&self) -> usize {
        self.m - 1
    }

    /// `Bᵀ f` for `f ∈ R^m`. The columns annihilate constants, so the sums
    /// run over `f_j − f_1`; a constant vector maps to exactly zero instead
    /// of rounding dust, which downstream normalization would amplify.
    pub fn tmul(&self, f: &[f64]) -> Vec<f64> {
        debug_assert_eq!(f.len(), self.m);
        let mut out = Vec::with_capacity(self.m - 1);
        let mut prefix = 0.0;
        for i in 1..self.m {
            prefix += f[i - 1] - f[0];
            let i_f = i as f64;
            let scale = (i_f / (i_f + 1.0)).sqrt();
            out.push(scale * (prefix / i_f - (f[i] - f[0])));
        }
        out
    }

    /// `B s` for `s ∈ R^{m−1}`.
    pub fn mul(&self, s: &[f64]) -> Vec<f64> {
        debug_assert_eq!(s.len(), self.m - 1);
        // Column i contributes √(i/(i+1))/i to rows 0..i and −√(i/(i+1)) to
        // row i; accumulate the shared head contribution with a suffix sum.
        let mut out = vec![0.0; self.m];
        let mut suffix = 0.0;
        for i in (1..self.m).rev() {
            let i_f = i as f64;
            let scale = (i_f / (i_f + 1.0)).sqrt();
            out[i] = suffix - scale * s[i - 1];
            suffix += scale * s[i - 1] / i_f;
        }
        out[0] = suffix;
        out
    }

    /// ℓ2 norm of row `j` of the basis, i.e. `‖Bᵀ e_j‖₂`.
    pub fn row_norm(&self, j: usize) -> f64 {
        debug_assert!(j < self.m);
        let mut sq = 0.0;
        for i in (j.max(1))..self.m {
            let i_f = i as f64;
            let scale2 = i_f / (i_f + 1.0);
            if j == i {
                sq += scale2;
            } else {
                sq += scale2 / (i_f * i_f);
            }
        }
        sq.sqrt()
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut b = Matrix::zeros(self.m, self.m - 1);
        for i in 1..self.m {
            let i_f = i as f64;
            let scale = (i_f / (i_f + 1.0)).sqrt();
            for j in 0..i {
                b.set(j, i - 1, scale / i_f);
            }
            b.set(i, i - 1, -scale);
        }
        b
    }
}

/// Dense `m × (m−1)` matrix of the zero-sum hyperplane basis; `m ≥ 2`.
pub fn hyperplane_basis(m: usize) -> Result<Matrix> {
    if m < 2 {
        return Err(Error::InvalidParameter {
            name: "hyperplane dimension",
            value: m as f64,
        });
    }
    Ok(HyperplaneBasis::new(m)?.to_matrix())
}
