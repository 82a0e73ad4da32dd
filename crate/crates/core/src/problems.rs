//! Benchmark saddle problems: bilinear matrix games on simplexes and
//! distributionally robust logistic regression over a ball-constrained
//! reweighting of the empirical distribution.

use crate::data_io::Dataset;
use crate::error::{Error, Result};
use crate::framework::SaddleProblem;
use crate::geometry::HyperplaneBasis;
use crate::minimizers::DecisionSet;
use crate::vecmath::{all_finite, dot, norm2, Matrix};

/// `min_{x ∈ Δ(n)} max_{y ∈ Δ(m)} ⟨x, A y⟩`.
#[derive(Debug, Clone)]
pub struct MatrixGame {
    payoff: Matrix,
}

impl MatrixGame {
    pub fn new(payoff: Matrix) -> Result<Self> {
        if !payoff.is_finite() {
            return Err(Error::NonFinite {
                what: "payoff matrix",
            });
        }
        Ok(Self { payoff })
    }

    pub fn payoff(&self) -> &Matrix {
        &self.payoff
    }

    pub fn n(&self) -> usize {
        self.payoff.rows()
    }

    pub fn m(&self) -> usize {
        self.payoff.cols()
    }

    /// `(f, g) = (A y, Aᵀ x)`.
    pub fn gradients(&self, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        if x.len() != self.n() || y.len() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: if x.len() != self.n() { self.n() } else { self.m() },
                got: if x.len() != self.n() { x.len() } else { y.len() },
            });
        }
        Ok((self.payoff.matvec(y), self.payoff.tmatvec(x)))
    }

    /// `max_j (Aᵀ x̄)_j − min_i (A ȳ)_i`, requiring both points feasible.
    pub fn duality_gap(&self, x_avg: &[f64], y_avg: &[f64]) -> Result<f64> {
        let feasible = |v: &[f64]| {
            v.iter().all(|&c| c >= -1e-6) && (v.iter().sum::<f64>() - 1.0).abs() <= 1e-6
        };
        if !feasible(x_avg) || !feasible(y_avg) {
            return Err(Error::Infeasible(
                "duality gap needs simplex-feasible averages".into(),
            ));
        }
        Ok(self.gap_unchecked(x_avg, y_avg))
    }

    fn gap_unchecked(&self, x_avg: &[f64], y_avg: &[f64]) -> f64 {
        let best_response_y = self
            .payoff
            .tmatvec(x_avg)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        let best_response_x = self
            .payoff
            .matvec(y_avg)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        best_response_y - best_response_x
    }

    /// Upper bounds on the subgradient norms seen by each player.
    pub fn loss_bounds(&self) -> (f64, f64) {
        let col_max = (0..self.m())
            .map(|j| {
                (0..self.n())
                    .map(|i| self.payoff.get(i, j).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0f64, f64::max);
        let row_max = (0..self.n())
            .map(|i| norm2(self.payoff.row(i)))
            .fold(0.0f64, f64::max);
        (col_max, row_max)
    }
}

impl SaddleProblem for MatrixGame {
    fn x_set(&self) -> DecisionSet {
        DecisionSet::Simplex(self.n())
    }

    fn y_set(&self) -> DecisionSet {
        DecisionSet::Simplex(self.m())
    }

    fn x_subgradient(&self, _x: &[f64], y: &[f64]) -> Vec<f64> {
        self.payoff.matvec(y)
    }

    fn y_subgradient(&self, x: &[f64], _y: &[f64]) -> Vec<f64> {
        self.payoff.tmatvec(x)
    }

    fn metric(&self, x_avg: &[f64], y_avg: &[f64]) -> f64 {
        self.gap_unchecked(x_avg, y_avg)
    }
}

/// Loss-norm and diameter bounds for a robust-classification instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroBounds {
    pub l_x: f64,
    pub l_y: f64,
    pub omega_x: f64,
    pub omega_y: f64,
}

/// Distributionally robust logistic regression
/// `min_{‖x‖ ≤ R} max_{y ∈ Δ(m), ‖y−y₀‖² ≤ λ} Σ_i y_i log(1 + exp(−b_i a_iᵀ x))`.
#[derive(Debug, Clone)]
pub struct DroInstance {
    features: Matrix,
    labels: Vec<f64>,
    radius: f64,
    y_center: Vec<f64>,
    y_radius: f64,
    basis: HyperplaneBasis,
}

impl DroInstance {
    pub fn new(dataset: &Dataset, radius: f64, lambda: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "radius",
                value: radius,
            });
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
            });
        }
        let m = dataset.num_samples();
        Ok(Self {
            features: dataset.features().clone(),
            labels: dataset.labels().to_vec(),
            radius,
            y_center: vec![1.0 / m as f64; m],
            y_radius: lambda.sqrt(),
            basis: HyperplaneBasis::new(m)?,
        })
    }

    pub fn num_samples(&self) -> usize {
        self.features.rows()
    }

    pub fn num_features(&self) -> usize {
        self.features.cols()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn y_radius(&self) -> f64 {
        self.y_radius
    }

    /// `ℓ_i(x) = log(1 + exp(−b_i a_iᵀ x))`, evaluated without overflow.
    pub fn losses(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_x(x)?;
        Ok((0..self.num_samples())
            .map(|i| stable_logistic_loss(self.margin(i, x)))
            .collect())
    }

    /// `Σ_i y_i · (−b_i / (1 + exp(b_i a_iᵀ x))) · a_i`.
    pub fn x_subgradient(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_x(x)?;
        if y.len() != self.num_samples() {
            return Err(Error::DimensionMismatch {
                expected: self.num_samples(),
                got: y.len(),
            });
        }
        let mut grad = vec![0.0; self.num_features()];
        for (i, &yi) in y.iter().enumerate() {
            let weight = -yi * self.labels[i] * stable_sigmoid_neg(self.margin(i, x));
            for (g, &a) in grad.iter_mut().zip(self.features.row(i)) {
                *g += weight * a;
            }
        }
        Ok(grad)
    }

    /// `max_{y} ⟨ℓ(x), y⟩` over the hyperplane slice of the ball:
    /// `⟨ℓ, y₀⟩ + ε ‖Bᵀ ℓ‖₂`.
    pub fn worst_case_loss(&self, x: &[f64]) -> Result<f64> {
        let losses = self.losses(x)?;
        Ok(dot(&losses, &self.y_center) + self.y_radius * norm2(&self.basis.tmul(&losses)))
    }

    /// Loss-norm bounds `L_x = ‖(b_i a_{ij})‖_F`,
    /// `L_y = √(Σ_i log(1 + exp(|b_i| R ‖a_i‖₂))²)` and the diameters
    /// `Ω_x = 2R`, `Ω_y = 2ε`.
    pub fn bounds(&self) -> DroBounds {
        let l_x = self.features.frobenius_norm();
        let l_y = (0..self.num_samples())
            .map(|i| {
                let z = self.labels[i].abs() * self.radius * norm2(self.features.row(i));
                stable_logistic_loss(-z).powi(2)
            })
            .sum::<f64>()
            .sqrt();
        DroBounds {
            l_x,
            l_y,
            omega_x: 2.0 * self.radius,
            omega_y: 2.0 * self.y_radius,
        }
    }

    /// Worst margin of the hyperplane slice against the nonnegativity
    /// constraints: `min_i y₀_i − ε ‖Bᵀ e_i‖`. Negative means part of the
    /// ball-hyperplane slice leaves the simplex, so the conic reduction
    /// ranges over points the prox treatment would clip.
    pub fn containment_margin(&self) -> f64 {
        (0..self.num_samples())
            .map(|i| self.y_center[i] - self.y_radius * self.basis.row_norm(i))
            .fold(f64::INFINITY, f64::min)
    }

    fn margin(&self, i: usize, x: &[f64]) -> f64 {
        self.labels[i] * dot(self.features.row(i), x)
    }

    fn check_x(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.num_features() {
            return Err(Error::DimensionMismatch {
                expected: self.num_features(),
                got: x.len(),
            });
        }
        if !all_finite(x) {
            return Err(Error::NonFinite { what: "iterate" });
        }
        Ok(())
    }
}

/// `log(1 + exp(−z))` for any `z`, without overflow.
fn stable_logistic_loss(z: f64) -> f64 {
    if z >= 0.0 {
        (-z).exp().ln_1p()
    } else {
        -z + z.exp().ln_1p()
    }
}

/// `1 / (1 + exp(z))`, the logistic weight of a misclassified margin.
fn stable_sigmoid_neg(z: f64) -> f64 {
    if z >= 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

impl SaddleProblem for DroInstance {
    fn x_set(&self) -> DecisionSet {
        DecisionSet::Ball {
            center: vec![0.0; self.num_features()],
            radius: self.radius,
        }
    }

    fn y_set(&self) -> DecisionSet {
        DecisionSet::SimplexBall {
            center: self.y_center.clone(),
            radius: self.y_radius,
        }
    }

    fn x_subgradient(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.x_subgradient(x, y).expect("feasible iterates")
    }

    fn y_subgradient(&self, x: &[f64], _y: &[f64]) -> Vec<f64> {
        self.losses(x).expect("feasible iterates")
    }

    fn metric(&self, x_avg: &[f64], _y_avg: &[f64]) -> f64 {
        self.worst_case_loss(x_avg).expect("feasible average")
    }
}

/// A saddle problem with all subgradients (and the metric) multiplied by a
/// positive constant; scale-free algorithms must be blind to the factor.
pub struct ScaledProblem<'a, P: SaddleProblem> {
    inner: &'a P,
    factor: f64,
}

impl<'a, P: SaddleProblem> ScaledProblem<'a, P> {
    pub fn new(inner: &'a P, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "scale factor",
                value: factor,
            });
        }
        Ok(Self { inner, factor })
    }
}

impl<P: SaddleProblem> SaddleProblem for ScaledProblem<'_, P> {
    fn x_set(&self) -> DecisionSet {
        self.inner.x_set()
    }

    fn y_set(&self) -> DecisionSet {
        self.inner.y_set()
    }

    fn x_subgradient(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.inner
            .x_subgradient(x, y)
            .into_iter()
            .map(|v| self.factor * v)
            .collect()
    }

    fn y_subgradient(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.inner
            .y_subgradient(x, y)
            .into_iter()
            .map(|v| self.factor * v)
            .collect()
    }

    fn metric(&self, x_avg: &[f64], y_avg: &[f64]) -> f64 {
        self.factor * self.inner.metric(x_avg, y_avg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data_io::Dataset;
    use approx::assert_abs_diff_eq;

    fn game(rows: Vec<Vec<f64>>) -> MatrixGame {
        MatrixGame::new(Matrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn matrix_gradients_examples() {
        let g = game(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let (f, gy) = g.gradients(&[0.5, 0.5], &[0.5, 0.5]).unwrap();
        assert_eq!(f, vec![0.5, 0.5]);
        assert_eq!(gy, vec![0.5, 0.5]);

        let zero = game(vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
        let (f, gy) = zero.gradients(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(f, vec![0.0, 0.0]);
        assert_eq!(gy, vec![0.0, 0.0]);

        let g = game(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let (f, _) = g.gradients(&[0.5, 0.5], &[1.0, 0.0]).unwrap();
        assert_eq!(f, vec![1.0, 3.0]);

        assert!(g.gradients(&[1.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn duality_gap_examples() {
        let pennies = game(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let gap = pennies.duality_gap(&[0.5, 0.5], &[0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(gap, 0.0, epsilon = 1e-15);

        let corner = game(vec![vec![1.0, 0.0], vec![0.0, 0.0]]);
        let gap = corner.duality_gap(&[1.0, 0.0], &[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(gap, 1.0, epsilon = 1e-15);

        assert!(corner.duality_gap(&[2.0, 0.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn antisymmetric_equilibrium_has_zero_gap() {
        let rps = game(vec![
            vec![0.0, 1.0, -1.0],
            vec![-1.0, 0.0, 1.0],
            vec![1.0, -1.0, 0.0],
        ]);
        let u = vec![1.0 / 3.0; 3];
        assert_abs_diff_eq!(rps.duality_gap(&u, &u).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gap_is_nonnegative_at_random_points() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let g = game(vec![vec![0.3, -0.7], vec![1.2, 0.4]]);
        for _ in 0..100 {
            let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
                let a: f64 = rng.random_range(0.0..1.0);
                vec![a, 1.0 - a]
            };
            let x = draw(&mut rng);
            let y = draw(&mut rng);
            assert!(g.duality_gap(&x, &y).unwrap() >= -1e-12);
        }
    }

    fn tiny_dataset() -> Dataset {
        Dataset::from_parts(
            Matrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(),
            vec![1.0, -1.0],
            "test".into(),
        )
        .unwrap()
    }

    #[test]
    fn losses_examples() {
        let inst = DroInstance::new(&tiny_dataset(), 10.0, 0.25).unwrap();
        let at_zero = inst.losses(&[0.0, 0.0]).unwrap();
        for l in &at_zero {
            assert_abs_diff_eq!(*l, std::f64::consts::LN_2, epsilon = 1e-12);
        }

        let l = inst.losses(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(l[0], (1.0 + (-1.0f64).exp()).ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(l[0], 0.3132616875182228, epsilon = 1e-12);

        // asymptote: the loss tracks the misclassification margin linearly
        let big = stable_logistic_loss(-1000.0);
        assert_abs_diff_eq!(big, 1000.0, epsilon = 1e-9);
        assert!(big.is_finite());
    }

    #[test]
    fn x_subgradient_examples() {
        let inst = DroInstance::new(&tiny_dataset(), 10.0, 0.25).unwrap();
        // at x = 0 the logistic weight is 1/2
        let g = inst.x_subgradient(&[0.0, 0.0], &[0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(g[0], -0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(g[1], 0.25, epsilon = 1e-12);

        // concentrating y on one sample gives exactly that sample's gradient
        let g = inst.x_subgradient(&[0.0, 0.0], &[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(g[0], -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(g[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn x_subgradient_matches_finite_differences() {
        use crate::oracles::central_difference;
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|_| (0..4).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let labels: Vec<f64> = (0..6)
            .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        let data = Dataset::from_parts(Matrix::from_rows(rows).unwrap(), labels, "t".into())
            .unwrap();
        let inst = DroInstance::new(&data, 10.0, 1.0 / 12.0).unwrap();
        for _ in 0..20 {
            let x: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
            let raw: Vec<f64> = (0..6).map(|_| rng.random_range(0.0..1.0)).collect();
            let s: f64 = raw.iter().sum();
            let y: Vec<f64> = raw.iter().map(|&v| v / s).collect();
            let grad = inst.x_subgradient(&x, &y).unwrap();
            let fd = central_difference(
                |p| dot(&inst.losses(p).unwrap(), &y),
                &x,
                1e-5,
            );
            for (a, b) in grad.iter().zip(&fd) {
                assert!((a - b).abs() <= 1e-5 * (1.0 + a.abs()), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn worst_case_loss_examples() {
        let inst = DroInstance::new(&tiny_dataset(), 10.0, 0.25).unwrap();
        // constant losses: the basis annihilates e, leaving the constant
        let x_far = [0.0, 0.0];
        let wc = inst.worst_case_loss(&x_far).unwrap();
        assert_abs_diff_eq!(wc, std::f64::consts::LN_2, epsilon = 1e-12);

        // m = 2, ℓ = (1, 0), y₀ uniform, ε = 0.1 → 0.5 + 0.1/√2
        let data = Dataset::from_parts(
            Matrix::from_rows(vec![vec![1.0], vec![1.0]]).unwrap(),
            vec![1.0, -1.0],
            "t".into(),
        )
        .unwrap();
        let inst = DroInstance::new(&data, 10.0, 0.01).unwrap();
        let losses = vec![1.0, 0.0];
        let wc = dot(&losses, &[0.5, 0.5])
            + inst.y_radius() * norm2(&HyperplaneBasis::new(2).unwrap().tmul(&losses));
        assert_abs_diff_eq!(wc, 0.5 + 0.1 / std::f64::consts::SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(wc, 0.5707106781186548, epsilon = 1e-12);
    }

    #[test]
    fn worst_case_dominates_sampled_reweightings() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let rows: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..2).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let data = Dataset::from_parts(
            Matrix::from_rows(rows).unwrap(),
            vec![1.0, -1.0, 1.0],
            "t".into(),
        )
        .unwrap();
        let inst = DroInstance::new(&data, 10.0, 1.0 / 6.0).unwrap();
        let basis = HyperplaneBasis::new(3).unwrap();
        let x = [0.7, -0.3];
        let wc = inst.worst_case_loss(&x).unwrap();
        let losses = inst.losses(&x).unwrap();
        for _ in 0..1000 {
            // random direction in the reduced ball
            let mut s: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let n = norm2(&s);
            if n > 1.0 {
                s = s.iter().map(|&v| v / n).collect();
            }
            let y: Vec<f64> = basis
                .mul(&s)
                .iter()
                .zip(inst.y_center.iter())
                .map(|(&b, &c)| c + inst.y_radius() * b)
                .collect();
            assert!(dot(&losses, &y) <= wc + 1e-9);
        }
    }

    #[test]
    fn worst_case_matches_grid_on_circle() {
        let data = Dataset::from_parts(
            Matrix::from_rows(vec![vec![0.4], vec![-1.2], vec![0.9]]).unwrap(),
            vec![1.0, 1.0, -1.0],
            "t".into(),
        )
        .unwrap();
        let inst = DroInstance::new(&data, 10.0, 1.0 / 6.0).unwrap();
        let basis = HyperplaneBasis::new(3).unwrap();
        let x = [1.3];
        let losses = inst.losses(&x).unwrap();
        let mut best = f64::NEG_INFINITY;
        let grid = 20000;
        for k in 0..grid {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / grid as f64;
            let s = [angle.cos(), angle.sin()];
            let y: Vec<f64> = basis
                .mul(&s)
                .iter()
                .zip(inst.y_center.iter())
                .map(|(&b, &c)| c + inst.y_radius() * b)
                .collect();
            best = best.max(dot(&losses, &y));
        }
        assert_abs_diff_eq!(inst.worst_case_loss(&x).unwrap(), best, epsilon = 1e-6);
    }

    #[test]
    fn bounds_examples() {
        let data = Dataset::from_parts(
            Matrix::from_rows(vec![vec![1.0, 0.0]]).unwrap(),
            vec![1.0],
            "t".into(),
        )
        .unwrap();
        let inst = DroInstance::new(&data, 10.0, 0.5).unwrap();
        let b = inst.bounds();
        assert_abs_diff_eq!(b.l_x, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.l_y, (1.0 + 10.0f64.exp()).ln(), epsilon = 1e-9);
        assert_abs_diff_eq!(b.l_y, 10.000045398899218, epsilon = 1e-9);
        assert_abs_diff_eq!(b.omega_x, 20.0, epsilon = 1e-12);

        let zero = Dataset::from_parts(
            Matrix::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap(),
            vec![1.0, -1.0],
            "t".into(),
        )
        .unwrap();
        let inst = DroInstance::new(&zero, 10.0, 0.25).unwrap();
        let b = inst.bounds();
        assert_abs_diff_eq!(b.l_x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            b.l_y,
            std::f64::consts::LN_2 * (2.0f64).sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn l_x_is_the_frobenius_norm_of_weighted_features() {
        let data = Dataset::from_parts(
            Matrix::from_rows(vec![vec![3.0, 4.0], vec![1.0, 2.0]]).unwrap(),
            vec![-1.0, 1.0],
            "t".into(),
        )
        .unwrap();
        let inst = DroInstance::new(&data, 10.0, 0.25).unwrap();
        let expected = (9.0f64 + 16.0 + 1.0 + 4.0).sqrt();
        assert_abs_diff_eq!(inst.bounds().l_x, expected, epsilon = 1e-12);
    }

    #[test]
    fn containment_margin_flags_large_slices() {
        let data = tiny_dataset();
        let tight = DroInstance::new(&data, 10.0, 0.01).unwrap();
        assert!(tight.containment_margin() > 0.0);
        let loose = DroInstance::new(&data, 10.0, 2.0).unwrap();
        assert!(loose.containment_margin() < 0.0);
    }
}
