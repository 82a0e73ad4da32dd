//! Slow reference solvers used to validate the fast kernels. Nothing here
//! shares a code path with the closed-form projections or the dual prox
//! update; tests compare the two routes on random instances.

use crate::error::Result;
use crate::geometry::{project_l1_ball, project_simplex, ConeGeometry, LiftedVector};
use crate::vecmath::{dot, norm2};

/// Projected-gradient descent on the lifted-cone parameterization
/// `min_{α ≥ 0, x ∈ X} ‖α(κ, x) − u‖²`, with diminishing steps on the
/// decision block and the scale minimized exactly each round. Keeping the
/// scale exact makes every round a descent step, which rules out spurious
/// collapse onto the apex; two starts (support-aligned and centered) guard
/// the nonconvex parameterization.
pub fn pgd_project_cone(geom: &ConeGeometry, u: &LiftedVector, iters: usize) -> LiftedVector {
    let scale = u.norm2();
    if scale == 0.0 {
        return LiftedVector::zeros(u.dim());
    }
    let un = u.scaled(1.0 / scale);
    let n = geom.ambient_dim();

    let aligned = project_decision(
        geom,
        &un.hat.iter().map(|&h| h * 1e6).collect::<Vec<f64>>(),
    );
    let centered = interior_point(geom, n);
    let (run_a, obj_a) = pgd_run(geom, &un, aligned, iters);
    let (run_c, obj_c) = pgd_run(geom, &un, centered, iters);
    let best = if obj_a <= obj_c { run_a } else { run_c };
    best.scaled(scale)
}

fn pgd_run(
    geom: &ConeGeometry,
    u: &LiftedVector,
    mut x: Vec<f64>,
    iters: usize,
) -> (LiftedVector, f64) {
    let kappa = geom.kappa();
    let exact_alpha = |x: &[f64]| -> f64 {
        let inner = kappa * u.tilde + dot(x, &u.hat);
        (inner / (kappa * kappa + dot(x, x))).max(0.0)
    };
    let mut alpha = exact_alpha(&x);
    for k in 0..iters {
        // safe step for the x block, whose curvature is 2α²
        let step = 0.45 / (alpha * alpha + 1e-9) / (1.0 + k as f64 / 64.0).sqrt();
        let moved: Vec<f64> = x
            .iter()
            .zip(&u.hat)
            .map(|(&xi, &ui)| xi - step * 2.0 * alpha * (alpha * xi - ui))
            .collect();
        x = project_decision(geom, &moved);
        alpha = exact_alpha(&x);
    }
    let w = LiftedVector::new(alpha * kappa, x.iter().map(|&xi| alpha * xi).collect());
    let objective = LiftedVector::new(
        w.tilde - u.tilde,
        w.hat.iter().zip(&u.hat).map(|(a, b)| a - b).collect(),
    )
    .norm2();
    (w, objective)
}

fn interior_point(geom: &ConeGeometry, n: usize) -> Vec<f64> {
    match geom {
        ConeGeometry::Simplex(_) => vec![1.0 / n as f64; n],
        _ => vec![0.0; n],
    }
}

fn project_decision(geom: &ConeGeometry, v: &[f64]) -> Vec<f64> {
    match geom {
        ConeGeometry::Simplex(_) => project_simplex(v).expect("finite input"),
        ConeGeometry::L1Ball(_) => project_l1_ball(v).expect("finite input"),
        ConeGeometry::L2Ball(_) | ConeGeometry::BallHyperplane { .. } => {
            let nv = norm2(v);
            if nv <= 1.0 {
                v.to_vec()
            } else {
                v.iter().map(|&x| x / nv).collect()
            }
        }
        ConeGeometry::LInfBall(_) => v.iter().map(|&x| x.clamp(-1.0, 1.0)).collect(),
    }
}

/// Dense two-level grid over the dual variable μ of the ball-in-simplex prox,
/// with the inner simplex projection solved exactly at every grid point.
pub fn grid_prox_ball_simplex(
    center: &[f64],
    radius: f64,
    anchor: &[f64],
    linear: &[f64],
    eta: f64,
    coarse: usize,
) -> Result<Vec<f64>> {
    let q_of = |mu: f64| -> Result<(f64, Vec<f64>)> {
        let y = inner_point(center, anchor, linear, eta, mu)?;
        let dist0: f64 = y
            .iter()
            .zip(anchor)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let dist_c: f64 = y
            .iter()
            .zip(center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let val = -0.5 * radius * radius * mu
            + dot(linear, &y)
            + dist0 / (2.0 * eta)
            + 0.5 * mu * dist_c;
        Ok((val, y))
    };

    let (q0, y0) = q_of(0.0)?;
    let anchor_gap: f64 = center
        .iter()
        .zip(anchor)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let mu_bar =
        2.0 / (radius * radius) * (dot(linear, center) + anchor_gap / (2.0 * eta) - q0);
    if mu_bar <= 0.0 {
        return Ok(y0);
    }

    let mut best = (q0, y0, 0.0);
    let mut lo = 0.0;
    let mut hi = mu_bar;
    for _level in 0..2 {
        let step = (hi - lo) / coarse as f64;
        for i in 0..=coarse {
            let mu = lo + step * i as f64;
            let (q, y) = q_of(mu)?;
            if q > best.0 {
                best = (q, y, mu);
            }
        }
        lo = (best.2 - step).max(0.0);
        hi = best.2 + step;
    }
    Ok(best.1)
}

fn inner_point(
    center: &[f64],
    anchor: &[f64],
    linear: &[f64],
    eta: f64,
    mu: f64,
) -> Result<Vec<f64>> {
    let coef = eta / (eta * mu + 1.0);
    let target: Vec<f64> = anchor
        .iter()
        .zip(center)
        .zip(linear)
        .map(|((&a, &y0), &c)| coef * (a / eta + mu * y0 - c))
        .collect();
    project_simplex(&target)
}

/// Central finite difference of a scalar function.
pub fn central_difference<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], step: f64) -> Vec<f64> {
    let mut grad = vec![0.0; x.len()];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + step;
        let hi = f(&probe);
        probe[i] = x[i] - step;
        let lo = f(&probe);
        probe[i] = x[i];
        grad[i] = (hi - lo) / (2.0 * step);
    }
    grad
}
