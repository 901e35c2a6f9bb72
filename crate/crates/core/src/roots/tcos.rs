use std::f64::consts::FRAC_PI_2;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrixcore::ComplexMatrix;
use crate::quadrature::composite;

const PANEL_POINTS: usize = 16;
const BUDGET_TOL: f64 = 1e-8;

/// Which function of `x = cos θ` is integrated against `u_m u_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcosBranch {
    /// `√x` for `x ≥ 0`, `i√(-x)` for `x < 0`.
    Principal,
    /// `√x` for `x ≥ 0`, `-i√(-x)` for `x < 0`.
    Flipped,
    /// `φ(x) = x`; reproduces `½(S + S*)` itself.
    Linear,
}

impl TcosBranch {
    fn eval(self, x: f64) -> Complex64 {
        match self {
            TcosBranch::Linear => Complex64::new(x, 0.0),
            _ if x >= 0.0 => Complex64::new(x.sqrt(), 0.0),
            TcosBranch::Principal => Complex64::new(0.0, (-x).sqrt()),
            TcosBranch::Flipped => Complex64::new(0.0, -(-x).sqrt()),
        }
    }
}

/// Nodes `θ` and weights for `∫₀^π g(θ) dθ`, split at `π/2` with
/// `θ = π/2 ∓ σ²` so that `√|cos θ|` becomes smooth in `σ`.
fn theta_rule(nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let panels = (nodes / (2 * PANEL_POINTS)).max(1);
    let (s, w) = composite(0.0, FRAC_PI_2.sqrt(), panels, PANEL_POINTS);
    let mut theta = Vec::with_capacity(2 * s.len());
    let mut weight = Vec::with_capacity(2 * s.len());
    for sign in [-1.0, 1.0] {
        for (&sig, &ws) in s.iter().zip(&w) {
            theta.push(FRAC_PI_2 + sign * sig * sig);
            weight.push(2.0 * sig * ws);
        }
    }
    (theta, weight)
}

/// `B[m][n] = (2/π) ∫₀^π φ(cos θ) sin((m+1)θ) sin((n+1)θ) dθ`, the
/// Chebyshev-U moment matrix after `x = cos θ`.
fn moments(n: usize, branch: TcosBranch, nodes: usize) -> ComplexMatrix {
    let (theta, weight) = theta_rule(nodes);
    // sin((k+1)θ) by the Chebyshev recurrence, one row per k
    let q = theta.len();
    let mut sines = vec![0.0f64; n * q];
    for (t, &th) in theta.iter().enumerate() {
        let two_cos = 2.0 * th.cos();
        let (mut prev, mut cur) = (0.0, th.sin());
        for k in 0..n {
            sines[k * q + t] = cur;
            let next = two_cos * cur - prev;
            prev = cur;
            cur = next;
        }
    }
    let phi_w: Vec<Complex64> = theta
        .iter()
        .zip(&weight)
        .map(|(&th, &w)| branch.eval(th.cos()) * (2.0 / PI * w))
        .collect();
    let upper: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|m| {
            let sm = &sines[m * q..(m + 1) * q];
            (m..n)
                .map(|k| {
                    let sk = &sines[k * q..(k + 1) * q];
                    let mut acc = Complex64::zero();
                    for t in 0..q {
                        acc += phi_w[t] * (sm[t] * sk[t]);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    ComplexMatrix::from_fn(n, n, |i, j| {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        upper[lo][hi - lo]
    })
}

/// Square root of the `N×N` section of `½(S + S*)` built from a branch of
/// `φ` with `φ(x)² = x`.
///
/// The integral is also evaluated with half the nodes; a disagreement above
/// `1e-8` means the budget is too small for `N`.
pub fn tcos_root(n: usize, branch: TcosBranch, quad_nodes: usize) -> Result<ComplexMatrix> {
    if n == 0 || quad_nodes < 8 * n {
        return Err(Error::Precondition(format!(
            "tcos_root needs quad_nodes >= 8N (N = {n}, nodes = {quad_nodes})"
        )));
    }
    let full = moments(n, branch, quad_nodes);
    let coarse = moments(n, branch, quad_nodes / 2);
    let diff = full.max_abs_diff(&coarse)?;
    if diff > BUDGET_TOL {
        return Err(Error::QuadratureBudget {
            diff,
            tol: BUDGET_TOL,
        });
    }
    Ok(full)
}
