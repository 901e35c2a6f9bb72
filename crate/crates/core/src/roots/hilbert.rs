//! Lebedev-basis root of the Hilbert matrix.
//!
//! `w_n(τ)` is the image of the Laguerre function `e^{-x/2} L_n(x)` under
//! the Lebedev transform with kernel `√(2τ sinh πτ)/(π√x) · K_{iτ}(x/2)`.
//! Writing `K_{iτ}(x/2) = ∫₀^∞ e^{-(x/2) cosh t} cos τt dt` and integrating in
//! `x` first turns every sample into a single cosine integral in `t`:
//!
//! `w_n(τ) = √(2τ sinh πτ)/π ∫₀^∞ cos(τt) G_n(t) dt`, where
//! `G_n(t) = ∫₀^∞ x^{-1/2} e^{-x cosh²(t/2)} L_n(x) dx`
//! `       = √π / cosh(t/2) · Σ_{j≤n} c_j c_{n-j} tanh^{2(n-j)}(t/2)`,
//! `c_j = C(2j, j)/4^j`, read off the Laguerre generating function. Every
//! term is positive, so nothing cancels; `G_n` decays like `e^{-t/2}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operators::GridMesh;
use crate::quadrature::composite;

pub const TAU_MIN: f64 = 1e-3;
pub const TAU_MAX: f64 = 16.0;
/// Leading block of the Gram matrix checked by [`lebedev_basis`].
pub const GRAM_CHECK_UPTO: usize = 5;
pub const GRAM_TOL: f64 = 1e-3;

const PANEL_POINTS: usize = 16;
/// `G_n(t) ≤ 2√π e^{-t/2}·poly`, below `1e-18` past this point.
const T_LIMIT: f64 = 90.0;
/// Exponent cutoff for `e^{-x(cosh t - 1)}` relative to its peak.
const EXP_CUTOFF: f64 = 37.0;

/// `K_{iτ}(x) = ∫₀^{t_max} e^{-x cosh t} cos(τt) dt` by composite
/// Gauss–Legendre with `nodes` points in total.
pub fn bessel_k_imag(tau: f64, x: f64, t_max: f64, nodes: usize) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Precondition(format!(
            "bessel_k_imag needs x > 0, got {x}"
        )));
    }
    if !(t_max > 0.0) {
        return Err(Error::Precondition(format!(
            "bessel_k_imag needs t_max > 0, got {t_max}"
        )));
    }
    let panels = (nodes / PANEL_POINTS).max(1);
    let (t, w) = composite(0.0, t_max, panels, PANEL_POINTS);
    Ok(t.iter()
        .zip(&w)
        .map(|(&t, &w)| w * (-x * t.cosh()).exp() * (tau * t).cos())
        .sum())
}

/// [`bessel_k_imag`] with the cutoff and panel count chosen from `(τ, x)`:
/// the integrand is truncated where it has fallen by `e^{-37}` and panels
/// are at most a quarter wide and a quarter period of `cos τt`.
pub fn bessel_k_imag_auto(tau: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Precondition(format!(
            "bessel_k_imag needs x > 0, got {x}"
        )));
    }
    let t_max = (1.0 + EXP_CUTOFF / x).acosh();
    let width = 0.25f64.min(PI / (2.0 * tau.abs().max(1e-12)));
    let panels = (t_max / width).ceil() as usize;
    bessel_k_imag(tau, x, t_max, panels * PANEL_POINTS)
}

fn transform_scale(tau: f64) -> f64 {
    (2.0 * tau * (PI * tau).sinh()).sqrt() / PI
}

/// `g(τ) = √(π/cosh πτ)`, written to avoid overflow for large `τ`.
fn root_weight(tau: f64) -> f64 {
    (2.0 * PI).sqrt() * (-0.5 * PI * tau).exp() / (1.0 + (-2.0 * PI * tau).exp()).sqrt()
}

/// `h(τ) = π / cosh πτ`.
pub(crate) fn hilbert_weight(tau: f64) -> f64 {
    root_weight(tau).powi(2)
}

/// Samples `w_n(τ_k)` of the Lebedev images of the Laguerre functions.
#[derive(Debug, Clone)]
pub struct LebedevBasis {
    pub tau_mesh: GridMesh,
    /// `samples[n][k] = w_n(τ_k)`.
    pub samples: Vec<Vec<f64>>,
}

impl LebedevBasis {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `∫ weight(τ) w_m(τ) w_n(τ) dτ` on the mesh.
    pub fn weighted_inner(&self, m: usize, n: usize, weight: impl Fn(f64) -> f64) -> f64 {
        let (a, b) = (&self.samples[m], &self.samples[n]);
        self.tau_mesh
            .nodes()
            .iter()
            .zip(self.tau_mesh.weights())
            .enumerate()
            .map(|(k, (&t, &w))| w * weight(t) * a[k] * b[k])
            .sum()
    }

    pub fn gram(&self, m: usize, n: usize) -> f64 {
        self.weighted_inner(m, n, |_| 1.0)
    }

    /// `⟨M_h w_m, w_n⟩`, which should equal `1/(m + n + 1)`.
    pub fn hilbert_moment(&self, m: usize, n: usize) -> f64 {
        self.weighted_inner(m, n, hilbert_weight)
    }

    /// Largest `|Gram - I|` entry over `m, n < upto`, with its position.
    pub fn gram_deviation(&self, upto: usize) -> (usize, usize, f64) {
        let upto = upto.min(self.len());
        let mut worst = (0, 0, 0.0f64);
        for m in 0..upto {
            for n in m..upto {
                let target = if m == n { 1.0 } else { 0.0 };
                let d = (self.gram(m, n) - target).abs();
                if d > worst.2 {
                    worst = (m, n, d);
                }
            }
        }
        worst
    }

    pub fn check_gram(&self, upto: usize, tol: f64) -> Result<()> {
        let (m, n, deviation) = self.gram_deviation(upto);
        if deviation > tol {
            return Err(Error::GramDeviation {
                m,
                n,
                deviation,
                tol,
            });
        }
        Ok(())
    }
}

/// `G_0 … G_{n_max-1}` at one `t`.
fn laguerre_moments(t: f64, n_max: usize, c: &[f64], out: &mut [f64]) {
    let half = 0.5 * t;
    let beta = half.tanh().powi(2);
    let lead = PI.sqrt() / half.cosh();
    let mut p = vec![0.0f64; n_max];
    let mut pow = 1.0;
    for (j, pj) in p.iter_mut().enumerate() {
        *pj = c[j] * pow;
        pow *= beta;
    }
    for (k, o) in out.iter_mut().enumerate() {
        let s: f64 = (0..=k).map(|j| c[j] * p[k - j]).sum();
        *o = lead * s;
    }
}

/// Builds `w_0 … w_{n_max-1}` on `tau_mesh`; `inner_nodes` is the number of
/// Gauss–Legendre points for the `t` integral on `[0, 90]`.
///
/// The leading `GRAM_CHECK_UPTO` block of the Gram matrix must be within
/// `GRAM_TOL` of the identity. Higher `w_n` spread to larger `τ` and are only
/// resolved as far as the mesh reaches; they still enter the window of the
/// root through their overlap with the low modes.
pub fn lebedev_basis(
    n_max: usize,
    tau_mesh: &GridMesh,
    inner_nodes: usize,
) -> Result<LebedevBasis> {
    if n_max == 0 {
        return Err(Error::Precondition("lebedev_basis needs n_max >= 1".into()));
    }
    if tau_mesh.nodes().first().is_some_and(|&t| t <= 0.0) {
        return Err(Error::Precondition("tau mesh must lie in (0, ∞)".into()));
    }
    let basis = sample_basis(n_max, tau_mesh, inner_nodes);
    basis.check_gram(GRAM_CHECK_UPTO, GRAM_TOL)?;
    Ok(basis)
}

fn sample_basis(n_max: usize, tau_mesh: &GridMesh, inner_nodes: usize) -> LebedevBasis {
    let mut c = vec![1.0f64; n_max];
    for j in 1..n_max {
        c[j] = c[j - 1] * (2 * j - 1) as f64 / (2 * j) as f64;
    }
    let panels = (inner_nodes / PANEL_POINTS).max(1);
    let (t, tw) = composite(0.0, T_LIMIT, panels, PANEL_POINTS);
    // G weighted by the t-rule, laid out [t][n]
    let mut g = vec![0.0f64; t.len() * n_max];
    g.par_chunks_mut(n_max)
        .zip(t.par_iter().zip(tw.par_iter()))
        .for_each(|(row, (&tt, &w))| {
            laguerre_moments(tt, n_max, &c, row);
            row.iter_mut().for_each(|v| *v *= w);
        });
    let columns: Vec<Vec<f64>> = tau_mesh
        .nodes()
        .par_iter()
        .map(|&tau| {
            let mut acc = vec![0.0f64; n_max];
            for (i, &tt) in t.iter().enumerate() {
                let cs = (tau * tt).cos();
                let row = &g[i * n_max..(i + 1) * n_max];
                for (a, &v) in acc.iter_mut().zip(row) {
                    *a += cs * v;
                }
            }
            let scale = transform_scale(tau);
            acc.iter_mut().for_each(|a| *a *= scale);
            acc
        })
        .collect();
    let samples = (0..n_max)
        .map(|n| columns.iter().map(|col| col[n]).collect())
        .collect();
    LebedevBasis {
        tau_mesh: tau_mesh.clone(),
        samples,
    }
}

/// `w_n(τ)` straight from the Bessel-kernel integral over `x = s²`, with
/// `K_{iτ}` evaluated by [`bessel_k_imag_auto`] at every node. Much slower
/// than [`lebedev_basis`]; the contribution of `s < 1e-8` is dropped.
pub fn lebedev_sample_direct(n: usize, tau: f64) -> Result<f64> {
    let mut s_nodes = Vec::new();
    let mut s_weights = Vec::new();
    let mut lo = 1e-8f64;
    while lo < 1.0 {
        let hi = (2.0 * lo).min(1.0);
        let (s, w) = composite(lo, hi, 1, PANEL_POINTS);
        s_nodes.extend(s);
        s_weights.extend(w);
        lo = hi;
    }
    let (s, w) = composite(1.0, 7.0, 24, PANEL_POINTS);
    s_nodes.extend(s);
    s_weights.extend(w);
    let terms: Result<Vec<f64>> = s_nodes
        .par_iter()
        .zip(s_weights.par_iter())
        .map(|(&s, &w)| {
            let x = s * s;
            let (mut prev, mut cur) = (0.0, 1.0);
            for k in 0..n {
                let next = ((2 * k + 1) as f64 - x) * cur / (k + 1) as f64
                    - k as f64 * prev / (k + 1) as f64;
                prev = cur;
                cur = next;
            }
            Ok(w * bessel_k_imag_auto(tau, 0.5 * x)? * (-0.5 * x).exp() * cur)
        })
        .collect();
    Ok(2.0 * transform_scale(tau) * terms?.iter().sum::<f64>())
}

/// `T[m][n] = ∫ g(τ) w_m(τ) w_n(τ) dτ` with `g = √(π/cosh πτ)`; when
/// `sign_flip_above` is set, `g` is negated beyond that `τ`.
pub fn hilbert_root(
    basis: &LebedevBasis,
    sign_flip_above: Option<f64>,
) -> crate::matrixcore::ComplexMatrix {
    let n = basis.len();
    let weight = |tau: f64| {
        let g = root_weight(tau);
        match sign_flip_above {
            Some(cut) if tau > cut => -g,
            _ => g,
        }
    };
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|m| (m..n).map(|k| basis.weighted_inner(m, k, weight)).collect())
        .collect();
    crate::matrixcore::ComplexMatrix::from_fn(n, n, |i, j| {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        Complex64::new(upper[lo][hi - lo], 0.0)
    })
}
