//! Residual reports for the operator identities.
//!
//! Every check produces a [`VerifyReport`]: parameters, named metrics, and
//! for the metrics that carry a bound, whether the bound holds. Nothing here
//! draws random numbers, so a report is a pure function of its parameters.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrixcore::{
    mat_product, op_norm_est, window_residual, ComplexMatrix, Window, NORM_ITERS, NORM_TOL,
};
use crate::operators::{cayley_volterra, cesaro_matrix, volterra_matrix};
use crate::roots::{
    cesaro_root_closed, cesaro_root_factored_columns, cesaro_root_series, compressed_shift_root,
    volterra_abel_root, SignPattern,
};
use crate::series::{
    binomial_series, binomial_series_complex, eval_disc_grid, order_of_zero, series_mul,
    series_sqrt, theta_coeffs, PowerSeries, ZERO_TOL,
};

pub const REPORT_SCHEMA: u32 = 1;

/// Grid size used for the compressed-shift convergence sweep.
pub const COMPRESSED_GRID: usize = 256;
/// Order of the Cesàro section in the operator-series sweep.
pub const CESARO_SERIES_N: usize = 16;
/// Largest radius of the disc point clouds.
pub const DISC_RADIUS: f64 = 0.995;
/// Taylor degree used for `Θ` in the disc images. Near `|z| = 0.995` the
/// coefficients of `Θ` decay like `exp(-c√k)`, so a few hundred terms are
/// far from enough there.
pub const DISC_SERIES_DEGREE: usize = 8192;
/// Smallest admissible `|f|` over the disc point clouds. The figure-1 symbol
/// comes within about `0.021` of the origin on the closed disc (near
/// `z ≈ e^{0.72i}`), so the margin sits at half of that.
pub const DISC_MARGIN: f64 = 0.01;
/// Excluded neighbourhood of `θ = 0` in boundary grids.
pub const THETA_EXCLUSION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<(BoundKind, f64)>,
}

impl Metric {
    pub fn holds(&self) -> bool {
        match self.bound {
            None => true,
            Some((BoundKind::AtMost, limit)) => self.value <= limit,
            Some((BoundKind::AtLeast, limit)) => self.value >= limit,
        }
    }
}

/// Named results of one claim check; `pass` holds iff every bounded metric
/// is within its bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub claim_id: String,
    pub params: BTreeMap<String, String>,
    pub metrics: Vec<Metric>,
    pub pass: bool,
    pub tolerance: f64,
}

impl VerifyReport {
    pub fn new(claim_id: impl Into<String>, tolerance: f64) -> Self {
        Self {
            schema: REPORT_SCHEMA,
            claim_id: claim_id.into(),
            params: BTreeMap::new(),
            metrics: Vec::new(),
            pass: true,
            tolerance,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    fn push(&mut self, name: String, value: f64, bound: Option<(BoundKind, f64)>) {
        let m = Metric { name, value, bound };
        self.pass &= m.holds();
        self.metrics.push(m);
    }

    pub fn info(&mut self, name: impl Into<String>, value: f64) {
        self.push(name.into(), value, None);
    }

    pub fn at_most(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        self.push(name.into(), value, Some((BoundKind::AtMost, limit)));
    }

    pub fn at_least(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        self.push(name.into(), value, Some((BoundKind::AtLeast, limit)));
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics
            .iter()
            .find(|m| m.name == name)
            .map(|m| m.value)
    }

    pub fn failed_metrics(&self) -> Vec<&Metric> {
        self.metrics.iter().filter(|m| !m.holds()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports hold plain data")
    }
}

/// `R² = T` and `RT = TR` on the leading window.
///
/// The commutator bound is `10·(square residual) + 1e-8`: an exact root
/// commutes with its square, and a truncated one does so up to the same
/// truncation error.
pub fn square_residual_report(
    claim_id: &str,
    root: &ComplexMatrix,
    target: &ComplexMatrix,
    w: Window,
    tol: f64,
) -> Result<VerifyReport> {
    let sq = mat_product(root, root)?;
    let residual = window_residual(&sq, target, w)?;
    let rt = mat_product(root, target)?;
    let tr = mat_product(target, root)?;
    let commutator = window_residual(&rt, &tr, w)?;
    let mut r = VerifyReport::new(claim_id, tol)
        .param("n", root.rows())
        .param("window", w.size);
    r.at_most("square_residual", residual, tol);
    r.at_most("commutator_residual", commutator, 10.0 * residual + 1e-8);
    r.info("root_norm", op_norm_est(root, NORM_ITERS, NORM_TOL));
    r.info("target_norm", op_norm_est(target, NORM_ITERS, NORM_TOL));
    Ok(r)
}

/// Builders understood by [`convergence_sweep`].
pub const SWEEP_BUILDERS: [&str; 3] = ["volterra-abel", "cesaro-series", "compressed-shift"];

/// Residual of one builder at one size.
///
/// * `volterra-abel`: `‖Y_M² - V_M‖` for grid size `M`;
/// * `cesaro-series`: `‖A_K² - C‖` for `K` series terms at `N = 16`;
/// * `compressed-shift`: `‖R_K² - M‖` for `K` averaged Taylor terms at grid
///   size 256.
pub fn sweep_residual(builder_id: &str, size: usize) -> Result<f64> {
    let norm = |a: &ComplexMatrix, b: &ComplexMatrix| -> Result<f64> {
        Ok(op_norm_est(&a.sub(b)?, NORM_ITERS, NORM_TOL))
    };
    match builder_id {
        "volterra-abel" => {
            let y = volterra_abel_root(size)?;
            norm(&mat_product(&y, &y)?, &volterra_matrix(size)?)
        }
        "cesaro-series" => {
            let a = cesaro_root_series(CESARO_SERIES_N, size)?;
            norm(&mat_product(&a, &a)?, &cesaro_matrix(CESARO_SERIES_N)?)
        }
        "compressed-shift" => {
            let m = cayley_volterra(&volterra_matrix(COMPRESSED_GRID)?)?;
            let r = compressed_shift_root(&m, size, true)?;
            norm(&mat_product(&r, &r)?, &m)
        }
        other => Err(Error::UnknownId(other.to_string())),
    }
}

/// Residuals over `sizes`; passes when each step is at most 5% (plus
/// `1e-12` of rounding) above the previous one.
pub fn convergence_sweep(builder_id: &str, sizes: &[usize]) -> Result<VerifyReport> {
    if !SWEEP_BUILDERS.contains(&builder_id) {
        return Err(Error::UnknownId(builder_id.to_string()));
    }
    if sizes.len() < 2 {
        return Err(Error::Precondition(
            "a convergence sweep needs at least two sizes".into(),
        ));
    }
    let residuals: Vec<f64> = sizes
        .iter()
        .map(|&s| sweep_residual(builder_id, s))
        .collect::<Result<_>>()?;
    let mut r = VerifyReport::new(format!("sweep-{builder_id}"), 0.05).param(
        "sizes",
        sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    for (s, v) in sizes.iter().zip(&residuals) {
        r.info(format!("residual_{s}"), *v);
    }
    let excess = residuals
        .windows(2)
        .map(|p| p[1] - 1.05 * p[0] - 1e-12)
        .fold(f64::NEG_INFINITY, f64::max);
    r.at_most("worst_step_excess", excess, 0.0);
    Ok(r)
}

/// Which boundary real part is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// `1 + z + Θ(z)`.
    OnePlusZTheta,
    /// `z + Θ(z)(1 - z)^{1/5}`.
    ZThetaFifthRoot,
}

impl ProfileKind {
    /// `Re f(e^{iθ})` for `θ ∈ (0, 2π)`.
    ///
    /// On the circle `Θ(e^{iθ}) = e^{-i cot(θ/2)}` and, on the principal
    /// branch, `(1 - e^{iθ})^{1/5} = (2 sin(θ/2))^{1/5} e^{i(θ-π)/10}`. Both
    /// expressions are valid on all of `(0, 2π)` and are symmetric under
    /// `θ ↦ 2π - θ`, as they must be for a symbol with real coefficients.
    pub fn boundary_re(self, theta: f64) -> f64 {
        let cot = 1.0 / (0.5 * theta).tan();
        match self {
            ProfileKind::OnePlusZTheta => 1.0 + theta.cos() + cot.cos(),
            ProfileKind::ZThetaFifthRoot => {
                theta.cos()
                    + (2.0 * (0.5 * theta).sin()).powf(0.2) * ((theta - PI) / 10.0 - cot).cos()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryProfile {
    pub kind: ProfileKind,
    pub theta_grid: Vec<f64>,
}

impl BoundaryProfile {
    pub fn new(kind: ProfileKind, theta_grid: Vec<f64>) -> Result<Self> {
        if let Some(&t) = theta_grid.iter().find(|&&t| {
            !(t > 0.0 && t < 2.0 * PI) || t < THETA_EXCLUSION || 2.0 * PI - t < THETA_EXCLUSION
        }) {
            return Err(Error::Precondition(format!(
                "boundary angle {t} outside (0, 2π) minus the excluded neighbourhood of 0"
            )));
        }
        Ok(Self { kind, theta_grid })
    }

    /// `points` equally spaced angles on `[1e-4, 2π - 1e-4]`.
    pub fn uniform(kind: ProfileKind, points: usize) -> Self {
        let lo = THETA_EXCLUSION;
        let hi = 2.0 * PI - THETA_EXCLUSION;
        let step = (hi - lo) / (points.max(2) - 1) as f64;
        let theta_grid = (0..points.max(2)).map(|k| lo + step * k as f64).collect();
        Self { kind, theta_grid }
    }

    /// `(θ, Re f)` at the grid minimum.
    pub fn argmin(&self) -> (f64, f64) {
        self.theta_grid
            .iter()
            .map(|&t| (t, self.kind.boundary_re(t)))
            .fold(
                (f64::NAN, f64::INFINITY),
                |acc, p| if p.1 < acc.1 { p } else { acc },
            )
    }
}

pub fn boundary_min_re(p: &BoundaryProfile) -> Result<f64> {
    if p.theta_grid.is_empty() {
        return Err(Error::Precondition("empty boundary grid".into()));
    }
    Ok(p.argmin().1)
}

/// The two disc images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureId {
    /// `z + Θ(z)(1 - z)^{1/5}`.
    Fig1,
    /// `1 + z + Θ(z)`.
    Fig2,
}

impl FigureId {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(FigureId::Fig1),
            "fig2" => Ok(FigureId::Fig2),
            other => Err(Error::UnknownId(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
        }
    }

    pub fn profile(self) -> ProfileKind {
        match self {
            FigureId::Fig1 => ProfileKind::ZThetaFifthRoot,
            FigureId::Fig2 => ProfileKind::OnePlusZTheta,
        }
    }

    /// Taylor series of the symbol through `degree`.
    pub fn symbol(self, degree: usize) -> PowerSeries {
        let one = Complex64::new(1.0, 0.0);
        let z = PowerSeries::monomial(1, one, degree);
        let theta = theta_coeffs(degree);
        match self {
            FigureId::Fig1 => z.add(&series_mul(&theta, &binomial_series(0.2, degree), degree)),
            FigureId::Fig2 => PowerSeries::constant(one, degree).add(&z).add(&theta),
        }
    }
}

/// Polar grid `r_i e^{iθ_j}`: `r_i = 0.995·i/(radial - 1)`,
/// `θ_j = 2πj/angular`, radius-major order.
pub fn disc_grid(radial: usize, angular: usize) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(radial * angular);
    for i in 0..radial {
        let r = DISC_RADIUS * i as f64 / (radial - 1) as f64;
        for j in 0..angular {
            pts.push(Complex64::from_polar(
                r,
                2.0 * PI * j as f64 / angular as f64,
            ));
        }
    }
    pts
}

/// Values of the figure symbol on [`disc_grid`].
pub fn disc_image_points(f_id: FigureId, radial: usize, angular: usize) -> Result<Vec<Complex64>> {
    if radial < 16 || angular < 16 {
        return Err(Error::Precondition(
            "disc images need at least 16 radii and 16 angles".into(),
        ));
    }
    let f = f_id.symbol(DISC_SERIES_DEGREE);
    let pts = disc_grid(radial, angular);
    let chunks: Vec<Vec<Complex64>> = pts
        .par_chunks(angular)
        .map(|c| eval_disc_grid(&f, c))
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Positivity of `Re f` on the boundary plus the two closed-form spot values.
pub fn boundary_report(f_id: FigureId, points: usize) -> Result<VerifyReport> {
    let profile = BoundaryProfile::uniform(f_id.profile(), points);
    let (theta_min, min_re) = profile.argmin();
    let at_pi = f_id.profile().boundary_re(PI);
    let expected_at_pi = match f_id {
        FigureId::Fig1 => 2f64.powf(0.2) - 1.0,
        FigureId::Fig2 => 1.0,
    };
    let mut r =
        VerifyReport::new(format!("boundary-{}", f_id.name()), 1e-10).param("points", points);
    r.at_least("min_re", min_re, f64::MIN_POSITIVE);
    r.info("theta_at_min", theta_min);
    r.at_most("spot_error_at_pi", (at_pi - expected_at_pi).abs(), 1e-10);
    Ok(r)
}

/// Modulus margin of the disc point cloud.
pub fn disc_report(f_id: FigureId, radial: usize, angular: usize) -> Result<VerifyReport> {
    let pts = disc_image_points(f_id, radial, angular)?;
    let (k, min_mod) =
        pts.iter()
            .enumerate()
            .map(|(k, p)| (k, p.norm()))
            .fold(
                (0, f64::INFINITY),
                |acc, p| if p.1 < acc.1 { p } else { acc },
            );
    let at_origin = pts[0];
    let expected_origin = match f_id {
        FigureId::Fig1 => (-1.0f64).exp(),
        FigureId::Fig2 => 1.0 + (-1.0f64).exp(),
    };
    let mut r = VerifyReport::new(format!("disc-{}", f_id.name()), DISC_MARGIN)
        .param("radial", radial)
        .param("angular", angular)
        .param("series_degree", DISC_SERIES_DEGREE);
    r.at_least("min_modulus", min_mod, DISC_MARGIN);
    r.info(
        "argmin_radius",
        DISC_RADIUS * (k / angular) as f64 / (radial - 1) as f64,
    );
    r.info(
        "argmin_angle",
        2.0 * PI * (k % angular) as f64 / angular as f64,
    );
    r.at_most(
        "origin_error",
        (at_origin - Complex64::new(expected_origin, 0.0)).norm(),
        1e-14,
    );
    Ok(r)
}

/// `‖(I - C_Nᴴ)v - w v‖ / ‖v‖` for the truncated coefficients of
/// `v = (1 - z)^{w/(1-w)}`.
pub fn cesaro_eigencheck(w: Complex64, n: usize) -> Result<VerifyReport> {
    if (w - Complex64::new(1.0, 0.0)).norm() == 0.0 {
        return Err(Error::Precondition("w = 1 has no eigenfunction".into()));
    }
    if w.norm() >= 1.0 {
        return Err(Error::Precondition(format!(
            "eigencheck needs |w| < 1, got {w}"
        )));
    }
    if n == 0 {
        return Err(Error::Precondition("eigencheck needs N >= 1".into()));
    }
    let alpha = w / (Complex64::new(1.0, 0.0) - w);
    let v = binomial_series_complex(alpha, n - 1);
    let v = v.coeffs();
    // (Cᴴ v)_j = Σ_{i ≥ j} v_i / (i + 1): suffix sums
    let mut tail = Complex64::new(0.0, 0.0);
    let mut cv = vec![Complex64::new(0.0, 0.0); n];
    for j in (0..n).rev() {
        tail += v[j] / (j + 1) as f64;
        cv[j] = tail;
    }
    let num: f64 = (0..n)
        .map(|j| (v[j] - cv[j] - w * v[j]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let den: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let exact_polynomial = alpha.im.abs() < 1e-9
        && (alpha.re - alpha.re.round()).abs() < 1e-9
        && alpha.re.round() >= 0.0
        && (alpha.re.round() as usize) < n;
    let tol = if exact_polynomial { 1e-12 } else { 1e-3 };
    let mut r = VerifyReport::new("cesaro-eigen", tol)
        .param("w", format!("{}{:+}i", w.re, w.im))
        .param("n", n);
    r.at_most("relative_residual", num / den, tol);
    r.info("exponent_re", alpha.re);
    Ok(r)
}

/// `‖T_N e₀‖` for the root with `σ(1) = -1`, against `√N` and against the
/// `σ ≡ +1` root.
pub fn unbounded_growth_demo(n_list: &[usize]) -> Result<VerifyReport> {
    if n_list.is_empty() || n_list.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::Precondition("sizes must be increasing".into()));
    }
    let column_norm = |n: usize, sigma: &SignPattern| -> Result<f64> {
        let col = &cesaro_root_factored_columns(n, sigma, 1)?[0];
        Ok(col.iter().map(|v| v * v).sum::<f64>().sqrt())
    };
    let mixed = SignPattern::first_negative();
    let plus = SignPattern::constant(1)?;
    let mut r = VerifyReport::new("cesaro-unbounded", 0.0).param(
        "sizes",
        n_list
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    let mut prev: Option<f64> = None;
    for &n in n_list {
        let g = column_norm(n, &mixed)?;
        if n >= 64 {
            r.at_least(format!("mixed_norm_{n}"), g, (n as f64).sqrt());
        } else {
            r.info(format!("mixed_norm_{n}"), g);
        }
        r.at_most(format!("control_norm_{n}"), column_norm(n, &plus)?, 2.2);
        if let Some(p) = prev {
            let ratio = g / p;
            r.at_least(format!("ratio_{n}_low"), ratio, 1.3);
            r.at_most(format!("ratio_{n}_high"), ratio, 1.5);
        }
        prev = Some(g);
    }
    Ok(r)
}

/// For `u` vanishing to order at least two, `z + u h` vanishes to order
/// exactly one, so it is not the square of any analytic `ψ`.
pub fn no_root_double_zero_check(
    u: &PowerSeries,
    h_samples: &[PowerSeries],
) -> Result<VerifyReport> {
    let ord_u = order_of_zero(u, ZERO_TOL);
    if ord_u < 2 {
        return Err(Error::Precondition(format!(
            "u vanishes to order {ord_u} < 2 at the origin"
        )));
    }
    let mut r = VerifyReport::new("double-zero", 0.0)
        .param("order_of_u", ord_u)
        .param("samples", h_samples.len());
    for (k, h) in h_samples.iter().enumerate() {
        let degree = (u.order() + h.order()).max(2);
        let z = PowerSeries::monomial(1, Complex64::new(1.0, 0.0), degree);
        let g = z.add(&series_mul(u, h, degree));
        let ord = order_of_zero(&g, ZERO_TOL) as f64;
        r.at_least(format!("order_{k}_low"), ord, 1.0);
        r.at_most(format!("order_{k}_high"), ord, 1.0);
        let no_sqrt = matches!(series_sqrt(&g, degree), Err(Error::VanishingConstantTerm));
        r.at_least(
            format!("sqrt_rejected_{k}"),
            if no_sqrt { 1.0 } else { 0.0 },
            1.0,
        );
    }
    Ok(r)
}

/// Cesàro root of the given sign against `C_N` on the full window.
pub fn cesaro_square_report(n: usize, sign: i8) -> Result<VerifyReport> {
    let a = cesaro_root_closed(n, sign)?;
    let mut r = square_residual_report(
        "cesaro-square",
        &a,
        &cesaro_matrix(n)?,
        Window::new(n),
        1e-8,
    )?
    .param("sign", sign);
    let diag = (0..n)
        .map(|i| (a.get(i, i).re - sign as f64 / ((i + 1) as f64).sqrt()).abs())
        .fold(0.0, f64::max);
    r.at_most("diagonal_error", diag, 1e-10);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::shift_pow_matrix;

    #[test]
    fn trivial_square_reports() {
        let i = ComplexMatrix::identity(8);
        let r = square_residual_report("id", &i, &i, Window::new(5), 1e-12).unwrap();
        assert!(r.pass);
        assert_eq!(r.metric("square_residual"), Some(0.0));
        let s = shift_pow_matrix(64, 1).unwrap();
        let r = square_residual_report(
            "s",
            &s,
            &shift_pow_matrix(64, 2).unwrap(),
            Window::new(60),
            1e-12,
        )
        .unwrap();
        assert_eq!(r.metric("square_residual"), Some(0.0));
        assert!(square_residual_report("bad", &i, &s, Window::new(4), 1.0).is_err());
    }

    #[test]
    fn cesaro_square() {
        let r = cesaro_square_report(32, 1).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn report_json_round_trip() {
        let r = cesaro_eigencheck(Complex64::new(0.5, 0.0), 16).unwrap();
        let back: VerifyReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_json().contains("\"schema\": 1"));
    }

    #[test]
    fn eigencheck_cases() {
        // (I - Cᵀ)(1, -1, 0, …) = ½(1, -1, 0, …) by hand
        assert!(
            cesaro_eigencheck(Complex64::new(0.5, 0.0), 64)
                .unwrap()
                .metric("relative_residual")
                .unwrap()
                < 1e-15
        );
        assert!(
            cesaro_eigencheck(Complex64::new(0.9, 0.0), 64)
                .unwrap()
                .pass
        );
        let r = cesaro_eigencheck(Complex64::new(0.3, 0.0), 512).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(cesaro_eigencheck(Complex64::new(1.0, 0.0), 8).is_err());
        assert!(cesaro_eigencheck(Complex64::new(0.0, 1.2), 8).is_err());
    }

    #[test]
    fn boundary_spot_values() {
        assert!((ProfileKind::OnePlusZTheta.boundary_re(PI) - 1.0).abs() < 1e-15);
        assert!(
            (ProfileKind::ZThetaFifthRoot.boundary_re(PI) - (2f64.powf(0.2) - 1.0)).abs() < 1e-15
        );
        assert!(
            boundary_min_re(&BoundaryProfile::uniform(
                ProfileKind::OnePlusZTheta,
                100_000
            ))
            .unwrap()
                > 0.0
        );
    }

    #[test]
    fn boundary_reflection_symmetry() {
        for k in 1..=100 {
            let t = PI * k as f64 / 101.0;
            for kind in [ProfileKind::OnePlusZTheta, ProfileKind::ZThetaFifthRoot] {
                let a = kind.boundary_re(t);
                let b = kind.boundary_re(2.0 * PI - t);
                assert!((a - b).abs() < 1e-12, "{kind:?} θ={t}");
            }
        }
    }

    #[test]
    fn boundary_formula_matches_interior_limit() {
        // Re f(r e^{iθ}) from the series approaches the closed form as r → 1
        for fig in [FigureId::Fig1, FigureId::Fig2] {
            let f = fig.symbol(DISC_SERIES_DEGREE);
            for theta in [1.0, 2.0, PI, 4.0] {
                let v = f.eval(Complex64::from_polar(0.999, theta)).re;
                let b = fig.profile().boundary_re(theta);
                assert!((v - b).abs() < 0.02, "{fig:?} θ={theta}: {v} vs {b}");
            }
        }
    }

    #[test]
    fn boundary_grid_validation() {
        assert!(BoundaryProfile::new(ProfileKind::OnePlusZTheta, vec![0.0]).is_err());
        assert!(BoundaryProfile::new(ProfileKind::OnePlusZTheta, vec![1.0, 2.0]).is_ok());
        assert!(boundary_min_re(
            &BoundaryProfile::new(ProfileKind::OnePlusZTheta, vec![]).unwrap()
        )
        .is_err());
    }

    #[test]
    fn disc_origin_values() {
        let p2 = disc_image_points(FigureId::Fig2, 16, 16).unwrap();
        assert!((p2[0] - Complex64::new(1.0 + (-1.0f64).exp(), 0.0)).norm() < 1e-15);
        let p1 = disc_image_points(FigureId::Fig1, 16, 16).unwrap();
        assert!((p1[0] - Complex64::new((-1.0f64).exp(), 0.0)).norm() < 1e-15);
        assert!(disc_image_points(FigureId::Fig1, 8, 16).is_err());
    }

    #[test]
    fn disc_radial_continuity() {
        let (radial, angular) = (64, 32);
        for fig in [FigureId::Fig1, FigureId::Fig2] {
            let f = fig.symbol(DISC_SERIES_DEGREE);
            let df: Vec<Complex64> = (1..=f.order()).map(|k| f.coeff(k) * k as f64).collect();
            let deriv = |z: Complex64| {
                df.iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
            };
            let pts = disc_image_points(fig, radial, angular).unwrap();
            let grid = disc_grid(radial, angular);
            let dr = DISC_RADIUS / (radial - 1) as f64;
            for j in 0..angular {
                for i in 0..radial - 1 {
                    let (a, b) = (pts[i * angular + j], pts[(i + 1) * angular + j]);
                    let (za, zb) = (grid[i * angular + j], grid[(i + 1) * angular + j]);
                    let bound = deriv(za).norm().max(deriv(zb).norm()).max(1.0);
                    assert!((a - b).norm() <= 10.0 * dr * bound, "{fig:?} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn double_zero_cases() {
        let one = Complex64::new(1.0, 0.0);
        let z2 = PowerSeries::monomial(2, one, 2);
        let z3 = PowerSeries::monomial(3, one, 3);
        let samples = [
            PowerSeries::constant(one, 0),
            PowerSeries::from_real(&[1.0, 1.0]).unwrap(),
            PowerSeries::zero(0),
        ];
        assert!(no_root_double_zero_check(&z2, &samples).unwrap().pass);
        assert!(no_root_double_zero_check(&z3, &samples).unwrap().pass);
        let z = PowerSeries::monomial(1, one, 1);
        assert!(no_root_double_zero_check(&z, &samples).is_err());
    }

    #[test]
    fn sweep_errors() {
        assert!(matches!(
            convergence_sweep("nope", &[1, 2]),
            Err(Error::UnknownId(_))
        ));
        assert!(convergence_sweep("volterra-abel", &[64]).is_err());
        assert!(
            convergence_sweep("volterra-abel", &[64, 128, 256])
                .unwrap()
                .pass
        );
    }
}
