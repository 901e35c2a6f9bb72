//! The acceptance checks, one function per criterion.
//!
//! Each criterion collects named checks; it passes when all of them hold.
//! Criterion 12 rebuilds every root from criteria 1-11 and checks that it
//! commutes with its square on the same window.

use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::matrixcore::{mat_product, window_residual, ComplexMatrix, Window};
use crate::operators::{
    cayley_volterra, cesaro_matrix, hilbert_matrix, shift_pow_matrix, tcos_matrix, volterra_matrix,
    GridMesh,
};
use crate::roots::{
    cesaro_entry_alternating, cesaro_root_closed, cesaro_root_factored, cesaro_root_series,
    compressed_shift_root, hilbert_root, lebedev_basis, shift2_root, tcos_root,
    toeplitz_root_decide, volterra_abel_root, PolynomialSymbol, ShiftRootParams, SignPattern,
    TcosBranch, TAU_MAX, TAU_MIN,
};
use crate::series::{analytic_multiplier_matrix, series_mul};
use crate::verify::{
    boundary_report, cesaro_eigencheck, cesaro_square_report, disc_report, square_residual_report,
    sweep_residual, unbounded_growth_demo, FigureId, VerifyReport,
};

pub const CRITERIA: [(usize, &str); 12] = [
    (1, "Cesàro closed-form root"),
    (2, "Cesàro cross-oracle equality"),
    (3, "Mixed-sign Cesàro root is unbounded"),
    (4, "Cesàro eigenfunctions"),
    (5, "Square roots of S²"),
    (6, "Abel root of the Volterra operator"),
    (7, "Root of the compressed shift"),
    (8, "Boundary positivity and disc images"),
    (9, "Root of ½(S + S*)"),
    (10, "Lebedev chain and Hilbert root"),
    (11, "Toeplitz square-root decision"),
    (12, "Roots commute with their squares"),
];

/// Hilbert root size; the window-4 residual of a basis truncated at `n`
/// behaves like `0.43/n`.
pub const HILBERT_N: usize = 128;
/// `τ` beyond which the sign-flipped Hilbert root negates `g`.
pub const HILBERT_FLIP: f64 = 3.0;
pub const LEBEDEV_PANELS: usize = 64;
pub const LEBEDEV_INNER_NODES: usize = 2880;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub detail: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed_secs: f64,
}

impl CriterionOutcome {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// `criterion N [PASS|FAIL] title (seconds)`.
    pub fn summary_line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {} ({:.1}s)",
            self.id,
            if self.pass() { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed_secs
        )
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn at_most(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        self.0.push(Check {
            name: name.into(),
            value,
            detail: format!("{value:.3e} <= {limit:.3e}"),
            pass: value <= limit,
        });
    }

    fn at_least(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        self.0.push(Check {
            name: name.into(),
            value,
            detail: format!("{value:.3e} >= {limit:.3e}"),
            pass: value >= limit,
        });
    }

    fn holds(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            detail: detail.into(),
            pass: ok,
        });
    }

    /// Every bounded metric of a report as its own check.
    fn report(&mut self, prefix: &str, r: &VerifyReport) {
        for m in &r.metrics {
            if let Some((kind, limit)) = m.bound {
                let name = format!("{prefix}.{}", m.name);
                match kind {
                    crate::verify::BoundKind::AtMost => self.at_most(name, m.value, limit),
                    crate::verify::BoundKind::AtLeast => self.at_least(name, m.value, limit),
                }
            }
        }
    }

    fn strictly_decreasing(&mut self, name: &str, sizes: &[usize], values: &[f64]) {
        let table = sizes
            .iter()
            .zip(values)
            .map(|(s, v)| format!("{s}:{v:.3e}"))
            .collect::<Vec<_>>()
            .join(" ");
        let ok = values.windows(2).all(|p| p[1] < p[0]);
        self.holds(name, ok, table);
    }
}

/// A root, its target and the window on which `R² = T` is asserted.
pub struct RootCase {
    pub name: String,
    pub root: ComplexMatrix,
    pub target: ComplexMatrix,
    pub window: usize,
}

impl RootCase {
    fn new(
        name: impl Into<String>,
        root: ComplexMatrix,
        target: ComplexMatrix,
        window: usize,
    ) -> Self {
        Self {
            name: name.into(),
            root,
            target,
            window,
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn criterion_1() -> Result<Vec<Check>> {
    let start = Instant::now();
    let mut checks = Checks::default();
    for sign in [1, -1] {
        checks.report(&format!("sign{sign:+}"), &cesaro_square_report(64, sign)?);
    }
    checks.at_most("runtime_secs", start.elapsed().as_secs_f64(), 5.0);
    Ok(checks.0)
}

fn cesaro_cross_roots() -> Result<Vec<RootCase>> {
    Ok(vec![
        RootCase::new(
            "cesaro-factored-24",
            cesaro_root_factored(24, &SignPattern::constant(1)?)?,
            cesaro_matrix(24)?,
            24,
        ),
        RootCase::new(
            "cesaro-series-16",
            cesaro_root_series(16, 100_000)?,
            cesaro_matrix(16)?,
            16,
        ),
    ])
}

pub fn criterion_2() -> Result<Vec<Check>> {
    let mut checks = Checks::default();
    let closed = cesaro_root_closed(24, 1)?;
    let factored = cesaro_root_factored(24, &SignPattern::constant(1)?)?;
    checks.at_most("factored_vs_closed", factored.max_abs_diff(&closed)?, 1e-6);
    let mut naive_diff = 0.0f64;
    let mut naive_vs_factored = 0.0f64;
    for i in 0..24 {
        for j in 0..=i {
            if i - j <= 20 {
                let v = cesaro_entry_alternating(i, j);
                naive_diff = naive_diff.max((v - closed.get(i, j).re).abs());
                naive_vs_factored = naive_vs_factored.max((v - factored.get(i, j).re).abs());
            }
        }
    }
    checks.at_most("alternating_vs_closed", naive_diff, 1e-6);
    checks.at_most("alternating_vs_factored", naive_vs_factored, 1e-6);
    let series = cesaro_root_series(16, 100_000)?;
    let closed16 = cesaro_root_closed(16, 1)?;
    checks.at_most(
        "series_vs_closed",
        series.max_abs_diff(&closed16)?,
        2.0 / 100_000f64.sqrt(),
    );
    Ok(checks.0)
}

pub fn criterion_3() -> Result<Vec<Check>> {
    let mut checks = Checks::default();
    checks.report("growth", &unbounded_growth_demo(&[64, 128, 256, 512])?);
    Ok(checks.0)
}

pub fn criterion_4() -> Result<Vec<Check>> {
    let mut checks = Checks::default();
    for (w, n, tol) in [(0.5, 64, 1e-12), (0.9, 64, 1e-12), (0.3, 512, 1e-3)] {
        let r = cesaro_eigencheck(c(w, 0.0), n)?;
        checks.at_most(
            format!("w={w}"),
            r.metric("relative_residual").unwrap_or(f64::NAN),
            tol,
        );
    }
    Ok(checks.0)
}

/// Banded (iii) family, lower-triangular (iv) family, and the shift itself.
pub(crate) fn shift_roots(n: usize) -> Result<Vec<RootCase>> {
    let target = shift_pow_matrix(n, 2)?;
    let iii = ShiftRootParams::identity_unitary_example();
    let band = iii.max_degree();
    Ok(vec![
        RootCase::new(
            "s2-identity-unitary",
            shift2_root(&iii, n)?,
            target.clone(),
            n - 2 * band - 4,
        ),
        RootCase::new(
            "s2-swap-sqrt",
            shift2_root(&ShiftRootParams::swap_sqrt_example(n)?, n)?,
            target.clone(),
            n,
        ),
        RootCase::new(
            "s2-shift",
            shift2_root(&ShiftRootParams::shift_example(), n)?,
            target,
            n,
        ),
    ])
}

/// Leading blocks of the two displayed section matrices.
fn displayed_shift_roots() -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut iii = vec![vec![0.0; 7]; 7];
    for (i, j) in [(0, 1), (2, 3), (3, 0), (4, 5), (5, 2)] {
        iii[i][j] = 1.0;
    }
    let h = -0.5;
    let e = -0.125;
    let s = -1.0 / 16.0;
    let iv = vec![
        vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![-1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![h, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, h, -1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![e, 0.0, h, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, e, 0.0, h, -1.0, 1.0, 0.0, 0.0, 0.0],
        vec![s, 0.0, e, 0.0, h, 1.0, 1.0, 0.0, 0.0],
        vec![0.0, s, 0.0, e, 0.0, h, -1.0, 1.0, 0.0],
    ];
    (iii, iv)
}

fn display_error(q: &ComplexMatrix, display: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in display.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            worst = worst.max((q.get(i, j) - c(v, 0.0)).norm());
        }
    }
    worst
}

pub fn criterion_5() -> Result<Vec<Check>> {
    let n = 64;
    let mut checks = Checks::default();
    let cases = shift_roots(n)?;
    for case in &cases[..2] {
        let sq = mat_product(&case.root, &case.root)?;
        checks.at_most(
            format!("{}.window{}", case.name, case.window),
            window_residual(&sq, &case.target, Window::new(case.window))?,
            1e-10,
        );
    }
    let s = shift_pow_matrix(n, 1)?;
    checks.holds(
        "s2-shift.equals_shift",
        cases[2].root == s,
        "bitwise equality",
    );
    let (iii, iv) = displayed_shift_roots();
    checks.at_most(
        "s2-identity-unitary.display",
        display_error(&cases[0].root, &iii),
        1e-10,
    );
    checks.at_most(
        "s2-swap-sqrt.display",
        display_error(&cases[1].root, &iv),
        1e-10,
    );
    Ok(checks.0)
}

pub const VOLTERRA_SIZES: [usize; 4] = [64, 128, 256, 512];

pub fn criterion_6() -> Result<Vec<Check>> {
    let start = Instant::now();
    let mut checks = Checks::default();
    let residuals: Vec<f64> = VOLTERRA_SIZES
        .iter()
        .map(|&m| sweep_residual("volterra-abel", m))
        .collect::<Result<_>>()?;
    checks.strictly_decreasing("square_residual_decreasing", &VOLTERRA_SIZES, &residuals);
    checks.at_most("square_residual_512", residuals[3], 3e-2);
    let m = 512;
    let y = volterra_abel_root(m)?;
    let y2 = mat_product(&y, &y)?;
    let out = y2.matvec(&vec![c(1.0, 0.0); m])?;
    let sup = out
        .iter()
        .enumerate()
        .map(|(i, v)| (v - c((i as f64 + 0.5) / m as f64, 0.0)).norm())
        .fold(0.0, f64::max);
    checks.at_most("y2_on_constant_vs_x", sup, 1e-2);
    checks.at_most("runtime_secs", start.elapsed().as_secs_f64(), 30.0);
    Ok(checks.0)
}

pub const COMPRESSED_TERMS: [usize; 3] = [64, 256, 1024];

pub fn criterion_7() -> Result<Vec<Check>> {
    let mut checks = Checks::default();
    let residuals: Vec<f64> = COMPRESSED_TERMS
        .iter()
        .map(|&k| sweep_residual("compressed-shift", k))
        .collect::<Result<_>>()?;
    checks.strictly_decreasing("square_residual_decreasing", &COMPRESSED_TERMS, &residuals);
    Ok(checks.0)
}

pub fn criterion_8() -> Result<Vec<Check>> {
    let mut checks = Checks::default();
    for fig in [FigureId::Fig1, FigureId::Fig2] {
        checks.report(
            &format!("boundary-{}", fig.name()),
            &boundary_report(fig, 100_000)?,
        );
        checks.report(
            &format!("disc-{}", fig.name()),
            &disc_report(fig, 256, 720)?,
        );
    }
    Ok(checks.0)
}

pub(crate) fn tcos_roots(n: usize, quad: usize) -> Result<Vec<RootCase>> {
    let t = tcos_matrix(n)?;
    Ok(vec![
        RootCase::new(
            "tcos",
            tcos_root(n, TcosBranch::Principal, quad)?,
            t.clone(),
            n / 4,
        ),
        RootCase::new(
            "tcos-flipped",
            tcos_root(n, TcosBranch::Flipped, quad)?,
            t,
            n / 4,
        ),
    ])
}

pub fn criterion_9() -> Result<Vec<Check>> {
    let (n, quad) = (32, 4096);
    let mut checks = Checks::default();
    let roots = tcos_roots(n, quad)?;
    let b = &roots[0].root;
    checks.holds("symmetric", *b == b.transpose(), "bitwise B = Bᵀ");
    let sq = mat_product(b, b)?;
    checks.at_most(
        "window_residual",
        window_residual(&sq, &roots[0].target, Window::new(n / 4))?,
        1e-2,
    );
    let linear = tcos_root(n, TcosBranch::Linear, quad)?;
    checks.at_most(
        "linear_hook_vs_tridiagonal",
        linear.max_abs_diff(&tcos_matrix(n)?)?,
        1e-8,
    );
    Ok(checks.0)
}

pub(crate) fn lebedev_default_mesh() -> GridMesh {
    GridMesh::tau_halfline(TAU_MIN, TAU_MAX, LEBEDEV_PANELS, 16)
}

fn hilbert_roots() -> Result<(Vec<RootCase>, crate::roots::LebedevBasis)> {
    let basis = lebedev_basis(HILBERT_N, &lebedev_default_mesh(), LEBEDEV_INNER_NODES)?;
    let h = hilbert_matrix(HILBERT_N)?;
    let cases = vec![
        RootCase::new("hilbert", hilbert_root(&basis, None), h.clone(), 4),
        RootCase::new(
            "hilbert-flipped",
            hilbert_root(&basis, Some(HILBERT_FLIP)),
            h,
            4,
        ),
    ];
    Ok((cases, basis))
}

pub fn criterion_10() -> Result<Vec<Check>> {
    let start = Instant::now();
    let mut checks = Checks::default();
    let (cases, basis) = hilbert_roots()?;
    let mut gram = 0.0f64;
    let mut moments = 0.0f64;
    for m in 0..5 {
        for n in 0..5 {
            let target = if m == n { 1.0 } else { 0.0 };
            gram = gram.max((basis.gram(m, n) - target).abs());
            moments = moments.max((basis.hilbert_moment(m, n) - 1.0 / (m + n + 1) as f64).abs());
        }
    }
    checks.at_most("gram_deviation_n<=4", gram, 1e-3);
    checks.at_most("hilbert_moments_n<=4", moments, 1e-3);
    for case in &cases {
        let sq = mat_product(&case.root, &case.root)?;
        checks.at_most(
            format!("{}.window4", case.name),
            window_residual(&sq, &case.target, Window::new(4))?,
            5e-3,
        );
    }
    checks.at_least(
        "flipped_differs",
        cases[0].root.max_abs_diff(&cases[1].root)?,
        1e-6,
    );
    checks.at_most("runtime_secs", start.elapsed().as_secs_f64(), 600.0);
    Ok(checks.0)
}

pub(crate) const TOEPLITZ_ORDER: usize = 32;

fn toeplitz_lattice() -> Vec<PolynomialSymbol> {
    let lattice = [
        c(0.0, 0.0),
        c(0.5, 0.0),
        c(-0.3, 0.4),
        c(1.5, 0.0),
        c(0.0, -2.0),
        c(1.0, 0.0),
    ];
    let mut out = Vec::new();
    for deg in 1..=4usize {
        let mut idx = vec![0usize; deg];
        loop {
            out.push(PolynomialSymbol::new(
                c(1.0, 0.0),
                idx.iter().map(|&i| lattice[i]).collect(),
            ));
            let mut p = deg;
            while p > 0 && idx[p - 1] == lattice.len() - 1 {
                p -= 1;
            }
            if p == 0 {
                break;
            }
            idx[p - 1] += 1;
            let v = idx[p - 1];
            idx.iter_mut().skip(p).for_each(|q| *q = v);
        }
    }
    out
}

pub(crate) fn named_toeplitz_present() -> Vec<(&'static str, PolynomialSymbol)> {
    vec![
        (
            "z^2",
            PolynomialSymbol::new(c(1.0, 0.0), vec![c(0.0, 0.0); 2]),
        ),
        (
            "(z-1/2)^2(2-z)",
            PolynomialSymbol::new(c(-1.0, 0.0), vec![c(0.5, 0.0), c(0.5, 0.0), c(2.0, 0.0)]),
        ),
        (
            "1-z",
            PolynomialSymbol::new(c(-1.0, 0.0), vec![c(1.0, 0.0)]),
        ),
    ]
}

fn toeplitz_square_error(psi: &crate::series::PowerSeries, phi: &PolynomialSymbol) -> f64 {
    let k = TOEPLITZ_ORDER - 2;
    series_mul(psi, psi, k)
        .sub(&phi.to_series().truncate(k))
        .max_abs_through(k)
}

pub fn criterion_11() -> Result<Vec<Check>> {
    let mut checks = Checks::default();
    for (name, phi) in [
        ("z", PolynomialSymbol::new(c(1.0, 0.0), vec![c(0.0, 0.0)])),
        (
            "z(z-1/2)^2",
            PolynomialSymbol::new(c(1.0, 0.0), vec![c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.0)]),
        ),
    ] {
        let r = toeplitz_root_decide(&phi, TOEPLITZ_ORDER);
        checks.holds(
            format!("absent {name}"),
            r.is_none(),
            format!("{:?}", r.map(|_| "present")),
        );
    }
    for (name, phi) in named_toeplitz_present() {
        match toeplitz_root_decide(&phi, TOEPLITZ_ORDER) {
            Some(psi) => checks.at_most(
                format!("present {name}"),
                toeplitz_square_error(&psi, &phi),
                1e-10,
            ),
            None => checks.holds(format!("present {name}"), false, "reported absent"),
        }
    }
    let mut mismatches = 0usize;
    let mut worst = 0.0f64;
    let lattice = toeplitz_lattice();
    for phi in &lattice {
        // exact lattice points: multiplicity by equality
        let odd_inside = phi
            .zeros
            .iter()
            .any(|z0| z0.norm() < 1.0 && phi.zeros.iter().filter(|z| *z == z0).count() % 2 == 1);
        match toeplitz_root_decide(phi, TOEPLITZ_ORDER) {
            None if odd_inside => {}
            Some(psi) if !odd_inside => worst = worst.max(toeplitz_square_error(&psi, phi)),
            _ => mismatches += 1,
        }
    }
    checks.holds(
        "lattice decisions",
        mismatches == 0,
        format!("{} symbols, {mismatches} wrong decisions", lattice.len()),
    );
    checks.at_most("lattice square error", worst, 1e-10);
    Ok(checks.0)
}

/// Every root built by criteria 1-11 with its target and window.
pub fn all_root_cases() -> Result<Vec<RootCase>> {
    let mut cases = Vec::new();
    for sign in [1, -1] {
        cases.push(RootCase::new(
            format!("cesaro-closed{sign:+}"),
            cesaro_root_closed(64, sign)?,
            cesaro_matrix(64)?,
            64,
        ));
    }
    cases.extend(cesaro_cross_roots()?);
    cases.push(RootCase::new(
        "cesaro-mixed-64",
        cesaro_root_factored(64, &SignPattern::first_negative())?,
        cesaro_matrix(64)?,
        64,
    ));
    cases.extend(shift_roots(64)?);
    let m = 512;
    cases.push(RootCase::new(
        "volterra-abel",
        volterra_abel_root(m)?,
        volterra_matrix(m)?,
        m,
    ));
    let cayley = cayley_volterra(&volterra_matrix(256)?)?;
    cases.push(RootCase::new(
        "compressed-shift",
        compressed_shift_root(&cayley, 1024, true)?,
        cayley,
        256,
    ));
    cases.extend(tcos_roots(32, 4096)?);
    cases.extend(hilbert_roots()?.0);
    for (name, phi) in named_toeplitz_present() {
        if let Some(psi) = toeplitz_root_decide(&phi, TOEPLITZ_ORDER) {
            cases.push(RootCase::new(
                format!("toeplitz {name}"),
                analytic_multiplier_matrix(&psi, TOEPLITZ_ORDER),
                analytic_multiplier_matrix(&phi.to_series(), TOEPLITZ_ORDER),
                TOEPLITZ_ORDER,
            ));
        }
    }
    Ok(cases)
}

pub fn criterion_12() -> Result<Vec<Check>> {
    let mut checks = Checks::default();
    for case in all_root_cases()? {
        let r = square_residual_report(
            &case.name,
            &case.root,
            &case.target,
            Window::new(case.window),
            f64::INFINITY,
        )?;
        let sq = r.metric("square_residual").unwrap_or(f64::NAN);
        let comm = r.metric("commutator_residual").unwrap_or(f64::NAN);
        checks.at_most(
            format!("{} (square residual {sq:.2e})", case.name),
            comm,
            10.0 * sq + 1e-8,
        );
    }
    Ok(checks.0)
}

pub fn run_criterion(id: usize) -> Result<CriterionOutcome> {
    let title = CRITERIA
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, t)| *t)
        .ok_or_else(|| crate::error::Error::UnknownId(format!("criterion {id}")))?;
    let start = Instant::now();
    let checks = match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        _ => criterion_12(),
    }?;
    Ok(CriterionOutcome {
        id,
        title,
        checks,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// Runs every criterion in order. A criterion whose construction errors out
/// is reported as failed with the error text.
pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .map(|&(id, title)| {
            let start = Instant::now();
            run_criterion(id).unwrap_or_else(|e| CriterionOutcome {
                id,
                title,
                checks: vec![Check {
                    name: "error".into(),
                    value: f64::NAN,
                    detail: e.to_string(),
                    pass: false,
                }],
                elapsed_secs: start.elapsed().as_secs_f64(),
            })
        })
        .collect()
}
