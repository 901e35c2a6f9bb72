//! `oproot` command line: operator dumps, roots with residual sidecars,
//! claim reports, figure point clouds and the acceptance suite.
//!
//! Exit status is 0 on success or pass, 1 when a verification fails and 2 on
//! usage errors (unknown names, flags that do not apply to the command).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrixcore::{ComplexMatrix, Window};
use crate::operators::{
    cayley_volterra, cesaro_matrix, hilbert_matrix, shift_pow_matrix, tcos_matrix, volterra_matrix,
};
use crate::roots::{
    cesaro_root_closed, cesaro_root_factored, cesaro_root_series, compressed_shift_root,
    hilbert_root, lebedev_basis, volterra_abel_root, ShiftRootParams, SignPattern,
};
use crate::series::PowerSeries;
use crate::suite::{
    self, lebedev_default_mesh, shift_roots, tcos_roots, RootCase, HILBERT_FLIP,
    LEBEDEV_INNER_NODES,
};
use crate::verify::{
    boundary_report, cesaro_eigencheck, cesaro_square_report, convergence_sweep, disc_report,
    no_root_double_zero_check, square_residual_report, unbounded_growth_demo, FigureId,
    VerifyReport,
};

pub const DEFAULT_N: usize = 32;
pub const DEFAULT_TERMS: usize = 100_000;
pub const DEFAULT_QUAD: usize = 4096;
pub const DEFAULT_RADIAL: usize = 256;
pub const DEFAULT_ANGULAR: usize = 720;
pub const DEFAULT_BOUNDARY_POINTS: usize = 100_000;
/// Taylor terms for the compressed-shift root when `--terms` is absent; the
/// Cesàro default of `10⁵` would need that many matrix products.
pub const DEFAULT_COMPRESSED_TERMS: usize = 1024;

pub const BUILD_NAMES: [&str; 7] = [
    "shift", "shift2", "tcos", "hilbert", "cesaro", "volterra", "cayley",
];

pub const ROOT_NAMES: [&str; 13] = [
    "cesaro-closed",
    "cesaro-series",
    "cesaro-factored",
    "cesaro-mixed",
    "s2-identity-unitary",
    "s2-swap-sqrt",
    "s2-shift",
    "volterra-abel",
    "compressed-shift",
    "tcos",
    "tcos-flipped",
    "hilbert",
    "hilbert-flipped",
];

/// Claims understood by `oproot verify` besides the root names, which check
/// `R² = T` for that root.
pub const CLAIM_IDS: [&str; 11] = [
    "cesaro-eigen",
    "cesaro-square",
    "cesaro-growth",
    "sweep-volterra-abel",
    "sweep-cesaro-series",
    "sweep-compressed-shift",
    "boundary-fig1",
    "boundary-fig2",
    "disc-fig1",
    "disc-fig2",
    "toeplitz-double-zero",
];

#[derive(Debug, Parser)]
#[command(
    name = "oproot",
    version,
    about = "Square roots of classical operators and their residual checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump an operator section as CSV.
    Build {
        name: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Build a square root; writes CSV plus a JSON sidecar next to `-o`.
    Root {
        name: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Check one claim and write its JSON report.
    Verify {
        claim_id: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Image of the disc under a figure symbol, one `re,im` pair per line.
    Figure {
        name: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run the acceptance criteria and print one line per criterion.
    Suite {
        /// Comma-separated criterion ids; all when absent.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub sign: Option<i8>,
    #[arg(long)]
    pub terms: Option<usize>,
    #[arg(long)]
    pub quad: Option<usize>,
    #[arg(long)]
    pub radial: Option<usize>,
    #[arg(long)]
    pub angular: Option<usize>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub w: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

impl Flags {
    fn given(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (name, set) in [
            ("n", self.n.is_some()),
            ("sign", self.sign.is_some()),
            ("terms", self.terms.is_some()),
            ("quad", self.quad.is_some()),
            ("radial", self.radial.is_some()),
            ("angular", self.angular.is_some()),
            ("points", self.points.is_some()),
            ("w", self.w.is_some()),
            ("sizes", !self.sizes.is_empty()),
        ] {
            if set {
                out.push(name);
            }
        }
        out
    }

    fn n(&self) -> usize {
        self.n.unwrap_or(DEFAULT_N)
    }

    fn sign(&self) -> i8 {
        self.sign.unwrap_or(1)
    }
}

enum Failure {
    Usage(String),
    Run(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            // preconditions are violated by flag values
            Error::UnknownId(_) | Error::Precondition(_) => Failure::Usage(e.to_string()),
            other => Failure::Run(other),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn allow(what: &str, flags: &Flags, allowed: &[&str]) -> Outcome {
    match flags.given().into_iter().find(|f| !allowed.contains(f)) {
        Some(f) => Err(Failure::Usage(format!("--{f} does not apply to {what}"))),
        None => Ok(()),
    }
}

fn positive(name: &str, v: usize) -> Outcome {
    if v == 0 {
        return Err(Failure::Usage(format!("--{name} must be positive")));
    }
    Ok(())
}

/// Writes through a temporary file in the target directory and renames it
/// into place; without a path the bytes go to stdout.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes)?;
        return Ok(out.flush()?);
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}

fn sidecar_path(path: &Path) -> PathBuf {
    let p = path.with_extension("json");
    if p == path {
        path.with_extension("sidecar.json")
    } else {
        p
    }
}

fn build_operator(name: &str, flags: &Flags) -> std::result::Result<ComplexMatrix, Failure> {
    allow("build", flags, &["n"])?;
    let n = flags.n();
    positive("n", n)?;
    Ok(match name {
        "shift" => shift_pow_matrix(n, 1)?,
        "shift2" => shift_pow_matrix(n, 2)?,
        "tcos" => tcos_matrix(n)?,
        "hilbert" => hilbert_matrix(n)?,
        "cesaro" => cesaro_matrix(n)?,
        "volterra" => volterra_matrix(n)?,
        "cayley" => cayley_volterra(&volterra_matrix(n)?)?,
        other => return Err(Failure::Usage(format!("unknown operator `{other}`"))),
    })
}

fn root_flags(name: &str) -> Option<&'static [&'static str]> {
    Some(match name {
        "cesaro-closed" | "cesaro-factored" => &["n", "sign"],
        "cesaro-series" | "compressed-shift" => &["n", "terms"],
        "tcos" | "tcos-flipped" => &["n", "quad"],
        "cesaro-mixed"
        | "s2-identity-unitary"
        | "s2-swap-sqrt"
        | "s2-shift"
        | "volterra-abel"
        | "hilbert"
        | "hilbert-flipped" => &["n"],
        _ => return None,
    })
}

/// A root with its target, window, parameters and any residuals of the
/// construction beyond `R² = T`.
struct BuiltRoot {
    case: RootCase,
    params: BTreeMap<String, String>,
    extra: BTreeMap<String, f64>,
}

fn build_root(name: &str, flags: &Flags) -> std::result::Result<BuiltRoot, Failure> {
    let allowed =
        root_flags(name).ok_or_else(|| Failure::Usage(format!("unknown root `{name}`")))?;
    allow(name, flags, allowed)?;
    // the Hilbert root needs a long section before its leading window settles
    let n = match name {
        "hilbert" | "hilbert-flipped" => flags.n.unwrap_or(suite::HILBERT_N),
        _ => flags.n(),
    };
    positive("n", n)?;
    let mut params = BTreeMap::from([("n".to_string(), n.to_string())]);
    let mut extra = BTreeMap::new();
    let pick = |cases: Vec<RootCase>| {
        cases
            .into_iter()
            .find(|c| c.name == name)
            .expect("case names match root names")
    };
    let case = match name {
        "cesaro-closed" | "cesaro-factored" => {
            let sign = flags.sign();
            if sign != 1 && sign != -1 {
                return Err(Failure::Usage("--sign must be +1 or -1".into()));
            }
            params.insert("sign".into(), format!("{sign:+}"));
            let root = if name == "cesaro-closed" {
                cesaro_root_closed(n, sign)?
            } else {
                cesaro_root_factored(n, &SignPattern::constant(sign)?)?
            };
            let diag = (0..n)
                .map(|i| (root.get(i, i).re - sign as f64 / ((i + 1) as f64).sqrt()).abs())
                .fold(0.0, f64::max);
            extra.insert("diagonal_error".into(), diag);
            RootCase {
                name: name.into(),
                root,
                target: cesaro_matrix(n)?,
                window: n,
            }
        }
        "cesaro-mixed" => {
            params.insert("signs".into(), "first_negative".into());
            let root = cesaro_root_factored(n, &SignPattern::first_negative())?;
            RootCase {
                name: name.into(),
                root,
                target: cesaro_matrix(n)?,
                window: n,
            }
        }
        "cesaro-series" => {
            let terms = flags.terms.unwrap_or(DEFAULT_TERMS);
            positive("terms", terms)?;
            params.insert("terms".into(), terms.to_string());
            RootCase {
                name: name.into(),
                root: cesaro_root_series(n, terms)?,
                target: cesaro_matrix(n)?,
                window: n,
            }
        }
        "s2-identity-unitary" | "s2-swap-sqrt" | "s2-shift" => {
            if n < 16 {
                return Err(Failure::Usage("shift roots need --n >= 16".into()));
            }
            let p = match name {
                "s2-identity-unitary" => ShiftRootParams::identity_unitary_example(),
                "s2-swap-sqrt" => ShiftRootParams::swap_sqrt_example(n)?,
                _ => ShiftRootParams::shift_example(),
            };
            extra.insert("unitarity_residual".into(), p.unitarity_residual());
            extra.insert(
                "constraint_residual".into(),
                p.constraint_residual(n / 2 - 1),
            );
            pick(shift_roots(n)?)
        }
        "volterra-abel" => RootCase {
            name: name.into(),
            root: volterra_abel_root(n)?,
            target: volterra_matrix(n)?,
            window: n,
        },
        "compressed-shift" => {
            let terms = flags.terms.unwrap_or(DEFAULT_COMPRESSED_TERMS);
            positive("terms", terms)?;
            params.insert("terms".into(), terms.to_string());
            params.insert("cesaro_avg".into(), "true".into());
            let m = cayley_volterra(&volterra_matrix(n)?)?;
            RootCase {
                name: name.into(),
                root: compressed_shift_root(&m, terms, true)?,
                target: m,
                window: n,
            }
        }
        "tcos" | "tcos-flipped" => {
            if n < 4 {
                return Err(Failure::Usage("tcos roots need --n >= 4".into()));
            }
            let quad = flags.quad.unwrap_or(DEFAULT_QUAD);
            params.insert("quad".into(), quad.to_string());
            pick(tcos_roots(n, quad)?)
        }
        _ => {
            // hilbert, hilbert-flipped
            if n < 5 {
                return Err(Failure::Usage("hilbert roots need --n >= 5".into()));
            }
            let basis = lebedev_basis(n, &lebedev_default_mesh(), LEBEDEV_INNER_NODES)?;
            let flip = (name == "hilbert-flipped").then_some(HILBERT_FLIP);
            if let Some(t) = flip {
                params.insert("sign_flip_above".into(), t.to_string());
            }
            RootCase {
                name: name.into(),
                root: hilbert_root(&basis, flip),
                target: hilbert_matrix(n)?,
                window: 4,
            }
        }
    };
    params.insert("window".into(), case.window.to_string());
    Ok(BuiltRoot {
        case,
        params,
        extra,
    })
}

#[derive(Serialize)]
struct Sidecar<'a> {
    name: &'a str,
    params: &'a BTreeMap<String, String>,
    constraint_residuals: BTreeMap<String, f64>,
}

fn square_report(built: &BuiltRoot, tol: f64) -> Result<VerifyReport> {
    let c = &built.case;
    let mut r = square_residual_report(&c.name, &c.root, &c.target, Window::new(c.window), tol)?;
    for (k, v) in &built.params {
        r.params.insert(k.clone(), v.clone());
    }
    for (k, v) in &built.extra {
        r.info(k.clone(), *v);
    }
    Ok(r)
}

fn run_root(name: &str, flags: &Flags) -> Outcome {
    let built = build_root(name, flags)?;
    let report = square_report(&built, f64::INFINITY)?;
    let mut residuals: BTreeMap<String, f64> = built.extra.clone();
    for key in ["square_residual", "commutator_residual"] {
        residuals.insert(key.into(), report.metric(key).unwrap_or(f64::NAN));
    }
    emit(flags.output.as_deref(), built.case.root.to_csv().as_bytes())?;
    let sidecar = Sidecar {
        name,
        params: &built.params,
        constraint_residuals: residuals,
    };
    let json = serde_json::to_string_pretty(&sidecar).expect("sidecar holds plain data") + "\n";
    match flags.output.as_deref() {
        Some(p) => emit(Some(&sidecar_path(p)), json.as_bytes())?,
        None => eprint!("{json}"),
    }
    Ok(())
}

/// Tolerance for `verify <root>`, matching the acceptance bounds. The
/// compressed-shift root is only known to converge, with no rate, so its
/// square residual is reported without a bound.
fn root_tolerance(name: &str) -> f64 {
    match name {
        "cesaro-closed" | "cesaro-factored" | "cesaro-mixed" => 1e-8,
        "s2-identity-unitary" | "s2-swap-sqrt" | "s2-shift" => 1e-10,
        "compressed-shift" => f64::INFINITY,
        "cesaro-series" | "volterra-abel" => 3e-2,
        "tcos" | "tcos-flipped" => 1e-2,
        _ => 5e-3,
    }
}

fn verify_claim(claim_id: &str, flags: &Flags) -> std::result::Result<VerifyReport, Failure> {
    if root_flags(claim_id).is_some() {
        let built = build_root(claim_id, flags)?;
        return Ok(square_report(&built, root_tolerance(claim_id))?);
    }
    let sizes = |default: &[usize]| {
        if flags.sizes.is_empty() {
            default.to_vec()
        } else {
            flags.sizes.clone()
        }
    };
    Ok(match claim_id {
        "cesaro-eigen" => {
            allow(claim_id, flags, &["n", "w"])?;
            let w = flags.w.unwrap_or(0.5);
            if !(w > 0.0 && w.is_finite()) {
                return Err(Failure::Usage("--w must be positive".into()));
            }
            cesaro_eigencheck(Complex64::new(w, 0.0), flags.n())?
        }
        "cesaro-square" => {
            allow(claim_id, flags, &["n", "sign"])?;
            cesaro_square_report(flags.n(), flags.sign())?
        }
        "cesaro-growth" => {
            allow(claim_id, flags, &["sizes"])?;
            unbounded_growth_demo(&sizes(&[64, 128, 256, 512]))?
        }
        "sweep-volterra-abel" => {
            allow(claim_id, flags, &["sizes"])?;
            convergence_sweep("volterra-abel", &sizes(&suite::VOLTERRA_SIZES))?
        }
        "sweep-cesaro-series" => {
            allow(claim_id, flags, &["sizes"])?;
            convergence_sweep("cesaro-series", &sizes(&[10, 100, 1000, 10_000]))?
        }
        "sweep-compressed-shift" => {
            allow(claim_id, flags, &["sizes"])?;
            convergence_sweep("compressed-shift", &sizes(&suite::COMPRESSED_TERMS))?
        }
        "boundary-fig1" | "boundary-fig2" => {
            allow(claim_id, flags, &["points"])?;
            let fig = FigureId::parse(&claim_id["boundary-".len()..])?;
            boundary_report(fig, flags.points.unwrap_or(DEFAULT_BOUNDARY_POINTS))?
        }
        "disc-fig1" | "disc-fig2" => {
            allow(claim_id, flags, &["radial", "angular"])?;
            let fig = FigureId::parse(&claim_id["disc-".len()..])?;
            disc_report(
                fig,
                flags.radial.unwrap_or(DEFAULT_RADIAL),
                flags.angular.unwrap_or(DEFAULT_ANGULAR),
            )?
        }
        "toeplitz-double-zero" => {
            allow(claim_id, flags, &[])?;
            let one = Complex64::new(1.0, 0.0);
            let u = PowerSeries::monomial(2, one, 2);
            let h = [
                PowerSeries::constant(one, 0),
                PowerSeries::monomial(1, one, 1),
                PowerSeries::new(vec![
                    one,
                    Complex64::new(0.0, 0.0),
                    Complex64::new(-0.5, 0.0),
                    Complex64::new(0.0, 2.0),
                ])?,
            ];
            no_root_double_zero_check(&u, &h)?
        }
        other => return Err(Failure::Usage(format!("unknown claim id `{other}`"))),
    })
}

fn run_verify(claim_id: &str, flags: &Flags) -> Outcome {
    let report = verify_claim(claim_id, flags)?;
    emit(
        flags.output.as_deref(),
        (report.to_json() + "\n").as_bytes(),
    )?;
    if report.pass {
        Ok(())
    } else {
        for m in report.failed_metrics() {
            eprintln!("failed: {} = {:e} (bound {:?})", m.name, m.value, m.bound);
        }
        Err(Failure::Verify)
    }
}

fn run_figure(name: &str, flags: &Flags) -> Outcome {
    allow("figure", flags, &["radial", "angular"])?;
    let fig =
        FigureId::parse(name).map_err(|_| Failure::Usage(format!("unknown figure `{name}`")))?;
    let (radial, angular) = (
        flags.radial.unwrap_or(DEFAULT_RADIAL),
        flags.angular.unwrap_or(DEFAULT_ANGULAR),
    );
    positive("radial", radial)?;
    positive("angular", angular)?;
    let points = crate::verify::disc_image_points(fig, radial, angular)?;
    let mut out = String::with_capacity(points.len() * 48);
    for p in points {
        out.push_str(&format!("{:.17e},{:.17e}\n", p.re, p.im));
    }
    emit(flags.output.as_deref(), out.as_bytes())?;
    Ok(())
}

fn run_suite(only: &[usize], output: Option<&Path>) -> Outcome {
    let ids: Vec<usize> = if only.is_empty() {
        suite::CRITERIA.iter().map(|(id, _)| *id).collect()
    } else {
        only.to_vec()
    };
    if let Some(bad) = ids
        .iter()
        .find(|id| !suite::CRITERIA.iter().any(|(k, _)| k == *id))
    {
        return Err(Failure::Usage(format!("no criterion {bad}")));
    }
    let mut outcomes = Vec::new();
    for id in ids {
        let outcome = suite::run_criterion(id)?;
        println!("{}", outcome.summary_line());
        for c in outcome.failures() {
            println!("    {}: {}", c.name, c.detail);
        }
        outcomes.push(outcome);
    }
    let passed = outcomes.iter().filter(|o| o.pass()).count();
    println!("{passed}/{} criteria passed", outcomes.len());
    if let Some(p) = output {
        let json =
            serde_json::to_string_pretty(&outcomes).expect("outcomes hold plain data") + "\n";
        emit(Some(p), json.as_bytes())?;
    }
    if passed == outcomes.len() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var("OPROOT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("OPROOT_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("oproot: {msg}");
        return 2;
    }
    let result = match &cli.command {
        Command::Build { name, flags } => build_operator(name, flags)
            .and_then(|m| Ok(emit(flags.output.as_deref(), m.to_csv().as_bytes())?)),
        Command::Root { name, flags } => run_root(name, flags),
        Command::Verify { claim_id, flags } => run_verify(claim_id, flags),
        Command::Figure { name, flags } => run_figure(name, flags),
        Command::Suite { only, output } => run_suite(only, output.as_deref()),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("oproot: {msg}");
            2
        }
        Err(Failure::Run(e)) => {
            eprintln!("oproot: {e}");
            1
        }
        Err(Failure::Verify) => 1,
    }
}
