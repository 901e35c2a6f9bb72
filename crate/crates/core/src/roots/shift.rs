use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrixcore::ComplexMatrix;
use crate::series::{series_mul, series_sqrt, PowerSeries};

const UNITARY_TOL: f64 = 1e-10;
const CONSTRAINT_TOL: f64 = 1e-8;

/// Parameters `(a, b, c, U)` of a square root of `S²`: bounded analytic
/// `a, b, c` with `z a² + b c = 1` and a constant 2×2 unitary `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftRootParams {
    pub a: PowerSeries,
    pub b: PowerSeries,
    pub c: PowerSeries,
    pub u: [[Complex64; 2]; 2],
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl ShiftRootParams {
    pub const IDENTITY: [[Complex64; 2]; 2] = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    pub const SWAP: [[Complex64; 2]; 2] = [
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    ];

    pub fn new(a: PowerSeries, b: PowerSeries, c: PowerSeries, u: [[Complex64; 2]; 2]) -> Self {
        Self { a, b, c, u }
    }

    /// `a = 0, b = c = 1, U = I`: the permutation-like root with entries
    /// above the diagonal.
    pub fn identity_unitary_example() -> Self {
        let k = 0;
        Self::new(
            PowerSeries::zero(k),
            PowerSeries::constant(one(), k),
            PowerSeries::constant(one(), k),
            Self::IDENTITY,
        )
    }

    /// `a = 1, b = c = √(1 - z), U = swap`, with the square root carried to
    /// degree `order`.
    pub fn swap_sqrt_example(order: usize) -> Result<Self> {
        let root = series_sqrt(&PowerSeries::from_real(&[1.0, -1.0])?, order)?;
        Ok(Self::new(
            PowerSeries::constant(one(), order),
            root.clone(),
            root,
            Self::SWAP,
        ))
    }

    /// `a = 0, b = c = 1, U = swap`: the shift itself.
    pub fn shift_example() -> Self {
        Self::new(
            PowerSeries::zero(0),
            PowerSeries::constant(one(), 0),
            PowerSeries::constant(one(), 0),
            Self::SWAP,
        )
    }

    /// For an analytic self-map `a` of the disc, `b = c = √(1 - z a²)`.
    pub fn from_self_map(a: PowerSeries, u: [[Complex64; 2]; 2], order: usize) -> Result<Self> {
        let z = PowerSeries::monomial(1, one(), order);
        let za2 = series_mul(&z, &series_mul(&a, &a, order), order);
        let root = series_sqrt(&PowerSeries::constant(one(), order).sub(&za2), order)?;
        Ok(Self::new(a.truncate(order), root.clone(), root, u))
    }

    /// `max_k |[z a² + b c - 1]_k|` over degrees `0..=degree`.
    pub fn constraint_residual(&self, degree: usize) -> f64 {
        let z = PowerSeries::monomial(1, one(), degree);
        let za2 = series_mul(&z, &series_mul(&self.a, &self.a, degree), degree);
        let bc = series_mul(&self.b, &self.c, degree);
        za2.add(&bc)
            .sub(&PowerSeries::constant(one(), degree))
            .max_abs_through(degree)
    }

    /// `max |UᴴU - I|` entrywise.
    pub fn unitarity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Complex64::zero();
                for k in 0..2 {
                    s += self.u[k][i].conj() * self.u[k][j];
                }
                let target = if i == j { one() } else { Complex64::zero() };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    /// Largest coefficient index in use among `a, b, c` (the band width
    /// parameter of the finite section).
    pub fn max_degree(&self) -> usize {
        [&self.a, &self.b, &self.c]
            .iter()
            .map(|s| s.degree().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// The 2×2 matrix of symbols `U*[za, b; zc, -za]U`.
    pub fn block_symbols(&self, order: usize) -> [[PowerSeries; 2]; 2] {
        let z = PowerSeries::monomial(1, one(), order);
        let za = series_mul(&z, &self.a, order);
        let zc = series_mul(&z, &self.c, order);
        let inner = [
            [za.clone(), self.b.truncate(order)],
            [zc, za.scale(Complex64::new(-1.0, 0.0))],
        ];
        let u = self.u;
        let entry = |p: usize, q: usize| {
            let mut acc = PowerSeries::zero(order);
            for (r, row) in inner.iter().enumerate() {
                for (s, m) in row.iter().enumerate() {
                    let w = u[r][p].conj() * u[s][q];
                    if w != Complex64::zero() {
                        acc = acc.add(&m.scale(w));
                    }
                }
            }
            acc
        };
        [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
    }
}

/// `N×N` section of the square root of `S²` determined by `p`.
///
/// Block `(p, q)` of the symbol acts from the `q`-th to the `p`-th copy of
/// `H²`; basis vector `z^k` of copy `p` is `z^{2k+p}` in `H²`.
pub fn shift2_root(p: &ShiftRootParams, n: usize) -> Result<ComplexMatrix> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::Precondition(format!(
            "shift2_root needs an even size, got {n}"
        )));
    }
    let unitarity = p.unitarity_residual();
    if unitarity > UNITARY_TOL {
        return Err(Error::InvalidShiftParams(format!(
            "U is not unitary (residual {unitarity:e})"
        )));
    }
    let half = n / 2;
    let working = half - 1;
    let constraint = p.constraint_residual(working);
    if constraint > CONSTRAINT_TOL {
        return Err(Error::InvalidShiftParams(format!(
            "z a² + b c - 1 has coefficient of size {constraint:e}"
        )));
    }
    let symbols = p.block_symbols(working);
    Ok(ComplexMatrix::from_fn(n, n, |row, col| {
        let (bp, i) = (row % 2, row / 2);
        let (bq, j) = (col % 2, col / 2);
        if i >= j {
            symbols[bp][bq].coeff(i - j)
        } else {
            Complex64::zero()
        }
    }))
}
