//! Truncated power series over the complex numbers.
//!
//! Every bounded analytic symbol used by the root constructions (the
//! parameters of the `S²` roots, Toeplitz symbols, the atomic inner function,
//! binomial powers of `1 - z`) is carried as a [`PowerSeries`] of declared
//! truncation order.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrixcore::ComplexMatrix;

/// Default threshold separating genuine zero coefficients from rounding.
pub const ZERO_TOL: f64 = 1e-9;

/// Taylor coefficients `c_0 .. c_K` of a function analytic at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition(
                "a power series needs at least one coefficient".into(),
            ));
        }
        if let Some(k) = coeffs
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::zero(); order + 1],
        }
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c · z^k` at truncation order `order` (zero if `k > order`).
    pub fn monomial(k: usize, c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Monic polynomial with the given zeros times `lead`.
    pub fn from_roots(lead: Complex64, zeros: &[Complex64]) -> Self {
        let mut coeffs = vec![lead];
        for &z0 in zeros {
            // multiply by (z - z0)
            let mut next = vec![Complex64::zero(); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * z0;
            }
            coeffs = next;
        }
        Self { coeffs }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero past the truncation order.
    #[inline]
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(Complex64::zero)
    }

    /// Same function at a different truncation order (padding with zeros).
    pub fn truncate(&self, order: usize) -> Self {
        Self {
            coeffs: (0..=order).map(|k| self.coeff(k)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().max(other.order());
        Self {
            coeffs: (0..=order)
                .map(|k| self.coeff(k) + other.coeff(k))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Multiplication by `z^k`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        Self {
            coeffs: (0..=self.order())
                .map(|n| {
                    if n >= k {
                        self.coeff(n - k)
                    } else {
                        Complex64::zero()
                    }
                })
                .collect(),
        }
    }

    /// Largest coefficient modulus among degrees `0..=upto`.
    pub fn max_abs_through(&self, upto: usize) -> f64 {
        (0..=upto).map(|k| self.coeff(k).norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    /// Index of the highest nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != Complex64::zero())
    }
}

/// Cauchy product truncated at degree `k`.
pub fn series_mul(f: &PowerSeries, g: &PowerSeries, k: usize) -> PowerSeries {
    let fd = f.order().min(k);
    let gd = g.order().min(k);
    let mut out = vec![Complex64::zero(); k + 1];
    for i in 0..=fd {
        let fi = f.coeffs[i];
        if fi == Complex64::zero() {
            continue;
        }
        for j in 0..=gd.min(k - i) {
            out[i + j] += fi * g.coeffs[j];
        }
    }
    PowerSeries { coeffs: out }
}

/// `f / g` truncated at degree `k`, by forward substitution on the
/// triangular Toeplitz system.
pub fn series_div(f: &PowerSeries, g: &PowerSeries, k: usize) -> Result<PowerSeries> {
    let g0 = g.coeff(0);
    if g0 == Complex64::zero() {
        return Err(Error::VanishingConstantTerm);
    }
    let mut q = vec![Complex64::zero(); k + 1];
    for n in 0..=k {
        let mut acc = f.coeff(n);
        for j in 1..=n.min(g.order()) {
            acc -= g.coeffs[j] * q[n - j];
        }
        q[n] = acc / g0;
    }
    PowerSeries::new(q)
}

/// Square root through degree `k` with the principal value at the origin.
///
/// Newton's iteration `g ← (g + f/g)/2` doubles the number of correct
/// coefficients per step; after reaching degree `k` two more full-length
/// steps polish the rounding.
pub fn series_sqrt(f: &PowerSeries, k: usize) -> Result<PowerSeries> {
    let f0 = f.coeff(0);
    if f0.norm() == 0.0 {
        return Err(Error::VanishingConstantTerm);
    }
    let half = Complex64::new(0.5, 0.0);
    let mut g = PowerSeries::constant(f0.sqrt(), 0);
    let mut precision = 0usize;
    let steps = ((k + 1) as f64).log2().ceil() as usize + 2;
    for _ in 0..steps {
        precision = (2 * precision + 1).min(k);
        let g_ext = g.truncate(precision);
        let quotient = series_div(&f.truncate(precision), &g_ext, precision)?;
        g = g_ext.add(&quotient).scale(half);
    }
    Ok(g.truncate(k))
}

/// Taylor coefficients of the atomic inner function `exp((z+1)/(z-1))`.
///
/// `Θ' = g'Θ` with `g'(z) = -2/(z-1)²`, i.e. `(z-1)²Θ' = -2Θ`, gives the
/// three-term recurrence
/// `(n+1)c_{n+1} = 2(n-1)c_n - (n-1)c_{n-1}`, `c_0 = e⁻¹`, `c_1 = -2e⁻¹`.
pub fn theta_coeffs(k: usize) -> PowerSeries {
    let mut c = vec![0.0f64; k + 1];
    c[0] = (-1.0f64).exp();
    if k >= 1 {
        c[1] = -2.0 * c[0];
    }
    for n in 1..k {
        let nf = n as f64;
        c[n + 1] = (2.0 * (nf - 1.0) * c[n] - (nf - 1.0) * c[n - 1]) / (nf + 1.0);
    }
    PowerSeries {
        coeffs: c.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
    }
}

/// Coefficients of `(1 - z)^alpha` on the principal branch.
pub fn binomial_series(alpha: f64, k: usize) -> PowerSeries {
    binomial_series_complex(Complex64::new(alpha, 0.0), k)
}

pub fn binomial_series_complex(alpha: Complex64, k: usize) -> PowerSeries {
    let mut c = vec![Complex64::zero(); k + 1];
    c[0] = Complex64::new(1.0, 0.0);
    for n in 0..k {
        c[n + 1] = c[n] * (Complex64::new(n as f64, 0.0) - alpha) / (n as f64 + 1.0);
    }
    PowerSeries { coeffs: c }
}

/// Splits `g` into its even-indexed and odd-indexed parts.
pub fn even_odd_split(g: &PowerSeries) -> (PowerSeries, PowerSeries) {
    let pick = |parity: usize| PowerSeries {
        coeffs: g
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                if k % 2 == parity {
                    c
                } else {
                    Complex64::zero()
                }
            })
            .collect(),
    };
    (pick(0), pick(1))
}

/// Lower-triangular Toeplitz matrix of multiplication by `f` on the first
/// `n` monomials.
pub fn analytic_multiplier_matrix(f: &PowerSeries, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i >= j {
            f.coeff(i - j)
        } else {
            Complex64::zero()
        }
    })
}

/// Smallest `n` with `|c_n| > tol`, or `order + 1` when every coefficient
/// is below the threshold.
pub fn order_of_zero(f: &PowerSeries, tol: f64) -> usize {
    f.coeffs
        .iter()
        .position(|c| c.norm() > tol)
        .unwrap_or(f.order() + 1)
}

/// Evaluates the truncated series at points of the open unit disc.
pub fn eval_disc_grid(f: &PowerSeries, points: &[Complex64]) -> Result<Vec<Complex64>> {
    if let Some(p) = points.iter().find(|p| p.norm() >= 1.0) {
        return Err(Error::OutsideDisc { re: p.re, im: p.im });
    }
    Ok(points.iter().map(|&z| f.eval(z)).collect())
}
