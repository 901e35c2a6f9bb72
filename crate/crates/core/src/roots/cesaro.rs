use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrixcore::{binomial_f64, pascal_rows, ComplexMatrix};
use crate::quadrature::composite;

/// Signs `σ(k) ∈ {+1, -1}` for `k ≥ 1`, choosing the sign of the `k`-th
/// diagonal entry `σ(k)/√k` of the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    default: i8,
    overrides: BTreeMap<usize, i8>,
}

fn check_sign(s: i8) -> Result<i8> {
    match s {
        1 | -1 => Ok(s),
        _ => Err(Error::Precondition(format!(
            "sign must be +1 or -1, got {s}"
        ))),
    }
}

impl SignPattern {
    pub fn constant(sign: i8) -> Result<Self> {
        Ok(Self {
            default: check_sign(sign)?,
            overrides: BTreeMap::new(),
        })
    }

    /// `σ(1) = -1`, `σ(k) = +1` otherwise.
    pub fn first_negative() -> Self {
        Self {
            default: 1,
            overrides: BTreeMap::from([(1, -1)]),
        }
    }

    pub fn with(mut self, k: usize, sign: i8) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition(
                "sign patterns are indexed from 1".into(),
            ));
        }
        self.overrides.insert(k, check_sign(sign)?);
        Ok(self)
    }

    pub fn sigma(&self, k: usize) -> i8 {
        self.overrides.get(&k).copied().unwrap_or(self.default)
    }
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; n + 1];
    for k in 1..=n {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

/// Lower-triangular root of the `N×N` Cesàro matrix with diagonal
/// `sign/√(i+1)`.
///
/// The entries `C(i,j) Σ_ℓ (-1)^ℓ C(i-j,ℓ)/√(ℓ+j+1)` are evaluated through
/// `1/√m = (2/√π) ∫₀^∞ e^{-m t²} dt`, which sums the binomial in closed form:
/// `A_ij = C(i,j) (2/√π) ∫₀^∞ e^{-(j+1)t²} (1 - e^{-t²})^{i-j} dt`.
/// The integrand is positive and smooth; it is integrated in log space so
/// that large binomials meet small integrals without overflow, and the
/// cutoff in `t` accounts for the size of the binomial.
pub fn cesaro_root_closed(n: usize, global_sign: i8) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::Precondition(
            "cesaro_root_closed needs N >= 1".into(),
        ));
    }
    let sign = check_sign(global_sign)? as f64;
    let lf = ln_factorials(n);
    let columns: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let a = (j + 1) as f64;
            // the integrand is below e^{-45} once (j+1)t² exceeds 45 plus the
            // largest log-binomial of the column
            let t_max = ((45.0 + lf[n - 1] - lf[j] - lf[n - 1 - j]) / a).sqrt();
            let (t, w) = composite(0.0, t_max, 48, 16);
            let base: Vec<(f64, f64)> = t
                .iter()
                .zip(&w)
                .map(|(&t, &w)| (w.ln() - a * t * t, (-(-t * t).exp_m1()).ln()))
                .collect();
            (j..n)
                .map(|i| {
                    let m = (i - j) as f64;
                    let ln_binom = lf[i] - lf[j] - lf[i - j];
                    let s: f64 = base
                        .iter()
                        .map(|&(lw, lg)| (ln_binom + lw + m * lg).exp())
                        .sum();
                    sign * 2.0 / PI.sqrt() * s
                })
                .collect()
        })
        .collect();
    Ok(ComplexMatrix::from_real_fn(n, n, |i, j| {
        if i >= j {
            columns[j][i - j]
        } else {
            0.0
        }
    }))
}

/// `C(i,j) Σ_ℓ (-1)^ℓ C(i-j,ℓ)/√(ℓ+j+1)` summed directly in floating point.
/// The alternating terms grow like `2^{i-j}`, so this is only usable for
/// small `i - j` (about 20 for nine correct digits).
pub fn cesaro_entry_alternating(i: usize, j: usize) -> f64 {
    if i < j {
        return 0.0;
    }
    let m = i - j;
    let mut binom = 1.0f64;
    let mut sum = 0.0f64;
    for l in 0..=m {
        let s = if l % 2 == 0 { 1.0 } else { -1.0 };
        sum += s * binom / ((l + j + 1) as f64).sqrt();
        binom = binom * (m - l) as f64 / (l + 1) as f64;
    }
    sum * binomial_f64(i, j)
}

/// Taylor coefficients of `√(1 - z)` through degree `k`.
pub fn sqrt_one_minus_z_coeffs(k: usize) -> Vec<f64> {
    let mut c = vec![1.0f64; k + 1];
    for m in 0..k {
        c[m + 1] = c[m] * (m as f64 - 0.5) / (m as f64 + 1.0);
    }
    c
}

/// `Σ_{k < terms} c_k (I - C_N)^k` with `c_k` the coefficients of `√(1 - z)`.
pub fn cesaro_root_series(n: usize, terms: usize) -> Result<ComplexMatrix> {
    if n == 0 || terms == 0 {
        return Err(Error::Precondition(
            "cesaro_root_series needs N >= 1 and terms >= 1".into(),
        ));
    }
    let coeffs = sqrt_one_minus_z_coeffs(terms - 1);
    // I - C, dense lower triangular, real
    let d: Vec<f64> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let c = if j <= i { 1.0 / (i + 1) as f64 } else { 0.0 };
            (if i == j { 1.0 } else { 0.0 }) - c
        })
        .collect();
    let mut power: Vec<f64> = (0..n * n)
        .map(|idx| if idx / n == idx % n { 1.0 } else { 0.0 })
        .collect();
    let mut sum = vec![0.0f64; n * n];
    let mut next = vec![0.0f64; n * n];
    for (k, &c) in coeffs.iter().enumerate() {
        if k > 0 {
            for i in 0..n {
                for j in 0..=i {
                    let mut acc = 0.0;
                    for l in j..=i {
                        acc += power[i * n + l] * d[l * n + j];
                    }
                    next[i * n + j] = acc;
                }
            }
            std::mem::swap(&mut power, &mut next);
        }
        for (s, p) in sum.iter_mut().zip(&power) {
            *s += c * p;
        }
    }
    Ok(ComplexMatrix::from_real_fn(n, n, |i, j| sum[i * n + j]))
}

fn fixed_to_f64(x: &BigInt, frac_bits: u64) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let shift = x.bits().saturating_sub(64);
    let top = (x >> shift).to_f64().unwrap_or(0.0);
    top * 2f64.powi(shift as i32 - frac_bits as i32)
}

/// First `cols` columns of `B · diag(σ(k+1)/√(k+1)) · B` with `B` the
/// binomial involution, in exact fixed-point arithmetic.
///
/// The alternating binomial sums cancel up to `log₂3` bits per row index,
/// so the diagonal is stored with `⌈N log₂3⌉ + 64` fractional bits and only
/// the final sums are rounded.
pub fn cesaro_root_factored_columns(
    n: usize,
    sigma: &SignPattern,
    cols: usize,
) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::Precondition(
            "cesaro_root_factored needs N >= 1".into(),
        ));
    }
    let cols = cols.min(n);
    let frac_bits = (n as f64 * 3f64.log2()).ceil() as u64 + 64;
    let one_sq = BigUint::from(1u8) << (2 * frac_bits);
    let diag: Vec<BigInt> = (0..n)
        .map(|k| {
            let root = (&one_sq / BigUint::from(k + 1)).sqrt();
            let sign = if sigma.sigma(k + 1) < 0 {
                Sign::Minus
            } else {
                Sign::Plus
            };
            BigInt::from_biguint(sign, root)
        })
        .collect();
    let pascal = pascal_rows(n);
    Ok((0..cols)
        .into_par_iter()
        .map(|j| {
            // y_k = (-1)^j C(k,j) D_k
            let y: Vec<BigInt> = (j..n)
                .map(|k| {
                    let v = &diag[k] * BigInt::from(pascal[k][j].clone());
                    if j % 2 == 1 {
                        -v
                    } else {
                        v
                    }
                })
                .collect();
            (0..n)
                .map(|i| {
                    if i < j {
                        return 0.0;
                    }
                    let mut acc = BigInt::zero();
                    for k in j..=i {
                        let term = &y[k - j] * BigInt::from(pascal[i][k].clone());
                        if k % 2 == 1 {
                            acc -= term;
                        } else {
                            acc += term;
                        }
                    }
                    fixed_to_f64(&acc, frac_bits)
                })
                .collect()
        })
        .collect())
}

/// `B · diag(σ(k+1)/√(k+1)) · B`: every lower-triangular square root of the
/// `N×N` Cesàro matrix.
pub fn cesaro_root_factored(n: usize, sigma: &SignPattern) -> Result<ComplexMatrix> {
    let cols = cesaro_root_factored_columns(n, sigma, n)?;
    Ok(ComplexMatrix::from_real_fn(n, n, |i, j| cols[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixcore::mat_product;
    use crate::operators::cesaro_matrix;

    fn naive(i: usize, j: usize) -> f64 {
        (0..=i - j)
            .map(|l| {
                let s = if l % 2 == 0 { 1.0 } else { -1.0 };
                s * binomial_f64(i - j, l) / ((l + j + 1) as f64).sqrt()
            })
            .sum::<f64>()
            * binomial_f64(i, j)
    }

    #[test]
    fn closed_form_entries() {
        let a = cesaro_root_closed(40, 1).unwrap();
        assert!((a.get(1, 0).re - (1.0 - 0.5f64.sqrt())).abs() < 1e-14);
        for i in 0..40 {
            assert!((a.get(i, i).re - 1.0 / ((i + 1) as f64).sqrt()).abs() < 1e-13);
            for j in (i + 1)..40 {
                assert_eq!(a.get(i, j).re, 0.0);
            }
        }
        for i in 0..24 {
            for j in 0..=i {
                if i - j <= 20 {
                    assert!((a.get(i, j).re - naive(i, j)).abs() < 1e-7, "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn closed_form_squares_to_cesaro() {
        let n = 64;
        let c = cesaro_matrix(n).unwrap();
        for s in [1, -1] {
            let a = cesaro_root_closed(n, s).unwrap();
            assert!(mat_product(&a, &a).unwrap().max_abs_diff(&c).unwrap() < 1e-10);
        }
        assert!(cesaro_root_closed(4, 0).is_err());
    }

    #[test]
    fn factored_matches_closed_and_squares() {
        let n = 24;
        let plus = cesaro_root_factored(n, &SignPattern::constant(1).unwrap()).unwrap();
        let closed = cesaro_root_closed(n, 1).unwrap();
        assert!(plus.max_abs_diff(&closed).unwrap() < 1e-12);
        let minus = cesaro_root_factored(n, &SignPattern::constant(-1).unwrap()).unwrap();
        assert_eq!(minus, plus.scale(num_complex::Complex64::new(-1.0, 0.0)));
        let c = cesaro_matrix(n).unwrap();
        let mixed = SignPattern::first_negative().with(5, -1).unwrap();
        let t = cesaro_root_factored(n, &mixed).unwrap();
        assert!(mat_product(&t, &t).unwrap().max_abs_diff(&c).unwrap() < 1e-10);
        assert!((t.get(4, 4).re + 1.0 / 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn series_root_converges_to_closed_form() {
        let n = 16;
        let closed = cesaro_root_closed(n, 1).unwrap();
        assert_eq!(
            cesaro_root_series(n, 1).unwrap(),
            ComplexMatrix::identity(n)
        );
        let mut prev = f64::INFINITY;
        for terms in [100, 1000, 10_000] {
            let d = cesaro_root_series(n, terms)
                .unwrap()
                .max_abs_diff(&closed)
                .unwrap();
            assert!(d <= 2.0 / (terms as f64).sqrt(), "terms={terms} d={d}");
            // geometric once the spectrum of I - C_N is resolved
            assert!(d <= prev);
            prev = d;
        }
    }

    #[test]
    fn sqrt_coefficients() {
        let c = sqrt_one_minus_z_coeffs(4);
        let expected = [1.0, -0.5, -0.125, -0.0625, -5.0 / 128.0];
        for (a, b) in c.iter().zip(expected) {
            assert!((a - b).abs() < 1e-16);
        }
    }

    #[test]
    fn mixed_sign_first_column_grows() {
        let col = &cesaro_root_factored_columns(64, &SignPattern::first_negative(), 1).unwrap()[0];
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(norm > 8.0, "norm={norm}");
    }
}
