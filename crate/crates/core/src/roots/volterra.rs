use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrixcore::{matrix_polynomial, op_norm_est, ComplexMatrix, NORM_ITERS, NORM_TOL};
use crate::series::{binomial_series, series_mul, series_sqrt, theta_coeffs, PowerSeries};

/// Product-integration matrix of `(Yf)(x) = π^{-1/2} ∫₀ˣ f(t)(x - t)^{-1/2} dt`
/// on the midpoint grid, `f` piecewise constant on cells.
///
/// The matrix is lower-triangular Toeplitz: the cell `j` contributes
/// `(2/√π)(√(x_i - t_j) - √(x_i - t_{j+1}))`, clipped at `x_i` on the
/// diagonal cell.
pub fn volterra_abel_root(m: usize) -> Result<ComplexMatrix> {
    if m < 2 {
        return Err(Error::Precondition(
            "volterra_abel_root needs m >= 2".into(),
        ));
    }
    let h = 1.0 / m as f64;
    let scale = 2.0 / PI.sqrt();
    let band: Vec<f64> = (0..m)
        .map(|d| {
            if d == 0 {
                scale * (0.5 * h).sqrt()
            } else {
                let hi = (d as f64 + 0.5) * h;
                let lo = (d as f64 - 0.5) * h;
                // √hi - √lo without cancellation
                scale * h / (hi.sqrt() + lo.sqrt())
            }
        })
        .collect();
    Ok(ComplexMatrix::from_real_fn(m, m, |i, j| {
        if i >= j {
            band[i - j]
        } else {
            0.0
        }
    }))
}

/// `f = z + Θ(z)(1 - z)^{1/5}` through degree `k`.
pub fn compressed_shift_symbol(k: usize) -> PowerSeries {
    let z = PowerSeries::monomial(1, Complex64::new(1.0, 0.0), k);
    z.add(&series_mul(&theta_coeffs(k), &binomial_series(0.2, k), k))
}

/// `√f(M)` for the Cayley transform `M` of the Volterra operator.
///
/// Uses the first `k` Taylor terms of `ψ = √f`; with `cesaro_avg` the
/// coefficient of `M^j` is weighted by `(k - j)/k`, which is the mean of the
/// partial sums `S_0, …, S_{k-1}`.
pub fn compressed_shift_root(
    m_cayley: &ComplexMatrix,
    k: usize,
    cesaro_avg: bool,
) -> Result<ComplexMatrix> {
    if k == 0 {
        return Err(Error::Precondition(
            "compressed_shift_root needs k >= 1".into(),
        ));
    }
    let norm = op_norm_est(m_cayley, NORM_ITERS, NORM_TOL);
    if norm > 1.05 {
        return Err(Error::Precondition(format!(
            "compressed_shift_root expects a contraction, estimated norm {norm}"
        )));
    }
    let psi = series_sqrt(&compressed_shift_symbol(k), k)?;
    let coeffs: Vec<Complex64> = (0..k)
        .map(|j| {
            let w = if cesaro_avg {
                (k - j) as f64 / k as f64
            } else {
                1.0
            };
            psi.coeff(j) * w
        })
        .collect();
    matrix_polynomial(&coeffs, m_cayley)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixcore::mat_product;
    use crate::operators::{cayley_volterra, volterra_matrix};

    #[test]
    fn abel_of_constant() {
        let m = 256;
        let y = volterra_abel_root(m).unwrap();
        let h = 1.0 / m as f64;
        let out = y.matvec(&vec![Complex64::new(1.0, 0.0); m]).unwrap();
        for (i, v) in out.iter().enumerate() {
            let x = (i as f64 + 0.5) * h;
            let exact = 2.0 / PI.sqrt() * x.sqrt();
            // cells are integrated exactly, so only the partial last cell differs
            assert!((v.re - exact).abs() <= 2.0 * h.sqrt(), "i={i}");
        }
    }

    #[test]
    fn abel_squared_on_constant_is_x() {
        let m = 512;
        let y = volterra_abel_root(m).unwrap();
        let y2 = mat_product(&y, &y).unwrap();
        let out = y2.matvec(&vec![Complex64::new(1.0, 0.0); m]).unwrap();
        let worst = out
            .iter()
            .enumerate()
            .map(|(i, v)| (v.re - (i as f64 + 0.5) / m as f64).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-2, "worst={worst}");
    }

    #[test]
    fn psi_constant_term() {
        let psi = series_sqrt(&compressed_shift_symbol(16), 16).unwrap();
        assert!((psi.coeff(0).re - (-0.5f64).exp()).abs() < 1e-15);
        assert!(psi.coeff(0).im.abs() < 1e-15);
    }

    #[test]
    fn zero_operator_gives_scalar() {
        let r = compressed_shift_root(&ComplexMatrix::zeros(6, 6), 32, true).unwrap();
        let expected = ComplexMatrix::identity(6).scale(Complex64::new((-0.5f64).exp(), 0.0));
        assert!(r.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn rejects_non_contraction() {
        let big = ComplexMatrix::identity(4).scale(Complex64::new(2.0, 0.0));
        assert!(matches!(
            compressed_shift_root(&big, 8, true),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn averaged_root_is_closer_than_plain() {
        let m = cayley_volterra(&volterra_matrix(64).unwrap()).unwrap();
        let res = |r: &ComplexMatrix| {
            let r2 = mat_product(r, r).unwrap();
            op_norm_est(&r2.sub(&m).unwrap(), NORM_ITERS, NORM_TOL)
        };
        let avg = res(&compressed_shift_root(&m, 256, true).unwrap());
        assert!(avg < 0.5, "avg={avg}");
    }
}
