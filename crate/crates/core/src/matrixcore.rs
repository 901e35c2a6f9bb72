//! Dense complex matrices and the handful of operations the root
//! constructions need: products, spectral-norm estimates, leading-block
//! residuals and the signed binomial involution.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Iteration cap and relative tolerance used for every residual norm.
pub const NORM_ITERS: usize = 200;
pub const NORM_TOL: f64 = 1e-8;

/// Dense complex matrix, row-major, immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "ComplexMatrix::new",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                1.0.into()
            } else {
                Complex64::zero()
            }
        })
    }

    /// Builds a matrix entrywise. Panics if `f` yields a non-finite value,
    /// which always indicates a bug in the caller's formula.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64 + Sync) -> Self {
        let data: Vec<Complex64> = (0..rows * cols)
            .into_par_iter()
            .map(|idx| f(idx / cols, idx % cols))
            .collect();
        Self::new(rows, cols, data).expect("entrywise constructor produced a non-finite entry")
    }

    pub fn from_real_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> Self {
        Self::from_fn(rows, cols, |i, j| Complex64::new(f(i, j), 0.0))
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        Self::from_fn(
            n,
            n,
            |i, j| if i == j { values[i] } else { Complex64::zero() },
        )
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "matvec",
                left: (self.rows, self.cols),
                right: (x.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Leading `size x size` block.
    pub fn leading(&self, size: usize) -> Result<Self> {
        if size > self.rows || size > self.cols {
            return Err(Error::WindowTooLarge {
                size,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(Self::from_fn(size, size, |i, j| self.get(i, j)))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| ((i + 1)..self.cols).all(|j| self.get(i, j) == Complex64::zero()))
    }

    /// CSV dump: one matrix row per line, entries `re+imi` with 17
    /// significant digits, no header.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.data.len() * 48);
        for i in 0..self.rows {
            for (j, z) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                write_complex(&mut out, *z);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut data = Vec::new();
        let mut rows = 0;
        let mut cols = None;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let entries: Vec<Complex64> = line
                .split(',')
                .map(|field| parse_complex(field.trim()))
                .collect::<Result<_>>()?;
            match cols {
                None => cols = Some(entries.len()),
                Some(c) if c != entries.len() => {
                    return Err(Error::DimensionMismatch {
                        op: "from_csv",
                        left: (rows, c),
                        right: (rows, entries.len()),
                    })
                }
                _ => {}
            }
            data.extend(entries);
            rows += 1;
        }
        Self::new(rows, cols.unwrap_or(0), data)
    }
}

fn write_complex(out: &mut String, z: Complex64) {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    let _ = write!(out, "{:.16e}{}{:.16e}i", z.re, sign, z.im.abs());
}

fn parse_complex(field: &str) -> Result<Complex64> {
    let bad = || Error::Io(format!("malformed complex entry `{field}`"));
    let body = field.strip_suffix('i').ok_or_else(bad)?;
    // split at the sign that separates the imaginary part: the last '+' or '-'
    // not directly following an exponent marker
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| {
            (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'e' && bytes[k - 1] != b'E'
        })
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im: f64 = body[split..].parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Plain row-by-row product; zero entries of `a` are skipped, which keeps
/// triangular and banded products cheap without changing the result.
pub fn mat_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "mat_product",
            left: (a.rows, a.cols),
            right: (b.rows, b.cols),
        });
    }
    let (n, m) = (a.rows, b.cols);
    let mut data = vec![Complex64::zero(); n * m];
    data.par_chunks_mut(m.max(1))
        .enumerate()
        .for_each(|(i, out)| {
            for (k, &aik) in a.row(i).iter().enumerate() {
                if aik == Complex64::zero() {
                    continue;
                }
                for (o, &bkj) in out.iter_mut().zip(b.row(k)) {
                    *o += aik * bkj;
                }
            }
        });
    Ok(ComplexMatrix {
        rows: n,
        cols: m,
        data,
    })
}

/// Largest singular value by power iteration on `AᴴA`.
///
/// The returned value is never below the largest column or row norm, both of
/// which are lower bounds for the spectral norm as well.
pub fn op_norm_est(a: &ComplexMatrix, iters: usize, tol: f64) -> f64 {
    if a.data.iter().all(|z| *z == Complex64::zero()) {
        return 0.0;
    }
    let col_bound = (0..a.cols)
        .map(|j| {
            (0..a.rows)
                .map(|i| a.get(i, j).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    let row_bound = (0..a.rows)
        .map(|i| a.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);

    let ah = a.conj_transpose();
    // deterministic start with no vanishing component
    let mut x: Vec<Complex64> = (0..a.cols)
        .map(|j| Complex64::new(1.0 + 0.5 * ((j as f64) * 0.754_877_666).sin(), 0.0))
        .collect();
    normalize(&mut x);
    let mut estimate = 0.0_f64;
    for _ in 0..iters.max(1) {
        let y = a.matvec(&x).expect("square by construction");
        let sigma = vec_norm(&y);
        if sigma == 0.0 {
            break;
        }
        let mut z = ah.matvec(&y).expect("conformable");
        let znorm = vec_norm(&z);
        if znorm == 0.0 {
            estimate = estimate.max(sigma);
            break;
        }
        for v in z.iter_mut() {
            *v /= znorm;
        }
        x = z;
        let converged = (sigma - estimate).abs() <= tol * sigma;
        estimate = estimate.max(sigma);
        if converged {
            break;
        }
    }
    estimate.max(col_bound).max(row_bound)
}

fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(x: &mut [Complex64]) {
    let n = vec_norm(x);
    if n > 0.0 {
        for v in x.iter_mut() {
            *v /= n;
        }
    }
}

/// Leading block compared by a [`window_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub size: usize,
}

impl Window {
    pub fn new(size: usize) -> Self {
        Self { size }
    }
}

/// Spectral-norm estimate of `A - B` restricted to the leading window.
pub fn window_residual(a: &ComplexMatrix, b: &ComplexMatrix, w: Window) -> Result<f64> {
    for m in [a, b] {
        if w.size > m.rows || w.size > m.cols {
            return Err(Error::WindowTooLarge {
                size: w.size,
                rows: m.rows,
                cols: m.cols,
            });
        }
    }
    let diff = ComplexMatrix::from_fn(w.size, w.size, |i, j| a.get(i, j) - b.get(i, j));
    Ok(op_norm_est(&diff, NORM_ITERS, NORM_TOL))
}

/// Exact binomial coefficient.
pub fn binomial_exact(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Rows `0..n` of Pascal's triangle in exact arithmetic.
pub fn pascal_rows(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![BigUint::from(1u32); i + 1];
        if i >= 2 {
            let prev = &rows[i - 1];
            for j in 1..i {
                row[j] = &prev[j - 1] + &prev[j];
            }
        }
        rows.push(row);
    }
    rows
}

pub fn binomial_f64(n: usize, k: usize) -> f64 {
    binomial_exact(n, k).to_f64().unwrap_or(f64::INFINITY)
}

/// Lower-triangular `B[i][j] = (-1)^j C(i, j)`; squares to the identity.
pub fn binomial_involution_matrix(n: usize) -> ComplexMatrix {
    let pascal = pascal_rows(n);
    let mut data = vec![Complex64::zero(); n * n];
    for (i, row) in pascal.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            let v = c.to_f64().expect("binomial exceeds f64 range");
            data[i * n + j] = Complex64::new(if j % 2 == 0 { v } else { -v }, 0.0);
        }
    }
    ComplexMatrix::new(n, n, data).expect("finite binomials")
}

/// `Σ_k coeffs[k] · M^k` by Paterson–Stockmeyer: about `2√K` matrix
/// products instead of `K`.
pub fn matrix_polynomial(coeffs: &[Complex64], m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            op: "matrix_polynomial",
            left: (m.rows, m.cols),
            right: (m.rows, m.cols),
        });
    }
    let n = m.rows;
    if coeffs.is_empty() {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let block = ((coeffs.len() as f64).sqrt().ceil() as usize).max(1);
    // powers M^0 .. M^block
    let mut powers = Vec::with_capacity(block + 1);
    powers.push(ComplexMatrix::identity(n));
    for k in 1..=block {
        let next = mat_product(&powers[k - 1], m)?;
        powers.push(next);
    }
    let chunk_value = |chunk: &[Complex64]| {
        let mut acc = ComplexMatrix::zeros(n, n);
        for (c, p) in chunk.iter().zip(&powers) {
            if *c != Complex64::zero() {
                for (a, b) in acc.data.iter_mut().zip(&p.data) {
                    *a += c * b;
                }
            }
        }
        acc
    };
    let chunks: Vec<&[Complex64]> = coeffs.chunks(block).collect();
    let mut result = chunk_value(chunks[chunks.len() - 1]);
    for chunk in chunks.iter().rev().skip(1) {
        result = mat_product(&result, &powers[block])?.add(&chunk_value(chunk))?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn shift(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_real_fn(n, n, |i, j| if i == j + 1 { 1.0 } else { 0.0 })
    }

    #[test]
    fn identity_product() {
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(mat_product(&i3, &i3).unwrap(), i3);
    }

    #[test]
    fn shift_squared_has_second_subdiagonal() {
        let s2 = mat_product(&shift(4), &shift(4)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j + 2 { 1.0 } else { 0.0 };
                assert_eq!(s2.get(i, j), c(expected));
            }
        }
    }

    #[test]
    fn triangular_product_diagonal_is_exact() {
        let n = 9;
        let a = ComplexMatrix::from_real_fn(n, n, |i, j| {
            if j <= i {
                1.0 / (1.0 + i as f64 + 2.0 * j as f64)
            } else {
                0.0
            }
        });
        let b = ComplexMatrix::from_real_fn(n, n, |i, j| {
            if j <= i {
                (i as f64 - j as f64).cos() + 0.1 * i as f64
            } else {
                0.0
            }
        });
        let p = mat_product(&a, &b).unwrap();
        assert!(p.is_lower_triangular());
        for i in 0..n {
            assert_eq!(p.get(i, i), a.get(i, i) * b.get(i, i));
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            mat_product(&a, &a),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn norm_of_zero_and_identity() {
        assert_eq!(op_norm_est(&ComplexMatrix::zeros(5, 5), 10, 1e-8), 0.0);
        assert!((op_norm_est(&ComplexMatrix::identity(7), 10, 1e-8) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn norm_of_known_rank_one() {
        // u vᴴ has norm |u||v|
        let a = ComplexMatrix::from_fn(4, 4, |i, j| {
            Complex64::new((i + 1) as f64, 0.0) * Complex64::new(0.0, (j + 1) as f64)
        });
        let expected = (30.0f64).sqrt() * (30.0f64).sqrt();
        assert!((op_norm_est(&a, 200, 1e-12) - expected).abs() < 1e-9);
    }

    #[test]
    fn window_residual_basics() {
        let i = ComplexMatrix::identity(4);
        let two = i.scale(c(2.0));
        assert_eq!(window_residual(&i, &i, Window::new(3)).unwrap(), 0.0);
        assert!((window_residual(&i, &two, Window::new(2)).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(
            window_residual(&i, &two, Window::new(5)),
            Err(Error::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn involution_display_rows() {
        let b = binomial_involution_matrix(3);
        let expected = [[1.0, 0.0, 0.0], [1.0, -1.0, 0.0], [1.0, -2.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b.get(i, j), c(expected[i][j]));
            }
        }
        let b = binomial_involution_matrix(20);
        assert!((0..20).all(|i| b.get(i, 0) == c(1.0)));
    }

    #[test]
    fn involution_squares_to_identity() {
        let b = binomial_involution_matrix(6);
        assert_eq!(mat_product(&b, &b).unwrap(), ComplexMatrix::identity(6));
        for n in [16, 32] {
            let b = binomial_involution_matrix(n);
            let sq = mat_product(&b, &b).unwrap();
            assert!(sq.max_abs_diff(&ComplexMatrix::identity(n)).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn binomials_past_the_mantissa() {
        assert_eq!(binomial_exact(64, 32).to_string(), "1832624140942590534");
        assert_eq!(binomial_exact(5, 7), BigUint::zero());
    }

    #[test]
    fn csv_format_has_17_digits() {
        let m = ComplexMatrix::new(
            1,
            2,
            vec![Complex64::new(0.1, -2.5), Complex64::new(-1.0, 0.0)],
        )
        .unwrap();
        let text = m.to_csv();
        assert_eq!(text, "1.0000000000000001e-1-2.5000000000000000e0i,-1.0000000000000000e0+0.0000000000000000e0i\n");
        assert_eq!(ComplexMatrix::from_csv(&text).unwrap(), m);
    }

    #[test]
    fn non_finite_rejected() {
        let r = ComplexMatrix::new(1, 1, vec![Complex64::new(f64::NAN, 0.0)]);
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn polynomial_matches_horner() {
        let m = ComplexMatrix::from_fn(6, 6, |i, j| {
            Complex64::new(
                0.1 * (i as f64 - j as f64).sin(),
                0.05 * (i * j) as f64 / 10.0,
            )
        });
        let coeffs: Vec<Complex64> = (0..23)
            .map(|k| Complex64::new(1.0 / (k + 1) as f64, (k as f64).cos() * 0.1))
            .collect();
        let mut horner = ComplexMatrix::zeros(6, 6);
        for c in coeffs.iter().rev() {
            horner = mat_product(&horner, &m)
                .unwrap()
                .add(&ComplexMatrix::identity(6).scale(*c))
                .unwrap();
        }
        let ps = matrix_polynomial(&coeffs, &m).unwrap();
        assert!(ps.max_abs_diff(&horner).unwrap() < 1e-13);
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
            ComplexMatrix::new(
                n,
                n,
                v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn product_is_associative((a, b, c) in (4usize..24).prop_flat_map(|n| (small_matrix(n), small_matrix(n), small_matrix(n)))) {
            let left = mat_product(&mat_product(&a, &b).unwrap(), &c).unwrap();
            let right = mat_product(&a, &mat_product(&b, &c).unwrap()).unwrap();
            let scale = op_norm_est(&a, 200, 1e-10) * op_norm_est(&b, 200, 1e-10) * op_norm_est(&c, 200, 1e-10);
            prop_assert!(op_norm_est(&left.sub(&right).unwrap(), 200, 1e-10) <= 1e-10 * scale);
        }

        #[test]
        fn norm_dominates_columns(a in (2usize..20).prop_flat_map(small_matrix)) {
            let est = op_norm_est(&a, NORM_ITERS, NORM_TOL);
            for j in 0..a.cols() {
                let col: f64 = a.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                prop_assert!(est >= col);
            }
        }

        #[test]
        fn lower_triangular_truncation_commutes(n in 3usize..20, w in 1usize..20) {
            let w = w.min(n);
            let a = ComplexMatrix::from_real_fn(n, n, |i, j| if j <= i { ((i * 7 + j * 3) % 11) as f64 - 5.0 } else { 0.0 });
            let b = ComplexMatrix::from_real_fn(n, n, |i, j| if j <= i { ((i * 5 + j) % 13) as f64 * 0.25 } else { 0.0 });
            let full = mat_product(&a, &b).unwrap().leading(w).unwrap();
            let blocks = mat_product(&a.leading(w).unwrap(), &b.leading(w).unwrap()).unwrap();
            prop_assert_eq!(full, blocks);
        }

        #[test]
        fn csv_round_trip(a in (1usize..6).prop_flat_map(small_matrix)) {
            prop_assert_eq!(ComplexMatrix::from_csv(&a.to_csv()).unwrap(), a);
        }
    }
}
