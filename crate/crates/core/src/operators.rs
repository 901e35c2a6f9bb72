//! Finite sections of the classical operators: powers of the shift, the
//! Toeplitz operator with symbol `cos θ`, the Hilbert and Cesàro matrices,
//! a collocation discretization of the Volterra operator, and its
//! Cayley-type transform `(I - V)(I + V)⁻¹`.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrixcore::ComplexMatrix;
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    Uniform01,
    GaussLegendre,
    TauHalfline,
}

/// Quadrature or collocation nodes with their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMesh {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: MeshKind,
}

impl GridMesh {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, kind: MeshKind) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::Precondition(format!(
                "mesh has {} nodes but {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        if !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Precondition(
                "mesh nodes must be strictly increasing".into(),
            ));
        }
        if !weights.iter().all(|&w| w > 0.0) {
            return Err(Error::Precondition("mesh weights must be positive".into()));
        }
        Ok(Self {
            nodes,
            weights,
            kind,
        })
    }

    /// Midpoints `(i + ½)/m` of `m` equal cells of `[0, 1]`.
    pub fn uniform01(m: usize) -> Self {
        let h = 1.0 / m as f64;
        Self {
            nodes: (0..m).map(|i| (i as f64 + 0.5) * h).collect(),
            weights: vec![h; m],
            kind: MeshKind::Uniform01,
        }
    }

    /// Composite Gauss–Legendre rule on `[a, b]`.
    pub fn gauss_legendre(a: f64, b: f64, panels: usize, points: usize) -> Self {
        let (nodes, weights) = quadrature::composite(a, b, panels, points);
        Self {
            nodes,
            weights,
            kind: MeshKind::GaussLegendre,
        }
    }

    /// Truncated half-line `[lo, hi] ⊂ (0, ∞)` for the Lebedev variable.
    pub fn tau_halfline(lo: f64, hi: f64, panels: usize, points: usize) -> Self {
        let (nodes, weights) = quadrature::composite(lo, hi, panels, points);
        Self {
            nodes,
            weights,
            kind: MeshKind::TauHalfline,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> MeshKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `S^p` on the first `n` monomials.
pub fn shift_pow_matrix(n: usize, p: usize) -> Result<ComplexMatrix> {
    if p == 0 {
        return Err(Error::Precondition("shift power must be at least 1".into()));
    }
    Ok(ComplexMatrix::from_real_fn(n, n, |i, j| {
        if i == j + p {
            1.0
        } else {
            0.0
        }
    }))
}

/// `½(S + S*)`: zero diagonal, `½` on both off-diagonals.
pub fn tcos_matrix(n: usize) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::Precondition("tcos_matrix needs n >= 2".into()));
    }
    Ok(ComplexMatrix::from_real_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            0.5
        } else {
            0.0
        }
    }))
}

/// `H[m][n] = 1/(m + n + 1)`.
pub fn hilbert_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::Precondition("hilbert_matrix needs n >= 1".into()));
    }
    Ok(ComplexMatrix::from_real_fn(n, n, |i, j| {
        1.0 / (i + j + 1) as f64
    }))
}

/// Averaging matrix: row `i` holds `i + 1` copies of `1/(i + 1)`.
pub fn cesaro_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::Precondition("cesaro_matrix needs n >= 1".into()));
    }
    Ok(ComplexMatrix::from_real_fn(n, n, |i, j| {
        if j <= i {
            1.0 / (i + 1) as f64
        } else {
            0.0
        }
    }))
}

/// Midpoint collocation of `∫₀ˣ f`: `h` below the diagonal, `h/2` on it.
pub fn volterra_matrix(m: usize) -> Result<ComplexMatrix> {
    if m < 2 {
        return Err(Error::Precondition("volterra_matrix needs m >= 2".into()));
    }
    let h = 1.0 / m as f64;
    Ok(ComplexMatrix::from_real_fn(m, m, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => h,
        std::cmp::Ordering::Equal => 0.5 * h,
        std::cmp::Ordering::Less => 0.0,
    }))
}

/// `(I - V)(I + V)⁻¹` for lower-triangular `V`.
///
/// `I + V` is lower triangular, so `X (I + V) = I - V` is solved row by row
/// with back substitution on the columns.
pub fn cayley_volterra(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !v.is_square() {
        return Err(Error::DimensionMismatch {
            op: "cayley_volterra",
            left: (v.rows(), v.cols()),
            right: (v.rows(), v.cols()),
        });
    }
    if !v.is_lower_triangular() {
        return Err(Error::Precondition(
            "cayley_volterra expects a lower-triangular operator".into(),
        ));
    }
    let n = v.rows();
    let one = Complex64::new(1.0, 0.0);
    let a = |i: usize, j: usize| {
        if i == j {
            one + v.get(i, j)
        } else {
            v.get(i, j)
        }
    };
    for k in 0..n {
        if a(k, k).norm() < 1e-300 {
            return Err(Error::SingularSolve(k));
        }
    }
    // Row i of X solves x · A = r with r = row i of (I - V); A is lower
    // triangular so x_j depends only on x_k for k > j.
    let mut data = vec![Complex64::zero(); n * n];
    for i in 0..n {
        let row = &mut data[i * n..(i + 1) * n];
        for j in (0..n).rev() {
            let rhs = if i == j {
                one - v.get(i, j)
            } else {
                -v.get(i, j)
            };
            let mut acc = rhs;
            for k in (j + 1)..n {
                let akj = v.get(k, j);
                if akj != Complex64::zero() {
                    acc -= row[k] * akj;
                }
            }
            row[j] = acc / a(j, j);
        }
    }
    ComplexMatrix::new(n, n, data)
}
