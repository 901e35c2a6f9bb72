use num_complex::Complex64;

use crate::series::{series_mul, series_sqrt, PowerSeries};

/// Zeros closer than this are treated as one repeated zero.
const CLUSTER_TOL: f64 = 1e-9;

/// A polynomial symbol `lead · Π (z - z_k)` given by its zero multiset.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSymbol {
    pub lead: Complex64,
    pub zeros: Vec<Complex64>,
}

impl PolynomialSymbol {
    pub fn new(lead: Complex64, zeros: Vec<Complex64>) -> Self {
        Self { lead, zeros }
    }

    pub fn to_series(&self) -> PowerSeries {
        PowerSeries::from_roots(self.lead, &self.zeros)
    }

    /// Distinct zeros with multiplicities.
    pub fn grouped_zeros(&self) -> Vec<(Complex64, usize)> {
        let mut groups: Vec<(Complex64, usize)> = Vec::new();
        for &z in &self.zeros {
            match groups
                .iter_mut()
                .find(|(c, _)| (c - z).norm() < CLUSTER_TOL)
            {
                Some(g) => g.1 += 1,
                None => groups.push((z, 1)),
            }
        }
        groups
    }
}

/// Decides whether `T_φ` has a square root and returns the analytic `ψ`
/// (through degree `k`) with `ψ² = φ` when it does.
///
/// Zeros in the open disc must pair up; the factor of zeros on or outside
/// the circle is zero-free in the disc and has an analytic square root.
pub fn toeplitz_root_decide(phi: &PolynomialSymbol, k: usize) -> Option<PowerSeries> {
    if phi.lead == Complex64::new(0.0, 0.0) {
        return Some(PowerSeries::zero(k));
    }
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    for (z0, mult) in phi.grouped_zeros() {
        if z0.norm() < 1.0 - CLUSTER_TOL {
            if mult % 2 == 1 {
                return None;
            }
            inner.extend(std::iter::repeat(z0).take(mult / 2));
        } else {
            outer.extend(std::iter::repeat(z0).take(mult));
        }
    }
    let paired = PowerSeries::from_roots(Complex64::new(1.0, 0.0), &inner);
    let outer_root = series_sqrt(&PowerSeries::from_roots(phi.lead, &outer), k).ok()?;
    Some(series_mul(&paired, &outer_root, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::series_mul;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Winding number of `φ` around a small circle about `z0`: equals the
    /// multiplicity of `z0`, independently of the grouping logic.
    fn multiplicity_by_argument(phi: &PolynomialSymbol, z0: Complex64) -> usize {
        let others = phi
            .zeros
            .iter()
            .map(|z| (z - z0).norm())
            .filter(|&d| d > 1e-12)
            .fold(1.0f64, f64::min);
        let rho = 0.4 * others;
        let p = phi.to_series();
        let steps = 2048;
        let mut total = 0.0;
        let mut prev = p.eval(z0 + c(rho, 0.0)).arg();
        for s in 1..=steps {
            let t = 2.0 * PI * s as f64 / steps as f64;
            let a = p.eval(z0 + c(rho * t.cos(), rho * t.sin())).arg();
            let mut d = a - prev;
            if d > PI {
                d -= 2.0 * PI;
            } else if d < -PI {
                d += 2.0 * PI;
            }
            total += d;
            prev = a;
        }
        (total / (2.0 * PI)).round() as usize
    }

    fn square_error(psi: &PowerSeries, phi: &PolynomialSymbol, k: usize) -> f64 {
        series_mul(psi, psi, k)
            .sub(&phi.to_series().truncate(k))
            .max_abs_through(k)
    }

    #[test]
    fn shift_has_no_root() {
        assert!(
            toeplitz_root_decide(&PolynomialSymbol::new(c(1.0, 0.0), vec![c(0.0, 0.0)]), 16)
                .is_none()
        );
    }

    #[test]
    fn z_squared_root_is_z() {
        let psi =
            toeplitz_root_decide(&PolynomialSymbol::new(c(1.0, 0.0), vec![c(0.0, 0.0); 2]), 8)
                .unwrap();
        for k in 0..=8 {
            let e = if k == 1 { 1.0 } else { 0.0 };
            assert!((psi.coeff(k) - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn mixed_inner_outer() {
        // (z - 1/2)²(2 - z) = -(z - 1/2)²(z - 2)
        let phi = PolynomialSymbol::new(c(-1.0, 0.0), vec![c(0.5, 0.0), c(0.5, 0.0), c(2.0, 0.0)]);
        let k = 40;
        let psi = toeplitz_root_decide(&phi, k).unwrap();
        assert!(square_error(&psi, &phi, k - 2) < 1e-10);
    }

    #[test]
    fn lattice_matches_argument_principle() {
        let lattice = [
            c(0.0, 0.0),
            c(0.5, 0.0),
            c(-0.3, 0.4),
            c(1.5, 0.0),
            c(0.0, -2.0),
            c(1.0, 0.0),
        ];
        let k = 48;
        let mut checked = 0;
        for deg in 1..=4usize {
            let mut idx = vec![0usize; deg];
            loop {
                let zeros: Vec<_> = idx.iter().map(|&i| lattice[i]).collect();
                let phi = PolynomialSymbol::new(c(0.7, 0.2), zeros.clone());
                let odd_inside = phi.grouped_zeros().iter().any(|(z0, _)| {
                    z0.norm() < 0.99 && multiplicity_by_argument(&phi, *z0) % 2 == 1
                });
                match toeplitz_root_decide(&phi, k) {
                    None => assert!(odd_inside, "{zeros:?}"),
                    Some(psi) => {
                        assert!(!odd_inside, "{zeros:?}");
                        let err = square_error(&psi, &phi, k - 2);
                        assert!(err < 1e-10, "{zeros:?} err={err}");
                    }
                }
                checked += 1;
                // next non-decreasing index tuple
                let mut p = deg;
                while p > 0 && idx[p - 1] == lattice.len() - 1 {
                    p -= 1;
                }
                if p == 0 {
                    break;
                }
                idx[p - 1] += 1;
                let v = idx[p - 1];
                for q in idx.iter_mut().skip(p) {
                    *q = v;
                }
            }
        }
        assert!(checked > 100);
    }
}
