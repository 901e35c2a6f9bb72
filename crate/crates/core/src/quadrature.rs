//! Composite Gauss–Legendre rules on finite intervals.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// Reference nodes and weights on `[-1, 1]`, sorted by node.
pub fn reference_rule(points: usize) -> Vec<(f64, f64)> {
    let degree = NonZeroUsize::new(points.max(1)).expect("positive");
    let mut pairs = GaussLegendre::new(degree).as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// `panels` equal panels on `[a, b]`, `points` nodes each.
pub fn composite(a: f64, b: f64, panels: usize, points: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = reference_rule(points);
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * rule.len());
    let mut weights = Vec::with_capacity(panels * rule.len());
    for p in 0..panels {
        let lo = a + width * p as f64;
        let mid = lo + 0.5 * width;
        for &(x, w) in &rule {
            nodes.push(mid + 0.5 * width * x);
            weights.push(0.5 * width * w);
        }
    }
    (nodes, weights)
}

pub fn integrate(a: f64, b: f64, panels: usize, points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = composite(a, b, panels, points);
    x.iter().zip(&w).map(|(&x, &w)| w * f(x)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials() {
        let v = integrate(-1.0, 2.0, 3, 4, |x| x.powi(7) - 2.0 * x.powi(3));
        let exact = (2f64.powi(8) - 1.0) / 8.0 - 2.0 * (2f64.powi(4) - 1.0) / 4.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn nodes_sorted_and_weights_positive() {
        let (x, w) = composite(0.0, 1.0, 5, 16);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        assert!(w.iter().all(|&w| w > 0.0));
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }
}
