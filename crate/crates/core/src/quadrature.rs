//! Gauss–Laguerre quadrature for expectations over exponential laws.
//!
//! Nodes start from the eigenvalues of the Laguerre Jacobi matrix (Golub–Welsch) and are
//! polished by Newton steps on the three-term recurrence; weights come from
//! `w = x / ((n+1)² L_{n+1}(x)²)`, which keeps the tiny tail weights accurate.

use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

/// Node count of the primary rule.
pub const PRIMARY_NODES: usize = 64;
/// Node count of the refinement rule used for the error estimate.
pub const REFINED_NODES: usize = 128;

/// A Gauss–Laguerre rule: `∫₀^∞ f(x) e^{−x} dx ≈ Σ wᵢ f(xᵢ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLaguerre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Returns `(L_n(x), L_{n−1}(x))`.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

impl GaussLaguerre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            jacobi[(i, i)] = 2.0 * i as f64 + 1.0;
            if i + 1 < n {
                let off = (i + 1) as f64;
                jacobi[(i, i + 1)] = off;
                jacobi[(i + 1, i)] = off;
            }
        }
        let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        nodes.sort_by(f64::total_cmp);

        let nf = n as f64;
        let weights = nodes
            .iter_mut()
            .map(|x| {
                for _ in 0..8 {
                    let (ln, ln1) = laguerre_pair(n, *x);
                    let deriv = nf * (ln - ln1) / *x;
                    let step = ln / deriv;
                    *x -= step;
                    if step.abs() <= 1e-15 * x.abs() {
                        break;
                    }
                }
                let (ln1, _) = laguerre_pair(n + 1, *x);
                *x / ((nf + 1.0).powi(2) * ln1 * ln1)
            })
            .collect();
        GaussLaguerre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Tensor-product rule for `∫∫ f(u, v) e^{−u−v} du dv`.
    pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        let mut total = 0.0;
        for (&u, &wu) in self.nodes.iter().zip(&self.weights) {
            let mut row = 0.0;
            for (&v, &wv) in self.nodes.iter().zip(&self.weights) {
                row += wv * f(u, v);
            }
            total += wu * row;
        }
        total
    }
}

/// The shared rule with [`PRIMARY_NODES`] nodes.
pub fn primary_rule() -> &'static GaussLaguerre {
    static RULE: OnceLock<GaussLaguerre> = OnceLock::new();
    RULE.get_or_init(|| GaussLaguerre::new(PRIMARY_NODES))
}

/// The shared rule with [`REFINED_NODES`] nodes.
pub fn refined_rule() -> &'static GaussLaguerre {
    static RULE: OnceLock<GaussLaguerre> = OnceLock::new();
    RULE.get_or_init(|| GaussLaguerre::new(REFINED_NODES))
}

/// Value of an integral together with its estimated relative error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub rel_error: f64,
}

/// `E[h(X, Y)]` for independent `X ~ Exp(mean λx)`, `Y ~ Exp(mean λy)`, evaluated with the
/// primary rule and checked against the refined one.
pub fn expect_exponential_2d<F>(lambda_x: f64, lambda_y: f64, h: F) -> Estimate
where
    F: Fn(f64, f64) -> f64,
{
    let coarse = primary_rule().integrate_2d(|u, v| h(lambda_x * u, lambda_y * v));
    let fine = refined_rule().integrate_2d(|u, v| h(lambda_x * u, lambda_y * v));
    let rel_error = if fine == 0.0 {
        if coarse == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        ((coarse - fine) / fine).abs()
    };
    Estimate { value: fine, rel_error }
}

/// `E[h(X, Y)]` with the primary rule only.
pub fn expect_exponential_2d_fast<F>(lambda_x: f64, lambda_y: f64, h: F) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    primary_rule().integrate_2d(|u, v| h(lambda_x * u, lambda_y * v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rule_matches_tables() {
        // two-point rule: nodes 2 ∓ √2, weights (2 ± √2)/4
        let r = GaussLaguerre::new(2);
        let s = 2f64.sqrt();
        assert!((r.nodes()[0] - (2.0 - s)).abs() < 1e-14);
        assert!((r.nodes()[1] - (2.0 + s)).abs() < 1e-14);
        assert!((r.weights()[0] - (2.0 + s) / 4.0).abs() < 1e-14);
        assert!((r.weights()[1] - (2.0 - s) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn moments_are_factorials() {
        for n in [PRIMARY_NODES, REFINED_NODES] {
            let r = GaussLaguerre::new(n);
            assert_eq!(r.len(), n);
            assert!((r.weights().iter().sum::<f64>() - 1.0).abs() < 1e-11);
            let mut fact = 1.0;
            for k in 1..=20 {
                fact *= k as f64;
                let m = r.integrate(|x| x.powi(k));
                assert!(((m - fact) / fact).abs() < 1e-11, "n={n} k={k}: {m} vs {fact}");
            }
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(r.weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn smooth_expectation() {
        // E[1/(1+X)] for X ~ Exp(1) is e·E₁(1)
        let exact = 0.596_347_362_323_194_1;
        let got = refined_rule().integrate(|x| 1.0 / (1.0 + x));
        assert!((got - exact).abs() < 1e-8);
        // E[XY] with means 2 and 3
        let e = expect_exponential_2d(2.0, 3.0, |x, y| x * y);
        assert!((e.value - 6.0).abs() < 1e-10);
        assert!(e.rel_error < 1e-10);
    }
}
