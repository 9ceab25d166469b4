//! Gauss–Hermite quadrature nodes and weights for Gaussian averages.
//!
//! Nodes are the roots of the physicists' Hermite polynomial H_n; weights
//! come from the Christoffel function of the orthonormalized recurrence,
//! which stays well-scaled for every practical order. The rule integrates
//! ∫ e^{-x²} g(x) dx exactly for polynomials of degree ≤ 2n-1; a Gaussian
//! expectation with standard deviation σ is then
//! ⟨g⟩ = (1/√π)·Σ w_i·g(c + √2·σ·x_i).

use crate::error::{CoreError, Result};

/// Orthonormal Hermite values (p_0..p_n at x) and the derivative p_n'(x).
///
/// Recurrence: p_{k+1} = x·√(2/(k+1))·p_k - √(k/(k+1))·p_{k-1}, with
/// p_0 = π^{-1/4}; the derivative satisfies p_n' = √(2n)·p_{n-1}.
fn hermite_orthonormal(n: usize, x: f64) -> (f64, f64, f64) {
    let mut p_prev = 0.0;
    let mut p = std::f64::consts::PI.powf(-0.25);
    let mut christoffel = p * p;
    for k in 0..n {
        let kf = k as f64;
        let p_next = x * (2.0 / (kf + 1.0)).sqrt() * p - (kf / (kf + 1.0)).sqrt() * p_prev;
        p_prev = p;
        p = p_next;
        if k + 1 < n {
            christoffel += p * p;
        }
    }
    let dp = (2.0 * n as f64).sqrt() * p_prev;
    (p, dp, christoffel)
}

/// Gauss–Hermite nodes and weights of order n (n ≥ 1), for the weight
/// function e^{-x²} on the whole real line. Nodes are returned in
/// increasing order; Σ w_i = √π.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(CoreError::InvalidParam(
            "Gauss-Hermite order must be at least 1".into(),
        ));
    }
    // Bracket the positive roots by scanning p_n on a fine grid up to just
    // beyond the largest root (≈ √(2n+1)), then polish with Newton.
    let x_max = (2.0 * n as f64 + 1.0).sqrt() + 1.0;
    let steps = 200 * n;
    let h = x_max / steps as f64;
    let mut roots = Vec::with_capacity(n);
    let value_at = |x: f64| hermite_orthonormal(n, x).0;
    // x = 0 is a root for odd n.
    if n % 2 == 1 {
        roots.push(0.0);
    }
    let mut prev_x = if n % 2 == 1 { h * 0.5 } else { 0.0 };
    let mut prev_v = value_at(prev_x);
    let mut x = prev_x;
    while x < x_max {
        x += h;
        let v = value_at(x);
        if prev_v == 0.0 {
            roots.push(prev_x);
        } else if prev_v * v < 0.0 {
            // Newton from the midpoint, with bisection fallback bounds.
            let (mut lo, mut hi) = (prev_x, x);
            let mut root = 0.5 * (lo + hi);
            for _ in 0..100 {
                let (p, dp, _) = hermite_orthonormal(n, root);
                if p == 0.0 {
                    break;
                }
                let step = p / dp;
                // Converged to machine precision. Break *before* touching the
                // bracket: a sub-ulp Newton step can collide with a bracket
                // endpoint and would otherwise get replaced by the stale
                // midpoint, corrupting an already-exact root.
                if step.abs() < 4.0 * f64::EPSILON * root.abs().max(1.0) {
                    break;
                }
                if p * value_at(lo) < 0.0 {
                    hi = root;
                } else {
                    lo = root;
                }
                let candidate = root - step;
                root = if candidate > lo && candidate < hi {
                    candidate
                } else {
                    0.5 * (lo + hi)
                };
            }
            roots.push(root);
        }
        prev_x = x;
        prev_v = v;
    }
    let positive_expected = n / 2;
    let found_positive = roots.iter().filter(|r| **r > 0.0).count();
    if found_positive != positive_expected {
        return Err(CoreError::ConvergenceFailure(format!(
            "Gauss-Hermite root search found {found_positive} positive roots, expected {positive_expected}"
        )));
    }
    // Mirror to the negative axis and sort.
    let mut nodes: Vec<f64> = roots.iter().filter(|r| **r > 0.0).map(|r| -r).collect();
    nodes.extend(roots);
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let weights = nodes
        .iter()
        .map(|&x| {
            let (_, _, christoffel) = hermite_orthonormal(n, x);
            1.0 / christoffel
        })
        .collect();
    Ok((nodes, weights))
}

/// Gaussian expectation ⟨g(X)⟩ for X ~ N(center, sigma²) using a
/// Gauss–Hermite rule of the given order.
pub fn gaussian_expectation<F: FnMut(f64) -> f64>(
    center: f64,
    sigma: f64,
    order: usize,
    mut g: F,
) -> Result<f64> {
    let (nodes, weights) = gauss_hermite(order)?;
    let scale = std::f64::consts::SQRT_2 * sigma;
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        sum += w * g(center + scale * x);
    }
    Ok(sum / std::f64::consts::PI.sqrt())
}
