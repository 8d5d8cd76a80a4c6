//! Quadrature, cumulative integration and interpolation on uniform grids.
//!
//! Sums go through [`pairwise_sum`] so that results do not depend on how a
//! caller chunks its work.

use std::ops::Add;

pub fn pairwise_sum<T: Copy + Add<Output = T> + Default>(values: &[T]) -> T {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().fold(T::default(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Trapezoid weights for `n` uniformly spaced nodes.
pub fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    if n > 0 {
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
    }
    w
}

pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    let w = trapezoid_weights(values.len(), h);
    let terms: Vec<f64> = values.iter().zip(&w).map(|(v, w)| v * w).collect();
    pairwise_sum(&terms)
}

/// Running trapezoid integral; the first entry is zero.
pub fn cumulative_trapezoid(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for pair in values.windows(2) {
        acc += 0.5 * h * (pair[0] + pair[1]);
        out.push(acc);
    }
    out.truncate(values.len());
    out
}

/// Second-order finite difference derivative on a uniform grid: central in
/// the interior, one-sided three-point stencils at the ends.
pub fn derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    if n < 3 {
        return vec![0.0; n];
    }
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    d
}

/// Lagrange interpolation through `order` consecutive nodes of a uniform
/// grid starting at `x0` with spacing `h`. Near the ends the stencil is
/// shifted inward; outside `[x0, x0 + (n-1)h]` the result is `None`.
pub fn lagrange_uniform(values: &[f64], x0: f64, h: f64, x: f64, order: usize) -> Option<f64> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let s = (x - x0) / h;
    let last = (n - 1) as f64;
    if s < -1e-9 || s > last + 1e-9 {
        return None;
    }
    let order = order.min(n).max(1);
    let base = s.floor() as isize - (order as isize - 1) / 2;
    let start = base.clamp(0, (n - order) as isize) as usize;
    let mut acc = 0.0;
    for j in 0..order {
        let sj = (start + j) as f64;
        if (s - sj).abs() < 1e-14 {
            return Some(values[start + j]);
        }
        let mut lj = 1.0;
        for m in 0..order {
            if m != j {
                let sm = (start + m) as f64;
                lj *= (s - sm) / (sj - sm);
            }
        }
        acc += lj * values[start + j];
    }
    Some(acc)
}

/// Piecewise-linear interpolation on an arbitrary ascending abscissa,
/// clamped to the end values.
pub fn linear_interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let k = xs.partition_point(|&v| v <= x);
    let (x0, x1) = (xs[k - 1], xs[k]);
    let t = (x - x0) / (x1 - x0);
    ys[k - 1] * (1.0 - t) + ys[k] * t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumulative_matches_total() {
        let h = 0.01;
        let v: Vec<f64> = (0..=100).map(|i| (i as f64 * h).powi(2)).collect();
        let c = cumulative_trapezoid(&v, h);
        assert!((c[100] - trapezoid(&v, h)).abs() < 1e-15);
        assert!((c[100] - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn lagrange_is_exact_on_polynomials() {
        let h = 0.5;
        let v: Vec<f64> = (0..10).map(|i| (i as f64 * h).powi(3) - 2.0).collect();
        for &x in &[0.1, 1.3, 4.4] {
            let y = lagrange_uniform(&v, 0.0, h, x, 4).unwrap();
            assert!((y - (x.powi(3) - 2.0)).abs() < 1e-12);
        }
        assert!(lagrange_uniform(&v, 0.0, h, 5.0, 4).is_none());
    }

    #[test]
    fn derivative_of_quadratic_is_exact() {
        let h = 0.1;
        let v: Vec<f64> = (0..20).map(|i| 3.0 * (i as f64 * h).powi(2)).collect();
        let d = derivative(&v, h);
        for (i, di) in d.iter().enumerate() {
            assert!((di - 6.0 * i as f64 * h).abs() < 1e-10);
        }
    }

    #[test]
    fn pairwise_sum_agrees_with_fold() {
        let v: Vec<f64> = (0..1000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let s: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - s).abs() < 1e-12);
    }
}
