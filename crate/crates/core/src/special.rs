//! Hermite functions and the error function.

use std::f64::consts::PI;

/// Oscillator eigenfunctions `psi_0(x) ..= psi_nmax(x)` via the normalized
/// three-term recurrence
/// `psi_{k+1} = sqrt(2/(k+1)) x psi_k - sqrt(k/(k+1)) psi_{k-1}`,
/// which stays finite for large `k` where raw `H_k` would overflow.
pub fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let psi0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(psi0);
    if n_max == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * psi0);
    for k in 1..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Physicists' Hermite polynomials `H_0(x) ..= H_nmax(x)` by the raw
/// recurrence `H_{k+1} = 2x H_k - 2k H_{k-1}`.
pub fn hermite_polynomials(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(2.0 * x);
    for k in 1..n_max {
        out.push(2.0 * x * out[k] - 2.0 * k as f64 * out[k - 1]);
    }
    out
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}
