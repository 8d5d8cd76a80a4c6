//! Quantum states and canonical operators: position grids, oscillator and
//! coherent wavefunctions, truncated number-basis density matrices, and the
//! position/momentum matrices.
//!
//! Units are dimensionless throughout: `hbar = m = omega = 1`. Results that
//! are compared with references using other conventions must be rescaled by
//! the caller.

mod spec;

pub use spec::StateSpec;

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::linalg::{self, CMatrix, HermitianEigen, C64};
use crate::quad;
use crate::special::hermite_functions;

/// Default truncation of the number basis.
pub const DEFAULT_FOCK_DIM: usize = 32;
/// Largest oscillator level supported by [`fock_wavefunction`].
pub const MAX_FOCK_LEVEL: usize = 200;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const EIGEN_TOL: f64 = 1e-10;
const WAVEFUNCTION_NORM_TOL: f64 = 1e-8;
const FOCK_NORM_TOL: f64 = 1e-6;

/// Uniform grid on `[x_min, x_max]` with `n_points` nodes, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositionGrid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl PositionGrid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(TomoError::InvalidGrid(format!(
                "need at least 2 points, got {n_points}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(TomoError::InvalidGrid(format!(
                "bounds must satisfy x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        Ok(PositionGrid {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Symmetric grid `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.x_min <= lo && self.x_max >= hi
    }

    fn require_cover(&self, lo: f64, hi: f64) -> Result<()> {
        if self.covers(lo, hi) {
            Ok(())
        } else {
            Err(TomoError::GridTooSmall {
                x_min: self.x_min,
                x_max: self.x_max,
                need_min: lo,
                need_max: hi,
            })
        }
    }

    /// Every `stride`-th node, which must land exactly on `x_max`.
    pub fn subsample(&self, stride: usize) -> Result<Self> {
        if stride == 0 || !(self.n_points - 1).is_multiple_of(stride) {
            return Err(TomoError::InvalidGrid(format!(
                "stride {stride} does not divide {} intervals",
                self.n_points - 1
            )));
        }
        Self::new(self.x_min, self.x_max, (self.n_points - 1) / stride + 1)
    }
}

impl Default for PositionGrid {
    /// `[-10, 10]` with 1001 nodes: covers the oscillator levels up to
    /// n = 10 with a wide margin.
    fn default() -> Self {
        PositionGrid {
            x_min: -10.0,
            x_max: 10.0,
            n_points: 1001,
        }
    }
}

/// Complex amplitude sampled on a [`PositionGrid`], unit-normalized under
/// trapezoid quadrature.
#[derive(Debug, Clone)]
pub struct Wavefunction {
    grid: PositionGrid,
    values: Vec<C64>,
}

impl Wavefunction {
    /// Wraps samples and rescales them to unit norm.
    pub fn normalized(grid: PositionGrid, mut values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(TomoError::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        let norm = norm_squared(&values, grid.spacing());
        if !(norm.is_finite() && norm > 0.0) {
            return Err(TomoError::Normalization {
                norm,
                tolerance: WAVEFUNCTION_NORM_TOL,
            });
        }
        let scale = 1.0 / norm.sqrt();
        values.iter_mut().for_each(|v| *v *= scale);
        Ok(Wavefunction { grid, values })
    }

    pub fn grid(&self) -> &PositionGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn norm_squared(&self) -> f64 {
        norm_squared(&self.values, self.grid.spacing())
    }

    /// `|psi(x)|^2` interpolated with an 8-point stencil; zero off the grid.
    pub fn density_at(&self, x: f64) -> f64 {
        let dens: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        quad::lagrange_uniform(&dens, self.grid.x_min(), self.grid.spacing(), x, 8).unwrap_or(0.0)
    }

    /// Overlaps `<n|psi>` with the first `dim` oscillator levels.
    pub fn fock_coefficients(&self, dim: usize) -> Vec<C64> {
        let h = self.grid.spacing();
        let w = quad::trapezoid_weights(self.grid.len(), h);
        let mut coeffs = vec![C64::new(0.0, 0.0); dim];
        for (i, x) in self.grid.points().into_iter().enumerate() {
            let psi_n = hermite_functions(dim.saturating_sub(1), x);
            for (n, c) in coeffs.iter_mut().enumerate() {
                *c += self.values[i] * psi_n[n] * w[i];
            }
        }
        coeffs
    }
}

fn norm_squared(values: &[C64], h: f64) -> f64 {
    let dens: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
    quad::trapezoid(&dens, h)
}

/// Access to the matrix of a density operator, for routines that accept
/// both oscillator and spin states.
pub trait DensityOperator {
    fn matrix(&self) -> &CMatrix;
}

/// Hermitian, unit-trace, positive semidefinite matrix in the truncated
/// number basis `|0>, ..., |dim-1>`.
#[derive(Debug, Clone)]
pub struct FockDensityMatrix {
    elements: CMatrix,
}

impl FockDensityMatrix {
    pub fn new(elements: CMatrix) -> Result<Self> {
        let diag = validate_state(&elements)?;
        if !diag.passed {
            return Err(TomoError::Consistency(diag.to_string()));
        }
        Ok(FockDensityMatrix {
            elements: linalg::hermitian_part(&elements),
        })
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn elements(&self) -> &CMatrix {
        &self.elements
    }

    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        density_from_fock_coefficients(&fock_coefficients(n, dim)?)
    }

    pub fn coherent(alpha: C64, dim: usize) -> Result<Self> {
        density_from_fock_coefficients(&coherent_fock_coefficients(alpha, dim))
    }
}

impl DensityOperator for FockDensityMatrix {
    fn matrix(&self) -> &CMatrix {
        &self.elements
    }
}

/// Hermitian matrix in a truncated basis.
#[derive(Debug, Clone)]
pub struct Observable {
    elements: CMatrix,
}

impl Observable {
    pub fn new(elements: CMatrix) -> Result<Self> {
        linalg::require_hermitian(&elements, HERMITIAN_TOL)?;
        Ok(Observable {
            elements: linalg::hermitian_part(&elements),
        })
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn elements(&self) -> &CMatrix {
        &self.elements
    }

    pub fn identity(dim: usize) -> Self {
        Observable {
            elements: CMatrix::identity(dim, dim),
        }
    }

    pub fn projector(n: usize, dim: usize) -> Result<Self> {
        let rho = FockDensityMatrix::fock(n, dim)?;
        Ok(Observable {
            elements: rho.elements,
        })
    }

    /// `mu x + nu p` with the truncated position and momentum matrices.
    pub fn quadrature(frame: &SymplecticFrame, dim: usize) -> Result<Self> {
        let (x, p) = ladder_operators(dim)?;
        Ok(Observable {
            elements: x.elements.scale(frame.mu()) + p.elements.scale(frame.nu()),
        })
    }

    pub fn product(&self, other: &Observable) -> CMatrix {
        &self.elements * &other.elements
    }
}

impl From<FockDensityMatrix> for Observable {
    fn from(rho: FockDensityMatrix) -> Self {
        Observable {
            elements: rho.elements,
        }
    }
}

/// Rotated and scaled reference frame `X = mu q + nu p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticFrame {
    mu: f64,
    nu: f64,
    /// `(lambda, phi)` when the frame was built from squeeze and rotation.
    squeeze_rotation: Option<(f64, f64)>,
}

impl SymplecticFrame {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !(mu.is_finite() && nu.is_finite()) || (mu == 0.0 && nu == 0.0) {
            return Err(TomoError::InvalidParameter(format!(
                "frame (mu, nu) = ({mu}, {nu}) must be finite and nonzero"
            )));
        }
        Ok(SymplecticFrame {
            mu,
            nu,
            squeeze_rotation: None,
        })
    }

    /// `mu = e^lambda cos phi`, `nu = e^-lambda sin phi`.
    pub fn from_squeeze_rotation(lambda: f64, phi: f64) -> Self {
        SymplecticFrame {
            mu: lambda.exp() * phi.cos(),
            nu: (-lambda).exp() * phi.sin(),
            squeeze_rotation: Some((lambda, phi)),
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn squeeze_rotation(&self) -> Option<(f64, f64)> {
        self.squeeze_rotation
    }

    /// `sqrt(mu^2 + nu^2)`.
    pub fn norm(&self) -> f64 {
        self.mu.hypot(self.nu)
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.mu * s, self.nu * s)
    }
}

/// Position and momentum matrices `x = (a + a†)/sqrt2`, `p = (a - a†)/(i sqrt2)`
/// in the truncated number basis.
pub fn ladder_operators(dim: usize) -> Result<(Observable, Observable)> {
    if dim < 2 {
        return Err(TomoError::InvalidParameter(format!(
            "truncation dimension must be at least 2, got {dim}"
        )));
    }
    let mut x = CMatrix::zeros(dim, dim);
    let mut p = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        let s = (n as f64 / 2.0).sqrt();
        x[(n - 1, n)] = C64::new(s, 0.0);
        x[(n, n - 1)] = C64::new(s, 0.0);
        p[(n - 1, n)] = C64::new(0.0, -s);
        p[(n, n - 1)] = C64::new(0.0, s);
    }
    Ok((Observable { elements: x }, Observable { elements: p }))
}

/// Oscillator eigenfunction `psi_n` sampled on `grid` and renormalized there.
pub fn fock_wavefunction(n: usize, grid: PositionGrid) -> Result<Wavefunction> {
    if n > MAX_FOCK_LEVEL {
        return Err(TomoError::UnsupportedOrder {
            order: n,
            max: MAX_FOCK_LEVEL,
        });
    }
    let reach = (2.0 * n as f64 + 1.0).sqrt() + 4.0;
    grid.require_cover(-reach, reach)?;
    let values = grid
        .points()
        .into_iter()
        .map(|x| C64::new(hermite_functions(n, x)[n], 0.0))
        .collect();
    Wavefunction::normalized(grid, values)
}

/// Coherent state
/// `pi^-1/4 exp(-x^2/2 + sqrt2 alpha x - alpha^2/2 - |alpha|^2/2)`.
pub fn coherent_wavefunction(alpha: C64, grid: PositionGrid) -> Result<Wavefunction> {
    let center = SQRT_2 * alpha.re;
    grid.require_cover(center - 5.0, center + 5.0)?;
    let values = grid
        .points()
        .into_iter()
        .map(|x| coherent_amplitude(alpha, x))
        .collect();
    Wavefunction::normalized(grid, values)
}

pub(crate) fn coherent_amplitude(alpha: C64, x: f64) -> C64 {
    let exponent = -0.5 * x * x + SQRT_2 * alpha * x - 0.5 * alpha * alpha - 0.5 * alpha.norm_sqr();
    exponent.exp() * PI.powf(-0.25)
}

pub fn fock_coefficients(n: usize, dim: usize) -> Result<Vec<C64>> {
    if n >= dim {
        return Err(TomoError::InvalidParameter(format!(
            "level {n} does not fit in truncation dimension {dim}"
        )));
    }
    let mut c = vec![C64::new(0.0, 0.0); dim];
    c[n] = C64::new(1.0, 0.0);
    Ok(c)
}

/// `e^{-|alpha|^2/2} alpha^n / sqrt(n!)` for `n < dim`, not renormalized.
pub fn coherent_fock_coefficients(alpha: C64, dim: usize) -> Vec<C64> {
    let mut c = Vec::with_capacity(dim);
    let mut term = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            term = term * alpha / (n as f64).sqrt();
        }
        c.push(term);
    }
    c
}

/// Pure-state projector from number-basis amplitudes. The amplitudes must
/// have unit norm to within `1e-6` (truncation loss) and are renormalized.
pub fn density_from_fock_coefficients(coefficients: &[C64]) -> Result<FockDensityMatrix> {
    let dim = coefficients.len();
    if dim == 0 {
        return Err(TomoError::InvalidParameter("empty coefficient list".into()));
    }
    let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > FOCK_NORM_TOL {
        return Err(TomoError::Normalization {
            norm,
            tolerance: FOCK_NORM_TOL,
        });
    }
    let s = 1.0 / norm.sqrt();
    let elements = CMatrix::from_fn(dim, dim, |r, c| coefficients[r] * coefficients[c].conj() * s * s);
    Ok(FockDensityMatrix {
        elements: linalg::hermitian_part(&elements),
    })
}

/// Projects a grid wavefunction onto the first `dim` oscillator levels and
/// returns the pure-state projector.
pub fn density_from_wavefunction(psi: &Wavefunction, dim: usize) -> Result<FockDensityMatrix> {
    if (psi.norm_squared() - 1.0).abs() > WAVEFUNCTION_NORM_TOL {
        return Err(TomoError::Normalization {
            norm: psi.norm_squared(),
            tolerance: WAVEFUNCTION_NORM_TOL,
        });
    }
    density_from_fock_coefficients(&psi.fock_coefficients(dim))
}

/// Outcome of [`validate_state`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateDiagnostics {
    pub dim: usize,
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub passed: bool,
}

impl std::fmt::Display for StateDiagnostics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "dim={} hermiticity_defect={:.3e} trace_defect={:.3e} min_eigenvalue={:.6e} -> {}",
            self.dim,
            self.hermiticity_defect,
            self.trace_defect,
            self.min_eigenvalue,
            if self.passed { "pass" } else { "fail" }
        )
    }
}

/// Checks the density-operator axioms: Hermitian (1e-12), unit trace
/// (1e-10) and no eigenvalue below -1e-10.
pub fn validate_state(rho: &CMatrix) -> Result<StateDiagnostics> {
    let dim = linalg::require_square(rho)?;
    let hermiticity_defect = linalg::hermiticity_defect(rho);
    let trace_defect = (linalg::trace(rho) - C64::new(1.0, 0.0)).norm();
    let min_eigenvalue = HermitianEigen::new(rho).values[0];
    let passed =
        hermiticity_defect <= HERMITIAN_TOL && trace_defect <= TRACE_TOL && min_eigenvalue >= -EIGEN_TOL;
    Ok(StateDiagnostics {
        dim,
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        passed,
    })
}

/// Position-representation density kernel `rho(y, y')` on a square grid.
#[derive(Debug, Clone)]
pub struct PositionKernel {
    grid: PositionGrid,
    values: CMatrix,
}

impl PositionKernel {
    pub fn new(grid: PositionGrid, values: CMatrix) -> Result<Self> {
        if values.nrows() != grid.len() || values.ncols() != grid.len() {
            return Err(TomoError::DimensionMismatch {
                expected: grid.len(),
                found: values.nrows(),
            });
        }
        Ok(PositionKernel { grid, values })
    }

    /// `psi(y) conj(psi(y'))`.
    pub fn from_wavefunction(psi: &Wavefunction) -> Self {
        let v = psi.values();
        let n = v.len();
        PositionKernel {
            grid: *psi.grid(),
            values: CMatrix::from_fn(n, n, |a, b| v[a] * v[b].conj()),
        }
    }

    /// `sum_{mn} rho_mn psi_m(y) psi_n(y')` for a number-basis density matrix.
    pub fn from_fock(rho: &FockDensityMatrix, grid: PositionGrid) -> Self {
        let dim = rho.dim();
        let pts = grid.points();
        let basis = CMatrix::from_fn(pts.len(), dim, |i, n| {
            C64::new(hermite_functions(dim - 1, pts[i])[n], 0.0)
        });
        let values = &basis * rho.elements() * basis.transpose();
        PositionKernel { grid, values }
    }

    pub fn grid(&self) -> &PositionGrid {
        &self.grid
    }

    pub fn values(&self) -> &CMatrix {
        &self.values
    }

    /// `rho(y, y)` interpolated with an 8-point stencil; zero off the grid.
    pub fn diagonal_at(&self, y: f64) -> f64 {
        let diag: Vec<f64> = (0..self.grid.len()).map(|i| self.values[(i, i)].re).collect();
        quad::lagrange_uniform(&diag, self.grid.x_min(), self.grid.spacing(), y, 8).unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(a: f64, n: usize) -> PositionGrid {
        PositionGrid::symmetric(a, n).unwrap()
    }

    #[test]
    fn vacuum_peak_value() {
        let psi = fock_wavefunction(0, grid(8.0, 401)).unwrap();
        assert!((psi.values()[200].re - PI.powf(-0.25)).abs() < 1e-9);
        assert!((psi.values()[200].re - 0.751126).abs() < 1e-6);
    }

    #[test]
    fn first_excited_vanishes_at_origin() {
        let psi = fock_wavefunction(1, grid(8.0, 401)).unwrap();
        assert_eq!(psi.values()[200].re, 0.0);
    }

    #[test]
    fn third_level_normalized_by_independent_quadrature() {
        let g = grid(10.0, 801);
        let psi = fock_wavefunction(3, g).unwrap();
        // Simpson's rule as an independent check of the trapezoid normalization.
        let h = g.spacing();
        let dens: Vec<f64> = psi.values().iter().map(|v| v.norm_sqr()).collect();
        let mut s = dens[0] + dens[800];
        for (i, d) in dens.iter().enumerate().take(800).skip(1) {
            s += if i % 2 == 1 { 4.0 * d } else { 2.0 * d };
        }
        assert!((s * h / 3.0 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn grid_too_small_is_rejected() {
        let err = fock_wavefunction(10, grid(5.0, 101)).unwrap_err();
        assert!(matches!(err, TomoError::GridTooSmall { .. }));
        assert!(fock_wavefunction(201, PositionGrid::default()).is_err());
        assert!(coherent_wavefunction(C64::new(5.0, 0.0), grid(8.0, 101)).is_err());
    }

    #[test]
    fn fock_functions_are_orthogonal_on_the_grid() {
        let g = PositionGrid::default();
        let psis: Vec<_> = (0..=10).map(|n| fock_wavefunction(n, g).unwrap()).collect();
        let w = quad::trapezoid_weights(g.len(), g.spacing());
        for n in 0..=10 {
            for m in 0..n {
                let ip: C64 = (0..g.len())
                    .map(|i| psis[n].values()[i].conj() * psis[m].values()[i] * w[i])
                    .sum();
                assert!(ip.norm() < 1e-6, "<{n}|{m}> = {ip}");
            }
        }
    }

    #[test]
    fn coherent_zero_is_vacuum() {
        let g = PositionGrid::default();
        let a = coherent_wavefunction(C64::new(0.0, 0.0), g).unwrap();
        let b = fock_wavefunction(0, g).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    fn moments(psi: &Wavefunction) -> (f64, f64) {
        let g = psi.grid();
        let pts = g.points();
        let dens: Vec<f64> = psi.values().iter().map(|v| v.norm_sqr()).collect();
        let m1: Vec<f64> = dens.iter().zip(&pts).map(|(d, x)| d * x).collect();
        let mean = quad::trapezoid(&m1, g.spacing());
        let m2: Vec<f64> = dens
            .iter()
            .zip(&pts)
            .map(|(d, x)| d * (x - mean).powi(2))
            .collect();
        (mean, quad::trapezoid(&m2, g.spacing()))
    }

    #[test]
    fn coherent_position_moments() {
        let g = PositionGrid::default();
        let (mean, var) = moments(&coherent_wavefunction(C64::new(1.0, 0.0), g).unwrap());
        assert!((mean - SQRT_2).abs() < 1e-10);
        assert!((var - 0.5).abs() < 1e-10);
        let (mean, var) = moments(&coherent_wavefunction(C64::new(0.0, 1.0), g).unwrap());
        assert!(mean.abs() < 1e-10);
        assert!((var - 0.5).abs() < 1e-10);
    }

    #[test]
    fn ladder_matrices_for_one_photon() {
        let (x, p) = ladder_operators(2).unwrap();
        let s = 1.0 / SQRT_2;
        assert!((x.elements()[(0, 1)] - C64::new(s, 0.0)).norm() < 1e-15);
        assert!((x.elements()[(1, 0)] - C64::new(s, 0.0)).norm() < 1e-15);
        assert!(x.elements()[(0, 0)].norm() == 0.0);
        assert!((p.elements()[(0, 1)] - C64::new(0.0, -s)).norm() < 1e-15);
        assert!((p.elements()[(1, 0)] - C64::new(0.0, s)).norm() < 1e-15);
        assert!(ladder_operators(1).is_err());
    }

    #[test]
    fn canonical_commutator_away_from_truncation_edge() {
        for dim in [2, 5, 16, 32] {
            let (x, p) = ladder_operators(dim).unwrap();
            let comm = x.elements() * p.elements() - p.elements() * x.elements();
            for k in 0..dim - 1 {
                for l in 0..dim - 1 {
                    let expect = if k == l {
                        C64::new(0.0, 1.0)
                    } else {
                        C64::new(0.0, 0.0)
                    };
                    assert!((comm[(k, l)] - expect).norm() < 1e-12);
                }
            }
            assert_eq!(x.elements().transpose(), *x.elements());
            assert_eq!(p.elements().adjoint(), *p.elements());
        }
    }

    #[test]
    fn projector_examples() {
        let rho = FockDensityMatrix::fock(0, 3).unwrap();
        assert_eq!(rho.elements()[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(linalg::trace(rho.elements()), C64::new(1.0, 0.0));

        let s = 1.0 / SQRT_2;
        let rho = density_from_fock_coefficients(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!((rho.elements()[(r, c)].re - 0.5).abs() < 1e-15);
            }
        }
        assert!(matches!(
            density_from_fock_coefficients(&[C64::new(0.9, 0.0)]),
            Err(TomoError::Normalization { .. })
        ));
    }

    #[test]
    fn truncated_coherent_state_keeps_unit_trace() {
        let alpha = C64::new(0.5, 0.0);
        let c = coherent_fock_coefficients(alpha, 16);
        let loss: f64 = 1.0 - c.iter().map(|z| z.norm_sqr()).sum::<f64>();
        // Poissonian tail sum_{n>=16} e^{-|a|^2} |a|^{2n}/n!.
        let mut tail = 0.0;
        let mut term = (-0.25f64).exp();
        for n in 1..60 {
            term *= 0.25 / n as f64;
            if n >= 16 {
                tail += term;
            }
        }
        assert!((loss - tail).abs() < 1e-15);
        let rho = FockDensityMatrix::coherent(alpha, 16).unwrap();
        assert!((linalg::trace(rho.elements()).re - 1.0).abs() < 1e-6);
    }

    #[test]
    fn grid_projection_recovers_coherent_amplitudes() {
        let alpha = C64::new(0.5, -0.3);
        let psi = coherent_wavefunction(alpha, PositionGrid::default()).unwrap();
        let rho = density_from_wavefunction(&psi, 16).unwrap();
        let direct = FockDensityMatrix::coherent(alpha, 16).unwrap();
        assert!(linalg::max_abs(&(rho.elements() - direct.elements())) < 1e-10);
    }

    #[test]
    fn validation_examples() {
        let ok = validate_state(&CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ])))
        .unwrap();
        assert!(ok.passed);

        let bad_trace = validate_state(&CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(0.5, 0.0),
            C64::new(0.6, 0.0),
        ])))
        .unwrap();
        assert!(!bad_trace.passed);
        assert!((bad_trace.trace_defect - 0.1).abs() < 1e-12);

        let negative = validate_state(&CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(1.1, 0.0),
            C64::new(-0.1, 0.0),
        ])))
        .unwrap();
        assert!(!negative.passed);
        assert!((negative.min_eigenvalue + 0.1).abs() < 1e-12);
        assert!(negative.trace_defect < 1e-12);
    }

    #[test]
    fn squeeze_rotation_frames() {
        let f = SymplecticFrame::from_squeeze_rotation(0.0, 0.0);
        assert_eq!((f.mu(), f.nu()), (1.0, 0.0));
        let f = SymplecticFrame::from_squeeze_rotation(0.0, PI / 2.0);
        assert!(f.mu().abs() < 1e-16 && (f.nu() - 1.0).abs() < 1e-16);
        let f = SymplecticFrame::from_squeeze_rotation(2f64.ln(), PI / 4.0);
        assert!((f.mu() - SQRT_2).abs() < 1e-15);
        assert!((f.nu() - SQRT_2 / 4.0).abs() < 1e-15);
        assert!(SymplecticFrame::new(0.0, 0.0).is_err());
    }

    #[test]
    fn kernel_from_fock_matches_wavefunction_kernel() {
        let g = grid(8.0, 161);
        let rho = FockDensityMatrix::fock(2, 8).unwrap();
        let k1 = PositionKernel::from_fock(&rho, g);
        let k2 = PositionKernel::from_wavefunction(&fock_wavefunction(2, g).unwrap());
        assert!(linalg::max_abs(&(k1.values() - k2.values())) < 1e-9);
    }
}
