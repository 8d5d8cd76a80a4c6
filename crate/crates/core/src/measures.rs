//! Quantum probability measures on the real line, represented by their
//! distribution functions `F(X) = M((-inf, X])`.
//!
//! A measure comes either from a spectral decomposition (a finite set of
//! atoms, exact) or from integrating a tomogram (a smooth sampled function).
//! Signed measures arise when the state is replaced by a general Hermitian
//! operator.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::ctomo::Tomogram;
use crate::error::{Result, TomoError};
use crate::linalg::{self, CMatrix, HermitianEigen, C64, I};
use crate::quad;
use crate::special::{erf, hermite_polynomials, ln_factorial};
use crate::states::{DensityOperator, Observable, PositionGrid, SymplecticFrame};

/// Eigenvalues closer than this are merged into one projector.
pub const DEGENERACY_GAP: f64 = 1e-10;
/// Largest number level accepted by [`oracle_cdf_fock`].
pub const MAX_ORACLE_LEVEL: usize = 10;

const NORMALIZATION_TOL: f64 = 1e-6;
const PROJECTOR_TOL: f64 = 1e-10;

/// Distribution function sampled on a uniform axis, optionally backed by
/// exact atoms `(location, mass)`.
#[derive(Debug, Clone, Serialize)]
pub struct QuantumMeasureCDF {
    frame: Option<SymplecticFrame>,
    x_axis: PositionGrid,
    values: Vec<f64>,
    atoms: Option<Vec<(f64, f64)>>,
}

impl QuantumMeasureCDF {
    /// Smooth distribution function from samples.
    pub fn from_samples(
        frame: Option<SymplecticFrame>,
        x_axis: PositionGrid,
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.len() != x_axis.len() {
            return Err(TomoError::DimensionMismatch {
                expected: x_axis.len(),
                found: values.len(),
            });
        }
        Ok(QuantumMeasureCDF {
            frame,
            x_axis,
            values,
            atoms: None,
        })
    }

    /// Right-continuous step function `F(X) = sum_{x_k <= X} m_k`.
    pub fn from_atoms(
        frame: Option<SymplecticFrame>,
        x_axis: PositionGrid,
        mut atoms: Vec<(f64, f64)>,
    ) -> Self {
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let values = x_axis
            .points()
            .into_iter()
            .map(|x| step_value(&atoms, x))
            .collect();
        QuantumMeasureCDF {
            frame,
            x_axis,
            values,
            atoms: Some(atoms),
        }
    }

    pub fn frame(&self) -> Option<&SymplecticFrame> {
        self.frame.as_ref()
    }

    pub fn x_axis(&self) -> &PositionGrid {
        &self.x_axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn atoms(&self) -> Option<&[(f64, f64)]> {
        self.atoms.as_deref()
    }

    /// Total mass: exact for atoms, last sample otherwise.
    pub fn total(&self) -> f64 {
        match &self.atoms {
            Some(a) => quad::pairwise_sum(&a.iter().map(|x| x.1).collect::<Vec<_>>()),
            None => self.values[self.values.len() - 1],
        }
    }

    /// `F(X)`: exact for atoms; for sampled functions, 4-point interpolation
    /// inside the axis and the end values outside it.
    pub fn eval(&self, x: f64) -> f64 {
        if let Some(a) = &self.atoms {
            return step_value(a, x);
        }
        if x <= self.x_axis.x_min() {
            return self.values[0];
        }
        if x >= self.x_axis.x_max() {
            return self.values[self.values.len() - 1];
        }
        quad::lagrange_uniform(&self.values, self.x_axis.x_min(), self.x_axis.spacing(), x, 4).unwrap_or(0.0)
    }

    /// Mass of a finite union of half-open intervals `(a, b]`; infinite
    /// endpoints are allowed.
    pub fn measure_of(&self, intervals: &[(f64, f64)]) -> f64 {
        intervals
            .iter()
            .map(|&(a, b)| {
                let fb = if b == f64::INFINITY {
                    self.total()
                } else {
                    self.eval(b)
                };
                let fa = if a == f64::NEG_INFINITY { 0.0 } else { self.eval(a) };
                fb - fa
            })
            .sum()
    }

    /// True when no sample drops by more than `tol`.
    pub fn is_monotone(&self, tol: f64) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0] - tol)
    }

    /// Largest downward step between consecutive samples.
    pub fn max_decrease(&self) -> f64 {
        self.values.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max)
    }

    /// Checks the state-measure invariants: non-decreasing to 1e-9, starts
    /// at 0 and ends at 1 within 1e-6.
    pub fn check_probability(&self) -> Result<()> {
        let first = self.values[0];
        let last = self.values[self.values.len() - 1];
        if first > NORMALIZATION_TOL || (last - 1.0).abs() > NORMALIZATION_TOL {
            return Err(TomoError::Normalization {
                norm: last - first,
                tolerance: NORMALIZATION_TOL,
            });
        }
        if !self.is_monotone(1e-9) {
            return Err(TomoError::Consistency(format!(
                "distribution function decreases by {:.3e}",
                self.max_decrease()
            )));
        }
        Ok(())
    }

    /// Integral of `f` against `dF`. Atoms are summed exactly; a sampled
    /// function is treated as piecewise linear and each cell uses the
    /// midpoint value of `f`.
    pub fn stieltjes(&self, f: impl Fn(f64) -> C64) -> C64 {
        if let Some(a) = &self.atoms {
            let terms: Vec<C64> = a.iter().map(|&(x, m)| f(x) * m).collect();
            return quad::pairwise_sum(&terms);
        }
        let pts = self.x_axis.points();
        let terms: Vec<C64> = (0..pts.len() - 1)
            .map(|i| f(0.5 * (pts[i] + pts[i + 1])) * (self.values[i + 1] - self.values[i]))
            .collect();
        quad::pairwise_sum(&terms)
    }

    /// `integral exp(i k X) dF(X)`, exact for atoms and for the piecewise
    /// linear interpolant of a sampled function.
    pub fn characteristic(&self, k: f64) -> C64 {
        if self.atoms.is_some() || k == 0.0 {
            return self.stieltjes(|x| (I * k * x).exp());
        }
        let pts = self.x_axis.points();
        let h = self.x_axis.spacing();
        let terms: Vec<C64> = (0..pts.len() - 1)
            .map(|i| {
                let cell = ((I * k * pts[i + 1]).exp() - (I * k * pts[i]).exp()) / (I * k * h);
                cell * (self.values[i + 1] - self.values[i])
            })
            .collect();
        quad::pairwise_sum(&terms)
    }

    /// Raw moment `integral X^k dF` (exact per cell for the linear interpolant).
    pub fn moment(&self, k: i32) -> f64 {
        if let Some(a) = &self.atoms {
            return a.iter().map(|&(x, m)| x.powi(k) * m).sum();
        }
        let pts = self.x_axis.points();
        let h = self.x_axis.spacing();
        let terms: Vec<f64> = (0..pts.len() - 1)
            .map(|i| {
                let cell = (pts[i + 1].powi(k + 1) - pts[i].powi(k + 1)) / ((k + 1) as f64 * h);
                cell * (self.values[i + 1] - self.values[i])
            })
            .collect();
        quad::pairwise_sum(&terms)
    }

    pub fn mean(&self) -> f64 {
        self.moment(1) / self.total()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.moment(2) / self.total() - m * m
    }

    /// Atomic measure convolved with a Gaussian of width `sigma`:
    /// `F_sigma(X) = sum m_k Phi((X - x_k)/sigma)`.
    pub fn smoothed(&self, sigma: f64) -> Result<QuantumMeasureCDF> {
        let atoms = self
            .atoms
            .as_ref()
            .ok_or_else(|| TomoError::InvalidParameter("only atomic measures can be smoothed".into()))?;
        if sigma.is_nan() || sigma <= 0.0 {
            return Err(TomoError::InvalidParameter(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        let values = self
            .x_axis
            .points()
            .into_iter()
            .map(|x| {
                let t: Vec<f64> = atoms
                    .iter()
                    .map(|&(l, m)| m * 0.5 * (1.0 + erf((x - l) / (SQRT_2 * sigma))))
                    .collect();
                quad::pairwise_sum(&t)
            })
            .collect();
        QuantumMeasureCDF::from_samples(self.frame, self.x_axis, values)
    }

    /// Max-norm distance between the sampled values of two functions on the
    /// same axis.
    pub fn max_abs_diff(&self, other: &QuantumMeasureCDF) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(TomoError::DimensionMismatch {
                expected: self.values.len(),
                found: other.values.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn max_error(&self, reference: impl Fn(f64) -> f64) -> f64 {
        self.x_axis
            .points()
            .into_iter()
            .zip(&self.values)
            .map(|(x, f)| (f - reference(x)).abs())
            .fold(0.0, f64::max)
    }
}

fn step_value(atoms: &[(f64, f64)], x: f64) -> f64 {
    let k = atoms.partition_point(|a| a.0 <= x);
    let masses: Vec<f64> = atoms[..k].iter().map(|a| a.1).collect();
    quad::pairwise_sum(&masses)
}

/// Projector-valued measure of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralMeasure {
    pub eigenvalues: Vec<f64>,
    pub projectors: Vec<CMatrix>,
}

impl SpectralMeasure {
    pub fn dim(&self) -> usize {
        self.projectors.first().map_or(0, |p| p.nrows())
    }

    /// Masses `Tr(a P_k)`; real parts of the traces, which are real for
    /// Hermitian `a`.
    pub fn weights(&self, a: &CMatrix) -> Result<Vec<f64>> {
        if a.nrows() != self.dim() || a.ncols() != self.dim() {
            return Err(TomoError::DimensionMismatch {
                expected: self.dim(),
                found: a.nrows(),
            });
        }
        Ok(self
            .projectors
            .iter()
            .map(|p| linalg::trace_of_product(a, p).re)
            .collect())
    }

    /// Worst violation of idempotency, mutual orthogonality and completeness.
    pub fn defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        let mut sum = CMatrix::zeros(n, n);
        for (k, p) in self.projectors.iter().enumerate() {
            worst = worst.max(linalg::max_abs(&(p * p - p)));
            for q in &self.projectors[k + 1..] {
                worst = worst.max(linalg::max_abs(&(p * q)));
            }
            sum += p;
        }
        worst.max(linalg::max_abs(&(sum - CMatrix::identity(n, n))))
    }

    pub fn check(&self) -> Result<()> {
        let d = self.defect();
        if d > PROJECTOR_TOL {
            return Err(TomoError::Consistency(format!(
                "spectral projectors violate orthogonality/completeness by {d:.3e}"
            )));
        }
        Ok(())
    }
}

/// Spectral decomposition with eigenvalues closer than [`DEGENERACY_GAP`]
/// merged into a single projector.
pub fn spectral_measure(a: &Observable) -> SpectralMeasure {
    spectral_measure_of_eigen(&HermitianEigen::new(a.elements()))
}

pub(crate) fn spectral_measure_of_eigen(eig: &HermitianEigen) -> SpectralMeasure {
    let n = eig.dim();
    let mut eigenvalues = Vec::new();
    let mut projectors: Vec<CMatrix> = Vec::new();
    let mut k = 0;
    while k < n {
        let mut end = k + 1;
        while end < n && eig.values[end] - eig.values[end - 1] < DEGENERACY_GAP {
            end += 1;
        }
        let block = eig.vectors.columns(k, end - k);
        projectors.push(block * block.adjoint());
        let group = &eig.values[k..end];
        eigenvalues.push(group.iter().sum::<f64>() / group.len() as f64);
        k = end;
    }
    SpectralMeasure {
        eigenvalues,
        projectors,
    }
}

/// `F(X) = sum_{lambda_k <= X} Tr(rho P_k)` for the spectral measure of `a`.
pub fn measure_from_observable<R: DensityOperator + ?Sized>(
    rho: &R,
    a: &Observable,
    x_axis: PositionGrid,
) -> Result<QuantumMeasureCDF> {
    let sm = spectral_measure(a);
    let masses = sm.weights(rho.matrix())?;
    let atoms = sm.eigenvalues.into_iter().zip(masses).collect();
    Ok(QuantumMeasureCDF::from_atoms(None, x_axis, atoms))
}

/// Quantum measure of `a` attached to the quadrature `mu x + nu p`.
pub fn measure_of_quadrature<R: DensityOperator + ?Sized>(
    rho: &R,
    frame: &SymplecticFrame,
    x_axis: PositionGrid,
) -> Result<QuantumMeasureCDF> {
    let dim = rho.matrix().nrows();
    let mut m = measure_from_observable(rho, &Observable::quadrature(frame, dim)?, x_axis)?;
    m.frame = Some(*frame);
    Ok(m)
}

/// Running integral of a tomogram. The tomogram must integrate to 1
/// within 1e-6 over its axis.
pub fn cdf_from_tomogram(tomo: &Tomogram) -> Result<QuantumMeasureCDF> {
    let norm = tomo.normalization();
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(TomoError::Normalization {
            norm,
            tolerance: NORMALIZATION_TOL,
        });
    }
    let values = quad::cumulative_trapezoid(tomo.values(), tomo.x_axis().spacing());
    QuantumMeasureCDF::from_samples(Some(*tomo.frame()), *tomo.x_axis(), values)
}

/// Finite-difference density `dF/dX` of a smooth distribution function.
pub fn derivative_is_tomogram(cdf: &QuantumMeasureCDF) -> Result<Tomogram> {
    if cdf.atoms.is_some() {
        return Err(TomoError::StepFunction);
    }
    let frame = cdf
        .frame
        .ok_or_else(|| TomoError::InvalidParameter("distribution function carries no frame".into()))?;
    let d = quad::derivative(&cdf.values, cdf.x_axis.spacing());
    Tomogram::new(frame, cdf.x_axis, d)
}

/// `F(X) = (1/n!) d^n/dalpha^n d^n/dbeta^n [ e^{alpha beta} (1 + erf(x - (alpha+beta)/sqrt2)) / 2 ]`
/// at `alpha = beta = 0`, with `x = X / sqrt(mu^2 + nu^2)`.
///
/// Both factors are expanded as truncated bivariate Taylor series and the
/// `alpha^n beta^n` coefficient of their product is extracted.
pub fn oracle_cdf_fock(n: usize, x: f64, frame: &SymplecticFrame) -> Result<f64> {
    if n > MAX_ORACLE_LEVEL {
        return Err(TomoError::UnsupportedOrder {
            order: n,
            max: MAX_ORACLE_LEVEL,
        });
    }
    let s = x / frame.norm();
    let herm = hermite_polynomials(2 * n, s);
    let gauss = (-s * s).exp();
    // k-th derivative of erf at s.
    let erf_derivative = |k: usize| -> f64 {
        if k == 0 {
            erf(s)
        } else {
            let sign = if (k - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
            2.0 / PI.sqrt() * sign * herm[k - 1] * gauss
        }
    };
    // Coefficient of alpha^i beta^i in (1 + erf(s - (alpha + beta)/sqrt2))/2.
    let erf_coeff = |i: usize| -> f64 {
        let m = 2 * i;
        let base = 0.5 * erf_derivative(m) / ln_factorial(m).exp() * 2f64.powi(-(i as i32)) * binomial(m, i);
        if m == 0 {
            0.5 + base
        } else {
            base
        }
    };
    // e^{alpha beta} contributes (alpha beta)^k / k!, so only diagonal terms survive.
    let coeff: f64 = (0..=n).map(|k| erf_coeff(n - k) / ln_factorial(k).exp()).sum();
    Ok(ln_factorial(n).exp() * coeff)
}

fn binomial(m: usize, k: usize) -> f64 {
    (ln_factorial(m) - ln_factorial(k) - ln_factorial(m - k))
        .exp()
        .round()
}

/// `F(X) = pi^-1/2 integral_{-inf}^X e^{-x^2} dx = (1 + erf X)/2`.
pub fn vacuum_position_measure(x_axis: PositionGrid) -> QuantumMeasureCDF {
    let values = x_axis
        .points()
        .into_iter()
        .map(|x| 0.5 * (1.0 + erf(x)))
        .collect();
    QuantumMeasureCDF {
        frame: Some(SymplecticFrame::new(1.0, 0.0).expect("unit frame")),
        x_axis,
        values,
        atoms: None,
    }
}

/// `F(X) = Tr(a M((-inf, X]))` with `M` the spectral measure of
/// `mu x + nu p` in the basis of `a`. The result is signed in general.
pub fn signed_measure_of_observable(
    a: &Observable,
    frame: &SymplecticFrame,
    x_axis: PositionGrid,
) -> Result<QuantumMeasureCDF> {
    let q = Observable::quadrature(frame, a.dim())?;
    let sm = spectral_measure(&q);
    let masses = sm.weights(a.elements())?;
    let atoms = sm.eigenvalues.into_iter().zip(masses).collect();
    Ok(QuantumMeasureCDF::from_atoms(Some(*frame), x_axis, atoms))
}

/// Eigen-decomposition of the truncated `mu x + nu p` obtained without
/// diagonalizing it: with `phi = atan2(nu, mu)` and `r = |(mu, nu)|`, the
/// eigenvectors are `exp(i phi n) v_k` and the eigenvalues `r x_k`, where
/// `(x_k, v_k)` diagonalize the truncated position matrix.
pub fn quadrature_eigen_by_rotation(frame: &SymplecticFrame, dim: usize) -> Result<HermitianEigen> {
    let (x, _) = crate::states::ladder_operators(dim)?;
    let base = HermitianEigen::new(x.elements());
    let phi = frame.nu().atan2(frame.mu());
    let r = frame.norm();
    let mut vectors = base.vectors.clone();
    for n in 0..dim {
        let phase = (I * phi * n as f64).exp();
        for k in 0..dim {
            vectors[(n, k)] *= phase;
        }
    }
    Ok(HermitianEigen {
        values: base.values.iter().map(|v| r * v).collect(),
        vectors,
    })
}

/// [`signed_measure_of_observable`] computed through
/// [`quadrature_eigen_by_rotation`].
pub fn signed_measure_by_rotation(
    a: &Observable,
    frame: &SymplecticFrame,
    x_axis: PositionGrid,
) -> Result<QuantumMeasureCDF> {
    let eig = quadrature_eigen_by_rotation(frame, a.dim())?;
    let atoms = eig
        .values
        .iter()
        .zip(eig.diagonal_of(a.elements()))
        .map(|(l, m)| (*l, m.re))
        .collect();
    Ok(QuantumMeasureCDF::from_atoms(Some(*frame), x_axis, atoms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctomo::oracle_tomogram_fock;
    use crate::states::FockDensityMatrix;
    use nalgebra::DVector;

    fn diag(v: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_iterator(
            v.len(),
            v.iter().map(|x| C64::new(*x, 0.0)),
        ))
    }

    fn frame(mu: f64, nu: f64) -> SymplecticFrame {
        SymplecticFrame::new(mu, nu).unwrap()
    }

    #[test]
    fn spectral_examples() {
        let sm = spectral_measure(&Observable::new(diag(&[1.0, 2.0])).unwrap());
        assert_eq!(sm.eigenvalues, vec![1.0, 2.0]);
        assert!(linalg::max_abs(&(&sm.projectors[0] - diag(&[1.0, 0.0]))) < 1e-15);
        assert!(linalg::max_abs(&(&sm.projectors[1] - diag(&[0.0, 1.0]))) < 1e-15);

        let sm = spectral_measure(&Observable::identity(4));
        assert_eq!(sm.eigenvalues.len(), 1);
        assert!((sm.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!(linalg::max_abs(&(&sm.projectors[0] - CMatrix::identity(4, 4))) < 1e-14);

        let jz = Observable::new(diag(&[-0.5, 0.5])).unwrap();
        assert_eq!(spectral_measure(&jz).eigenvalues, vec![-0.5, 0.5]);

        let (x, _) = crate::states::ladder_operators(12).unwrap();
        spectral_measure(&x).check().unwrap();
        assert!(matches!(
            Observable::new(CMatrix::from_fn(2, 2, |r, c| C64::new((r + 2 * c) as f64, 0.0))),
            Err(TomoError::NotHermitian { .. })
        ));
    }

    #[test]
    fn identity_observable_jumps_at_one() {
        let rho = FockDensityMatrix::fock(1, 3).unwrap();
        let axis = PositionGrid::new(0.0, 2.0, 5).unwrap();
        let m = measure_from_observable(&rho, &Observable::identity(3), axis).unwrap();
        assert_eq!(m.values(), &[0.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!(m.eval(1.0), 1.0);
        assert_eq!(m.eval(1.0 - 1e-12), 0.0);
        assert!(derivative_is_tomogram(&m).is_err());
    }

    #[test]
    fn fock_oracle_closed_forms() {
        let f = frame(1.0, 0.0);
        for x in [-2.0, -0.3, 0.0, 1.1] {
            let v0 = oracle_cdf_fock(0, x, &f).unwrap();
            assert!((v0 - 0.5 * (1.0 + erf(x))).abs() < 1e-15);
            let v1 = oracle_cdf_fock(1, x, &f).unwrap();
            let expect = 0.5 * (1.0 + erf(x)) - x * (-x * x).exp() / PI.sqrt();
            assert!((v1 - expect).abs() < 1e-14);
        }
        for n in 0..=10 {
            assert!((oracle_cdf_fock(n, 40.0, &f).unwrap() - 1.0).abs() < 1e-12);
            assert!((oracle_cdf_fock(n, 0.0, &f).unwrap() - 0.5).abs() < 1e-12);
        }
        assert!(oracle_cdf_fock(11, 0.0, &f).is_err());
    }

    #[test]
    fn fock_oracle_is_a_distribution_with_the_right_density() {
        let f = frame(0.6, 0.8);
        for n in 0..=10 {
            let mut prev = -1.0;
            for i in 0..=400 {
                let x = -8.0 + 0.04 * i as f64;
                let v = oracle_cdf_fock(n, x, &f).unwrap();
                assert!(
                    v >= prev - 1e-12 && (-1e-12..=1.0 + 1e-12).contains(&v),
                    "n={n} x={x}"
                );
                prev = v;
            }
            let h = 1e-4;
            for i in 0..20 {
                let x = -3.8 + 0.4 * i as f64;
                let d = (oracle_cdf_fock(n, x + h, &f).unwrap() - oracle_cdf_fock(n, x - h, &f).unwrap())
                    / (2.0 * h);
                assert!((d - oracle_tomogram_fock(n, x, &f)).abs() < 1e-6, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn vacuum_measure_moments() {
        let m = vacuum_position_measure(PositionGrid::symmetric(8.0, 16001).unwrap());
        assert_eq!(m.eval(0.0), 0.5);
        assert!(m.mean().abs() < 1e-12);
        assert!((m.variance() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn constant_distribution_has_zero_density() {
        let axis = PositionGrid::symmetric(3.0, 31).unwrap();
        let c = QuantumMeasureCDF::from_samples(Some(frame(1.0, 0.0)), axis, vec![0.25; 31]).unwrap();
        let t = derivative_is_tomogram(&c).unwrap();
        assert!(t.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn signed_measures() {
        let axis = PositionGrid::symmetric(6.0, 241).unwrap();
        let (x, _) = crate::states::ladder_operators(16).unwrap();
        let m = signed_measure_of_observable(&x, &frame(1.0, 0.0), axis).unwrap();
        assert!(m.total().abs() < 1e-12);

        let mut off = CMatrix::zeros(8, 8);
        off[(0, 1)] = C64::new(1.0, 0.0);
        off[(1, 0)] = C64::new(1.0, 0.0);
        let m = signed_measure_of_observable(&Observable::new(off).unwrap(), &frame(1.0, 0.0), axis).unwrap();
        assert!(!m.is_monotone(1e-9));
        assert!(m.total().abs() < 1e-12);

        let rho = FockDensityMatrix::fock(2, 8).unwrap();
        let f = frame(0.3, 1.2);
        let a = signed_measure_of_observable(&rho.clone().into(), &f, axis).unwrap();
        let b = measure_of_quadrature(&rho, &f, axis).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
        assert!(a.is_monotone(1e-12));
    }

    #[test]
    fn rotation_route_matches_direct_diagonalization() {
        let axis = PositionGrid::symmetric(8.0, 161).unwrap();
        let rho = FockDensityMatrix::coherent(C64::new(0.4, -0.7), 12).unwrap();
        for f in [frame(1.0, 0.0), frame(-0.3, 2.0), frame(0.6, 0.8)] {
            let a = signed_measure_of_observable(&rho.clone().into(), &f, axis).unwrap();
            let b = signed_measure_by_rotation(&rho.clone().into(), &f, axis).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-10);
        }
    }

    #[test]
    fn interval_unions() {
        let m = QuantumMeasureCDF::from_atoms(
            None,
            PositionGrid::symmetric(2.0, 5).unwrap(),
            vec![(-1.0, 0.25), (0.0, 0.5), (1.0, 0.25)],
        );
        assert_eq!(
            m.measure_of(&[(f64::NEG_INFINITY, -1.0), (0.0, f64::INFINITY)]),
            0.5
        );
        assert_eq!(m.measure_of(&[(-1.0, 0.0)]), 0.5);
        assert!((m.characteristic(0.0).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn smoothing_conserves_mass() {
        let m = QuantumMeasureCDF::from_atoms(
            None,
            PositionGrid::symmetric(6.0, 601).unwrap(),
            vec![(-1.0, 0.3), (0.5, 0.7)],
        );
        let s = m.smoothed(0.2).unwrap();
        assert!((s.values()[600] - 1.0).abs() < 1e-12);
        assert!((s.eval(0.5) - (0.3 + 0.35)).abs() < 1e-9);
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::ctomo::{oracle_tomogram_coherent, Tomogram};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn tomogram_distribution_functions_are_monotone(
            re in -1.5f64..1.5, im in -1.5f64..1.5, phi in 0.0f64..std::f64::consts::TAU, lam in -0.5f64..0.5,
        ) {
            let f = SymplecticFrame::from_squeeze_rotation(lam, phi);
            let axis = PositionGrid::symmetric(14.0, 1401).unwrap();
            let t = Tomogram::from_fn(f, axis, |x| oracle_tomogram_coherent(C64::new(re, im), x, &f));
            let c = cdf_from_tomogram(&t).unwrap();
            prop_assert!(c.check_probability().is_ok());
        }
    }
}
