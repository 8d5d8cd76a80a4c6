//! Tomographic quantizer/dequantizer pair, operator reconstruction from
//! symbols and from measure families, and the star product of symplectic
//! quantum measures.
//!
//! The dequantizer is `delta(X - mu x - nu p)` and the quantizer
//! `D(X, mu, nu) = exp(iX) exp(-i(mu x + nu p)) / 2pi`. Delta functions are
//! regularized by a Gaussian of width `sigma`; reconstruction divides out
//! the resulting `exp(-sigma^2/2)` factor exactly.
//!
//! Reconstruction and the measure star product evaluate quadratures of
//! truncated exponentials. To keep the number-basis block of interest
//! accurate these are computed in a larger working dimension
//! (`max(5N, 80)` by default) and compressed back to `N x N`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, TomoError};
use crate::linalg::{self, CMatrix, HermitianEigen, C64, I};
use crate::measures::{signed_measure_of_observable, QuantumMeasureCDF};
use crate::quad;
use crate::states::{ladder_operators, Observable, PositionGrid, SymplecticFrame};

/// Largest number of target points per star-product evaluation.
pub const MAX_STAR_TARGETS: usize = 10;
/// Largest number of frames per family in the star-product quadrature.
pub const MAX_STAR_FRAMES: usize = 21 * 21;

const SIGMA_FLOOR: f64 = 0.05;
const RECONSTRUCT_HERMITIAN_TOL: f64 = 1e-8;
/// A star product of non-commuting observables has a complex measure,
/// which the real CDF type cannot hold.
const STAR_IMAGINARY_TOL: f64 = 1e-3;

/// `(X, mu, nu)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub x: f64,
    pub mu: f64,
    pub nu: f64,
}

impl PhasePoint {
    pub fn new(x: f64, mu: f64, nu: f64) -> Self {
        PhasePoint { x, mu, nu }
    }

    fn frame(&self) -> Result<SymplecticFrame> {
        SymplecticFrame::new(self.mu, self.nu)
    }
}

/// Default working dimension for a target truncation `n`.
pub fn working_dim(n: usize) -> usize {
    (5 * n).max(80)
}

/// Gaussian regularization of the delta function.
pub fn gaussian_delta(x: f64, sigma: f64) -> f64 {
    (-0.5 * (x / sigma).powi(2)).exp() / (sigma * (2.0 * PI).sqrt())
}

/// Width used for a symbol slice with X spacing `dx`.
pub fn default_sigma(dx: f64) -> f64 {
    (2.0 * dx).max(SIGMA_FLOOR)
}

/// Spectral data of the truncated position matrix, reused for every frame:
/// `mu x + nu p = r R(phi) x R(phi)^dagger` with `R(phi) = exp(i phi n)`.
#[derive(Debug, Clone)]
struct QuadratureBasis {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl QuadratureBasis {
    fn new(dim: usize) -> Result<Self> {
        let (x, _) = ladder_operators(dim)?;
        let eig = HermitianEigen::new(x.elements());
        // The position matrix is real symmetric, so its eigenvectors can be
        // chosen real; strip the arbitrary phase of each column.
        let vectors = DMatrix::from_fn(dim, dim, |r, c| {
            let pivot = (0..dim)
                .max_by(|&a, &b| eig.vectors[(a, c)].norm().total_cmp(&eig.vectors[(b, c)].norm()))
                .unwrap_or(0);
            let phase = eig.vectors[(pivot, c)] / eig.vectors[(pivot, c)].norm();
            (eig.vectors[(r, c)] / phase).re
        });
        Ok(QuadratureBasis {
            values: eig.values,
            vectors,
        })
    }

    fn dim(&self) -> usize {
        self.values.len()
    }

    /// Atoms `(lambda_k, <v_k|a|v_k>)` for an operator living in the
    /// leading block.
    fn atoms(&self, a: &CMatrix, frame: &SymplecticFrame) -> Vec<(f64, f64)> {
        let n = a.nrows();
        let phi = frame.nu().atan2(frame.mu());
        let r = frame.norm();
        let phases: Vec<C64> = (0..n).map(|k| (I * phi * k as f64).exp()).collect();
        let rotated = CMatrix::from_fn(n, n, |i, j| phases[i].conj() * a[(i, j)] * phases[j]);
        (0..self.dim())
            .map(|k| {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..n {
                    let bi = self.vectors[(i, k)];
                    if bi == 0.0 {
                        continue;
                    }
                    let mut row = C64::new(0.0, 0.0);
                    for j in 0..n {
                        row += rotated[(i, j)] * self.vectors[(j, k)];
                    }
                    acc += row * bi;
                }
                (r * self.values[k], acc.re)
            })
            .collect()
    }

    /// Leading `n x n` block of `exp(-i(mu x + nu p))`.
    fn exp_block(&self, frame: &SymplecticFrame, n: usize) -> CMatrix {
        let phi = frame.nu().atan2(frame.mu());
        let r = frame.norm();
        let e: Vec<C64> = self.values.iter().map(|l| (-I * r * l).exp()).collect();
        CMatrix::from_fn(n, n, |a, b| {
            let mut acc = C64::new(0.0, 0.0);
            for (k, ek) in e.iter().enumerate() {
                acc += ek * (self.vectors[(a, k)] * self.vectors[(b, k)]);
            }
            acc * (I * phi * (a as f64 - b as f64)).exp()
        })
    }
}

/// Layout of a symbol grid or measure family: a symmetric `(mu, nu)` box
/// with an even node count, and per frame an X axis `[-w r, w r]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymbolLayout {
    pub mu_axis: PositionGrid,
    pub nu_axis: PositionGrid,
    /// X half width in units of `r = |(mu, nu)|`.
    pub half_width: f64,
    pub x_points: usize,
    /// Dimension used for exponentials and spectral measures; `None` picks
    /// [`working_dim`].
    pub working_dim: Option<usize>,
    /// Relative edge-decay tolerance for reconstruction.
    pub decay_tol: f64,
}

impl SymbolLayout {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if n % 2 == 1 {
            return Err(TomoError::InvalidGrid(format!(
                "frame grid needs an even node count to skip (0, 0), got {n}"
            )));
        }
        let axis = PositionGrid::symmetric(l, n)?;
        Ok(SymbolLayout {
            mu_axis: axis,
            nu_axis: axis,
            half_width: 7.0,
            x_points: 401,
            working_dim: None,
            decay_tol: 1e-8,
        })
    }

    /// Coarse layout for the star-product quadrature: `[-7, 7]^2`, 20 nodes
    /// per side, relaxed decay tolerance.
    pub fn coarse() -> Self {
        let mut l = SymbolLayout::new(7.0, 20).expect("coarse layout is valid");
        l.decay_tol = 1e-4;
        l
    }

    pub fn with_working_dim(mut self, m: usize) -> Self {
        self.working_dim = Some(m);
        self
    }

    pub fn with_decay_tol(mut self, tol: f64) -> Self {
        self.decay_tol = tol;
        self
    }

    pub fn with_x_axis(mut self, half_width: f64, x_points: usize) -> Self {
        self.half_width = half_width;
        self.x_points = x_points;
        self
    }

    pub fn n_frames(&self) -> usize {
        self.mu_axis.len() * self.nu_axis.len()
    }

    pub fn frames(&self) -> Result<Vec<SymplecticFrame>> {
        let mut out = Vec::with_capacity(self.n_frames());
        for mu in self.mu_axis.points() {
            for nu in self.nu_axis.points() {
                out.push(SymplecticFrame::new(mu, nu)?);
            }
        }
        Ok(out)
    }

    pub fn x_axis(&self, frame: &SymplecticFrame) -> Result<PositionGrid> {
        PositionGrid::symmetric(self.half_width * frame.norm(), self.x_points)
    }

    fn resolved_dim(&self, n: usize) -> usize {
        self.working_dim.unwrap_or_else(|| working_dim(n)).max(n)
    }

    /// Trapezoid weight of frame `idx` in the `(mu, nu)` quadrature.
    fn frame_weights(&self) -> Vec<f64> {
        let wm = quad::trapezoid_weights(self.mu_axis.len(), self.mu_axis.spacing());
        let wn = quad::trapezoid_weights(self.nu_axis.len(), self.nu_axis.spacing());
        let mut out = Vec::with_capacity(self.n_frames());
        for a in &wm {
            for b in &wn {
                out.push(a * b);
            }
        }
        out
    }

    fn boundary(&self, idx: usize) -> bool {
        let nn = self.nu_axis.len();
        let (i, j) = (idx / nn, idx % nn);
        i == 0 || j == 0 || i + 1 == self.mu_axis.len() || j + 1 == nn
    }
}

impl Default for SymbolLayout {
    /// `[-10, 10]^2` with 44 nodes per side.
    fn default() -> Self {
        SymbolLayout::new(10.0, 44).expect("default layout is valid")
    }
}

/// Symbol `f(X, mu, nu)` sampled frame by frame. Frame `idx` has its own X
/// axis and regularization width.
#[derive(Debug, Clone)]
pub struct SymbolGrid {
    layout: SymbolLayout,
    dim: usize,
    x_axes: Vec<PositionGrid>,
    sigmas: Vec<f64>,
    values: Vec<Vec<C64>>,
}

impl SymbolGrid {
    pub fn zeros(layout: SymbolLayout, dim: usize) -> Result<Self> {
        let frames = layout.frames()?;
        let x_axes: Vec<PositionGrid> = frames.iter().map(|f| layout.x_axis(f)).collect::<Result<_>>()?;
        let sigmas = x_axes.iter().map(|a| default_sigma(a.spacing())).collect();
        let values = x_axes.iter().map(|a| vec![C64::new(0.0, 0.0); a.len()]).collect();
        Ok(SymbolGrid {
            layout,
            dim,
            x_axes,
            sigmas,
            values,
        })
    }

    pub fn layout(&self) -> &SymbolLayout {
        &self.layout
    }

    /// Truncation dimension of the operator the symbol represents.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_frames(&self) -> usize {
        self.values.len()
    }

    pub fn frame(&self, idx: usize) -> SymplecticFrame {
        let nn = self.layout.nu_axis.len();
        SymplecticFrame::new(
            self.layout.mu_axis.point(idx / nn),
            self.layout.nu_axis.point(idx % nn),
        )
        .expect("layout excludes the origin")
    }

    pub fn x_axis(&self, idx: usize) -> &PositionGrid {
        &self.x_axes[idx]
    }

    pub fn sigma(&self, idx: usize) -> f64 {
        self.sigmas[idx]
    }

    pub fn slice(&self, idx: usize) -> &[C64] {
        &self.values[idx]
    }

    /// Largest imaginary part relative to the largest modulus.
    pub fn imaginary_residue(&self) -> f64 {
        let mut im: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for v in self.values.iter().flatten() {
            im = im.max(v.im.abs());
            peak = peak.max(v.norm());
        }
        if peak == 0.0 {
            0.0
        } else {
            im / peak
        }
    }

    /// `self * s + other * t` on the same layout.
    pub fn combine(&self, s: C64, other: &SymbolGrid, t: C64) -> Result<SymbolGrid> {
        if self.layout != other.layout || self.dim != other.dim {
            return Err(TomoError::InvalidGrid(
                "symbol grids use different layouts".into(),
            ));
        }
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&other.values) {
            for (x, y) in a.iter_mut().zip(b) {
                *x = *x * s + y * t;
            }
        }
        Ok(out)
    }

    /// `integral f(X) exp(iX) dX` per frame, with the Gaussian
    /// regularization factor divided out.
    fn characteristic(&self) -> Vec<C64> {
        self.values
            .par_iter()
            .zip(&self.x_axes)
            .zip(&self.sigmas)
            .map(|((vals, axis), sigma)| {
                let w = quad::trapezoid_weights(axis.len(), axis.spacing());
                let terms: Vec<C64> = axis
                    .points()
                    .into_iter()
                    .zip(vals)
                    .zip(w)
                    .map(|((x, v), wt)| v * (I * x).exp() * wt)
                    .collect();
                quad::pairwise_sum(&terms) * (0.5 * sigma * sigma).exp()
            })
            .collect()
    }

    fn check_decay(&self, chi: &[C64]) -> Result<()> {
        let mut peak_x: f64 = 0.0;
        let mut edge_x: f64 = 0.0;
        for v in &self.values {
            for z in v {
                peak_x = peak_x.max(z.norm());
            }
            edge_x = edge_x.max(v[0].norm()).max(v[v.len() - 1].norm());
        }
        let tol = self.layout.decay_tol;
        if peak_x > 0.0 && edge_x > tol * peak_x {
            return Err(TomoError::InsufficientDecay {
                edge: edge_x / peak_x,
                tolerance: tol,
            });
        }
        check_frame_decay(&self.layout, chi)
    }

    /// CSV rows `X,mu,nu,re,im`.
    pub fn rows(&self) -> Vec<[f64; 5]> {
        let mut out = Vec::new();
        for idx in 0..self.n_frames() {
            let f = self.frame(idx);
            for (x, v) in self.x_axes[idx].points().into_iter().zip(&self.values[idx]) {
                out.push([x, f.mu(), f.nu(), v.re, v.im]);
            }
        }
        out
    }
}

/// The `(mu, nu)` integrand must be small on the box boundary.
fn check_frame_decay(layout: &SymbolLayout, chi: &[C64]) -> Result<()> {
    let peak = chi.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(());
    }
    let edge = chi
        .iter()
        .enumerate()
        .filter(|(i, _)| layout.boundary(*i))
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    if edge > layout.decay_tol * peak {
        return Err(TomoError::InsufficientDecay {
            edge: edge / peak,
            tolerance: layout.decay_tol,
        });
    }
    Ok(())
}

/// `f(x) = sum_k <k|a|k> delta_sigma(X - lambda_k)` at each point, with
/// `(lambda_k, |k>)` the spectrum of `mu x + nu p` in the basis of `a`.
pub fn dequantize(a: &Observable, points: &[PhasePoint], sigma: f64) -> Result<Vec<f64>> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(TomoError::InvalidParameter(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    points
        .iter()
        .map(|p| {
            let frame = p.frame()?;
            let q = Observable::quadrature(&frame, a.dim())?;
            let eig = HermitianEigen::new(q.elements());
            let diag = eig.diagonal_of(a.elements());
            let terms: Vec<f64> = eig
                .values
                .iter()
                .zip(diag)
                .map(|(l, d)| d.re * gaussian_delta(p.x - l, sigma))
                .collect();
            Ok(quad::pairwise_sum(&terms))
        })
        .collect()
}

/// Dequantizes `a` on every frame of `layout`, using the working dimension
/// for the spectral decomposition. Each frame uses `sigma = max(2 dX, 0.05)`.
pub fn dequantize_grid(a: &Observable, layout: &SymbolLayout) -> Result<SymbolGrid> {
    let n = a.dim();
    let basis = QuadratureBasis::new(layout.resolved_dim(n))?;
    let mut grid = SymbolGrid::zeros(*layout, n)?;
    let frames = layout.frames()?;
    let values: Vec<Vec<C64>> = frames
        .par_iter()
        .enumerate()
        .map(|(idx, f)| {
            let atoms = basis.atoms(a.elements(), f);
            let sigma = grid.sigmas[idx];
            grid.x_axes[idx]
                .points()
                .into_iter()
                .map(|x| {
                    let t: Vec<f64> = atoms
                        .iter()
                        .map(|(l, w)| w * gaussian_delta(x - l, sigma))
                        .collect();
                    C64::new(quad::pairwise_sum(&t), 0.0)
                })
                .collect()
        })
        .collect();
    grid.values = values;
    Ok(grid)
}

/// `D(X, mu, nu) = exp(iX) exp(-i(mu x + nu p)) / 2pi` in the truncated
/// basis of size `dim`.
pub fn quantizer(point: &PhasePoint, dim: usize) -> Result<CMatrix> {
    let (x, p) = ladder_operators(dim)?;
    let q = x.elements().scale(point.mu) + p.elements().scale(point.nu);
    let u = HermitianEigen::new(&q).apply_fn(|l| (-I * l).exp());
    Ok(u * ((I * point.x).exp() / (2.0 * PI)))
}

fn finish_reconstruction(layout: &SymbolLayout, n: usize, chi: &[C64]) -> Result<Observable> {
    let basis = QuadratureBasis::new(layout.resolved_dim(n))?;
    let frames = layout.frames()?;
    let w = layout.frame_weights();
    let terms: Vec<CMatrix> = frames
        .par_iter()
        .enumerate()
        .map(|(idx, f)| {
            if chi[idx] == C64::new(0.0, 0.0) {
                return CMatrix::zeros(n, n);
            }
            basis.exp_block(f, n) * (chi[idx] * w[idx] / (2.0 * PI))
        })
        .collect();
    let sum = pairwise_matrix_sum(&terms, n);
    let defect = linalg::hermiticity_defect(&sum);
    if defect > RECONSTRUCT_HERMITIAN_TOL {
        return Err(TomoError::NotHermitian {
            defect,
            tolerance: RECONSTRUCT_HERMITIAN_TOL,
        });
    }
    Observable::new(linalg::hermitian_part(&sum))
}

fn pairwise_matrix_sum(terms: &[CMatrix], n: usize) -> CMatrix {
    match terms.len() {
        0 => CMatrix::zeros(n, n),
        1 => terms[0].clone(),
        len => {
            let mid = len / 2;
            pairwise_matrix_sum(&terms[..mid], n) + pairwise_matrix_sum(&terms[mid..], n)
        }
    }
}

/// `a = triple integral f(x) D(x) dX dmu dnu`; the X integral is done per
/// frame, then the trapezoid rule over `(mu, nu)`.
pub fn reconstruct_operator(f: &SymbolGrid) -> Result<Observable> {
    let chi = f.characteristic();
    f.check_decay(&chi)?;
    finish_reconstruction(&f.layout, f.dim, &chi)
}

/// Signed measure of `a` for the quadrature `mu x + nu p` (see
/// [`signed_measure_of_observable`]).
pub fn measure_from_operator(
    a: &Observable,
    frame: &SymplecticFrame,
    x_axis: PositionGrid,
) -> Result<QuantumMeasureCDF> {
    signed_measure_of_observable(a, frame, x_axis)
}

/// Measures `M_a(. ; mu, nu)` on every frame of a layout, each stored with
/// its exact atoms.
#[derive(Debug, Clone)]
pub struct MeasureFamily {
    layout: SymbolLayout,
    dim: usize,
    measures: Vec<QuantumMeasureCDF>,
}

impl MeasureFamily {
    pub fn layout(&self) -> &SymbolLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn measures(&self) -> &[QuantumMeasureCDF] {
        &self.measures
    }

    /// `integral exp(iX) dM(X)` per frame.
    fn characteristic(&self) -> Vec<C64> {
        self.measures.par_iter().map(|m| m.characteristic(1.0)).collect()
    }
}

/// Measure family of `a`, with spectral measures taken in the working
/// dimension of the layout.
pub fn measure_family(a: &Observable, layout: &SymbolLayout) -> Result<MeasureFamily> {
    let n = a.dim();
    let basis = QuadratureBasis::new(layout.resolved_dim(n))?;
    let frames = layout.frames()?;
    let measures: Vec<QuantumMeasureCDF> = frames
        .par_iter()
        .map(|f| {
            let atoms = basis.atoms(a.elements(), f);
            Ok(QuantumMeasureCDF::from_atoms(Some(*f), layout.x_axis(f)?, atoms))
        })
        .collect::<Result<_>>()?;
    Ok(MeasureFamily {
        layout: *layout,
        dim: n,
        measures,
    })
}

/// `a = double integral [integral D(X, mu, nu) dM(X)] dmu dnu`: the
/// Stieltjes integral over `X` first, then the `(mu, nu)` quadrature.
pub fn reconstruct_from_measures(family: &MeasureFamily) -> Result<Observable> {
    let chi = family.characteristic();
    check_frame_decay(&family.layout, &chi)?;
    finish_reconstruction(&family.layout, family.dim, &chi)
}

/// Kernel values `K = Tr(D1 D2 delta_sigma(X - mu x - nu p))` and
/// `K~ = Tr(D1 D2 theta(X - mu x - nu p))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarKernel {
    pub k: C64,
    pub k_tilde: C64,
}

pub fn star_product_kernel(
    x1: &PhasePoint,
    x2: &PhasePoint,
    x: &PhasePoint,
    dim: usize,
    sigma: f64,
) -> Result<StarKernel> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(TomoError::InvalidParameter(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let prod = quantizer(x1, dim)? * quantizer(x2, dim)?;
    let (xo, po) = ladder_operators(dim)?;
    let q = xo.elements().scale(x.mu) + po.elements().scale(x.nu);
    let eig = HermitianEigen::new(&q);
    let diag = eig.diagonal_of(&prod);
    let mut k = Vec::with_capacity(dim);
    let mut kt = Vec::with_capacity(dim);
    for (l, d) in eig.values.iter().zip(diag) {
        k.push(d * gaussian_delta(x.x - l, sigma));
        if *l <= x.x {
            kt.push(d);
        }
    }
    Ok(StarKernel {
        k: quad::pairwise_sum(&k),
        k_tilde: quad::pairwise_sum(&kt),
    })
}

/// Star product of two measure families at the target frame and X values:
///
/// `M_{a*b}(X) = integral K~(x1, x2, x) dM_a(X1) dM_b(X2) dmu1 dnu1 dmu2 dnu2`.
///
/// The Stieltjes integrals over `X1`, `X2` are done first (they reduce to
/// characteristic values), then the four-dimensional frame quadrature. The
/// quantizers are compressed from the working dimension to the common
/// truncation `N`; `theta` is the spectral step function of the target
/// quadrature at `N`.
pub fn star_multiply_measures(
    ma: &MeasureFamily,
    mb: &MeasureFamily,
    target: &SymplecticFrame,
    x_axis: PositionGrid,
) -> Result<QuantumMeasureCDF> {
    if ma.layout != mb.layout || ma.dim != mb.dim {
        return Err(TomoError::InvalidGrid(
            "measure families use different layouts".into(),
        ));
    }
    if x_axis.len() > MAX_STAR_TARGETS {
        return Err(TomoError::BudgetExceeded(format!(
            "{} target points requested, at most {MAX_STAR_TARGETS} allowed",
            x_axis.len()
        )));
    }
    let layout = ma.layout;
    if layout.n_frames() > MAX_STAR_FRAMES {
        return Err(TomoError::BudgetExceeded(format!(
            "{} frames per family, at most {MAX_STAR_FRAMES} allowed",
            layout.n_frames()
        )));
    }
    let n = ma.dim;
    let chi_a = ma.characteristic();
    let chi_b = mb.characteristic();
    check_frame_decay(&layout, &chi_a)?;
    check_frame_decay(&layout, &chi_b)?;

    let basis = QuadratureBasis::new(layout.resolved_dim(n))?;
    let frames = layout.frames()?;
    let w = layout.frame_weights();
    let d = 1.0 / (2.0 * PI);
    // c(g) D-block for every frame, weights folded in.
    let blocks: Vec<CMatrix> = frames.par_iter().map(|f| basis.exp_block(f, n)).collect();
    let left: Vec<CMatrix> = (0..frames.len())
        .map(|i| &blocks[i] * (chi_a[i] * w[i] * d))
        .collect();
    let target_eig = HermitianEigen::new(Observable::quadrature(target, n)?.elements());

    let values: Vec<C64> = x_axis
        .points()
        .into_iter()
        .map(|x| {
            let theta = target_eig.apply_fn(|l| C64::new(if l <= x { 1.0 } else { 0.0 }, 0.0));
            let right: Vec<CMatrix> = (0..frames.len())
                .map(|j| &blocks[j] * &theta * (chi_b[j] * w[j] * d))
                .collect();
            let outer: Vec<C64> = left
                .par_iter()
                .map(|l| {
                    let inner: Vec<C64> = right.iter().map(|r| linalg::trace_of_product(l, r)).collect();
                    quad::pairwise_sum(&inner)
                })
                .collect();
            quad::pairwise_sum(&outer)
        })
        .collect();
    let residue = values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > STAR_IMAGINARY_TOL {
        return Err(TomoError::ImaginaryResidue {
            residue,
            tolerance: STAR_IMAGINARY_TOL,
        });
    }
    QuantumMeasureCDF::from_samples(Some(*target), x_axis, values.iter().map(|z| z.re).collect())
}
