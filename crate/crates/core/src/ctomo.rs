//! Continuous-variable tomography: the Wigner function, symplectic
//! tomograms computed from a density kernel, a wavefunction or a Wigner
//! function, the inverse map from a tomogram family back to the Wigner
//! function, and closed forms for number and coherent states.
//!
//! The Wigner function is normalized so that `(1/2pi) * integral W dq dp = 1`.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, TomoError};
use crate::linalg::{self, C64, I};
use crate::quad;
use crate::special::{hermite_functions, hermite_polynomials, ln_factorial};
use crate::states::{FockDensityMatrix, PositionGrid, PositionKernel, SymplecticFrame, Wavefunction};

const KERNEL_HERMITIAN_TOL: f64 = 1e-10;
const WIGNER_IMAG_TOL: f64 = 1e-9;
const TOMOGRAM_IMAG_TOL: f64 = 1e-8;
const INVERSE_IMAG_TOL: f64 = 1e-3;
const FAMILY_EDGE_TOL: f64 = 1e-8;
const WIGNER_EDGE_TOL: f64 = 1e-6;
const WIGNER_INTERP_ORDER: usize = 6;
const DENSITY_INTERP_ORDER: usize = 8;

/// Real quasi-probability `W(q, p)` on a rectangular grid; `values[(i, j)]`
/// belongs to `(q_i, p_j)`.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    q_axis: PositionGrid,
    p_axis: PositionGrid,
    values: DMatrix<f64>,
}

impl WignerGrid {
    pub fn new(q_axis: PositionGrid, p_axis: PositionGrid, values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() != q_axis.len() || values.ncols() != p_axis.len() {
            return Err(TomoError::DimensionMismatch {
                expected: q_axis.len() * p_axis.len(),
                found: values.len(),
            });
        }
        Ok(WignerGrid {
            q_axis,
            p_axis,
            values,
        })
    }

    pub fn q_axis(&self) -> &PositionGrid {
        &self.q_axis
    }

    pub fn p_axis(&self) -> &PositionGrid {
        &self.p_axis
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    /// `(1/2pi) sum W dq dp` under the trapezoid rule.
    pub fn normalization(&self) -> f64 {
        let wq = quad::trapezoid_weights(self.q_axis.len(), self.q_axis.spacing());
        let wp = quad::trapezoid_weights(self.p_axis.len(), self.p_axis.spacing());
        let rows: Vec<f64> = (0..self.q_axis.len())
            .map(|i| {
                let terms: Vec<f64> = (0..self.p_axis.len())
                    .map(|j| self.values[(i, j)] * wp[j])
                    .collect();
                quad::pairwise_sum(&terms) * wq[i]
            })
            .collect();
        quad::pairwise_sum(&rows) / (2.0 * PI)
    }

    /// Phase-space means `(<q>, <p>)` under the same normalization.
    pub fn center(&self) -> (f64, f64) {
        let qs = self.q_axis.points();
        let ps = self.p_axis.points();
        let (mut s0, mut sq, mut sp) = (0.0, 0.0, 0.0);
        for (i, q) in qs.iter().enumerate() {
            for (j, p) in ps.iter().enumerate() {
                let w = self.values[(i, j)];
                s0 += w;
                sq += w * q;
                sp += w * p;
            }
        }
        (sq / s0, sp / s0)
    }

    /// Largest value on the outer boundary of the grid.
    pub fn edge_magnitude(&self) -> f64 {
        let (nq, np) = (self.q_axis.len(), self.p_axis.len());
        let mut m: f64 = 0.0;
        for i in 0..nq {
            m = m
                .max(self.values[(i, 0)].abs())
                .max(self.values[(i, np - 1)].abs());
        }
        for j in 0..np {
            m = m
                .max(self.values[(0, j)].abs())
                .max(self.values[(nq - 1, j)].abs());
        }
        m
    }

    /// Max-norm distance to another grid sampled at the same nodes.
    pub fn max_abs_diff(&self, other: &WignerGrid) -> Result<f64> {
        if self.values.shape() != other.values.shape() {
            return Err(TomoError::DimensionMismatch {
                expected: self.values.len(),
                found: other.values.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Sub-grid taking every `stride`-th node in both directions.
    pub fn subsample(&self, stride: usize) -> Result<WignerGrid> {
        let q_axis = self.q_axis.subsample(stride)?;
        let p_axis = self.p_axis.subsample(stride)?;
        let values = DMatrix::from_fn(q_axis.len(), p_axis.len(), |i, j| {
            self.values[(i * stride, j * stride)]
        });
        Ok(WignerGrid {
            q_axis,
            p_axis,
            values,
        })
    }
}

/// Marginal density `w(X; mu, nu)` of the quadrature `mu q + nu p`.
#[derive(Debug, Clone, Serialize)]
pub struct Tomogram {
    frame: SymplecticFrame,
    x_axis: PositionGrid,
    values: Vec<f64>,
}

impl Tomogram {
    pub fn new(frame: SymplecticFrame, x_axis: PositionGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != x_axis.len() {
            return Err(TomoError::DimensionMismatch {
                expected: x_axis.len(),
                found: values.len(),
            });
        }
        Ok(Tomogram {
            frame,
            x_axis,
            values,
        })
    }

    /// Samples a function of `X` on `x_axis`.
    pub fn from_fn(frame: SymplecticFrame, x_axis: PositionGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = x_axis.points().into_iter().map(f).collect();
        Tomogram {
            frame,
            x_axis,
            values,
        }
    }

    pub fn frame(&self) -> &SymplecticFrame {
        &self.frame
    }

    pub fn x_axis(&self) -> &PositionGrid {
        &self.x_axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn normalization(&self) -> f64 {
        quad::trapezoid(&self.values, self.x_axis.spacing())
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean(&self) -> f64 {
        let m: Vec<f64> = self
            .x_axis
            .points()
            .iter()
            .zip(&self.values)
            .map(|(x, w)| x * w)
            .collect();
        quad::trapezoid(&m, self.x_axis.spacing()) / self.normalization()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let m: Vec<f64> = self
            .x_axis
            .points()
            .iter()
            .zip(&self.values)
            .map(|(x, w)| (x - mean).powi(2) * w)
            .collect();
        quad::trapezoid(&m, self.x_axis.spacing()) / self.normalization()
    }

    /// Interpolated value; zero outside the axis.
    pub fn value_at(&self, x: f64) -> f64 {
        quad::lagrange_uniform(
            &self.values,
            self.x_axis.x_min(),
            self.x_axis.spacing(),
            x,
            DENSITY_INTERP_ORDER,
        )
        .unwrap_or(0.0)
    }

    /// Max-norm distance to a reference function.
    pub fn max_error(&self, reference: impl Fn(f64) -> f64) -> f64 {
        self.x_axis
            .points()
            .into_iter()
            .zip(&self.values)
            .map(|(x, w)| (w - reference(x)).abs())
            .fold(0.0, f64::max)
    }

    /// Max-norm distance to another tomogram on the same axis.
    pub fn max_abs_diff(&self, other: &Tomogram) -> Result<f64> {
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

    fn edge_magnitude(&self) -> f64 {
        self.values[0].abs().max(self.values[self.values.len() - 1].abs())
    }
}

/// `(mu, nu) = (e^lambda cos phi, e^-lambda sin phi)`.
pub fn frame_from_angles(lambda: f64, phi: f64) -> SymplecticFrame {
    SymplecticFrame::from_squeeze_rotation(lambda, phi)
}

/// `W(q, p) = integral rho(q + u/2, q - u/2) e^{-ipu} du`.
///
/// `q` runs over every `q_stride`-th node of the kernel grid (so that
/// `q +- u/2` are grid nodes) and `p` over `p_axis`.
pub fn wigner_from_density(
    kernel: &PositionKernel,
    q_stride: usize,
    p_axis: PositionGrid,
) -> Result<WignerGrid> {
    linalg::require_hermitian(kernel.values(), KERNEL_HERMITIAN_TOL)?;
    let grid = kernel.grid();
    let q_axis = grid.subsample(q_stride)?;
    let n = grid.len();
    let h = grid.spacing();
    let rho = kernel.values();
    let ps = p_axis.points();

    let rows: Vec<Result<Vec<f64>>> = (0..q_axis.len())
        .into_par_iter()
        .map(|iq| {
            let k = iq * q_stride;
            let jmax = k.min(n - 1 - k);
            (0..ps.len())
                .map(|ip| {
                    let p = ps[ip];
                    let terms: Vec<C64> = (0..=2 * jmax)
                        .map(|t| {
                            let j = t as isize - jmax as isize;
                            let a = (k as isize + j) as usize;
                            let b = (k as isize - j) as usize;
                            let weight = if t == 0 || t == 2 * jmax { h } else { 2.0 * h };
                            rho[(a, b)] * (-I * p * 2.0 * j as f64 * h).exp() * weight
                        })
                        .collect();
                    let w = quad::pairwise_sum(&terms);
                    if w.im.abs() > WIGNER_IMAG_TOL {
                        return Err(TomoError::ImaginaryResidue {
                            residue: w.im.abs(),
                            tolerance: WIGNER_IMAG_TOL,
                        });
                    }
                    Ok(w.re)
                })
                .collect()
        })
        .collect();

    let mut values = DMatrix::zeros(q_axis.len(), p_axis.len());
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row?.into_iter().enumerate() {
            values[(i, j)] = v;
        }
    }
    WignerGrid::new(q_axis, p_axis, values)
}

/// Refuses a chirp `exp(i mu y^2 / 2nu - i X y / nu)` whose phase advances
/// by `pi/4` or more per grid step anywhere on the grid.
fn check_chirp_sampling(grid: &PositionGrid, frame: &SymplecticFrame, x_axis: &PositionGrid) -> Result<()> {
    let (mu, nu) = (frame.mu(), frame.nu());
    let h = grid.spacing();
    let mut step: f64 = 0.0;
    for y in [grid.x_min(), grid.x_max()] {
        for x in [x_axis.x_min(), x_axis.x_max()] {
            step = step.max((mu * y - x).abs() * h / nu.abs());
        }
    }
    if step >= FRAC_PI_4 {
        return Err(TomoError::Undersampled { phase_step: step });
    }
    if nu.abs() < 10.0 * h * mu.abs() {
        log::warn!("frame ({mu}, {nu}) is close to the nu = 0 branch; chirp phase step {step:.3} rad");
    }
    Ok(())
}

fn chirp_vector(grid: &PositionGrid, frame: &SymplecticFrame, x: f64) -> Vec<C64> {
    let (mu, nu) = (frame.mu(), frame.nu());
    let w = quad::trapezoid_weights(grid.len(), grid.spacing());
    grid.points()
        .into_iter()
        .zip(w)
        .map(|(y, wy)| (I * (mu * y * y / (2.0 * nu) - x * y / nu)).exp() * wy)
        .collect()
}

/// `w(X) = (1/2pi|nu|) double integral rho(y, y') exp(i(y^2 - y'^2) mu/2nu - iX(y - y')/nu)`.
///
/// For `nu = 0` the position density is used instead:
/// `w(X) = rho(X/mu, X/mu) / |mu|`.
pub fn tomogram_from_density(
    kernel: &PositionKernel,
    frame: &SymplecticFrame,
    x_axis: PositionGrid,
) -> Result<Tomogram> {
    if frame.nu() == 0.0 {
        let mu = frame.mu();
        return Ok(Tomogram::from_fn(*frame, x_axis, |x| {
            kernel.diagonal_at(x / mu) / mu.abs()
        }));
    }
    let grid = kernel.grid();
    check_chirp_sampling(grid, frame, &x_axis)?;
    let rho = kernel.values();
    let pref = 1.0 / (2.0 * PI * frame.nu().abs());
    let values: Result<Vec<f64>> = x_axis
        .points()
        .into_par_iter()
        .map(|x| {
            let phi = chirp_vector(grid, frame, x);
            let n = phi.len();
            let terms: Vec<C64> = (0..n)
                .map(|a| {
                    let row: Vec<C64> = (0..n).map(|b| rho[(a, b)] * phi[b].conj()).collect();
                    phi[a] * quad::pairwise_sum(&row)
                })
                .collect();
            let s = quad::pairwise_sum(&terms) * pref;
            if s.im.abs() > TOMOGRAM_IMAG_TOL {
                return Err(TomoError::ImaginaryResidue {
                    residue: s.im.abs(),
                    tolerance: TOMOGRAM_IMAG_TOL,
                });
            }
            Ok(s.re)
        })
        .collect();
    Tomogram::new(*frame, x_axis, values?)
}

/// `w(X) = (1/2pi|nu|) |integral psi(y) exp(i mu y^2/2nu - iXy/nu) dy|^2`.
///
/// For `nu = 0`: `w(X) = |psi(X/mu)|^2 / |mu|`.
pub fn tomogram_from_wavefunction(
    psi: &Wavefunction,
    frame: &SymplecticFrame,
    x_axis: PositionGrid,
) -> Result<Tomogram> {
    if frame.nu() == 0.0 {
        let mu = frame.mu();
        return Ok(Tomogram::from_fn(*frame, x_axis, |x| {
            psi.density_at(x / mu) / mu.abs()
        }));
    }
    let grid = psi.grid();
    check_chirp_sampling(grid, frame, &x_axis)?;
    let pref = 1.0 / (2.0 * PI * frame.nu().abs());
    let values: Vec<f64> = x_axis
        .points()
        .into_par_iter()
        .map(|x| {
            let phi = chirp_vector(grid, frame, x);
            let terms: Vec<C64> = psi.values().iter().zip(&phi).map(|(a, b)| a * b).collect();
            quad::pairwise_sum(&terms).norm_sqr() * pref
        })
        .collect();
    Tomogram::new(*frame, x_axis, values)
}

/// Line integral `w(X) = (1/2pi) integral W(q, p) delta(X - mu q - nu p) dq dp`.
///
/// Each line is parametrized by whichever of `q`, `p` gives the shallower
/// slope; the other coordinate is reached by Lagrange interpolation.
pub fn tomogram_from_wigner(
    wigner: &WignerGrid,
    frame: &SymplecticFrame,
    x_axis: PositionGrid,
) -> Result<Tomogram> {
    let peak = wigner.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = wigner.edge_magnitude();
    if edge > WIGNER_EDGE_TOL * peak {
        return Err(TomoError::InsufficientDecay {
            edge: edge / peak,
            tolerance: WIGNER_EDGE_TOL,
        });
    }
    let (mu, nu) = (frame.mu(), frame.nu());
    let by_q = nu.abs() >= mu.abs();
    // Outer axis is integrated over its nodes; inner axis is interpolated.
    let (outer, inner, slope, along) = if by_q {
        (wigner.q_axis, wigner.p_axis, mu, nu)
    } else {
        (wigner.p_axis, wigner.q_axis, nu, mu)
    };
    let outer_pts = outer.points();
    let wts = quad::trapezoid_weights(outer.len(), outer.spacing());
    let columns: Vec<Vec<f64>> = (0..outer.len())
        .map(|k| {
            if by_q {
                wigner.values.row(k).iter().copied().collect()
            } else {
                wigner.values.column(k).iter().copied().collect()
            }
        })
        .collect();
    let pref = 1.0 / (2.0 * PI * along.abs());
    let values: Result<Vec<f64>> = x_axis
        .points()
        .into_par_iter()
        .map(|x| {
            let mut hit = false;
            let terms: Vec<f64> = outer_pts
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    let t = (x - slope * s) / along;
                    match quad::lagrange_uniform(
                        &columns[k],
                        inner.x_min(),
                        inner.spacing(),
                        t,
                        WIGNER_INTERP_ORDER,
                    ) {
                        Some(v) => {
                            hit = true;
                            v * wts[k]
                        }
                        None => 0.0,
                    }
                })
                .collect();
            if !hit {
                return Err(TomoError::LineExitsGrid { x });
            }
            Ok(quad::pairwise_sum(&terms) * pref)
        })
        .collect();
    Tomogram::new(*frame, x_axis, values?)
}

/// Layout of a tomogram family: a symmetric `(mu, nu)` box and, per frame,
/// an `X` axis scaled with `r = sqrt(mu^2 + nu^2)` around the expected
/// center `mu q0 + nu p0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyLayout {
    pub mu_axis: PositionGrid,
    pub nu_axis: PositionGrid,
    pub center: (f64, f64),
    /// Half width of each X axis in units of `r`.
    pub half_width: f64,
    pub x_points: usize,
}

impl FamilyLayout {
    /// `[-l, l]^2` with `n` nodes per side. `n` must be even so that the
    /// degenerate frame `(0, 0)` is not sampled.
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if n % 2 == 1 {
            return Err(TomoError::InvalidGrid(format!(
                "family grid needs an even node count to skip (0, 0), got {n}"
            )));
        }
        let axis = PositionGrid::symmetric(l, n)?;
        Ok(FamilyLayout {
            mu_axis: axis,
            nu_axis: axis,
            center: (0.0, 0.0),
            half_width: 6.0,
            x_points: 241,
        })
    }

    pub fn with_center(mut self, q0: f64, p0: f64) -> Self {
        self.center = (q0, p0);
        self
    }

    pub fn with_x_axis(mut self, half_width: f64, x_points: usize) -> Self {
        self.half_width = half_width;
        self.x_points = x_points;
        self
    }

    /// Frames in row-major order (mu outer, nu inner).
    pub fn frames(&self) -> Result<Vec<SymplecticFrame>> {
        let mut out = Vec::with_capacity(self.mu_axis.len() * self.nu_axis.len());
        for mu in self.mu_axis.points() {
            for nu in self.nu_axis.points() {
                out.push(SymplecticFrame::new(mu, nu)?);
            }
        }
        Ok(out)
    }

    pub fn x_axis(&self, frame: &SymplecticFrame) -> Result<PositionGrid> {
        let c = frame.mu() * self.center.0 + frame.nu() * self.center.1;
        let hw = self.half_width * frame.norm();
        PositionGrid::new(c - hw, c + hw, self.x_points)
    }

    /// Evaluates `f` on every frame in parallel.
    pub fn build<F>(&self, f: F) -> Result<TomogramFamily>
    where
        F: Fn(&SymplecticFrame, PositionGrid) -> Result<Tomogram> + Sync,
    {
        let frames = self.frames()?;
        let slices: Result<Vec<Tomogram>> = frames.par_iter().map(|fr| f(fr, self.x_axis(fr)?)).collect();
        TomogramFamily::new(self.mu_axis, self.nu_axis, slices?)
    }
}

impl Default for FamilyLayout {
    /// `[-7, 7]^2` with 56 nodes per side.
    fn default() -> Self {
        FamilyLayout::new(7.0, 56).expect("default layout is valid")
    }
}

/// Tomograms on a rectangular `(mu, nu)` grid, stored row-major with `mu`
/// as the outer index.
#[derive(Debug, Clone)]
pub struct TomogramFamily {
    mu_axis: PositionGrid,
    nu_axis: PositionGrid,
    slices: Vec<Tomogram>,
}

impl TomogramFamily {
    pub fn new(mu_axis: PositionGrid, nu_axis: PositionGrid, slices: Vec<Tomogram>) -> Result<Self> {
        let expected = mu_axis.len() * nu_axis.len();
        if slices.len() != expected {
            return Err(TomoError::DimensionMismatch {
                expected,
                found: slices.len(),
            });
        }
        Ok(TomogramFamily {
            mu_axis,
            nu_axis,
            slices,
        })
    }

    pub fn mu_axis(&self) -> &PositionGrid {
        &self.mu_axis
    }

    pub fn nu_axis(&self) -> &PositionGrid {
        &self.nu_axis
    }

    pub fn slices(&self) -> &[Tomogram] {
        &self.slices
    }

    pub fn slice(&self, i_mu: usize, i_nu: usize) -> &Tomogram {
        &self.slices[i_mu * self.nu_axis.len() + i_nu]
    }

    /// The shared X axis, when every slice uses the same one.
    pub fn common_x_axis(&self) -> Option<PositionGrid> {
        let first = *self.slices[0].x_axis();
        self.slices.iter().all(|s| *s.x_axis() == first).then_some(first)
    }
}

/// `W(q, p) = (1/2pi) triple integral w(X, mu, nu) exp(i(X - mu q - nu p))`.
///
/// The X integral is done first for every frame; the `(mu, nu)` integral
/// is then evaluated separably with the trapezoid rule.
pub fn wigner_from_tomogram(
    family: &TomogramFamily,
    q_axis: PositionGrid,
    p_axis: PositionGrid,
) -> Result<WignerGrid> {
    for s in &family.slices {
        let edge = s.edge_magnitude();
        if edge > FAMILY_EDGE_TOL {
            return Err(TomoError::InsufficientDecay {
                edge,
                tolerance: FAMILY_EDGE_TOL,
            });
        }
    }
    let (n_mu, n_nu) = (family.mu_axis.len(), family.nu_axis.len());
    let w_mu = quad::trapezoid_weights(n_mu, family.mu_axis.spacing());
    let w_nu = quad::trapezoid_weights(n_nu, family.nu_axis.spacing());

    // Characteristic function on the (mu, nu) grid, quadrature weights folded in.
    let chi: Vec<C64> = family
        .slices
        .par_iter()
        .enumerate()
        .map(|(idx, s)| {
            let h = s.x_axis().spacing();
            let wx = quad::trapezoid_weights(s.values().len(), h);
            let terms: Vec<C64> = s
                .x_axis()
                .points()
                .into_iter()
                .zip(s.values())
                .zip(wx)
                .map(|((x, w), wt)| (I * x).exp() * (w * wt))
                .collect();
            quad::pairwise_sum(&terms) * (w_mu[idx / n_nu] * w_nu[idx % n_nu])
        })
        .collect();

    let mus = family.mu_axis.points();
    let nus = family.nu_axis.points();
    let ps = p_axis.points();
    let qs = q_axis.points();
    // Inner sum over nu for every (mu, p).
    let partial: Vec<Vec<C64>> = (0..n_mu)
        .into_par_iter()
        .map(|i| {
            ps.iter()
                .map(|p| {
                    let terms: Vec<C64> = (0..n_nu)
                        .map(|j| chi[i * n_nu + j] * (-I * nus[j] * p).exp())
                        .collect();
                    quad::pairwise_sum(&terms)
                })
                .collect()
        })
        .collect();
    let rows: Vec<Result<Vec<f64>>> = qs
        .par_iter()
        .map(|q| {
            (0..ps.len())
                .map(|jp| {
                    let terms: Vec<C64> = (0..n_mu)
                        .map(|i| partial[i][jp] * (-I * mus[i] * q).exp())
                        .collect();
                    let w = quad::pairwise_sum(&terms) / (2.0 * PI);
                    if w.im.abs() > INVERSE_IMAG_TOL {
                        return Err(TomoError::ImaginaryResidue {
                            residue: w.im.abs(),
                            tolerance: INVERSE_IMAG_TOL,
                        });
                    }
                    Ok(w.re)
                })
                .collect()
        })
        .collect();
    let mut values = DMatrix::zeros(qs.len(), ps.len());
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row?.into_iter().enumerate() {
            values[(i, j)] = v;
        }
    }
    WignerGrid::new(q_axis, p_axis, values)
}

/// Tomogram of a number-basis density matrix. The eigenvectors of
/// `mu q + nu p` are `exp(i phi n) |x>` with `phi = atan2(nu, mu)`, so
/// `w(X) = r^-1 sum_mn psi_m(x) exp(-i phi m) rho_mn exp(i phi n) psi_n(x)`
/// at `x = X / r`.
pub fn tomogram_from_fock(
    rho: &FockDensityMatrix,
    frame: &SymplecticFrame,
    x_axis: PositionGrid,
) -> Result<Tomogram> {
    let n = rho.dim();
    let r = frame.norm();
    let phi = frame.nu().atan2(frame.mu());
    let phases: Vec<C64> = (0..n).map(|k| (I * phi * k as f64).exp()).collect();
    let m = rho.elements();
    let rotated = linalg::CMatrix::from_fn(n, n, |a, b| phases[a].conj() * m[(a, b)] * phases[b]);
    let values: Result<Vec<f64>> = x_axis
        .points()
        .par_iter()
        .map(|&x| {
            let psi = hermite_functions(n - 1, x / r);
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..n {
                let mut row = C64::new(0.0, 0.0);
                for b in 0..n {
                    row += rotated[(a, b)] * psi[b];
                }
                acc += row * psi[a];
            }
            if acc.im.abs() > TOMOGRAM_IMAG_TOL {
                return Err(TomoError::ImaginaryResidue {
                    residue: acc.im.abs(),
                    tolerance: TOMOGRAM_IMAG_TOL,
                });
            }
            Ok(acc.re / r)
        })
        .collect();
    Tomogram::new(*frame, x_axis, values?)
}

/// `pi^-1/2 (2^n n!)^-1 r^-1 H_n(X/r)^2 exp(-X^2/r^2)` with
/// `r = sqrt(mu^2 + nu^2)`, evaluated in log space.
pub fn oracle_tomogram_fock(n: usize, x: f64, frame: &SymplecticFrame) -> f64 {
    let r = frame.norm();
    let s = x / r;
    let hn = hermite_polynomials(n, s)[n];
    if hn == 0.0 {
        return 0.0;
    }
    let ln = -0.5 * PI.ln() - n as f64 * 2f64.ln() - ln_factorial(n) - r.ln() + 2.0 * hn.abs().ln() - s * s;
    ln.exp()
}

/// Gaussian with mean `sqrt2 (Re alpha mu + Im alpha nu)` and variance `r^2/2`.
pub fn oracle_tomogram_coherent(alpha: C64, x: f64, frame: &SymplecticFrame) -> f64 {
    let r2 = frame.mu().powi(2) + frame.nu().powi(2);
    let mean = coherent_mean(alpha, frame);
    (-(x - mean).powi(2) / r2).exp() / (PI * r2).sqrt()
}

pub(crate) fn coherent_mean(alpha: C64, frame: &SymplecticFrame) -> f64 {
    SQRT_2 * (alpha.re * frame.mu() + alpha.im * frame.nu())
}
