//! Time evolution of tomograms and of measure distribution functions for
//! `H = p^2/2 + V(q)` with quadratic `V`.
//!
//! For `V = a2 q^2 + a1 q + a0` the tomogram obeys the first-order
//! transport equation
//!
//! `dw/dt - mu dw/dnu + 2 a2 nu dw/dmu - a1 nu dw/dX = 0`.
//!
//! Along its characteristics the Heisenberg operators move affinely,
//! `q(t) = A q + B p + c`, `p(t) = C q + D p + d`, so
//! `w(X, mu, nu, t) = w0(X - mu c - nu d, mu A + nu C, mu B + nu D)`.
//! The signs are pinned by the number-basis von Neumann oracle (see the
//! tests).

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::ctomo::{Tomogram, TomogramFamily};
use crate::error::{Result, TomoError};
use crate::linalg::{self, HermitianEigen, C64, I};
use crate::measures::{cdf_from_tomogram, derivative_is_tomogram, QuantumMeasureCDF};
use crate::quad;
use crate::states::{FockDensityMatrix, Observable, PositionGrid, SymplecticFrame};

const X_INTERP_ORDER: usize = 8;
const VON_NEUMANN_TOL: f64 = 1e-10;
/// A measured order below this is reported as a too-coarse grid.
pub const MIN_CONVERGENCE_ORDER: f64 = 1.8;

/// `V(q) = a2 q^2 + a1 q + a0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticPotential {
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

impl QuadraticPotential {
    pub fn new(a2: f64, a1: f64, a0: f64) -> Self {
        QuadraticPotential { a2, a1, a0 }
    }

    pub fn free() -> Self {
        QuadraticPotential::new(0.0, 0.0, 0.0)
    }

    /// `q^2 / 2`, unit frequency.
    pub fn harmonic() -> Self {
        QuadraticPotential::new(0.5, 0.0, 0.0)
    }

    pub fn value(&self, q: f64) -> f64 {
        self.a2 * q * q + self.a1 * q + self.a0
    }

    /// `p^2/2 + V(q)` in the number basis. `q^2` and `p^2` use their exact
    /// matrix elements rather than squares of truncated matrices.
    pub fn hamiltonian(&self, dim: usize) -> Result<Observable> {
        if dim < 2 {
            return Err(TomoError::InvalidParameter(format!(
                "dimension must be >= 2, got {dim}"
            )));
        }
        let mut h = linalg::CMatrix::zeros(dim, dim);
        for n in 0..dim {
            let diag = n as f64 + 0.5;
            // p^2/2 + a2 q^2 on the diagonal, two-step couplings off it.
            h[(n, n)] = C64::new(0.5 * diag + self.a2 * diag + self.a0, 0.0);
            if n + 2 < dim {
                let s = (((n + 1) * (n + 2)) as f64).sqrt() / 2.0;
                let v = C64::new(-0.5 * s + self.a2 * s, 0.0);
                h[(n, n + 2)] = v;
                h[(n + 2, n)] = v;
            }
            if n + 1 < dim {
                let v = C64::new(self.a1 * ((n + 1) as f64 / 2.0).sqrt(), 0.0);
                h[(n, n + 1)] = v;
                h[(n + 1, n)] = v;
            }
        }
        Observable::new(h)
    }

    /// Heisenberg flow over time `t`.
    pub fn flow(&self, t: f64) -> AffineFlow {
        let w2 = 2.0 * self.a2;
        let a1 = self.a1;
        if w2 > 0.0 {
            let w = w2.sqrt();
            let (s, c) = (w * t).sin_cos();
            AffineFlow {
                a: c,
                b: s / w,
                c: -w * s,
                d: c,
                shift_q: a1 / w2 * (c - 1.0),
                shift_p: -a1 / w * s,
            }
        } else if w2 < 0.0 {
            let k = (-w2).sqrt();
            let (s, c) = ((k * t).sinh(), (k * t).cosh());
            AffineFlow {
                a: c,
                b: s / k,
                c: k * s,
                d: c,
                shift_q: a1 / (k * k) * (1.0 - c),
                shift_p: -a1 / k * s,
            }
        } else {
            AffineFlow {
                a: 1.0,
                b: t,
                c: 0.0,
                d: 1.0,
                shift_q: -0.5 * a1 * t * t,
                shift_p: -a1 * t,
            }
        }
    }
}

/// `q(t) = a q + b p + shift_q`, `p(t) = c q + d p + shift_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineFlow {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub shift_q: f64,
    pub shift_p: f64,
}

impl AffineFlow {
    /// Foot of the characteristic through `(X, mu, nu)`: returns
    /// `(X', mu', nu')` with `w(X, mu, nu, t) = w0(X', mu', nu')`.
    pub fn pull_back(&self, x: f64, mu: f64, nu: f64) -> (f64, f64, f64) {
        (
            x - mu * self.shift_q - nu * self.shift_p,
            mu * self.a + nu * self.c,
            mu * self.b + nu * self.d,
        )
    }
}

/// `rho(t) = exp(-iHt) rho0 exp(iHt)` through the eigendecomposition of `H`.
pub fn von_neumann_oracle(rho0: &FockDensityMatrix, h: &Observable, t: f64) -> Result<FockDensityMatrix> {
    if rho0.dim() != h.dim() {
        return Err(TomoError::DimensionMismatch {
            expected: h.dim(),
            found: rho0.dim(),
        });
    }
    let u = HermitianEigen::new(h.elements()).apply_fn(|e| (-I * e * t).exp());
    let rho = &u * rho0.elements() * u.adjoint();
    let drift = (linalg::trace(&rho) - linalg::trace(rho0.elements())).norm();
    if drift > VON_NEUMANN_TOL {
        return Err(TomoError::Consistency(format!("trace drifted by {drift:.3e}")));
    }
    FockDensityMatrix::new(linalg::hermitian_part(&rho))
}

/// Weights and first node of an interpolation stencil on a uniform axis.
/// Cubic where four nodes fit around the point, linear otherwise; `None`
/// when the point is off the axis.
fn stencil(axis: &PositionGrid, v: f64) -> Option<(usize, Vec<f64>)> {
    let n = axis.len();
    let s = (v - axis.x_min()) / axis.spacing();
    let last = (n - 1) as f64;
    if s < -1e-9 || s > last + 1e-9 {
        return None;
    }
    let s = s.clamp(0.0, last);
    let k = (s.floor() as usize).min(n.saturating_sub(2));
    let near = s.round();
    if (s - near).abs() < 1e-12 {
        return Some((near as usize, vec![1.0]));
    }
    if k >= 1 && k + 2 < n {
        let start = k - 1;
        let w = (0..4)
            .map(|j| {
                let sj = (start + j) as f64;
                (0..4)
                    .filter(|&m| m != j)
                    .map(|m| {
                        let sm = (start + m) as f64;
                        (s - sm) / (sj - sm)
                    })
                    .product()
            })
            .collect();
        return Some((start, w));
    }
    let f = s - k as f64;
    Some((k, vec![1.0 - f, f]))
}

/// Interpolates `g(i_mu, i_nu)` at `(mu, nu)`; the flag reports a linear
/// fallback in either direction.
fn interpolate_frames(
    mu_axis: &PositionGrid,
    nu_axis: &PositionGrid,
    mu: f64,
    nu: f64,
    g: impl Fn(usize, usize) -> f64,
) -> Result<(f64, bool)> {
    let outside = || TomoError::FrameOutsideFamily { mu, nu };
    let (i0, wi) = stencil(mu_axis, mu).ok_or_else(outside)?;
    let (j0, wj) = stencil(nu_axis, nu).ok_or_else(outside)?;
    let linear = wi.len() == 2 || wj.len() == 2;
    let mut acc = 0.0;
    for (a, wa) in wi.iter().enumerate() {
        for (b, wb) in wj.iter().enumerate() {
            acc += wa * wb * g(i0 + a, j0 + b);
        }
    }
    Ok((acc, linear))
}

fn require_common_axis(family: &TomogramFamily) -> Result<PositionGrid> {
    family
        .common_x_axis()
        .ok_or_else(|| TomoError::InvalidGrid("evolution needs a family with one shared X axis".into()))
}

fn warn_fallback(count: usize) {
    if count > 0 {
        log::warn!("{count} samples fell back to linear interpolation near the frame-grid edge");
    }
}

/// Evolved tomograms at arbitrary frames, sampled on the family's X axis.
pub fn propagate_frames(
    w0: &TomogramFamily,
    v: &QuadraticPotential,
    t: f64,
    frames: &[SymplecticFrame],
) -> Result<Vec<Tomogram>> {
    let x_axis = require_common_axis(w0)?;
    let flow = v.flow(t);
    let nn = w0.nu_axis().len();
    let slices = w0.slices();
    let results: Vec<Result<(Tomogram, usize)>> = frames
        .par_iter()
        .map(|f| {
            let mut fallbacks = 0;
            let mut values = Vec::with_capacity(x_axis.len());
            for x in x_axis.points() {
                let (xp, mup, nup) = flow.pull_back(x, f.mu(), f.nu());
                let (val, lin) = interpolate_frames(w0.mu_axis(), w0.nu_axis(), mup, nup, |i, j| {
                    let s = &slices[i * nn + j];
                    quad::lagrange_uniform(s.values(), x_axis.x_min(), x_axis.spacing(), xp, X_INTERP_ORDER)
                        .unwrap_or(0.0)
                })?;
                fallbacks += lin as usize;
                values.push(val);
            }
            Ok((Tomogram::new(*f, x_axis, values)?, fallbacks))
        })
        .collect();
    let mut out = Vec::with_capacity(frames.len());
    let mut fallbacks = 0;
    for r in results {
        let (tomo, n) = r?;
        fallbacks += n;
        out.push(tomo);
    }
    warn_fallback(fallbacks);
    Ok(out)
}

/// Evolves a tomogram family along the characteristics of `V` to time `t`.
/// The result lives on the same frame grid; a frame whose characteristic
/// foot leaves the sampled region is an error.
pub fn characteristics_propagator(
    w0: &TomogramFamily,
    v: &QuadraticPotential,
    t: f64,
) -> Result<TomogramFamily> {
    let frames: Vec<SymplecticFrame> = w0.slices().iter().map(|s| *s.frame()).collect();
    let slices = propagate_frames(w0, v, t, &frames)?;
    TomogramFamily::new(*w0.mu_axis(), *w0.nu_axis(), slices)
}

/// Distribution functions on a rectangular frame grid with a shared X axis.
#[derive(Debug, Clone)]
pub struct CdfFamily {
    mu_axis: PositionGrid,
    nu_axis: PositionGrid,
    cdfs: Vec<QuantumMeasureCDF>,
}

impl CdfFamily {
    pub fn new(mu_axis: PositionGrid, nu_axis: PositionGrid, cdfs: Vec<QuantumMeasureCDF>) -> Result<Self> {
        let expected = mu_axis.len() * nu_axis.len();
        if cdfs.len() != expected {
            return Err(TomoError::DimensionMismatch {
                expected,
                found: cdfs.len(),
            });
        }
        Ok(CdfFamily {
            mu_axis,
            nu_axis,
            cdfs,
        })
    }

    /// `F(X) = integral_{-inf}^X w` for every slice.
    pub fn from_tomograms(family: &TomogramFamily) -> Result<Self> {
        require_common_axis(family)?;
        let cdfs = family
            .slices()
            .par_iter()
            .map(cdf_from_tomogram)
            .collect::<Result<_>>()?;
        CdfFamily::new(*family.mu_axis(), *family.nu_axis(), cdfs)
    }

    pub fn mu_axis(&self) -> &PositionGrid {
        &self.mu_axis
    }

    pub fn nu_axis(&self) -> &PositionGrid {
        &self.nu_axis
    }

    pub fn cdfs(&self) -> &[QuantumMeasureCDF] {
        &self.cdfs
    }

    pub fn cdf(&self, i_mu: usize, i_nu: usize) -> &QuantumMeasureCDF {
        &self.cdfs[i_mu * self.nu_axis.len() + i_nu]
    }

    /// Finite-difference densities of every slice.
    pub fn derivative_family(&self) -> Result<TomogramFamily> {
        let slices = self
            .cdfs
            .iter()
            .map(derivative_is_tomogram)
            .collect::<Result<_>>()?;
        TomogramFamily::new(self.mu_axis, self.nu_axis, slices)
    }
}

/// Evolved distribution functions at arbitrary frames, sampled on the
/// family's X axis.
pub fn measure_evolution_frames(
    m0: &CdfFamily,
    v: &QuadraticPotential,
    t: f64,
    frames: &[SymplecticFrame],
) -> Result<Vec<QuantumMeasureCDF>> {
    let x_axis = *m0.cdfs[0].x_axis();
    if m0
        .cdfs
        .iter()
        .any(|c| *c.x_axis() != x_axis || c.atoms().is_some())
    {
        return Err(TomoError::InvalidGrid(
            "evolution needs sampled distribution functions on one shared X axis".into(),
        ));
    }
    let flow = v.flow(t);
    let nn = m0.nu_axis.len();
    let results: Vec<Result<(QuantumMeasureCDF, usize)>> = frames
        .par_iter()
        .map(|f| {
            let mut fallbacks = 0;
            let mut values = Vec::with_capacity(x_axis.len());
            for x in x_axis.points() {
                let (xp, mup, nup) = flow.pull_back(x, f.mu(), f.nu());
                let (val, lin) = interpolate_frames(&m0.mu_axis, &m0.nu_axis, mup, nup, |i, j| {
                    m0.cdfs[i * nn + j].eval(xp)
                })?;
                fallbacks += lin as usize;
                values.push(val);
            }
            Ok((
                QuantumMeasureCDF::from_samples(Some(*f), x_axis, values)?,
                fallbacks,
            ))
        })
        .collect();
    let mut cdfs = Vec::with_capacity(frames.len());
    let mut fallbacks = 0;
    for r in results {
        let (c, n) = r?;
        fallbacks += n;
        cdfs.push(c);
    }
    warn_fallback(fallbacks);
    Ok(cdfs)
}

/// Moves distribution functions along the same characteristics as
/// [`characteristics_propagator`], on the family's own frame grid.
pub fn measure_evolution(m0: &CdfFamily, v: &QuadraticPotential, t: f64) -> Result<CdfFamily> {
    let frames = m0
        .cdfs
        .iter()
        .map(|c| {
            c.frame()
                .copied()
                .ok_or_else(|| TomoError::InvalidParameter("distribution function carries no frame".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let cdfs = measure_evolution_frames(m0, v, t, &frames)?;
    CdfFamily::new(m0.mu_axis, m0.nu_axis, cdfs)
}

/// `w(X, mu, nu, t)` on a regular `(t, mu, nu, X)` grid.
#[derive(Debug, Clone)]
pub struct TomogramTrajectory {
    times: PositionGrid,
    mu_axis: PositionGrid,
    nu_axis: PositionGrid,
    x_axis: PositionGrid,
    values: Vec<f64>,
}

impl TomogramTrajectory {
    pub fn from_fn(
        times: PositionGrid,
        mu_axis: PositionGrid,
        nu_axis: PositionGrid,
        x_axis: PositionGrid,
        f: impl Fn(f64, f64, f64, f64) -> f64 + Sync,
    ) -> Self {
        let (nt, nm, nn, nx) = (times.len(), mu_axis.len(), nu_axis.len(), x_axis.len());
        let values = (0..nt * nm * nn * nx)
            .into_par_iter()
            .map(|idx| {
                let k = idx % nx;
                let j = (idx / nx) % nn;
                let i = (idx / (nx * nn)) % nm;
                let it = idx / (nx * nn * nm);
                f(
                    times.point(it),
                    x_axis.point(k),
                    mu_axis.point(i),
                    nu_axis.point(j),
                )
            })
            .collect();
        TomogramTrajectory {
            times,
            mu_axis,
            nu_axis,
            x_axis,
            values,
        }
    }

    /// Propagates `w0` to each time on the frame grid of `w0`.
    pub fn propagate(w0: &TomogramFamily, v: &QuadraticPotential, times: PositionGrid) -> Result<Self> {
        let x_axis = require_common_axis(w0)?;
        let mut values = Vec::with_capacity(times.len() * w0.slices().len() * x_axis.len());
        for t in times.points() {
            let fam = characteristics_propagator(w0, v, t)?;
            for s in fam.slices() {
                values.extend_from_slice(s.values());
            }
        }
        Ok(TomogramTrajectory {
            times,
            mu_axis: *w0.mu_axis(),
            nu_axis: *w0.nu_axis(),
            x_axis,
            values,
        })
    }

    pub fn times(&self) -> &PositionGrid {
        &self.times
    }

    pub fn mu_axis(&self) -> &PositionGrid {
        &self.mu_axis
    }

    pub fn nu_axis(&self) -> &PositionGrid {
        &self.nu_axis
    }

    pub fn x_axis(&self) -> &PositionGrid {
        &self.x_axis
    }

    fn shape(&self) -> (usize, usize, usize, usize) {
        (
            self.times.len(),
            self.mu_axis.len(),
            self.nu_axis.len(),
            self.x_axis.len(),
        )
    }

    fn line(&self, it: usize, i: usize, j: usize) -> &[f64] {
        let (_, nm, nn, nx) = self.shape();
        let start = ((it * nm + i) * nn + j) * nx;
        &self.values[start..start + nx]
    }

    pub fn value(&self, it: usize, i: usize, j: usize, k: usize) -> f64 {
        self.line(it, i, j)[k]
    }

    /// Normalization within `1e-5` and values above `-1e-6` on every slice.
    pub fn check_invariants(&self) -> Result<()> {
        let (nt, nm, nn, _) = self.shape();
        let h = self.x_axis.spacing();
        for it in 0..nt {
            for i in 0..nm {
                for j in 0..nn {
                    let line = self.line(it, i, j);
                    let norm = quad::trapezoid(line, h);
                    if (norm - 1.0).abs() > 1e-5 {
                        return Err(TomoError::Normalization {
                            norm,
                            tolerance: 1e-5,
                        });
                    }
                    let min = line.iter().copied().fold(f64::INFINITY, f64::min);
                    if min < -1e-6 {
                        return Err(TomoError::Consistency(format!(
                            "negative tomogram value {min:.3e} at t = {}",
                            self.times.point(it)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Same grid with `w` replaced by its cumulative X integral.
    pub fn cumulative(&self) -> TomogramTrajectory {
        let nx = self.x_axis.len();
        let h = self.x_axis.spacing();
        let values = self
            .values
            .par_chunks(nx)
            .flat_map_iter(|line| quad::cumulative_trapezoid(line, h))
            .collect();
        TomogramTrajectory {
            values,
            ..self.clone()
        }
    }

    /// CSV rows `t,X,mu,nu,w`.
    pub fn rows(&self) -> Vec<[f64; 5]> {
        let (nt, nm, nn, nx) = self.shape();
        let mut out = Vec::with_capacity(self.values.len());
        for it in 0..nt {
            for i in 0..nm {
                for j in 0..nn {
                    for k in 0..nx {
                        out.push([
                            self.times.point(it),
                            self.x_axis.point(k),
                            self.mu_axis.point(i),
                            self.nu_axis.point(j),
                            self.value(it, i, j, k),
                        ]);
                    }
                }
            }
        }
        out
    }
}

/// Residual of the transport equation on interior `(t, mu, nu)` nodes;
/// every X node is kept.
#[derive(Debug, Clone)]
pub struct ResidualField {
    shape: (usize, usize, usize, usize),
    x_spacing: f64,
    values: Vec<f64>,
}

impl ResidualField {
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Cumulative X integral of each line.
    pub fn cumulative(&self) -> ResidualField {
        let nx = self.shape.3;
        let values = self
            .values
            .chunks(nx)
            .flat_map(|line| quad::cumulative_trapezoid(line, self.x_spacing))
            .collect();
        ResidualField {
            values,
            ..self.clone()
        }
    }

    pub fn max_abs_diff(&self, other: &ResidualField) -> Result<f64> {
        if self.shape != other.shape {
            return Err(TomoError::InvalidGrid(
                "residual fields have different shapes".into(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Antiderivative by division by `ik` in Fourier space; the zero and
/// Nyquist modes are dropped, so the result has zero mean.
struct SpectralAntiderivative {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
}

impl SpectralAntiderivative {
    fn new(n: usize, h: f64) -> Self {
        let mut planner = FftPlanner::new();
        let period = n as f64 * h;
        let k = (0..n)
            .map(|m| {
                let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
                2.0 * PI * signed / period
            })
            .collect();
        SpectralAntiderivative {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            k,
        }
    }

    fn apply(&self, line: &[f64]) -> Vec<f64> {
        let n = line.len();
        let mut buf: Vec<C64> = line.iter().map(|v| C64::new(*v, 0.0)).collect();
        self.forward.process(&mut buf);
        for (m, z) in buf.iter_mut().enumerate() {
            if m == 0 || (n.is_multiple_of(2) && m == n / 2) {
                *z = C64::new(0.0, 0.0);
            } else {
                *z /= I * self.k[m];
            }
        }
        self.inverse.process(&mut buf);
        buf.iter().map(|z| z.re / n as f64).collect()
    }
}

/// Left side of the transport equation written with the potential
/// difference operator,
///
/// `dw/dt - mu dw/dnu - i [V(A - B) - V(A + B)] w`,
/// `A = -(d/dX)^-1 d/dmu`, `B = (i nu / 2) d/dX`,
///
/// evaluated with central differences in `t, mu, nu, X` and the spectral
/// `(d/dX)^-1`. For quadratic `V` the bracket is
/// `-2 a2 (AB + BA) - 2 a1 B`; both orderings are computed.
pub fn residual_field(traj: &TomogramTrajectory, v: &QuadraticPotential) -> Result<ResidualField> {
    let (nt, nm, nn, nx) = traj.shape();
    if nt < 3 || nm < 3 || nn < 3 || nx < 4 {
        return Err(TomoError::GridTooSmall {
            x_min: 0.0,
            x_max: 0.0,
            need_min: 3.0,
            need_max: 4.0,
        });
    }
    let (dt, dm, dn, dx) = (
        traj.times.spacing(),
        traj.mu_axis.spacing(),
        traj.nu_axis.spacing(),
        traj.x_axis.spacing(),
    );
    let anti = SpectralAntiderivative::new(nx, dx);
    let mut nodes = Vec::new();
    for it in 1..nt - 1 {
        for i in 1..nm - 1 {
            for j in 1..nn - 1 {
                nodes.push((it, i, j));
            }
        }
    }
    let lines: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|&(it, i, j)| {
            let mu = traj.mu_axis.point(i);
            let nu = traj.nu_axis.point(j);
            let w = traj.line(it, i, j);
            let d_t = central(traj.line(it + 1, i, j), traj.line(it - 1, i, j), dt);
            let d_nu = central(traj.line(it, i, j + 1), traj.line(it, i, j - 1), dn);
            let d_mu = central(traj.line(it, i + 1, j), traj.line(it, i - 1, j), dm);
            let d_x = quad::derivative(w, dx);
            // A B w = -(i nu / 2) (d/dX)^-1 d/dmu d/dX w
            let dx_up = quad::derivative(traj.line(it, i + 1, j), dx);
            let dx_dn = quad::derivative(traj.line(it, i - 1, j), dx);
            let ab = anti.apply(&central(&dx_up, &dx_dn, dm));
            // B A w = -(i nu / 2) d/dX (d/dX)^-1 d/dmu w
            let ba = quad::derivative(&anti.apply(&d_mu), dx);
            (0..nx)
                .map(|k| {
                    // -i[-2 a2 (AB + BA) - 2 a1 B] w, with the i's collected.
                    let pot = v.a2 * nu * (ab[k] + ba[k]) - v.a1 * nu * d_x[k];
                    d_t[k] - mu * d_nu[k] + pot
                })
                .collect()
        })
        .collect();
    Ok(ResidualField {
        shape: (nt - 2, nm - 2, nn - 2, nx),
        x_spacing: dx,
        values: lines.into_iter().flatten().collect(),
    })
}

fn central(up: &[f64], down: &[f64], h: f64) -> Vec<f64> {
    up.iter().zip(down).map(|(a, b)| (a - b) / (2.0 * h)).collect()
}

/// Sup-norm of [`residual_field`].
pub fn pde_residual(traj: &TomogramTrajectory, v: &QuadraticPotential) -> Result<f64> {
    Ok(residual_field(traj, v)?.sup_norm())
}

/// The same transport operator applied to the distribution functions
/// `F = integral_{-inf}^X w` of the trajectory.
pub fn cdf_residual_field(traj: &TomogramTrajectory, v: &QuadraticPotential) -> Result<ResidualField> {
    residual_field(&traj.cumulative(), v)
}

/// Residuals at spacing `delta` and `delta / 2` and the measured order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub coarse: f64,
    pub fine: f64,
    pub order: f64,
}

/// Halving test: builds trajectories at `delta` and `delta / 2` and
/// reports the observed order. An order below [`MIN_CONVERGENCE_ORDER`]
/// means the coarse residual is not in the asymptotic range.
pub fn residual_convergence(
    build: impl Fn(f64) -> Result<TomogramTrajectory>,
    v: &QuadraticPotential,
    delta: f64,
) -> Result<ConvergenceReport> {
    let coarse = pde_residual(&build(delta)?, v)?;
    let fine = pde_residual(&build(delta / 2.0)?, v)?;
    let order = (coarse / fine).log2();
    Ok(ConvergenceReport { coarse, fine, order })
}

impl ConvergenceReport {
    pub fn require_second_order(&self) -> Result<()> {
        if self.order < MIN_CONVERGENCE_ORDER {
            return Err(TomoError::Consistency(format!(
                "residual order {:.3} below {MIN_CONVERGENCE_ORDER}: grid too coarse",
                self.order
            )));
        }
        Ok(())
    }
}
