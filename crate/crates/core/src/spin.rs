//! Spin tomography: SU(2) rotations, the rotated `J_z`, spin tomograms,
//! their identification with step distribution functions, and density
//! matrix reconstruction from tomograms.
//!
//! Basis convention: index `k` holds the `J_z` eigenvector with
//! `m = -j + k`, so `J_z = diag(-j, ..., j)`. Rotations are
//! `R(phi, psi, theta) = exp(-i psi J_z) exp(i theta J_x) exp(-i phi J_z)`,
//! which for `j = 1/2` is
//!
//! ```text
//! [ cos(t/2) e^{i(phi+psi)/2}     i sin(t/2) e^{-i(phi-psi)/2} ]
//! [ i sin(t/2) e^{i(phi-psi)/2}   cos(t/2) e^{-i(phi+psi)/2}   ]
//! ```
//!
//! For `rho = |e_0><e_0|` the tomogram puts `cos^2(theta/2)` on `m = -1/2`
//! and `sin^2(theta/2)` on `m = +1/2`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::linalg::{self, CMatrix, HermitianEigen, C64, I};
use crate::measures::{measure_from_observable, QuantumMeasureCDF};
use crate::states::{validate_state, DensityOperator, Observable, PositionGrid};

/// Largest supported total spin.
pub const MAX_SPIN: f64 = 20.0;

const PROB_TOL: f64 = 1e-9;
const SUM_TOL: f64 = 1e-10;
const RELATION_TOL: f64 = 1e-10;
const MAX_CONDITION: f64 = 1e8;
/// Interval endpoints are shifted by this much so that atoms sitting at
/// `m` up to rounding fall inside `(m - 1, m]`.
const ATOM_SHIFT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub phi: f64,
    pub psi: f64,
    pub theta: f64,
}

impl EulerAngles {
    pub fn new(phi: f64, psi: f64, theta: f64) -> Result<Self> {
        if !(phi.is_finite() && psi.is_finite() && theta.is_finite()) {
            return Err(TomoError::InvalidParameter("Euler angles must be finite".into()));
        }
        Ok(EulerAngles { phi, psi, theta })
    }

    pub fn zero() -> Self {
        EulerAngles {
            phi: 0.0,
            psi: 0.0,
            theta: 0.0,
        }
    }
}

/// Number of basis states `2j + 1` after checking that `j` is a
/// non-negative half-integer no larger than [`MAX_SPIN`].
pub fn spin_dim(j: f64) -> Result<usize> {
    let twice = 2.0 * j;
    if !(0.0..=2.0 * MAX_SPIN).contains(&twice) || (twice - twice.round()).abs() > 1e-12 {
        return Err(TomoError::InvalidParameter(format!(
            "spin must be a half-integer in [0, {MAX_SPIN}], got {j}"
        )));
    }
    Ok(twice.round() as usize + 1)
}

/// Projection values `m = -j, ..., j`.
pub fn projections(j: f64) -> Result<Vec<f64>> {
    let d = spin_dim(j)?;
    Ok((0..d).map(|k| -j + k as f64).collect())
}

pub fn jz(j: f64) -> Result<CMatrix> {
    let m = projections(j)?;
    Ok(CMatrix::from_diagonal(&DVector::from_iterator(
        m.len(),
        m.iter().map(|v| C64::new(*v, 0.0)),
    )))
}

/// `(J_+ + J_-)/2`, real symmetric.
pub fn jx(j: f64) -> Result<CMatrix> {
    let m = projections(j)?;
    let d = m.len();
    let mut out = CMatrix::zeros(d, d);
    for k in 0..d.saturating_sub(1) {
        let c = 0.5 * (j * (j + 1.0) - m[k] * (m[k] + 1.0)).sqrt();
        out[(k + 1, k)] = C64::new(c, 0.0);
        out[(k, k + 1)] = C64::new(c, 0.0);
    }
    Ok(out)
}

/// `(J_+ - J_-)/2i`.
pub fn jy(j: f64) -> Result<CMatrix> {
    let m = projections(j)?;
    let d = m.len();
    let mut out = CMatrix::zeros(d, d);
    for k in 0..d.saturating_sub(1) {
        let c = 0.5 * (j * (j + 1.0) - m[k] * (m[k] + 1.0)).sqrt();
        out[(k + 1, k)] = C64::new(0.0, -c);
        out[(k, k + 1)] = C64::new(0.0, c);
    }
    Ok(out)
}

/// `exp(-i psi J_z) exp(i theta J_x) exp(-i phi J_z)`.
pub fn rotation_matrix(j: f64, angles: &EulerAngles) -> Result<CMatrix> {
    let m = projections(j)?;
    let d = m.len();
    let x_rot = HermitianEigen::new(&jx(j)?).apply_fn(|l| (I * angles.theta * l).exp());
    Ok(CMatrix::from_fn(d, d, |r, c| {
        (-I * angles.psi * m[r]).exp() * x_rot[(r, c)] * (-I * angles.phi * m[c]).exp()
    }))
}

/// `R J_z R^-1`.
pub fn rotated_jz(j: f64, angles: &EulerAngles) -> Result<Observable> {
    let r = rotation_matrix(j, angles)?;
    Observable::new(linalg::hermitian_part(&(&r * jz(j)? * r.adjoint())))
}

/// Spin density matrix of size `2j + 1`.
#[derive(Debug, Clone)]
pub struct SpinState {
    j: f64,
    elements: CMatrix,
}

impl SpinState {
    pub fn new(j: f64, elements: CMatrix) -> Result<Self> {
        let d = spin_dim(j)?;
        if elements.nrows() != d || elements.ncols() != d {
            return Err(TomoError::DimensionMismatch {
                expected: d,
                found: elements.nrows(),
            });
        }
        let diag = validate_state(&elements)?;
        if !diag.passed {
            return Err(TomoError::Consistency(diag.to_string()));
        }
        Ok(SpinState {
            j,
            elements: linalg::hermitian_part(&elements),
        })
    }

    /// Pure state `|v><v|` for a normalized vector.
    pub fn pure(j: f64, v: &[C64]) -> Result<Self> {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(TomoError::InvalidParameter("zero state vector".into()));
        }
        let n = v.len();
        Self::new(
            j,
            CMatrix::from_fn(n, n, |r, c| v[r] * v[c].conj() / (norm * norm)),
        )
    }

    pub fn maximally_mixed(j: f64) -> Result<Self> {
        let d = spin_dim(j)?;
        Self::new(j, CMatrix::identity(d, d).unscale(d as f64))
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn elements(&self) -> &CMatrix {
        &self.elements
    }
}

impl DensityOperator for SpinState {
    fn matrix(&self) -> &CMatrix {
        &self.elements
    }
}

/// Probabilities of `m = -j..=j` for the rotated `J_z`.
#[derive(Debug, Clone, Serialize)]
pub struct SpinTomogram {
    pub j: f64,
    pub angles: EulerAngles,
    pub probs: Vec<f64>,
}

impl SpinTomogram {
    /// Checks that each probability lies in `[0, 1]` up to 1e-9 and that
    /// they sum to 1 within 1e-10.
    pub fn check(&self) -> Result<()> {
        if let Some(p) = self
            .probs
            .iter()
            .find(|p| **p < -PROB_TOL || **p > 1.0 + PROB_TOL)
        {
            return Err(TomoError::Consistency(format!("probability {p} outside [0, 1]")));
        }
        let sum: f64 = self.probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(TomoError::Normalization {
                norm: sum,
                tolerance: SUM_TOL,
            });
        }
        Ok(())
    }

    pub fn projections(&self) -> Vec<f64> {
        (0..self.probs.len()).map(|k| -self.j + k as f64).collect()
    }
}

/// `w(m) = <m| R^-1 rho R |m>`.
pub fn spin_tomogram(rho: &SpinState, angles: &EulerAngles) -> Result<SpinTomogram> {
    let r = rotation_matrix(rho.j, angles)?;
    let rotated = r.adjoint() * &rho.elements * &r;
    let probs = (0..rho.dim()).map(|k| rotated[(k, k)].re).collect();
    Ok(SpinTomogram {
        j: rho.j,
        angles: *angles,
        probs,
    })
}

/// Builds the distribution function of the rotated `J_z` in the state
/// `rho` and checks `w(m) = F(m) - F(m - 1)` for every `m` against the
/// directly computed tomogram.
pub fn spin_measure_relation(
    rho: &SpinState,
    angles: &EulerAngles,
) -> Result<(QuantumMeasureCDF, SpinTomogram)> {
    let a = rotated_jz(rho.j, angles)?;
    let d = rho.dim();
    // Axis with nodes at every half-integer from -j - 1 to j + 1.
    let axis = PositionGrid::new(-rho.j - 1.0, rho.j + 1.0, 2 * d + 3)?;
    let cdf = measure_from_observable(rho, &a, axis)?;
    let tomo = spin_tomogram(rho, angles)?;
    for (k, m) in tomo.projections().into_iter().enumerate() {
        let from_cdf = cdf.eval(m + ATOM_SHIFT) - cdf.eval(m - 1.0 + ATOM_SHIFT);
        let diff = (from_cdf - tomo.probs[k]).abs();
        if diff > RELATION_TOL {
            return Err(TomoError::Consistency(format!(
                "w({m}) = {} but F({m}) - F({}) = {from_cdf}",
                tomo.probs[k],
                m - 1.0
            )));
        }
    }
    Ok((cdf, tomo))
}

/// Least-squares density matrix from tomograms at several angle triples.
///
/// The unknowns are the `d^2` real parameters of a Hermitian matrix; each
/// tomogram entry contributes one linear equation `Tr(rho P_m) = w(m)`.
/// The solution is trace-renormalized.
pub fn reconstruct_spin_density(tomograms: &[SpinTomogram]) -> Result<SpinState> {
    let first = tomograms
        .first()
        .ok_or_else(|| TomoError::InvalidParameter("no tomograms given".into()))?;
    let j = first.j;
    let d = spin_dim(j)?;
    let n_unknowns = d * d;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for t in tomograms {
        if t.j != j || t.probs.len() != d {
            return Err(TomoError::DimensionMismatch {
                expected: d,
                found: t.probs.len(),
            });
        }
        let r = rotation_matrix(j, &t.angles)?;
        for (k, w) in t.probs.iter().enumerate() {
            // P = R |k><k| R^dagger.
            let col = r.column(k);
            let p = |a: usize, b: usize| col[a] * col[b].conj();
            let mut row = Vec::with_capacity(n_unknowns);
            for a in 0..d {
                row.push(p(a, a).re);
            }
            for a in 0..d {
                for b in a + 1..d {
                    let pba = p(b, a);
                    row.push(2.0 * pba.re);
                    row.push(-2.0 * pba.im);
                }
            }
            rows.push(row);
            rhs.push(*w);
        }
    }
    if rows.len() < n_unknowns {
        return Err(TomoError::RankDeficient {
            condition: f64::INFINITY,
        });
    }
    let a = DMatrix::from_fn(rows.len(), n_unknowns, |r, c| rows[r][c]);
    let b = DVector::from_vec(rhs);
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(TomoError::RankDeficient { condition });
    }
    let x = svd
        .solve(&b, 0.0)
        .map_err(|e| TomoError::Consistency(e.to_string()))?;

    let mut rho = CMatrix::zeros(d, d);
    for a in 0..d {
        rho[(a, a)] = C64::new(x[a], 0.0);
    }
    let mut idx = d;
    for a in 0..d {
        for b in a + 1..d {
            let z = C64::new(x[idx], x[idx + 1]);
            rho[(a, b)] = z;
            rho[(b, a)] = z.conj();
            idx += 2;
        }
    }
    let tr = linalg::trace(&rho).re;
    rho.unscale_mut(tr);
    // Least-squares noise can leave tiny negative eigenvalues; keep the
    // estimate as is rather than projecting, and validate with the usual
    // tolerances.
    SpinState::new(j, rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn random_state(j: f64, rng: &mut ChaCha8Rng) -> SpinState {
        let d = spin_dim(j).unwrap();
        let g = CMatrix::from_fn(d, d, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let rho = &g * g.adjoint();
        let tr = linalg::trace(&rho).re;
        SpinState::new(j, rho.unscale(tr)).unwrap()
    }

    fn random_angles(rng: &mut ChaCha8Rng) -> EulerAngles {
        EulerAngles::new(
            rng.random_range(0.0..2.0 * PI),
            rng.random_range(0.0..2.0 * PI),
            rng.random_range(0.0..PI),
        )
        .unwrap()
    }

    #[test]
    fn half_spin_rotation_matches_closed_form() {
        let (phi, psi, theta) = (0.3, -1.1, 0.8);
        let r = rotation_matrix(0.5, &EulerAngles::new(phi, psi, theta).unwrap()).unwrap();
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let expect = [
            [
                c * (I * (phi + psi) / 2.0).exp(),
                I * s * (-I * (phi - psi) / 2.0).exp(),
            ],
            [
                I * s * (I * (phi - psi) / 2.0).exp(),
                c * (-I * (phi + psi) / 2.0).exp(),
            ],
        ];
        for a in 0..2 {
            for b in 0..2 {
                assert!((r[(a, b)] - expect[a][b]).norm() < 1e-15);
            }
        }
        let det = r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)];
        assert!((det - 1.0).norm() < 1e-12);
        assert!(linalg::max_abs(&(&r * r.adjoint() - CMatrix::identity(2, 2))) < 1e-12);

        let id = rotation_matrix(0.5, &EulerAngles::zero()).unwrap();
        assert!(linalg::max_abs(&(id - CMatrix::identity(2, 2))) < 1e-15);

        let flip = rotation_matrix(0.5, &EulerAngles::new(0.0, 0.0, PI).unwrap()).unwrap();
        assert!((flip[(0, 1)] - I).norm() < 1e-15 && (flip[(1, 0)] - I).norm() < 1e-15);
        assert!(flip[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn rotated_jz_examples() {
        let a = rotated_jz(0.5, &EulerAngles::zero()).unwrap();
        assert!(linalg::max_abs(&(a.elements() - jz(0.5).unwrap())) < 1e-15);
        let a = rotated_jz(0.5, &EulerAngles::new(0.0, 0.0, FRAC_PI_2).unwrap()).unwrap();
        // With J_z = diag(-1/2, 1/2) ordering the quarter turn gives
        // [[0, i/2], [-i/2, 0]].
        assert!((a.elements()[(0, 1)] - I * 0.5).norm() < 1e-15);
        assert!((a.elements()[(1, 0)] + I * 0.5).norm() < 1e-15);
        assert!(a.elements()[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn rotated_spectrum_is_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for j in [0.5, 1.0, 1.5, 3.0] {
            for _ in 0..5 {
                let a = rotated_jz(j, &random_angles(&mut rng)).unwrap();
                let ev = HermitianEigen::new(a.elements()).values;
                for (v, m) in ev.iter().zip(projections(j).unwrap()) {
                    assert!((v - m).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn angular_momentum_algebra() {
        for j in [0.5, 1.0, 2.5] {
            let (x, y, z) = (jx(j).unwrap(), jy(j).unwrap(), jz(j).unwrap());
            let comm = &x * &y - &y * &x;
            assert!(linalg::max_abs(&(comm - z.map(|v| v * I))) < 1e-12);
        }
    }

    #[test]
    fn bernoulli_atoms_for_first_basis_state() {
        let rho = SpinState::pure(0.5, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        for theta in [0.0, 0.7, FRAC_PI_2, PI] {
            let angles = EulerAngles::new(0.4, -0.9, theta).unwrap();
            let (cdf, t) = spin_measure_relation(&rho, &angles).unwrap();
            let c2 = (theta / 2.0).cos().powi(2);
            assert!((t.probs[0] - c2).abs() < 1e-12);
            assert!((t.probs[1] - (1.0 - c2)).abs() < 1e-12);
            assert!((cdf.eval(-0.5 + ATOM_SHIFT) - c2).abs() < 1e-12);
            assert_eq!(cdf.eval(-0.6), 0.0);
            assert!((cdf.eval(0.5 + ATOM_SHIFT) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tomogram_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mixed = SpinState::maximally_mixed(1.5).unwrap();
        let t = spin_tomogram(&mixed, &random_angles(&mut rng)).unwrap();
        assert!(t.probs.iter().all(|p| (p - 0.25).abs() < 1e-14));

        let rho = random_state(1.0, &mut rng);
        let t = spin_tomogram(&rho, &EulerAngles::new(1.3, -0.2, 0.0).unwrap()).unwrap();
        for k in 0..3 {
            assert!((t.probs[k] - rho.elements()[(k, k)].re).abs() < 1e-14);
        }

        let diag = SpinState::new(
            0.5,
            CMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(0.3, 0.0), C64::new(0.7, 0.0)])),
        )
        .unwrap();
        let base = spin_tomogram(&diag, &EulerAngles::new(0.2, 0.0, 1.1).unwrap()).unwrap();
        for _ in 0..10 {
            let psi = rng.random_range(0.0..2.0 * PI);
            let t = spin_tomogram(&diag, &EulerAngles::new(0.2, psi, 1.1).unwrap()).unwrap();
            assert!((t.probs[0] - base.probs[0]).abs() < 1e-14);
        }
    }

    #[test]
    fn relation_holds_for_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for j in [0.5, 1.0, 1.5] {
            for _ in 0..20 {
                let rho = random_state(j, &mut rng);
                let (_, t) = spin_measure_relation(&rho, &random_angles(&mut rng)).unwrap();
                t.check().unwrap();
            }
        }
    }

    #[test]
    fn reconstruction_roundtrips() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let up = SpinState::pure(0.5, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let angles: Vec<EulerAngles> = (0..6).map(|_| random_angles(&mut rng)).collect();
        let toms: Vec<_> = angles.iter().map(|a| spin_tomogram(&up, a).unwrap()).collect();
        let back = reconstruct_spin_density(&toms).unwrap();
        assert!(linalg::max_abs(&(back.elements() - up.elements())) < 1e-10);

        let rho = random_state(1.0, &mut rng);
        let toms: Vec<_> = (0..30)
            .map(|_| spin_tomogram(&rho, &random_angles(&mut rng)).unwrap())
            .collect();
        let back = reconstruct_spin_density(&toms).unwrap();
        assert!(linalg::max_abs(&(back.elements() - rho.elements())) < 1e-8);

        // A single rotation axis cannot see the coherences.
        let same: Vec<_> = (0..5)
            .map(|k| spin_tomogram(&rho, &EulerAngles::new(0.1 * k as f64, 0.0, 0.0).unwrap()).unwrap())
            .collect();
        assert!(matches!(
            reconstruct_spin_density(&same),
            Err(TomoError::RankDeficient { .. })
        ));
    }

    #[test]
    fn rejects_bad_spin() {
        assert!(spin_dim(0.3).is_err());
        assert!(spin_dim(20.5).is_err());
        assert_eq!(spin_dim(20.0).unwrap(), 41);
    }
}
