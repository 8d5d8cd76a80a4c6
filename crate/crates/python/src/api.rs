//! Plain Rust entry points behind the Python functions. Everything here
//! takes and returns simple values so the binding layer stays thin.

use symtomo::ctomo::{tomogram_from_fock, wigner_from_density, TomogramFamily};
use symtomo::evolution::{propagate_frames, QuadraticPotential};
use symtomo::measures::measure_of_quadrature;
use symtomo::spin::{reconstruct_spin_density, spin_tomogram, EulerAngles, SpinState, SpinTomogram};
use symtomo::starprod::{measure_family, star_multiply_measures, SymbolLayout};
use symtomo::states::{
    validate_state, Observable, PositionGrid, PositionKernel, StateDiagnostics, StateSpec, SymplecticFrame,
};
use symtomo::{Result, TomoError, C64};

/// One measured spin distribution: Euler angles `(phi, psi, theta)` and
/// the probabilities for `m = -j..=j`.
pub type SpinRecord = (f64, f64, f64, Vec<f64>);

fn oscillator(state: &str) -> Result<StateSpec> {
    let spec = StateSpec::parse(state)?;
    if spec.is_spin() {
        return Err(TomoError::Spec(
            "expected an oscillator state, got a spin state".into(),
        ));
    }
    Ok(spec)
}

fn is_pure(spec: &StateSpec) -> bool {
    matches!(
        spec,
        StateSpec::Fock { .. } | StateSpec::Coherent { .. } | StateSpec::Superposition { .. }
    )
}

pub fn tomogram(
    state: &str,
    mu: f64,
    nu: f64,
    x_half_width: f64,
    x_points: usize,
    dim: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let rho = oscillator(state)?.fock_density(dim)?;
    let xs = PositionGrid::symmetric(x_half_width, x_points)?;
    let t = tomogram_from_fock(&rho, &SymplecticFrame::new(mu, nu)?, xs)?;
    Ok((xs.points(), t.values().to_vec()))
}

/// Wigner function on a square `points x points` grid over `[-half_width, half_width]`.
pub fn wigner(state: &str, half_width: f64, points: usize, dim: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let spec = oscillator(state)?;
    let axis = PositionGrid::symmetric(half_width, points)?;
    let fine = PositionGrid::new(axis.x_min(), axis.x_max(), 2 * (axis.len() - 1) + 1)?;
    let kernel = if is_pure(&spec) {
        PositionKernel::from_wavefunction(&spec.wavefunction(fine)?)
    } else {
        PositionKernel::from_fock(&spec.fock_density(dim)?, fine)
    };
    let w = wigner_from_density(&kernel, 2, axis)?;
    let rows = (0..axis.len())
        .map(|i| (0..axis.len()).map(|j| w.value(i, j)).collect())
        .collect();
    Ok((axis.points(), rows))
}

pub fn measure_cdf(
    state: &str,
    mu: f64,
    nu: f64,
    x_half_width: f64,
    x_points: usize,
    dim: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let rho = oscillator(state)?.fock_density(dim)?;
    let xs = PositionGrid::symmetric(x_half_width, x_points)?;
    let cdf = measure_of_quadrature(&rho, &SymplecticFrame::new(mu, nu)?, xs)?;
    Ok((xs.points(), cdf.values().to_vec()))
}

fn spin_state(state: &str) -> Result<SpinState> {
    let (j, m) = StateSpec::parse(state)?.spin()?;
    SpinState::new(j, m)
}

pub fn spin_probabilities(state: &str, phi: f64, psi: f64, theta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let t = spin_tomogram(&spin_state(state)?, &EulerAngles::new(phi, psi, theta)?)?;
    t.check()?;
    Ok((t.projections(), t.probs))
}

pub fn reconstruct_spin(j: f64, records: &[SpinRecord]) -> Result<Vec<Vec<C64>>> {
    let tomograms = records
        .iter()
        .map(|(phi, psi, theta, probs)| {
            Ok(SpinTomogram {
                j,
                angles: EulerAngles::new(*phi, *psi, *theta)?,
                probs: probs.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rho = reconstruct_spin_density(&tomograms)?;
    let m = rho.elements();
    Ok((0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect())
}

pub fn validate(state: &str, dim: usize) -> Result<StateDiagnostics> {
    validate_state(&StateSpec::parse(state)?.raw_matrix(dim)?)
}

/// Parameters of a time-evolution run under `V(q) = a2 q^2 + a1 q + a0`.
#[derive(Debug, Clone, Copy)]
pub struct EvolveSetup {
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
    /// Square family of initial frames `[-h, h]^2` with `nodes` per side.
    pub family_half_width: f64,
    pub family_nodes: usize,
    pub x_half_width: f64,
    pub x_points: usize,
    pub dim: usize,
}

/// Tomogram of the evolved state in frame `(mu, nu)` at each time.
pub fn evolve(
    state: &str,
    times: &[f64],
    mu: f64,
    nu: f64,
    setup: &EvolveSetup,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let rho = oscillator(state)?.fock_density(setup.dim)?;
    let xs = PositionGrid::symmetric(setup.x_half_width, setup.x_points)?;
    let side = PositionGrid::symmetric(setup.family_half_width, setup.family_nodes)?;
    let mut slices = Vec::with_capacity(side.len() * side.len());
    for m in side.points() {
        for n in side.points() {
            slices.push(tomogram_from_fock(&rho, &SymplecticFrame::new(m, n)?, xs)?);
        }
    }
    let family = TomogramFamily::new(side, side, slices)?;
    let v = QuadraticPotential::new(setup.a2, setup.a1, setup.a0);
    let target = [SymplecticFrame::new(mu, nu)?];
    let rows = times
        .iter()
        .map(|&t| Ok(propagate_frames(&family, &v, t, &target)?[0].values().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok((xs.points(), rows))
}

/// CDF of the star product of two states' measures in frame `(mu, nu)`,
/// computed from their measure families alone.
pub fn star_measure(
    state_a: &str,
    state_b: &str,
    (mu, nu): (f64, f64),
    x_half_width: f64,
    targets: usize,
    dim: usize,
    coarse: bool,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let layout = if coarse {
        SymbolLayout::coarse()
    } else {
        SymbolLayout::default()
    };
    let obs = |s: &str| -> Result<Observable> { Ok(oscillator(s)?.fock_density(dim)?.into()) };
    let fa = measure_family(&obs(state_a)?, &layout)?;
    let fb = measure_family(&obs(state_b)?, &layout)?;
    let xs = PositionGrid::symmetric(x_half_width, targets)?;
    let cdf = star_multiply_measures(&fa, &fb, &SymplecticFrame::new(mu, nu)?, xs)?;
    Ok((xs.points(), cdf.values().to_vec()))
}
