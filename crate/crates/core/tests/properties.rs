use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symtomo::ctomo::{oracle_tomogram_fock, tomogram_from_fock, tomogram_from_wavefunction};
use symtomo::linalg;
use symtomo::measures::{cdf_from_tomogram, signed_measure_by_rotation};
use symtomo::quad;
use symtomo::spin::{spin_tomogram, EulerAngles, SpinState};
use symtomo::starprod::{dequantize, measure_from_operator, PhasePoint};
use symtomo::states::{
    fock_wavefunction, ladder_operators, FockDensityMatrix, Observable, PositionGrid, SymplecticFrame,
};
use symtomo::{CMatrix, C64};

fn frame(mu: f64, nu: f64) -> SymplecticFrame {
    SymplecticFrame::new(mu, nu).unwrap()
}

#[test]
fn smoothed_measure_derivative_is_the_symbol() {
    let n = 16;
    let (x, _) = ladder_operators(n).unwrap();
    let ops: Vec<Observable> = vec![
        FockDensityMatrix::fock(0, n).unwrap().into(),
        FockDensityMatrix::fock(1, n).unwrap().into(),
        x,
    ];
    let f = frame(0.6, 0.8);
    let sigma = 0.2;
    let axis = PositionGrid::new(-4.0, 4.0, 8001).unwrap();
    for a in &ops {
        let cdf = measure_from_operator(a, &f, axis)
            .unwrap()
            .smoothed(sigma)
            .unwrap();
        let fd = quad::derivative(cdf.values(), axis.spacing());
        let pts: Vec<PhasePoint> = axis
            .points()
            .iter()
            .map(|&x| PhasePoint::new(x, 0.6, 0.8))
            .collect();
        let sym = dequantize(a, &pts, sigma).unwrap();
        let err = fd
            .iter()
            .zip(&sym)
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "{err}");
    }
}

#[test]
fn operator_measure_agrees_across_eigensolvers() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [6, 10, 14] {
        let g = CMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let a = Observable::new(linalg::hermitian_part(&g)).unwrap();
        let axis = PositionGrid::symmetric(5.0, 51).unwrap();
        for f in [frame(1.0, 0.0), frame(-0.3, 1.1), frame(2.0, 0.5)] {
            let direct = measure_from_operator(&a, &f, axis).unwrap();
            let rotated = signed_measure_by_rotation(&a, &f, axis).unwrap();
            assert!(direct.max_abs_diff(&rotated).unwrap() < 1e-10);
        }
    }
}

#[test]
fn parallel_routes_are_bit_stable() {
    let psi = fock_wavefunction(2, PositionGrid::default()).unwrap();
    let xs = PositionGrid::symmetric(6.0, 121).unwrap();
    let f = frame(0.7, -0.9);
    let a = tomogram_from_wavefunction(&psi, &f, xs).unwrap();
    let b = tomogram_from_wavefunction(&psi, &f, xs).unwrap();
    assert_eq!(a.values(), b.values());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fock_tomograms_scale_homogeneously(n in 0usize..5, mu in -2.0f64..2.0, nu in 0.1f64..2.0, lam in 0.3f64..3.0, x in -3.0f64..3.0) {
        let f = frame(mu, nu);
        let g = frame(lam * mu, lam * nu);
        let lhs = oracle_tomogram_fock(n, lam * x, &g);
        let rhs = oracle_tomogram_fock(n, x, &f) / lam;
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn number_basis_tomograms_are_probability_densities(n in 0usize..4, mu in -2.0f64..2.0, nu in -2.0f64..2.0) {
        prop_assume!(mu.hypot(nu) > 0.2);
        let f = frame(mu, nu);
        let xs = PositionGrid::symmetric(12.0 * f.norm(), 2401).unwrap();
        let t = tomogram_from_fock(&FockDensityMatrix::fock(n, 12).unwrap(), &f, xs).unwrap();
        prop_assert!((t.normalization() - 1.0).abs() < 1e-8);
        prop_assert!(t.min_value() > -1e-12);
        let cdf = cdf_from_tomogram(&t).unwrap();
        prop_assert!(cdf.is_monotone(1e-12));
    }

    #[test]
    fn spin_tomograms_sum_to_one(phi in 0.0f64..6.3, psi in 0.0f64..6.3, theta in 0.0f64..3.15, a in 0.0f64..1.0) {
        let rho = SpinState::pure(1.0, &[C64::new(a, 0.0), C64::new(0.0, 1.0 - a), C64::new(0.5, 0.5)]).unwrap();
        let t = spin_tomogram(&rho, &EulerAngles::new(phi, psi, theta).unwrap()).unwrap();
        prop_assert!(t.check().is_ok());
    }
}
