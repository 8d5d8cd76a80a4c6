use std::f64::consts::PI;

use symtomo_py::api;

#[test]
fn vacuum_tomogram_is_gaussian() {
    let (xs, w) = api::tomogram("vacuum", 1.0, 0.0, 4.0, 41, 8).unwrap();
    for (x, v) in xs.iter().zip(&w) {
        assert!((v - (-x * x).exp() / PI.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn wigner_of_first_excited_state_is_negative_at_origin() {
    let (axis, w) = api::wigner("fock:1", 6.0, 13, 8).unwrap();
    let mid = axis.len() / 2;
    assert!((w[mid][mid] + 2.0).abs() < 1e-6);
}

#[test]
fn quadrature_cdf_is_monotone_and_reaches_one() {
    let (_, f) = api::measure_cdf("coherent:1,0", 0.6, 0.8, 8.0, 161, 24).unwrap();
    assert!(f.windows(2).all(|p| p[1] >= p[0] - 1e-12));
    assert!((f.last().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn spin_roundtrip() {
    let h = PI / 2.0;
    let angles = [(0.0, 0.0, 0.0), (0.0, 0.0, h), (0.0, h, h)];
    let records: Vec<api::SpinRecord> = angles
        .iter()
        .map(|&(a, b, c)| (a, b, c, api::spin_probabilities("up", a, b, c).unwrap().1))
        .collect();
    let rho = api::reconstruct_spin(0.5, &records).unwrap();
    assert!((rho[0][0].re - 1.0).abs() < 1e-10);
    assert!(rho[1][1].norm() < 1e-10 && rho[0][1].norm() < 1e-10);
}

#[test]
fn invalid_states_are_reported() {
    let d = api::validate("type = \"mixed\"\nre = [[1.2, 0.0], [0.0, -0.2]]", 4).unwrap();
    assert!(!d.passed && d.min_eigenvalue < -0.19);
    assert!(api::tomogram("up", 1.0, 0.0, 4.0, 11, 8).is_err());
    assert!(api::tomogram("fock:x", 1.0, 0.0, 4.0, 11, 8).is_err());
}

#[test]
fn harmonic_evolution_returns_after_a_period() {
    let setup = api::EvolveSetup {
        a2: 0.5,
        a1: 0.0,
        a0: 0.0,
        family_half_width: 2.5,
        family_nodes: 64,
        x_half_width: 8.0,
        x_points: 161,
        dim: 24,
    };
    let (_, rows) = api::evolve("coherent:1,0", &[0.0, 2.0 * PI], 1.0, 0.0, &setup).unwrap();
    let diff = rows[0]
        .iter()
        .zip(&rows[1])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(diff < 1e-6, "{diff}");
}
