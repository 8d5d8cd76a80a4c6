use std::f64::consts::SQRT_2;
use std::path::Path;

use serde_json::json;
use symtomo::ctomo::{
    tomogram_from_density, tomogram_from_fock, tomogram_from_wavefunction, tomogram_from_wigner,
    wigner_from_density, wigner_from_tomogram, FamilyLayout, Tomogram, TomogramFamily, WignerGrid,
};
use symtomo::evolution::{propagate_frames, QuadraticPotential};
use symtomo::linalg::{self, HermitianEigen};
use symtomo::measures::{cdf_from_tomogram, measure_from_observable, measure_of_quadrature};
use symtomo::spin::{
    reconstruct_spin_density, rotated_jz, spin_dim, spin_tomogram, EulerAngles, SpinState, SpinTomogram,
};
use symtomo::starprod::{
    dequantize_grid, measure_family, measure_from_operator, star_multiply_measures, SymbolLayout,
};
use symtomo::states::{validate_state, Observable, PositionGrid, PositionKernel, StateSpec, SymplecticFrame};
use symtomo::TomoError;

use crate::args::*;
use crate::config::GridPreset;
use crate::error::CliError;
use crate::output::{Report, Table};

/// Hermiticity allowed in an operator-route product before it is reported
/// as complex.
const PRODUCT_HERMITIAN_TOL: f64 = 1e-10;

struct Ctx<'a> {
    common: &'a Common,
    preset: GridPreset,
}

impl<'a> Ctx<'a> {
    fn new(common: &'a Common) -> Result<Self, CliError> {
        Ok(Ctx {
            common,
            preset: GridPreset::resolve(common.preset.as_deref())?,
        })
    }

    fn spec(&self) -> Result<StateSpec, CliError> {
        let arg = self
            .common
            .state
            .as_deref()
            .ok_or_else(|| CliError::Input("--state is required".into()))?;
        Ok(StateSpec::from_arg(arg)?)
    }

    fn dim(&self) -> usize {
        self.common.dim.unwrap_or(self.preset.dim)
    }

    fn half_width(&self) -> f64 {
        self.common.x_half_width.unwrap_or(self.preset.x_half_width)
    }

    fn x_axis(&self) -> Result<PositionGrid, CliError> {
        let n = self.common.x_points.unwrap_or(self.preset.x_points);
        Ok(PositionGrid::symmetric(self.half_width(), n)?)
    }

    fn wigner_axis(&self, points: Option<usize>) -> Result<PositionGrid, CliError> {
        Ok(PositionGrid::symmetric(
            self.half_width(),
            points.unwrap_or(self.preset.wigner_points),
        )?)
    }
}

fn is_pure(spec: &StateSpec) -> bool {
    matches!(
        spec,
        StateSpec::Fock { .. } | StateSpec::Coherent { .. } | StateSpec::Superposition { .. }
    )
}

fn require_oscillator(spec: &StateSpec) -> Result<(), CliError> {
    if spec.is_spin() {
        return Err(CliError::Input(
            "this command needs an oscillator state, not a spin state".into(),
        ));
    }
    Ok(())
}

fn kernel(spec: &StateSpec, grid: PositionGrid, dim: usize) -> Result<PositionKernel, CliError> {
    if is_pure(spec) {
        Ok(PositionKernel::from_wavefunction(&spec.wavefunction(grid)?))
    } else {
        Ok(PositionKernel::from_fock(&spec.fock_density(dim)?, grid))
    }
}

/// Wigner grid on `axis x axis`: the kernel lives on a grid twice as fine
/// so that every second node is a `q` sample.
fn wigner_grid(spec: &StateSpec, axis: PositionGrid, dim: usize) -> Result<WignerGrid, CliError> {
    let fine = PositionGrid::new(axis.x_min(), axis.x_max(), 2 * (axis.len() - 1) + 1)?;
    Ok(wigner_from_density(&kernel(spec, fine, dim)?, 2, axis)?)
}

fn tomogram_table(t: &Tomogram) -> Table {
    let mut table = Table::new(vec!["X", "mu", "nu", "w"]);
    let (mu, nu) = (t.frame().mu(), t.frame().nu());
    for (x, w) in t.x_axis().points().into_iter().zip(t.values()) {
        table.push(vec![x, mu, nu, *w]);
    }
    table
}

fn wigner_table(w: &WignerGrid) -> Table {
    let mut table = Table::new(vec!["q", "p", "W"]);
    for (i, q) in w.q_axis().points().into_iter().enumerate() {
        for (j, p) in w.p_axis().points().into_iter().enumerate() {
            table.push(vec![q, p, w.value(i, j)]);
        }
    }
    table
}

pub fn tomogram(args: &TomogramArgs) -> Result<Report, CliError> {
    let ctx = Ctx::new(&args.common)?;
    let spec = ctx.spec()?;
    require_oscillator(&spec)?;
    let frame = SymplecticFrame::new(args.mu, args.nu)?;
    let xs = ctx.x_axis()?;
    let route = match args.route {
        TomogramRoute::Auto if is_pure(&spec) => TomogramRoute::Wavefunction,
        TomogramRoute::Auto => TomogramRoute::Fock,
        r => r,
    };
    let t = match route {
        TomogramRoute::Wavefunction => {
            if !is_pure(&spec) {
                return Err(CliError::Input(
                    "the wavefunction route needs a pure state".into(),
                ));
            }
            tomogram_from_wavefunction(&spec.wavefunction(ctx.preset.psi_grid()?)?, &frame, xs)?
        }
        TomogramRoute::Density => {
            let k = kernel(&spec, ctx.preset.psi_grid()?, ctx.dim())?;
            tomogram_from_density(&k, &frame, xs)?
        }
        TomogramRoute::Fock => tomogram_from_fock(&spec.fock_density(ctx.dim())?, &frame, xs)?,
        TomogramRoute::Wigner => {
            let w = wigner_grid(&spec, ctx.wigner_axis(None)?, ctx.dim())?;
            tomogram_from_wigner(&w, &frame, xs)?
        }
        TomogramRoute::Auto => unreachable!("auto is resolved above"),
    };
    Ok(tomogram_table(&t).into())
}

pub fn wigner(args: &WignerArgs) -> Result<Report, CliError> {
    let ctx = Ctx::new(&args.common)?;
    let spec = ctx.spec()?;
    require_oscillator(&spec)?;
    let w = wigner_grid(&spec, ctx.wigner_axis(args.wigner_points)?, ctx.dim())?;
    Ok(wigner_table(&w).into())
}

fn center_of(spec: &StateSpec) -> (f64, f64) {
    match spec {
        StateSpec::Coherent { alpha_re, alpha_im } => (SQRT_2 * alpha_re, SQRT_2 * alpha_im),
        _ => (0.0, 0.0),
    }
}

pub fn reconstruct(args: &ReconstructArgs) -> Result<Report, CliError> {
    let ctx = Ctx::new(&args.common)?;
    if let Some(path) = &args.tomograms {
        let tomos = read_spin_tomograms(path, args.j)?;
        return Ok(density_table(&reconstruct_spin_density(&tomos)?));
    }
    let spec = ctx.spec()?;
    if spec.is_spin() {
        let path = args
            .angles
            .as_ref()
            .ok_or_else(|| CliError::Input("spin reconstruction needs --angles or --tomograms".into()))?;
        let rho = spin_state(&spec, None)?;
        let tomos = read_angles(path)?
            .iter()
            .map(|a| spin_tomogram(&rho, a))
            .collect::<Result<Vec<_>, TomoError>>()?;
        return Ok(density_table(&reconstruct_spin_density(&tomos)?));
    }
    let rho = spec.fock_density(ctx.dim())?;
    let (q0, p0) = center_of(&spec);
    let layout = FamilyLayout::new(args.family_half_width, args.family_nodes)?.with_center(q0, p0);
    let family: TomogramFamily = layout.build(|f, xs| tomogram_from_fock(&rho, f, xs))?;
    let axis = ctx.wigner_axis(args.wigner_points)?;
    Ok(wigner_table(&wigner_from_tomogram(&family, axis, axis)?).into())
}

fn density_table(rho: &SpinState) -> Report {
    let mut table = Table::new(vec!["row", "col", "re", "im"]);
    let m = rho.elements();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            table.push(vec![r as f64, c as f64, m[(r, c)].re, m[(r, c)].im]);
        }
    }
    Report {
        table,
        extra: Some(json!({ "j": rho.j() })),
    }
}

/// Numeric CSV rows; a first line that does not parse is taken as a header.
fn read_numeric_csv(path: &Path, width: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Io(io),
            other => CliError::Input(format!("{}: {other:?}", path.display())),
        })?;
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) if v.len() == width => rows.push(v),
            Ok(v) => {
                return Err(CliError::Input(format!(
                    "{}: line {} has {} columns, expected {width}",
                    path.display(),
                    line + 1,
                    v.len()
                )))
            }
            Err(_) if line == 0 => {}
            Err(e) => {
                return Err(CliError::Input(format!(
                    "{}: line {}: {e}",
                    path.display(),
                    line + 1
                )))
            }
        }
    }
    Ok(rows)
}

fn read_angles(path: &Path) -> Result<Vec<EulerAngles>, CliError> {
    read_numeric_csv(path, 3)?
        .into_iter()
        .map(|r| Ok(EulerAngles::new(r[0], r[1], r[2])?))
        .collect()
}

/// Rows `(m, prob)` measured at one angle triple.
type AngleGroup = ([f64; 3], Vec<(f64, f64)>);

/// Groups `phi,psi,theta,m,prob` rows by angle triple, keeping file order.
fn read_spin_tomograms(path: &Path, j: Option<f64>) -> Result<Vec<SpinTomogram>, CliError> {
    let rows = read_numeric_csv(path, 5)?;
    let mut groups: Vec<AngleGroup> = Vec::new();
    for r in rows {
        let key = [r[0], r[1], r[2]];
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push((r[3], r[4])),
            None => groups.push((key, vec![(r[3], r[4])])),
        }
    }
    let first = groups
        .first()
        .ok_or_else(|| CliError::Input(format!("{}: no tomogram rows", path.display())))?;
    let j = j.unwrap_or((first.1.len() as f64 - 1.0) / 2.0);
    let d = spin_dim(j)?;
    groups
        .into_iter()
        .map(|(k, mut entries)| {
            entries.sort_by(|a, b| a.0.total_cmp(&b.0));
            if entries.len() != d {
                return Err(CliError::Input(format!(
                    "angle triple {k:?} has {} projections, spin {j} needs {d}",
                    entries.len()
                )));
            }
            Ok(SpinTomogram {
                j,
                angles: EulerAngles::new(k[0], k[1], k[2])?,
                probs: entries.into_iter().map(|e| e.1).collect(),
            })
        })
        .collect()
}

fn spin_state(spec: &StateSpec, expected_j: Option<f64>) -> Result<SpinState, CliError> {
    let (j, m) = spec.spin()?;
    if let Some(e) = expected_j {
        if e != j {
            return Err(CliError::Input(format!(
                "--j {e} does not match the state's j = {j}"
            )));
        }
    }
    Ok(SpinState::new(j, m)?)
}

fn angles_of(a: &AngleArgs) -> Result<EulerAngles, CliError> {
    Ok(EulerAngles::new(a.phi, a.psi, a.theta)?)
}

pub fn measure(args: &MeasureArgs) -> Result<Report, CliError> {
    let ctx = Ctx::new(&args.common)?;
    let spec = ctx.spec()?;
    if spec.is_spin() {
        let rho = spin_state(&spec, None)?;
        let a = rotated_jz(rho.j(), &angles_of(&args.angles)?)?;
        let axis = PositionGrid::new(-rho.j() - 1.0, rho.j() + 1.0, 3)?;
        let m = measure_from_observable(&rho, &a, axis)?;
        let mut table = Table::new(vec!["x", "prob"]);
        for &(x, p) in m.atoms().unwrap_or_default() {
            table.push(vec![x, p]);
        }
        return Ok(table.into());
    }
    let frame = SymplecticFrame::new(args.mu, args.nu)?;
    let xs = ctx.x_axis()?;
    let rho = spec.fock_density(ctx.dim())?;
    let cdf = match args.route {
        MeasureRoute::Operator => measure_of_quadrature(&rho, &frame, xs)?,
        MeasureRoute::Tomogram => cdf_from_tomogram(&tomogram_from_fock(&rho, &frame, xs)?)?,
    };
    let mut table = Table::new(vec!["X", "F"]);
    for (x, f) in xs.points().into_iter().zip(cdf.values()) {
        table.push(vec![x, *f]);
    }
    Ok(table.into())
}

pub fn spin(args: &SpinArgs) -> Result<Report, CliError> {
    let ctx = Ctx::new(&args.common)?;
    let rho = spin_state(&ctx.spec()?, args.j)?;
    if let Some(path) = &args.angle_file {
        let mut table = Table::new(vec!["phi", "psi", "theta", "m", "prob"]);
        for a in read_angles(path)? {
            let t = spin_tomogram(&rho, &a)?;
            t.check()?;
            for (m, p) in t.projections().into_iter().zip(&t.probs) {
                table.push(vec![a.phi, a.psi, a.theta, m, *p]);
            }
        }
        return Ok(table.into());
    }
    let t = spin_tomogram(&rho, &angles_of(&args.angles)?)?;
    t.check()?;
    let mut table = Table::new(vec!["m", "prob"]);
    for (m, p) in t.projections().into_iter().zip(&t.probs) {
        table.push(vec![m, *p]);
    }
    Ok(table.into())
}

pub fn star(args: &StarArgs) -> Result<Report, CliError> {
    // The star product works with small truncations; the preset dimension
    // is meant for states.
    let dim = args.common.dim.unwrap_or(12);
    let observable = |arg: &str| -> Result<Observable, CliError> {
        let spec = StateSpec::from_arg(arg)?;
        require_oscillator(&spec)?;
        Ok(spec.fock_density(dim)?.into())
    };
    let a = observable(&state_arg(&args.common)?)?;
    let layout = match args.layout {
        LayoutChoice::Coarse => SymbolLayout::coarse(),
        LayoutChoice::Standard => SymbolLayout::default(),
    };
    if args.mode == StarMode::Symbol {
        let grid = dequantize_grid(&a, &layout)?;
        let mut table = Table::new(vec!["X", "mu", "nu", "re", "im"]);
        for r in grid.rows() {
            table.push(r.to_vec());
        }
        return Ok(table.into());
    }
    let b = match &args.state_b {
        Some(s) => observable(s)?,
        None => a.clone(),
    };
    let frame = SymplecticFrame::new(args.mu, args.nu)?;
    let xs = PositionGrid::symmetric(args.common.x_half_width.unwrap_or(2.0), args.targets)?;
    let cdf = match args.route {
        StarRoute::Operator => {
            let prod = a.product(&b);
            let defect = linalg::hermiticity_defect(&prod);
            if defect > PRODUCT_HERMITIAN_TOL {
                return Err(CliError::Numerical(format!(
                    "a*b is not Hermitian (defect {defect:.3e}); its measure is complex"
                )));
            }
            measure_from_operator(&Observable::new(linalg::hermitian_part(&prod))?, &frame, xs)?
        }
        StarRoute::Kernel => {
            let fa = measure_family(&a, &layout)?;
            let fb = measure_family(&b, &layout)?;
            star_multiply_measures(&fa, &fb, &frame, xs)?
        }
    };
    let mut table = Table::new(vec!["X", "F"]);
    for (x, f) in xs.points().into_iter().zip(cdf.values()) {
        table.push(vec![x, *f]);
    }
    Ok(table.into())
}

fn state_arg(common: &Common) -> Result<String, CliError> {
    common
        .state
        .clone()
        .ok_or_else(|| CliError::Input("--state is required".into()))
}

pub fn evolve(args: &EvolveArgs) -> Result<Report, CliError> {
    let ctx = Ctx::new(&args.common)?;
    let spec = ctx.spec()?;
    require_oscillator(&spec)?;
    if args.t_steps == 0 {
        return Err(CliError::Input("--t-steps must be at least 1".into()));
    }
    let rho = spec.fock_density(ctx.dim())?;
    let xs = ctx.x_axis()?;
    let side = PositionGrid::symmetric(args.family_half_width, args.family_nodes)?;
    let mut slices = Vec::with_capacity(side.len() * side.len());
    for mu in side.points() {
        for nu in side.points() {
            slices.push(tomogram_from_fock(&rho, &SymplecticFrame::new(mu, nu)?, xs)?);
        }
    }
    let family = TomogramFamily::new(side, side, slices)?;
    let v = QuadraticPotential::new(args.a2, args.a1, args.a0);
    let target = [SymplecticFrame::new(args.mu, args.nu)?];
    let mut table = Table::new(vec!["t", "X", "mu", "nu", "w"]);
    for k in 0..args.t_steps {
        let t = if args.t_steps == 1 {
            0.0
        } else {
            args.t_max * k as f64 / (args.t_steps - 1) as f64
        };
        let out = propagate_frames(&family, &v, t, &target)?;
        for (x, w) in xs.points().into_iter().zip(out[0].values()) {
            table.push(vec![t, x, args.mu, args.nu, *w]);
        }
    }
    Ok(table.into())
}

pub fn validate(args: &ValidateArgs) -> Result<Report, CliError> {
    let ctx = Ctx::new(&args.common)?;
    let spec = ctx.spec()?;
    let raw = spec.raw_matrix(ctx.dim())?;
    let diag = validate_state(&raw)?;
    let eig = HermitianEigen::new(&linalg::hermitian_part(&raw));
    let mut table = Table::new(vec!["k", "eigenvalue"]);
    for (k, e) in eig.values.iter().enumerate() {
        table.push(vec![k as f64, *e]);
    }
    eprintln!("{diag}");
    let report = Report {
        table,
        extra: Some(json!({ "diagnostics": diag })),
    };
    Ok(report)
}

/// Exit status for a validation report: the state must pass every check.
pub fn validation_failure(report: &Report) -> Option<CliError> {
    let passed = report
        .extra
        .as_ref()
        .and_then(|e| e.pointer("/diagnostics/passed"))
        .and_then(|v| v.as_bool())?;
    if passed {
        None
    } else {
        let min = report.table.rows.first().map_or(f64::NAN, |r| r[1]);
        Some(CliError::Numerical(format!(
            "state is not a valid density operator (min eigenvalue {min:.6e})"
        )))
    }
}
