//! Text format for describing a state.
//!
//! A spec is either a one-word shorthand or a TOML table tagged by `type`:
//!
//! ```toml
//! type = "fock"          # n = 2
//! type = "coherent"      # alpha_re = 1.0, alpha_im = 0.0
//! type = "superposition" # re = [0.7071, 0.7071], im = [0, 0] (im optional)
//! type = "mixed"         # re = [[0.5, 0], [0, 0.5]], im = [[...]] (im optional)
//! type = "spin"          # j = 0.5, re = [[1, 0], [0, 0]], im optional
//! ```
//!
//! Shorthands: `fock:N`, `coherent:RE,IM`, `vacuum`, `up`, `down`
//! (`up` is the spin-1/2 state `(1, 0)^T`, i.e. the first basis vector).

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    coherent_fock_coefficients, coherent_wavefunction, density_from_fock_coefficients, fock_wavefunction,
    FockDensityMatrix, PositionGrid, Wavefunction,
};
use crate::error::{Result, TomoError};
use crate::linalg::{self, CMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Fock {
        n: usize,
    },
    Coherent {
        alpha_re: f64,
        #[serde(default)]
        alpha_im: f64,
    },
    /// Number-basis amplitudes, normalized on use.
    Superposition {
        re: Vec<f64>,
        #[serde(default)]
        im: Option<Vec<f64>>,
    },
    /// Number-basis density matrix, given row by row.
    Mixed {
        re: Vec<Vec<f64>>,
        #[serde(default)]
        im: Option<Vec<Vec<f64>>>,
    },
    Spin {
        j: f64,
        re: Vec<Vec<f64>>,
        #[serde(default)]
        im: Option<Vec<Vec<f64>>>,
    },
}

impl StateSpec {
    /// Parses either a shorthand or a TOML document.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if let Some(spec) = Self::parse_shorthand(trimmed)? {
            return Ok(spec);
        }
        toml::from_str(trimmed).map_err(|e| TomoError::Spec(e.to_string()))
    }

    /// Treats `arg` as a file when such a file exists, otherwise as inline text.
    pub fn from_arg(arg: &str) -> Result<Self> {
        let path = Path::new(arg);
        if path.is_file() {
            Self::parse(&std::fs::read_to_string(path)?)
        } else {
            Self::parse(arg)
        }
    }

    fn parse_shorthand(s: &str) -> Result<Option<Self>> {
        let bad = |msg: &str| TomoError::Spec(format!("{msg}: {s:?}"));
        match s {
            "vacuum" => return Ok(Some(StateSpec::Fock { n: 0 })),
            "up" | "down" => {
                let up = s == "up";
                let re = vec![
                    vec![if up { 1.0 } else { 0.0 }, 0.0],
                    vec![0.0, if up { 0.0 } else { 1.0 }],
                ];
                return Ok(Some(StateSpec::Spin { j: 0.5, re, im: None }));
            }
            _ => {}
        }
        if let Some(n) = s.strip_prefix("fock:") {
            let n = n.trim().parse().map_err(|_| bad("bad Fock level"))?;
            return Ok(Some(StateSpec::Fock { n }));
        }
        if let Some(rest) = s.strip_prefix("coherent:") {
            let parts: Vec<&str> = rest.split(',').collect();
            let parse = |p: &str| p.trim().parse::<f64>().map_err(|_| bad("bad coherent amplitude"));
            let (alpha_re, alpha_im) = match parts.as_slice() {
                [re] => (parse(re)?, 0.0),
                [re, im] => (parse(re)?, parse(im)?),
                _ => return Err(bad("expected coherent:RE,IM")),
            };
            return Ok(Some(StateSpec::Coherent { alpha_re, alpha_im }));
        }
        Ok(None)
    }

    pub fn is_spin(&self) -> bool {
        matches!(self, StateSpec::Spin { .. })
    }

    /// Unvalidated number-basis matrix at truncation `dim`. Explicit matrices
    /// keep their own size.
    pub fn raw_matrix(&self, dim: usize) -> Result<CMatrix> {
        match self {
            StateSpec::Mixed { re, im } | StateSpec::Spin { re, im, .. } => {
                linalg::from_real_rows(re, im.as_deref())
            }
            _ => Ok(self.fock_density(dim)?.elements().clone()),
        }
    }

    /// Density matrix in the number basis truncated at `dim` (explicit
    /// matrices keep their own size).
    pub fn fock_density(&self, dim: usize) -> Result<FockDensityMatrix> {
        match self {
            StateSpec::Fock { n } => FockDensityMatrix::fock(*n, dim),
            StateSpec::Coherent { alpha_re, alpha_im } => {
                let c = coherent_fock_coefficients(C64::new(*alpha_re, *alpha_im), dim);
                density_from_fock_coefficients(&c)
            }
            StateSpec::Superposition { .. } => {
                let c = self.amplitudes()?;
                if c.len() > dim {
                    return Err(TomoError::DimensionMismatch {
                        expected: dim,
                        found: c.len(),
                    });
                }
                let mut padded = c;
                padded.resize(dim, C64::new(0.0, 0.0));
                density_from_fock_coefficients(&padded)
            }
            StateSpec::Mixed { re, im } => FockDensityMatrix::new(linalg::from_real_rows(re, im.as_deref())?),
            StateSpec::Spin { .. } => Err(TomoError::Spec(
                "spin states have no oscillator representation".into(),
            )),
        }
    }

    /// Position wavefunction for pure oscillator states.
    pub fn wavefunction(&self, grid: PositionGrid) -> Result<Wavefunction> {
        match self {
            StateSpec::Fock { n } => fock_wavefunction(*n, grid),
            StateSpec::Coherent { alpha_re, alpha_im } => {
                coherent_wavefunction(C64::new(*alpha_re, *alpha_im), grid)
            }
            StateSpec::Superposition { .. } => {
                let c = self.amplitudes()?;
                let mut values = vec![C64::new(0.0, 0.0); grid.len()];
                for (n, cn) in c.iter().enumerate() {
                    if cn.norm() == 0.0 {
                        continue;
                    }
                    let psi = fock_wavefunction(n, grid)?;
                    for (v, p) in values.iter_mut().zip(psi.values()) {
                        *v += cn * p;
                    }
                }
                Wavefunction::normalized(grid, values)
            }
            _ => Err(TomoError::Spec(
                "only fock, coherent and superposition specs have a wavefunction".into(),
            )),
        }
    }

    /// Spin quantum number and density matrix.
    pub fn spin(&self) -> Result<(f64, CMatrix)> {
        match self {
            StateSpec::Spin { j, re, im } => Ok((*j, linalg::from_real_rows(re, im.as_deref())?)),
            _ => Err(TomoError::Spec("not a spin state".into())),
        }
    }

    fn amplitudes(&self) -> Result<Vec<C64>> {
        let StateSpec::Superposition { re, im } = self else {
            unreachable!("amplitudes called on a non-superposition spec")
        };
        if let Some(im) = im {
            if im.len() != re.len() {
                return Err(TomoError::Spec("re and im must have equal length".into()));
            }
        }
        let c: Vec<C64> = re
            .iter()
            .enumerate()
            .map(|(k, r)| C64::new(*r, im.as_ref().map_or(0.0, |im| im[k])))
            .collect();
        let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(TomoError::Spec("superposition has zero norm".into()));
        }
        Ok(c.into_iter().map(|z| z / norm).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthands() {
        assert_eq!(StateSpec::parse("fock:3").unwrap(), StateSpec::Fock { n: 3 });
        assert_eq!(StateSpec::parse("vacuum").unwrap(), StateSpec::Fock { n: 0 });
        assert_eq!(
            StateSpec::parse("coherent:1,-0.5").unwrap(),
            StateSpec::Coherent {
                alpha_re: 1.0,
                alpha_im: -0.5
            }
        );
        let (j, rho) = StateSpec::parse("up").unwrap().spin().unwrap();
        assert_eq!(j, 0.5);
        assert_eq!(rho[(0, 0)], C64::new(1.0, 0.0));
        assert!(StateSpec::parse("fock:x").is_err());
    }

    #[test]
    fn toml_documents() {
        let spec = StateSpec::parse("type = \"mixed\"\nre = [[0.5, 0.0], [0.0, 0.5]]").unwrap();
        let rho = spec.fock_density(32).unwrap();
        assert_eq!(rho.dim(), 2);

        let spec = StateSpec::parse("type = \"superposition\"\nre = [1.0, 1.0]").unwrap();
        let rho = spec.fock_density(4).unwrap();
        assert!((rho.elements()[(0, 1)].re - 0.5).abs() < 1e-15);

        let spec = StateSpec::parse("type = \"coherent\"\nalpha_re = 1.0").unwrap();
        assert!(spec.wavefunction(PositionGrid::default()).is_ok());

        assert!(StateSpec::parse("type = \"fock\"\nn = 1\nextra = 2").is_err());
    }

    #[test]
    fn non_psd_matrix_is_rejected_but_readable() {
        let spec = StateSpec::parse("type = \"mixed\"\nre = [[1.1, 0.0], [0.0, -0.1]]").unwrap();
        assert!(spec.fock_density(2).is_err());
        assert_eq!(spec.raw_matrix(2).unwrap().nrows(), 2);
    }

    #[test]
    fn superposition_wavefunction_matches_density() {
        let spec = StateSpec::Superposition {
            re: vec![0.6, 0.0, 0.8],
            im: None,
        };
        let psi = spec.wavefunction(PositionGrid::default()).unwrap();
        let from_psi = super::super::density_from_wavefunction(&psi, 8).unwrap();
        let direct = spec.fock_density(8).unwrap();
        assert!(linalg::max_abs(&(from_psi.elements() - direct.elements())) < 1e-9);
    }
}
