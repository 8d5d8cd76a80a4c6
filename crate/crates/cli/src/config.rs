use std::collections::BTreeSet;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use symtomo::states::PositionGrid;

use crate::error::CliError;

pub const PRESET_ENV: &str = "SYMTOMO_GRID_PRESET";

/// Sampling defaults selected by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPreset {
    pub x_half_width: f64,
    pub x_points: usize,
    /// Position grid for wavefunctions and density kernels.
    pub psi_half_width: f64,
    pub psi_points: usize,
    pub wigner_points: usize,
    pub dim: usize,
}

impl GridPreset {
    pub fn named(name: &str) -> Result<Self, CliError> {
        match name {
            "coarse" => Ok(GridPreset {
                x_half_width: 6.0,
                x_points: 121,
                psi_half_width: 10.0,
                psi_points: 501,
                wigner_points: 41,
                dim: 24,
            }),
            "standard" => Ok(GridPreset {
                x_half_width: 8.0,
                x_points: 321,
                psi_half_width: 10.0,
                psi_points: 1001,
                wigner_points: 81,
                dim: 32,
            }),
            "fine" => Ok(GridPreset {
                x_half_width: 10.0,
                x_points: 1001,
                psi_half_width: 12.0,
                psi_points: 1601,
                wigner_points: 161,
                dim: 48,
            }),
            other => Err(CliError::Input(format!(
                "unknown grid preset {other:?} (expected coarse, standard or fine)"
            ))),
        }
    }

    /// Flag first, then the environment variable, then `standard`.
    pub fn resolve(flag: Option<&str>) -> Result<Self, CliError> {
        match flag {
            Some(name) => Self::named(name),
            None => match std::env::var(PRESET_ENV) {
                Ok(name) if !name.is_empty() => Self::named(&name),
                _ => Self::named("standard"),
            },
        }
    }

    pub fn psi_grid(&self) -> Result<PositionGrid, CliError> {
        Ok(PositionGrid::symmetric(self.psi_half_width, self.psi_points)?)
    }
}

/// Reads a TOML config and lays its keys over the parsed flags. Keys are
/// the long flag names with `_` for `-`; a table named after the
/// subcommand overrides top-level keys. Unknown keys are rejected.
pub fn overlay<T>(args: &T, path: &Path, subcommand: &str, known: &BTreeSet<String>) -> Result<T, CliError>
where
    T: Serialize + DeserializeOwned,
{
    let text = std::fs::read_to_string(path)?;
    let cfg: toml::Table =
        toml::from_str(&text).map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))?;
    let mut merged =
        toml::Table::try_from(args).map_err(|e| CliError::Input(format!("cannot encode flags: {e}")))?;

    let mut layers = vec![];
    let mut top = toml::Table::new();
    for (k, v) in cfg {
        match v {
            toml::Value::Table(t) if k == subcommand => layers.push(t),
            // Sections for other subcommands are allowed and ignored.
            toml::Value::Table(_) => {}
            other => {
                top.insert(k, other);
            }
        }
    }
    layers.insert(0, top);
    for layer in layers {
        for (k, v) in layer {
            if !known.contains(&k) {
                return Err(CliError::Input(format!(
                    "unknown config key {k:?} for {subcommand}"
                )));
            }
            merged.insert(k, v);
        }
    }
    merged
        .try_into()
        .map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))
}
