//! TOML problem definitions for the solver.
//!
//! ```toml
//! electrons = 1.0
//!
//! [grid]
//! dims = [512]
//! length = [1.0]
//! boundary = "dirichlet"
//!
//! [potential]
//! kind = "box"
//!
//! [bivector]
//! kind = "zero"
//!
//! [scf]
//! mixing = 0.3
//! tol = 1e-8
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::grid::{Boundary, Geometry, Grid};
use super::scf::ScfConfig;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dims: Vec<usize>,
    /// Either `spacing` or `length` per axis.
    #[serde(default)]
    pub spacing: Option<Vec<f64>>,
    #[serde(default)]
    pub length: Option<Vec<f64>>,
    #[serde(default = "default_boundary")]
    pub boundary: Boundary,
    #[serde(default = "default_geometry")]
    pub geometry: Geometry,
    #[serde(default)]
    pub origin: Option<Vec<f64>>,
}

fn default_boundary() -> Boundary {
    Boundary::Dirichlet
}

fn default_geometry() -> Geometry {
    Geometry::Cartesian
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    /// No external potential; confinement comes from the walls.
    #[default]
    Box,
    /// `-Z / sqrt(|r - c|^2 + a^2)`.
    Coulomb {
        z: f64,
        #[serde(default)]
        softening: f64,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    Uniform {
        value: f64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BivectorSpec {
    #[default]
    Zero,
    Constant {
        value: [f64; 3],
    },
    /// One vector per grid point in storage order.
    Table {
        values: Vec<[f64; 3]>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub electrons: f64,
    pub grid: GridSpec,
    #[serde(default)]
    pub potential: PotentialSpec,
    #[serde(default)]
    pub bivector: BivectorSpec,
    #[serde(default)]
    pub scf: ScfConfig,
}

/// A problem ready for the solver.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub grid: Grid,
    pub v_ext: Vec<f64>,
    pub pi: Vec<[f64; 3]>,
    pub electrons: f64,
    pub scf: ScfConfig,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        let spacing = match (&self.spacing, &self.length) {
            (Some(h), None) => h.clone(),
            (None, Some(l)) => {
                if l.len() != self.dims.len() {
                    return Err(Error::Problem(format!("{} lengths for {} axes", l.len(), self.dims.len())));
                }
                let extra = match self.boundary {
                    Boundary::Dirichlet => 1.0,
                    Boundary::Periodic => 0.0,
                };
                l.iter().zip(&self.dims).map(|(l, &n)| l / (n as f64 + extra)).collect()
            }
            _ => return Err(Error::Problem("grid needs exactly one of `spacing` or `length`".into())),
        };
        let grid = match self.geometry {
            Geometry::Cartesian => Grid::cartesian(&self.dims, &spacing, self.boundary)?,
            Geometry::Radial => {
                if self.dims.len() != 1 || self.boundary != Boundary::Dirichlet {
                    return Err(Error::Problem("radial grids are one-dimensional with a Dirichlet wall".into()));
                }
                Grid::radial(self.dims[0], spacing[0])?
            }
        };
        match &self.origin {
            Some(o) => grid.with_origin(o),
            None => Ok(grid),
        }
    }
}

impl PotentialSpec {
    pub fn evaluate(&self, grid: &Grid) -> Result<Vec<f64>> {
        let v: Vec<f64> = match self {
            PotentialSpec::Box => vec![0.0; grid.len()],
            PotentialSpec::Uniform { value } => vec![*value; grid.len()],
            PotentialSpec::Coulomb { z, softening, center } => {
                let c = match (grid.geometry(), center) {
                    (Geometry::Radial, _) => [0.0; 3],
                    (_, None) => [0.0; 3],
                    (_, Some(c)) => {
                        if c.len() != grid.ndim() {
                            return Err(Error::Problem(format!(
                                "center has {} components for {} axes",
                                c.len(),
                                grid.ndim()
                            )));
                        }
                        let mut out = [0.0; 3];
                        out[..c.len()].copy_from_slice(c);
                        out
                    }
                };
                (0..grid.len())
                    .map(|i| {
                        let p = grid.coords(i);
                        let d2 = (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) + (p[2] - c[2]).powi(2);
                        -z / (d2 + softening * softening).sqrt()
                    })
                    .collect()
            }
        };
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Problem("external potential is singular on a grid point; add softening".into()));
        }
        Ok(v)
    }
}

impl BivectorSpec {
    pub fn evaluate(&self, grid: &Grid) -> Result<Vec<[f64; 3]>> {
        let pi = match self {
            BivectorSpec::Zero => vec![[0.0; 3]; grid.len()],
            BivectorSpec::Constant { value } => vec![*value; grid.len()],
            BivectorSpec::Table { values } => {
                grid.check_len(values.len())?;
                values.clone()
            }
        };
        if pi.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("bivector potential"));
        }
        Ok(pi)
    }
}

impl ProblemFile {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Problem(e.to_string()))
    }

    pub fn build(&self) -> Result<Problem> {
        if !(self.electrons > 0.0) {
            return Err(Error::Problem(format!("electrons must be positive, got {}", self.electrons)));
        }
        self.scf.validate()?;
        let grid = self.grid.build()?;
        let v_ext = self.potential.evaluate(&grid)?;
        let pi = self.bivector.evaluate(&grid)?;
        Ok(Problem { grid, v_ext, pi, electrons: self.electrons, scf: self.scf.clone() })
    }
}

impl Problem {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        ProblemFile::from_toml_str(text)?.build()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }
}
