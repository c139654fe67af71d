//! Real-space grids, weighted quadrature and second-order stencils.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum_map;

pub const MIN_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Field vanishes on ghost points one spacing beyond either end.
    Dirichlet,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    Cartesian,
    /// Spherically symmetric fields on `r_i = (i + 1) h`.
    Radial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    dims: Vec<usize>,
    spacing: Vec<f64>,
    origin: Vec<f64>,
    boundary: Boundary,
    geometry: Geometry,
}

impl Grid {
    pub fn cartesian(dims: &[usize], spacing: &[f64], boundary: Boundary) -> Result<Self> {
        if dims.is_empty() || dims.len() > 3 {
            return Err(Error::InvalidGrid(format!("1 to 3 axes supported, got {}", dims.len())));
        }
        if spacing.len() != dims.len() {
            return Err(Error::InvalidGrid(format!("{} spacings given for {} axes", spacing.len(), dims.len())));
        }
        if let Some(d) = dims.iter().find(|&&d| d < MIN_POINTS) {
            return Err(Error::InvalidGrid(format!("axes need at least {MIN_POINTS} points, got {d}")));
        }
        if let Some(h) = spacing.iter().find(|&&h| !(h > 0.0) || !h.is_finite()) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {h}")));
        }
        Ok(Self {
            dims: dims.to_vec(),
            spacing: spacing.to_vec(),
            origin: vec![0.0; dims.len()],
            boundary,
            geometry: Geometry::Cartesian,
        })
    }

    /// Interior points of a box `[0, L]` with walls on the ghost points, `h = L / (n + 1)`.
    pub fn dirichlet_box(dims: &[usize], lengths: &[f64]) -> Result<Self> {
        let spacing = Self::spacing_from_lengths(dims, lengths, 1)?;
        Self::cartesian(dims, &spacing, Boundary::Dirichlet)
    }

    /// Periodic cell of side `L`, `h = L / n`.
    pub fn periodic_box(dims: &[usize], lengths: &[f64]) -> Result<Self> {
        let spacing = Self::spacing_from_lengths(dims, lengths, 0)?;
        Self::cartesian(dims, &spacing, Boundary::Periodic)
    }

    fn spacing_from_lengths(dims: &[usize], lengths: &[f64], extra: usize) -> Result<Vec<f64>> {
        if dims.len() != lengths.len() {
            return Err(Error::InvalidGrid(format!("{} lengths given for {} axes", lengths.len(), dims.len())));
        }
        Ok(dims.iter().zip(lengths).map(|(&n, &l)| l / (n + extra) as f64).collect())
    }

    /// Radial grid `r_i = (i + 1) h`, `i < points`, with the field vanishing at `(points + 1) h`.
    pub fn radial(points: usize, spacing: f64) -> Result<Self> {
        let mut g = Self::cartesian(&[points], &[spacing], Boundary::Dirichlet)?;
        g.geometry = Geometry::Radial;
        Ok(g)
    }

    pub fn with_origin(mut self, origin: &[f64]) -> Result<Self> {
        if origin.len() != self.dims.len() {
            return Err(Error::InvalidGrid(format!(
                "origin has {} components for {} axes",
                origin.len(),
                self.dims.len()
            )));
        }
        if self.geometry == Geometry::Radial {
            return Err(Error::InvalidGrid("radial grids are centred at r = 0".into()));
        }
        self.origin = origin.to_vec();
        Ok(self)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn strides(&self) -> [usize; 3] {
        let mut s = [0; 3];
        let mut acc = 1;
        for d in (0..self.ndim()).rev() {
            s[d] = acc;
            acc *= self.dims[d];
        }
        s
    }

    fn unravel(&self, idx: usize) -> [usize; 3] {
        let s = self.strides();
        let mut out = [0; 3];
        for d in 0..self.ndim() {
            out[d] = (idx / s[d]) % self.dims[d];
        }
        out
    }

    /// Position of one axis index.
    pub fn axis_coordinate(&self, axis: usize, i: usize) -> f64 {
        let offset = match self.boundary {
            Boundary::Dirichlet => 1.0,
            Boundary::Periodic => 0.0,
        };
        self.origin[axis] + (i as f64 + offset) * self.spacing[axis]
    }

    /// Cartesian position of a point; unused axes are zero. Radial grids return `(r, 0, 0)`.
    pub fn coords(&self, idx: usize) -> [f64; 3] {
        let ijk = self.unravel(idx);
        let mut p = [0.0; 3];
        for d in 0..self.ndim() {
            p[d] = self.axis_coordinate(d, ijk[d]);
        }
        p
    }

    /// Quadrature weight of a point.
    pub fn weight(&self, idx: usize) -> f64 {
        match self.geometry {
            Geometry::Cartesian => self.spacing.iter().product(),
            Geometry::Radial => {
                let h = self.spacing[0];
                let r = (idx as f64 + 1.0) * h;
                4.0 * PI * r * r * h
            }
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.weight(i)).collect()
    }

    pub fn check_len(&self, found: usize) -> Result<()> {
        if found != self.len() {
            return Err(Error::GridMismatch { expected: self.len(), found });
        }
        Ok(())
    }

    /// Weighted sum `sum w_i f_i`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        pairwise_sum_map(self.len(), &|i| self.weight(i) * f[i])
    }

    /// Weighted inner product `sum w_i a_i b_i`.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        pairwise_sum_map(self.len(), &|i| self.weight(i) * a[i] * b[i])
    }

    pub fn norm(&self, a: &[f64]) -> f64 {
        self.inner(a, a).sqrt()
    }

    /// Value of `f` at the neighbour `step` (+1 or -1) along `axis`, honouring the boundary.
    fn neighbour(&self, f: &[f64], idx: usize, ijk: &[usize; 3], axis: usize, up: bool) -> f64 {
        let n = self.dims[axis];
        let s = self.strides()[axis];
        let i = ijk[axis];
        match (self.boundary, up) {
            (Boundary::Periodic, true) => {
                if i + 1 == n {
                    f[idx + s - n * s]
                } else {
                    f[idx + s]
                }
            }
            (Boundary::Periodic, false) => {
                if i == 0 {
                    f[idx + (n - 1) * s]
                } else {
                    f[idx - s]
                }
            }
            (Boundary::Dirichlet, true) => {
                if i + 1 == n {
                    0.0
                } else {
                    f[idx + s]
                }
            }
            (Boundary::Dirichlet, false) => {
                if i == 0 {
                    0.0
                } else {
                    f[idx - s]
                }
            }
        }
    }

    /// Second-order Laplacian written into `out`.
    pub fn laplacian_into(&self, f: &[f64], out: &mut [f64]) {
        match self.geometry {
            Geometry::Radial => {
                let h = self.spacing[0];
                let n = self.len();
                let u = |j: usize| (j as f64 + 1.0) * h * f[j];
                out.par_iter_mut().enumerate().for_each(|(i, o)| {
                    let r = (i as f64 + 1.0) * h;
                    let left = if i == 0 { 0.0 } else { u(i - 1) };
                    let right = if i + 1 == n { 0.0 } else { u(i + 1) };
                    *o = (right - 2.0 * u(i) + left) / (h * h * r);
                });
            }
            Geometry::Cartesian => {
                out.par_iter_mut().enumerate().for_each(|(idx, o)| {
                    let ijk = self.unravel(idx);
                    let mut acc = 0.0;
                    for d in 0..self.ndim() {
                        let h2 = self.spacing[d] * self.spacing[d];
                        let up = self.neighbour(f, idx, &ijk, d, true);
                        let down = self.neighbour(f, idx, &ijk, d, false);
                        acc += (up - 2.0 * f[idx] + down) / h2;
                    }
                    *o = acc;
                });
            }
        }
    }

    pub fn laplacian(&self, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; f.len()];
        self.laplacian_into(f, &mut out);
        out
    }

    /// `|grad f|^2` per point by central differences. The first radial point
    /// uses a one-sided stencil since `r = 0` is not a grid point.
    pub fn gradient_squared(&self, f: &[f64]) -> Vec<f64> {
        match self.geometry {
            Geometry::Radial => {
                let h = self.spacing[0];
                let n = self.len();
                (0..n)
                    .into_par_iter()
                    .map(|i| {
                        let d = if i == 0 {
                            (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
                        } else {
                            let right = if i + 1 == n { 0.0 } else { f[i + 1] };
                            (right - f[i - 1]) / (2.0 * h)
                        };
                        d * d
                    })
                    .collect()
            }
            Geometry::Cartesian => (0..self.len())
                .into_par_iter()
                .map(|idx| {
                    let ijk = self.unravel(idx);
                    let mut acc = 0.0;
                    for d in 0..self.ndim() {
                        let up = self.neighbour(f, idx, &ijk, d, true);
                        let down = self.neighbour(f, idx, &ijk, d, false);
                        let g = (up - down) / (2.0 * self.spacing[d]);
                        acc += g * g;
                    }
                    acc
                })
                .collect(),
        }
    }

    /// Largest eigenvalue bound of `-lap`, used for solver tolerances.
    pub fn laplacian_bound(&self) -> f64 {
        self.spacing.iter().map(|h| 4.0 / (h * h)).sum()
    }
}

/// Second-order Laplacian of a scalar field.
pub fn laplacian(field: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    grid.check_len(field.len())?;
    Ok(grid.laplacian(field))
}
