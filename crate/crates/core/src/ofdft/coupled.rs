//! The coupled density/field equations
//!
//! ```text
//! [-1/2 lap + v0 - mu] rho^(1/2)             = Pi . Lambda
//! [-1/2 lap + v0 - mu] Lambda + rho^(1/2) Pi = Pi x Lambda
//! ```
//!
//! with `Lambda = e_S S^(1/2)`. Fields are packed as four interleaved
//! components per point: `(rho^(1/2), Lambda_x, Lambda_y, Lambda_z)`.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum_map;

/// Density and field amplitudes on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub rho_half: Vec<f64>,
    pub s_half: Vec<f64>,
    /// Unit direction of the field component; `e3` where `s_half = 0`.
    pub e_s: Vec<[f64; 3]>,
}

impl GridField {
    pub fn from_density(rho_half: Vec<f64>) -> Self {
        let n = rho_half.len();
        Self { rho_half, s_half: vec![0.0; n], e_s: vec![[0.0, 0.0, 1.0]; n] }
    }

    /// Builds the field from `Lambda` vectors, splitting each into length and direction.
    pub fn from_lambda(rho_half: Vec<f64>, lambda: &[[f64; 3]]) -> Self {
        let mut s_half = Vec::with_capacity(lambda.len());
        let mut e_s = Vec::with_capacity(lambda.len());
        for l in lambda {
            let s = (l[0] * l[0] + l[1] * l[1] + l[2] * l[2]).sqrt();
            if s > 0.0 {
                s_half.push(s);
                e_s.push([l[0] / s, l[1] / s, l[2] / s]);
            } else {
                s_half.push(0.0);
                e_s.push([0.0, 0.0, 1.0]);
            }
        }
        Self { rho_half, s_half, e_s }
    }

    pub fn len(&self) -> usize {
        self.rho_half.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho_half.is_empty()
    }

    pub fn lambda(&self) -> Vec<[f64; 3]> {
        self.s_half.iter().zip(&self.e_s).map(|(s, e)| [e[0] * s, e[1] * s, e[2] * s]).collect()
    }

    pub fn rho(&self) -> Vec<f64> {
        self.rho_half.iter().map(|r| r * r).collect()
    }

    pub fn field_density(&self) -> Vec<f64> {
        self.s_half.iter().map(|s| s * s).collect()
    }

    /// `rho + S` per point.
    pub fn total_density(&self) -> Vec<f64> {
        self.rho_half.iter().zip(&self.s_half).map(|(r, s)| r * r + s * s).collect()
    }

    pub fn pack(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(4 * self.len());
        for (r, l) in self.rho_half.iter().zip(self.lambda()) {
            out.extend_from_slice(&[*r, l[0], l[1], l[2]]);
        }
        out
    }

    pub fn unpack(packed: &[f64]) -> Self {
        let n = packed.len() / 4;
        let rho_half = (0..n).map(|i| packed[4 * i]).collect();
        let lambda: Vec<[f64; 3]> = (0..n).map(|i| [packed[4 * i + 1], packed[4 * i + 2], packed[4 * i + 3]]).collect();
        Self::from_lambda(rho_half, &lambda)
    }

    pub fn scaled(&self, a: f64) -> Self {
        let lambda: Vec<[f64; 3]> = self.lambda().iter().map(|l| [a * l[0], a * l[1], a * l[2]]).collect();
        Self::from_lambda(self.rho_half.iter().map(|r| a * r).collect(), &lambda)
    }

    fn check(&self, grid: &Grid) -> Result<()> {
        grid.check_len(self.rho_half.len())?;
        grid.check_len(self.s_half.len())?;
        grid.check_len(self.e_s.len())
    }
}

/// Potentials entering the coupled equations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialSet {
    pub v_ext: Vec<f64>,
    pub v_eff0: Vec<f64>,
    pub pi: Vec<[f64; 3]>,
    pub mu: f64,
}

impl PotentialSet {
    pub fn new(v_ext: Vec<f64>, v_eff0: Vec<f64>, pi: Vec<[f64; 3]>, mu: f64) -> Result<Self> {
        if v_eff0.len() != v_ext.len() {
            return Err(Error::GridMismatch { expected: v_ext.len(), found: v_eff0.len() });
        }
        if pi.len() != v_ext.len() {
            return Err(Error::GridMismatch { expected: v_ext.len(), found: pi.len() });
        }
        if pi.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("bivector potential"));
        }
        Ok(Self { v_ext, v_eff0, pi, mu })
    }

    /// `v0 = v_ext + v_eff0`.
    pub fn v0(&self) -> Vec<f64> {
        self.v_ext.iter().zip(&self.v_eff0).map(|(a, b)| a + b).collect()
    }

    pub fn pi_is_zero(&self) -> bool {
        self.pi.iter().flatten().all(|x| *x == 0.0)
    }

    fn check(&self, grid: &Grid) -> Result<()> {
        grid.check_len(self.v_ext.len())?;
        grid.check_len(self.v_eff0.len())?;
        grid.check_len(self.pi.len())
    }
}

/// `out = (-1/2 lap + v) x` for a scalar field.
pub fn apply_scalar_operator(grid: &Grid, v: &[f64], x: &[f64], out: &mut [f64]) {
    grid.laplacian_into(x, out);
    for ((o, vi), xi) in out.iter_mut().zip(v).zip(x) {
        *o = -0.5 * *o + vi * xi;
    }
}

/// `out = H_c x` on packed four-component fields, without the `mu` shift.
pub fn apply_coupled_operator(grid: &Grid, v0: &[f64], pi: &[[f64; 3]], x: &[f64], out: &mut [f64]) {
    let n = grid.len();
    let mut comp = vec![0.0; n];
    let mut kc = vec![0.0; n];
    for c in 0..4 {
        for i in 0..n {
            comp[i] = x[4 * i + c];
        }
        apply_scalar_operator(grid, v0, &comp, &mut kc);
        for i in 0..n {
            out[4 * i + c] = kc[i];
        }
    }
    for i in 0..n {
        let p = pi[i];
        let r = x[4 * i];
        let l = [x[4 * i + 1], x[4 * i + 2], x[4 * i + 3]];
        out[4 * i] -= p[0] * l[0] + p[1] * l[1] + p[2] * l[2];
        let cross = [p[1] * l[2] - p[2] * l[1], p[2] * l[0] - p[0] * l[2], p[0] * l[1] - p[1] * l[0]];
        for d in 0..3 {
            out[4 * i + 1 + d] += r * p[d] - cross[d];
        }
    }
}

/// Pointwise residuals of the scalar and vector equations.
pub fn coupled_residual(fields: &GridField, pots: &PotentialSet, grid: &Grid) -> Result<(Vec<f64>, Vec<[f64; 3]>)> {
    fields.check(grid)?;
    pots.check(grid)?;
    let n = grid.len();
    let packed = fields.pack();
    let mut out = vec![0.0; 4 * n];
    apply_coupled_operator(grid, &pots.v0(), &pots.pi, &packed, &mut out);
    let scalar = (0..n).map(|i| out[4 * i] - pots.mu * packed[4 * i]).collect();
    let vector = (0..n)
        .map(|i| {
            [
                out[4 * i + 1] - pots.mu * packed[4 * i + 1],
                out[4 * i + 2] - pots.mu * packed[4 * i + 2],
                out[4 * i + 3] - pots.mu * packed[4 * i + 3],
            ]
        })
        .collect();
    Ok((scalar, vector))
}

/// Max-norms of the two residual fields.
pub fn residual_norms(scalar: &[f64], vector: &[[f64; 3]]) -> (f64, f64) {
    let s = scalar.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let v = vector.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    (s, v)
}

/// Weighted inner product of packed fields.
pub fn packed_inner(grid: &Grid, a: &[f64], b: &[f64]) -> f64 {
    pairwise_sum_map(grid.len(), &|i| {
        let w = grid.weight(i);
        w * (a[4 * i] * b[4 * i]
            + a[4 * i + 1] * b[4 * i + 1]
            + a[4 * i + 2] * b[4 * i + 2]
            + a[4 * i + 3] * b[4 * i + 3])
    })
}

/// Rayleigh quotient `<Psi, H_c Psi> / <Psi, Psi>`.
pub fn chemical_potential(fields: &GridField, pots: &PotentialSet, grid: &Grid) -> Result<f64> {
    fields.check(grid)?;
    pots.check(grid)?;
    let packed = fields.pack();
    let norm = packed_inner(grid, &packed, &packed);
    if !(norm > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let mut out = vec![0.0; packed.len()];
    apply_coupled_operator(grid, &pots.v0(), &pots.pi, &packed, &mut out);
    Ok(packed_inner(grid, &packed, &out) / norm)
}

/// Potentials that make `fields` an exact solution: per point, solves the
/// four linear equations for `w = v0 - mu` and `Pi`. The result carries
/// `v_ext = w + mu`, `v_eff0 = 0`.
pub fn manufacture_potentials(fields: &GridField, grid: &Grid, mu: f64) -> Result<PotentialSet> {
    fields.check(grid)?;
    let n = grid.len();
    let lambda = fields.lambda();
    let lap_r = grid.laplacian(&fields.rho_half);
    let lap_l: Vec<Vec<f64>> =
        (0..3).map(|d| grid.laplacian(&lambda.iter().map(|l| l[d]).collect::<Vec<_>>())).collect();
    let mut v_ext = Vec::with_capacity(n);
    let mut pi = Vec::with_capacity(n);
    for i in 0..n {
        let r = fields.rho_half[i];
        let l = lambda[i];
        // Unknowns (w, Pi): scalar row r w - L.Pi, vector rows L w + (r I + [L]x) Pi.
        let m = Matrix4::new(
            r, -l[0], -l[1], -l[2], //
            l[0], r, -l[2], l[1], //
            l[1], l[2], r, -l[0], //
            l[2], -l[1], l[0], r,
        );
        let rhs = Vector4::new(0.5 * lap_r[i], 0.5 * lap_l[0][i], 0.5 * lap_l[1][i], 0.5 * lap_l[2][i]);
        let sol = m.lu().solve(&rhs).ok_or(Error::ZeroNorm)?;
        v_ext.push(sol[0] + mu);
        pi.push([sol[1], sol[2], sol[3]]);
    }
    PotentialSet::new(v_ext, vec![0.0; n], pi, mu)
}
