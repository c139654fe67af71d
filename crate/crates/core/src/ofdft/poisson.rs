//! Hartree potential from `lap V = -4 pi rho` on the solver grid.

use std::f64::consts::PI;

use super::eigen::pcg;
use super::grid::{Boundary, Geometry, Grid};
use crate::error::Result;

const POISSON_TOL: f64 = 1e-13;

/// Hartree potential of `rho`.
///
/// Radial grids solve `u'' = -4 pi r rho` for `u = r V` with `u(0) = 0` and
/// `u = Q` on the outer wall. Periodic grids fix the gauge to zero mean after
/// removing the mean charge. Dirichlet grids are grounded on the walls.
pub fn hartree_potential(grid: &Grid, rho: &[f64]) -> Result<Vec<f64>> {
    grid.check_len(rho.len())?;
    match grid.geometry() {
        Geometry::Radial => Ok(radial_hartree(grid, rho)),
        Geometry::Cartesian => cartesian_hartree(grid, rho),
    }
}

fn radial_hartree(grid: &Grid, rho: &[f64]) -> Vec<f64> {
    let n = grid.len();
    let h = grid.spacing()[0];
    let charge = grid.integrate(rho);
    // Tridiagonal system -u_{i-1} + 2 u_i - u_{i+1} = 4 pi h^2 r_i rho_i.
    let mut rhs: Vec<f64> = (0..n).map(|i| 4.0 * PI * h * h * (i as f64 + 1.0) * h * rho[i]).collect();
    rhs[n - 1] += charge;
    let u = second_difference_solve(rhs);
    u.iter().enumerate().map(|(i, ui)| ui / ((i as f64 + 1.0) * h)).collect()
}

/// Solves `-u_{i-1} + 2 u_i - u_{i+1} = rhs_i` with zero ghost values.
fn second_difference_solve(rhs: Vec<f64>) -> Vec<f64> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = -0.5;
    d[0] = rhs[0] / 2.0;
    for i in 1..n {
        let m = 2.0 + c[i - 1];
        c[i] = -1.0 / m;
        d[i] = (rhs[i] + d[i - 1]) / m;
    }
    let mut u = vec![0.0; n];
    u[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        u[i] = d[i] - c[i] * u[i + 1];
    }
    u
}

fn cartesian_hartree(grid: &Grid, rho: &[f64]) -> Result<Vec<f64>> {
    let n = grid.len();
    let periodic = grid.boundary() == Boundary::Periodic;
    if grid.ndim() == 1 && !periodic {
        let h = grid.spacing()[0];
        return Ok(second_difference_solve(rho.iter().map(|r| 4.0 * PI * h * h * r).collect()));
    }
    let mut rhs: Vec<f64> = rho.iter().map(|r| 4.0 * PI * r).collect();
    let remove_mean = |v: &mut [f64]| {
        if periodic {
            let mean = crate::numeric::pairwise_sum(v) / v.len() as f64;
            v.iter_mut().for_each(|x| *x -= mean);
        }
    };
    remove_mean(&mut rhs);
    let diag_value: f64 = grid.spacing().iter().map(|h| 2.0 / (h * h)).sum();
    let diag = vec![diag_value; n];
    let op = |x: &[f64], out: &mut [f64]| {
        grid.laplacian_into(x, out);
        out.iter_mut().for_each(|v| *v = -*v);
    };
    let mut v = pcg(op, &diag, &rhs, &vec![0.0; n], remove_mean, POISSON_TOL, 20 * n + 100)?;
    remove_mean(&mut v);
    Ok(v)
}
