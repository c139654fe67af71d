//! Thomas–Fermi and von Weizsäcker kinetic energies and the local
//! Hartree/cohesive potentials.

use std::f64::consts::PI;

use super::grid::Grid;
use crate::error::Result;
use crate::numeric::pairwise_sum_map;

/// Densities below this contribute nothing to the von Weizsäcker term.
pub const RHO_MASK: f64 = 1e-14;

/// `(3/10) (3 pi^2)^(2/3)`.
pub fn c_tf() -> f64 {
    0.3 * (3.0 * PI * PI).powf(2.0 / 3.0)
}

/// `(T_TF, T_vW)` for a density on the grid.
pub fn kinetic_functionals(rho: &[f64], grid: &Grid) -> Result<(f64, f64)> {
    grid.check_len(rho.len())?;
    let t_tf = c_tf() * pairwise_sum_map(rho.len(), &|i| grid.weight(i) * rho[i].max(0.0).powf(5.0 / 3.0));
    let grad2 = grid.gradient_squared(rho);
    let t_vw = 0.125
        * pairwise_sum_map(rho.len(), &|i| {
            if rho[i] < RHO_MASK {
                0.0
            } else {
                grid.weight(i) * grad2[i] / rho[i]
            }
        });
    Ok((t_tf, t_vw))
}

/// `-3 / (5 r_s)` with `1 / r_s = (4 pi rho / 3)^(1/3)`; zero where `rho = 0`.
pub fn local_cohesive(rho: f64) -> f64 {
    if rho <= 0.0 {
        0.0
    } else {
        -0.6 * (4.0 * PI * rho / 3.0).cbrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::electron_wave::{cohesive_potential, wigner_seitz_radius};

    #[test]
    fn uniform_density() {
        let g = Grid::periodic_box(&[8, 8, 8], &[2.0, 2.0, 2.0]).unwrap();
        let (tf, vw) = kinetic_functionals(&vec![0.5; g.len()], &g).unwrap();
        assert_eq!(vw, 0.0);
        assert!((tf - c_tf() * 0.5f64.powf(5.0 / 3.0) * 8.0).abs() < 1e-12);
    }

    #[test]
    fn cohesive_matches_wigner_seitz_form() {
        for rho in [0.01, 0.3, 2.0] {
            let rs = wigner_seitz_radius(rho);
            assert!((local_cohesive(rho) - cohesive_potential(rs).unwrap()).abs() < 1e-14);
        }
        assert_eq!(local_cohesive(0.0), 0.0);
    }
}
