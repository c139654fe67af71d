//! Ground-state solves: the scalar density equation on its own, and the
//! self-consistent coupled density/field system.

use serde::{Deserialize, Serialize};

use super::coupled::{
    apply_coupled_operator, apply_scalar_operator, chemical_potential, coupled_residual, packed_inner, residual_norms,
    GridField, PotentialSet,
};
use super::eigen::{bicgstab, lanczos_lowest, pcg, probe_tridiagonal, tridiagonal_solve, EigenPair, LanczosConfig};
use super::functionals::local_cohesive;
use super::grid::{Boundary, Geometry, Grid};
use super::poisson::hartree_potential;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum_map;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interaction {
    /// Hartree from a Poisson solve plus the local cohesive term.
    HartreeCohesive,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `sum (rho + S) dV = N`.
    Total,
    /// `sum rho dV = N`.
    DensityOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScfConfig {
    pub mixing: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub interaction: Interaction,
    pub normalization: Normalization,
    /// Inverse-iteration shift below the lowest eigenvalue of the scalar operator.
    pub shift_margin: f64,
    pub eigen_tol: f64,
    pub krylov_dim: usize,
}

impl Default for ScfConfig {
    fn default() -> Self {
        Self {
            mixing: 0.3,
            tol: 1e-8,
            max_iter: 500,
            interaction: Interaction::HartreeCohesive,
            normalization: Normalization::Total,
            shift_margin: 0.1,
            eigen_tol: 1e-11,
            krylov_dim: 200,
        }
    }
}

impl ScfConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mixing > 0.0 && self.mixing <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "mixing",
                reason: format!("must lie in (0, 1], got {}", self.mixing),
            });
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter { name: "tol", reason: format!("must be positive, got {}", self.tol) });
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter { name: "max_iter", reason: "must be at least 1".into() });
        }
        if !(self.shift_margin > 0.0) {
            return Err(Error::InvalidParameter {
                name: "shift_margin",
                reason: format!("must be positive, got {}", self.shift_margin),
            });
        }
        Ok(())
    }

    pub fn lanczos(&self) -> LanczosConfig {
        LanczosConfig { tol: self.eigen_tol, max_restarts: self.max_iter, krylov_dim: self.krylov_dim }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpsSolution {
    /// Nodeless, positive, `sum rho dV = N`.
    pub rho_half: Vec<f64>,
    pub mu: f64,
    pub next_eigenvalue: Option<f64>,
    pub residual_history: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScfResult {
    pub fields: GridField,
    pub mu: f64,
    /// Max-norms of the scalar and vector residuals, one pair per iteration.
    pub residual_history: Vec<(f64, f64)>,
    pub iterations: usize,
    pub converged: bool,
    /// `|sum (rho + S) dV - N|` after each mixing step.
    pub normalization_drift: Vec<f64>,
    /// Effective potential at the returned fields.
    pub v_eff0: Vec<f64>,
    /// Lowest eigenvalue of the scalar operator at the last update.
    pub lowest_eigenvalue: f64,
    /// Set when the two lowest Ritz values coincide; the first converged vector is kept.
    pub degenerate_ground_state: bool,
}

impl ScfResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result contains only finite numbers and plain containers")
    }
}

fn default_start(grid: &Grid) -> Vec<f64> {
    match (grid.geometry(), grid.boundary()) {
        (Geometry::Radial, _) => {
            let n = grid.len() as f64;
            (0..grid.len()).map(|i| 1.0 - i as f64 / (n + 1.0)).collect()
        }
        (Geometry::Cartesian, Boundary::Periodic) => vec![1.0; grid.len()],
        (Geometry::Cartesian, Boundary::Dirichlet) => (0..grid.len())
            .map(|idx| {
                let mut v = 1.0;
                let mut rest = idx;
                for d in (0..grid.ndim()).rev() {
                    let n = grid.dims()[d];
                    let i = rest % n;
                    rest /= n;
                    v *= (std::f64::consts::PI * (i as f64 + 1.0) / (n as f64 + 1.0)).sin();
                }
                v
            })
            .collect(),
    }
}

/// `gap_hint` is a recent estimate of the distance to the second eigenvalue;
/// with it, a start vector already close to the ground state skips Lanczos.
fn lowest_eigenpair(
    grid: &Grid,
    v: &[f64],
    start: Option<&[f64]>,
    gap_hint: Option<f64>,
    cfg: &LanczosConfig,
) -> Result<EigenPair> {
    let weights = grid.weights();
    let fallback;
    let start = match start {
        Some(s) if s.iter().any(|x| *x != 0.0) => s,
        _ => {
            fallback = default_start(grid);
            &fallback
        }
    };
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let bound = 0.5 * grid.laplacian_bound() + vmax;
    if let Some(gap) = gap_hint {
        if let Some(pair) = warm_pair(grid, v, &weights, start, gap) {
            if let Some(refined) = refine(grid, v, &weights, bound, pair, cfg.tol) {
                return Ok(refined);
            }
        }
    }
    let coarse = LanczosConfig { tol: cfg.tol.max(1e-6), ..*cfg };
    let pair = lanczos_lowest(|x, out| apply_scalar_operator(grid, v, x, out), &weights, start, bound, &coarse)?;
    if coarse.tol == cfg.tol {
        return Ok(pair);
    }
    match refine(grid, v, &weights, bound, pair.clone(), cfg.tol) {
        Some(refined) => Ok(refined),
        None => lanczos_lowest(|x, out| apply_scalar_operator(grid, v, x, out), &weights, &pair.vector, bound, cfg),
    }
}

/// The start vector as an eigenpair guess when its residual is small against `gap`.
fn warm_pair(grid: &Grid, v: &[f64], weights: &[f64], start: &[f64], gap: f64) -> Option<EigenPair> {
    let n = grid.len();
    let norm = grid.norm(start);
    if !(norm > 0.0) || !(gap > 0.0) {
        return None;
    }
    let x: Vec<f64> = start.iter().map(|s| s / norm).collect();
    let mut kx = vec![0.0; n];
    apply_scalar_operator(grid, v, &x, &mut kx);
    let theta = grid.inner(&x, &kx);
    let res = pairwise_sum_map(n, &|i| weights[i] * (kx[i] - theta * x[i]).powi(2)).sqrt();
    (res <= 0.05 * gap).then(|| EigenPair {
        value: theta,
        vector: x,
        next_value: Some(theta + gap),
        residual_history: vec![res],
    })
}

/// Shifted inverse iteration from a Lanczos pair. Each step solves
/// `(K - sigma) y = x` by conjugate gradients with `sigma` just below the
/// Rayleigh quotient, so the system stays positive definite.
fn refine(grid: &Grid, v: &[f64], weights: &[f64], bound: f64, mut pair: EigenPair, tol: f64) -> Option<EigenPair> {
    let n = grid.len();
    let stiffness: f64 = grid.spacing().iter().map(|h| 1.0 / (h * h)).sum();
    let floor = 4.0 * f64::EPSILON * bound;
    let mut ky = vec![0.0; n];
    for _ in 0..30 {
        apply_scalar_operator(grid, v, &pair.vector, &mut ky);
        let theta = grid.inner(&pair.vector, &ky);
        let res = pairwise_sum_map(n, &|i| weights[i] * (ky[i] - theta * pair.vector[i]).powi(2)).sqrt();
        pair.value = theta;
        pair.residual_history.push(res);
        let scale = theta.abs().max(1.0);
        if res <= tol * scale + floor {
            return Some(pair);
        }
        let mut delta = (10.0 * res).max(1e-6 * scale);
        if let Some(next) = pair.next_value {
            if next - theta > 4.0 * delta {
                delta = delta.max(0.25 * (next - theta)).min(0.5 * (next - theta));
            }
        }
        let sigma = theta - delta;
        let diag: Vec<f64> = (0..n).map(|i| weights[i] * (stiffness + v[i] - sigma).max(delta)).collect();
        let rhs: Vec<f64> = (0..n).map(|i| weights[i] * pair.vector[i]).collect();
        let op = |x: &[f64], out: &mut [f64]| {
            apply_scalar_operator(grid, v, x, out);
            for i in 0..n {
                out[i] = weights[i] * (out[i] - sigma * x[i]);
            }
        };
        let mut y = if grid.ndim() == 1 && grid.boundary() == Boundary::Dirichlet {
            let (sub, main, sup) = probe_tridiagonal(op, n);
            tridiagonal_solve(&sub, &main, &sup, &rhs).ok()?
        } else {
            let guess: Vec<f64> = pair.vector.iter().map(|x| x / delta).collect();
            pcg(op, &diag, &rhs, &guess, |_| {}, 1e-14, 20 * n + 200).ok()?
        };
        let norm = grid.norm(&y);
        if !(norm > 0.0) || !norm.is_finite() {
            return None;
        }
        let sign = if pairwise_sum_map(n, &|i| weights[i] * y[i]) < 0.0 { -1.0 } else { 1.0 };
        y.iter_mut().for_each(|x| *x *= sign / norm);
        pair.vector = y;
    }
    None
}

/// Lowest eigenpair of `-1/2 lap + v_ext + v_eff0`, scaled to `N` electrons.
pub fn lps_solve(grid: &Grid, v_ext: &[f64], v_eff0: &[f64], n_electrons: f64) -> Result<LpsSolution> {
    lps_solve_with(grid, v_ext, v_eff0, n_electrons, &LanczosConfig::default())
}

pub fn lps_solve_with(
    grid: &Grid,
    v_ext: &[f64],
    v_eff0: &[f64],
    n_electrons: f64,
    cfg: &LanczosConfig,
) -> Result<LpsSolution> {
    if !(n_electrons > 0.0) {
        return Err(Error::InvalidParameter { name: "N", reason: format!("must be positive, got {n_electrons}") });
    }
    grid.check_len(v_ext.len())?;
    grid.check_len(v_eff0.len())?;
    let v: Vec<f64> = v_ext.iter().zip(v_eff0).map(|(a, b)| a + b).collect();
    let pair = lowest_eigenpair(grid, &v, None, None, cfg)?;
    let scale = n_electrons.sqrt();
    Ok(LpsSolution {
        rho_half: pair.vector.iter().map(|x| x * scale).collect(),
        mu: pair.value,
        next_eigenvalue: pair.next_value,
        residual_history: pair.residual_history,
    })
}

/// Hartree plus cohesive potential of `rho`, or zero.
pub fn effective_potential(grid: &Grid, rho: &[f64], interaction: Interaction) -> Result<Vec<f64>> {
    match interaction {
        Interaction::None => Ok(vec![0.0; rho.len()]),
        Interaction::HartreeCohesive => {
            let mut v = hartree_potential(grid, rho)?;
            for (vi, r) in v.iter_mut().zip(rho) {
                *vi += local_cohesive(*r);
            }
            Ok(v)
        }
    }
}

fn norm_integral(grid: &Grid, packed: &[f64], mode: Normalization) -> f64 {
    match mode {
        Normalization::Total => packed_inner(grid, packed, packed),
        Normalization::DensityOnly => {
            let rho: Vec<f64> = (0..grid.len()).map(|i| packed[4 * i] * packed[4 * i]).collect();
            grid.integrate(&rho)
        }
    }
}

fn normalize(grid: &Grid, packed: &mut [f64], n_electrons: f64, mode: Normalization) -> Result<()> {
    let current = norm_integral(grid, packed, mode);
    if !(current > 0.0) || !current.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let s = (n_electrons / current).sqrt();
    packed.iter_mut().for_each(|x| *x *= s);
    Ok(())
}

/// Self-consistent solution of the coupled system.
///
/// Each iteration rebuilds `v_eff0` from the current density, takes `mu` from
/// the Rayleigh quotient, and records both residual max-norms. Unless they
/// are below `tol`, the fields are then replaced by a linear mix of the old
/// fields and a fresh solution at the current potentials: the lowest
/// eigenvector when `Pi = 0`, otherwise one inverse-iteration step of the
/// coupled operator shifted below the scalar ground state.
pub fn scf_solve(grid: &Grid, v_ext: &[f64], pi: &[[f64; 3]], n_electrons: f64, cfg: &ScfConfig) -> Result<ScfResult> {
    cfg.validate()?;
    grid.check_len(v_ext.len())?;
    grid.check_len(pi.len())?;
    if !(n_electrons > 0.0) {
        return Err(Error::InvalidParameter { name: "N", reason: format!("must be positive, got {n_electrons}") });
    }
    let n = grid.len();
    let lanczos = cfg.lanczos();
    let pi_zero = pi.iter().flatten().all(|x| *x == 0.0);

    let initial = lps_solve_with(grid, v_ext, &vec![0.0; n], n_electrons, &lanczos)?;
    let mut packed = GridField::from_density(initial.rho_half).pack();
    normalize(grid, &mut packed, n_electrons, cfg.normalization)?;

    let mut history = Vec::new();
    let mut drift = Vec::new();
    let mut converged = false;
    let mut lowest = initial.mu;
    let mut degenerate = false;
    let mut gap = initial.next_eigenvalue.map(|next| next - initial.mu);
    let (mut mu, mut v_eff0);
    loop {
        let fields = GridField::unpack(&packed);
        v_eff0 = effective_potential(grid, &fields.rho(), cfg.interaction)?;
        let mut pots = PotentialSet::new(v_ext.to_vec(), v_eff0.clone(), pi.to_vec(), 0.0)?;
        mu = chemical_potential(&fields, &pots, grid)?;
        pots.mu = mu;
        let (s_res, v_res) = coupled_residual(&fields, &pots, grid)?;
        let (rs, rv) = residual_norms(&s_res, &v_res);
        if !rs.is_finite() || !rv.is_finite() {
            return Err(Error::NonFinite("SCF residual"));
        }
        history.push((rs, rv));
        if rs < cfg.tol && rv < cfg.tol {
            converged = true;
            break;
        }
        if history.len() >= cfg.max_iter {
            break;
        }

        let v0 = pots.v0();
        let current_rho: Vec<f64> = (0..n).map(|i| packed[4 * i]).collect();
        let pair = lowest_eigenpair(grid, &v0, Some(&current_rho), gap, &lanczos)?;
        gap = pair.next_value.map(|next| next - pair.value).filter(|g| *g > 0.0);
        lowest = pair.value;
        if let Some(next) = pair.next_value {
            degenerate = (next - pair.value).abs() <= 1e-8 * pair.value.abs().max(1.0);
        }

        let mut update = if pi_zero {
            project_on_eigenvector(grid, &packed, &pair.vector)
        } else {
            let sigma = pair.value - cfg.shift_margin;
            let op = |x: &[f64], out: &mut [f64]| {
                apply_coupled_operator(grid, &v0, pi, x, out);
                for (o, xi) in out.iter_mut().zip(x) {
                    *o -= sigma * xi;
                }
            };
            let guess: Vec<f64> = packed.iter().map(|x| x / cfg.shift_margin).collect();
            bicgstab(op, &packed, &guess, 1e-12, 20 * packed.len() + 100)?
        };
        normalize(grid, &mut update, n_electrons, cfg.normalization)?;
        for (p, u) in packed.iter_mut().zip(&update) {
            *p = (1.0 - cfg.mixing) * *p + cfg.mixing * u;
        }
        normalize(grid, &mut packed, n_electrons, cfg.normalization)?;
        drift.push((norm_integral(grid, &packed, cfg.normalization) - n_electrons).abs());
    }

    Ok(ScfResult {
        fields: GridField::unpack(&packed),
        mu,
        iterations: history.len(),
        residual_history: history,
        converged,
        normalization_drift: drift,
        v_eff0,
        lowest_eigenvalue: lowest,
        degenerate_ground_state: degenerate,
    })
}

/// Every component of the packed field replaced by its projection onto `x`;
/// the density component keeps a non-negative coefficient.
fn project_on_eigenvector(grid: &Grid, packed: &[f64], x: &[f64]) -> Vec<f64> {
    let n = grid.len();
    let mut coeff = [0.0; 4];
    for (c, slot) in coeff.iter_mut().enumerate() {
        let comp: Vec<f64> = (0..n).map(|i| packed[4 * i + c]).collect();
        *slot = grid.inner(x, &comp);
    }
    if coeff.iter().all(|c| *c == 0.0) {
        coeff = [1.0, 0.0, 0.0, 0.0];
    }
    if coeff[0] < 0.0 {
        coeff.iter_mut().for_each(|c| *c = -*c);
    }
    let mut out = vec![0.0; 4 * n];
    for i in 0..n {
        for c in 0..4 {
            out[4 * i + c] = x[i] * coeff[c];
        }
    }
    out
}

/// `x,y,z,rho_half,S_half,eSx,eSy,eSz` table with a one-line header.
pub fn field_table_csv(grid: &Grid, fields: &GridField) -> String {
    let mut out = String::from("x,y,z,rho_half,S_half,eSx,eSy,eSz\n");
    for i in 0..fields.len() {
        let p = grid.coords(i);
        let e = fields.e_s[i];
        out.push_str(&format!(
            "{:.10e},{:.10e},{:.10e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
            p[0], p[1], p[2], fields.rho_half[i], fields.s_half[i], e[0], e[1], e[2]
        ));
    }
    out
}
