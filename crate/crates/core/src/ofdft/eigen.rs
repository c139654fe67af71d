//! Krylov solvers: restarted Lanczos for the lowest eigenpair of an operator
//! that is self-adjoint in a weighted inner product, preconditioned conjugate
//! gradients, and BiCGSTAB for the non-symmetric coupled block.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum_map;

fn weighted_dot(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    pairwise_sum_map(a.len(), &|i| w[i] * a[i] * b[i])
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    pairwise_sum_map(a.len(), &|i| a[i] * b[i])
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LanczosConfig {
    /// Relative residual target, scaled by `max(|theta|, 1)`.
    pub tol: f64,
    pub max_restarts: usize,
    pub krylov_dim: usize,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self { tol: 1e-11, max_restarts: 500, krylov_dim: 200 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit vector in the weighted norm with positive weighted sum.
    pub vector: Vec<f64>,
    /// Second-lowest Ritz value of the final Krylov space, if there was one.
    pub next_value: Option<f64>,
    pub residual_history: Vec<f64>,
}

/// Lowest eigenpair of `op` by Lanczos with full reorthogonalization,
/// restarted from the current Ritz vector.
pub fn lanczos_lowest<F>(
    op: F,
    weights: &[f64],
    start: &[f64],
    norm_bound: f64,
    cfg: &LanczosConfig,
) -> Result<EigenPair>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = weights.len();
    if start.len() != n {
        return Err(Error::GridMismatch { expected: n, found: start.len() });
    }
    let mut x = start.to_vec();
    let x_norm = weighted_dot(weights, &x, &x).sqrt();
    if !(x_norm > 0.0) || !x_norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    x.iter_mut().for_each(|v| *v /= x_norm);

    let m = cfg.krylov_dim.clamp(1, n);
    let mut history = Vec::new();
    let mut scratch = vec![0.0; n];
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    for _ in 0..cfg.max_restarts.max(1) {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        basis.push(x.clone());
        for j in 0..m {
            op(&basis[j], &mut scratch);
            let mut w = scratch.clone();
            let a = weighted_dot(weights, &basis[j], &w);
            alpha.push(a);
            // Two passes of classical Gram-Schmidt against the whole basis.
            for _ in 0..2 {
                for q in &basis {
                    let c = weighted_dot(weights, q, &w);
                    axpy(&mut w, -c, q);
                }
            }
            let b = weighted_dot(weights, &w, &w).sqrt();
            if j + 1 == m || b <= f64::EPSILON * (a.abs() + norm_bound) {
                break;
            }
            beta.push(b);
            w.iter_mut().for_each(|v| *v /= b);
            basis.push(w);
        }
        let k = alpha.len();
        let (theta, next, y) = lowest_ritz(&alpha, &beta);

        let mut ritz = vec![0.0; n];
        for (i, q) in basis.iter().enumerate().take(k) {
            axpy(&mut ritz, y[i], q);
        }
        let s = pairwise_sum_map(n, &|i| weights[i] * ritz[i]);
        let sign = if s < 0.0 { -1.0 } else { 1.0 };
        let rn = weighted_dot(weights, &ritz, &ritz).sqrt();
        ritz.iter_mut().for_each(|v| *v *= sign / rn);

        op(&ritz, &mut scratch);
        let res = pairwise_sum_map(n, &|i| {
            let r = scratch[i] - theta * ritz[i];
            weights[i] * r * r
        })
        .sqrt();
        history.push(res);
        if !res.is_finite() {
            return Err(Error::NonFinite("Lanczos iteration"));
        }
        let floor = 4.0 * f64::EPSILON * norm_bound;
        let scale = theta.abs().max(1.0);
        if res < 0.99 * best {
            best = res;
            stalled = 0;
        } else {
            stalled += 1;
        }
        // A residual pinned at the rounding floor stops improving under restarts.
        let at_floor = stalled >= 5 && best <= cfg.tol.sqrt() * scale;
        if res <= cfg.tol * scale + floor || at_floor {
            return Ok(EigenPair { value: theta, vector: ritz, next_value: next, residual_history: history });
        }
        x = ritz;
    }
    let residual = *history.last().unwrap_or(&f64::INFINITY);
    Err(Error::NotConverged { solver: "lanczos", iterations: history.len(), residual, history })
}

/// Bands `(sub, diag, sup)` of a three-point operator, read off from three
/// comb-shaped probes.
pub fn probe_tridiagonal<F>(op: F, n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>)
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut probe = vec![0.0; n];
    let mut out = vec![0.0; n];
    for phase in 0..3.min(n) {
        probe.iter_mut().enumerate().for_each(|(i, p)| *p = if i % 3 == phase { 1.0 } else { 0.0 });
        op(&probe, &mut out);
        for j in (phase..n).step_by(3) {
            diag[j] = out[j];
            if j > 0 {
                sup[j - 1] = out[j - 1];
            }
            if j + 1 < n {
                sub[j + 1] = out[j + 1];
            }
        }
    }
    (sub, diag, sup)
}

/// Thomas algorithm for `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
pub fn tridiagonal_solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    for i in 0..n {
        let m = diag[i] - if i > 0 { sub[i] * c[i - 1] } else { 0.0 };
        if m == 0.0 || !m.is_finite() {
            return Err(Error::NonFinite("tridiagonal pivot"));
        }
        c[i] = sup[i] / m;
        d[i] = (rhs[i] - if i > 0 { sub[i] * d[i - 1] } else { 0.0 }) / m;
    }
    let mut x = d;
    for i in (0..n.saturating_sub(1)).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Lowest and second-lowest eigenvalues of the tridiagonal `(alpha, beta)`
/// with the lowest eigenvector.
fn lowest_ritz(alpha: &[f64], beta: &[f64]) -> (f64, Option<f64>, Vec<f64>) {
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let next = order.get(1).map(|&i| eig.eigenvalues[i]);
    (eig.eigenvalues[order[0]], next, eig.eigenvectors.column(order[0]).iter().copied().collect())
}

/// Preconditioned conjugate gradients for a symmetric positive (semi)definite
/// operator. `project` is applied to iterates and residuals to stay in the
/// range of a singular operator.
pub fn pcg<F, P>(
    op: F,
    diag: &[f64],
    rhs: &[f64],
    x0: &[f64],
    project: P,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
    P: Fn(&mut [f64]),
{
    let n = rhs.len();
    let mut x = x0.to_vec();
    project(&mut x);
    let mut ax = vec![0.0; n];
    op(&x, &mut ax);
    let mut r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
    project(&mut r);
    let b_norm = dot(rhs, rhs).sqrt().max(f64::MIN_POSITIVE);
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(ri, d)| ri / d).collect();
    project(&mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut history = Vec::new();
    for _ in 0..max_iter {
        let rn = dot(&r, &r).sqrt();
        history.push(rn / b_norm);
        if rn <= tol * b_norm {
            return Ok(x);
        }
        op(&p, &mut ax);
        let pap = dot(&p, &ax);
        if !(pap > 0.0) {
            break;
        }
        let a = rz / pap;
        axpy(&mut x, a, &p);
        axpy(&mut r, -a, &ax);
        project(&mut r);
        z = r.iter().zip(diag).map(|(ri, d)| ri / d).collect();
        project(&mut z);
        let rz_new = dot(&r, &z);
        let b = rz_new / rz;
        rz = rz_new;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + b * *pi;
        }
    }
    let rn = dot(&r, &r).sqrt() / b_norm;
    if rn <= tol {
        return Ok(x);
    }
    history.push(rn);
    Err(Error::NotConverged { solver: "conjugate gradients", iterations: history.len(), residual: rn, history })
}

/// BiCGSTAB for a general non-singular operator.
pub fn bicgstab<F>(op: F, rhs: &[f64], x0: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = rhs.len();
    let mut x = x0.to_vec();
    let mut tmp = vec![0.0; n];
    op(&x, &mut tmp);
    let mut r: Vec<f64> = rhs.iter().zip(&tmp).map(|(b, a)| b - a).collect();
    let r_hat = r.clone();
    let b_norm = dot(rhs, rhs).sqrt().max(f64::MIN_POSITIVE);
    let mut rho = 1.0;
    let mut alpha = 1.0;
    let mut omega = 1.0;
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut history = Vec::new();
    for _ in 0..max_iter {
        let rn = dot(&r, &r).sqrt();
        history.push(rn / b_norm);
        if rn <= tol * b_norm {
            return Ok(x);
        }
        let rho_new = dot(&r_hat, &r);
        if rho_new == 0.0 {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        op(&p, &mut v);
        let rv = dot(&r_hat, &v);
        if rv == 0.0 {
            break;
        }
        alpha = rho / rv;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if dot(&s, &s).sqrt() <= tol * b_norm {
            axpy(&mut x, alpha, &p);
            return Ok(x);
        }
        op(&s, &mut t);
        let tt = dot(&t, &t);
        if tt == 0.0 {
            break;
        }
        omega = dot(&t, &s) / tt;
        for i in 0..n {
            x[i] += alpha * p[i] + omega * s[i];
            r[i] = s[i] - omega * t[i];
        }
        if omega == 0.0 {
            break;
        }
    }
    let residual = history.last().copied().unwrap_or(f64::INFINITY);
    Err(Error::NotConverged { solver: "bicgstab", iterations: history.len(), residual, history })
}
