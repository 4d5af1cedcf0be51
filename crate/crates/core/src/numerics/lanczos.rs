//! Lanczos iteration with full reorthogonalization for the lowest eigenpairs
//! of a symmetric operator given only through its action.
//!
//! Eigenpairs are extracted one at a time: after each converged Ritz pair is
//! locked, the next run starts from a fresh random vector and keeps every
//! Krylov vector orthogonal to the locked ones. This recovers all members of
//! a degenerate eigenspace, which a single Krylov sequence cannot.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::{fix_sign, EigenPair};
use super::tridiag;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Krylov steps allowed per eigenpair.
    pub max_iter: usize,
    /// Relative Ritz residual at which a pair is accepted.
    pub tol: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            max_iter: 500,
            tol: 1e-11,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn orthogonalize(w: &mut [f64], against: &[Vec<f64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for b in against {
            let c = dot(w, b);
            axpy(-c, b, w);
        }
    }
}

/// The `k` lowest eigenpairs of the symmetric operator `apply` (`out = A x`)
/// on a space of dimension `dim`, with default options.
pub fn lanczos_lowest<F>(apply: F, dim: usize, k: usize, seed: u64) -> Result<Vec<EigenPair>>
where
    F: Fn(&[f64], &mut [f64]),
{
    lanczos_lowest_with(apply, dim, k, seed, &LanczosOptions::default())
}

pub fn lanczos_lowest_with<F>(apply: F, dim: usize, k: usize, seed: u64, opts: &LanczosOptions) -> Result<Vec<EigenPair>>
where
    F: Fn(&[f64], &mut [f64]),
{
    if k == 0 || k > dim {
        return Err(Error::invalid(format!("requested {k} eigenpairs in dimension {dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut locked: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut pairs: Vec<EigenPair> = Vec::with_capacity(k);
    let mut norm_estimate = 0.0_f64;

    while pairs.len() < k {
        let available = dim - locked.len();
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        orthogonalize(&mut v, &locked);
        let nv = dot(&v, &v).sqrt();
        if nv == 0.0 {
            return Err(Error::Solver("Lanczos start vector vanished".into()));
        }
        v.iter_mut().for_each(|x| *x /= nv);

        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];
        let mut ritz: Option<(f64, Vec<f64>)> = None;
        let mut last_residual = f64::INFINITY;

        for step in 0..opts.max_iter.min(available) {
            apply(&v, &mut w);
            if step > 0 {
                axpy(-beta[step - 1], &basis[step - 1], &mut w);
            }
            let a = dot(&w, &v);
            axpy(-a, &v, &mut w);
            basis.push(std::mem::take(&mut v));
            orthogonalize(&mut w, &locked);
            orthogonalize(&mut w, &basis);
            alpha.push(a);
            let b = dot(&w, &w).sqrt();

            let prev_beta = if step > 0 { beta[step - 1] } else { 0.0 };
            norm_estimate = norm_estimate.max(a.abs() + b + prev_beta);

            let (theta, s) = tridiag::lowest_pairs(&alpha, &beta, 1)?.remove(0);
            last_residual = b * s[s.len() - 1].abs();
            let exhausted = basis.len() == available || b <= 1e-14 * norm_estimate.max(1.0);
            ritz = Some((theta, s));
            if last_residual <= opts.tol * norm_estimate.max(1.0) || exhausted {
                break;
            }
            beta.push(b);
            v = w.iter().map(|x| x / b).collect();
        }

        let converged = last_residual <= opts.tol * norm_estimate.max(1.0)
            || basis.len() == available
            || last_residual <= 1e-14 * norm_estimate.max(1.0);
        let (_, s) = ritz.expect("at least one Lanczos step");
        if !converged {
            return Err(Error::Convergence {
                solver: "Lanczos",
                iterations: basis.len(),
                residual: last_residual,
            });
        }

        let mut x = vec![0.0; dim];
        for (coef, b) in s.iter().zip(&basis) {
            axpy(*coef, b, &mut x);
        }
        orthogonalize(&mut x, &locked);
        let nx = dot(&x, &x).sqrt();
        x.iter_mut().for_each(|xi| *xi /= nx);
        let mut ax = vec![0.0; dim];
        apply(&x, &mut ax);
        let value = dot(&x, &ax);
        let residual = ax.iter().zip(&x).map(|(a, xi)| (a - value * xi).powi(2)).sum::<f64>().sqrt();
        if residual > 1e-9 * norm_estimate.max(1.0) {
            return Err(Error::Convergence {
                solver: "Lanczos",
                iterations: basis.len(),
                residual,
            });
        }
        locked.push(x.clone());
        pairs.push(EigenPair { value, vector: x });
    }

    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    for p in &mut pairs {
        fix_sign(&mut p.vector);
    }
    Ok(pairs)
}
