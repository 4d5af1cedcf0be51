//! Lowest eigenpairs of a real symmetric tridiagonal matrix by Sturm-sequence
//! bisection followed by inverse iteration.

use crate::error::{Error, Result};

/// Number of eigenvalues strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// The `k` algebraically smallest eigenvalues, ascending.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let (lo0, hi0) = gershgorin(diag, off);
    let scale = lo0.abs().max(hi0.abs()).max(f64::MIN_POSITIVE);
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * scale);
    let spread = (hi0 - lo0).max(scale * f64::EPSILON);
    let (lo0, hi0) = (lo0 - 2.0 * f64::EPSILON * spread, hi0 + 2.0 * f64::EPSILON * spread);
    let mut values = Vec::with_capacity(k);
    for j in 0..k {
        let mut lo = values.last().copied().unwrap_or(lo0).max(lo0);
        // the previous value may sit a hair above the true one
        lo -= 4.0 * f64::EPSILON * scale;
        let mut hi = hi0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * (lo.abs().max(hi.abs())) {
                break;
            }
            if sturm_count(diag, off, mid, pivmin) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        values.push(0.5 * (lo + hi));
    }
    values
}

/// Solves `(T - shift) x = rhs` in place with partial pivoting.
fn shifted_solve(diag: &[f64], off: &[f64], shift: f64, rhs: &mut [f64]) {
    let n = diag.len();
    let tiny = f64::EPSILON * diag.iter().chain(off).fold(1e-300_f64, |m, v| m.max(v.abs()));
    if n == 1 {
        let d = diag[0] - shift;
        rhs[0] /= if d.abs() < tiny { tiny } else { d };
        return;
    }
    // LU of a tridiagonal with row interchanges: U has two super-diagonals.
    let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
    let mut du: Vec<f64> = off.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut dl: Vec<f64> = off.to_vec();
    let mut swapped = vec![false; n - 1];
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i].abs() < tiny {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            swapped[i] = true;
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 1 < n - 1 {
                du2[i] = du[i + 1];
                du[i + 1] *= -fact;
            }
        }
    }
    if d[n - 1].abs() < tiny {
        d[n - 1] = tiny;
    }
    for i in 0..n - 1 {
        if swapped[i] {
            rhs.swap(i, i + 1);
        }
        rhs[i + 1] -= dl[i] * rhs[i];
    }
    rhs[n - 1] /= d[n - 1];
    rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Eigenvector for an accurately known eigenvalue, orthogonalized against
/// `previous` (used for clustered values).
fn inverse_iteration(diag: &[f64], off: &[f64], value: f64, previous: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = diag.len();
    // deterministic, non-symmetric start so that no eigenvector is missed
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 101) as f64 / 101.0).collect();
    normalize(&mut v);
    for _ in 0..6 {
        shifted_solve(diag, off, value, &mut v);
        for p in previous {
            let c: f64 = v.iter().zip(p).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(p).for_each(|(a, b)| *a -= c * b);
        }
        if normalize(&mut v) == 0.0 || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Solver("inverse iteration broke down".into()));
        }
    }
    Ok(v)
}

/// Lowest `k` eigenpairs `(value, unit vector)`, values ascending.
pub fn lowest_pairs(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(Error::invalid("tridiagonal matrix needs n diagonal and n-1 off-diagonal entries"));
    }
    if k == 0 || k > n {
        return Err(Error::invalid(format!("requested {k} eigenpairs of an order-{n} matrix")));
    }
    let values = lowest_eigenvalues(diag, off, k);
    let scale = values
        .iter()
        .fold(gershgorin(diag, off).1.abs(), |m, v| m.max(v.abs()))
        .max(1.0);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (j, &value) in values.iter().enumerate() {
        // only orthogonalize within a cluster
        let cluster: Vec<Vec<f64>> = (0..j)
            .filter(|&i| (values[i] - value).abs() < 1e-3 * scale)
            .map(|i| vectors[i].clone())
            .collect();
        vectors.push(inverse_iteration(diag, off, value, &cluster)?);
    }
    Ok(values.into_iter().zip(vectors).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn laplacian_spectrum() {
        let n = 10;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        let pairs = lowest_pairs(&diag, &off, n).unwrap();
        for (j, (value, vector)) in pairs.iter().enumerate() {
            let exact = 2.0 - 2.0 * (((j + 1) as f64) * PI / (n as f64 + 1.0)).cos();
            assert!((value - exact).abs() < 1e-12, "{value} vs {exact}");
            for i in 0..n {
                let mut av = diag[i] * vector[i];
                if i > 0 {
                    av += off[i - 1] * vector[i - 1];
                }
                if i + 1 < n {
                    av += off[i] * vector[i + 1];
                }
                assert!((av - value * vector[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn split_matrix_with_repeated_value() {
        // two decoupled 1x1 blocks with the same value plus a 2x2 block
        let diag = [1.0, 1.0, 3.0, 3.0];
        let off = [0.0, 0.0, 1.0];
        let pairs = lowest_pairs(&diag, &off, 2).unwrap();
        assert!((pairs[0].0 - 1.0).abs() < 1e-14);
        assert!((pairs[1].0 - 1.0).abs() < 1e-14);
        let dot: f64 = pairs[0].1.iter().zip(&pairs[1].1).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-12);
    }
}
