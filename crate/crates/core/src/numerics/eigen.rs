//! Symmetric eigenproblems: dense, tridiagonal and generalized.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::tridiag;
use crate::error::{Error, Result};

/// Real symmetric matrix in dense or tridiagonal storage.
#[derive(Debug, Clone, PartialEq)]
pub enum SymmetricMatrix {
    Dense(DMatrix<f64>),
    Tridiagonal { diag: Vec<f64>, off: Vec<f64> },
}

/// An eigenvalue with its unit-norm eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

impl SymmetricMatrix {
    /// Wraps a dense matrix, rejecting anything that is not exactly symmetric.
    pub fn dense(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::invalid("symmetric matrix must be square and non-empty"));
        }
        for i in 0..m.nrows() {
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::invalid(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        Ok(SymmetricMatrix::Dense(m))
    }

    /// Dense matrix filled from the upper triangle of `f`.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        SymmetricMatrix::dense(m)
    }

    pub fn tridiagonal(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::invalid("tridiagonal matrix needs n diagonal and n-1 off-diagonal entries"));
        }
        if diag.iter().chain(&off).any(|x| !x.is_finite()) {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        Ok(SymmetricMatrix::Tridiagonal { diag, off })
    }

    pub fn order(&self) -> usize {
        match self {
            SymmetricMatrix::Dense(m) => m.nrows(),
            SymmetricMatrix::Tridiagonal { diag, .. } => diag.len(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            SymmetricMatrix::Dense(m) => m[(i, j)],
            SymmetricMatrix::Tridiagonal { diag, off } => {
                if i == j {
                    diag[i]
                } else if i + 1 == j {
                    off[i]
                } else if j + 1 == i {
                    off[j]
                } else {
                    0.0
                }
            }
        }
    }

    /// `out = A x`
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        match self {
            SymmetricMatrix::Dense(m) => {
                let n = m.nrows();
                for (i, o) in out.iter_mut().enumerate().take(n) {
                    *o = (0..n).map(|j| m[(i, j)] * x[j]).sum();
                }
            }
            SymmetricMatrix::Tridiagonal { diag, off } => {
                let n = diag.len();
                for i in 0..n {
                    let mut v = diag[i] * x[i];
                    if i > 0 {
                        v += off[i - 1] * x[i - 1];
                    }
                    if i + 1 < n {
                        v += off[i] * x[i + 1];
                    }
                    out[i] = v;
                }
            }
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        match self {
            SymmetricMatrix::Dense(m) => m.norm(),
            SymmetricMatrix::Tridiagonal { diag, off } => {
                (diag.iter().map(|d| d * d).sum::<f64>() + 2.0 * off.iter().map(|e| e * e).sum::<f64>()).sqrt()
            }
        }
    }
}

/// Flips `v` so that its largest-magnitude component is positive. Near-ties
/// are broken by the lowest index.
pub fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let lead = v.iter().position(|x| x.abs() >= max * (1.0 - 1e-8)).unwrap_or(0);
    if v[lead] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// `‖A v - λ v‖₂`
pub fn residual_norm(apply: impl Fn(&[f64], &mut [f64]), pair: &EigenPair) -> f64 {
    let mut av = vec![0.0; pair.vector.len()];
    apply(&pair.vector, &mut av);
    av.iter()
        .zip(&pair.vector)
        .map(|(a, v)| (a - pair.value * v).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// The `k` algebraically smallest eigenpairs of `m`, ascending, with the
/// sign convention of [`fix_sign`]. Degenerate eigenvalues come back with an
/// orthonormal basis of their eigenspace.
pub fn eigh_lowest(m: &SymmetricMatrix, k: usize) -> Result<Vec<EigenPair>> {
    let n = m.order();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("requested {k} eigenpairs of an order-{n} matrix")));
    }
    let mut pairs = match m {
        SymmetricMatrix::Dense(a) => dense_lowest(a, k)?,
        SymmetricMatrix::Tridiagonal { diag, off } => tridiag::lowest_pairs(diag, off, k)?
            .into_iter()
            .map(|(value, vector)| EigenPair { value, vector })
            .collect(),
    };
    let tol = 1e-9 * m.frobenius_norm().max(1.0);
    for p in &mut pairs {
        fix_sign(&mut p.vector);
        let r = residual_norm(|x, out| m.apply(x, out), p);
        if !(r <= tol) {
            return Err(Error::Convergence {
                solver: "symmetric eigensolver",
                iterations: 0,
                residual: r,
            });
        }
    }
    Ok(pairs)
}

fn dense_lowest(a: &DMatrix<f64>, k: usize) -> Result<Vec<EigenPair>> {
    let eig = SymmetricEigen::try_new(a.clone(), f64::EPSILON, 0).ok_or(Error::Convergence {
        solver: "dense symmetric eigensolver",
        iterations: 0,
        residual: f64::NAN,
    })?;
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    Ok(order
        .into_iter()
        .take(k)
        .map(|i| EigenPair {
            value: eig.eigenvalues[i],
            vector: eig.eigenvectors.column(i).iter().copied().collect(),
        })
        .collect())
}

/// Lowest solution of `H c = E S c` after canonical orthogonalization.
#[derive(Debug, Clone)]
pub struct GeneralizedLowest {
    pub value: f64,
    /// Coefficients in the original (unscaled) basis with `cᵀ S c = 1`.
    pub coefficients: DVector<f64>,
    /// Number of orthogonalized vectors kept after the linear-dependence cut.
    pub rank: usize,
}

/// Solves the generalized symmetric problem `H c = E S c` for its lowest root.
///
/// The basis is first scaled to unit self-overlap; eigenvectors of the scaled
/// `S` with eigenvalue below `threshold` are discarded.
pub fn generalized_lowest(h: &DMatrix<f64>, s: &DMatrix<f64>, threshold: f64) -> Result<GeneralizedLowest> {
    let n = s.nrows();
    if n == 0 || h.shape() != s.shape() || s.ncols() != n {
        return Err(Error::invalid("H and S must be square and of equal order"));
    }
    let mut scale = DVector::zeros(n);
    for i in 0..n {
        let sii = s[(i, i)];
        if !(sii > 0.0) {
            return Err(Error::Solver(format!("non-positive self-overlap at basis function {i}")));
        }
        scale[i] = 1.0 / sii.sqrt();
    }
    let scaled = |m: &DMatrix<f64>| DMatrix::from_fn(n, n, |i, j| m[(i, j)] * scale[i] * scale[j]);
    let s_eig = SymmetricEigen::try_new(scaled(s), f64::EPSILON, 0)
        .ok_or(Error::Solver("overlap diagonalization failed".into()))?;
    let kept: Vec<usize> = (0..n).filter(|&i| s_eig.eigenvalues[i] > threshold).collect();
    if kept.is_empty() {
        return Err(Error::Solver("basis collapse: every overlap eigenvector discarded".into()));
    }
    let x = DMatrix::from_fn(n, kept.len(), |i, j| {
        let col = kept[j];
        s_eig.eigenvectors[(i, col)] / s_eig.eigenvalues[col].sqrt()
    });
    let h_orth = x.transpose() * scaled(h) * &x;
    let h_orth = (&h_orth + h_orth.transpose()) * 0.5;
    let h_eig = SymmetricEigen::try_new(h_orth, f64::EPSILON, 0)
        .ok_or(Error::Solver("projected Hamiltonian diagonalization failed".into()))?;
    let (low, value) = h_eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, v)| (i, *v))
        .expect("non-empty");
    let y = h_eig.eigenvectors.column(low);
    let scaled_c = &x * y;
    let coefficients = DVector::from_fn(n, |i, _| scaled_c[i] * scale[i]);
    Ok(GeneralizedLowest {
        value,
        coefficients,
        rank: kept.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn identity_lowest_is_one() {
        let m = SymmetricMatrix::dense(DMatrix::identity(2, 2)).unwrap();
        let p = eigh_lowest(&m, 1).unwrap();
        assert!((p[0].value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn laplacian_dense_and_tridiagonal() {
        let n = 10;
        let tri = SymmetricMatrix::tridiagonal(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
        let dense = SymmetricMatrix::from_upper(n, |i, j| tri.get(i, j)).unwrap();
        for m in [&tri, &dense] {
            let pairs = eigh_lowest(m, n).unwrap();
            for (j, p) in pairs.iter().enumerate() {
                let exact = 2.0 - 2.0 * ((j + 1) as f64 * PI / (n as f64 + 1.0)).cos();
                assert!((p.value - exact).abs() < 1e-10);
            }
        }
    }

    /// Brute-force oracle: all eigenvalues via cyclic Jacobi rotations.
    fn jacobi_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
        let n = a.nrows();
        let mut a = a.clone();
        for _sweep in 0..100 {
            let off: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| a[(i, j)].powi(2)).sum();
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[(p, q)].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut v: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn random_symmetric_matches_jacobi_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 50;
        let m = SymmetricMatrix::from_upper(n, |_, _| rng.random_range(-1.0..1.0)).unwrap();
        let SymmetricMatrix::Dense(a) = &m else { unreachable!() };
        let oracle = jacobi_eigenvalues(a);
        let pairs = eigh_lowest(&m, 3).unwrap();
        for (p, o) in pairs.iter().zip(&oracle) {
            assert!((p.value - o).abs() < 1e-9, "{} vs {}", p.value, o);
        }
        let tol = 1e-9 * m.frobenius_norm();
        for p in &pairs {
            assert!(residual_norm(|x, o| m.apply(x, o), p) <= tol);
        }
    }

    #[test]
    fn sign_convention_is_deterministic() {
        let mut v = vec![0.1, -0.9, 0.3];
        fix_sign(&mut v);
        assert_eq!(v, vec![-0.1, 0.9, -0.3]);
    }

    #[test]
    fn rejects_asymmetric_and_bad_k() {
        let mut a = DMatrix::identity(3, 3);
        a[(0, 1)] = 1e-17;
        assert!(SymmetricMatrix::dense(a).is_err());
        let m = SymmetricMatrix::dense(DMatrix::identity(3, 3)).unwrap();
        assert!(eigh_lowest(&m, 4).is_err());
        assert!(eigh_lowest(&m, 0).is_err());
    }

    #[test]
    fn generalized_matches_cholesky_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 6;
        let b = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let s = &b * b.transpose() + DMatrix::identity(n, n) * 0.5;
        let h = DMatrix::from_fn(n, n, |i, j| ((i + 1) * (j + 1)) as f64 / 10.0 - if i == j { 1.0 } else { 0.0 });
        let g = generalized_lowest(&h, &s, 1e-10).unwrap();
        assert_eq!(g.rank, n);
        // reduce with Cholesky: L^{-1} H L^{-T}
        let l = s.clone().cholesky().unwrap().l();
        let li = l.try_inverse().unwrap();
        let reduced = &li * &h * li.transpose();
        let oracle = jacobi_eigenvalues(&((&reduced + reduced.transpose()) * 0.5))[0];
        assert!((g.value - oracle).abs() < 1e-10);
        let norm = (g.coefficients.transpose() * &s * &g.coefficients)[(0, 0)];
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generalized_drops_duplicate_function() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let h = DMatrix::from_row_slice(2, 2, &[-1.0, -1.0, -1.0, -1.0]);
        let g = generalized_lowest(&h, &s, 1e-10).unwrap();
        assert_eq!(g.rank, 1);
        assert!((g.value + 1.0).abs() < 1e-12);
    }
}
