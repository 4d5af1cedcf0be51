//! Closed-form integrals over explicitly correlated Gaussians
//! `exp(-a r₁² - b r₂² - c r₁₂²)`.
//!
//! A term is written as `exp(-xᵀ A x)` with `x = (r₁, r₂)` and
//! `A = [[a + c, -c], [-c, b + c]]`. For a pair of terms `M = A + B` and
//! every integral reduces to `det M` and `M⁻¹`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::gaussian_coulomb;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcgBasisTerm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl EcgBasisTerm {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let t = EcgBasisTerm { a, b, c };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let EcgBasisTerm { a, b, c } = *self;
        let finite = a.is_finite() && b.is_finite() && c.is_finite();
        if !finite || !(a + c > 0.0) || !(b + c > 0.0) || !((a + c) * (b + c) > c * c) {
            return Err(Error::invalid(format!(
                "ECG exponents (a={a}, b={b}, c={c}) do not form a positive-definite quadratic form"
            )));
        }
        Ok(())
    }

    /// The same term with the electron labels exchanged.
    pub fn swapped(&self) -> Self {
        EcgBasisTerm { a: self.b, b: self.a, c: self.c }
    }

    /// All exponents multiplied by `factor`; equivalent to the length
    /// rescaling `r → sqrt(factor) r`.
    pub fn scaled(&self, factor: f64) -> Self {
        EcgBasisTerm {
            a: self.a * factor,
            b: self.b * factor,
            c: self.c * factor,
        }
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.a + self.c, -self.c, -self.c, self.b + self.c)
    }

    fn pair(&self) -> [Matrix2<f64>; 2] {
        [self.matrix(), self.swapped().matrix()]
    }
}

/// Matrix elements between two exchange-symmetrized terms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MatrixElements {
    pub overlap: f64,
    pub kinetic: f64,
    /// `⟨-Z/r₁ - Z/r₂⟩`
    pub nuclear: f64,
    /// `⟨1/r₁₂⟩`
    pub repulsion: f64,
}

impl std::ops::AddAssign for MatrixElements {
    fn add_assign(&mut self, o: Self) {
        self.overlap += o.overlap;
        self.kinetic += o.kinetic;
        self.nuclear += o.nuclear;
        self.repulsion += o.repulsion;
    }
}

const ELECTRON_1: Vector2<f64> = Vector2::new(1.0, 0.0);
const ELECTRON_2: Vector2<f64> = Vector2::new(0.0, 1.0);
const SEPARATION: Vector2<f64> = Vector2::new(1.0, -1.0);

fn combined(a: &Matrix2<f64>, b: &Matrix2<f64>) -> Result<(Matrix2<f64>, f64, Matrix2<f64>)> {
    let m = a + b;
    let det = m.determinant();
    if !(det > 0.0) || !(m[(0, 0)] > 0.0) {
        return Err(Error::invalid("combined ECG quadratic form is not positive definite"));
    }
    let inv = Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det;
    Ok((m, det, inv))
}

fn primitive_overlap(det: f64) -> f64 {
    (PI * PI / det).powf(1.5)
}

/// `⟨g_A | 1/|wᵀx| | g_B⟩ / ⟨g_A|g_B⟩`
fn coulomb_factor(inv: &Matrix2<f64>, w: &Vector2<f64>) -> Result<f64> {
    let beta = 1.0 / w.dot(&(inv * w));
    Ok((beta / PI).powf(1.5) * gaussian_coulomb(beta)?)
}

fn primitive(a: &Matrix2<f64>, b: &Matrix2<f64>, z: f64) -> Result<MatrixElements> {
    let (_, det, inv) = combined(a, b)?;
    let s = primitive_overlap(det);
    // 6 tr(A M⁻¹ B Λ) with Λ = I/2
    let kinetic = 3.0 * (a * inv * b).trace() * s;
    let nuclear = -z * (coulomb_factor(&inv, &ELECTRON_1)? + coulomb_factor(&inv, &ELECTRON_2)?) * s;
    let repulsion = coulomb_factor(&inv, &SEPARATION)? * s;
    Ok(MatrixElements {
        overlap: s,
        kinetic,
        nuclear,
        repulsion,
    })
}

/// All four matrix elements between the symmetrized functions
/// `g(k) + g(swap k)` and `g(l) + g(swap l)`.
pub fn ecg_matrix_elements(k: &EcgBasisTerm, l: &EcgBasisTerm, z: f64) -> Result<MatrixElements> {
    k.validate()?;
    l.validate()?;
    let mut out = MatrixElements::default();
    for a in &k.pair() {
        for b in &l.pair() {
            out += primitive(a, b, z)?;
        }
    }
    Ok(out)
}

/// Overlap between symmetrized functions.
pub fn ecg_overlap(k: &EcgBasisTerm, l: &EcgBasisTerm) -> Result<f64> {
    let mut s = 0.0;
    for a in &k.pair() {
        for b in &l.pair() {
            s += primitive_overlap(combined(a, b)?.1);
        }
    }
    Ok(s)
}

/// The product of two symmetrized functions integrated over `r₂`, as a sum
/// of `(prefactor, exponent)` pairs: `Σ p exp(-e r₁²)`.
pub fn ecg_density_terms(k: &EcgBasisTerm, l: &EcgBasisTerm) -> Result<[(f64, f64); 4]> {
    let mut out = [(0.0, 0.0); 4];
    let mut i = 0;
    for a in &k.pair() {
        for b in &l.pair() {
            let (m, det, _) = combined(a, b)?;
            let m22 = m[(1, 1)];
            out[i] = ((PI / m22).powf(1.5), det / m22);
            i += 1;
        }
    }
    Ok(out)
}
