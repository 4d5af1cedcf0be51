//! Helium-like ions: two electrons bound to a nucleus of charge `Z`,
//!
//! ```text
//! H = -½∇₁² - ½∇₂² - Z/r₁ - Z/r₂ + 1/r₁₂
//! ```
//!
//! solved variationally in a basis of exchange-symmetrized correlated
//! Gaussians (singlet ground state).

mod ecg;

pub use ecg::{ecg_density_terms, ecg_matrix_elements, ecg_overlap, EcgBasisTerm, MatrixElements};

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{DensityDomain, DensityProfile, ManyBodyState, OverlapValue};
use crate::numerics::{generalized_lowest, Grid1D};

/// Smallest nuclear charge accepted; the second electron unbinds near 0.91.
pub const Z_MIN: f64 = 0.95;
/// Overlap-matrix eigenvalues below this (after unit-diagonal scaling) are
/// discarded.
pub const LINEAR_DEPENDENCE: f64 = 1e-10;
pub const REFINEMENT_TRIALS: usize = 500;

const EXPONENT_RANGE: (f64, f64) = (1e-2, 1e2);
const CORRELATION_RANGE: (f64, f64) = (1e-2, 10.0);

fn default_basis_size() -> usize {
    32
}

fn default_repulsion() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeliumParams {
    #[serde(rename = "Z", alias = "z")]
    pub z: f64,
    #[serde(default = "default_basis_size", alias = "K")]
    pub basis_size: usize,
    #[serde(default)]
    pub seed: u64,
    /// Include the electron-electron repulsion.
    #[serde(default = "default_repulsion")]
    pub repulsion: bool,
}

impl HeliumParams {
    pub fn new(z: f64) -> Self {
        HeliumParams {
            z,
            basis_size: default_basis_size(),
            seed: 0,
            repulsion: true,
        }
    }

    pub fn with_basis_size(mut self, k: usize) -> Self {
        self.basis_size = k;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn without_repulsion(mut self) -> Self {
        self.repulsion = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z > Z_MIN) || !self.z.is_finite() {
            return Err(Error::invalid(format!("nuclear charge {} must exceed {Z_MIN}", self.z)));
        }
        if self.basis_size == 0 {
            return Err(Error::invalid("basis size must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeliumState {
    pub params: HeliumParams,
    pub terms: Vec<EcgBasisTerm>,
    /// Unit-norm coefficients, signed so that `ψ(0, 0) > 0`.
    pub coefficients: Vec<f64>,
    pub energy: f64,
    pub kinetic: f64,
    pub potential: f64,
    /// Number of basis directions kept after removing linear dependence.
    pub rank: usize,
}

impl HeliumState {
    /// `⟨V⟩/⟨T⟩`; `-2` for an exact eigenstate of a Coulomb Hamiltonian.
    pub fn virial_ratio(&self) -> f64 {
        self.potential / self.kinetic
    }

    /// Lowest energy in the first `k` basis functions.
    pub fn prefix_energy(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.terms.len() {
            return Err(Error::invalid(format!("prefix {k} outside basis of {}", self.terms.len())));
        }
        let m = Matrices::build(&self.terms[..k], self.params.z)?;
        Ok(m.lowest(self.params.repulsion)?.0)
    }

    /// The ground state at charge `z` in this basis with every exponent
    /// scaled by `(z / Z)²`.
    pub fn rescaled(&self, z: f64) -> Result<HeliumState> {
        let params = HeliumParams { z, ..self.params };
        params.validate()?;
        let factor = (z / self.params.z).powi(2);
        let terms = self.terms.iter().map(|t| t.scaled(factor)).collect();
        from_terms(params, terms)
    }

    /// `ψ(0, 0)`
    pub fn value_at_origin(&self) -> f64 {
        2.0 * self.coefficients.iter().sum::<f64>()
    }
}

struct Matrices {
    s: DMatrix<f64>,
    one_body: DMatrix<f64>,
    kinetic: DMatrix<f64>,
    repulsion: DMatrix<f64>,
}

impl Matrices {
    fn build(terms: &[EcgBasisTerm], z: f64) -> Result<Self> {
        let n = terms.len();
        let mut m = Matrices {
            s: DMatrix::zeros(n, n),
            one_body: DMatrix::zeros(n, n),
            kinetic: DMatrix::zeros(n, n),
            repulsion: DMatrix::zeros(n, n),
        };
        for i in 0..n {
            for j in i..n {
                let e = ecg_matrix_elements(&terms[i], &terms[j], z)?;
                for (mat, v) in [
                    (&mut m.s, e.overlap),
                    (&mut m.one_body, e.kinetic + e.nuclear),
                    (&mut m.kinetic, e.kinetic),
                    (&mut m.repulsion, e.repulsion),
                ] {
                    mat[(i, j)] = v;
                    mat[(j, i)] = v;
                }
            }
        }
        Ok(m)
    }

    fn hamiltonian(&self, repulsion: bool) -> DMatrix<f64> {
        if repulsion {
            &self.one_body + &self.repulsion
        } else {
            self.one_body.clone()
        }
    }

    fn lowest(&self, repulsion: bool) -> Result<(f64, Vec<f64>, usize)> {
        let sol = generalized_lowest(&self.hamiltonian(repulsion), &self.s, LINEAR_DEPENDENCE)?;
        Ok((sol.value, sol.coefficients.iter().copied().collect(), sol.rank))
    }

    fn expectation(mat: &DMatrix<f64>, c: &[f64]) -> f64 {
        let n = c.len();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += c[i] * mat[(i, j)] * c[j];
            }
        }
        acc
    }
}

/// Solve in a fixed basis.
pub fn from_terms(params: HeliumParams, terms: Vec<EcgBasisTerm>) -> Result<HeliumState> {
    if !(params.z > 0.0) || terms.is_empty() {
        return Err(Error::invalid("helium solve needs a positive charge and a non-empty basis"));
    }
    let m = Matrices::build(&terms, params.z)?;
    let (energy, mut c, rank) = m.lowest(params.repulsion)?;
    let norm = Matrices::expectation(&m.s, &c).sqrt();
    let sign = if c.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    for v in &mut c {
        *v *= sign / norm;
    }
    let kinetic = Matrices::expectation(&m.kinetic, &c);
    let mut potential = Matrices::expectation(&m.one_body, &c) - kinetic;
    if params.repulsion {
        potential += Matrices::expectation(&m.repulsion, &c);
    }
    Ok(HeliumState {
        params,
        terms,
        coefficients: c,
        energy,
        kinetic,
        potential,
        rank,
    })
}

fn geometric(lo: f64, hi: f64, k: usize, n: usize) -> f64 {
    if n == 1 {
        return (lo * hi).sqrt();
    }
    lo * (hi / lo).powf(k as f64 / (n - 1) as f64)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Even-tempered starting basis: `a` runs through its range in order, `b`
/// through a coprime stride of the same sequence and `c` in reverse.
pub fn tempered_basis(z: f64, k: usize) -> Vec<EcgBasisTerm> {
    let (lo, hi) = (z * z * EXPONENT_RANGE.0, z * z * EXPONENT_RANGE.1);
    let stride = (3..).find(|&s| gcd(s, k.max(1)) == 1).unwrap_or(1);
    (0..k)
        .map(|i| EcgBasisTerm {
            a: geometric(lo, hi, i, k),
            b: geometric(lo, hi, (i * stride) % k, k),
            c: geometric(CORRELATION_RANGE.0, CORRELATION_RANGE.1, k - 1 - i, k),
        })
        .collect()
}

/// Products `g_i(r₁) g_j(r₂)` of `k` even-tempered single-particle Gaussians,
/// `i ≤ j`, with no correlation factor.
pub fn product_basis(z: f64, k: usize) -> Vec<EcgBasisTerm> {
    let alphas: Vec<f64> = (0..k).map(|i| geometric(z * z * 0.02, z * z * 400.0, i, k)).collect();
    let mut terms = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..k {
        for j in i..k {
            terms.push(EcgBasisTerm { a: alphas[i], b: alphas[j], c: 0.0 });
        }
    }
    terms
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random_range(0.0..1.0) * (hi / lo).ln()).exp()
}

/// Tempered basis of `basis_size` terms refined by `REFINEMENT_TRIALS`
/// seeded single-term replacements, each kept only if it lowers the energy.
pub fn solve_helium(params: &HeliumParams) -> Result<HeliumState> {
    params.validate()?;
    let z = params.z;
    let k = params.basis_size;
    let mut terms = tempered_basis(z, k);
    let energy_of = |terms: &[EcgBasisTerm]| -> Option<f64> {
        let m = Matrices::build(terms, z).ok()?;
        m.lowest(params.repulsion).ok().map(|r| r.0)
    };
    let mut best = energy_of(&terms).ok_or_else(|| Error::Solver("starting helium basis is singular".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..REFINEMENT_TRIALS {
        let slot = rng.random_range(0..k);
        let trial = EcgBasisTerm {
            a: log_uniform(&mut rng, z * z * EXPONENT_RANGE.0, z * z * EXPONENT_RANGE.1),
            b: log_uniform(&mut rng, z * z * EXPONENT_RANGE.0, z * z * EXPONENT_RANGE.1),
            c: log_uniform(&mut rng, CORRELATION_RANGE.0, CORRELATION_RANGE.1),
        };
        let old = std::mem::replace(&mut terms[slot], trial);
        match energy_of(&terms) {
            Some(e) if e < best => best = e,
            _ => terms[slot] = old,
        }
    }
    from_terms(*params, terms)
}

/// `⟨ψ₁|ψ₂⟩` across two bases, possibly at different charges.
pub fn helium_overlap(a: &HeliumState, b: &HeliumState) -> Result<OverlapValue> {
    if a == b {
        return OverlapValue::from_real(1.0);
    }
    let cross = |x: &HeliumState, y: &HeliumState| -> Result<f64> {
        let mut acc = 0.0;
        for (ti, ci) in x.terms.iter().zip(&x.coefficients) {
            for (tj, cj) in y.terms.iter().zip(&y.coefficients) {
                acc += ci * cj * ecg_overlap(ti, tj)?;
            }
        }
        Ok(acc)
    };
    let s = cross(a, b)? / (cross(a, a)? * cross(b, b)?).sqrt();
    OverlapValue::from_real(s)
}

impl ManyBodyState for HeliumState {
    fn particle_count(&self) -> usize {
        2
    }

    fn overlap(&self, other: &Self) -> Result<OverlapValue> {
        helium_overlap(self, other)
    }
}

fn density_terms(state: &HeliumState) -> Result<Vec<(f64, f64)>> {
    let n = state.terms.len();
    let mut out = Vec::with_capacity(4 * n * n);
    for i in 0..n {
        for j in i..n {
            let w = if i == j { 1.0 } else { 2.0 } * state.coefficients[i] * state.coefficients[j];
            for (p, e) in ecg_density_terms(&state.terms[i], &state.terms[j])? {
                out.push((2.0 * w * p, e));
            }
        }
    }
    Ok(out)
}

/// `ρ(r₁) = 2 ∫ |ψ|² d³r₂`, in closed form on the nodes of `grid`.
pub fn helium_density(state: &HeliumState, grid: &Grid1D) -> Result<DensityProfile> {
    let terms = density_terms(state)?;
    let values: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&r| terms.iter().map(|(p, e)| p * (-e * r * r).exp()).sum())
        .collect();
    let analytic: f64 = terms.iter().map(|(p, e)| p * (PI / e).powf(1.5)).sum();
    if (analytic - 2.0).abs() > 1e-8 {
        return Err(Error::Quadrature(format!("helium density normalization {analytic}")));
    }
    DensityProfile::new(2, DensityDomain::Radial(grid.clone()), values)
}

/// Radial grid resolving the densities of every state given.
pub fn density_grid<'a>(states: impl IntoIterator<Item = &'a HeliumState>) -> Result<Grid1D> {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for s in states {
        for (_, e) in density_terms(s)? {
            lo = lo.min(e);
            hi = hi.max(e);
        }
    }
    if !(lo > 0.0) || !lo.is_finite() {
        return Err(Error::invalid("no helium states to size a density grid"));
    }
    let inner = 0.1 / hi.sqrt();
    let outer = (46.0 / lo).sqrt();
    let panels = ((outer / inner).ln() / 1.25_f64.ln()).ceil() as usize;
    Grid1D::geometric_radial(inner, outer, panels.max(8), 12)
}
