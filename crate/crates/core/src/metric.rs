//! Distances between wave functions and between particle densities.
//!
//! Wave functions follow the norm-`N` convention: a physical `N`-particle
//! state has `⟨ψ|ψ⟩ = N`. Solvers store unit-normalized amplitudes, so every
//! distance here is expressed through the particle number and the overlap of
//! the unit-normalized states:
//!
//! ```text
//! D_psi       = sqrt(2N (1 - |s|))
//! D_psi_tilde = sqrt(2N (1 - |s| cos φ)),   s = |s| e^{iφ}
//! D_rho       = ∫ |ρ1 - ρ2|
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Bound, Error, Result};
use crate::numerics::Grid1D;

/// Slack allowed on `|s| <= 1` before an overlap is considered corrupt.
pub const OVERLAP_SLACK: f64 = 1e-10;
/// Slack used by [`check_bounds`].
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Overlap `s = |s| e^{iφ}` of two unit-normalized states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapValue {
    modulus: f64,
    phase: f64,
}

impl OverlapValue {
    /// Accepts moduli in `[0, 1 + 1e-10]`, clamping to 1, and any finite
    /// phase, which is wrapped into `(-π, π]`.
    pub fn new(modulus: f64, phase: f64) -> Result<Self> {
        if !(0.0..=1.0 + OVERLAP_SLACK).contains(&modulus) {
            return Err(Error::invalid(format!("overlap modulus {modulus} outside [0, 1]")));
        }
        if !phase.is_finite() {
            return Err(Error::invalid("overlap phase must be finite"));
        }
        Ok(OverlapValue {
            modulus: modulus.min(1.0),
            phase: wrap_phase(phase),
        })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        OverlapValue::new(z.norm(), z.arg())
    }

    /// Overlap of real states: phase 0 or π depending on the sign.
    pub fn from_real(s: f64) -> Result<Self> {
        OverlapValue::new(s.abs(), if s < 0.0 { PI } else { 0.0 })
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }
}

fn wrap_phase(phase: f64) -> f64 {
    let mut p = phase.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    if p <= -PI {
        p += 2.0 * PI;
    }
    p
}

fn check_particles(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::invalid("particle number must be at least 1"));
    }
    Ok(n as f64)
}

/// Gauge-invariant wave-function distance `sqrt(2N (1 - |s|))`.
pub fn d_psi(n: usize, s: OverlapValue) -> Result<f64> {
    let n = check_particles(n)?;
    Ok((2.0 * n * (1.0 - s.modulus)).max(0.0).sqrt())
}

/// Plain norm distance without the phase minimization. For gauge copies
/// (`|s| = 1`) this is `2 sqrt(N) |sin(φ/2)|`.
pub fn d_psi_tilde(n: usize, s: OverlapValue) -> Result<f64> {
    let n = check_particles(n)?;
    // 1 - m cos φ = (1 - m) + 2 m sin²(φ/2), without cancellation at small φ
    let half = (0.5 * s.phase).sin();
    let gap = (1.0 - s.modulus) + 2.0 * s.modulus * half * half;
    Ok((2.0 * n * gap).max(0.0).sqrt())
}

/// Minimal distance between densities of `n` and `n_prime` particles.
pub fn d_rho_min(n: usize, n_prime: usize) -> f64 {
    (n as f64 - n_prime as f64).abs()
}

/// Minimal distance between wave functions of `n` and `n_prime` particles.
pub fn d_psi_min(n: usize, n_prime: usize) -> f64 {
    ((n as f64).sqrt() - (n_prime as f64).sqrt()).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    WaveFunction,
    Density,
}

/// Radius of the `N`-particle sphere around the zero state: `N` for
/// densities, `sqrt(N)` for wave functions.
pub fn distance_to_zero_state(n: usize, kind: StateKind) -> Result<f64> {
    let n = check_particles(n)?;
    Ok(match kind {
        StateKind::Density => n,
        StateKind::WaveFunction => n.sqrt(),
    })
}

/// A `(D_psi, D_rho)` pair between two states with the same particle number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistancePair {
    pub d_psi: f64,
    pub d_rho: f64,
}

/// Margins of a distance pair to the same-`N` upper bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    /// `2N - D_rho`
    pub density_margin: f64,
    /// `sqrt(2N) - D_psi`
    pub wavefunction_margin: f64,
    /// `2 sqrt(N) - D_psi`, the looser bound from the triangle inequality.
    pub triangle_margin: f64,
}

/// Checks `D_rho <= 2N` and `D_psi <= sqrt(2N)` with slack [`BOUND_TOLERANCE`].
pub fn check_bounds(pair: DistancePair, n: usize) -> Result<BoundReport> {
    let nf = check_particles(n)?;
    let rho_limit = 2.0 * nf;
    let psi_limit = (2.0 * nf).sqrt();
    if !(pair.d_psi <= psi_limit + BOUND_TOLERANCE) {
        return Err(Error::BoundViolation {
            bound: Bound::WaveFunction,
            value: pair.d_psi,
            limit: psi_limit,
        });
    }
    if !(pair.d_rho <= rho_limit + BOUND_TOLERANCE) {
        return Err(Error::BoundViolation {
            bound: Bound::Density,
            value: pair.d_rho,
            limit: rho_limit,
        });
    }
    Ok(BoundReport {
        density_margin: rho_limit - pair.d_rho,
        wavefunction_margin: psi_limit - pair.d_psi,
        triangle_margin: 2.0 * nf.sqrt() - pair.d_psi,
    })
}

/// Where a density lives: lattice sites, or a radial grid whose measure
/// carries the `4πr²` factor.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityDomain {
    Lattice { sites: usize },
    Radial(Grid1D),
}

impl DensityDomain {
    fn len(&self) -> usize {
        match self {
            DensityDomain::Lattice { sites } => *sites,
            DensityDomain::Radial(g) => g.len(),
        }
    }

    /// Integration measure attached to each sample.
    pub fn measure(&self) -> Vec<f64> {
        match self {
            DensityDomain::Lattice { sites } => vec![1.0; *sites],
            DensityDomain::Radial(g) => g
                .nodes()
                .iter()
                .zip(g.weights())
                .map(|(r, w)| 4.0 * PI * r * r * w)
                .collect(),
        }
    }
}

/// Tolerance on `∫ρ = N` accepted by [`DensityProfile::new`].
pub const DENSITY_NORM_TOLERANCE: f64 = 1e-6;

/// Single-particle density of an `N`-particle state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    particle_count: usize,
    domain: DensityDomain,
    values: Vec<f64>,
}

impl DensityProfile {
    /// Validates non-negativity and `∫ρ = N` within
    /// [`DENSITY_NORM_TOLERANCE`]. Round-off negatives below `1e-12` of the
    /// peak are set to zero.
    pub fn new(particle_count: usize, domain: DensityDomain, mut values: Vec<f64>) -> Result<Self> {
        check_particles(particle_count)?;
        if values.len() != domain.len() {
            return Err(Error::invalid(format!(
                "density has {} samples for a domain of {}",
                values.len(),
                domain.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("density has non-finite samples"));
        }
        let peak = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for v in &mut values {
            if *v < 0.0 {
                if *v < -1e-12 * peak {
                    return Err(Error::invalid(format!("negative density sample {v}")));
                }
                *v = 0.0;
            }
        }
        let profile = DensityProfile {
            particle_count,
            domain,
            values,
        };
        let total = profile.integral();
        if (total - particle_count as f64).abs() > DENSITY_NORM_TOLERANCE {
            return Err(Error::Quadrature(format!(
                "density integrates to {total}, expected {particle_count}"
            )));
        }
        Ok(profile)
    }

    pub fn particle_count(&self) -> usize {
        self.particle_count
    }

    pub fn domain(&self) -> &DensityDomain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().zip(self.domain.measure()).map(|(v, m)| v * m).sum()
    }
}

/// `∫ |ρ1 - ρ2|` over the shared domain.
pub fn d_rho(rho1: &DensityProfile, rho2: &DensityProfile) -> Result<f64> {
    if rho1.domain != rho2.domain {
        return Err(Error::DomainMismatch("densities live on different domains".into()));
    }
    Ok(rho1
        .values
        .iter()
        .zip(&rho2.values)
        .zip(rho1.domain.measure())
        .map(|((a, b), m)| (a - b).abs() * m)
        .sum())
}

/// A ground state that knows its particle number and how to overlap with
/// another state of the same model.
pub trait ManyBodyState {
    fn particle_count(&self) -> usize;

    /// Overlap of the unit-normalized amplitudes.
    fn overlap(&self, other: &Self) -> Result<OverlapValue>;

    /// `D_psi` to `other`, by default through the overlap. States with
    /// direct access to their amplitudes can avoid the cancellation in
    /// `1 - |s|` near coincidence.
    fn distance_to(&self, other: &Self) -> Result<f64> {
        d_psi(self.particle_count(), self.overlap(other)?)
    }
}

/// `D_psi` between two states of the same model.
pub fn wavefunction_distance<S: ManyBodyState>(a: &S, b: &S) -> Result<f64> {
    if a.particle_count() != b.particle_count() {
        return Err(Error::invalid("D_psi is only defined between equal particle numbers"));
    }
    a.distance_to(b)
}

/// Unit-normalized complex amplitudes over a finite basis shared by all
/// states being compared.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientState {
    particle_count: usize,
    amplitudes: Vec<Complex64>,
}

impl CoefficientState {
    /// Normalizes `amplitudes` to unit norm.
    pub fn new(particle_count: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_particles(particle_count)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::invalid("state amplitudes must have finite, non-zero norm"));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(CoefficientState {
            particle_count,
            amplitudes,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// The same state multiplied by `e^{iφ}`.
    pub fn gauge_copy(&self, phi: f64) -> Self {
        let g = Complex64::from_polar(1.0, phi);
        CoefficientState {
            particle_count: self.particle_count,
            amplitudes: self.amplitudes.iter().map(|a| a * g).collect(),
        }
    }

    fn same_basis(&self, other: &Self) -> Result<()> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DomainMismatch("states expanded in different bases".into()));
        }
        Ok(())
    }

    /// `sqrt(N) ‖ψ1 - ψ2‖` without phase minimization.
    pub fn distance_tilde(&self, other: &Self) -> Result<f64> {
        self.same_basis(other)?;
        let n = check_particles(self.particle_count)?;
        let sq: f64 = self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((n * sq).sqrt())
    }

    /// Raw inner product `⟨self|other⟩` of the unit-normalized amplitudes.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }
}

impl ManyBodyState for CoefficientState {
    fn particle_count(&self) -> usize {
        self.particle_count
    }

    fn overlap(&self, other: &Self) -> Result<OverlapValue> {
        self.same_basis(other)?;
        OverlapValue::from_complex(self.inner(other))
    }

    /// `sqrt(N) min_φ ‖ψ1 - e^{iφ} ψ2‖`, evaluated at the optimal phase.
    fn distance_to(&self, other: &Self) -> Result<f64> {
        if self.particle_count != other.particle_count {
            return Err(Error::invalid("D_psi is only defined between equal particle numbers"));
        }
        self.same_basis(other)?;
        let n = check_particles(self.particle_count)?;
        // fixed argument order keeps the rounding, and so the result, symmetric
        let ordered = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
            .find(|o| o.is_ne())
            .is_none_or(|o| o.is_lt());
        let (x, y) = if ordered { (self, other) } else { (other, self) };
        let s = x.inner(y);
        let g = if s.norm() > 0.0 { s.conj() / s.norm() } else { Complex64::new(1.0, 0.0) };
        let sq: f64 = x.amplitudes.iter().zip(&y.amplitudes).map(|(a, b)| (a - g * b).norm_sqr()).sum();
        Ok((n * sq).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(m: f64, p: f64) -> OverlapValue {
        OverlapValue::new(m, p).unwrap()
    }

    #[test]
    fn d_psi_examples() {
        assert_eq!(d_psi(2, ov(1.0, 0.0)).unwrap(), 0.0);
        assert!((d_psi(2, ov(0.0, 0.0)).unwrap() - 2.0).abs() < 1e-15);
        assert!((d_psi(1, ov(0.5, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!(d_psi(0, ov(0.5, 0.0)).is_err());
    }

    #[test]
    fn d_psi_matches_direct_norm_of_difference() {
        // two real grid functions on [0, 1]; the phase minimization for real
        // overlaps is a choice between ±, so compute both and take the min
        let g = Grid1D::gauss_legendre(40, 0.0, 1.0).unwrap();
        let f1 = |x: f64| (std::f64::consts::PI * x).sin();
        let f2 = |x: f64| x * (1.0 - x) * (1.0 + 3.0 * x);
        let n1 = g.integrate(|x| f1(x) * f1(x)).sqrt();
        let n2 = g.integrate(|x| f2(x) * f2(x)).sqrt();
        let n_particles = 1usize;
        let scale = (n_particles as f64).sqrt();
        let direct = [1.0, -1.0]
            .iter()
            .map(|sign| {
                g.integrate(|x| (scale * f1(x) / n1 - sign * scale * f2(x) / n2).powi(2)).sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        let s = g.integrate(|x| f1(x) * f2(x)) / (n1 * n2);
        let closed = d_psi(n_particles, OverlapValue::from_real(s).unwrap()).unwrap();
        assert!((closed - direct).abs() < 1e-12);
    }

    #[test]
    fn d_psi_tilde_examples() {
        assert!((d_psi_tilde(1, ov(1.0, PI)).unwrap() - 2.0).abs() < 1e-15);
        let expected = 2.0 * 2.0 * (PI / 4.0).sin();
        assert!((d_psi_tilde(4, ov(1.0, PI / 2.0)).unwrap() - expected).abs() < 1e-14);
        assert_eq!(d_psi_tilde(3, ov(1.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn overlap_validation() {
        assert_eq!(ov(1.0 + 5e-11, 0.0).modulus(), 1.0);
        assert!(OverlapValue::new(1.0 + 1e-9, 0.0).is_err());
        assert!(OverlapValue::new(-0.1, 0.0).is_err());
        assert!((ov(0.5, -PI).phase() - PI).abs() < 1e-15);
        assert!((ov(0.5, 3.0 * PI).phase() - PI).abs() < 1e-12);
    }

    #[test]
    fn minimal_distances() {
        assert_eq!(d_rho_min(3, 3), 0.0);
        assert_eq!(d_rho_min(5, 4), 1.0);
        assert_eq!(d_rho_min(8, 2), 6.0);
        assert_eq!(d_psi_min(4, 1), 1.0);
        assert!((d_psi_min(2, 1) - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let big = d_psi_min(1_000_000, 1_000_001);
        assert!((big - 5e-4).abs() < 1e-6);
        assert!(big < d_psi_min(1, 2));
    }

    #[test]
    fn sphere_radii() {
        assert_eq!(distance_to_zero_state(2, StateKind::Density).unwrap(), 2.0);
        assert_eq!(distance_to_zero_state(2, StateKind::WaveFunction).unwrap(), 2f64.sqrt());
        assert_eq!(distance_to_zero_state(1, StateKind::Density).unwrap(), 1.0);
        assert!(distance_to_zero_state(0, StateKind::Density).is_err());
    }

    #[test]
    fn bound_checks() {
        let r = check_bounds(DistancePair { d_psi: 2.0, d_rho: 3.9 }, 2).unwrap();
        assert!(r.wavefunction_margin.abs() < 1e-15);
        assert!((r.density_margin - 0.1).abs() < 1e-12);
        assert!((r.triangle_margin - (2.0 * 2f64.sqrt() - 2.0)).abs() < 1e-15);
        match check_bounds(DistancePair { d_psi: 2.1, d_rho: 1.0 }, 2) {
            Err(Error::BoundViolation { bound: Bound::WaveFunction, .. }) => {}
            other => panic!("expected wave-function violation, got {other:?}"),
        }
        match check_bounds(DistancePair { d_psi: 1.0, d_rho: 4.2 }, 2) {
            Err(Error::BoundViolation { bound: Bound::Density, .. }) => {}
            other => panic!("expected density violation, got {other:?}"),
        }
    }

    #[test]
    fn d_rho_examples() {
        let lattice = DensityDomain::Lattice { sites: 4 };
        let a = DensityProfile::new(2, lattice.clone(), vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        let b = DensityProfile::new(2, lattice.clone(), vec![0.0, 0.0, 2.0, 0.0]).unwrap();
        assert_eq!(d_rho(&a, &a).unwrap(), 0.0);
        assert_eq!(d_rho(&a, &b).unwrap(), 4.0);
        let other = DensityProfile::new(2, DensityDomain::Lattice { sites: 2 }, vec![1.0, 1.0]).unwrap();
        assert!(matches!(d_rho(&a, &other), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn shifted_boxes_on_a_line() {
        // unit boxes on [0,1] and [0.5,1.5], sampled on a lattice with spacing
        // 1/200 that stands in for the line measure
        let cells = 300;
        let h = 1.0 / 200.0;
        let box_at = |lo: f64| -> Vec<f64> {
            (0..cells)
                .map(|i| {
                    let x = (i as f64 + 0.5) * h;
                    if x > lo && x < lo + 1.0 { h } else { 0.0 }
                })
                .collect()
        };
        let dom = DensityDomain::Lattice { sites: cells };
        let a = DensityProfile::new(1, dom.clone(), box_at(0.0)).unwrap();
        let b = DensityProfile::new(1, dom, box_at(0.5)).unwrap();
        assert!((d_rho(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_validation() {
        let dom = DensityDomain::Lattice { sites: 2 };
        assert!(DensityProfile::new(2, dom.clone(), vec![1.0, 0.5]).is_err());
        assert!(DensityProfile::new(1, dom.clone(), vec![1.5, -0.5]).is_err());
        assert!(DensityProfile::new(1, dom, vec![1.0]).is_err());
    }

    #[test]
    fn gauge_copy_distance() {
        let s = CoefficientState::new(
            3,
            vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.7), Complex64::new(0.5, 0.0)],
        )
        .unwrap();
        for phi in [0.1, 1.0, PI, -2.5] {
            let g = s.gauge_copy(phi);
            let o = s.overlap(&g).unwrap();
            assert!(d_psi(3, o).unwrap() < 1e-7);
            let expected = 2.0 * 3f64.sqrt() * (phi / 2.0).sin().abs();
            assert!((d_psi_tilde(3, o).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn direct_distance_agrees_with_overlap_route() {
        let a = CoefficientState::new(3, vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.7), Complex64::new(0.5, 0.0)]).unwrap();
        let b = CoefficientState::new(3, vec![Complex64::new(0.1, 0.4), Complex64::new(0.6, -0.2), Complex64::new(0.1, 0.3)]).unwrap();
        let direct = wavefunction_distance(&a, &b).unwrap();
        let via_overlap = d_psi(3, a.overlap(&b).unwrap()).unwrap();
        assert!((direct - via_overlap).abs() < 1e-12);
        let g = a.gauge_copy(2.1);
        assert!(wavefunction_distance(&a, &g).unwrap() <= 1e-15);
        assert_eq!(wavefunction_distance(&a, &a).unwrap(), 0.0);
        let expected = 2.0 * 3f64.sqrt() * (1.05f64).sin();
        assert!((a.distance_tilde(&g).unwrap() - expected).abs() < 1e-14);
    }
}

