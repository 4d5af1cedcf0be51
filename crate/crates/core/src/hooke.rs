//! Hooke's atom: two electrons in an isotropic harmonic trap,
//!
//! ```text
//! H = -½∇₁² - ½∇₂² + ½ω²(r₁² + r₂²) + 1/r₁₂
//! ```
//!
//! separated exactly into a centre-of-mass oscillator (mass 2, ground state
//! `exp(-ωR²)`, energy `3ω/2`) and the s-wave relative problem
//!
//! ```text
//! -u'' + (ω²r²/4 + 1/r) u = ε u,   u(0) = u(r_max) = 0
//! ```
//!
//! which is solved by central finite differences on a uniform grid.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{DensityDomain, DensityProfile, ManyBodyState, OverlapValue};
use crate::numerics::{eigh_lowest, Grid1D, SymmetricMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HookeParams {
    pub omega: f64,
}

impl HookeParams {
    pub fn new(omega: f64) -> Self {
        HookeParams { omega }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::invalid(format!("trap frequency must be positive, got {}", self.omega)));
        }
        Ok(())
    }
}

/// Discretization settings for the relative problem and the density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HookeSettings {
    /// Interior finite-difference points for `ω ≤ 1/2`; scaled by
    /// `sqrt(2ω)` above that, which keeps the discretization error flat.
    pub n_points: usize,
    /// Box size in units of the oscillator length: `r_max = factor / sqrt(ω)`.
    pub r_max_factor: f64,
    /// Gauss-Legendre nodes over the relative distance in the density integral.
    pub radial_nodes: usize,
    /// Gauss-Legendre nodes over the relative angle in the density integral.
    pub angular_nodes: usize,
}

impl HookeSettings {
    pub fn points_for(&self, omega: f64) -> usize {
        let scale = (2.0 * omega).sqrt().max(1.0);
        (self.n_points as f64 * scale).ceil() as usize
    }

    pub fn r_max_for(&self, omega: f64) -> f64 {
        self.r_max_factor / omega.sqrt()
    }
}

impl Default for HookeSettings {
    fn default() -> Self {
        HookeSettings {
            n_points: 4000,
            r_max_factor: 12.0,
            radial_nodes: 400,
            angular_nodes: 64,
        }
    }
}

/// Relative-motion ground state on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeSolution {
    pub epsilon: f64,
    /// Interior nodes `r_i = i h`; weights are `h`.
    pub grid: Grid1D,
    /// `u(r_i)`, positive, `h Σ u² = 1`.
    pub u: Vec<f64>,
}

impl RelativeSolution {
    pub fn spacing(&self) -> f64 {
        self.grid.weights()[0]
    }

    pub fn r_max(&self) -> f64 {
        self.grid.domain().1
    }

    /// Piecewise-linear `u(r)`, zero outside the box.
    pub fn linear_at(&self, r: f64) -> f64 {
        let h = self.spacing();
        let x = r / h;
        let n = self.u.len();
        if !(x > 0.0) || x >= (n + 1) as f64 {
            return 0.0;
        }
        let i = x.floor() as usize;
        let frac = x - i as f64;
        let at = |k: usize| if k == 0 || k > n { 0.0 } else { self.u[k - 1] };
        (1.0 - frac) * at(i) + frac * at(i + 1)
    }

    /// Four-point Lagrange interpolation of `u(r)`; `u` is extended by its
    /// boundary zeros and, at the origin, by odd reflection (`u(-r) = -u(r)`).
    pub fn cubic_at(&self, r: f64) -> f64 {
        let h = self.spacing();
        let n = self.u.len() as isize;
        let x = r / h;
        if !(x > 0.0) || x >= (n + 1) as f64 {
            return 0.0;
        }
        let at = |k: isize| -> f64 {
            if k == 0 || k > n {
                0.0
            } else if k < 0 {
                -self.u[(-k - 1) as usize]
            } else {
                self.u[(k - 1) as usize]
            }
        };
        let i = (x.floor() as isize).min(n);
        let t = x - i as f64;
        let (p0, p1, p2, p3) = (at(i - 1), at(i), at(i + 1), at(i + 2));
        // Lagrange weights for nodes at -1, 0, 1, 2
        let w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
        w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3
    }

    /// Number of sign changes of `u`, ignoring samples below `1e-10` of the
    /// peak.
    pub fn node_count(&self) -> usize {
        let peak = self.u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut nodes = 0;
        let mut prev = 0.0;
        for &v in &self.u {
            if v.abs() <= 1e-10 * peak {
                continue;
            }
            if prev != 0.0 && v.signum() != prev {
                nodes += 1;
            }
            prev = v.signum();
        }
        nodes
    }
}

/// Lowest s-wave solution of `-u'' + (ω²r²/4 + [1/r]) u = ε u` on `n_points`
/// interior points of `[0, r_max]`.
pub fn solve_relative(omega: f64, r_max: f64, n_points: usize, coulomb: bool) -> Result<RelativeSolution> {
    HookeParams::new(omega).validate()?;
    if n_points < 3 {
        return Err(Error::invalid("relative solver needs at least three grid points"));
    }
    let grid = Grid1D::uniform_interior(r_max, n_points)?;
    let h = grid.weights()[0];
    let kinetic = 1.0 / (h * h);
    let diag: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&r| 2.0 * kinetic + 0.25 * omega * omega * r * r + if coulomb { 1.0 / r } else { 0.0 })
        .collect();
    let off = vec![-kinetic; n_points - 1];
    let pair = eigh_lowest(&SymmetricMatrix::tridiagonal(diag, off)?, 1)?.remove(0);
    let norm = pair.vector.iter().map(|v| v * v).sum::<f64>().sqrt() * h.sqrt();
    let sign = if pair.vector.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let u: Vec<f64> = pair.vector.iter().map(|v| sign * v / norm).collect();
    let solution = RelativeSolution {
        epsilon: pair.value,
        grid,
        u,
    };
    let nodes = solution.node_count();
    if nodes != 0 {
        return Err(Error::Solver(format!("relative ground state has {nodes} nodes")));
    }
    Ok(solution)
}

/// `|ε(2n) - ε(n)|` for the default box: the grid-refinement change of the
/// relative energy.
pub fn refinement_change(omega: f64, settings: &HookeSettings) -> Result<f64> {
    let (r_max, n) = (settings.r_max_for(omega), settings.points_for(omega));
    let coarse = solve_relative(omega, r_max, n, true)?;
    let fine = solve_relative(omega, r_max, 2 * n, true)?;
    Ok((fine.epsilon - coarse.epsilon).abs())
}

/// Overlap of the normalized centre-of-mass Gaussians `exp(-ω₁R²)` and
/// `exp(-ω₂R²)`.
pub fn cm_overlap(omega1: f64, omega2: f64) -> f64 {
    (2.0 * (omega1 * omega2).sqrt() / (omega1 + omega2)).powf(1.5)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HookeState {
    pub params: HookeParams,
    /// Exponent of the centre-of-mass Gaussian `exp(-a R²)`; equals ω.
    pub cm_exponent: f64,
    pub relative: RelativeSolution,
    /// `3ω/2 + ε_rel`
    pub energy_total: f64,
}

pub fn solve_hooke(params: &HookeParams, settings: &HookeSettings) -> Result<HookeState> {
    params.validate()?;
    let omega = params.omega;
    let relative = solve_relative(omega, settings.r_max_for(omega), settings.points_for(omega), true)?;
    Ok(HookeState {
        params: *params,
        cm_exponent: params.omega,
        energy_total: 1.5 * params.omega + relative.epsilon,
        relative,
    })
}

/// Overlap of two Hooke ground states. Both relative functions are sampled
/// (linear interpolation) on a uniform grid with the finer spacing of the two
/// spanning the larger box.
pub fn hooke_overlap(a: &HookeState, b: &HookeState) -> Result<OverlapValue> {
    let cm = cm_overlap(a.cm_exponent, b.cm_exponent);
    let rel = if a.relative == b.relative {
        1.0
    } else {
        let h = a.relative.spacing().min(b.relative.spacing());
        let r_max = a.relative.r_max().max(b.relative.r_max());
        let n = (r_max / h).floor() as usize;
        if n < 2 {
            return Err(Error::DomainMismatch("relative grids too coarse to compare".into()));
        }
        let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
        for i in 1..=n {
            let r = i as f64 * h;
            let (ua, ub) = (a.relative.linear_at(r), b.relative.linear_at(r));
            ab += ua * ub;
            aa += ua * ua;
            bb += ub * ub;
        }
        if !(aa > 0.0 && bb > 0.0) {
            return Err(Error::DomainMismatch("relative functions vanish on the common grid".into()));
        }
        ab / (aa * bb).sqrt()
    };
    OverlapValue::from_real(cm * rel)
}

impl ManyBodyState for HookeState {
    fn particle_count(&self) -> usize {
        2
    }

    fn overlap(&self, other: &Self) -> Result<OverlapValue> {
        hooke_overlap(self, other)
    }
}

/// `ρ(r₁) = 2 ∫ |ψ(r₁, r₂)|² d³r₂`, sampled on `grid`.
///
/// The inner integral runs over the relative vector `s = r₁ - r₂`, for which
/// `ψ = Φ(|r₁ - s/2|) φ(s)`; it is done with Gauss-Legendre rules in `|s|`
/// and in the angle between `r₁` and `s`.
pub fn hooke_density(state: &HookeState, grid: &Grid1D, settings: &HookeSettings) -> Result<DensityProfile> {
    let values = density_samples(state, grid, settings.radial_nodes, settings.angular_nodes)?;
    let profile = DensityDomain::Radial(grid.clone());
    let total: f64 = values.iter().zip(profile.measure()).map(|(v, m)| v * m).sum();
    if (total - 2.0).abs() > 1e-4 {
        return Err(Error::Quadrature(format!(
            "Hooke density integrates to {total} on the requested grid (omega={})",
            state.params.omega
        )));
    }
    DensityProfile::new(2, profile, values)
}

pub(crate) fn density_samples(state: &HookeState, grid: &Grid1D, radial: usize, angular: usize) -> Result<Vec<f64>> {
    let a = state.cm_exponent;
    let s_rule = Grid1D::gauss_legendre(radial, 0.0, state.relative.r_max())?;
    let c_rule = Grid1D::gauss_legendre(angular, -1.0, 1.0)?;
    // weight_k = w_k u(s_k)²
    let s_terms: Vec<(f64, f64)> = s_rule
        .nodes()
        .iter()
        .zip(s_rule.weights())
        .map(|(&s, &w)| (s, w * state.relative.cubic_at(s).powi(2)))
        .filter(|(_, w)| *w > 0.0)
        .collect();
    // 2 (2a/π)^{3/2} / (4π) · 2π
    let prefactor = (2.0 * a / PI).powf(1.5);
    Ok(grid
        .nodes()
        .iter()
        .map(|&r| {
            let mut acc = 0.0;
            for &(s, ws) in &s_terms {
                let base = r * r + 0.25 * s * s;
                let cross = r * s;
                let mut inner = 0.0;
                for (&c, &wc) in c_rule.nodes().iter().zip(c_rule.weights()) {
                    inner += wc * (-2.0 * a * (base - cross * c)).exp();
                }
                acc += ws * inner;
            }
            prefactor * acc
        })
        .collect())
}

/// Radial grid adequate for Hooke densities with trap frequencies in
/// `[omega_min, omega_max]`.
pub fn density_grid(omega_min: f64, omega_max: f64) -> Result<Grid1D> {
    let inner = 0.1 / omega_max.sqrt();
    let outer = 14.0 / omega_min.sqrt();
    let panels = ((outer / inner).ln() / 1.25_f64.ln()).ceil() as usize;
    Grid1D::geometric_radial(inner, outer, panels.max(8), 12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_limit() {
        // the discretization error grows like ω h² ∝ ω/n², so n scales with ω
        for (omega, n) in [(0.5, 4000), (2.0, 8000)] {
            let r_max = 12.0 / f64::sqrt(omega);
            let sol = solve_relative(omega, r_max, n, false).unwrap();
            assert!((sol.epsilon - 1.5 * omega).abs() < 1e-6, "{}", sol.epsilon);
            // <r²> = 3/ω for |ψ|² ∝ exp(-ω r²/2)
            let r2: f64 = sol.grid.nodes().iter().zip(&sol.u).map(|(r, u)| r * r * u * u).sum::<f64>() * sol.spacing();
            assert!((r2 * omega / 3.0 - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn coulomb_raises_relative_energy() {
        let free = solve_relative(0.3, 12.0 / 0.3f64.sqrt(), 2000, false).unwrap();
        let full = solve_relative(0.3, 12.0 / 0.3f64.sqrt(), 2000, true).unwrap();
        assert!(full.epsilon > free.epsilon);
    }

    #[test]
    fn solution_is_normalized_and_nodeless() {
        let s = solve_hooke(&HookeParams::new(0.5), &HookeSettings::default()).unwrap();
        let norm: f64 = s.relative.u.iter().map(|u| u * u).sum::<f64>() * s.relative.spacing();
        assert!((norm - 1.0).abs() < 1e-8);
        assert!(s.relative.u.iter().all(|&u| u >= 0.0));
        assert_eq!(s.relative.node_count(), 0);
        assert!(s.relative.u[0] < 1e-2);
    }

    #[test]
    fn cm_overlap_values() {
        assert_eq!(cm_overlap(0.7, 0.7), 1.0);
        assert!((cm_overlap(1.0, 4.0) - 0.8f64.powf(1.5)).abs() < 1e-15);
        assert!((cm_overlap(1.0, 4.0) - 0.71554).abs() < 1e-5);
        assert_eq!(cm_overlap(0.3, 2.0), cm_overlap(2.0, 0.3));
    }

    #[test]
    fn cm_overlap_matches_quadrature() {
        // ∫ N1 N2 exp(-(a+b) R²) d³R with normalized Gaussians
        let g = Grid1D::geometric_radial(0.01, 20.0, 30, 16).unwrap();
        let (a, b) = (0.5, 2.25);
        let na = (2.0 * a / PI).powf(0.75);
        let nb = (2.0 * b / PI).powf(0.75);
        let q = 4.0 * PI * g.integrate(|r| r * r * na * nb * (-(a + b) * r * r).exp());
        assert!((q - cm_overlap(a, b)).abs() < 1e-13);
    }

    #[test]
    fn interpolation_reproduces_nodes() {
        let s = solve_relative(1.0, 12.0, 200, true).unwrap();
        for (i, &r) in s.grid.nodes().iter().enumerate() {
            assert!((s.linear_at(r) - s.u[i]).abs() < 1e-13);
            assert!((s.cubic_at(r) - s.u[i]).abs() < 1e-13);
        }
        assert_eq!(s.linear_at(-1.0), 0.0);
        assert_eq!(s.cubic_at(13.0), 0.0);
    }

    #[test]
    fn overlap_near_identity() {
        let set = HookeSettings::default();
        let a = solve_hooke(&HookeParams::new(0.5), &set).unwrap();
        let b = solve_hooke(&HookeParams::new(0.55), &set).unwrap();
        assert_eq!(hooke_overlap(&a, &a).unwrap().modulus(), 1.0);
        let s = hooke_overlap(&a, &b).unwrap().modulus();
        assert!(s > 0.99 && s < 1.0, "{s}");
    }

    #[test]
    fn angular_quadrature_matches_closed_form() {
        // the angular integral has the closed form
        // ∫ exp(-2a(r² + s²/4 - r s c)) dc = exp(-2a(r - s/2)²) (1 - e^{-4ars}) / (2ars)
        let set = HookeSettings::default();
        let state = solve_hooke(&HookeParams::new(0.5), &set).unwrap();
        let grid = Grid1D::geometric_radial(0.2, 12.0, 10, 4).unwrap();
        let numeric = density_samples(&state, &grid, 400, 64).unwrap();
        let a = state.cm_exponent;
        let s_rule = Grid1D::gauss_legendre(400, 0.0, state.relative.r_max()).unwrap();
        for (&r, &rho) in grid.nodes().iter().zip(&numeric) {
            let oracle = (2.0 * a / PI).powf(1.5)
                * s_rule.integrate(|s| {
                    let x = 2.0 * a * r * s;
                    let u = state.relative.cubic_at(s);
                    u * u * (-2.0 * a * (r - 0.5 * s).powi(2)).exp() * (-(-2.0 * x).exp_m1()) / x
                });
            assert!((rho - oracle).abs() <= 1e-10 * oracle.max(1e-6), "r={r}: {rho} vs {oracle}");
        }
    }

    #[test]
    fn exactly_solvable_point() {
        let set = HookeSettings::default();
        let s = solve_hooke(&HookeParams::new(0.5), &set).unwrap();
        assert!((s.energy_total - 2.0).abs() < 1e-4, "{}", s.energy_total);
        let oracle = solve_relative(0.5, 12.0 / 0.5f64.sqrt(), 32000, true).unwrap();
        assert!((s.relative.epsilon - oracle.epsilon).abs() < 1e-6);
        assert!((0.75 + oracle.epsilon - 2.0).abs() < 1e-8, "{}", oracle.epsilon);
    }

    #[test]
    fn refinement_is_stable() {
        for omega in [0.01, 0.05, 0.5, 5.0, 20.0] {
            let d = refinement_change(omega, &HookeSettings::default()).unwrap();
            assert!(d < 1e-6, "omega={omega}: {d}");
        }
    }

    #[test]
    fn overlap_decays_monotonically() {
        let set = HookeSettings::default();
        let reference = solve_hooke(&HookeParams::new(0.5), &set).unwrap();
        let mut prev = 1.0;
        for omega in [0.6, 0.8, 1.2, 2.0, 4.0, 8.0] {
            let s = solve_hooke(&HookeParams::new(omega), &set).unwrap();
            let m = hooke_overlap(&reference, &s).unwrap().modulus();
            assert!(m > 0.0 && m < prev, "omega={omega}: {m}");
            prev = m;
        }
    }

    #[test]
    fn density_is_normalized_and_positive() {
        let set = HookeSettings::default();
        for omega in [0.05, 0.5, 5.0] {
            let s = solve_hooke(&HookeParams::new(omega), &set).unwrap();
            let grid = density_grid(omega, omega).unwrap();
            let rho = hooke_density(&s, &grid, &set).unwrap();
            assert!((rho.integral() - 2.0).abs() < 1e-6, "omega={omega}: {}", rho.integral());
            let interior = &rho.values()[..rho.values().len() / 2];
            assert!(interior.iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn confinement_pulls_density_inward() {
        let set = HookeSettings::default();
        let grid = density_grid(0.5, 5.0).unwrap();
        let peak = |omega: f64| {
            let s = solve_hooke(&HookeParams::new(omega), &set).unwrap();
            let rho = hooke_density(&s, &grid, &set).unwrap();
            let (i, _) = grid
                .nodes()
                .iter()
                .zip(rho.values())
                .map(|(r, v)| r * r * v)
                .enumerate()
                .fold((0, f64::MIN), |best, (i, v)| if v > best.1 { (i, v) } else { best });
            grid.nodes()[i]
        };
        assert!(peak(5.0) < peak(0.5));
    }

    #[test]
    fn angular_rule_is_converged() {
        let s = solve_hooke(&HookeParams::new(0.5), &HookeSettings::default()).unwrap();
        let grid = density_grid(0.5, 0.5).unwrap();
        let a = density_samples(&s, &grid, 400, 64).unwrap();
        let b = density_samples(&s, &grid, 400, 48).unwrap();
        let diff = a.iter().zip(&b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(diff < 1e-7, "{diff}");
    }
}
