use serde::{Deserialize, Serialize};

use super::spec::{ModelParams, SweepSpec};
use crate::error::{Error, Result};
use crate::helium::{self, HeliumState};
use crate::hooke::{self, HookeState};
use crate::hubbard::{self, LatticeGroundState};
use crate::metric::{check_bounds, d_psi, d_rho, DensityProfile, DistancePair, OverlapValue};

/// Distances between the reference state and one varied point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceRecord {
    pub param: String,
    pub d_psi: f64,
    pub d_rho: f64,
    pub d_psi_norm: f64,
    pub d_rho_norm: f64,
    pub overlap: f64,
    pub energy_ref: f64,
    pub energy_var: f64,
    pub flags: Vec<String>,
}

impl DistanceRecord {
    pub fn pair(&self) -> DistancePair {
        DistancePair {
            d_psi: self.d_psi,
            d_rho: self.d_rho,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub label: String,
    pub particle_count: usize,
    pub normalize: bool,
    pub records: Vec<DistanceRecord>,
}

/// A solved point: energy, density, overlap with the reference and flags.
struct Point {
    energy: f64,
    density: DensityProfile,
    overlap: OverlapValue,
    flags: Vec<String>,
}

fn at_point<T>(param: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::SweepPoint {
        param: param.to_string(),
        source: Box::new(e),
    })
}

/// Solves the reference once and every varied point, and returns one record
/// per varied point in the order given.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutput> {
    spec.validate()?;
    let labels: Vec<String> = spec.varied.iter().map(|p| p.label_against(&spec.reference)).collect();
    let ref_label = spec.reference.label_against(&spec.reference);
    let (reference, points) = match &spec.reference {
        ModelParams::Hubbard(_) => hubbard_points(spec, &ref_label, &labels)?,
        ModelParams::Hooke(_) => hooke_points(spec, &ref_label, &labels)?,
        ModelParams::Helium(_) => helium_points(spec, &ref_label, &labels)?,
    };
    let n = spec.particle_count();
    let scale_psi = (2.0 * n as f64).sqrt();
    let scale_rho = 2.0 * n as f64;
    let mut records = Vec::with_capacity(points.len());
    for (label, p) in labels.into_iter().zip(points) {
        let pair = DistancePair {
            d_psi: at_point(&label, d_psi(n, p.overlap))?,
            d_rho: at_point(&label, d_rho(&reference.density, &p.density))?,
        };
        at_point(&label, check_bounds(pair, n))?;
        let mut flags = reference.flags.clone();
        for f in p.flags {
            if !flags.contains(&f) {
                flags.push(f);
            }
        }
        records.push(DistanceRecord {
            param: label,
            d_psi: pair.d_psi,
            d_rho: pair.d_rho,
            d_psi_norm: pair.d_psi / scale_psi,
            d_rho_norm: pair.d_rho / scale_rho,
            overlap: p.overlap.modulus(),
            energy_ref: reference.energy,
            energy_var: p.energy,
            flags,
        });
    }
    Ok(SweepOutput {
        label: spec.label.clone(),
        particle_count: n,
        normalize: spec.normalize,
        records,
    })
}

fn hubbard_points(spec: &SweepSpec, ref_label: &str, labels: &[String]) -> Result<(Point, Vec<Point>)> {
    let solver = spec.accuracy.hubbard;
    let solve = |p: &ModelParams, label: &str| -> Result<LatticeGroundState> {
        let ModelParams::Hubbard(p) = p else { unreachable!("validated model") };
        at_point(label, solver.ground_state(p))
    };
    let point = |gs: &LatticeGroundState, reference: &LatticeGroundState, label: &str| -> Result<Point> {
        let flags = if gs.is_degenerate() {
            vec!["degenerate".to_string()]
        } else {
            Vec::new()
        };
        Ok(Point {
            energy: gs.energy,
            density: at_point(label, hubbard::site_density(gs))?,
            overlap: at_point(label, hubbard::lattice_overlap(reference, gs))?,
            flags,
        })
    };
    let reference = solve(&spec.reference, ref_label)?;
    let ref_point = point(&reference, &reference, ref_label)?;
    let mut points = Vec::with_capacity(labels.len());
    for (p, label) in spec.varied.iter().zip(labels) {
        let gs = solve(p, label)?;
        points.push(point(&gs, &reference, label)?);
    }
    Ok((ref_point, points))
}

fn hooke_points(spec: &SweepSpec, ref_label: &str, labels: &[String]) -> Result<(Point, Vec<Point>)> {
    let settings = spec.accuracy.hooke;
    let solve = |p: &ModelParams, label: &str| -> Result<HookeState> {
        let ModelParams::Hooke(p) = p else { unreachable!("validated model") };
        at_point(label, hooke::solve_hooke(p, &settings))
    };
    let reference = solve(&spec.reference, ref_label)?;
    let states = spec
        .varied
        .iter()
        .zip(labels)
        .map(|(p, l)| solve(p, l))
        .collect::<Result<Vec<_>>>()?;
    let omegas = states.iter().chain([&reference]).map(|s| s.params.omega);
    let (lo, hi) = omegas.fold((f64::INFINITY, 0.0_f64), |(lo, hi), w| (lo.min(w), hi.max(w)));
    let grid = hooke::density_grid(lo, hi)?;
    let point = |s: &HookeState, label: &str| -> Result<Point> {
        Ok(Point {
            energy: s.energy_total,
            density: at_point(label, hooke::hooke_density(s, &grid, &settings))?,
            overlap: at_point(label, hooke::hooke_overlap(&reference, s))?,
            flags: Vec::new(),
        })
    };
    let ref_point = point(&reference, ref_label)?;
    let points = states.iter().zip(labels).map(|(s, l)| point(s, l)).collect::<Result<Vec<_>>>()?;
    Ok((ref_point, points))
}

fn helium_points(spec: &SweepSpec, ref_label: &str, labels: &[String]) -> Result<(Point, Vec<Point>)> {
    let ModelParams::Helium(ref_params) = &spec.reference else { unreachable!("validated model") };
    let reference = at_point(ref_label, helium::solve_helium(ref_params))?;
    let rescale = spec.accuracy.helium.rescale_reference;
    let mut states: Vec<HeliumState> = Vec::with_capacity(labels.len());
    for (p, label) in spec.varied.iter().zip(labels) {
        let ModelParams::Helium(p) = p else { unreachable!("validated model") };
        let same_basis = differs_only_in_charge(ref_params, p);
        let state = if rescale && same_basis {
            reference.rescaled(p.z)
        } else {
            helium::solve_helium(p)
        };
        states.push(at_point(label, state)?);
    }
    let grid = helium::density_grid(states.iter().chain([&reference]))?;
    let point = |s: &HeliumState, label: &str| -> Result<Point> {
        Ok(Point {
            energy: s.energy,
            density: at_point(label, helium::helium_density(s, &grid))?,
            overlap: at_point(label, helium::helium_overlap(&reference, s))?,
            flags: Vec::new(),
        })
    };
    let ref_point = point(&reference, ref_label)?;
    let points = states.iter().zip(labels).map(|(s, l)| point(s, l)).collect::<Result<Vec<_>>>()?;
    Ok((ref_point, points))
}

fn differs_only_in_charge(a: &helium::HeliumParams, b: &helium::HeliumParams) -> bool {
    helium::HeliumParams { z: b.z, ..*a } == *b
}
