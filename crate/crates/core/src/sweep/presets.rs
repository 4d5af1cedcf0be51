use super::spec::{Accuracy, Model, ModelParams, SweepSpec};
use crate::helium::HeliumParams;
use crate::hooke::HookeParams;
use crate::hubbard::HubbardParams;

/// One figure panel: a model and its sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub id: &'static str,
    pub title: &'static str,
    pub sweeps: Vec<SweepSpec>,
}

pub const HUBBARD_SITES: usize = 8;
pub const HUBBARD_REFERENCE_OMEGA: f64 = 4.0;
pub const HUBBARD_MIN_OMEGA: f64 = 0.05;
pub const HUBBARD_STEPS: usize = 20;
pub const HOOKE_REFERENCE_OMEGA: f64 = 0.5;
pub const HOOKE_RANGE: (f64, f64) = (0.01, 20.0);
pub const HOOKE_STEPS: usize = 24;
/// Lowest charge visited by the helium sweeps: the first multiple of the
/// step above the solver's lower limit.
pub const HELIUM_LOWEST_Z: f64 = 1.0;

/// `reference · (end/reference)^(k/steps)`, `k = 0..=steps`.
fn geometric_path(reference: f64, end: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| reference * (end / reference).powf(k as f64 / steps as f64)).collect()
}

/// `reference + k·step` in hundredths so that labels stay exact decimals.
fn arithmetic_path(reference: f64, end: f64, step: f64) -> Vec<f64> {
    let (r, e, s) = ((reference * 100.0).round() as i64, (end * 100.0).round() as i64, (step * 100.0).round() as i64);
    let dir = if e >= r { s } else { -s };
    let count = (e - r) / dir;
    (0..=count).map(|k| (r + k * dir) as f64 / 100.0).collect()
}

fn spec(label: String, model: Model, reference: ModelParams, varied: Vec<ModelParams>) -> SweepSpec {
    SweepSpec {
        label,
        model,
        reference,
        varied,
        normalize: true,
        accuracy: Accuracy::default(),
    }
}

fn helium_sweep(reference: f64, end: f64, step: f64, label: &str) -> SweepSpec {
    let varied = arithmetic_path(reference, end, step)
        .into_iter()
        .map(|z| ModelParams::Helium(HeliumParams::new(z)))
        .collect();
    spec(label.into(), Model::Helium, ModelParams::Helium(HeliumParams::new(reference)), varied)
}

fn hooke_sweep(end: f64, label: &str) -> SweepSpec {
    let varied = geometric_path(HOOKE_REFERENCE_OMEGA, end, HOOKE_STEPS)
        .into_iter()
        .map(|w| ModelParams::Hooke(HookeParams::new(w)))
        .collect();
    spec(label.into(), Model::Hooke, ModelParams::Hooke(HookeParams::new(HOOKE_REFERENCE_OMEGA)), varied)
}

fn hubbard_sweep(n: usize, u: f64) -> SweepSpec {
    let at = |omega| ModelParams::Hubbard(HubbardParams::new(HUBBARD_SITES, n / 2, n / 2, u, omega));
    let varied = geometric_path(HUBBARD_REFERENCE_OMEGA, HUBBARD_MIN_OMEGA, HUBBARD_STEPS)
        .into_iter()
        .map(at)
        .collect();
    spec(format!("hubbard-N{n}-U{u}"), Model::Hubbard, at(HUBBARD_REFERENCE_OMEGA), varied)
}

/// The three panels: helium charge sweeps, Hooke trap sweeps and Hubbard
/// trap sweeps. Each varied list starts with the reference point itself.
pub fn preset_panels() -> Vec<Panel> {
    vec![
        Panel {
            id: "a",
            title: "Helium isoelectronic series",
            sweeps: vec![
                helium_sweep(3.0, HELIUM_LOWEST_Z, 0.05, "helium-Z3-down"),
                helium_sweep(2.0, 10.0, 0.25, "helium-Z2-up"),
                helium_sweep(2.0, HELIUM_LOWEST_Z, 0.05, "helium-Z2-down"),
            ],
        },
        Panel {
            id: "b",
            title: "Hooke's atom",
            sweeps: vec![hooke_sweep(HOOKE_RANGE.1, "hooke-up"), hooke_sweep(HOOKE_RANGE.0, "hooke-down")],
        },
        Panel {
            id: "c",
            title: "Trapped Hubbard chain, L = 8",
            sweeps: [2, 4, 8]
                .into_iter()
                .flat_map(|n| [2.0, 6.0].map(|u| hubbard_sweep(n, u)))
                .collect(),
        },
    ]
}

pub fn preset_paper_sweeps() -> Vec<SweepSpec> {
    preset_panels().into_iter().flat_map(|p| p.sweeps).collect()
}
