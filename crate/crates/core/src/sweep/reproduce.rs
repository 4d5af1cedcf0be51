use std::path::{Path, PathBuf};

use serde::Serialize;

use super::analysis::{analyze, superposition_check, AnalysisReport};
use super::output::{emit_csv, emit_svg, Series};
use super::presets::preset_panels;
use super::run::{run_sweep, SweepOutput};
use crate::error::{Error, Result};

/// Normalized initial slope allowed by the "at most 45 degrees" property.
pub const INITIAL_SLOPE_LIMIT: f64 = 1.05;
pub const LINEAR_R2_THRESHOLD: f64 = 0.95;
/// Sweeps reaching this fraction of `sqrt(2N)` are expected to steepen.
pub const TAIL_REACH: f64 = 0.9;
pub const SUPERPOSITION_THRESHOLD: f64 = 0.1;
pub const SUPERPOSITION_PAIR: (&str, &str) = ("helium-Z2-down", "hooke-down");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepVerdict {
    pub label: String,
    pub panel: String,
    pub particle_count: usize,
    pub analysis: AnalysisReport,
    pub monotonic: bool,
    pub initial_slope_ok: bool,
    /// Soft property; recorded, never fatal.
    pub linear_ok: bool,
    /// `None` when the sweep does not reach `0.9 sqrt(2N)`.
    pub tail_ok: Option<bool>,
    pub degenerate_records: usize,
    pub zero_density_distance_off_reference: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperpositionReport {
    pub curve_a: String,
    pub curve_b: String,
    pub max_deviation: f64,
    pub threshold: f64,
    pub within_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig2Report {
    pub sweeps: Vec<SweepVerdict>,
    pub superposition: SuperpositionReport,
    #[serde(skip)]
    pub outputs: Vec<SweepOutput>,
    #[serde(skip)]
    pub files: Vec<PathBuf>,
}

fn verdict(panel: &str, out: &SweepOutput) -> Result<SweepVerdict> {
    let analysis = analyze(&out.records, out.particle_count)?;
    let zero_rho = out.records.iter().filter(|r| r.d_psi > 0.0 && r.d_rho <= 1e-9).count();
    Ok(SweepVerdict {
        label: out.label.clone(),
        panel: panel.to_string(),
        particle_count: out.particle_count,
        monotonic: analysis.monotonic,
        initial_slope_ok: analysis.initial_slope <= INITIAL_SLOPE_LIMIT,
        linear_ok: analysis.linear_r2.is_some_and(|r2| r2 >= LINEAR_R2_THRESHOLD),
        tail_ok: (analysis.reach >= TAIL_REACH).then_some(analysis.tail_slope_ratio > 1.0),
        degenerate_records: out.records.iter().filter(|r| r.flags.iter().any(|f| f == "degenerate")).count(),
        zero_density_distance_off_reference: zero_rho,
        analysis,
    })
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes") + "\n";
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs every preset sweep and writes, into `outdir`: one CSV per sweep,
/// one SVG per panel (normalized axes), `analysis.json` and
/// `superposition.json`.
pub fn reproduce_fig2(outdir: &Path) -> Result<Fig2Report> {
    std::fs::create_dir_all(outdir).map_err(|source| Error::Io {
        path: outdir.to_path_buf(),
        source,
    })?;
    let mut sweeps = Vec::new();
    let mut outputs = Vec::new();
    let mut files = Vec::new();
    for panel in preset_panels() {
        let mut series = Vec::new();
        for spec in &panel.sweeps {
            let out = run_sweep(spec)?;
            let csv = outdir.join(format!("{}.csv", out.label));
            emit_csv(&out.records, &csv)?;
            files.push(csv);
            series.push(Series::from_records(&out.label, &out.records, true));
            sweeps.push(verdict(panel.id, &out)?);
            outputs.push(out);
        }
        let svg = outdir.join(format!("panel_{}.svg", panel.id));
        emit_svg(panel.title, &series, true, &svg)?;
        files.push(svg);
    }
    let find = |label: &str| {
        outputs
            .iter()
            .find(|o| o.label == label)
            .ok_or_else(|| Error::invalid(format!("missing preset sweep {label}")))
    };
    let (a, b) = (find(SUPERPOSITION_PAIR.0)?, find(SUPERPOSITION_PAIR.1)?);
    let max_deviation = superposition_check(&a.records, &b.records)?;
    let superposition = SuperpositionReport {
        curve_a: a.label.clone(),
        curve_b: b.label.clone(),
        max_deviation,
        threshold: SUPERPOSITION_THRESHOLD,
        within_threshold: max_deviation < SUPERPOSITION_THRESHOLD,
    };
    let analysis = outdir.join("analysis.json");
    write_json(&analysis, &sweeps)?;
    let sup = outdir.join("superposition.json");
    write_json(&sup, &superposition)?;
    files.extend([analysis, sup]);
    Ok(Fig2Report {
        sweeps,
        superposition,
        outputs,
        files,
    })
}
