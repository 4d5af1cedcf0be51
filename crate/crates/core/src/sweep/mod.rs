//! Parameter sweeps against a reference state, curve analysis and file
//! output.

mod analysis;
mod output;
mod presets;
mod reproduce;
mod run;
mod spec;

pub use analysis::{
    analyze, sorted_by_d_psi, superposition_check, AnalysisReport, INITIAL_POINTS, LINEAR_WINDOW, MIN_RECORDS,
    MONOTONIC_TOLERANCE,
};
pub use output::{emit_csv, emit_svg, read_csv, records_from_csv, records_to_csv, render_svg, Series, CSV_HEADER};
pub use presets::{preset_panels, preset_paper_sweeps, Panel};
pub use reproduce::{
    reproduce_fig2, Fig2Report, SuperpositionReport, SweepVerdict, INITIAL_SLOPE_LIMIT, LINEAR_R2_THRESHOLD,
    SUPERPOSITION_PAIR, SUPERPOSITION_THRESHOLD, TAIL_REACH,
};
pub use run::{run_sweep, DistanceRecord, SweepOutput};
pub use spec::{Accuracy, HeliumAccuracy, Model, ModelParams, SweepSpec};
