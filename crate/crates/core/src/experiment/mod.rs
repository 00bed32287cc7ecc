//! Experiment specs, parameter sweeps and result files.
//!
//! A spec is a TOML file with `[game]`, `[game.geometry]`, `[learning]` and
//! `[sweep]` tables plus top-level `modes`, `seeds`, `output_path` and
//! `format`. See `templates/SCHEMA.md` in the repository.

mod output;
mod run;
mod spec;

pub use output::{
    emit_results, fmt_num, geometry_manifest, read_trace, render_rows, replay_file, round_sig,
    rows_to_csv, rows_to_json, trace_series_csv, write_trace, RESULT_COLUMNS,
};
pub use run::{
    output_dir, profile_summary, run_experiment, ExperimentOutput, ResultRow, OUTPUT_DIR_ENV,
};
pub use spec::{
    load_spec, AxisSpec, ExperimentSpec, GameSpec, Geometry, GeometrySpec, LearningSpec,
    OutputFormat, RunMode,
};
