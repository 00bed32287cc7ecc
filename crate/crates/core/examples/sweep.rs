//! A parameter sweep over the delay tolerance, printed as CSV.
//!
//! Run with `cargo run --release --example sweep`.

use iobt_psygame::experiment::{rows_to_csv, run_experiment, ExperimentSpec};

const SPEC: &str = r#"
modes = ["ne", "pe"]

[sweep]
delay_tolerance_ms = { start = 65.0, stop = 129.0, step = 16.0 }
"#;

fn main() -> iobt_psygame::Result<()> {
    let spec = ExperimentSpec::parse(SPEC)?;
    let out = run_experiment(&spec)?;
    print!("{}", rows_to_csv(&out.rows)?);
    Ok(())
}
