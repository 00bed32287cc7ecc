//! Writes a learning trace, reruns it from its embedded config and compares.
//!
//! Run with `cargo run --release --example replay`.

use iobt_psygame::experiment::{replay_file, write_trace, ExperimentSpec};
use iobt_psygame::learning::{run_learning, LearningConfig};
use iobt_psygame::Game;

fn main() -> iobt_psygame::Result<()> {
    let game = Game::new(ExperimentSpec::parse("[game]\ndevices = 3")?.game)?;
    let trace = run_learning(
        &game,
        &LearningConfig {
            rng_seed: 42,
            max_iterations: 1000,
            ..LearningConfig::default()
        },
    )?;
    let path = std::env::temp_dir().join("iobt_replay_example.json");
    write_trace(&trace, &path)?;
    println!(
        "wrote {} ({} iterations)",
        path.display(),
        trace.iterations.len()
    );
    println!("replay identical: {}", replay_file(&path)?);
    Ok(())
}
