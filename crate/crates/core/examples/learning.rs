//! Bayesian learning in self-play and against a fixed jammer.
//!
//! Run with `cargo run --release --example learning`.

use iobt_psygame::experiment::ExperimentSpec;
use iobt_psygame::learning::{run_learning, LearningConfig, Opponent};
use iobt_psygame::{Game, StageState};

fn main() -> iobt_psygame::Result<()> {
    let game = Game::new(ExperimentSpec::parse("[game]\ndevices = 3")?.game)?;
    let selfplay = run_learning(
        &game,
        &LearningConfig {
            rng_seed: 1,
            stop_early: false,
            ..LearningConfig::default()
        },
    )?;
    let root = StageState::ROOT;
    println!("self-play, {} iterations", selfplay.iterations.len());
    for r in selfplay.iterations.iter().step_by(500) {
        println!(
            "  t={:>4}  freq(connect)={:.3}  freq(jam)={:.3}  soldier={:.4}  attacker={:.4}",
            r.iteration,
            r.soldier_belief[&root].p_first,
            r.attacker_belief[&root].p_first,
            r.soldier_expected,
            r.attacker_expected
        );
    }
    println!(
        "  target at root: connect {:.4} jam {:.4}",
        selfplay.target.soldier[&root].p_first, selfplay.target.attacker[&root].p_first
    );

    let scripted = run_learning(
        &game,
        &LearningConfig {
            rng_seed: 1,
            opponent: Opponent::ScriptedAttacker {
                jam_probability: 0.3,
            },
            ..LearningConfig::default()
        },
    )?;
    match scripted.converged_at {
        Some(n) => println!("against a jammer with p = 0.3: beliefs settled at iteration {n}"),
        None => println!("against a jammer with p = 0.3: no convergence"),
    }
    Ok(())
}
