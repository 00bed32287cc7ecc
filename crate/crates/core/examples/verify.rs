//! Checks a solved game: stage indifference, belief consistency and
//! small unilateral deviations, plus the J-connection invariant.
//!
//! Run with `cargo run --example verify`.

use iobt_psygame::equilibrium::{solve_game, verify_equilibrium, SolveMode};
use iobt_psygame::experiment::ExperimentSpec;
use iobt_psygame::Game;

fn main() -> iobt_psygame::Result<()> {
    let game = Game::new(ExperimentSpec::parse("")?.game)?;
    for mode in [SolveMode::Ne, SolveMode::Pe] {
        let sol = solve_game(&game, mode)?;
        let r = verify_equilibrium(&game, &sol, mode)?;
        println!(
            "{mode}: indifference {:.2e}  beliefs {:.2e}  soldier gain {:.2e}  attacker gain {:.2e}  -> {}",
            r.max_indifference_residual,
            r.max_belief_residual,
            r.max_soldier_gain,
            r.max_attacker_gain,
            if r.passes(1e-6) { "ok" } else { "FAILED" }
        );
    }
    let j = game.required_connections();
    let bad = game
        .terminals()
        .iter()
        .filter(|h| h.connections() != j)
        .count();
    println!(
        "{} terminal histories, {bad} with the wrong connection count",
        game.terminals().len()
    );
    Ok(())
}
