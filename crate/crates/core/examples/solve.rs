//! Nash and psychological equilibria of the default game, state by state.
//!
//! Run with `cargo run --example solve`.

use iobt_psygame::equilibrium::{solve_game, SolveMode};
use iobt_psygame::experiment::ExperimentSpec;
use iobt_psygame::Game;

fn main() -> iobt_psygame::Result<()> {
    let game = Game::new(ExperimentSpec::parse("")?.game)?;
    let ne = solve_game(&game, SolveMode::Ne)?;
    let pe = solve_game(&game, SolveMode::Pe)?;
    println!("state        NE connect  NE jam   PE connect  PE jam   kind");
    for (s, rec) in &pe.stages {
        println!(
            "{:<12} {:>9.4}  {:>6.4}   {:>9.4}  {:>6.4}   {:?}",
            s.to_string(),
            ne.profile.soldier[s].p_first,
            ne.profile.attacker[s].p_first,
            pe.profile.soldier[s].p_first,
            pe.profile.attacker[s].p_first,
            rec.equilibrium.kind
        );
    }
    let (a, b) = ne.root_material_values();
    let (c, d) = pe.root_material_values();
    println!(
        "material payoffs  NE soldier {a:.4} attacker {b:.4}  PE soldier {c:.4} attacker {d:.4}"
    );
    Ok(())
}
