#![allow(dead_code)]

use iobt_psygame::channel::DeviceDelays;
use iobt_psygame::equilibrium::StagePayoffs;
use iobt_psygame::experiment::{load_spec, ExperimentSpec};
use iobt_psygame::{Game, GameConfig, History};
use rand::Rng;

pub fn template(name: &str) -> ExperimentSpec {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../templates")
        .join(name);
    load_spec(path).expect("template parses")
}

pub fn default_game(devices: usize) -> Game {
    let spec = ExperimentSpec::parse(&format!("[game]\ndevices = {devices}\n")).unwrap();
    Game::new(spec.game).unwrap()
}

pub fn base_config(devices: usize) -> GameConfig {
    ExperimentSpec::parse(&format!("[game]\ndevices = {devices}\n"))
        .unwrap()
        .game
}

/// Stage payoffs satisfying the regularity ordering, with gaps of at least 0.01.
pub fn random_regular<R: Rng>(rng: &mut R) -> StagePayoffs {
    let mut gap = || 0.01 + rng.gen::<f64>();
    let (a, b, c, d) = (gap(), gap(), gap(), gap());
    let (e, f) = (gap() - 0.01, gap() - 0.01);
    let p22 = rng.gen::<f64>();
    let q22 = rng.gen::<f64>();
    StagePayoffs::new(
        [[p22 - e, p22 + a], [p22 + b, p22]],
        [[q22 + f, q22 - c], [q22 - d, q22]],
    )
}

/// A game with random delays, requirement and budget on at most `max_devices` devices.
pub fn random_game<R: Rng>(rng: &mut R, max_devices: usize) -> Game {
    let x = rng.gen_range(1..=max_devices);
    random_game_sized(rng, x)
}

pub fn random_game_sized<R: Rng>(rng: &mut R, x: usize) -> Game {
    let mut config = base_config(x);
    config.required_connections = rng.gen_range(1..=x);
    config.power_budget_mw = config.jam_power_per_attack_mw * rng.gen_range(0..=x) as f64;
    config.delay_weight = rng.gen_range(0.1..0.9);
    config.power_weight = 1.0 - config.delay_weight;
    config.soldier_frustration_weight = rng.gen();
    config.attacker_frustration_weight = rng.gen();
    let delays = (0..x)
        .map(|_| {
            let u = rng.gen_range(0.005..0.05);
            DeviceDelays {
                unjammed_s: u,
                jammed_s: u + rng.gen_range(0.0..0.2),
            }
        })
        .collect();
    Game::with_delays(config, delays).unwrap()
}

/// Connections and attacks in a history code such as `CJSI`.
pub fn code_counts(code: &str) -> (usize, usize) {
    let b = code.as_bytes();
    let c = b.iter().step_by(2).filter(|&&x| x == b'C').count();
    let j = b.iter().skip(1).step_by(2).filter(|&&x| x == b'J').count();
    (c, j)
}

pub fn history_ok(game: &Game, h: &History) -> bool {
    let cfg = game.config();
    h.connections() == cfg.required_connections
        && h.attacks() as f64 * cfg.jam_power_per_attack_mw <= cfg.power_budget_mw + 1e-9
}
