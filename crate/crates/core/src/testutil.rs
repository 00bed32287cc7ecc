use crate::channel::{DeviceDelays, FadingModel, LinkBudget};
use crate::game::{Game, GameConfig};

pub fn link() -> LinkBudget {
    LinkBudget {
        soldier_tx_power_mw: 100.0,
        jammer_tx_power_mw: 100.0,
        soldier_distance_m: 100.0,
        jammer_distance_m: 100.0,
        pathloss_exponent: 3.0,
        noise_power_mw: 1e-9,
        sinr_threshold: 1.0,
        success_target: 0.9,
        max_retransmissions: 10,
        block_size_bits: 1e5,
        bandwidth_hz: 20e6,
    }
}

/// Game with explicit `(unjammed, jammed)` delays, Δ = 80 ms and default weights.
pub fn game(j: usize, attacks: usize, delays: &[(f64, f64)]) -> Game {
    let config = GameConfig {
        links: vec![link(); delays.len()],
        fading: FadingModel::default(),
        required_connections: j,
        jam_power_per_attack_mw: 100.0,
        power_budget_mw: 100.0 * attacks as f64,
        delay_tolerance_s: 0.08,
        delay_weight: 0.5,
        power_weight: 0.5,
        soldier_frustration_weight: 0.5,
        attacker_frustration_weight: 0.5,
    };
    let delays = delays
        .iter()
        .map(|&(u, j)| DeviceDelays {
            unjammed_s: u,
            jammed_s: j,
        })
        .collect();
    Game::with_delays(config, delays).unwrap()
}
