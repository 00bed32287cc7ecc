//! Equilibrium checks: stage indifference, belief consistency and a local
//! deviation oracle evaluated over the enumerated game tree.

use serde::{Deserialize, Serialize};

use super::stage::residual_pair;
use super::{EquilibriumSolution, SolveMode};
use crate::error::Result;
use crate::game::{reach_probability, Game, MixedAction, Player, StageState, StrategyProfile};

const DEVIATION_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateCheck {
    pub state: StageState,
    pub soldier_residual: f64,
    pub attacker_residual: f64,
    pub soldier_deviation_gain: f64,
    pub attacker_deviation_gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: SolveMode,
    pub states: Vec<StateCheck>,
    pub max_indifference_residual: f64,
    pub max_belief_residual: f64,
    pub max_soldier_gain: f64,
    pub max_attacker_gain: f64,
}

impl VerificationReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_indifference_residual <= tol
            && self.max_belief_residual == 0.0
            && self.max_soldier_gain <= tol
            && self.max_attacker_gain <= tol
    }
}

/// Expected utility of `who` over the full tree when play follows `profile`
/// while the belief-dependent stage terms stay fixed at the solution's beliefs.
///
/// Each step contributes its immediate material payoff plus, in PE mode, the
/// stage frustration term of the realized action pair.
pub fn deviation_utility(
    game: &Game,
    solution: &EquilibriumSolution,
    profile: &StrategyProfile,
    mode: SolveMode,
    who: Player,
) -> Result<f64> {
    let (omega_s, omega_a) = mode.weights(game);
    let (base_s, base_a) = game.terminal_base();
    let mut total = 0.0;
    for z in game.terminals() {
        let q = reach_probability(&profile.soldier, &profile.attacker, z)?;
        if q == 0.0 {
            continue;
        }
        let mut u = match who {
            Player::Soldier => base_s,
            Player::Attacker => base_a,
        };
        for (state, a, b) in z.path() {
            let (n, m) = (!a.is_first() as usize, !b.is_first() as usize);
            let p = &solution.stages[&state].payoffs;
            match who {
                Player::Soldier => {
                    u += game.soldier_immediate(state, a, b);
                    if omega_s != 0.0 {
                        let alpha = solution.beliefs.soldier_second[&state].p_first;
                        u += p.soldier_psych(alpha, omega_s)[n][m] - p.soldier[n][m];
                    }
                }
                Player::Attacker => {
                    u += game.attacker_immediate(state, a, b);
                    if omega_a != 0.0 {
                        let beta = solution.beliefs.attacker_second[&state].p_first;
                        u += p.attacker_psych(beta, omega_a)[n][m] - p.attacker[n][m];
                    }
                }
            }
        }
        total += q * u;
    }
    Ok(total)
}

fn max_gain(
    game: &Game,
    solution: &EquilibriumSolution,
    mode: SolveMode,
    state: StageState,
    who: Player,
) -> Result<f64> {
    let record = &solution.stages[&state];
    let two_actions = match who {
        Player::Soldier => record.support.soldier.iter().all(|&b| b),
        Player::Attacker => record.support.attacker.iter().all(|&b| b),
    };
    if !two_actions {
        return Ok(0.0);
    }
    let baseline = deviation_utility(game, solution, &solution.profile, mode, who)?;
    let mut best = f64::NEG_INFINITY;
    for delta in [-DEVIATION_STEP, DEVIATION_STEP] {
        let mut deviated = solution.profile.clone();
        let map = match who {
            Player::Soldier => &mut deviated.soldier,
            Player::Attacker => &mut deviated.attacker,
        };
        let current = map[&state].p_first;
        let moved = (current + delta).clamp(0.0, 1.0);
        if moved == current {
            continue;
        }
        map.insert(state, MixedAction::clamped(moved));
        let u = deviation_utility(game, solution, &deviated, mode, who)?;
        best = best.max(u - baseline);
    }
    Ok(if best.is_finite() { best } else { 0.0 })
}

/// Checks a solution under the given mode. Always returns diagnostics.
pub fn verify_equilibrium(
    game: &Game,
    solution: &EquilibriumSolution,
    mode: SolveMode,
) -> Result<VerificationReport> {
    let (omega_s, omega_a) = mode.weights(game);
    let mut states = Vec::new();
    let mut max_res: f64 = 0.0;
    let mut max_belief: f64 = 0.0;
    let mut max_s: f64 = f64::NEG_INFINITY;
    let mut max_a: f64 = f64::NEG_INFINITY;
    for (&state, record) in &solution.stages {
        let alpha = solution.profile.soldier[&state].p_first;
        let beta = solution.profile.attacker[&state].p_first;
        let (rs, ra) = residual_pair(
            &record.payoffs,
            record.support,
            alpha,
            beta,
            omega_s,
            omega_a,
        );
        let b = &solution.beliefs;
        for v in [
            b.soldier_second.get(&state).map(|m| m.p_first - alpha),
            b.attacker_first.get(&state).map(|m| m.p_first - alpha),
            b.soldier_first.get(&state).map(|m| m.p_first - beta),
            b.attacker_second.get(&state).map(|m| m.p_first - beta),
        ] {
            max_belief = max_belief.max(v.map_or(f64::INFINITY, f64::abs));
        }
        let gs = max_gain(game, solution, mode, state, Player::Soldier)?;
        let ga = max_gain(game, solution, mode, state, Player::Attacker)?;
        max_res = max_res.max(rs).max(ra);
        max_s = max_s.max(gs);
        max_a = max_a.max(ga);
        states.push(StateCheck {
            state,
            soldier_residual: rs,
            attacker_residual: ra,
            soldier_deviation_gain: gs,
            attacker_deviation_gain: ga,
        });
    }
    Ok(VerificationReport {
        mode,
        states,
        max_indifference_residual: max_res,
        max_belief_residual: max_belief,
        max_soldier_gain: if max_s.is_finite() { max_s } else { 0.0 },
        max_attacker_gain: if max_a.is_finite() { max_a } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{DeviceDelays, FadingModel, LinkBudget};
    use crate::equilibrium::solve_game;
    use crate::game::GameConfig;

    fn game3() -> Game {
        let link = LinkBudget {
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
        };
        let config = GameConfig {
            links: vec![link; 3],
            fading: FadingModel::default(),
            required_connections: 1,
            jam_power_per_attack_mw: 100.0,
            power_budget_mw: 100.0,
            delay_tolerance_s: 0.08,
            delay_weight: 0.5,
            power_weight: 0.5,
            soldier_frustration_weight: 0.6,
            attacker_frustration_weight: 0.4,
        };
        let delays = [(0.01, 0.12), (0.012, 0.1), (0.008, 0.11)]
            .iter()
            .map(|&(u, j)| DeviceDelays {
                unjammed_s: u,
                jammed_s: j,
            })
            .collect();
        Game::with_delays(config, delays).unwrap()
    }

    #[test]
    fn solutions_verify_in_their_own_mode() {
        let g = game3();
        for mode in [SolveMode::Ne, SolveMode::Pe] {
            let sol = solve_game(&g, mode).unwrap();
            let r = verify_equilibrium(&g, &sol, mode).unwrap();
            assert_eq!(r.max_belief_residual, 0.0);
            assert!(r.passes(1e-9), "{mode}: {r:?}");
            let u = deviation_utility(&g, &sol, &sol.profile, mode, Player::Soldier).unwrap();
            assert!((u - sol.root_values().0).abs() < 1e-12);
        }
    }

    #[test]
    fn ne_is_not_a_pe() {
        let g = game3();
        let sol = solve_game(&g, SolveMode::Ne).unwrap();
        let r = verify_equilibrium(&g, &sol, SolveMode::Pe).unwrap();
        assert!(r.max_indifference_residual > 1e-6);
    }

    #[test]
    fn perturbed_profile_is_detected() {
        let g = game3();
        let mut sol = solve_game(&g, SolveMode::Ne).unwrap();
        let root = StageState::ROOT;
        let a = sol.profile.soldier[&root].p_first;
        assert!(a > 0.0 && a < 1.0, "root should mix, got {a}");
        sol.profile
            .soldier
            .insert(root, MixedAction::clamped(a + 0.1));
        let r = verify_equilibrium(&g, &sol, SolveMode::Ne).unwrap();
        assert!(r.max_attacker_gain > 1e-6);
    }
}
