//! Whole-game frustration and belief-dependent psychological utilities.
//!
//! Frustration is the positive part of the gap between a belief-based expected
//! payoff and the payoff actually realized at a terminal history. A player's
//! psychological utility adds, with weight ω, the frustration it expects to
//! inflict on its opponent.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::game::{reach_probability, Game, History, Player, StrategyMap};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrustrationReport {
    pub expected: f64,
    pub actual: f64,
    pub frustration: f64,
}

impl FrustrationReport {
    pub fn new(expected: f64, actual: f64) -> Self {
        FrustrationReport {
            expected,
            actual,
            frustration: (expected - actual).max(0.0),
        }
    }
}

/// `[π̄(α, δ¹) − π̃(z)]⁺`.
pub fn soldier_frustration(
    game: &Game,
    alpha: &StrategyMap,
    delta1: &StrategyMap,
    z: &History,
) -> Result<FrustrationReport> {
    let expected = game.expected_material_payoff(alpha, delta1, Player::Soldier)?;
    Ok(FrustrationReport::new(
        expected,
        game.soldier_terminal_payoff(z)?,
    ))
}

/// The attacker's perception of the soldier's frustration, `[π̄(ρ¹, ρ²) − π̃(z)]⁺`.
pub fn attacker_perceived_soldier_frustration(
    game: &Game,
    rho1: &StrategyMap,
    rho2: &StrategyMap,
    z: &History,
) -> Result<FrustrationReport> {
    let expected = game.expected_material_payoff(rho1, rho2, Player::Soldier)?;
    Ok(FrustrationReport::new(
        expected,
        game.soldier_terminal_payoff(z)?,
    ))
}

/// `[π̄′(β, ρ¹) − π′₀(z)]⁺`.
pub fn attacker_frustration(
    game: &Game,
    beta: &StrategyMap,
    rho1: &StrategyMap,
    z: &History,
) -> Result<FrustrationReport> {
    let expected = game.expected_material_payoff(rho1, beta, Player::Attacker)?;
    Ok(FrustrationReport::new(
        expected,
        game.attacker_terminal_payoff(z)?,
    ))
}

/// The soldier's perception of the attacker's frustration, `[π̄′(δ¹, δ²) − π′₀(z)]⁺`
/// with δ² driving soldier actions and δ¹ attacker actions.
pub fn soldier_perceived_attacker_frustration(
    game: &Game,
    delta1: &StrategyMap,
    delta2: &StrategyMap,
    z: &History,
) -> Result<FrustrationReport> {
    let expected = game.expected_material_payoff(delta2, delta1, Player::Attacker)?;
    Ok(FrustrationReport::new(
        expected,
        game.attacker_terminal_payoff(z)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsychUtility {
    pub material: f64,
    /// Expected frustration of the opponent, as perceived by the player.
    pub expected_opponent_frustration: f64,
    pub weight: f64,
    pub total: f64,
}

fn utility(
    game: &Game,
    own_side: (&StrategyMap, &StrategyMap),
    perceived_side: (&StrategyMap, &StrategyMap),
    who: Player,
    weight: f64,
) -> Result<PsychUtility> {
    let opponent = match who {
        Player::Soldier => Player::Attacker,
        Player::Attacker => Player::Soldier,
    };
    let material = game.expected_material_payoff(own_side.0, own_side.1, who)?;
    let perceived_expected =
        game.expected_material_payoff(perceived_side.0, perceived_side.1, opponent)?;
    let mut sum = 0.0;
    for (z, o) in game.terminals().iter().zip(game.terminal_outcomes()) {
        let q = reach_probability(own_side.0, own_side.1, z)?;
        if q == 0.0 {
            continue;
        }
        let actual = match opponent {
            Player::Soldier => o.soldier_payoff,
            Player::Attacker => o.attacker_payoff,
        };
        sum += q * (perceived_expected - actual).max(0.0);
    }
    let total = if weight == 0.0 {
        material
    } else {
        material + weight * sum
    };
    Ok(PsychUtility {
        material,
        expected_opponent_frustration: sum,
        weight,
        total,
    })
}

/// `u = π̄(α, δ¹) + ω_s Σ_z Q_{α,δ¹}(z) F_s(δ¹, δ², z)` with an explicit weight.
pub fn soldier_psych_utility_weighted(
    game: &Game,
    alpha: &StrategyMap,
    delta1: &StrategyMap,
    delta2: &StrategyMap,
    weight: f64,
) -> Result<PsychUtility> {
    utility(
        game,
        (alpha, delta1),
        (delta2, delta1),
        Player::Soldier,
        weight,
    )
}

/// `u′ = π̄′(β, ρ¹) + ω_a Σ_z Q_{ρ¹,β}(z) F_a(ρ¹, ρ², z)` with an explicit weight.
pub fn attacker_psych_utility_weighted(
    game: &Game,
    beta: &StrategyMap,
    rho1: &StrategyMap,
    rho2: &StrategyMap,
    weight: f64,
) -> Result<PsychUtility> {
    utility(game, (rho1, beta), (rho1, rho2), Player::Attacker, weight)
}

pub fn soldier_psych_utility(
    game: &Game,
    alpha: &StrategyMap,
    delta1: &StrategyMap,
    delta2: &StrategyMap,
) -> Result<f64> {
    let w = game.config().soldier_frustration_weight;
    Ok(soldier_psych_utility_weighted(game, alpha, delta1, delta2, w)?.total)
}

pub fn attacker_psych_utility(
    game: &Game,
    beta: &StrategyMap,
    rho1: &StrategyMap,
    rho2: &StrategyMap,
) -> Result<f64> {
    let w = game.config().attacker_frustration_weight;
    Ok(attacker_psych_utility_weighted(game, beta, rho1, rho2, w)?.total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{DeviceDelays, FadingModel, LinkBudget};
    use crate::game::{AttackerAction, GameConfig, MixedAction, SoldierAction, StageState};

    fn game2() -> Game {
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
            links: vec![link; 2],
            fading: FadingModel::default(),
            required_connections: 1,
            jam_power_per_attack_mw: 100.0,
            power_budget_mw: 100.0,
            delay_tolerance_s: 0.08,
            delay_weight: 0.5,
            power_weight: 0.5,
            soldier_frustration_weight: 0.5,
            attacker_frustration_weight: 0.5,
        };
        let delays = vec![
            DeviceDelays {
                unjammed_s: 0.01,
                jammed_s: 0.09,
            },
            DeviceDelays {
                unjammed_s: 0.02,
                jammed_s: 0.06,
            },
        ];
        Game::with_delays(config, delays).unwrap()
    }

    fn constant(game: &Game, p: f64) -> StrategyMap {
        let mut m = StrategyMap::new();
        for s in game.states() {
            m.insert(s, MixedAction::clamped(p));
        }
        m
    }

    /// Restricts a map so forced states carry their pure action.
    fn soldier_map(game: &Game, p: f64) -> StrategyMap {
        let mut m = StrategyMap::new();
        for s in game.states() {
            let f = game.feasible_actions(s).unwrap();
            m.insert(s, game.restrict_soldier(&f, MixedAction::clamped(p)));
        }
        m
    }

    fn attacker_map(game: &Game, p: f64) -> StrategyMap {
        let mut m = StrategyMap::new();
        for s in game.states() {
            let f = game.feasible_actions(s).unwrap();
            m.insert(s, game.restrict_attacker(&f, MixedAction::clamped(p)));
        }
        m
    }

    #[test]
    fn positive_part() {
        assert!((FrustrationReport::new(0.8, 0.6).frustration - 0.2).abs() < 1e-15);
        assert_eq!(FrustrationReport::new(0.6, 0.8).frustration, 0.0);
    }

    #[test]
    fn deterministic_match_has_no_frustration() {
        let g = game2();
        let alpha = soldier_map(&g, 1.0);
        let delta = attacker_map(&g, 0.0);
        let z = crate::game::History::new(vec![
            (SoldierAction::Connect, AttackerAction::Idle),
            (SoldierAction::Skip, AttackerAction::Idle),
        ]);
        let r = soldier_frustration(&g, &alpha, &delta, &z).unwrap();
        assert_eq!(r.expected, r.actual);
        assert_eq!(r.frustration, 0.0);
        let u = soldier_psych_utility(&g, &alpha, &delta, &alpha).unwrap();
        assert_eq!(
            u,
            g.expected_material_payoff(&alpha, &delta, Player::Soldier)
                .unwrap()
        );
    }

    #[test]
    fn perceived_equals_own_under_truthful_beliefs() {
        let g = game2();
        let alpha = soldier_map(&g, 0.3);
        let delta1 = attacker_map(&g, 0.6);
        for z in g.terminals() {
            let own = soldier_frustration(&g, &alpha, &delta1, z).unwrap();
            let perceived = attacker_perceived_soldier_frustration(&g, &alpha, &delta1, z).unwrap();
            assert_eq!(own, perceived);
        }
    }

    #[test]
    fn zero_weight_collapses_exactly() {
        let g = game2();
        let a = soldier_map(&g, 0.4);
        let b = attacker_map(&g, 0.7);
        let u = soldier_psych_utility_weighted(&g, &a, &b, &a, 0.0).unwrap();
        assert_eq!(
            u.total,
            g.expected_material_payoff(&a, &b, Player::Soldier).unwrap()
        );
        let v = attacker_psych_utility_weighted(&g, &b, &a, &b, 0.0).unwrap();
        assert_eq!(
            v.total,
            g.expected_material_payoff(&a, &b, Player::Attacker)
                .unwrap()
        );
    }

    #[test]
    fn uniform_beliefs_match_hand_enumeration() {
        // Soldier utility with uniform α, δ¹, δ² at every non-forced state.
        let g = game2();
        let a = soldier_map(&g, 0.5);
        let d = attacker_map(&g, 0.5);
        // Terminals, their probabilities under (½, ½) with forcing at step 2,
        // and the attacker payoffs 0.5·τ/0.08 + 0.5·(1 − jams).
        let terms = [
            ("CJSI", 0.25, 0.09, 1.0),
            ("CISJ", 0.125, 0.01, 1.0),
            ("CISI", 0.125, 0.01, 0.0),
            ("SJCI", 0.25, 0.02, 1.0),
            ("SICJ", 0.125, 0.06, 1.0),
            ("SICI", 0.125, 0.02, 0.0),
        ];
        let mut soldier_mat = 0.0f64;
        let mut attacker_exp = 0.0f64;
        for &(_, q, tau, jams) in &terms {
            soldier_mat += q * (0.08 - tau) / 0.08;
            attacker_exp += q * (0.5 * tau / 0.08 + 0.5 * (1.0 - jams));
        }
        let mut frus = 0.0;
        for &(_, q, tau, jams) in &terms {
            let actual = 0.5 * tau / 0.08 + 0.5 * (1.0 - jams);
            frus += q * (attacker_exp - actual).max(0.0);
        }
        let codes: Vec<String> = g.terminals().iter().map(|h| h.code()).collect();
        assert_eq!(codes, terms.iter().map(|t| t.0).collect::<Vec<_>>());
        let u = soldier_psych_utility(&g, &a, &d, &a).unwrap();
        assert!((u - (soldier_mat + 0.5 * frus)).abs() < 1e-12);
    }

    #[test]
    fn utility_nondecreasing_in_weight() {
        let g = game2();
        let a = soldier_map(&g, 0.5);
        let d = attacker_map(&g, 0.5);
        let mut last = f64::NEG_INFINITY;
        for w in [0.0, 0.25, 0.5, 1.0] {
            let u = soldier_psych_utility_weighted(&g, &a, &d, &a, w).unwrap();
            assert!(u.expected_opponent_frustration > 0.0);
            assert!(u.total >= last);
            last = u.total;
        }
    }

    #[test]
    fn constant_maps_cover_states() {
        let g = game2();
        let m = constant(&g, 0.5);
        assert!(m.contains_key(&StageState::ROOT));
    }
}
