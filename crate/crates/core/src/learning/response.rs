use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::equilibrium::{build_stage_payoffs, ValueTable};
use crate::error::Result;
use crate::game::{
    state_map_serde, BeliefSystem, Game, MixedAction, Player, StageState, StrategyMap,
    StrategyProfile,
};

/// Belief-based stage values for one player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefValues {
    pub role: Player,
    /// The player's strategy used for continuation: its best response, or the evaluated strategy.
    #[serde(with = "state_map_serde")]
    pub policy: StrategyMap,
    /// Value of each own action `[first, second]`; infeasible actions are `-inf`.
    #[serde(with = "state_map_serde")]
    pub action_values: BTreeMap<StageState, [f64; 2]>,
    /// `(soldier, attacker)` values as the player perceives them.
    #[serde(with = "state_map_serde")]
    pub values: ValueTable,
}

impl BeliefValues {
    /// Gain from the best one-shot deviation at `state`.
    pub fn deviation_gain(&self, state: StageState) -> f64 {
        let q = self.action_values[&state];
        let p = self.policy[&state];
        let best = q[0].max(q[1]);
        let mut current = 0.0;
        for (i, &v) in q.iter().enumerate() {
            let w = p.prob(i == 0);
            if w > 0.0 {
                current += w * v;
            }
        }
        best - current
    }
}

/// Backward pass over the player's belief model.
///
/// The soldier weighs attacker actions by δ¹ and evaluates frustration terms
/// with α′ = δ², β′ = δ¹. The attacker weighs soldier actions by ρ¹ and uses
/// α′ = ρ¹, β′ = ρ². With `own = None` the player best-responds at every
/// state (ties toward connect/jam); otherwise `own` is evaluated.
pub fn belief_values(
    game: &Game,
    beliefs: &BeliefSystem,
    role: Player,
    own: Option<&StrategyMap>,
    weights: (f64, f64),
) -> Result<BeliefValues> {
    let (omega_s, omega_a) = weights;
    let mut values = ValueTable::new();
    let mut policy = StrategyMap::new();
    let mut action_values = BTreeMap::new();
    for state in game.states().into_iter().rev() {
        let (payoffs, support) = build_stage_payoffs(game, state, &values)?;
        let (feasible, opp) = match role {
            Player::Soldier => (support.soldier, lookup(&beliefs.soldier_first, state)?),
            Player::Attacker => (support.attacker, lookup(&beliefs.attacker_first, state)?),
        };
        let own_second = match role {
            Player::Soldier => lookup(&beliefs.soldier_second, state)?,
            Player::Attacker => lookup(&beliefs.attacker_second, state)?,
        };
        let (alpha_b, beta_b) = match role {
            Player::Soldier => (own_second, opp),
            Player::Attacker => (opp, own_second),
        };
        let s = payoffs.soldier_psych(alpha_b, omega_s);
        let a = payoffs.attacker_psych(beta_b, omega_a);
        let po = [opp, 1.0 - opp];
        // cell(i, j): i is the role's own action, j the opponent's.
        let cell = |m: &[[f64; 2]; 2], i: usize, j: usize| match role {
            Player::Soldier => m[i][j],
            Player::Attacker => m[j][i],
        };
        let mut q = [f64::NEG_INFINITY; 2];
        let mut other = [0.0; 2];
        for i in 0..2 {
            if !feasible[i] {
                continue;
            }
            let (own_m, opp_m) = match role {
                Player::Soldier => (&s, &a),
                Player::Attacker => (&a, &s),
            };
            q[i] = (0..2)
                .filter(|&j| po[j] > 0.0)
                .map(|j| po[j] * cell(own_m, i, j))
                .sum();
            other[i] = (0..2)
                .filter(|&j| po[j] > 0.0)
                .map(|j| po[j] * cell(opp_m, i, j))
                .sum();
        }
        let mix = match own.and_then(|m| m.get(&state)) {
            Some(&m) => restrict(m, feasible),
            None => {
                let first = feasible[0] && (!feasible[1] || q[0] >= q[1]);
                MixedAction::pure(first)
            }
        };
        let pm = [mix.p_first, mix.p_second()];
        let mut own_v = 0.0;
        let mut opp_v = 0.0;
        for i in 0..2 {
            if pm[i] > 0.0 {
                own_v += pm[i] * q[i];
                opp_v += pm[i] * other[i];
            }
        }
        let v = match role {
            Player::Soldier => (own_v, opp_v),
            Player::Attacker => (opp_v, own_v),
        };
        values.insert(state, v);
        policy.insert(state, mix);
        action_values.insert(state, q);
    }
    Ok(BeliefValues {
        role,
        policy,
        action_values,
        values,
    })
}

fn lookup(map: &StrategyMap, state: StageState) -> Result<f64> {
    map.get(&state)
        .map(|m| m.p_first)
        .ok_or(crate::error::Error::MissingEntry(state))
}

fn restrict(m: MixedAction, feasible: [bool; 2]) -> MixedAction {
    match feasible {
        [true, false] => MixedAction::FIRST,
        [false, true] => MixedAction::SECOND,
        _ => m,
    }
}

/// Pure best response of `role` to its beliefs. `material` drops the frustration terms.
pub fn best_response_step(
    game: &Game,
    beliefs: &BeliefSystem,
    role: Player,
    material: bool,
) -> Result<BeliefValues> {
    let weights = if material {
        (0.0, 0.0)
    } else {
        (
            game.config().soldier_frustration_weight,
            game.config().attacker_frustration_weight,
        )
    };
    belief_values(game, beliefs, role, None, weights)
}

/// States reached with positive probability under a profile.
pub fn reached_states(game: &Game, profile: &StrategyProfile) -> Vec<StageState> {
    let mut prob: BTreeMap<StageState, f64> = BTreeMap::new();
    prob.insert(StageState::ROOT, 1.0);
    let mut out = Vec::new();
    for state in game.states() {
        let p = prob.get(&state).copied().unwrap_or(0.0);
        if p <= 0.0 {
            continue;
        }
        out.push(state);
        let (Some(alpha), Some(beta)) = (profile.soldier.get(&state), profile.attacker.get(&state))
        else {
            continue;
        };
        let Ok(f) = game.feasible_actions(state) else {
            continue;
        };
        for &a in &f.soldier {
            for &b in &f.attacker {
                let w = p * alpha.prob(a.is_first()) * beta.prob(b.is_first());
                if w > 0.0 {
                    if let Ok(next) = game.advance(state, a, b) {
                        *prob.entry(next).or_insert(0.0) += w;
                    }
                }
            }
        }
    }
    out
}

/// Conditions (i) mass above `1 − ε` and (ii) `(1−ε)t ≤ b ≤ (1+ε)t` for both actions.
pub fn epsilon_like(belief: MixedAction, target: MixedAction, epsilon: f64) -> bool {
    const SLACK: f64 = 1e-12;
    let mass = belief.p_first + belief.p_second();
    if mass <= 1.0 - epsilon {
        return false;
    }
    [
        (belief.p_first, target.p_first),
        (belief.p_second(), target.p_second()),
    ]
    .iter()
    .all(|&(b, t)| b >= (1.0 - epsilon) * t - SLACK && b <= (1.0 + epsilon) * t + SLACK)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsceReport {
    pub is_psce: bool,
    pub reached_states: Vec<StageState>,
    /// Reached states where some belief fails to ε-like its target.
    pub belief_failures: Vec<StageState>,
    pub max_soldier_gain: f64,
    pub max_attacker_gain: f64,
}

pub const PSCE_GAIN_TOL: f64 = 1e-6;

/// Checks the self-confirming conditions at states the profile reaches:
/// beliefs ε-like their targets (ρ¹ vs α, δ¹ vs β, ρ² vs δ¹, δ² vs ρ¹) and
/// no one-shot deviation gains more than `1e-6` under the player's beliefs.
pub fn detect_psce(
    game: &Game,
    profile: &StrategyProfile,
    beliefs: &BeliefSystem,
    epsilon: f64,
    material: bool,
) -> Result<PsceReport> {
    let weights = if material {
        (0.0, 0.0)
    } else {
        (
            game.config().soldier_frustration_weight,
            game.config().attacker_frustration_weight,
        )
    };
    let soldier = belief_values(
        game,
        beliefs,
        Player::Soldier,
        Some(&profile.soldier),
        weights,
    )?;
    let attacker = belief_values(
        game,
        beliefs,
        Player::Attacker,
        Some(&profile.attacker),
        weights,
    )?;
    let reached = reached_states(game, profile);
    let mut failures = Vec::new();
    let mut gs: f64 = 0.0;
    let mut ga: f64 = 0.0;
    for &s in &reached {
        let get = |m: &StrategyMap| m.get(&s).copied().unwrap_or(MixedAction::UNIFORM);
        let ok = epsilon_like(get(&beliefs.attacker_first), get(&profile.soldier), epsilon)
            && epsilon_like(get(&beliefs.soldier_first), get(&profile.attacker), epsilon)
            && epsilon_like(
                get(&beliefs.attacker_second),
                get(&beliefs.soldier_first),
                epsilon,
            )
            && epsilon_like(
                get(&beliefs.soldier_second),
                get(&beliefs.attacker_first),
                epsilon,
            );
        if !ok {
            failures.push(s);
        }
        gs = gs.max(soldier.deviation_gain(s));
        ga = ga.max(attacker.deviation_gain(s));
    }
    Ok(PsceReport {
        is_psce: failures.is_empty() && gs <= PSCE_GAIN_TOL && ga <= PSCE_GAIN_TOL,
        reached_states: reached,
        belief_failures: failures,
        max_soldier_gain: gs,
        max_attacker_gain: ga,
    })
}
