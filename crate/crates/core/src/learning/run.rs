use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::counters::{init_priors, PosteriorCounters};
use super::response::{best_response_step, epsilon_like, reached_states};
use crate::equilibrium::{solve_game, SolveMode};
use crate::error::{Error, Result};
use crate::game::{
    state_map_serde, AttackerAction, BeliefSystem, Game, GameConfig, History, MixedAction, Player,
    SoldierAction, StageState, StrategyMap, StrategyProfile,
};
use crate::psychology::{attacker_frustration, soldier_frustration};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Opponent {
    /// Both players learn.
    SelfPlay,
    /// The attacker jams with a fixed probability wherever it may; the soldier learns.
    ScriptedAttacker { jam_probability: f64 },
    /// The soldier connects with a fixed probability wherever it may; the attacker learns.
    ScriptedSoldier { connect_probability: f64 },
}

fn default_smoothing() -> f64 {
    2.0
}
fn default_exploration() -> f64 {
    0.05
}
fn default_exploration_decay() -> f64 {
    100.0
}
fn default_true() -> bool {
    true
}
fn default_opponent() -> Opponent {
    Opponent::SelfPlay
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningConfig {
    pub max_iterations: usize,
    /// ε of the ε-like condition.
    pub epsilon: f64,
    pub rng_seed: u64,
    /// Consecutive ε-like iterations required before declaring convergence.
    pub convergence_window: usize,
    /// Pseudo-observations shrinking posteriors toward ½.
    #[serde(default = "default_smoothing")]
    pub smoothing: f64,
    /// Initial per-state probability of replacing the greedy action by a uniform feasible one.
    #[serde(default = "default_exploration")]
    pub exploration: f64,
    /// τ in the harmonic schedule `p_t = p₀·τ/(τ + t)`.
    #[serde(default = "default_exploration_decay")]
    pub exploration_decay: f64,
    /// Best-respond to material payoffs only.
    #[serde(default)]
    pub material_only: bool,
    #[serde(default = "default_opponent")]
    pub opponent: Opponent,
    #[serde(default = "default_true")]
    pub stop_early: bool,
}

impl Default for LearningConfig {
    fn default() -> Self {
        LearningConfig {
            max_iterations: 5000,
            epsilon: 0.05,
            rng_seed: 0,
            convergence_window: 50,
            smoothing: default_smoothing(),
            exploration: default_exploration(),
            exploration_decay: default_exploration_decay(),
            material_only: false,
            opponent: Opponent::SelfPlay,
            stop_early: true,
        }
    }
}

impl LearningConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::invalid(
                "epsilon",
                format!("must lie in (0, 1), got {}", self.epsilon),
            ));
        }
        if self.convergence_window == 0 {
            return Err(Error::invalid("convergence_window", "must be at least 1"));
        }
        if !(self.smoothing >= 0.0 && self.smoothing.is_finite()) {
            return Err(Error::invalid("smoothing", "must be nonnegative"));
        }
        if !(0.0..=1.0).contains(&self.exploration) {
            return Err(Error::invalid("exploration", "must lie in [0, 1]"));
        }
        if !(self.exploration_decay > 0.0) {
            return Err(Error::invalid("exploration_decay", "must be positive"));
        }
        match self.opponent {
            Opponent::ScriptedAttacker { jam_probability: p }
            | Opponent::ScriptedSoldier {
                connect_probability: p,
            } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::invalid(
                        "opponent",
                        "scripted probability must lie in [0, 1]",
                    ));
                }
            }
            Opponent::SelfPlay => {}
        }
        Ok(())
    }

    pub fn exploration_at(&self, iteration: usize) -> f64 {
        self.exploration * self.exploration_decay / (self.exploration_decay + iteration as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub history: String,
    /// Public frequency of connect per state, after the update.
    #[serde(with = "state_map_serde")]
    pub soldier_belief: StrategyMap,
    /// Public frequency of jam per state, after the update.
    #[serde(with = "state_map_serde")]
    pub attacker_belief: StrategyMap,
    pub soldier_expected: f64,
    pub attacker_expected: f64,
    pub soldier_frustration: f64,
    pub attacker_frustration: f64,
    pub epsilon_like: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningTrace {
    pub game: GameConfig,
    pub learning: LearningConfig,
    pub priors: BeliefSystem,
    /// Profile the ε-like check compares against.
    pub target: StrategyProfile,
    pub iterations: Vec<IterationRecord>,
    /// First iteration of the ε-like streak that met the convergence window.
    pub converged_at: Option<usize>,
    pub final_counters: PosteriorCounters,
    pub final_beliefs: BeliefSystem,
    /// Best responses to the final beliefs, with scripted players at their script.
    pub final_policy: StrategyProfile,
}

impl LearningTrace {
    /// Empirical mixed strategies after the last iteration.
    pub fn empirical_profile(&self) -> StrategyProfile {
        StrategyProfile {
            soldier: self.final_beliefs.attacker_first.clone(),
            attacker: self.final_beliefs.soldier_first.clone(),
        }
    }
}

fn scripted_map(game: &Game, p: f64, who: Player) -> StrategyMap {
    game.states()
        .into_iter()
        .map(|s| {
            let f = game
                .feasible_actions(s)
                .expect("states() yields feasible states");
            let m = MixedAction::clamped(p);
            let m = match who {
                Player::Soldier => game.restrict_soldier(&f, m),
                Player::Attacker => game.restrict_attacker(&f, m),
            };
            (s, m)
        })
        .collect()
}

fn sample(rng: &mut ChaCha8Rng, mix: MixedAction) -> bool {
    let u: f64 = rng.gen();
    u < mix.p_first
}

struct Policies {
    soldier: StrategyMap,
    attacker: StrategyMap,
    soldier_scripted: bool,
    attacker_scripted: bool,
}

fn policies(game: &Game, cfg: &LearningConfig, beliefs: &BeliefSystem) -> Result<Policies> {
    let (soldier, soldier_scripted) = match cfg.opponent {
        Opponent::ScriptedSoldier {
            connect_probability,
        } => (
            scripted_map(game, connect_probability, Player::Soldier),
            true,
        ),
        _ => (
            best_response_step(game, beliefs, Player::Soldier, cfg.material_only)?.policy,
            false,
        ),
    };
    let (attacker, attacker_scripted) = match cfg.opponent {
        Opponent::ScriptedAttacker { jam_probability } => {
            (scripted_map(game, jam_probability, Player::Attacker), true)
        }
        _ => (
            best_response_step(game, beliefs, Player::Attacker, cfg.material_only)?.policy,
            false,
        ),
    };
    Ok(Policies {
        soldier,
        attacker,
        soldier_scripted,
        attacker_scripted,
    })
}

fn realize(game: &Game, pol: &Policies, explore: f64, rng: &mut ChaCha8Rng) -> Result<History> {
    let mut state = StageState::ROOT;
    let mut actions = Vec::with_capacity(game.device_count());
    while !game.is_terminal(state) {
        let f = game.feasible_actions(state)?;
        let a = if !pol.soldier_scripted && f.soldier.len() == 2 && rng.gen::<f64>() < explore {
            f.soldier[rng.gen_range(0..2)]
        } else {
            SoldierAction::from_first(sample(rng, pol.soldier[&state]))
        };
        let b = if !pol.attacker_scripted && f.attacker.len() == 2 && rng.gen::<f64>() < explore {
            f.attacker[rng.gen_range(0..2)]
        } else {
            AttackerAction::from_first(sample(rng, pol.attacker[&state]))
        };
        actions.push((a, b));
        state = game.advance(state, a, b)?;
    }
    Ok(History::new(actions))
}

/// Whether the learned frequencies ε-like the target at every state the
/// reference profile reaches.
fn check_epsilon_like(
    game: &Game,
    reference: &StrategyProfile,
    target: &StrategyProfile,
    beliefs: &BeliefSystem,
    epsilon: f64,
    check_soldier: bool,
    check_attacker: bool,
) -> bool {
    reached_states(game, reference).into_iter().all(|s| {
        let soldier_ok =
            !check_soldier || epsilon_like(beliefs.attacker_first[&s], target.soldier[&s], epsilon);
        let attacker_ok = !check_attacker
            || epsilon_like(beliefs.soldier_first[&s], target.attacker[&s], epsilon);
        soldier_ok && attacker_ok
    })
}

/// Repeated play with Bayesian belief updates.
///
/// Each iteration both learners best-respond to the current public
/// frequencies, one traversal is realized (with decaying exploration), and the
/// counters are updated. In self-play the ε-like check targets the PE profile
/// (NE when `material_only`); against a scripted opponent it targets the
/// script.
pub fn run_learning(game: &Game, cfg: &LearningConfig) -> Result<LearningTrace> {
    cfg.validate()?;
    let mut counters = init_priors(game, cfg.smoothing);
    let priors = counters.belief_system(game);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);

    let (target, check_soldier, check_attacker) = match cfg.opponent {
        Opponent::SelfPlay => {
            let mode = if cfg.material_only {
                SolveMode::Ne
            } else {
                SolveMode::Pe
            };
            (solve_game(game, mode)?.profile, true, true)
        }
        Opponent::ScriptedAttacker { jam_probability } => (
            StrategyProfile {
                soldier: StrategyMap::new(),
                attacker: scripted_map(game, jam_probability, Player::Attacker),
            },
            false,
            true,
        ),
        Opponent::ScriptedSoldier {
            connect_probability,
        } => (
            StrategyProfile {
                soldier: scripted_map(game, connect_probability, Player::Soldier),
                attacker: StrategyMap::new(),
            },
            true,
            false,
        ),
    };

    let mut iterations = Vec::with_capacity(cfg.max_iterations.min(100_000));
    let mut streak = 0usize;
    let mut converged_at = None;
    let mut beliefs = priors.clone();
    for t in 0..cfg.max_iterations {
        let pol = policies(game, cfg, &beliefs)?;
        let history = realize(game, &pol, cfg.exploration_at(t), &mut rng)?;
        counters.observe(&history);
        beliefs = counters.belief_system(game);

        let freq_s = &beliefs.attacker_first;
        let freq_a = &beliefs.soldier_first;
        let soldier_expected = game.expected_material_payoff(freq_s, freq_a, Player::Soldier)?;
        let attacker_expected = game.expected_material_payoff(freq_s, freq_a, Player::Attacker)?;
        let fs = soldier_frustration(game, freq_s, freq_a, &history)?.frustration;
        let fa = attacker_frustration(game, freq_a, freq_s, &history)?.frustration;

        let reference = match cfg.opponent {
            Opponent::SelfPlay => target.clone(),
            _ => {
                let next = policies(game, cfg, &beliefs)?;
                StrategyProfile {
                    soldier: next.soldier,
                    attacker: next.attacker,
                }
            }
        };
        let like = check_epsilon_like(
            game,
            &reference,
            &target,
            &beliefs,
            cfg.epsilon,
            check_soldier,
            check_attacker,
        );
        if like {
            streak += 1;
        } else {
            streak = 0;
        }
        iterations.push(IterationRecord {
            iteration: t + 1,
            history: history.code(),
            soldier_belief: freq_s.clone(),
            attacker_belief: freq_a.clone(),
            soldier_expected,
            attacker_expected,
            soldier_frustration: fs,
            attacker_frustration: fa,
            epsilon_like: like,
        });
        if converged_at.is_none() && streak >= cfg.convergence_window {
            converged_at = Some(t + 2 - streak);
            if cfg.stop_early {
                break;
            }
        }
    }

    let pol = policies(game, cfg, &beliefs)?;
    Ok(LearningTrace {
        game: game.config().clone(),
        learning: cfg.clone(),
        priors,
        target,
        iterations,
        converged_at,
        final_counters: counters,
        final_beliefs: beliefs,
        final_policy: StrategyProfile {
            soldier: pol.soldier,
            attacker: pol.attacker,
        },
    })
}

/// Re-runs a recorded trace from its embedded configuration.
pub fn replay(trace: &LearningTrace) -> Result<LearningTrace> {
    let game = Game::new(trace.game.clone())?;
    run_learning(&game, &trace.learning)
}
