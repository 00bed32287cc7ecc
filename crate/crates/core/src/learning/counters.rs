use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::game::{
    state_map_serde, BeliefSystem, Game, History, MixedAction, Player, StageState, StrategyMap,
};

/// Public action counts shared by both players.
///
/// Posteriors use the Bayes form `Pr(a|h) = Pr(h|a)·Pr(a)/Pr(h)` with every
/// factor replaced by an empirical frequency at the step of `h`, then shrunk
/// toward ½ by `smoothing` pseudo-observations split evenly between actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorCounters {
    pub smoothing: f64,
    pub iteration: u64,
    /// N(h).
    #[serde(with = "state_map_serde")]
    pub visits: BTreeMap<StageState, u64>,
    /// N(h, a) for connect and skip.
    #[serde(with = "state_map_serde")]
    pub soldier_counts: BTreeMap<StageState, [u64; 2]>,
    /// N(h, b) for jam and idle.
    #[serde(with = "state_map_serde")]
    pub attacker_counts: BTreeMap<StageState, [u64; 2]>,
}

/// Zero counts at every state; beliefs start at ½ except where an action is forced.
pub fn init_priors(game: &Game, smoothing: f64) -> PosteriorCounters {
    let mut c = PosteriorCounters {
        smoothing,
        iteration: 0,
        visits: BTreeMap::new(),
        soldier_counts: BTreeMap::new(),
        attacker_counts: BTreeMap::new(),
    };
    for s in game.states() {
        c.visits.insert(s, 0);
        c.soldier_counts.insert(s, [0, 0]);
        c.attacker_counts.insert(s, [0, 0]);
    }
    c
}

/// Returns the counters after observing one more realized history.
pub fn update_posteriors(counters: &PosteriorCounters, realized: &History) -> PosteriorCounters {
    let mut next = counters.clone();
    next.observe(realized);
    next
}

impl PosteriorCounters {
    pub fn observe(&mut self, realized: &History) {
        for (state, a, b) in realized.path() {
            *self.visits.entry(state).or_insert(0) += 1;
            self.soldier_counts.entry(state).or_insert([0, 0])[!a.is_first() as usize] += 1;
            self.attacker_counts.entry(state).or_insert([0, 0])[!b.is_first() as usize] += 1;
        }
        self.iteration += 1;
    }

    pub fn visits(&self, state: StageState) -> u64 {
        self.visits.get(&state).copied().unwrap_or(0)
    }

    fn counts(&self, who: Player) -> &BTreeMap<StageState, [u64; 2]> {
        match who {
            Player::Soldier => &self.soldier_counts,
            Player::Attacker => &self.attacker_counts,
        }
    }

    pub fn joint(&self, state: StageState, who: Player, first: bool) -> u64 {
        self.counts(who)
            .get(&state)
            .map_or(0, |c| c[!first as usize])
    }

    /// N(a) at a step, summed over the states of that step.
    pub fn action_total(&self, step: usize, who: Player, first: bool) -> u64 {
        self.counts(who)
            .iter()
            .filter(|(s, _)| s.step == step)
            .map(|(_, c)| c[!first as usize])
            .sum()
    }

    /// Number of observations at a step.
    pub fn step_total(&self, step: usize) -> u64 {
        self.visits
            .iter()
            .filter(|(s, _)| s.step == step)
            .map(|(_, n)| n)
            .sum()
    }

    /// `Pr(h|a)·Pr(a)/Pr(h)` from raw empirical frequencies, `None` at unvisited states.
    pub fn bayes_posterior(&self, state: StageState, who: Player, first: bool) -> Option<f64> {
        let n_h = self.visits(state);
        if n_h == 0 {
            return None;
        }
        let n_step = self.step_total(state.step) as f64;
        let n_a = self.action_total(state.step, who, first) as f64;
        if n_a == 0.0 {
            return Some(0.0);
        }
        let likelihood = self.joint(state, who, first) as f64 / n_a;
        let prior = n_a / n_step;
        let evidence = n_h as f64 / n_step;
        Some(likelihood * prior / evidence)
    }

    /// Smoothed posterior probability of the first action at `state`.
    pub fn posterior(&self, game: &Game, state: StageState, who: Player) -> MixedAction {
        if let Ok(f) = game.feasible_actions(state) {
            let forced = match who {
                Player::Soldier => f.soldier_forced().map(|a| a.is_first()),
                Player::Attacker => f.attacker_forced().map(|b| b.is_first()),
            };
            if let Some(first) = forced {
                return MixedAction::pure(first);
            }
        }
        let n_h = self.visits(state) as f64;
        let k = self.smoothing;
        match self.bayes_posterior(state, who, true) {
            None => MixedAction::UNIFORM,
            Some(p) if k == 0.0 => MixedAction::clamped(p),
            Some(p) => MixedAction::clamped((n_h * p + 0.5 * k) / (n_h + k)),
        }
    }

    pub fn beliefs_about(&self, game: &Game, who: Player) -> StrategyMap {
        game.states()
            .into_iter()
            .map(|s| (s, self.posterior(game, s, who)))
            .collect()
    }

    /// Beliefs of both players built from the public frequencies.
    ///
    /// Second-order beliefs are identified with the public frequency of the
    /// player's own actions, which is what its opponent's first-order belief is.
    pub fn belief_system(&self, game: &Game) -> BeliefSystem {
        let soldier_freq = self.beliefs_about(game, Player::Soldier);
        let attacker_freq = self.beliefs_about(game, Player::Attacker);
        BeliefSystem {
            soldier_first: attacker_freq.clone(),
            soldier_second: soldier_freq.clone(),
            attacker_first: soldier_freq,
            attacker_second: attacker_freq,
        }
    }
}
