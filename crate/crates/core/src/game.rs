//! The constrained finite-horizon game: states, feasible actions, histories,
//! strategies, beliefs and material payoffs.
//!
//! Payoffs depend on a history only through the step index and two counters
//! (connections made, attacks spent), so solvers work on [`StageState`] while
//! [`History`] is kept for enumeration, traces and learning.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channel::{DeviceDelays, FadingModel, LinkBudget};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SoldierAction {
    Connect,
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackerAction {
    Jam,
    Idle,
}

impl SoldierAction {
    pub const ALL: [SoldierAction; 2] = [SoldierAction::Connect, SoldierAction::Skip];

    pub fn is_first(self) -> bool {
        self == SoldierAction::Connect
    }

    pub fn from_first(first: bool) -> Self {
        if first {
            SoldierAction::Connect
        } else {
            SoldierAction::Skip
        }
    }
}

impl AttackerAction {
    pub const ALL: [AttackerAction; 2] = [AttackerAction::Jam, AttackerAction::Idle];

    pub fn is_first(self) -> bool {
        self == AttackerAction::Jam
    }

    pub fn from_first(first: bool) -> Self {
        if first {
            AttackerAction::Jam
        } else {
            AttackerAction::Idle
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Soldier,
    Attacker,
}

/// Aggregated game state. `step` runs from 1 to `X + 1`, the latter being terminal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StageState {
    pub step: usize,
    pub connections: usize,
    pub attacks: usize,
}

impl StageState {
    pub const ROOT: StageState = StageState {
        step: 1,
        connections: 0,
        attacks: 0,
    };

    pub fn new(step: usize, connections: usize, attacks: usize) -> Self {
        StageState {
            step,
            connections,
            attacks,
        }
    }
}

impl fmt::Display for StageState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.step, self.connections, self.attacks)
    }
}

/// Probability of the first action (connect for the soldier, jam for the attacker).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MixedAction {
    pub p_first: f64,
}

impl MixedAction {
    pub const FIRST: MixedAction = MixedAction { p_first: 1.0 };
    pub const SECOND: MixedAction = MixedAction { p_first: 0.0 };
    pub const UNIFORM: MixedAction = MixedAction { p_first: 0.5 };

    pub fn new(p_first: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_first) {
            return Err(Error::domain(format!(
                "mixing probability {p_first} outside [0, 1]"
            )));
        }
        Ok(MixedAction { p_first })
    }

    /// Clamps tiny numerical excursions back into `[0, 1]`.
    pub fn clamped(p_first: f64) -> Self {
        MixedAction {
            p_first: p_first.clamp(0.0, 1.0),
        }
    }

    pub fn pure(first: bool) -> Self {
        if first {
            Self::FIRST
        } else {
            Self::SECOND
        }
    }

    pub fn p_second(&self) -> f64 {
        1.0 - self.p_first
    }

    pub fn prob(&self, first: bool) -> f64 {
        if first {
            self.p_first
        } else {
            self.p_second()
        }
    }

    pub fn is_pure(&self) -> bool {
        self.p_first == 0.0 || self.p_first == 1.0
    }
}

pub type StrategyMap = BTreeMap<StageState, MixedAction>;

/// Serializes a state-keyed map as a list of entries so that JSON can carry it.
pub mod state_map_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry<T> {
        state: StageState,
        value: T,
    }

    pub fn serialize<S, T>(
        map: &BTreeMap<StageState, T>,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error>
    where
        S: Serializer,
        T: Serialize + Clone,
    {
        let entries: Vec<Entry<T>> = map
            .iter()
            .map(|(s, v)| Entry {
                state: *s,
                value: v.clone(),
            })
            .collect();
        entries.serialize(serializer)
    }

    pub fn deserialize<'de, D, T>(
        deserializer: D,
    ) -> std::result::Result<BTreeMap<StageState, T>, D::Error>
    where
        D: Deserializer<'de>,
        T: Deserialize<'de>,
    {
        let entries: Vec<Entry<T>> = Vec::deserialize(deserializer)?;
        Ok(entries.into_iter().map(|e| (e.state, e.value)).collect())
    }
}

fn lookup(map: &StrategyMap, state: StageState) -> Result<MixedAction> {
    map.get(&state).copied().ok_or(Error::MissingEntry(state))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    /// α: probability of connecting.
    #[serde(with = "state_map_serde")]
    pub soldier: StrategyMap,
    /// β: probability of jamming.
    #[serde(with = "state_map_serde")]
    pub attacker: StrategyMap,
}

impl StrategyProfile {
    pub fn soldier_at(&self, state: StageState) -> Result<MixedAction> {
        lookup(&self.soldier, state)
    }

    pub fn attacker_at(&self, state: StageState) -> Result<MixedAction> {
        lookup(&self.attacker, state)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BeliefSystem {
    /// δ¹: soldier's belief that the attacker jams.
    #[serde(with = "state_map_serde")]
    pub soldier_first: StrategyMap,
    /// δ²: soldier's belief about the attacker's belief that the soldier connects.
    #[serde(with = "state_map_serde")]
    pub soldier_second: StrategyMap,
    /// ρ¹: attacker's belief that the soldier connects.
    #[serde(with = "state_map_serde")]
    pub attacker_first: StrategyMap,
    /// ρ²: attacker's belief about the soldier's belief that the attacker jams.
    #[serde(with = "state_map_serde")]
    pub attacker_second: StrategyMap,
}

impl BeliefSystem {
    /// Beliefs that are correct at every order for the given profile.
    pub fn error_free(profile: &StrategyProfile) -> Self {
        BeliefSystem {
            soldier_first: profile.attacker.clone(),
            soldier_second: profile.soldier.clone(),
            attacker_first: profile.soldier.clone(),
            attacker_second: profile.attacker.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct History {
    pub actions: Vec<(SoldierAction, AttackerAction)>,
}

impl History {
    pub fn new(actions: Vec<(SoldierAction, AttackerAction)>) -> Self {
        History { actions }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn connections(&self) -> usize {
        self.actions.iter().filter(|(a, _)| a.is_first()).count()
    }

    pub fn attacks(&self) -> usize {
        self.actions.iter().filter(|(_, b)| b.is_first()).count()
    }

    /// States visited before each action, paired with the action taken there.
    pub fn path(&self) -> impl Iterator<Item = (StageState, SoldierAction, AttackerAction)> + '_ {
        let mut state = StageState::ROOT;
        self.actions.iter().map(move |&(a, b)| {
            let here = state;
            state = StageState {
                step: state.step + 1,
                connections: state.connections + a.is_first() as usize,
                attacks: state.attacks + b.is_first() as usize,
            };
            (here, a, b)
        })
    }

    pub fn final_state(&self) -> StageState {
        StageState {
            step: self.actions.len() + 1,
            connections: self.connections(),
            attacks: self.attacks(),
        }
    }

    /// Compact text form, one character pair per step: `C`/`S` then `J`/`I`.
    pub fn code(&self) -> String {
        let mut out = String::with_capacity(self.actions.len() * 2);
        for (a, b) in &self.actions {
            out.push(if a.is_first() { 'C' } else { 'S' });
            out.push(if b.is_first() { 'J' } else { 'I' });
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub links: Vec<LinkBudget>,
    pub fading: FadingModel,
    /// J.
    pub required_connections: usize,
    /// P_K.
    pub jam_power_per_attack_mw: f64,
    /// E.
    pub power_budget_mw: f64,
    /// Δ.
    pub delay_tolerance_s: f64,
    /// θ₁.
    pub delay_weight: f64,
    /// θ₂.
    pub power_weight: f64,
    /// ω_s.
    pub soldier_frustration_weight: f64,
    /// ω_a.
    pub attacker_frustration_weight: f64,
}

impl GameConfig {
    /// X.
    pub fn device_count(&self) -> usize {
        self.links.len()
    }

    /// J′ = ⌊E / P_K⌋.
    pub fn max_attacks(&self) -> usize {
        let ratio = self.power_budget_mw / self.jam_power_per_attack_mw;
        // Guard against E = k·P_K landing a hair below k in floating point.
        (ratio + 1e-9).floor().max(0.0) as usize
    }

    pub fn validate(&self) -> Result<()> {
        let x = self.device_count();
        if x == 0 {
            return Err(Error::invalid("links", "at least one device is required"));
        }
        if self.required_connections < 1 || self.required_connections > x {
            return Err(Error::invalid(
                "required_connections",
                format!("must lie in [1, {x}], got {}", self.required_connections),
            ));
        }
        if !(self.jam_power_per_attack_mw.is_finite() && self.jam_power_per_attack_mw > 0.0) {
            return Err(Error::invalid(
                "jam_power_per_attack_mw",
                "must be positive",
            ));
        }
        if !(self.power_budget_mw.is_finite() && self.power_budget_mw >= 0.0) {
            return Err(Error::invalid("power_budget_mw", "must be nonnegative"));
        }
        if !(self.delay_tolerance_s.is_finite() && self.delay_tolerance_s > 0.0) {
            return Err(Error::invalid("delay_tolerance_s", "must be positive"));
        }
        for (field, w) in [
            ("delay_weight", self.delay_weight),
            ("power_weight", self.power_weight),
            (
                "soldier_frustration_weight",
                self.soldier_frustration_weight,
            ),
            (
                "attacker_frustration_weight",
                self.attacker_frustration_weight,
            ),
        ] {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::invalid(
                    field,
                    format!("must lie in [0, 1], got {w}"),
                ));
            }
        }
        if (self.delay_weight + self.power_weight - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(
                "power_weight",
                format!(
                    "delay_weight + power_weight must equal 1, got {} + {}",
                    self.delay_weight, self.power_weight
                ),
            ));
        }
        self.fading.validate()?;
        for link in &self.links {
            link.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibleActions {
    pub soldier: Vec<SoldierAction>,
    pub attacker: Vec<AttackerAction>,
}

impl FeasibleActions {
    pub fn soldier_forced(&self) -> Option<SoldierAction> {
        (self.soldier.len() == 1).then(|| self.soldier[0])
    }

    pub fn attacker_forced(&self) -> Option<AttackerAction> {
        (self.attacker.len() == 1).then(|| self.attacker[0])
    }

    pub fn can_connect(&self) -> bool {
        self.soldier.contains(&SoldierAction::Connect)
    }

    pub fn can_skip(&self) -> bool {
        self.soldier.contains(&SoldierAction::Skip)
    }

    pub fn can_jam(&self) -> bool {
        self.attacker.contains(&AttackerAction::Jam)
    }

    pub fn can_idle(&self) -> bool {
        self.attacker.contains(&AttackerAction::Idle)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TerminalOutcome {
    pub total_delay_s: f64,
    pub soldier_payoff: f64,
    pub attacker_payoff: f64,
}

/// A validated game together with its per-device channel delays.
#[derive(Debug, Clone)]
pub struct Game {
    config: GameConfig,
    delays: Vec<DeviceDelays>,
    max_attacks: usize,
    terminals: Vec<History>,
    outcomes: Vec<TerminalOutcome>,
}

impl Game {
    pub fn new(config: GameConfig) -> Result<Self> {
        config.validate()?;
        let delays = config
            .links
            .iter()
            .map(|l| DeviceDelays::for_link(l, &config.fading))
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(config, delays)
    }

    /// Builds a game from explicit per-device delays instead of the channel model.
    pub fn with_delays(config: GameConfig, delays: Vec<DeviceDelays>) -> Result<Self> {
        config.validate()?;
        if delays.len() != config.device_count() {
            return Err(Error::invalid("delays", "one entry per device is required"));
        }
        for d in &delays {
            if !(d.unjammed_s.is_finite()
                && d.jammed_s.is_finite()
                && d.unjammed_s >= 0.0
                && d.jammed_s >= 0.0)
            {
                return Err(Error::invalid(
                    "delays",
                    "delays must be finite and nonnegative",
                ));
            }
        }
        Self::assemble(config, delays)
    }

    fn assemble(config: GameConfig, delays: Vec<DeviceDelays>) -> Result<Self> {
        let max_attacks = config.max_attacks();
        let mut game = Game {
            config,
            delays,
            max_attacks,
            terminals: Vec::new(),
            outcomes: Vec::new(),
        };
        let terminals = game.enumerate_terminals_uncached();
        let outcomes = terminals
            .iter()
            .map(|h| game.terminal_outcome(h))
            .collect::<Result<Vec<_>>>()?;
        game.terminals = terminals;
        game.outcomes = outcomes;
        Ok(game)
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn delays(&self) -> &[DeviceDelays] {
        &self.delays
    }

    pub fn device_count(&self) -> usize {
        self.config.device_count()
    }

    pub fn required_connections(&self) -> usize {
        self.config.required_connections
    }

    pub fn max_attacks(&self) -> usize {
        self.max_attacks
    }

    pub fn terminal_step(&self) -> usize {
        self.device_count() + 1
    }

    pub fn is_terminal(&self, state: StageState) -> bool {
        state.step == self.terminal_step()
    }

    /// Whether the soldier can still meet the connection requirement from `state`.
    pub fn is_feasible(&self, state: StageState) -> bool {
        let x = self.device_count();
        state.step >= 1
            && state.step <= x + 1
            && state.connections < state.step
            && state.attacks < state.step
            && state.connections <= self.config.required_connections
            && state.attacks <= self.max_attacks
            && self.config.required_connections - state.connections <= x + 1 - state.step
    }

    pub fn feasible_actions(&self, state: StageState) -> Result<FeasibleActions> {
        if self.is_terminal(state) {
            return Err(Error::InfeasibleState {
                state,
                reason: "terminal state has no actions".into(),
            });
        }
        if !self.is_feasible(state) {
            return Err(Error::InfeasibleState {
                state,
                reason: "the connection requirement can no longer be met".into(),
            });
        }
        let remaining_steps = self.device_count() + 1 - state.step;
        let remaining_needed = self.config.required_connections - state.connections;
        let mut soldier = Vec::with_capacity(2);
        if remaining_needed > 0 {
            soldier.push(SoldierAction::Connect);
        }
        if remaining_steps > remaining_needed {
            soldier.push(SoldierAction::Skip);
        }
        let mut attacker = Vec::with_capacity(2);
        if state.attacks < self.max_attacks {
            attacker.push(AttackerAction::Jam);
        }
        attacker.push(AttackerAction::Idle);
        Ok(FeasibleActions { soldier, attacker })
    }

    pub fn advance(
        &self,
        state: StageState,
        a: SoldierAction,
        b: AttackerAction,
    ) -> Result<StageState> {
        let actions = self.feasible_actions(state)?;
        if !actions.soldier.contains(&a) || !actions.attacker.contains(&b) {
            return Err(Error::domain(format!(
                "actions ({a:?}, {b:?}) infeasible at {state}"
            )));
        }
        Ok(StageState {
            step: state.step + 1,
            connections: state.connections + a.is_first() as usize,
            attacks: state.attacks + b.is_first() as usize,
        })
    }

    /// All feasible non-terminal states, ordered by step then counters.
    pub fn states(&self) -> Vec<StageState> {
        let mut out = Vec::new();
        for step in 1..=self.device_count() {
            for c in 0..=self.config.required_connections.min(step - 1) {
                for a in 0..=self.max_attacks.min(step - 1) {
                    let s = StageState::new(step, c, a);
                    if self.is_feasible(s) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }

    /// States of one step, in the same order as [`Game::states`].
    pub fn states_at_step(&self, step: usize) -> Vec<StageState> {
        self.states()
            .into_iter()
            .filter(|s| s.step == step)
            .collect()
    }

    /// Delay at the given step (1-based) for an action pair.
    pub fn stage_delay(&self, step: usize, a: SoldierAction, b: AttackerAction) -> f64 {
        match a {
            SoldierAction::Skip => 0.0,
            SoldierAction::Connect => {
                let d = &self.delays[step - 1];
                if b.is_first() {
                    d.jammed_s
                } else {
                    d.unjammed_s
                }
            }
        }
    }

    /// Per-step contribution to the soldier's material payoff: `−τ/Δ`.
    pub fn soldier_immediate(&self, state: StageState, a: SoldierAction, b: AttackerAction) -> f64 {
        -self.stage_delay(state.step, a, b) / self.config.delay_tolerance_s
    }

    /// Per-step contribution to the attacker's material payoff: `θ₁τ/Δ − θ₂P_K·1{jam}/E`.
    pub fn attacker_immediate(
        &self,
        state: StageState,
        a: SoldierAction,
        b: AttackerAction,
    ) -> f64 {
        let c = &self.config;
        let delay_term = c.delay_weight * self.stage_delay(state.step, a, b) / c.delay_tolerance_s;
        let power_term = if b.is_first() && c.power_budget_mw > 0.0 {
            c.power_weight * c.jam_power_per_attack_mw / c.power_budget_mw
        } else {
            0.0
        };
        delay_term - power_term
    }

    /// Terminal constants `(1, θ₂)` that the immediate contributions are measured from.
    pub fn terminal_base(&self) -> (f64, f64) {
        (1.0, self.config.power_weight)
    }

    pub fn validate_terminal(&self, history: &History) -> Result<()> {
        if history.len() != self.device_count() {
            return Err(Error::domain(format!(
                "terminal history has {} steps, expected {}",
                history.len(),
                self.device_count()
            )));
        }
        if history.connections() != self.config.required_connections {
            return Err(Error::domain(format!(
                "history makes {} connections, exactly {} required",
                history.connections(),
                self.config.required_connections
            )));
        }
        let spent = history.attacks() as f64 * self.config.jam_power_per_attack_mw;
        if history.attacks() > self.max_attacks
            || spent > self.config.power_budget_mw * (1.0 + 1e-12)
        {
            return Err(Error::domain(format!(
                "history jams {} times, at most {} allowed",
                history.attacks(),
                self.max_attacks
            )));
        }
        Ok(())
    }

    pub fn total_delay(&self, history: &History) -> f64 {
        history
            .actions
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| self.stage_delay(i + 1, a, b))
            .sum()
    }

    pub fn terminal_outcome(&self, history: &History) -> Result<TerminalOutcome> {
        self.validate_terminal(history)?;
        let c = &self.config;
        let total_delay_s = self.total_delay(history);
        let soldier_payoff = (c.delay_tolerance_s - total_delay_s) / c.delay_tolerance_s;
        let power_term = if c.power_budget_mw > 0.0 {
            c.power_weight
                * (c.power_budget_mw - history.attacks() as f64 * c.jam_power_per_attack_mw)
                / c.power_budget_mw
        } else {
            c.power_weight
        };
        let attacker_payoff = c.delay_weight * total_delay_s / c.delay_tolerance_s + power_term;
        Ok(TerminalOutcome {
            total_delay_s,
            soldier_payoff,
            attacker_payoff,
        })
    }

    /// `π̃(z) = (Δ − τ(z)) / Δ`.
    pub fn soldier_terminal_payoff(&self, history: &History) -> Result<f64> {
        Ok(self.terminal_outcome(history)?.soldier_payoff)
    }

    /// `π′₀(z) = θ₁τ(z)/Δ + θ₂(E − P_K·jams)/E`.
    pub fn attacker_terminal_payoff(&self, history: &History) -> Result<f64> {
        Ok(self.terminal_outcome(history)?.attacker_payoff)
    }

    pub fn terminal_payoff(&self, history: &History, who: Player) -> Result<f64> {
        let o = self.terminal_outcome(history)?;
        Ok(match who {
            Player::Soldier => o.soldier_payoff,
            Player::Attacker => o.attacker_payoff,
        })
    }

    /// Feasible terminal histories in lexicographic order (connect before skip, jam before idle).
    pub fn terminals(&self) -> &[History] {
        &self.terminals
    }

    /// Outcomes aligned with [`Game::terminals`].
    pub fn terminal_outcomes(&self) -> &[TerminalOutcome] {
        &self.outcomes
    }

    fn enumerate_terminals_uncached(&self) -> Vec<History> {
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.device_count());
        self.walk(StageState::ROOT, &mut prefix, &mut out);
        out
    }

    fn walk(
        &self,
        state: StageState,
        prefix: &mut Vec<(SoldierAction, AttackerAction)>,
        out: &mut Vec<History>,
    ) {
        if self.is_terminal(state) {
            out.push(History::new(prefix.clone()));
            return;
        }
        let actions = self
            .feasible_actions(state)
            .expect("walker only visits feasible states");
        for &a in &actions.soldier {
            for &b in &actions.attacker {
                let next = self.advance(state, a, b).expect("feasible actions advance");
                prefix.push((a, b));
                self.walk(next, prefix, out);
                prefix.pop();
            }
        }
    }

    /// `Σ_z Q(z)·payoff(z)` where `soldier_side` drives soldier actions and
    /// `attacker_side` drives attacker actions in the reach product.
    pub fn expected_material_payoff(
        &self,
        soldier_side: &StrategyMap,
        attacker_side: &StrategyMap,
        who: Player,
    ) -> Result<f64> {
        let mut total = 0.0;
        for (h, o) in self.terminals.iter().zip(&self.outcomes) {
            let q = reach_probability(soldier_side, attacker_side, h)?;
            total += q * match who {
                Player::Soldier => o.soldier_payoff,
                Player::Attacker => o.attacker_payoff,
            };
        }
        Ok(total)
    }

    /// A profile that is uniform where both actions are feasible and pure where forced.
    pub fn uniform_profile(&self) -> StrategyProfile {
        let mut profile = StrategyProfile::default();
        for s in self.states() {
            let f = self
                .feasible_actions(s)
                .expect("states() yields feasible states");
            profile
                .soldier
                .insert(s, self.restrict_soldier(&f, MixedAction::UNIFORM));
            profile
                .attacker
                .insert(s, self.restrict_attacker(&f, MixedAction::UNIFORM));
        }
        profile
    }

    /// Replaces a mix by the forced pure action when only one soldier action is feasible.
    pub fn restrict_soldier(&self, f: &FeasibleActions, mix: MixedAction) -> MixedAction {
        match f.soldier_forced() {
            Some(a) => MixedAction::pure(a.is_first()),
            None => mix,
        }
    }

    pub fn restrict_attacker(&self, f: &FeasibleActions, mix: MixedAction) -> MixedAction {
        match f.attacker_forced() {
            Some(b) => MixedAction::pure(b.is_first()),
            None => mix,
        }
    }
}

/// Product over steps of the soldier-side probability of the realized soldier
/// action and the attacker-side probability of the realized attacker action.
///
/// Which maps are passed selects the quantity: `(α, β)` for the true reach
/// probability, `(α, δ¹)` for the soldier's perceived one, `(ρ¹, β)` for the
/// attacker's, `(ρ¹, ρ²)` and `(δ², δ¹)` for second-order perceptions.
/// Feasibility is not checked.
pub fn reach_probability(
    soldier_side: &StrategyMap,
    attacker_side: &StrategyMap,
    history: &History,
) -> Result<f64> {
    let mut p = 1.0;
    for (state, a, b) in history.path() {
        p *= lookup(soldier_side, state)?.prob(a.is_first());
        p *= lookup(attacker_side, state)?.prob(b.is_first());
        if p == 0.0 {
            return Ok(0.0);
        }
    }
    Ok(p)
}
