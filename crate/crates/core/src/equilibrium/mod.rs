//! Nash and psychological equilibria by backward induction over stage states.
//!
//! Each non-terminal state is reduced to a 2×2 stage game whose entries are the
//! immediate payoff of the action pair plus the equilibrium value of the
//! successor state. In PE mode the successor values are themselves
//! psychological values, and material values are tracked alongside for
//! reporting.

mod stage;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use stage::{
    curve_alpha_of_beta, curve_alpha_of_beta_soldier, solve_stage_ne, solve_stage_ne_with,
    solve_stage_pe, solve_stage_pe_with, StageDiagnostics, StageEquilibrium, StageKind,
    StagePayoffs, Support,
};
pub use verify::{deviation_utility, verify_equilibrium, StateCheck, VerificationReport};

use crate::error::{Error, Result};
use crate::game::{
    state_map_serde, AttackerAction, BeliefSystem, Game, SoldierAction, StageState, StrategyProfile,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Ne,
    Pe,
}

impl SolveMode {
    pub fn weights(self, game: &Game) -> (f64, f64) {
        match self {
            SolveMode::Ne => (0.0, 0.0),
            SolveMode::Pe => (
                game.config().soldier_frustration_weight,
                game.config().attacker_frustration_weight,
            ),
        }
    }
}

impl std::fmt::Display for SolveMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveMode::Ne => "NE",
            SolveMode::Pe => "PE",
        })
    }
}

impl std::str::FromStr for SolveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ne" => Ok(SolveMode::Ne),
            "pe" => Ok(SolveMode::Pe),
            other => Err(Error::domain(format!(
                "unknown mode `{other}`, expected ne or pe"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    /// Payoffs the stage was solved with (psychological continuation in PE mode).
    pub payoffs: StagePayoffs,
    /// Payoffs built from material continuation values.
    pub material_payoffs: StagePayoffs,
    pub support: Support,
    pub equilibrium: StageEquilibrium,
}

/// Value pair `(soldier, attacker)` per state.
pub type ValueTable = BTreeMap<StageState, (f64, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSolution {
    pub mode: SolveMode,
    pub profile: StrategyProfile,
    pub beliefs: BeliefSystem,
    /// Values the backward induction propagated; psychological in PE mode.
    #[serde(with = "state_map_serde")]
    pub values: ValueTable,
    #[serde(with = "state_map_serde")]
    pub material_values: ValueTable,
    #[serde(with = "state_map_serde")]
    pub stages: BTreeMap<StageState, StageRecord>,
}

impl EquilibriumSolution {
    pub fn root_values(&self) -> (f64, f64) {
        self.values[&StageState::ROOT]
    }

    pub fn root_material_values(&self) -> (f64, f64) {
        self.material_values[&StageState::ROOT]
    }

    pub fn root_mixes(&self) -> (f64, f64) {
        (
            self.profile.soldier[&StageState::ROOT].p_first,
            self.profile.attacker[&StageState::ROOT].p_first,
        )
    }
}

fn cell_actions(n: usize, m: usize) -> (SoldierAction, AttackerAction) {
    (
        SoldierAction::from_first(n == 0),
        AttackerAction::from_first(m == 0),
    )
}

/// Stage payoffs at `state` from the continuation values of its successors.
///
/// Cells of infeasible actions are filled by copying the feasible row or
/// column so that every entry stays finite; solvers ignore them through the
/// returned support.
pub fn build_stage_payoffs(
    game: &Game,
    state: StageState,
    continuation: &ValueTable,
) -> Result<(StagePayoffs, Support)> {
    let feasible = game.feasible_actions(state)?;
    let support = Support::from_feasible(&feasible);
    let mut soldier = [[f64::NAN; 2]; 2];
    let mut attacker = [[f64::NAN; 2]; 2];
    for n in 0..2 {
        for m in 0..2 {
            if !(support.soldier[n] && support.attacker[m]) {
                continue;
            }
            let (a, b) = cell_actions(n, m);
            let next = game.advance(state, a, b)?;
            let (vs, va) = if game.is_terminal(next) {
                game.terminal_base()
            } else {
                *continuation.get(&next).ok_or(Error::MissingEntry(next))?
            };
            soldier[n][m] = game.soldier_immediate(state, a, b) + vs;
            attacker[n][m] = game.attacker_immediate(state, a, b) + va;
        }
    }
    let n_ok = if support.soldier[0] { 0 } else { 1 };
    let m_ok = if support.attacker[0] { 0 } else { 1 };
    for n in 0..2 {
        for m in 0..2 {
            if soldier[n][m].is_nan() {
                let (sn, sm) = (
                    if support.soldier[n] { n } else { n_ok },
                    if support.attacker[m] { m } else { m_ok },
                );
                soldier[n][m] = soldier[sn][sm];
                attacker[n][m] = attacker[sn][sm];
            }
        }
    }
    Ok((StagePayoffs::new(soldier, attacker), support))
}

/// Solves the whole game backward from the last step.
pub fn solve_game(game: &Game, mode: SolveMode) -> Result<EquilibriumSolution> {
    let (omega_s, omega_a) = mode.weights(game);
    let mut values = ValueTable::new();
    let mut material_values = ValueTable::new();
    let mut stages = BTreeMap::new();
    let mut profile = StrategyProfile::default();
    let states = game.states();
    for state in states.iter().rev().copied() {
        let (payoffs, support) =
            build_stage_payoffs(game, state, &values).map_err(|e| e.at_state(state))?;
        let (material_payoffs, _) = if mode == SolveMode::Ne {
            (payoffs, support)
        } else {
            build_stage_payoffs(game, state, &material_values).map_err(|e| e.at_state(state))?
        };
        let eq = match mode {
            SolveMode::Ne => solve_stage_ne_with(&payoffs, support),
            SolveMode::Pe => solve_stage_pe_with(&payoffs, omega_s, omega_a, support),
        }
        .map_err(|e| e.at_state(state))?;
        let (alpha, beta) = (eq.soldier_mix.p_first, eq.attacker_mix.p_first);
        values.insert(state, (eq.soldier_value, eq.attacker_value));
        material_values.insert(state, material_payoffs.values(alpha, beta, 0.0, 0.0));
        profile.soldier.insert(state, eq.soldier_mix);
        profile.attacker.insert(state, eq.attacker_mix);
        stages.insert(
            state,
            StageRecord {
                payoffs,
                material_payoffs,
                support,
                equilibrium: eq,
            },
        );
    }
    let beliefs = BeliefSystem::error_free(&profile);
    Ok(EquilibriumSolution {
        mode,
        profile,
        beliefs,
        values,
        material_values,
        stages,
    })
}
