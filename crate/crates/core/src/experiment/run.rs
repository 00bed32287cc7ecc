use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spec::{ExperimentSpec, GameSpec, RunMode};
use crate::equilibrium::{solve_game, SolveMode};
use crate::error::Result;
use crate::game::{BeliefSystem, Game, Player, StageState, StrategyProfile};
use crate::learning::{run_learning, LearningTrace};
use crate::psychology::{attacker_psych_utility, soldier_psych_utility};

/// One output row: a sweep point under one mode and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    /// Sweep coordinates in axis order.
    pub point: Vec<(String, f64)>,
    pub mode: RunMode,
    pub seed: u64,
    pub soldier_material: Option<f64>,
    pub attacker_material: Option<f64>,
    pub soldier_psych: Option<f64>,
    pub attacker_psych: Option<f64>,
    pub root_connect_prob: Option<f64>,
    pub root_jam_prob: Option<f64>,
    /// First iteration of the converged streak (BU only).
    pub iterations_to_epsilon: Option<usize>,
    pub error: Option<String>,
}

impl ResultRow {
    fn failed(point: Vec<(String, f64)>, mode: RunMode, seed: u64, err: String) -> Self {
        ResultRow {
            point,
            mode,
            seed,
            soldier_material: None,
            attacker_material: None,
            soldier_psych: None,
            attacker_psych: None,
            root_connect_prob: None,
            root_jam_prob: None,
            iterations_to_epsilon: None,
            error: Some(err),
        }
    }

    pub fn coordinate(&self, field: &str) -> Option<f64> {
        self.point.iter().find(|(k, _)| k == field).map(|&(_, v)| v)
    }
}

/// Material and psychological utilities of a profile under a belief system.
pub fn profile_summary(
    game: &Game,
    profile: &StrategyProfile,
    beliefs: &BeliefSystem,
) -> Result<[f64; 4]> {
    let sm =
        game.expected_material_payoff(&profile.soldier, &beliefs.soldier_first, Player::Soldier)?;
    let am = game.expected_material_payoff(
        &beliefs.attacker_first,
        &profile.attacker,
        Player::Attacker,
    )?;
    let sp = soldier_psych_utility(
        game,
        &profile.soldier,
        &beliefs.soldier_first,
        &beliefs.soldier_second,
    )?;
    let ap = attacker_psych_utility(
        game,
        &profile.attacker,
        &beliefs.attacker_first,
        &beliefs.attacker_second,
    )?;
    Ok([sm, am, sp, ap])
}

fn root_probs(profile: &StrategyProfile) -> (f64, f64) {
    let r = StageState::ROOT;
    (
        profile.soldier.get(&r).map_or(f64::NAN, |m| m.p_first),
        profile.attacker.get(&r).map_or(f64::NAN, |m| m.p_first),
    )
}

fn equilibrium_row(game: &Game, mode: SolveMode) -> Result<[f64; 6]> {
    let sol = solve_game(game, mode)?;
    let [_, _, sp, ap] = profile_summary(game, &sol.profile, &sol.beliefs)?;
    let (sm, am) = sol.root_material_values();
    let (c, j) = root_probs(&sol.profile);
    Ok([sm, am, sp, ap, c, j])
}

/// Result of one BU run: the row and its trace.
fn learning_row(
    game: &Game,
    spec: &ExperimentSpec,
    seed: u64,
) -> Result<(ResultRow, LearningTrace)> {
    let learning = spec.learning.clone().unwrap_or_default();
    let trace = run_learning(game, &learning.config(seed))?;
    let profile = trace.empirical_profile();
    let [sm, am, sp, ap] = profile_summary(game, &profile, &trace.final_beliefs)?;
    let (c, j) = root_probs(&profile);
    let row = ResultRow {
        point: Vec::new(),
        mode: RunMode::Bu,
        seed,
        soldier_material: Some(sm),
        attacker_material: Some(am),
        soldier_psych: Some(sp),
        attacker_psych: Some(ap),
        root_connect_prob: Some(c),
        root_jam_prob: Some(j),
        iterations_to_epsilon: trace.converged_at,
        error: None,
    };
    Ok((row, trace))
}

/// Rows and, when requested, BU traces keyed by `(point index, seed)`.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub traces: Vec<(usize, u64, LearningTrace)>,
}

struct Job {
    index: usize,
    coords: Vec<(String, f64)>,
    game_spec: GameSpec,
    mode: RunMode,
    seed: u64,
}

/// Runs every (sweep point × mode × seed) in parallel. Row order is
/// deterministic: points in grid order, then mode, then seed.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let mut jobs = Vec::new();
    for (index, (coords, game_spec)) in spec.points()?.into_iter().enumerate() {
        for &mode in &spec.modes {
            for &seed in &spec.seeds {
                jobs.push(Job {
                    index,
                    coords: coords.clone(),
                    game_spec: game_spec.clone(),
                    mode,
                    seed,
                });
            }
        }
    }
    let keep_traces = spec.learning.as_ref().is_some_and(|l| l.write_traces);
    let mut results: Vec<(usize, RunMode, u64, ResultRow, Option<LearningTrace>)> = jobs
        .into_par_iter()
        .map(|job| {
            let outcome = job
                .game_spec
                .resolve()
                .and_then(|(config, _)| Game::new(config))
                .and_then(|game| match job.mode {
                    RunMode::Ne | RunMode::Pe => {
                        let m = if job.mode == RunMode::Ne {
                            SolveMode::Ne
                        } else {
                            SolveMode::Pe
                        };
                        let [sm, am, sp, ap, c, j] = equilibrium_row(&game, m)?;
                        Ok((
                            ResultRow {
                                point: Vec::new(),
                                mode: job.mode,
                                seed: job.seed,
                                soldier_material: Some(sm),
                                attacker_material: Some(am),
                                soldier_psych: Some(sp),
                                attacker_psych: Some(ap),
                                root_connect_prob: Some(c),
                                root_jam_prob: Some(j),
                                iterations_to_epsilon: None,
                                error: None,
                            },
                            None,
                        ))
                    }
                    RunMode::Bu => learning_row(&game, spec, job.seed).map(|(r, t)| (r, Some(t))),
                });
            let (row, trace) = match outcome {
                Ok((mut row, trace)) => {
                    row.point = job.coords;
                    (row, if keep_traces { trace } else { None })
                }
                Err(e) => (
                    ResultRow::failed(job.coords, job.mode, job.seed, e.to_string()),
                    None,
                ),
            };
            (job.index, job.mode, job.seed, row, trace)
        })
        .collect();
    results.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
    let mut rows = Vec::with_capacity(results.len());
    let mut traces = Vec::new();
    for (index, _, seed, row, trace) in results {
        rows.push(row);
        if let Some(t) = trace {
            traces.push((index, seed, t));
        }
    }
    Ok(ExperimentOutput { rows, traces })
}

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "IOBT_OUTPUT_DIR";

/// Output directory: explicit argument, then the spec, then `$IOBT_OUTPUT_DIR`, then `results`.
pub fn output_dir(explicit: Option<&Path>, spec: Option<&ExperimentSpec>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    if let Some(p) = spec.and_then(|s| s.output_path.clone()) {
        return p;
    }
    std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("results"))
}
