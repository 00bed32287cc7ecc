mod common;

use common::*;
use iobt_psygame::equilibrium::{solve_game, SolveMode};
use iobt_psygame::learning::*;
use iobt_psygame::Player;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn beliefs_are_distributions_and_histories_feasible(seed: u64, jam in 0.05..0.95f64) {
        let game = default_game(3);
        for opponent in [Opponent::SelfPlay, Opponent::ScriptedAttacker { jam_probability: jam }] {
            let cfg = LearningConfig { rng_seed: seed, max_iterations: 300, stop_early: false, opponent, ..LearningConfig::default() };
            let t = run_learning(&game, &cfg).unwrap();
            prop_assert_eq!(t.iterations.len(), 300);
            for r in &t.iterations {
                let (c, _) = code_counts(&r.history);
                prop_assert_eq!(c, 1);
                for m in r.soldier_belief.values().chain(r.attacker_belief.values()) {
                    prop_assert!((0.0..=1.0).contains(&m.p_first));
                }
            }
        }
    }

    #[test]
    fn bayes_form_is_the_frequency(seed: u64) {
        let game = default_game(3);
        let cfg = LearningConfig { rng_seed: seed, max_iterations: 200, smoothing: 0.0, stop_early: false, ..LearningConfig::default() };
        let t = run_learning(&game, &cfg).unwrap();
        let c = &t.final_counters;
        for (s, &n) in &c.visits {
            if n == 0 {
                continue;
            }
            for who in [Player::Soldier, Player::Attacker] {
                let direct = c.joint(*s, who, true) as f64 / n as f64;
                let bayes = c.bayes_posterior(*s, who, true).unwrap();
                prop_assert!((direct - bayes).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn exact_equilibria_are_self_confirming() {
    let game = default_game(3);
    for mode in [SolveMode::Pe] {
        let sol = solve_game(&game, mode).unwrap();
        let r = detect_psce(&game, &sol.profile, &sol.beliefs, 0.05, false).unwrap();
        assert!(r.is_psce);
        assert!(r.max_soldier_gain <= PSCE_GAIN_TOL && r.max_attacker_gain <= PSCE_GAIN_TOL);
    }
    let ne = solve_game(&game, SolveMode::Ne).unwrap();
    assert!(
        detect_psce(&game, &ne.profile, &ne.beliefs, 0.05, true)
            .unwrap()
            .is_psce
    );
}

#[test]
fn material_only_learning_targets_nash() {
    let game = default_game(3);
    let cfg = LearningConfig {
        max_iterations: 1,
        material_only: true,
        ..LearningConfig::default()
    };
    let t = run_learning(&game, &cfg).unwrap();
    assert_eq!(t.target, solve_game(&game, SolveMode::Ne).unwrap().profile);
}

#[test]
fn replay_reproduces_through_json() {
    let game = default_game(3);
    let cfg = LearningConfig {
        rng_seed: 9,
        max_iterations: 400,
        ..LearningConfig::default()
    };
    let t = run_learning(&game, &cfg).unwrap();
    let text = serde_json::to_string(&t).unwrap();
    let back: LearningTrace = serde_json::from_str(&text).unwrap();
    assert_eq!(
        serde_json::to_string(&replay(&back).unwrap()).unwrap(),
        text
    );
}
