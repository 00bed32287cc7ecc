mod common;

use common::*;
use iobt_psygame::game::reach_probability;
use iobt_psygame::{MixedAction, StrategyProfile};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_profile(game: &iobt_psygame::Game, seed: u64) -> StrategyProfile {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = StrategyProfile::default();
    for s in game.states() {
        let f = game.feasible_actions(s).unwrap();
        p.soldier.insert(
            s,
            game.restrict_soldier(&f, MixedAction::new(rng.gen()).unwrap()),
        );
        p.attacker.insert(
            s,
            game.restrict_attacker(&f, MixedAction::new(rng.gen()).unwrap()),
        );
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn terminals_respect_constraints(seed: u64) {
        let game = random_game(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        prop_assert!(!game.terminals().is_empty());
        for h in game.terminals() {
            prop_assert!(history_ok(&game, h));
            prop_assert!(h.attacks() <= game.max_attacks());
            prop_assert_eq!(h.len(), game.device_count());
        }
    }

    #[test]
    fn reach_probabilities_sum_to_one(seed: u64, pseed: u64) {
        let game = random_game(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let p = random_profile(&game, pseed);
        let total: f64 = game
            .terminals()
            .iter()
            .map(|h| reach_probability(&p.soldier, &p.attacker, h).unwrap())
            .sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn payoff_bounds(seed: u64) {
        let game = random_game(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let delta = game.config().delay_tolerance_s;
        for (h, o) in game.terminals().iter().zip(game.terminal_outcomes()) {
            prop_assert!(o.soldier_payoff <= 1.0);
            if game.total_delay(h) <= delta {
                prop_assert!((0.0..=1.0).contains(&o.attacker_payoff));
            }
        }
    }

    /// Histories that reach the same counters have the same continuation.
    #[test]
    fn counters_are_sufficient(seed: u64) {
        let game = random_game(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let mut seen = std::collections::BTreeMap::new();
        for h in game.terminals() {
            let mut attacker_before = 0.0;
            let mut soldier_before = 0.0;
            for (i, (s, a, b)) in h.path().enumerate() {
                let suffix: Vec<_> = h.actions[i..].to_vec();
                let key = (s, format!("{suffix:?}"));
                let soldier_rest = game.soldier_terminal_payoff(h).unwrap() - soldier_before;
                let attacker_rest = game.attacker_terminal_payoff(h).unwrap() - attacker_before;
                if let Some(&(sr, ar)) = seen.get(&key) {
                    let (sr, ar): (f64, f64) = (sr, ar);
                    prop_assert!((sr - soldier_rest).abs() < 1e-12 && (ar - attacker_rest).abs() < 1e-12);
                } else {
                    seen.insert(key, (soldier_rest, attacker_rest));
                }
                soldier_before += game.soldier_immediate(s, a, b);
                attacker_before += game.attacker_immediate(s, a, b);
            }
        }
    }
}

#[test]
fn default_game_has_expected_size() {
    let g = default_game(5);
    // One connection among five steps times at most one jam anywhere.
    assert_eq!(g.terminals().len(), 5 * 6);
}
