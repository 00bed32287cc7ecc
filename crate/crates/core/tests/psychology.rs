mod common;

use common::*;
use iobt_psygame::psychology::*;
use iobt_psygame::{Game, MixedAction, Player, StrategyMap};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_maps(game: &Game, seed: u64) -> [StrategyMap; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: [StrategyMap; 4] = Default::default();
    for s in game.states() {
        let f = game.feasible_actions(s).unwrap();
        out[0].insert(
            s,
            game.restrict_soldier(&f, MixedAction::new(rng.gen()).unwrap()),
        );
        out[1].insert(
            s,
            game.restrict_attacker(&f, MixedAction::new(rng.gen()).unwrap()),
        );
        out[2].insert(
            s,
            game.restrict_soldier(&f, MixedAction::new(rng.gen()).unwrap()),
        );
        out[3].insert(
            s,
            game.restrict_attacker(&f, MixedAction::new(rng.gen()).unwrap()),
        );
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frustration_is_a_positive_part(seed: u64, mseed: u64) {
        let game = random_game(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let [alpha, beta, _, _] = random_maps(&game, mseed);
        for z in game.terminals() {
            let fs = soldier_frustration(&game, &alpha, &beta, z).unwrap();
            prop_assert!(fs.frustration >= 0.0);
            if fs.actual >= fs.expected {
                prop_assert_eq!(fs.frustration, 0.0);
            }
            let fa = attacker_frustration(&game, &beta, &alpha, z).unwrap();
            prop_assert!(fa.frustration >= 0.0);
        }
    }

    #[test]
    fn truthful_perception_matches(seed: u64, mseed: u64) {
        let game = random_game(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let [alpha, beta, _, _] = random_maps(&game, mseed);
        for z in game.terminals() {
            let own = soldier_frustration(&game, &alpha, &beta, z).unwrap().frustration;
            let seen = attacker_perceived_soldier_frustration(&game, &alpha, &beta, z).unwrap().frustration;
            prop_assert_eq!(own, seen);
            let own = attacker_frustration(&game, &beta, &alpha, z).unwrap().frustration;
            let seen = soldier_perceived_attacker_frustration(&game, &beta, &alpha, z).unwrap().frustration;
            prop_assert_eq!(own, seen);
        }
    }

    #[test]
    fn zero_weight_is_material(seed: u64, mseed: u64) {
        let game = random_game(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let [alpha, beta, a2, b2] = random_maps(&game, mseed);
        let u = soldier_psych_utility_weighted(&game, &alpha, &beta, &a2, 0.0).unwrap();
        prop_assert_eq!(u.total, game.expected_material_payoff(&alpha, &beta, Player::Soldier).unwrap());
        let v = attacker_psych_utility_weighted(&game, &beta, &alpha, &b2, 0.0).unwrap();
        prop_assert_eq!(v.total, game.expected_material_payoff(&alpha, &beta, Player::Attacker).unwrap());
    }

    #[test]
    fn utility_grows_with_weight(seed: u64, mseed: u64, w in 0.0..1.0f64, dw in 0.0..1.0f64) {
        let game = random_game(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let [alpha, beta, a2, b2] = random_maps(&game, mseed);
        let lo = soldier_psych_utility_weighted(&game, &alpha, &beta, &a2, w).unwrap();
        let hi = soldier_psych_utility_weighted(&game, &alpha, &beta, &a2, w + dw).unwrap();
        prop_assert!(hi.total >= lo.total);
        let lo = attacker_psych_utility_weighted(&game, &beta, &alpha, &b2, w).unwrap();
        let hi = attacker_psych_utility_weighted(&game, &beta, &alpha, &b2, w + dw).unwrap();
        prop_assert!(hi.total >= lo.total);
    }
}
