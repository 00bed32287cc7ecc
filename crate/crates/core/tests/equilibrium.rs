mod common;

use common::*;
use iobt_psygame::equilibrium::*;
use iobt_psygame::Player;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn regular(seed: u64) -> StagePayoffs {
    random_regular(&mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        max_global_rejects: 100_000,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn regular_stages_mix_strictly(seed: u64, ws in 0.0..1.0f64, wa in 0.0..1.0f64) {
        let p = regular(seed);
        for e in [solve_stage_ne(&p).unwrap(), solve_stage_pe(&p, ws, wa).unwrap()] {
            prop_assert_eq!(e.kind, StageKind::InteriorMixed);
            prop_assert!(e.soldier_mix.p_first > 0.0 && e.soldier_mix.p_first < 1.0);
            prop_assert!(e.attacker_mix.p_first > 0.0 && e.attacker_mix.p_first < 1.0);
        }
    }

    #[test]
    fn nash_closed_form(seed: u64) {
        let p = regular(seed);
        let e = solve_stage_ne(&p).unwrap();
        let (s, a) = (&p.soldier, &p.attacker);
        let alpha = (a[1][1] - a[1][0]) / p.d_prime();
        let beta = (s[1][1] - s[0][1]) / (s[0][0] + s[1][1] - s[0][1] - s[1][0]);
        prop_assert!((e.soldier_mix.p_first - alpha).abs() < 1e-12);
        prop_assert!((e.attacker_mix.p_first - beta).abs() < 1e-12);
    }

    #[test]
    fn soldier_curve_decreases(seed: u64, ws in 0.01..1.0f64) {
        let p = regular(seed);
        let mut prev = curve_alpha_of_beta_soldier(&p, ws, 0.0).unwrap();
        for i in 1..=100 {
            let a = curve_alpha_of_beta_soldier(&p, ws, i as f64 / 100.0).unwrap();
            prop_assert!(a < prev);
            prev = a;
        }
    }

    #[test]
    fn attacker_curve_nondecreasing_when_condition_holds(seed: u64, wa in 0.0..1.0f64, theta in 0.01..0.99f64) {
        let p = regular(seed);
        let (s, a) = (&p.soldier, &p.attacker);
        prop_assume!(a[1][1] - a[1][0] >= theta * (s[1][0] - s[1][1]));
        let mut prev = curve_alpha_of_beta(&p, wa, 0.0).unwrap();
        for i in 1..=100 {
            let x = curve_alpha_of_beta(&p, wa, i as f64 / 100.0).unwrap();
            prop_assert!(x >= prev - 1e-12);
            prev = x;
        }
    }

    /// With the Nash jam rate plugged into the soldier curve, the endpoint
    /// conditions put the soldier at or above one half.
    #[test]
    fn soldier_curve_at_nash_jam_is_at_least_half(seed: u64, ws in 0.01..1.0f64, theta in 0.01..0.99f64) {
        let p = regular(seed);
        let (s, a) = (&p.soldier, &p.attacker);
        prop_assume!(a[0][0] - a[1][0] <= theta * (s[1][0] - s[0][0]));
        prop_assume!(a[1][1] - a[0][1] >= theta * (s[0][1] - s[1][1]));
        let beta = solve_stage_ne(&p).unwrap().attacker_mix.p_first;
        prop_assert!(curve_alpha_of_beta_soldier(&p, ws, beta).unwrap() >= 0.5 - 1e-12);
    }

    /// If the attacker curve sits below the soldier curve at the Nash jam
    /// rate, the psychological crossing lies to its right.
    #[test]
    fn psych_jam_exceeds_nash_when_curves_are_ordered(seed: u64, ws in 0.01..1.0f64, wa in 0.0..1.0f64) {
        let p = regular(seed);
        let beta = solve_stage_ne(&p).unwrap().attacker_mix.p_first;
        let att = curve_alpha_of_beta(&p, wa, beta).unwrap();
        let sol = curve_alpha_of_beta_soldier(&p, ws, beta).unwrap();
        let pe = solve_stage_pe(&p, ws, wa).unwrap().attacker_mix.p_first;
        if att < sol - 1e-9 {
            prop_assert!(pe > beta);
        } else if att > sol + 1e-9 {
            prop_assert!(pe < beta);
        }
    }

    #[test]
    fn games_solve_and_verify(seed: u64) {
        let game = random_game(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        for mode in [SolveMode::Ne, SolveMode::Pe] {
            let sol = solve_game(&game, mode).unwrap();
            let r = verify_equilibrium(&game, &sol, mode).unwrap();
            prop_assert!(r.passes(1e-6), "{:?}", r);
            let (ms, ma) = sol.root_material_values();
            let es = game.expected_material_payoff(&sol.profile.soldier, &sol.profile.attacker, Player::Soldier).unwrap();
            let ea = game.expected_material_payoff(&sol.profile.soldier, &sol.profile.attacker, Player::Attacker).unwrap();
            prop_assert!((ms - es).abs() < 1e-8 && (ma - ea).abs() < 1e-8);
        }
    }
}

#[test]
fn nash_profile_is_not_psychological() {
    let game = default_game(3);
    let ne = solve_game(&game, SolveMode::Ne).unwrap();
    let r = verify_equilibrium(&game, &ne, SolveMode::Pe).unwrap();
    assert!(r.max_indifference_residual > 1e-6);
}
