use newcomb::decision::{expected_utility, Choice, PredictorProfile, SChoice, UtilityMatrix};
use newcomb::sim::{
    compare, monte_carlo, play_once, standard_error, ResolvedEvent, RngSpec, TrialRng,
    UniformSource,
};

fn classic() -> UtilityMatrix {
    UtilityMatrix::classic()
}

/// Random games derived from a stream that is independent of the trial
/// streams.
fn random_game(rng: &mut TrialRng) -> (UtilityMatrix, PredictorProfile) {
    let mut u = || rng.next_uniform();
    let v = UtilityMatrix::new(u() * 1e6, u() * 1e6, u() * 1e6, u() * 1e6).unwrap();
    let p = PredictorProfile::new(u(), u()).unwrap();
    (v, p)
}

#[test]
fn entanglement_holds_on_a_million_trials() {
    let mut games = TrialRng::for_trial(u64::MAX, 0);
    let spec = RngSpec::new(31);
    let mut game = random_game(&mut games);
    for i in 0..1_000_000u64 {
        if i % 1000 == 0 {
            game = random_game(&mut games);
        }
        let (v, p) = &game;
        let c = if i % 2 == 0 { Choice::C1 } else { Choice::C2 };
        let t = play_once(v, p, c, &mut spec.stream(i)).unwrap();
        let c3 = match t.event_at(3) {
            Some(ResolvedEvent::CChoice(c)) => c,
            other => panic!("node 3: {other:?}"),
        };
        let c6 = match t.event_at(6) {
            Some(ResolvedEvent::EntangledCChoice(c)) => c,
            other => panic!("node 6: {other:?}"),
        };
        let s2 = match t.event_at(2) {
            Some(ResolvedEvent::SChoice(s)) => s,
            other => panic!("node 2: {other:?}"),
        };
        assert_eq!(c6, c3);
        assert_eq!(t.event_at(7), Some(ResolvedEvent::Outcome(v.get(s2, c3))));
    }
}

#[test]
fn conditional_frequency_of_s1() {
    let n = 50_000u64;
    for (p, seed) in [
        (PredictorProfile::RANDOM, 0),
        (PredictorProfile::new(0.9, 0.7).unwrap(), 1),
    ] {
        let t = compare(&classic(), &p, n, RngSpec::new(seed), 4).unwrap();
        for c in Choice::ALL {
            let q = p.prob_s1_given(c);
            let band = 3.0 * (q * (1.0 - q) / n as f64).sqrt();
            let freq = t.row(c).s1_frequency();
            assert!((freq - q).abs() <= band, "{c}: {freq} vs {q} ± {band}");
        }
    }
}

#[test]
fn mean_converges_to_expected_utility() {
    let n = 1_000_000u64;
    let mut games = TrialRng::for_trial(2718, 0);
    for seed in 0..5u64 {
        let (v, p) = random_game(&mut games);
        for c in Choice::ALL {
            let r = monte_carlo(&v, &p, c, n, RngSpec::new(seed), 8).unwrap();
            let theory = expected_utility(&v, &p, c);
            assert_eq!(r.theoretical, theory);
            let tol = 4.0 * standard_error(&v, &p, c, n);
            assert!(
                (r.empirical_mean - theory).abs() <= tol.max(1e-6 * theory.abs()),
                "seed {seed} {c}: {} vs {theory} (4 SE {tol})",
                r.empirical_mean
            );
        }
    }
}

#[test]
fn parallelism_does_not_change_results() {
    let p = PredictorProfile::new(0.3, 0.6).unwrap();
    let reference = monte_carlo(&classic(), &p, Choice::C2, 100_003, RngSpec::new(8), 1).unwrap();
    for threads in [2, 3, 8, 16] {
        let r = monte_carlo(
            &classic(),
            &p,
            Choice::C2,
            100_003,
            RngSpec::new(8),
            threads,
        )
        .unwrap();
        assert_eq!(
            r.empirical_mean.to_bits(),
            reference.empirical_mean.to_bits()
        );
        assert_eq!(r.s1_count, reference.s1_count);
    }
}

#[test]
fn classic_result_tables() {
    let perfect = compare(
        &classic(),
        &PredictorProfile::PERFECT,
        50_000,
        RngSpec::new(0),
        4,
    )
    .unwrap();
    assert_eq!(perfect.theoretical(), (10_000.0, 1_000_000.0));
    assert_eq!(perfect.empirical(), (10_000.0, 1_000_000.0));

    let random = compare(
        &classic(),
        &PredictorProfile::RANDOM,
        50_000,
        RngSpec::new(0),
        4,
    )
    .unwrap();
    assert_eq!(random.theoretical(), (510_000.0, 500_000.0));
    for (c, want) in [(Choice::C1, 510_000.0), (Choice::C2, 500_000.0)] {
        let row = random.row(c);
        assert!((row.empirical_mean - want).abs() <= 3.0 * row.standard_error);
    }
    // Every trial's utility is one of the two table entries in its column.
    assert!(random.c1.s1_count > 0 && random.c1.s1_count < 50_000);
}

#[test]
fn se_matches_two_point_spread() {
    let se = standard_error(&classic(), &PredictorProfile::RANDOM, Choice::C1, 50_000);
    // Outcomes {10000, 1010000} with probability 1/2 each: sd = 500000.
    assert!((se - 500_000.0 / (50_000f64).sqrt()).abs() < 1e-9);
    assert_eq!(classic().get(SChoice::S1, Choice::C1), 10_000.0);
}
