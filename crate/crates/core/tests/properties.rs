use fourlevel::oracle::rk4_propagate;
use fourlevel::{
    amplitudes_closed_form, build_hamiltonian, couplings_from_pair, detect_transfer_condition, oracle_propagate,
    propagate_factored, CouplingSet, OddPair, StateAmplitudes,
};
use proptest::prelude::*;

fn couplings() -> impl Strategy<Value = CouplingSet> {
    (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64)
        .prop_map(|(a, b, c, d)| CouplingSet::new(a, b, c, d).unwrap())
}

fn odd_pair() -> impl Strategy<Value = OddPair> {
    (1u64..13, 0u64..12).prop_filter_map("odd coprime", |(p, q)| OddPair::new(2 * p + 1, 2 * q + 1).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factored_propagator_tracks_rk4(c in couplings(), t in 0.0..3.0f64, level in 1usize..=4) {
        let psi0 = StateAmplitudes::basis(level);
        let a = propagate_factored(&c, &psi0, t).unwrap();
        let b = rk4_propagate(&build_hamiltonian(&c).unwrap(), &psi0, t).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-8);
    }

    #[test]
    fn closed_form_matches_oracle(c in couplings(), t in 0.0..20.0f64) {
        let (a1, a3) = amplitudes_closed_form(&c, t).unwrap();
        let psi = oracle_propagate(&build_hamiltonian(&c).unwrap(), &StateAmplitudes::basis(1), t).unwrap();
        prop_assert!((psi.a1.re - a1).abs() < 1e-10 && psi.a1.im.abs() < 1e-10);
        prop_assert!((psi.a3.re - a3).abs() < 1e-10 && psi.a3.im.abs() < 1e-10);
    }

    #[test]
    fn designs_transfer_and_are_detected(pair in odd_pair(), tau in 0.05..20.0f64) {
        let (c, sol) = couplings_from_pair(&pair, tau).unwrap();
        prop_assert!((sol.tau - tau).abs() <= 1e-12 * tau);
        let psi = oracle_propagate(&build_hamiltonian(&c).unwrap(), &StateAmplitudes::basis(1), tau).unwrap();
        prop_assert!(psi.a3.norm_sqr() >= 1.0 - 1e-10);
        let m = detect_transfer_condition(&c, 1e-9).unwrap().unwrap();
        prop_assert_eq!((m.pair.p, m.pair.q), (pair.p, pair.q));
        prop_assert!((m.solution.tau - tau).abs() <= 1e-9 * tau);
    }

    #[test]
    fn detection_survives_scale_and_gauge(pair in odd_pair(), s in 0.1..10.0f64, theta in -3.0..3.0f64) {
        let (c, sol) = couplings_from_pair(&pair, 1.0).unwrap();
        let moved = c.scaled(s).gauge_rotated(theta);
        let m = detect_transfer_condition(&moved, 1e-9).unwrap().unwrap();
        prop_assert_eq!((m.pair.p, m.pair.q), (pair.p, pair.q));
        prop_assert!((m.solution.tau - sol.tau / s).abs() <= 1e-9 * sol.tau / s);
    }
}
