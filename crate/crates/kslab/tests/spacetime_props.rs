//! Cone predicates and the intersection-apex closed form, checked against
//! a brute-force maximization over a rational event grid.

use kslab::geometry::Rational;
use kslab::spacetime::{
    causally_independent, h_prime_region_check, in_past_cone, intersection_apex_time,
    monotonicity_probe, Event, MeasurementWindow, Observer, ProbePattern, RegionMembership,
    Scenario, Worldline,
};
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn twin_scenario(speed: Rational, windows: Vec<MeasurementWindow>) -> Scenario {
    Scenario::symmetric_twin(
        int(1),
        Event::from_ints(0, [0, 0, 0]),
        speed,
        0,
        windows,
        vec![],
    )
    .unwrap()
}

/// Brute-force: the latest event time on a rational grid of candidate
/// events lying in both past cones of the twins observed at time `t`.
/// For each grid position the latest admissible time is computed exactly,
/// so the maximum over the grid touching the midline is exact too.
fn grid_max_apex_time(speed: &Rational, t: &Rational, steps: i64) -> Rational {
    let c = int(1);
    let x_a = speed * t; // A's position on the axis at time t
    let mut best: Option<Rational> = None;
    for j in -steps..=steps {
        // Axis positions from −x_a to +x_a inclusive; j = 0 is the midline.
        let y = &x_a * rat(j, steps);
        // Latest s with (s, y) in both cones: t − max(|y − x_a|, |y + x_a|)/c.
        let d_a = (&y - &x_a).abs();
        let d_b = (&y + &x_a).abs();
        let d = d_a.max(d_b);
        let s = t - d / &c;
        best = Some(match best {
            Some(b) => b.max(s),
            None => s,
        });
    }
    best.unwrap()
}

#[test]
fn apex_time_matches_grid_oracle_for_20_seeded_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for round in 0..20 {
        // v = p/q < 1, t = n/d > 0, all small rationals.
        let q = rng.random_range(2..12i64);
        let p = rng.random_range(0..q);
        let speed = rat(p, q);
        let t = rat(rng.random_range(1..40i64), rng.random_range(1..6i64));

        let scenario = twin_scenario(speed.clone(), vec![]);
        let closed = intersection_apex_time(&scenario, &t).unwrap();
        assert_eq!(closed, (int(1) - &speed) * &t, "round {round}");

        let grid = grid_max_apex_time(&speed, &t, 32);
        assert_eq!(closed, grid, "round {round}: v={speed} t={t}");
    }
}

#[test]
fn apex_time_growth_rate_is_exact() {
    // apex(t2) − apex(t1) = (1 − v/c)(t2 − t1), strictly positive for v < c.
    for (p, q) in [(0, 1), (1, 2), (3, 4), (9, 10)] {
        let speed = rat(p, q);
        let scenario = twin_scenario(speed.clone(), vec![]);
        let t1 = rat(7, 3);
        let t2 = int(5);
        let a1 = intersection_apex_time(&scenario, &t1).unwrap();
        let a2 = intersection_apex_time(&scenario, &t2).unwrap();
        let slope = int(1) - &speed;
        assert!(slope.is_positive());
        assert_eq!(a2 - a1, slope * (t2 - t1));
    }
}

#[test]
fn probe_classifies_subluminal_and_lightlike() {
    let times: Vec<Rational> = (1..=6).map(int).collect();
    for (p, q, expect) in [
        (0, 1, ProbePattern::Increasing),
        (1, 3, ProbePattern::Increasing),
        (7, 8, ProbePattern::Increasing),
        (1, 1, ProbePattern::Constant),
    ] {
        let (_, pattern) = monotonicity_probe(&twin_scenario(rat(p, q), vec![]), &times).unwrap();
        assert_eq!(pattern, expect, "v = {p}/{q}");
    }
}

proptest! {
    /// Causal chains compose: e1 ≤ e2 ≤ e3 implies e1 ≤ e3.
    #[test]
    fn past_cone_membership_is_transitive(
        t0 in -20i64..20,
        x0 in [-20i64..20, -20i64..20, -20i64..20],
        hops in proptest::collection::vec(
            ([-9i64..10, -9i64..10, -9i64..10], 1i64..5),
            2,
        ),
    ) {
        let c = int(1);
        let e1 = Event::from_ints(t0, x0);
        let mut chain = vec![e1.clone()];
        for (dx, den) in &hops {
            let prev = chain.last().unwrap();
            let dx: Vec<Rational> = dx.iter().map(|&n| rat(n, *den)).collect();
            // 1-norm dominates the Euclidean norm, so dt = Σ|dxᵢ| keeps the
            // hop inside the cone.
            let dt: Rational = dx.iter().map(|d| d.abs()).sum();
            chain.push(Event::new(
                &prev.t + &dt,
                [
                    &prev.x[0] + &dx[0],
                    &prev.x[1] + &dx[1],
                    &prev.x[2] + &dx[2],
                ],
            ));
        }
        let e2 = &chain[1];
        let e3 = &chain[2];
        prop_assert!(in_past_cone(&e1, e2, &c));
        prop_assert!(in_past_cone(e2, e3, &c));
        prop_assert!(in_past_cone(&e1, e3, &c));
    }

    /// The independence verdict never depends on argument order.
    #[test]
    fn causal_independence_is_symmetric(
        sep_num in 0i64..30,
        sep_den in 1i64..6,
        start_b in -4i64..5,
        dur in 1i64..6,
    ) {
        let wa = MeasurementWindow::new(Observer::A, 0, 0, int(0), int(1));
        let wb = MeasurementWindow::new(Observer::B, 0, 0, int(start_b), int(dur));
        let scenario = Scenario::new(
            int(1),
            Event::from_ints(0, [0, 0, 0]),
            Worldline::new(Event::from_ints(0, [0, 0, 0]), [int(0), int(0), int(0)]),
            Worldline::new(
                Event::new(int(0), [rat(sep_num, sep_den), int(0), int(0)]),
                [int(0), int(0), int(0)],
            ),
            vec![wa.clone(), wb.clone()],
            vec![],
        ).unwrap();
        let ab = causally_independent(&scenario, &wa, &wb);
        let ba = causally_independent(&scenario, &wb, &wa);
        prop_assert_eq!(ab.is_independent(), ba.is_independent());
    }

    /// The common-past region only grows with the schedule horizon.
    #[test]
    fn h_prime_region_grows_with_time(
        e_t in -30i64..10,
        e_x in [-20i64..20, -20i64..20, -20i64..20],
        t1 in 1i64..15,
        extra in 1i64..15,
    ) {
        let speed = rat(1, 2);
        let window = |t: i64| MeasurementWindow::new(Observer::A, 0, 0, int(t), int(1));
        let early = twin_scenario(speed.clone(), vec![window(t1)]);
        let late = twin_scenario(speed, vec![window(t1 + extra)]);
        let e = Event::from_ints(e_t, e_x);
        if h_prime_region_check(&early, &e).unwrap() == RegionMembership::Inside {
            prop_assert_eq!(
                h_prime_region_check(&late, &e).unwrap(),
                RegionMembership::Inside
            );
        }
    }
}

#[test]
fn source_is_always_inside_h_prime() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..40 {
        let speed = rat(rng.random_range(0..4), 4);
        let start = rng.random_range(0..20i64);
        let scenario = twin_scenario(
            speed,
            vec![MeasurementWindow::new(
                Observer::A,
                0,
                0,
                int(start),
                int(1),
            )],
        );
        assert_eq!(
            h_prime_region_check(&scenario, &Event::from_ints(0, [0, 0, 0])).unwrap(),
            RegionMembership::Inside
        );
    }
}

#[test]
fn moving_twins_with_wide_margins_are_independent() {
    // v = 1/2 twins; windows near t = 100 while the separation is ~100.
    let mut windows = Vec::new();
    for d in 0..5 {
        for obs in [Observer::A, Observer::B] {
            windows.push(MeasurementWindow::new(
                obs,
                d,
                0,
                int(100 + d as i64),
                int(1),
            ));
        }
    }
    let scenario = twin_scenario(rat(1, 2), windows);
    for wa in scenario
        .schedule
        .iter()
        .filter(|w| w.observer == Observer::A)
    {
        for wb in scenario
            .schedule
            .iter()
            .filter(|w| w.observer == Observer::B)
        {
            assert!(causally_independent(&scenario, wa, wb).is_independent());
        }
    }
}

#[test]
fn probe_rejects_lab_scenarios_without_twin_geometry() {
    let scenario = Scenario::new(
        int(1),
        Event::from_ints(0, [0, 0, 0]),
        Worldline::new(Event::from_ints(0, [0, 0, 0]), [int(0), int(0), int(0)]),
        Worldline::new(Event::from_ints(0, [10, 0, 0]), [int(0), int(0), int(0)]),
        vec![],
        vec![],
    )
    .unwrap();
    assert!(monotonicity_probe(&scenario, &[int(1), int(2)]).is_err());
    assert!(intersection_apex_time(&scenario, &int(1)).is_err());
}
