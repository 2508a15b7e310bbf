mod common;

use common::{max_abs_diff, power_iteration};
use relaysel::markov::*;
use relaysel::model::{db_to_linear, Capacity, NetworkConfig};
use relaysel::Error;

fn net(k: usize, l: u32) -> NetworkConfig {
    NetworkConfig::new(k, Capacity::Finite(l), 1.0, 10.0).unwrap()
}

#[test]
fn solver_matches_power_iteration() {
    for (k, l) in [(1, 5), (2, 2), (2, 5), (3, 3)] {
        for snr in [0.0, 10.0, 20.0] {
            for construction in [Construction::ClosedForm, Construction::Protocol] {
                let a = build_matrix(&net(k, l), db_to_linear(snr), construction).unwrap();
                let pi = steady_state(&a).unwrap();
                let oracle = power_iteration(&a, 200_000);
                let d = max_abs_diff(&pi.pi, &oracle);
                assert!(d < 1e-9, "K={k} L={l} {snr} dB {construction:?}: {d:e}");
                assert!((pi.pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(pi.invariance_residual(&a) < 1e-9);
            }
        }
    }
}

#[test]
fn mirror_symmetries() {
    let l = 3;
    let a = build_matrix_protocol(&net(3, l), db_to_linear(12.0)).unwrap();
    let pi = steady_state(&a).unwrap();
    let space = a.space().unwrap();
    for (i, v) in space.iter().enumerate() {
        let mut perm = v.to_vec();
        perm.rotate_left(1);
        let flipped: Vec<u32> = v.iter().map(|&x| l - x).collect();
        assert!((pi.pi[i] - pi.pi[space.index(&perm).unwrap()]).abs() < 1e-9, "{v:?}");
        assert!((pi.pi[i] - pi.pi[space.index(&flipped).unwrap()]).abs() < 1e-9, "{v:?}");
    }
}

#[test]
fn single_relay_birth_death() {
    // Interior states share one mass; the ends carry (1 - p/2) of it.
    let (l, power) = (6, db_to_linear(3.0));
    let a = build_matrix_protocol(&net(1, l), power).unwrap();
    let pi = steady_state(&a).unwrap();
    let p = (-3.0 / power).exp();
    let end = 1.0 - p / 2.0;
    let c = 1.0 / (2.0 * end + (l - 1) as f64);
    for (i, &x) in pi.pi.iter().enumerate() {
        let want = if i == 0 || i == l as usize { c * end } else { c };
        assert!((x - want).abs() < 1e-12, "state {i}: {x} vs {want}");
    }
}

#[test]
fn outage_decreases_with_power() {
    for construction in [Construction::ClosedForm, Construction::Protocol] {
        let mut last = 1.0;
        for step in 0..=30 {
            let a = build_matrix(&net(2, 2), db_to_linear(step as f64), construction).unwrap();
            let o = outage_analytic(&a, &steady_state(&a).unwrap());
            assert!((0.0..=1.0).contains(&o));
            assert!(o < last, "{construction:?} at {step} dB");
            last = o;
        }
    }
}

#[test]
fn outage_falls_with_buffer_size() {
    let power = db_to_linear(20.0);
    let outage = |l: u32| {
        let a = build_matrix_protocol(&net(2, l), power).unwrap();
        outage_analytic(&a, &steady_state(&a).unwrap())
    };
    let o: Vec<f64> = [2, 4, 8, 16, 32].into_iter().map(outage).collect();
    assert!(o.windows(2).all(|w| w[1] < w[0]), "{o:?}");
    // Never below the interior-only limit.
    let floor = asymptotic_outage(2, 1.0, power).unwrap() * 0.5;
    assert!(o.iter().all(|&x| x > floor));
}

#[test]
fn generated_chains_are_sia() {
    for (k, l) in [(1, 3), (2, 2), (2, 6), (3, 2), (3, 4), (4, 3)] {
        for snr in [0.0, 15.0, 30.0] {
            for construction in [Construction::ClosedForm, Construction::Protocol] {
                let a = build_matrix(&net(k, l), db_to_linear(snr), construction).unwrap();
                let r = verify_sia(&a);
                assert!(r.passes(1e-12), "K={k} L={l} {snr} dB {construction:?}: {r:?}");
            }
        }
    }
}

#[test]
fn infinite_power_limit_needs_cycle_check() {
    let a = build_matrix_closed_form(&net(2, 2), 1e300).unwrap();
    let r = verify_sia(&a);
    assert!(!r.self_loops);
    assert_eq!(r.period, Some(1));
    assert!(r.passes(1e-12));

    // In the exact protocol limit every pair succeeds, so total occupancy
    // never changes and the chain splits into closed classes.
    let a = build_matrix_protocol(&net(2, 2), f64::INFINITY).unwrap();
    assert!(a.diagonal().iter().all(|&d| d == 0.0));
    assert!(!verify_sia(&a).irreducible);
    assert_eq!(steady_state(&a), Err(Error::Singular));
}

#[test]
fn analytic_mode_limits() {
    let inf = NetworkConfig::new(2, Capacity::Unbounded, 1.0, 10.0).unwrap();
    assert_eq!(build_matrix_protocol(&inf, 10.0), Err(Error::UnboundedCapacity));
    assert!(matches!(build_matrix_closed_form(&net(3, 40), 10.0), Err(Error::StateSpace { states: 68921, .. })));
}

#[test]
fn chain_slope_approaches_closed_form() {
    let s = diversity_slope(&net(2, 2), db_to_linear(40.0), db_to_linear(50.0)).unwrap();
    assert!(s > 1.5 && s < 4.5, "{s}");
    let asym = asymptotic_slope(2, 1.0, db_to_linear(40.0), db_to_linear(50.0)).unwrap();
    assert!((asym - 4.0).abs() < 0.1);
}
