//! Property tests for the map's structural invariants.

use std::sync::OnceLock;

use proptest::prelude::*;

use orbitk::*;

fn table() -> &'static FactorTable {
    static TABLE: OnceLock<FactorTable> = OnceLock::new();
    TABLE.get_or_init(|| FactorTable::build(1_000_000).unwrap())
}

fn trial_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Longest run of consecutive primes in a slice of orbit terms.
fn longest_prime_run(terms: &[u64], t: &FactorTable) -> usize {
    let mut best = 0;
    let mut run = 0;
    for &x in terms {
        if is_prime(x, Some(t)) {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

/// A run of l consecutive prime terms is a prime progression with difference
/// k, so (l-1)# divides k. That caps runs at k for k >= 3; for k = 1 and
/// k = 2 the only longer runs are (2,3) and (3,5,7), one term over.
fn max_prime_run(k: u64) -> u64 {
    if k <= 2 {
        k + 1
    } else {
        k
    }
}

#[test]
fn factorization_invariants_exhaustive() {
    let t = table();
    for n in 2..=1_000_000u64 {
        let p = largest_prime_factor(n, t).unwrap();
        assert_eq!(n % p, 0, "lpf must divide n={n}");
        let prime = is_prime(n, Some(t));
        if prime {
            assert_eq!(p, n);
        } else {
            assert!(p < n, "n={n}");
            assert!(p <= n / 2, "n={n}");
            if n % 2 == 1 {
                assert!(p <= n / 3, "odd composite n={n}");
            }
        }
        // The cofactor carries no prime factor above p.
        let cofactor = n / p;
        if cofactor >= 2 {
            assert!(largest_prime_factor(cofactor, t).unwrap() <= p, "n={n}");
        }
    }
}

#[test]
fn is_prime_agrees_with_trial_division_exhaustive() {
    let t = table();
    for n in 0..=1_000_000u64 {
        assert_eq!(is_prime(n, Some(t)), trial_is_prime(n), "n={n}");
    }
}

#[test]
fn no_fixed_points_exhaustive() {
    let t = table();
    for x in 2..=100_000u64 {
        if is_prime(x, Some(t)) {
            // The prime branch adds k >= 1, so x + k > x for every k.
            for k in [1, 7, 100] {
                assert!(phi(x, k, t).unwrap() > x);
            }
        } else {
            // The composite branch is k-independent and strictly decreases.
            let y = phi(x, 1, t).unwrap();
            assert!(y < x, "x={x}");
            assert!(is_prime(y, Some(t)), "x={x}");
            assert_eq!(phi(x, 99, t).unwrap(), y);
        }
    }
}

#[test]
fn sweep_rows_identical_across_pool_sizes() {
    let t = table();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sweep_loop_counts(1, 80, t, BoundMode::Safe).unwrap())
    };
    let single = run(1);
    let multi = run(3);
    assert_eq!(single, multi);
    assert!(single.iter().all(|r| r.num_loops >= 1));
}

#[test]
fn period_rows_are_least_and_attained() {
    let t = table();
    let rows = least_k_for_periods(8, 60, t, BoundMode::Safe).unwrap();
    for row in &rows {
        let Some(least) = row.least_k else { continue };
        let periods_of = |k: u64| -> Vec<usize> {
            enumerate_loops(k, t, BoundMode::Safe)
                .unwrap()
                .loops
                .iter()
                .map(|l| l.period())
                .collect()
        };
        assert!(
            periods_of(least).contains(&row.period),
            "k={least} should attain period {}",
            row.period
        );
        for k in 1..least {
            assert!(
                !periods_of(k).contains(&row.period),
                "period {} already attained at k={k} < {least}",
                row.period
            );
        }
    }
}

/// The two runs that overshoot k exist and are exactly the known ones.
#[test]
fn known_prime_run_anomalies() {
    let t = table();
    // k = 1: the cycle 2, 3, 4 puts primes 2 and 3 adjacent.
    let c1 = analyze(2, 1, t, DEFAULT_MAX_STEPS).unwrap().cycle;
    assert_eq!(c1.elements(), &[2, 3, 4]);
    assert_eq!(longest_prime_run(c1.elements(), t), 2);
    // k = 2: the cycle 3, 5, 7, 9 carries a run of three primes.
    let c2 = analyze(3, 2, t, DEFAULT_MAX_STEPS).unwrap().cycle;
    assert_eq!(c2.elements(), &[3, 5, 7, 9]);
    assert_eq!(longest_prime_run(c2.elements(), t), 3);
    // For k >= 3 no run may exceed k; spot-check the tightest small cases.
    for (x0, k) in [(2u64, 3u64), (3, 4), (5, 6), (5, 4), (7, 6)] {
        let r = analyze(x0, k, t, DEFAULT_MAX_STEPS).unwrap();
        let terms = orbit_prefix(x0, k, t, r.stopping_time + r.period).unwrap();
        assert!(longest_prime_run(&terms, t) as u64 <= k, "x0={x0} k={k}");
    }
}

#[test]
fn found_progressions_satisfy_primorial_divisibility() {
    let t = table();
    let mut found = Vec::new();
    for length in 2..=8u32 {
        if let Some(ap) = find_prime_ap(length, 1_000, 10_000, t).unwrap() {
            assert!(
                stopping_time_demo(&ap, t).unwrap().stopping_time >= length as usize,
                "length={length}"
            );
            found.push(ap);
        }
    }
    assert_eq!(found.len() as u32, 7);
    let report = verify_primorial_lemma(&found);
    assert!(report.passed(), "violations: {:?}", report.violations);
}

proptest! {
    #[test]
    fn phi_has_no_fixed_points(x in 2u64..=100_000, k in 1u64..=100) {
        let t = table();
        prop_assert_ne!(phi(x, k, t).unwrap(), x);
    }

    #[test]
    fn composite_descent(x in 4u64..=1_000_000, k in 1u64..=100) {
        let t = table();
        prop_assume!(!is_prime(x, Some(t)));
        let y = phi(x, k, t).unwrap();
        prop_assert!(y < x);
        prop_assert!(is_prime(y, Some(t)));
    }

    #[test]
    fn orbit_prime_runs_bounded(x0 in 2u64..=50_000, k in 1u64..=100) {
        let t = table();
        let record = analyze(x0, k, t, DEFAULT_MAX_STEPS).unwrap();
        // One extra cycle pass so runs wrapping around the loop are seen.
        let terms = orbit_prefix(x0, k, t, record.stopping_time + record.period).unwrap();
        prop_assert!(longest_prime_run(&terms, t) as u64 <= max_prime_run(k));
    }

    #[test]
    fn analyze_is_consistent_with_replay(x0 in 2u64..=50_000, k in 1u64..=100) {
        let t = table();
        let r = analyze(x0, k, t, DEFAULT_MAX_STEPS).unwrap();
        prop_assert_eq!(r.stopping_time, r.preperiod + r.period);
        prop_assert!(r.period >= 2);
        let replay = orbit_prefix(x0, k, t, r.stopping_time + 1).unwrap();
        prop_assert_eq!(&replay[..r.preperiod], r.prefix.as_slice());
        prop_assert_eq!(replay[r.stopping_time], replay[r.preperiod]);
        // All stopping_time values distinct.
        let mut seen = replay[..r.stopping_time].to_vec();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(seen.len(), r.stopping_time);
    }

    #[test]
    fn canonicalization_is_rotation_invariant(
        x0 in 2u64..=50_000,
        k in 1u64..=100,
        rot in 0usize..32,
    ) {
        let t = table();
        let cycle = analyze(x0, k, t, DEFAULT_MAX_STEPS).unwrap().cycle;
        let mut rotated = cycle.elements().to_vec();
        let shift = rot % rotated.len();
        rotated.rotate_left(shift);
        let canon = canonicalize_loop(&rotated, k, t).unwrap();
        prop_assert_eq!(&canon, &cycle);
        // Idempotence.
        let again = canonicalize_loop(canon.elements(), k, t).unwrap();
        prop_assert_eq!(&again, &cycle);
    }

    #[test]
    fn loops_mix_primes_and_composites(x0 in 2u64..=50_000, k in 1u64..=100) {
        let t = table();
        let cycle = analyze(x0, k, t, DEFAULT_MAX_STEPS).unwrap().cycle;
        let primes = cycle.elements().iter().filter(|&&x| is_prime(x, Some(t))).count();
        prop_assert!(primes >= 1);
        prop_assert!(primes < cycle.period());
        // The prime run bound holds cyclically as well.
        let mut doubled = cycle.elements().to_vec();
        doubled.extend_from_slice(cycle.elements());
        prop_assert!(longest_prime_run(&doubled, t) as u64 <= max_prime_run(k));
    }

    #[test]
    fn catalog_modes_are_nested(k in 1u64..=60) {
        let t = table();
        let safe = enumerate_loops(k, t, BoundMode::Safe).unwrap().loops;
        let paper = enumerate_loops(k, t, BoundMode::Paper).unwrap().loops;
        let remark = enumerate_loops(k, t, BoundMode::Remark).unwrap().loops;
        prop_assert!(paper.iter().all(|l| safe.contains(l)));
        prop_assert!(remark.iter().all(|l| paper.contains(l)));
    }
}
