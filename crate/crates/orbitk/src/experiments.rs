//! Parameter sweeps and empirical verifiers.
//!
//! The two sweeps tabulate loop counts per `k` and the least `k` attaining
//! each period. The verifiers check the descent and divisibility claims the
//! loop theory rests on over concrete grids, reporting any counterexample
//! instance instead of asserting silently.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;

use crate::catalog::{enumerate_loops, seed_bound, BoundMode};
use crate::dynamics::{analyze, phi, TrajectoryRecord, DEFAULT_MAX_STEPS};
use crate::error::{Error, Result};
use crate::numtheory::{is_prime, largest_prime_factor, primorial, FactorTable, PrimeAP};

/// Default step budget for the even-descent verifier.
pub const DEFAULT_DESCENT_STEP_CAP: u64 = 1_000_000;

/// One row of the loops-per-k sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepRow {
    pub k: u64,
    pub num_loops: usize,
}

/// One row of the least-k-per-period sweep; `least_k` is absent when no
/// catalog within the searched range contains a loop of that period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodRow {
    pub period: usize,
    pub least_k: Option<u64>,
}

/// Which claim a verification report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    PrimorialDivisibility,
    OddDescent,
    EvenDescent,
    LoopPrimeBound,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::PrimorialDivisibility => "primorial-divisibility",
            Claim::OddDescent => "odd-descent",
            Claim::EvenDescent => "even-descent",
            Claim::LoopPrimeBound => "loop-prime-bound",
        })
    }
}

/// The two prime-entry bounds a loop can be checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoopBoundKind {
    /// `k^2 / 2`
    HalfKSquared,
    /// `k * sqrt(k) / 2`
    HalfKRootK,
}

impl fmt::Display for LoopBoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LoopBoundKind::HalfKSquared => "k^2/2",
            LoopBoundKind::HalfKRootK => "k*sqrt(k)/2",
        })
    }
}

/// A concrete counterexample instance found by a verifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    /// The progression's difference is not a multiple of `(length-1)#`.
    PrimorialDivisibility {
        first: u64,
        difference: u64,
        length: u32,
        required_divisor: u64,
    },
    /// For odd `k`, the second iterate of `p` failed to drop below `p`.
    OddDescent { k: u64, p: u64, reached: u64 },
    /// For even `k`, the orbit of `p` cycled without visiting a prime `< p`.
    EvenDescent { k: u64, p: u64 },
    /// A loop whose smallest prime entry exceeds the stated bound.
    LoopPrimeBound {
        k: u64,
        elements: Vec<u64>,
        min_prime: u64,
        bound: LoopBoundKind,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PrimorialDivisibility {
                first,
                difference,
                length,
                required_divisor,
            } => write!(
                f,
                "ap first={first} difference={difference} length={length}: \
                 difference is not a multiple of {required_divisor}"
            ),
            Violation::OddDescent { k, p, reached } => {
                write!(f, "k={k} p={p}: second iterate {reached} is not a prime below p")
            }
            Violation::EvenDescent { k, p } => {
                write!(f, "k={k} p={p}: orbit cycles without reaching a prime below p")
            }
            Violation::LoopPrimeBound {
                k,
                elements,
                min_prime,
                bound,
            } => {
                let loop_str = elements
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ");
                write!(f, "k={k} loop ({loop_str}): min prime {min_prime} exceeds {bound}")
            }
        }
    }
}

/// Outcome of checking one claim over a parameter grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub claim: Claim,
    pub grid: String,
    pub checked: u64,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    /// True when the claim held on the full grid.
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Loop counts for every `k` in `[k_min, k_max]`, in ascending `k` order
/// regardless of how the work is scheduled.
pub fn sweep_loop_counts(
    k_min: u64,
    k_max: u64,
    table: &FactorTable,
    mode: BoundMode,
) -> Result<Vec<SweepRow>> {
    if k_min < 1 || k_max < k_min {
        return Err(Error::InvalidInput(format!(
            "invalid k range [{k_min}, {k_max}]"
        )));
    }
    let required = seed_bound(k_max, mode);
    if required > table.limit() {
        return Err(Error::TableTooSmall {
            required,
            limit: table.limit(),
        });
    }
    (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            enumerate_loops(k, table, mode).map(|c| SweepRow {
                k,
                num_loops: c.len(),
            })
        })
        .collect()
}

/// For each period `l` in `[2, l_max]`, the least `k <= k_max` whose catalog
/// contains a loop of exactly that period.
///
/// Scans `k` ascending (in deterministic parallel chunks) and stops early
/// once every period is assigned.
pub fn least_k_for_periods(
    l_max: usize,
    k_max: u64,
    table: &FactorTable,
    mode: BoundMode,
) -> Result<Vec<PeriodRow>> {
    if l_max < 2 {
        return Err(Error::InvalidInput(
            "the period sweep needs l_max >= 2".into(),
        ));
    }
    if k_max < 1 {
        return Err(Error::InvalidInput("the period sweep needs k_max >= 1".into()));
    }
    let required = seed_bound(k_max, mode);
    if required > table.limit() {
        return Err(Error::TableTooSmall {
            required,
            limit: table.limit(),
        });
    }

    const CHUNK: u64 = 64;
    let mut least: Vec<Option<u64>> = vec![None; l_max + 1];
    let mut unfilled = l_max - 1;
    let mut k_lo = 1u64;
    while k_lo <= k_max && unfilled > 0 {
        let k_hi = k_lo.saturating_add(CHUNK - 1).min(k_max);
        let chunk: Vec<(u64, Vec<usize>)> = (k_lo..=k_hi)
            .into_par_iter()
            .map(|k| {
                enumerate_loops(k, table, mode)
                    .map(|c| (k, c.loops.iter().map(|l| l.period()).collect()))
            })
            .collect::<Result<_>>()?;
        for (k, periods) in chunk {
            for l in periods {
                if l <= l_max && least[l].is_none() {
                    least[l] = Some(k);
                    unfilled -= 1;
                }
            }
        }
        k_lo = k_hi + 1;
    }

    Ok((2..=l_max)
        .map(|period| PeriodRow {
            period,
            least_k: least[period],
        })
        .collect())
}

/// Smallest-difference, then smallest-first prime arithmetic progression of
/// the given length within the search box, if any.
///
/// Differences are restricted to multiples of `(length-1)#`, the divisibility
/// any such progression must satisfy; when that primorial already exceeds the
/// difference limit (or `u64`), no progression fits and the result is absent.
pub fn find_prime_ap(
    length: u32,
    difference_limit: u64,
    first_limit: u64,
    table: &FactorTable,
) -> Result<Option<PrimeAP>> {
    if length < 2 {
        return Err(Error::InvalidInput(
            "a prime arithmetic progression needs at least 2 terms".into(),
        ));
    }
    if first_limit > table.limit() {
        return Err(Error::TableTooSmall {
            required: first_limit,
            limit: table.limit(),
        });
    }
    let step = match primorial(length as u64 - 1) {
        Ok(s) => s,
        Err(Error::Overflow { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut difference = step;
    while difference <= difference_limit {
        for &p in table.prime_seeds(first_limit)? {
            let first = p as u64;
            let mut all_prime = true;
            for i in 1..length as u64 {
                let term = match i
                    .checked_mul(difference)
                    .and_then(|d| first.checked_add(d))
                {
                    Some(t) => t,
                    None => {
                        all_prime = false;
                        break;
                    }
                };
                if !is_prime(term, Some(table)) {
                    all_prime = false;
                    break;
                }
            }
            if all_prime {
                return Ok(Some(PrimeAP::from_verified_parts(first, difference, length)));
            }
        }
        difference = match difference.checked_add(step) {
            Some(d) => d,
            None => break,
        };
    }
    Ok(None)
}

/// Run the orbit of the progression's first term under its difference. The
/// progression terms are the first `length` orbit values, all distinct, so
/// the resulting stopping time is at least `length`.
pub fn stopping_time_demo(ap: &PrimeAP, table: &FactorTable) -> Result<TrajectoryRecord> {
    analyze(ap.first(), ap.difference(), table, DEFAULT_MAX_STEPS)
}

/// Check that each progression's difference is a multiple of `(length-1)#`.
pub fn verify_primorial_lemma(aps: &[PrimeAP]) -> VerificationReport {
    let mut violations = Vec::new();
    for ap in aps {
        let divisible = match primorial(ap.length() as u64 - 1) {
            Ok(required) => {
                if ap.difference() % required == 0 {
                    true
                } else {
                    violations.push(Violation::PrimorialDivisibility {
                        first: ap.first(),
                        difference: ap.difference(),
                        length: ap.length(),
                        required_divisor: required,
                    });
                    false
                }
            }
            // The required divisor exceeds u64, so no u64 difference can be
            // a multiple of it.
            Err(_) => false,
        };
        let _ = divisible;
    }
    VerificationReport {
        claim: Claim::PrimorialDivisibility,
        grid: format!("{} progressions", aps.len()),
        checked: aps.len() as u64,
        violations,
    }
}

/// For each odd `k >= 3` and prime `k < p <= p_limit`, check that `p + k` is
/// composite and its largest prime factor is below `p`.
pub fn verify_odd_lemma(
    k_values: &[u64],
    p_limit: u64,
    table: &FactorTable,
) -> Result<VerificationReport> {
    if let Some(&bad) = k_values.iter().find(|&&k| k < 3 || k % 2 == 0) {
        return Err(Error::InvalidInput(format!(
            "the odd-descent grid needs odd k >= 3, got {bad}"
        )));
    }
    if p_limit > table.limit() {
        return Err(Error::TableTooSmall {
            required: p_limit,
            limit: table.limit(),
        });
    }
    let per_k: Vec<(u64, Vec<Violation>)> = k_values
        .par_iter()
        .map(|&k| -> Result<(u64, Vec<Violation>)> {
            let mut checked = 0;
            let mut violations = Vec::new();
            for &p in table.prime_seeds(p_limit)? {
                let p = p as u64;
                if p <= k {
                    continue;
                }
                checked += 1;
                let shifted = p + k;
                if is_prime(shifted, Some(table)) {
                    violations.push(Violation::OddDescent {
                        k,
                        p,
                        reached: shifted,
                    });
                    continue;
                }
                let second = largest_prime_factor(shifted, table)?;
                if second >= p {
                    violations.push(Violation::OddDescent {
                        k,
                        p,
                        reached: second,
                    });
                }
            }
            Ok((checked, violations))
        })
        .collect::<Result<_>>()?;

    let mut checked = 0;
    let mut violations = Vec::new();
    for (c, v) in per_k {
        checked += c;
        violations.extend(v);
    }
    let grid = describe_k_grid("odd", k_values, "(k", p_limit);
    Ok(VerificationReport {
        claim: Claim::OddDescent,
        grid,
        checked,
        violations,
    })
}

/// For each even `k` and prime `p > k^2/2` up to `p_limit`, iterate the map
/// from `p` looking for a prime below `p`; record the pairs whose orbit
/// closes into a cycle without ever producing one.
pub fn verify_even_descent(
    k_values: &[u64],
    p_limit: u64,
    table: &FactorTable,
    step_cap: u64,
) -> Result<VerificationReport> {
    if let Some(&bad) = k_values.iter().find(|&&k| k < 2 || k % 2 == 1) {
        return Err(Error::InvalidInput(format!(
            "the even-descent grid needs even k >= 2, got {bad}"
        )));
    }
    if p_limit > table.limit() {
        return Err(Error::TableTooSmall {
            required: p_limit,
            limit: table.limit(),
        });
    }
    let per_k: Vec<(u64, Vec<Violation>)> = k_values
        .par_iter()
        .map(|&k| -> Result<(u64, Vec<Violation>)> {
            let mut checked = 0;
            let mut violations = Vec::new();
            let mut seen: HashSet<u64> = HashSet::new();
            for &p in table.prime_seeds(p_limit)? {
                let p = p as u64;
                // p > k^2/2, exactly.
                if 2 * (p as u128) <= (k as u128) * (k as u128) {
                    continue;
                }
                checked += 1;
                seen.clear();
                seen.insert(p);
                let mut x = p;
                // true: reached a prime below p; false: orbit closed a cycle.
                let mut outcome = None;
                for _ in 0..step_cap {
                    x = phi(x, k, table)?;
                    if x < p && is_prime(x, Some(table)) {
                        outcome = Some(true);
                        break;
                    }
                    if !seen.insert(x) {
                        outcome = Some(false);
                        break;
                    }
                }
                match outcome {
                    Some(true) => {}
                    Some(false) => violations.push(Violation::EvenDescent { k, p }),
                    None => {
                        return Err(Error::IterationBudget {
                            x0: p,
                            k,
                            max_steps: step_cap,
                        })
                    }
                }
            }
            Ok((checked, violations))
        })
        .collect::<Result<_>>()?;

    let mut checked = 0;
    let mut violations = Vec::new();
    for (c, v) in per_k {
        checked += c;
        violations.extend(v);
    }
    let grid = describe_k_grid("even", k_values, "(k^2/2", p_limit);
    Ok(VerificationReport {
        claim: Claim::EvenDescent,
        grid,
        checked,
        violations,
    })
}

/// For every `k` in the range, enumerate the loops and compare each loop's
/// smallest prime entry against both bounds; any loop whose smallest prime
/// exceeds a bound is reported against that bound.
pub fn verify_loop_prime_bound(
    k_min: u64,
    k_max: u64,
    table: &FactorTable,
) -> Result<VerificationReport> {
    if k_min < 1 || k_max < k_min {
        return Err(Error::InvalidInput(format!(
            "invalid k range [{k_min}, {k_max}]"
        )));
    }
    let required = seed_bound(k_max, BoundMode::Safe);
    if required > table.limit() {
        return Err(Error::TableTooSmall {
            required,
            limit: table.limit(),
        });
    }
    let per_k: Vec<(u64, Vec<Violation>)> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| -> Result<(u64, Vec<Violation>)> {
            let catalog = enumerate_loops(k, table, BoundMode::Safe)?;
            let mut violations = Vec::new();
            for l in &catalog.loops {
                let min_prime = l
                    .min_prime(table)
                    .expect("every cycle of the map contains a prime");
                let mp = min_prime as u128;
                let kk = k as u128;
                // min_prime > k^2/2
                if 2 * mp > kk * kk {
                    violations.push(Violation::LoopPrimeBound {
                        k,
                        elements: l.elements().to_vec(),
                        min_prime,
                        bound: LoopBoundKind::HalfKSquared,
                    });
                }
                // min_prime > k*sqrt(k)/2
                if 4 * mp * mp > kk * kk * kk {
                    violations.push(Violation::LoopPrimeBound {
                        k,
                        elements: l.elements().to_vec(),
                        min_prime,
                        bound: LoopBoundKind::HalfKRootK,
                    });
                }
            }
            Ok((catalog.len() as u64, violations))
        })
        .collect::<Result<_>>()?;

    let mut checked = 0;
    let mut violations = Vec::new();
    for (c, v) in per_k {
        checked += c;
        violations.extend(v);
    }
    Ok(VerificationReport {
        claim: Claim::LoopPrimeBound,
        grid: format!("loops of every k in [{k_min}, {k_max}], mode safe"),
        checked,
        violations,
    })
}

fn describe_k_grid(parity: &str, k_values: &[u64], lower: &str, p_limit: u64) -> String {
    match (k_values.first(), k_values.last()) {
        (Some(first), Some(last)) => format!(
            "{parity} k in [{first}, {last}] ({} values), primes p in {lower}, {p_limit}]",
            k_values.len()
        ),
        _ => format!("{parity} k: empty grid, primes p in {lower}, {p_limit}]"),
    }
}
