//! The iterated map and its orbit structure.
//!
//! For a fixed shift `k >= 1` the map sends a prime `x` to `x + k` and a
//! composite `x` to its largest prime factor. Primes strictly increase,
//! composites strictly decrease, so the map has no fixed points and every
//! orbit eventually falls into a cycle of length at least 2.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numtheory::{is_prime, largest_prime_factor, FactorTable};

/// Defensive iteration cap for [`analyze`]; orders of magnitude above any
/// observed orbit length, so exceeding it indicates a defect.
pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

/// A cycle of the map for a fixed `k`, stored in map order and rotated so the
/// minimal element comes first. Two rotations of the same cycle canonicalize
/// to the same `Loop`, so equality on `Loop` is loop identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loop {
    elements: Vec<u64>,
    k: u64,
}

impl Loop {
    /// The cycle in map order, minimal element first.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Cycle length; always at least 2 since the map has no fixed points.
    pub fn period(&self) -> usize {
        self.elements.len()
    }

    pub fn min_element(&self) -> u64 {
        self.elements[0]
    }

    /// Smallest prime among the elements. Every genuine cycle contains at
    /// least one prime (an all-composite cycle would strictly decrease).
    pub fn min_prime(&self, table: &FactorTable) -> Option<u64> {
        self.elements
            .iter()
            .copied()
            .filter(|&x| is_prime(x, Some(table)))
            .min()
    }
}

/// Full analysis of one orbit: the non-cyclic prefix, the cycle it falls
/// into, and the three counts describing the shape.
///
/// `stopping_time` is the number of distinct orbit values and always equals
/// `preperiod + period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryRecord {
    pub x0: u64,
    pub k: u64,
    /// Terms before the first cycle element.
    pub preperiod: usize,
    /// Minimal cycle length.
    pub period: usize,
    /// Count of distinct values in the orbit.
    pub stopping_time: usize,
    /// The cycle, canonicalized.
    pub cycle: Loop,
    /// The `preperiod` values preceding the cycle, in orbit order.
    pub prefix: Vec<u64>,
}

/// One application of the map: `x + k` for prime `x`, largest prime factor
/// for composite `x`. Errors on `x < 2` and on overflow of `x + k`.
pub fn phi(x: u64, k: u64, table: &FactorTable) -> Result<u64> {
    if x < 2 {
        return Err(Error::OutsideDomain(x));
    }
    if k == 0 {
        return Err(Error::ZeroShift);
    }
    if is_prime(x, Some(table)) {
        x.checked_add(k).ok_or(Error::Overflow { op: "prime shift" })
    } else {
        largest_prime_factor(x, table)
    }
}

/// The first `n` orbit terms starting at `x0` (the start value included).
pub fn orbit_prefix(x0: u64, k: u64, table: &FactorTable, n: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "an orbit prefix needs at least one term".into(),
        ));
    }
    let mut terms = Vec::with_capacity(n);
    let mut x = x0;
    if x < 2 {
        return Err(Error::OutsideDomain(x));
    }
    terms.push(x);
    while terms.len() < n {
        x = phi(x, k, table)?;
        terms.push(x);
    }
    Ok(terms)
}

/// Rotate a genuine cycle so its minimal element comes first.
///
/// Verifies distinctness and closure (each value must map to the next,
/// cyclically); rotations of the same cycle canonicalize identically.
pub fn canonicalize_loop(cycle_values: &[u64], k: u64, table: &FactorTable) -> Result<Loop> {
    if cycle_values.is_empty() {
        return Err(Error::InvalidCycle);
    }
    let mut sorted = cycle_values.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidCycle);
    }
    let len = cycle_values.len();
    for i in 0..len {
        let expected = cycle_values[(i + 1) % len];
        let actual = phi(cycle_values[i], k, table)?;
        if actual != expected {
            return Err(Error::NotACycle {
                value: cycle_values[i],
                actual,
                expected,
            });
        }
    }
    let min_pos = cycle_values
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .map(|(i, _)| i)
        .expect("nonempty");
    let mut elements = cycle_values.to_vec();
    elements.rotate_left(min_pos);
    Ok(Loop { elements, k })
}

/// Iterate the map from `x0` until a value repeats, recording every value
/// with its index. The first repeat pins down preperiod, minimal period, and
/// stopping time in a single pass.
///
/// Termination is guaranteed mathematically; `max_steps` is a defensive bound
/// whose violation is reported as an error rather than looping forever.
pub fn analyze(x0: u64, k: u64, table: &FactorTable, max_steps: u64) -> Result<TrajectoryRecord> {
    let mut first_index: HashMap<u64, usize> = HashMap::new();
    let mut values: Vec<u64> = Vec::new();
    let mut x = x0;
    loop {
        if let Some(&i) = first_index.get(&x) {
            let j = values.len();
            let cycle = canonicalize_loop(&values[i..j], k, table)?;
            return Ok(TrajectoryRecord {
                x0,
                k,
                preperiod: i,
                period: j - i,
                stopping_time: j,
                cycle,
                prefix: values[..i].to_vec(),
            });
        }
        if values.len() as u64 >= max_steps {
            return Err(Error::IterationBudget { x0, k, max_steps });
        }
        first_index.insert(x, values.len());
        values.push(x);
        x = phi(x, k, table)?;
    }
}
