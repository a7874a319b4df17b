//! Complete loop catalogs for a fixed shift `k`.
//!
//! Every loop of the map contains a prime below a bound depending only on
//! `k`, so following the orbit of each prime seed below that bound discovers
//! every loop. [`brute_force_loops`] is the independent ground-truth oracle:
//! it analyzes every start value in a range instead of seeding by primes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynamics::{analyze, canonicalize_loop, phi, Loop, DEFAULT_MAX_STEPS};
use crate::error::{Error, Result};
use crate::numtheory::FactorTable;

/// Which prime-seed bound the enumeration trusts.
///
/// `Paper` is the bound from the finiteness argument (`ceil(k^2/2)`), `Remark`
/// its tightened variant (`ceil(k*sqrt(k)/2)`). `Safe`, the default, also
/// covers primes up to `2k`, which repairs the short-prime-run cases the
/// tighter bounds miss for small `k` (the `k = 2` cycle starting at 3 has no
/// prime at or below `k^2/2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BoundMode {
    #[default]
    Safe,
    Paper,
    Remark,
}

impl fmt::Display for BoundMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMode::Safe => "safe",
            BoundMode::Paper => "paper",
            BoundMode::Remark => "remark",
        })
    }
}

impl FromStr for BoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "safe" => Ok(BoundMode::Safe),
            "paper" => Ok(BoundMode::Paper),
            "remark" => Ok(BoundMode::Remark),
            other => Err(Error::InvalidInput(format!(
                "unknown bound mode '{other}' (expected safe, paper, or remark)"
            ))),
        }
    }
}

/// How a catalog was produced: seeded enumeration under a bound mode, or the
/// exhaustive start-value scan of the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogMode {
    Bounded(BoundMode),
    Exhaustive,
}

impl fmt::Display for CatalogMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogMode::Bounded(m) => m.fmt(f),
            CatalogMode::Exhaustive => f.write_str("exhaustive"),
        }
    }
}

/// All distinct loops of the map for one `k`, sorted by (minimal element,
/// length) so catalogs are reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopCatalog {
    pub k: u64,
    pub loops: Vec<Loop>,
    pub seed_bound_used: u64,
    pub seeds_processed: u64,
    pub mode: CatalogMode,
}

impl LoopCatalog {
    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    /// The canonical element lists, for set comparisons between catalogs.
    pub fn loop_sets(&self) -> Vec<&[u64]> {
        self.loops.iter().map(|l| l.elements()).collect()
    }
}

/// Exact ceiling of `k^2 / 2`.
fn half_square_ceil(k: u64) -> u64 {
    let v = (k as u128 * k as u128).div_ceil(2);
    u64::try_from(v).unwrap_or(u64::MAX)
}

/// Exact ceiling of `k * sqrt(k) / 2`: the least `m` with `4m^2 >= k^3`.
fn half_k_root_k_ceil(k: u64) -> u64 {
    let cube = (k as u128).pow(3);
    let mut m = cube.isqrt() / 2;
    while 4 * m * m < cube {
        m += 1;
    }
    u64::try_from(m).unwrap_or(u64::MAX)
}

/// Prime-seed bound for the enumeration: every loop of the map for this `k`
/// contains a prime at or below the returned value (in `Safe` mode).
pub fn seed_bound(k: u64, mode: BoundMode) -> u64 {
    match mode {
        BoundMode::Paper => half_square_ceil(k),
        BoundMode::Remark => half_k_root_k_ceil(k),
        BoundMode::Safe => half_square_ceil(k).max(k.saturating_mul(2)),
    }
}

/// Enumerate every distinct loop by following the orbit of each prime seed at
/// or below `seed_bound(k, mode)`.
///
/// Orbit values already attributed to a loop are memoized (up to twice the
/// seed bound), so later seeds stop at the first previously-seen value. The
/// returned catalog is sorted and independent of traversal order.
pub fn enumerate_loops(k: u64, table: &FactorTable, mode: BoundMode) -> Result<LoopCatalog> {
    enumerate_loops_impl(k, table, mode, true)
}

pub(crate) fn enumerate_loops_impl(
    k: u64,
    table: &FactorTable,
    mode: BoundMode,
    memoize: bool,
) -> Result<LoopCatalog> {
    if k == 0 {
        return Err(Error::ZeroShift);
    }
    let bound = seed_bound(k, mode);
    if bound > table.limit() {
        return Err(Error::TableTooSmall {
            required: bound,
            limit: table.limit(),
        });
    }

    // Dense memo: value -> loop id + 1, for values up to twice the bound.
    // Larger transient values are rare and simply not cached.
    let memo_cap = if memoize { bound.saturating_mul(2) } else { 0 };
    let mut memo: Vec<u32> = vec![0; memo_cap as usize + 1];

    let mut loops: Vec<Loop> = Vec::new();
    // A value belongs to exactly one cycle, so the canonical first element
    // identifies a loop within this k.
    let mut loop_ids: HashMap<u64, u32> = HashMap::new();
    let mut path: Vec<u64> = Vec::new();
    let mut path_pos: HashMap<u64, usize> = HashMap::new();
    let mut seeds_processed = 0u64;

    for &seed in table.prime_seeds(bound)? {
        seeds_processed += 1;
        path.clear();
        path_pos.clear();
        let mut x = seed as u64;
        let id = loop {
            if x <= memo_cap {
                let cached = memo[x as usize];
                if cached != 0 {
                    break cached - 1;
                }
            }
            if let Some(&pos) = path_pos.get(&x) {
                let cycle = canonicalize_loop(&path[pos..], k, table)?;
                let id = *loop_ids.entry(cycle.min_element()).or_insert_with(|| {
                    let id = loops.len() as u32;
                    loops.push(cycle);
                    id
                });
                break id;
            }
            path_pos.insert(x, path.len());
            path.push(x);
            x = phi(x, k, table)?;
        };
        for &v in &path {
            if v <= memo_cap {
                memo[v as usize] = id + 1;
            }
        }
    }

    loops.sort_unstable_by_key(|l| (l.min_element(), l.period()));
    Ok(LoopCatalog {
        k,
        loops,
        seed_bound_used: bound,
        seeds_processed,
        mode: CatalogMode::Bounded(mode),
    })
}

/// Ground-truth oracle: analyze every start value in `[2, x_max]` and collect
/// the distinct loops reached. Independent of the seeded enumeration path.
pub fn brute_force_loops(k: u64, x_max: u64, table: &FactorTable) -> Result<LoopCatalog> {
    if k == 0 {
        return Err(Error::ZeroShift);
    }
    if x_max < 2 {
        return Err(Error::OutsideDomain(x_max));
    }
    let mut loops = (2..=x_max)
        .into_par_iter()
        .map(|x| analyze(x, k, table, DEFAULT_MAX_STEPS).map(|r| r.cycle))
        .try_fold(Vec::new, |mut acc: Vec<Loop>, cycle: Result<Loop>| {
            let cycle = cycle?;
            if !acc.contains(&cycle) {
                acc.push(cycle);
            }
            Ok(acc)
        })
        .try_reduce(Vec::new, |mut a, b| {
            for l in b {
                if !a.contains(&l) {
                    a.push(l);
                }
            }
            Ok(a)
        })?;
    loops.sort_unstable_by_key(|l| (l.min_element(), l.period()));
    loops.dedup();
    Ok(LoopCatalog {
        k,
        loops,
        seed_bound_used: x_max,
        seeds_processed: x_max - 1,
        mode: CatalogMode::Exhaustive,
    })
}

/// Number of distinct loops for this `k`.
pub fn loop_count(k: u64, table: &FactorTable, mode: BoundMode) -> Result<usize> {
    Ok(enumerate_loops(k, table, mode)?.len())
}
