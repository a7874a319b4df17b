//! Dynamics of the prime-shift / largest-prime-factor map family.
//!
//! For each positive shift `k`, iterate the map that sends a prime `x` to
//! `x + k` and a composite `x` to its largest prime factor. This crate
//! computes orbits with exact preperiod/period/stopping-time decomposition,
//! enumerates the complete (finite) set of loops per `k`, runs parameter
//! sweeps over ranges of `k`, and empirically verifies the descent and
//! divisibility facts the loop enumeration relies on.
//!
//! Modules:
//! - [`numtheory`]: smallest-prime-factor sieve, primality, factorization,
//!   primorials, and prime arithmetic progressions.
//! - [`dynamics`]: the map, orbit analysis, canonical loops.
//! - [`catalog`]: complete loop enumeration per `k` plus a brute-force
//!   oracle for cross-validation.
//! - [`experiments`]: sweeps and claim verifiers over parameter grids.
//!
//! All data structures are immutable after construction; sweeps parallelize
//! over `k` via rayon and produce output independent of the worker count.

pub mod catalog;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod numtheory;

pub use catalog::{
    brute_force_loops, enumerate_loops, loop_count, seed_bound, BoundMode, CatalogMode,
    LoopCatalog,
};
pub use dynamics::{
    analyze, canonicalize_loop, orbit_prefix, phi, Loop, TrajectoryRecord, DEFAULT_MAX_STEPS,
};
pub use error::{Error, Result};
pub use experiments::{
    find_prime_ap, least_k_for_periods, stopping_time_demo, sweep_loop_counts,
    verify_even_descent, verify_loop_prime_bound, verify_odd_lemma, verify_primorial_lemma,
    Claim, LoopBoundKind, PeriodRow, SweepRow, VerificationReport, Violation,
    DEFAULT_DESCENT_STEP_CAP,
};
pub use numtheory::{
    is_prime, largest_prime_factor, primes_up_to, primorial, FactorTable, PrimeAP,
};
