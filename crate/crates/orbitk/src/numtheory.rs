//! Prime generation, primality testing, factorization, and primorials.
//!
//! The centerpiece is [`FactorTable`], a smallest-prime-factor sieve shared
//! read-only by every other module. Queries above the table limit fall back to
//! trial division by the sieved primes and then a Pollard rho split, so all
//! operations are total over `u64` (modulo explicit overflow errors).

use crate::error::{Error, Result};

/// Smallest-prime-factor table over `[2, limit]`, plus the ascending list of
/// primes up to `limit` as a byproduct of the linear sieve.
///
/// Immutable after construction and safe to share across threads.
pub struct FactorTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl FactorTable {
    /// Sieve smallest prime factors for every integer in `[2, limit]`.
    ///
    /// Fails with a resource error when the backing array cannot be allocated
    /// (entries are 4 bytes each) or when `limit` exceeds `u32::MAX`.
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::LimitTooSmall(limit));
        }
        let bytes = (limit + 1).saturating_mul(4);
        if limit > u32::MAX as u64 {
            return Err(Error::TableAllocation { limit, bytes });
        }
        let n = limit as usize;
        let mut spf: Vec<u32> = Vec::new();
        spf.try_reserve_exact(n + 1)
            .map_err(|_| Error::TableAllocation { limit, bytes })?;
        spf.resize(n + 1, 0);
        let mut primes: Vec<u32> = Vec::new();

        // Linear sieve: each composite is struck exactly once, by its
        // smallest prime factor.
        for f in 2..=n {
            if spf[f] == 0 {
                spf[f] = f as u32;
                primes.push(f as u32);
            }
            let spf_f = spf[f];
            for &p in &primes {
                if p > spf_f {
                    break;
                }
                let m = p as usize * f;
                if m > n {
                    break;
                }
                spf[m] = p;
            }
        }

        Ok(FactorTable { limit, spf, primes })
    }

    /// Largest value the table can answer for directly.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n`, for `2 <= n <= limit`.
    pub fn smallest_prime_factor(&self, n: u64) -> Result<u64> {
        if n < 2 {
            return Err(Error::OutsideDomain(n));
        }
        if n > self.limit {
            return Err(Error::LimitExceedsTable {
                requested: n,
                limit: self.limit,
            });
        }
        Ok(self.spf[n as usize] as u64)
    }

    #[inline]
    fn spf_unchecked(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    /// Ascending primes `<= bound` as a slice into the sieved prime list.
    pub(crate) fn prime_seeds(&self, bound: u64) -> Result<&[u32]> {
        if bound > self.limit {
            return Err(Error::LimitExceedsTable {
                requested: bound,
                limit: self.limit,
            });
        }
        let end = self.primes.partition_point(|&p| p as u64 <= bound);
        Ok(&self.primes[..end])
    }
}

/// Primality test: a table lookup when `n` is in range, otherwise a
/// deterministic Miller-Rabin test valid for all of `u64`.
pub fn is_prime(n: u64, table: Option<&FactorTable>) -> bool {
    if let Some(t) = table {
        if (2..=t.limit).contains(&n) {
            return t.spf_unchecked(n) == n;
        }
    }
    is_prime_u64(n)
}

/// Largest prime dividing `n`; returns `n` itself when `n` is prime.
///
/// Values `<= table.limit` are resolved by repeated smallest-prime-factor
/// division. Above the table, trial division by the sieved primes strips the
/// small part and a Pollard rho split handles whatever cofactor remains.
pub fn largest_prime_factor(n: u64, table: &FactorTable) -> Result<u64> {
    if n < 2 {
        return Err(Error::OutsideDomain(n));
    }
    if n <= table.limit {
        let mut m = n;
        let mut largest = 0;
        while m > 1 {
            let p = table.spf_unchecked(m);
            largest = largest.max(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        return Ok(largest);
    }
    if is_prime_u64(n) {
        return Ok(n);
    }
    let mut m = n;
    let mut largest = 0;
    for &p in &table.primes {
        let p = p as u64;
        if p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            largest = largest.max(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
    }
    if m > 1 {
        largest = largest.max(largest_prime_factor_generic(m));
    }
    Ok(largest)
}

/// Ascending list of all primes `<= limit`; `limit` must not exceed the table.
pub fn primes_up_to(limit: u64, table: &FactorTable) -> Result<Vec<u64>> {
    if limit < 2 {
        return Err(Error::OutsideDomain(limit));
    }
    Ok(table
        .prime_seeds(limit)?
        .iter()
        .map(|&p| p as u64)
        .collect())
}

/// Primorial `n#`: the product of all primes `<= n` (1 when `n = 1`).
///
/// Overflow of the 64-bit product is reported, never wrapped.
pub fn primorial(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "primorial is defined for n >= 1".into(),
        ));
    }
    let mut product: u64 = 1;
    for p in 2..=n {
        if is_prime_u64(p) {
            product = product
                .checked_mul(p)
                .ok_or(Error::Overflow { op: "primorial" })?;
        }
    }
    Ok(product)
}

/// An arithmetic progression of primes: `first + i * difference` is prime for
/// all `0 <= i < length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeAP {
    first: u64,
    difference: u64,
    length: u32,
}

impl PrimeAP {
    /// Validate and construct; every term must be prime and fit in `u64`.
    pub fn new(
        first: u64,
        difference: u64,
        length: u32,
        table: Option<&FactorTable>,
    ) -> Result<Self> {
        if length < 2 {
            return Err(Error::InvalidInput(
                "a prime arithmetic progression needs at least 2 terms".into(),
            ));
        }
        if difference == 0 {
            return Err(Error::InvalidInput(
                "the common difference must be positive".into(),
            ));
        }
        for i in 0..length as u64 {
            let term = i
                .checked_mul(difference)
                .and_then(|d| first.checked_add(d))
                .ok_or(Error::Overflow {
                    op: "prime AP term",
                })?;
            if !is_prime(term, table) {
                return Err(Error::InvalidInput(format!(
                    "term {term} (index {i}) of the progression is not prime"
                )));
            }
        }
        Ok(PrimeAP {
            first,
            difference,
            length,
        })
    }

    pub(crate) fn from_verified_parts(first: u64, difference: u64, length: u32) -> Self {
        PrimeAP {
            first,
            difference,
            length,
        }
    }

    pub fn first(&self) -> u64 {
        self.first
    }

    pub fn difference(&self) -> u64 {
        self.difference
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    /// The terms in order.
    pub fn terms(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.length as u64).map(move |i| self.first + i * self.difference)
    }
}

// ---------------------------------------------------------------------------
// u64 primality and factorization without a table.

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc: u64 = 1;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Witnesses making Miller-Rabin deterministic for every n < 2^64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test for any `u64`.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    // Anything composite below 41^2 has been caught above.
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// One Pollard rho round (Floyd cycle finding) with polynomial x^2 + c.
fn rho_round(n: u64, c: u64) -> Option<u64> {
    let step = |x: u64| add_mod(mul_mod(x, x, n), c, n);
    let mut x: u64 = 2;
    let mut y: u64 = 2;
    loop {
        x = step(x);
        y = step(step(y));
        if x == y {
            return None;
        }
        let d = gcd(x.abs_diff(y), n);
        if d > 1 {
            return (d < n).then_some(d);
        }
    }
}

/// Some nontrivial factor of a composite `n`. Deterministic: the polynomial
/// offset increases until a round succeeds.
fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1.. {
        if let Some(d) = rho_round(n, c) {
            return d;
        }
    }
    unreachable!("every composite splits for some polynomial offset")
}

/// Largest prime factor of `n >= 2` with no table assistance.
fn largest_prime_factor_generic(n: u64) -> u64 {
    if is_prime_u64(n) {
        return n;
    }
    let d = pollard_rho(n);
    largest_prime_factor_generic(d).max(largest_prime_factor_generic(n / d))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: plain trial division.
    fn trial_spf(n: u64) -> u64 {
        assert!(n >= 2);
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return d;
            }
            d += 1;
        }
        n
    }

    fn trial_is_prime(n: u64) -> bool {
        n >= 2 && trial_spf(n) == n
    }

    fn trial_largest_prime_factor(mut n: u64) -> u64 {
        let mut largest = 0;
        while n > 1 {
            let p = trial_spf(n);
            largest = p;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        largest
    }

    #[test]
    fn spf_small_examples() {
        let t = FactorTable::build(100).unwrap();
        assert_eq!(t.smallest_prime_factor(4).unwrap(), 2);
        assert_eq!(t.smallest_prime_factor(9).unwrap(), 3);
        assert_eq!(t.smallest_prime_factor(7).unwrap(), 7);
        assert_eq!(t.smallest_prime_factor(91).unwrap(), 7);
        assert_eq!(t.smallest_prime_factor(55).unwrap(), 5);
    }

    #[test]
    fn spf_matches_trial_division() {
        let t = FactorTable::build(20_000).unwrap();
        for n in 2..=20_000u64 {
            assert_eq!(t.smallest_prime_factor(n).unwrap(), trial_spf(n), "n={n}");
        }
    }

    #[test]
    fn spf_domain_errors() {
        let t = FactorTable::build(10).unwrap();
        assert!(matches!(
            t.smallest_prime_factor(1),
            Err(Error::OutsideDomain(1))
        ));
        assert!(matches!(
            t.smallest_prime_factor(11),
            Err(Error::LimitExceedsTable { .. })
        ));
        assert!(matches!(FactorTable::build(1), Err(Error::LimitTooSmall(1))));
    }

    #[test]
    fn is_prime_basics() {
        let t = FactorTable::build(100).unwrap();
        assert!(is_prime(2, Some(&t)));
        assert!(!is_prime(1, Some(&t)));
        assert!(!is_prime(0, Some(&t)));
        assert!(!is_prime(55, Some(&t)));
        // 2089 closes the length-10 progression starting at 199.
        assert!(trial_is_prime(2089));
        assert!(is_prime(2089, Some(&t)));
        assert!(is_prime(2089, None));
    }

    #[test]
    fn is_prime_agrees_with_trial_division() {
        let t = FactorTable::build(5_000).unwrap();
        for n in 0..=5_000u64 {
            assert_eq!(is_prime(n, Some(&t)), trial_is_prime(n), "n={n}");
            assert_eq!(is_prime(n, None), trial_is_prime(n), "n={n} (no table)");
        }
    }

    #[test]
    fn miller_rabin_known_values() {
        assert!(is_prime_u64((1 << 61) - 1)); // Mersenne prime
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime_u64(u64::MAX));
    }

    #[test]
    fn largest_prime_factor_examples() {
        let t = FactorTable::build(100).unwrap();
        assert_eq!(largest_prime_factor(55, &t).unwrap(), 11);
        assert_eq!(largest_prime_factor(28, &t).unwrap(), 7);
        assert_eq!(largest_prime_factor(4, &t).unwrap(), 2);
        assert_eq!(largest_prime_factor(9, &t).unwrap(), 3);
        assert_eq!(largest_prime_factor(97, &t).unwrap(), 97);
        assert!(matches!(
            largest_prime_factor(1, &t),
            Err(Error::OutsideDomain(1))
        ));
    }

    #[test]
    fn largest_prime_factor_above_table() {
        let t = FactorTable::build(100).unwrap();
        // 9991 = 97 * 103: trial division finds 97, the cofactor is prime.
        assert_eq!(largest_prime_factor(9991, &t).unwrap(), 103);
        // 10403 = 101 * 103: both factors above the table, Pollard rho splits.
        assert_eq!(largest_prime_factor(10403, &t).unwrap(), 103);
        // A prime above the table is its own answer.
        assert_eq!(largest_prime_factor(104_729, &t).unwrap(), 104_729);
        for n in [101 * 101, 2 * 3 * 9973, 9973 * 9973, 1_000_003 * 7] {
            assert_eq!(
                largest_prime_factor(n, &t).unwrap(),
                trial_largest_prime_factor(n),
                "n={n}"
            );
        }
    }

    #[test]
    fn largest_prime_factor_matches_oracle() {
        let t = FactorTable::build(2_000).unwrap();
        for n in 2..=10_000u64 {
            assert_eq!(
                largest_prime_factor(n, &t).unwrap(),
                trial_largest_prime_factor(n),
                "n={n}"
            );
        }
    }

    #[test]
    fn primes_up_to_examples() {
        let t = FactorTable::build(100).unwrap();
        assert_eq!(primes_up_to(10, &t).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2, &t).unwrap(), vec![2]);
        assert_eq!(primes_up_to(30, &t).unwrap().len(), 10);
        assert!(matches!(
            primes_up_to(101, &t),
            Err(Error::LimitExceedsTable { .. })
        ));
    }

    #[test]
    fn primorial_values() {
        assert_eq!(primorial(1).unwrap(), 1);
        assert_eq!(primorial(2).unwrap(), 2);
        assert_eq!(primorial(3).unwrap(), 6);
        assert_eq!(primorial(4).unwrap(), 6);
        assert_eq!(primorial(5).unwrap(), 30);
        assert_eq!(primorial(9).unwrap(), 210);
        assert!(matches!(primorial(0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn primorial_overflow_is_an_error() {
        // The product of primes up to 47 still fits; including 53 does not.
        assert_eq!(primorial(47).unwrap(), 614_889_782_588_491_410);
        assert!(matches!(primorial(53), Err(Error::Overflow { .. })));
        assert!(matches!(primorial(1000), Err(Error::Overflow { .. })));
    }

    #[test]
    fn primorial_monotone_and_divisible() {
        let mut prev = 1;
        for n in 1..=47u64 {
            let v = primorial(n).unwrap();
            assert!(v >= prev, "n={n}");
            for p in 2..=n {
                if trial_is_prime(p) {
                    assert_eq!(v % p, 0, "{p} should divide {n}#");
                }
            }
            prev = v;
        }
    }

    #[test]
    fn prime_ap_validation() {
        let t = FactorTable::build(3_000).unwrap();
        let ap = PrimeAP::new(199, 210, 10, Some(&t)).unwrap();
        assert_eq!(ap.terms().last().unwrap(), 2089);
        assert!(PrimeAP::new(199, 210, 11, Some(&t)).is_err()); // 2299 = 11^2 * 19
        assert!(PrimeAP::new(4, 2, 2, Some(&t)).is_err());
        assert!(PrimeAP::new(3, 0, 2, Some(&t)).is_err());
        assert!(PrimeAP::new(3, 2, 1, Some(&t)).is_err());
    }
}
