//! Exact arbitrary-precision counting for k-indivisible partitions.
//!
//! A partition is k-indivisible when none of its parts is divisible by k.
//! `build_pkx_table` expands the generating product
//! prod_{m >= 1, k !| m} (1 - q^m)^(-1) by the one-part-size-at-a-time
//! dynamic program. `d_exact` counts, across all k-indivisible partitions
//! of n, the parts congruent to r mod t, using the expansion
//! q^m/(1 - q^m) = sum_{j >= 1} q^(jm) against the table.
//!
//! `d_bruteforce` and `count_kregular_bruteforce` enumerate partitions
//! explicitly and exist as independent oracles for the table-driven path.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer used for all exact counts.
pub type BigNat = BigUint;

/// Default capacity limit for table construction.
pub const DEFAULT_N_CAP: usize = 1_000_000;

/// Guard for the explicit enumeration oracles.
pub const ENUMERATION_GUARD: usize = 60;

/// Memoized counts of k-indivisible partitions of 0..=n_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTable {
    k: u32,
    counts: Vec<BigNat>,
}

impl PartitionTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n_max(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[BigNat] {
        &self.counts
    }

    pub fn count(&self, n: usize) -> &BigNat {
        &self.counts[n]
    }

    /// Reassemble from raw parts (used by the table cache codec).
    pub fn from_raw(k: u32, counts: Vec<BigNat>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidQuery(format!("k must be >= 2, got {k}")));
        }
        if counts.is_empty() || !counts[0].is_one() {
            return Err(Error::InvalidQuery(
                "table must start with counts[0] = 1".into(),
            ));
        }
        Ok(PartitionTable { k, counts })
    }
}

/// A point query for D(r, t; n): parts congruent to r mod t among the
/// k-indivisible partitions of n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactQuery {
    pub k: u32,
    pub t: u32,
    pub r: u32,
    pub n: usize,
}

impl ExactQuery {
    pub fn new(k: u32, t: u32, r: u32, n: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidQuery(format!("k must be >= 2, got {k}")));
        }
        if t < 1 {
            return Err(Error::InvalidQuery("t must be >= 1".into()));
        }
        if r < 1 || r > t {
            return Err(Error::InvalidQuery(format!(
                "r must satisfy 1 <= r <= t, got r={r}, t={t}"
            )));
        }
        Ok(ExactQuery { k, t, r, n })
    }
}

/// Build the table of k-indivisible partition counts for 0..=n_max.
pub fn build_pkx_table(k: u32, n_max: usize) -> Result<PartitionTable> {
    build_pkx_table_with_cap(k, n_max, DEFAULT_N_CAP)
}

/// As [`build_pkx_table`] with an explicit capacity limit.
pub fn build_pkx_table_with_cap(k: u32, n_max: usize, cap: usize) -> Result<PartitionTable> {
    if k < 2 {
        return Err(Error::InvalidQuery(format!("k must be >= 2, got {k}")));
    }
    if n_max > cap {
        return Err(Error::CapacityExceeded { n_max, cap });
    }
    let mut counts = vec![BigNat::zero(); n_max + 1];
    counts[0] = BigNat::one();
    for m in 1..=n_max {
        if m % (k as usize) == 0 {
            continue;
        }
        for n in m..=n_max {
            let (done, rest) = counts.split_at_mut(n);
            rest[0] += &done[n - m];
        }
    }
    Ok(PartitionTable { k, counts })
}

fn check_table(q: &ExactQuery, table: &PartitionTable) -> Result<()> {
    if table.k != q.k || table.n_max() < q.n {
        return Err(Error::TableMismatch {
            table_k: table.k,
            table_n_max: table.n_max(),
            k: q.k,
            n: q.n,
        });
    }
    Ok(())
}

/// Total parts congruent to r mod t across all k-indivisible partitions of n.
///
/// Streams over pairs (m, j) with m allowed, m = r mod t, j*m <= n; memory
/// stays at the table itself.
pub fn d_exact(q: &ExactQuery, table: &PartitionTable) -> Result<BigNat> {
    check_table(q, table)?;
    let mut total = BigNat::zero();
    let k = q.k as usize;
    let t = q.t as usize;
    let r = q.r as usize % t;
    for m in 1..=q.n {
        if m % k == 0 || m % t != r {
            continue;
        }
        let mut jm = m;
        while jm <= q.n {
            total += &table.counts[q.n - jm];
            jm += m;
        }
    }
    Ok(total)
}

/// Total number of parts across all k-indivisible partitions of n.
pub fn total_parts(k: u32, n: usize, table: &PartitionTable) -> Result<BigNat> {
    let probe = ExactQuery { k, t: 1, r: 1, n };
    check_table(&probe, table)?;
    let mut total = BigNat::zero();
    for m in 1..=n {
        if m % (k as usize) == 0 {
            continue;
        }
        let mut jm = m;
        while jm <= n {
            total += &table.counts[n - jm];
            jm += m;
        }
    }
    Ok(total)
}

/// Independent oracle: enumerate every k-indivisible partition of n and
/// count parts congruent to r mod t directly.
pub fn d_bruteforce(q: &ExactQuery) -> Result<BigNat> {
    if q.n > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard {
            n: q.n,
            guard: ENUMERATION_GUARD,
        });
    }
    let k = q.k as usize;
    let t = q.t as usize;
    let r = q.r as usize % t;
    let mut total = BigNat::zero();
    // rec(remaining, max_part, matched so far)
    fn rec(
        rem: usize,
        max_part: usize,
        acc: usize,
        k: usize,
        t: usize,
        r: usize,
        total: &mut BigNat,
    ) {
        if rem == 0 {
            *total += BigNat::from(acc);
            return;
        }
        if max_part == 0 {
            return;
        }
        let m = max_part.min(rem);
        for part in (1..=m).rev() {
            if part % k == 0 {
                continue;
            }
            let hit = usize::from(part % t == r);
            let mut used = part;
            let mut mult = 1usize;
            while used <= rem {
                rec(rem - used, part - 1, acc + mult * hit, k, t, r, total);
                used += part;
                mult += 1;
            }
        }
    }
    rec(q.n, q.n, 0, k, t, r, &mut total);
    Ok(total)
}

/// Count partitions of n in which every part appears at most k - 1 times.
///
/// These are equinumerous with the k-indivisible partitions, which the
/// bijection tests exercise against `build_pkx_table`.
pub fn count_kregular_bruteforce(k: u32, n: usize) -> Result<BigNat> {
    if n > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard {
            n,
            guard: ENUMERATION_GUARD,
        });
    }
    if k < 2 {
        return Err(Error::InvalidQuery(format!("k must be >= 2, got {k}")));
    }
    let max_mult = (k - 1) as usize;
    fn rec(rem: usize, max_part: usize, max_mult: usize, total: &mut BigNat) {
        if rem == 0 {
            *total += BigNat::one();
            return;
        }
        if max_part == 0 {
            return;
        }
        let m = max_part.min(rem);
        for part in (1..=m).rev() {
            let mut used = part;
            let mut mult = 1usize;
            while used <= rem && mult <= max_mult {
                rec(rem - used, part - 1, max_mult, total);
                used += part;
                mult += 1;
            }
        }
    }
    let mut total = BigNat::zero();
    rec(n, n, max_mult, &mut total);
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> BigNat {
        BigNat::from(v)
    }

    #[test]
    fn table_base_cases() {
        let t = build_pkx_table(2, 0).unwrap();
        assert_eq!(t.counts(), &[nat(1)]);
        let t = build_pkx_table(2, 4).unwrap();
        // odd-part partitions of 4: 3+1, 1+1+1+1
        assert_eq!(t.count(4), &nat(2));
        assert_eq!(t.count(0), &nat(1));
    }

    #[test]
    fn table_k3_n6() {
        // partitions of 6 avoiding parts 3 and 6:
        // 5+1, 4+2, 4+1+1, 2+2+2, 2+2+1+1, 2+1^4, 1^6
        let t = build_pkx_table(3, 6).unwrap();
        assert_eq!(t.count(6), &nat(7));
        assert_eq!(
            count_kregular_bruteforce(3, 6).unwrap(),
            nat(7),
            "bijection with partitions repeating no part 3+ times"
        );
    }

    #[test]
    fn table_counts_positive() {
        for k in 2..=6u32 {
            let t = build_pkx_table(k, 40).unwrap();
            for n in 0..=40usize {
                assert!(!t.count(n).is_zero(), "counts[{n}] must be >= 1 for k={k}");
            }
        }
    }

    #[test]
    fn capacity_guard() {
        let err = build_pkx_table_with_cap(2, 1001, 1000).unwrap_err();
        assert!(matches!(err, Error::CapacityExceeded { .. }));
    }

    #[test]
    fn d_exact_examples() {
        let t2 = build_pkx_table(2, 10).unwrap();
        // partitions of 4 with odd parts: {3+1, 1^4}; parts = 1 mod 3: five of them
        let q = ExactQuery::new(2, 3, 1, 4).unwrap();
        assert_eq!(d_exact(&q, &t2).unwrap(), nat(5));
        // n = 0: the empty partition has no parts
        let q0 = ExactQuery::new(2, 3, 1, 0).unwrap();
        assert_eq!(d_exact(&q0, &t2).unwrap(), nat(0));
        // 3-indivisible partitions of 2: {2, 1+1}; exactly one part is 2 mod 4
        let t3 = build_pkx_table(3, 4).unwrap();
        let q2 = ExactQuery::new(3, 4, 2, 2).unwrap();
        assert_eq!(d_exact(&q2, &t3).unwrap(), nat(1));
        assert_eq!(d_bruteforce(&q2).unwrap(), nat(1));
    }

    #[test]
    fn d_exact_table_mismatch() {
        let t2 = build_pkx_table(2, 5).unwrap();
        let q = ExactQuery::new(3, 4, 1, 4).unwrap();
        assert!(matches!(d_exact(&q, &t2), Err(Error::TableMismatch { .. })));
        let q_big = ExactQuery::new(2, 4, 1, 6).unwrap();
        assert!(matches!(
            d_exact(&q_big, &t2),
            Err(Error::TableMismatch { .. })
        ));
    }

    #[test]
    fn total_parts_examples() {
        let t2 = build_pkx_table(2, 6).unwrap();
        // {3+1}: 2 parts, {1^4}: 4 parts
        assert_eq!(total_parts(2, 4, &t2).unwrap(), nat(6));
        assert_eq!(total_parts(2, 0, &t2).unwrap(), nat(0));
        let t5 = build_pkx_table(5, 3).unwrap();
        // all partitions of 3 are 5-indivisible: {3}, {2+1}, {1^3} -> 1+2+3 parts
        assert_eq!(total_parts(5, 3, &t5).unwrap(), nat(6));
    }

    #[test]
    fn bruteforce_examples() {
        let q = ExactQuery::new(2, 3, 1, 4).unwrap();
        assert_eq!(d_bruteforce(&q).unwrap(), nat(5));
        // n = 1: the only partition is (1)
        for t in 2..=6u32 {
            for r in 1..=t {
                let q = ExactQuery::new(3, t, r, 1).unwrap();
                let expect = if r % t == 1 % t { 1 } else { 0 };
                assert_eq!(d_bruteforce(&q).unwrap(), nat(expect));
            }
        }
        let q = ExactQuery::new(2, 7, 2, 8).unwrap();
        let table = build_pkx_table(2, 8).unwrap();
        assert_eq!(d_bruteforce(&q).unwrap(), d_exact(&q, &table).unwrap());
    }

    #[test]
    fn bruteforce_guard() {
        let q = ExactQuery::new(2, 3, 1, 61).unwrap();
        assert!(matches!(
            d_bruteforce(&q),
            Err(Error::EnumerationGuard { .. })
        ));
        assert!(matches!(
            count_kregular_bruteforce(2, 61),
            Err(Error::EnumerationGuard { .. })
        ));
    }

    #[test]
    fn kregular_examples() {
        // distinct-part partitions of 4: {4, 3+1}
        assert_eq!(count_kregular_bruteforce(2, 4).unwrap(), nat(2));
        assert_eq!(count_kregular_bruteforce(2, 0).unwrap(), nat(1));
    }

    #[test]
    fn t_equals_one_gives_total_parts() {
        let table = build_pkx_table(3, 25).unwrap();
        for n in 0..=25usize {
            let q = ExactQuery::new(3, 1, 1, n).unwrap();
            assert_eq!(
                d_exact(&q, &table).unwrap(),
                total_parts(3, n, &table).unwrap()
            );
        }
    }

    #[test]
    fn sum_over_residues_matches_total_parts() {
        for k in [2u32, 3, 5] {
            let table = build_pkx_table(k, 50).unwrap();
            for t in [2u32, 3, 7] {
                for n in [0usize, 1, 17, 50] {
                    let mut sum = BigNat::zero();
                    for r in 1..=t {
                        let q = ExactQuery::new(k, t, r, n).unwrap();
                        sum += d_exact(&q, &table).unwrap();
                    }
                    assert_eq!(sum, total_parts(k, n, &table).unwrap(), "k={k} t={t} n={n}");
                }
            }
        }
    }

    #[test]
    fn determinism_across_rebuilds() {
        let a = build_pkx_table(4, 200).unwrap();
        let b = build_pkx_table(4, 200).unwrap();
        assert_eq!(a, b);
        let q = ExactQuery::new(4, 5, 2, 200).unwrap();
        assert_eq!(d_exact(&q, &a).unwrap(), d_exact(&q, &b).unwrap());
    }
}
