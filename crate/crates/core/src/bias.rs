//! The second-order bias functional on residue classes and the orderings
//! it induces.
//!
//! For coprime k, t >= 2 and a residue 1 <= r <= t, the bias of r is
//!
//!   bias_{k,t}(r) = -psi(r/t) + (1/k) psi(rbar/t),
//!
//! where rbar in [1, t] represents k^(-1) r mod t. Residues with larger
//! bias eventually carry more parts among k-indivisible partitions, so
//! sorting residues by bias yields the most-common-to-least-common
//! ordering. Comparisons are certified: two residues are ordered only
//! when their enclosures separate strictly, escalating the working
//! precision by doubling up to a cap and reporting `Unresolved` (never a
//! silent tie-break) if separation still fails.
//!
//! `order_count` scans every admissible k up to the proven search bound
//! 6(t^2-1)/pi^2 (above it the ordering is provably natural), deduplicates
//! the orderings, and reports the atlas with witnesses and the minimum
//! certified gap seen, which is the empirical margin of the no-ties
//! hypothesis.

use std::cmp::Ordering as CmpOrdering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::digamma::digamma;
use crate::error::{Error, Result};
use crate::interval::{pi_const, Dyadic, Enclosure, Round, DEFAULT_PRECISION, PRECISION_CAP};

/// A coprime pair (k, t), both at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BiasKey {
    k: u32,
    t: u32,
}

impl BiasKey {
    pub fn new(k: u32, t: u32) -> Result<Self> {
        if k < 2 || t < 2 {
            return Err(Error::InvalidQuery(format!(
                "need k, t >= 2, got k={k}, t={t}"
            )));
        }
        if num_integer::gcd(u64::from(k), u64::from(t)) != 1 {
            return Err(Error::NotCoprime { k, t });
        }
        Ok(BiasKey { k, t })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn t(&self) -> u32 {
        self.t
    }
}

/// Euler's totient by trial factorization.
pub fn euler_phi(t: u32) -> u32 {
    let mut n = t;
    let mut result = t;
    let mut p = 2u32;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            result -= result / p;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The representative s in [1, t] with k s = r (mod t), by extended Euclid.
pub fn rbar(k: u32, t: u32, r: u32) -> Result<u32> {
    if r < 1 || r > t {
        return Err(Error::InvalidQuery(format!(
            "r must satisfy 1 <= r <= t, got r={r}, t={t}"
        )));
    }
    let (g, inv) = ext_gcd_inverse(i64::from(k), i64::from(t));
    if g != 1 {
        return Err(Error::NotCoprime { k, t });
    }
    let s = (inv * i64::from(r)).rem_euclid(i64::from(t)) as u32;
    Ok(if s == 0 { t } else { s })
}

/// Returns (gcd(a, m), a^(-1) mod m when the gcd is 1).
fn ext_gcd_inverse(a: i64, m: i64) -> (i64, i64) {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s.rem_euclid(m))
}

/// Bias value and its residue bookkeeping.
#[derive(Debug, Clone)]
pub struct ResidueBias {
    pub r: u32,
    pub rbar: u32,
    pub value: Enclosure,
}

/// Precomputed digamma enclosures psi(j/t) for j = 1..=t; they do not
/// depend on k, so one table serves a whole k-scan.
pub struct PsiTable {
    t: u32,
    prec: u32,
    values: Vec<Enclosure>,
}

impl PsiTable {
    pub fn new(t: u32, prec: u32) -> Result<Self> {
        let mut values = Vec::with_capacity(t as usize);
        for j in 1..=t {
            let x = BigRational::new(BigInt::from(j), BigInt::from(t));
            values.push(digamma(&x, prec)?);
        }
        Ok(PsiTable { t, prec, values })
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn psi(&self, j: u32) -> &Enclosure {
        &self.values[(j - 1) as usize]
    }

    /// bias_{k,t}(r) = -psi(r/t) + psi(rbar/t)/k from the cached values.
    pub fn bias(&self, key: &BiasKey, r: u32) -> Result<ResidueBias> {
        assert_eq!(key.t, self.t, "table modulus mismatch");
        let rb = rbar(key.k, key.t, r)?;
        let value = self.psi(r).neg().add(&self.psi(rb).div_u32(key.k));
        Ok(ResidueBias { r, rbar: rb, value })
    }
}

/// Enclosure of the bias functional at a single residue.
pub fn psi_kt(key: &BiasKey, r: u32, prec: u32) -> Result<Enclosure> {
    if r < 1 || r > key.t {
        return Err(Error::InvalidQuery(format!(
            "r must satisfy 1 <= r <= t, got r={r}"
        )));
    }
    let rb = rbar(key.k, key.t, r)?;
    let t = key.t;
    let psi_r = digamma(&BigRational::new(BigInt::from(r), BigInt::from(t)), prec)?;
    let psi_rb = digamma(&BigRational::new(BigInt::from(rb), BigInt::from(t)), prec)?;
    Ok(psi_r.neg().add(&psi_rb.div_u32(key.k)))
}

/// Outcome of a certified comparison of two residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// r is eventually strictly more common than s.
    Greater,
    /// r is eventually strictly less common than s.
    Less,
    /// Enclosures still overlap at the precision cap.
    Unresolved,
}

/// Compare residues r and s under the bias ordering, escalating precision
/// by doubling from `base_prec` to `cap_prec`.
pub fn compare_at(
    key: &BiasKey,
    r: u32,
    s: u32,
    base_prec: u32,
    cap_prec: u32,
) -> Result<Comparison> {
    if r == s {
        return Err(Error::InvalidQuery("compare requires r != s".into()));
    }
    let mut prec = base_prec;
    loop {
        let vr = psi_kt(key, r, prec)?;
        let vs = psi_kt(key, s, prec)?;
        if vr.strictly_above(&vs) {
            return Ok(Comparison::Greater);
        }
        if vs.strictly_above(&vr) {
            return Ok(Comparison::Less);
        }
        if prec >= cap_prec {
            return Ok(Comparison::Unresolved);
        }
        prec = (prec * 2).min(cap_prec);
    }
}

/// [`compare_at`] with the default precision ladder.
pub fn compare(key: &BiasKey, r: u32, s: u32) -> Result<Comparison> {
    compare_at(key, r, s, DEFAULT_PRECISION, PRECISION_CAP)
}

/// A most-common-first ordering of the residues 1..=t, with certification
/// status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ordering {
    pub key: (u32, u32),
    /// Residues from most common to least common.
    pub sequence: Vec<u32>,
    /// True iff all consecutive enclosures separated strictly.
    pub certified: bool,
    /// Residue pairs that stayed inseparable at the precision cap.
    pub unresolved_pairs: Vec<(u32, u32)>,
    /// Smallest certified gap between consecutive biases, when certified.
    pub min_gap: Option<Dyadic>,
}

fn ordering_from_table(key: &BiasKey, table: &PsiTable) -> Result<Ordering> {
    let t = key.t;
    let mut biases = Vec::with_capacity(t as usize);
    for r in 1..=t {
        biases.push(table.bias(key, r)?);
    }
    // Midpoint sort fixes the candidate sequence; adjacency certification
    // below makes it rigorous (consecutive separation implies the rest).
    biases.sort_by(|a, b| {
        b.value
            .midpoint()
            .cmp_dyadic(&a.value.midpoint())
            .then(a.r.cmp(&b.r))
    });
    let mut unresolved = Vec::new();
    let mut min_gap: Option<Dyadic> = None;
    for w in biases.windows(2) {
        if w[0].value.strictly_above(&w[1].value) {
            let gap = w[0].value.lo().sub(w[1].value.hi());
            if min_gap
                .as_ref()
                .is_none_or(|g| gap.cmp_dyadic(g) == CmpOrdering::Less)
            {
                min_gap = Some(gap);
            }
        } else {
            unresolved.push((w[0].r, w[1].r));
        }
    }
    let certified = unresolved.is_empty();
    Ok(Ordering {
        key: (key.k, key.t),
        sequence: biases.iter().map(|b| b.r).collect(),
        certified,
        unresolved_pairs: unresolved,
        min_gap: if certified { min_gap } else { None },
    })
}

/// Certified ordering with precision escalation.
pub fn ordering_at(key: &BiasKey, base_prec: u32, cap_prec: u32) -> Result<Ordering> {
    let mut prec = base_prec;
    loop {
        let table = PsiTable::new(key.t, prec)?;
        let ord = ordering_from_table(key, &table)?;
        if ord.certified || prec >= cap_prec {
            return Ok(ord);
        }
        prec = (prec * 2).min(cap_prec);
    }
}

/// [`ordering_at`] with the default precision ladder.
pub fn ordering(key: &BiasKey) -> Result<Ordering> {
    ordering_at(key, DEFAULT_PRECISION, PRECISION_CAP)
}

/// The deduplicated set of orderings over a k-scan for one modulus.
#[derive(Debug, Clone)]
pub struct OrderingAtlas {
    pub t: u32,
    pub k_max_searched: u32,
    /// sequence -> sorted witness values of k.
    pub entries: BTreeMap<Vec<u32>, Vec<u32>>,
    /// Number of distinct orderings.
    pub count: usize,
    /// Minimum certified adjacent gap over the whole scan.
    pub min_gap: Option<Dyadic>,
}

/// Smallest integer cap c >= 6(t^2 - 1)/pi^2, computed with an outward
/// pi so the scan bound is never undershot. Every coprime k >= c induces
/// the natural ordering.
pub fn search_cap(t: u32) -> u32 {
    let num = Dyadic::from_i64(6 * (i64::from(t) * i64::from(t) - 1));
    let pi = pi_const(96);
    let pi_sq_lo = pi.lo().mul(pi.lo());
    let ratio_hi = num.div(&pi_sq_lo, 96, Round::Up);
    let ceil = ratio_hi.to_rational().ceil();
    u32::try_from(ceil.to_integer()).expect("search cap fits u32")
}

/// Scan k in [2, cap] coprime to t, certify each ordering, insert the
/// natural ordering unconditionally, and return the atlas.
pub fn order_count_at(
    t: u32,
    k_cap_override: Option<u32>,
    base_prec: u32,
    cap_prec: u32,
) -> Result<OrderingAtlas> {
    if t < 2 {
        return Err(Error::InvalidQuery(format!(
            "order_count requires t >= 2, got {t}"
        )));
    }
    let cap = k_cap_override.unwrap_or_else(|| search_cap(t));
    let table = PsiTable::new(t, base_prec)?;
    let ks: Vec<u32> = (2..=cap)
        .filter(|k| num_integer::gcd(u64::from(*k), u64::from(t)) == 1)
        .collect();

    let compute = |k: &u32| -> Result<Ordering> {
        let key = BiasKey::new(*k, t)?;
        let ord = ordering_from_table(&key, &table)?;
        if ord.certified {
            Ok(ord)
        } else {
            // Rare path: redo this k alone on an escalating ladder.
            ordering_at(&key, table.prec() * 2, cap_prec)
        }
    };

    #[cfg(feature = "parallel")]
    let results: Vec<Ordering> = ks.par_iter().map(compute).collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Ordering> = ks.iter().map(compute).collect::<Result<_>>()?;

    let mut triples = Vec::new();
    for ord in &results {
        for (r, s) in &ord.unresolved_pairs {
            triples.push((ord.key.0, *r, *s));
        }
    }
    if !triples.is_empty() {
        return Err(Error::Unresolved {
            k: triples[0].0,
            t,
            pairs: triples.iter().map(|(_, r, s)| (*r, *s)).collect(),
        });
    }

    let mut entries: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
    let mut min_gap: Option<Dyadic> = None;
    for ord in results {
        if let Some(g) = &ord.min_gap {
            if min_gap
                .as_ref()
                .is_none_or(|m| g.cmp_dyadic(m) == CmpOrdering::Less)
            {
                min_gap = Some(g.clone());
            }
        }
        entries.entry(ord.sequence).or_default().push(ord.key.0);
    }
    // The natural ordering is attained by every coprime k past the scan
    // cap, so it belongs in the atlas even when no scanned k produced it.
    entries.entry((1..=t).collect()).or_default();
    for ks in entries.values_mut() {
        ks.sort_unstable();
    }
    let count = entries.len();
    Ok(OrderingAtlas {
        t,
        k_max_searched: cap,
        entries,
        count,
        min_gap,
    })
}

/// [`order_count_at`] with the default precision ladder.
pub fn order_count(t: u32, k_cap_override: Option<u32>) -> Result<OrderingAtlas> {
    order_count_at(t, k_cap_override, DEFAULT_PRECISION, PRECISION_CAP)
}
