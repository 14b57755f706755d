//! Certified digamma evaluation at positive rationals.
//!
//! Evaluation shifts the argument up by the recurrence psi(x+1) = psi(x) + 1/x
//! until X = x + N clears a precision-dependent threshold, then sums the
//! real-axis asymptotic series
//!
//!   psi(X) = ln X - 1/(2X) - sum_{j>=1} B_{2j} / (2j X^{2j}) + R,
//!
//! whose truncation error R is bounded by, and has the sign of, the first
//! omitted term (the standard enveloping property on the positive real
//! axis, taken here as an axiom of the implementation and cross-validated
//! by an independent series route, see `digamma_diff` and the tests).
//! Everything except ln X is exact rational arithmetic, so the final
//! enclosure width is dominated by the stated truncation bound.
//!
//! `digamma_diff` computes psi(x+a) - psi(x) from the expansion
//! a * sum_{m>=0} 1/((x+m)(x+a+m)) with the telescoping tail bound
//! [0, a/(x+M-1)] after M exact terms; it is the second, independent
//! evaluation path.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bernoulli::bernoulli;
use crate::error::{Error, Result};
use crate::interval::{literal_enclosure, ln_rational, Enclosure};

/// Decimal digits of the Euler-Mascheroni constant; verified against the
/// series route in tests and against an external computation beforehand.
const GAMMA_LITERAL: &str = "0.57721566490153286060651209008240243104215933593992359880576723488486772677766467093694706329174674951463144724980708248096050401448654283622417399764492353625350033374293733773767394279259525824709491600873520395";

/// Precision guard for `gamma_const`.
pub const GAMMA_PREC_GUARD: u32 = 512;

/// Shift threshold: the series argument must reach at least this value.
/// The first omitted term floors near e^(-2 pi X) = 2^(-9.06 X), so X
/// scales linearly with the requested precision; 24 suffices through the
/// default 192 bits.
fn shift_threshold(prec: u32) -> i64 {
    24.max(((i64::from(prec) + 24) / 9) + 1)
}

/// Enclosure of the Euler-Mascheroni constant, width at most 2^(4 - prec).
pub fn gamma_const(prec: u32) -> Result<Enclosure> {
    if prec > GAMMA_PREC_GUARD {
        return Err(Error::PrecisionGuard {
            prec,
            guard: GAMMA_PREC_GUARD,
        });
    }
    Ok(literal_enclosure(GAMMA_LITERAL, prec))
}

/// Independent route to the same constant: gamma = -psi(1) through the
/// shifted asymptotic series. Used to validate the stored literal.
pub fn gamma_series(prec: u32) -> Enclosure {
    digamma(&BigRational::one(), prec)
        .expect("digamma(1) is in domain")
        .neg()
}

type DigammaMemo = Mutex<HashMap<(u64, u64, u32), Enclosure>>;

fn digamma_cache() -> &'static DigammaMemo {
    static CACHE: OnceLock<DigammaMemo> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Certified enclosure of psi(x) for rational x > 0.
///
/// Evaluations at small fractions repeat heavily across ordering scans, so
/// results are memoized per (x, prec) when the reduced fraction is small.
pub fn digamma(x: &BigRational, prec: u32) -> Result<Enclosure> {
    let key = match (x.numer().to_u64(), x.denom().to_u64()) {
        (Some(p), Some(q)) if p <= 1 << 20 && q <= 1 << 20 => Some((p, q, prec)),
        _ => None,
    };
    if let Some(k) = key {
        if let Some(hit) = digamma_cache().lock().unwrap().get(&k) {
            return Ok(hit.clone());
        }
    }
    let result = digamma_uncached(x, prec)?;
    if let Some(k) = key {
        digamma_cache().lock().unwrap().insert(k, result.clone());
    }
    Ok(result)
}

fn digamma_uncached(x: &BigRational, prec: u32) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("digamma requires x > 0, got {x}")));
    }
    let threshold = BigRational::from_integer(BigInt::from(shift_threshold(prec)));
    let shift_count = if x >= &threshold {
        0usize
    } else {
        let diff = (&threshold - x).ceil();
        diff.to_integer()
            .try_into()
            .expect("shift count fits usize")
    };
    let big_x = x + BigRational::from_integer(BigInt::from(shift_count as u64));

    // Exact rational part of the series at X = x + N.
    let inv_x = big_x.recip();
    let inv_x2 = &inv_x * &inv_x;
    let mut rational_part = -&inv_x / BigRational::from_integer(BigInt::from(2));
    let stop = BigRational::new(BigInt::one(), BigInt::one() << (prec as usize + 8));
    let mut pow = inv_x2.clone();
    let mut j = 1usize;
    let remainder;
    let mut prev_abs: Option<BigRational> = None;
    loop {
        let term = bernoulli(2 * j)? / BigRational::from_integer(BigInt::from(2 * j as u64)) * &pow;
        let term_abs = term.abs();
        if let Some(prev) = &prev_abs {
            assert!(
                &term_abs <= prev,
                "asymptotic series terms grew before reaching the target accuracy"
            );
        }
        if term_abs < stop {
            // Continuing the series would subtract a theta-fraction of this
            // term, theta in (0, 1): the truth lies between the partial sum
            // and the partial sum minus the first omitted term.
            remainder = term;
            break;
        }
        rational_part -= &term;
        prev_abs = Some(term_abs);
        pow *= &inv_x2;
        j += 1;
    }

    // Downward shift back to x: psi(x) = psi(X) - sum_{i<N} 1/(x+i).
    let mut shift_sum = BigRational::zero();
    for i in 0..shift_count {
        let xi = x + BigRational::from_integer(BigInt::from(i as u64));
        shift_sum += xi.recip();
    }

    let at_partial = &rational_part - &shift_sum;
    let at_omitted = &at_partial - &remainder;
    let series = Enclosure::from_rational_bounds(&at_partial, &at_omitted, prec + 16);
    let log_part = ln_rational(&big_x, prec + 16)?;
    Ok(log_part.add(&series).with_prec(prec))
}

/// Certified enclosure of psi(x + a) - psi(x) for rational a, x > 0 from
/// `m_terms` terms of the difference expansion.
///
/// Each term 1/((x+m)(x+a+m)) is an exact rational rounded outward into
/// the accumulating interval, so the partial sum is certified; the tail
/// after M terms telescopes to [0, a/(x+M-1)].
pub fn digamma_diff(
    a: &BigRational,
    x: &BigRational,
    m_terms: usize,
    prec: u32,
) -> Result<Enclosure> {
    if !a.is_positive() || !x.is_positive() {
        return Err(Error::Domain(
            "digamma_diff requires a > 0 and x > 0".into(),
        ));
    }
    if m_terms == 0 {
        return Err(Error::Domain(
            "digamma_diff requires at least one term".into(),
        ));
    }
    let wp = prec + 16;
    let xa = x + a;
    let mut lo = crate::interval::Dyadic::zero();
    let mut hi = crate::interval::Dyadic::zero();
    let mut d1 = x.clone();
    let mut d2 = xa;
    let one = BigRational::one();
    for _ in 0..m_terms {
        let term = (&d1 * &d2).recip();
        lo = lo.add(&crate::interval::Dyadic::from_rational(
            &term,
            wp,
            crate::interval::Round::Down,
        ));
        hi = hi.add(&crate::interval::Dyadic::from_rational(
            &term,
            wp,
            crate::interval::Round::Up,
        ));
        // Exact adds widen mantissas; keep them near the working precision.
        lo = lo.round_to(wp + 24, crate::interval::Round::Down);
        hi = hi.round_to(wp + 24, crate::interval::Round::Up);
        d1 += &one;
        d2 += &one;
    }
    let sum = Enclosure::from_endpoints(lo, hi, wp);
    // Tail (with the factor a already applied):
    // a * sum_{m>=M} 1/((x+m)(x+a+m)) <= a * sum 1/((x+m-1)(x+m)) = a/(x+M-1).
    let tail_hi = a / (x + BigRational::from_integer(BigInt::from(m_terms as u64 - 1)));
    let tail = Enclosure::from_rational_bounds(&BigRational::zero(), &tail_hi, wp);
    let a_enc = Enclosure::from_rational(a, wp);
    Ok(sum.mul(&a_enc).add(&tail).with_prec(prec))
}
