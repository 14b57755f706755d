//! Elementary functions on enclosures: exp, ln, sqrt and the constants
//! pi and ln 2.
//!
//! Scalar kernels evaluate at a dyadic endpoint with an explicit truncation
//! bound, the monotone interval versions then combine the endpoint results.
//! Series tails are bounded in closed form:
//!   exp: sum_{i>N} |r|^i/i! <= 2 |r|^(N+1)/(N+1)!          for |r| <= 1,
//!   atanh: sum_{j>N} u^(2j+1)/(2j+1) <= (25/24) u^(2N+3)/(2N+3) for |u| <= 1/5,
//!   atan(1/n): alternating, partial sums bracket the limit.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Dyadic, Enclosure, Round};
use crate::error::{Error, Result};

const GUARD: u32 = 32;

/// Decimal digits of pi, used to seed enclosures at moderate precision.
/// Verified against two independent arctangent series (see tests).
const PI_LITERAL: &str = "3.1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679821480865132823066470938446095505822317253594081284811174502841027019385211055596446229489549303819644288109757";

/// Working precision beyond which constants are recomputed from series
/// instead of the stored literal.
const LITERAL_BITS: u32 = 640;

#[derive(PartialEq, Eq, Hash, Clone, Copy)]
enum ConstKind {
    Pi,
    Ln2,
}

fn const_cache() -> &'static Mutex<HashMap<(ConstKind, u32), Enclosure>> {
    static CACHE: OnceLock<Mutex<HashMap<(ConstKind, u32), Enclosure>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(kind: ConstKind, prec: u32, compute: impl FnOnce() -> Enclosure) -> Enclosure {
    if let Some(e) = const_cache().lock().unwrap().get(&(kind, prec)) {
        return e.clone();
    }
    let e = compute();
    const_cache()
        .lock()
        .unwrap()
        .insert((kind, prec), e.clone());
    e
}

/// Parse a plain decimal literal into an enclosure of half-width one unit
/// in the last stored digit.
pub fn literal_enclosure(s: &str, prec: u32) -> Enclosure {
    let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
    let digits: String = format!("{int_part}{frac_part}");
    let value = BigRational::new(
        digits.parse::<BigInt>().expect("malformed literal"),
        BigInt::from(10u32).pow(frac_part.len() as u32),
    );
    let slack = BigRational::new(
        BigInt::one(),
        BigInt::from(10u32).pow(frac_part.len() as u32),
    );
    Enclosure::from_rational_bounds(&(&value - &slack), &(&value + &slack), prec)
}

/// Enclosure of pi with width at most 2^(4 - prec).
pub fn pi_const(prec: u32) -> Enclosure {
    cached(ConstKind::Pi, prec, || {
        if prec <= LITERAL_BITS {
            literal_enclosure(PI_LITERAL, prec)
        } else {
            pi_machin(prec)
        }
    })
}

/// pi = 16 atan(1/5) - 4 atan(1/239).
pub fn pi_machin(prec: u32) -> Enclosure {
    let wp = prec + GUARD;
    let (lo5, hi5) = atan_recip_rational(5, wp);
    let (lo239, hi239) = atan_recip_rational(239, wp);
    let sixteen = BigRational::from_integer(BigInt::from(16));
    let four = BigRational::from_integer(BigInt::from(4));
    let lo = &sixteen * &lo5 - &four * &hi239;
    let hi = &sixteen * &hi5 - &four * &lo239;
    Enclosure::from_rational_bounds(&lo, &hi, prec)
}

/// pi = 24 atan(1/8) + 8 atan(1/57) + 4 atan(1/239); an independent check
/// of the Machin route and of the stored literal.
pub fn pi_stormer(prec: u32) -> Enclosure {
    let wp = prec + GUARD;
    let (lo8, hi8) = atan_recip_rational(8, wp);
    let (lo57, hi57) = atan_recip_rational(57, wp);
    let (lo239, hi239) = atan_recip_rational(239, wp);
    let c24 = BigRational::from_integer(BigInt::from(24));
    let c8 = BigRational::from_integer(BigInt::from(8));
    let c4 = BigRational::from_integer(BigInt::from(4));
    let lo = &c24 * &lo8 + &c8 * &lo57 + &c4 * &lo239;
    let hi = &c24 * &hi8 + &c8 * &hi57 + &c4 * &hi239;
    Enclosure::from_rational_bounds(&lo, &hi, prec)
}

/// Exact-rational bracketing of atan(1/n) by alternating partial sums.
fn atan_recip_rational(n: u64, wp: u32) -> (BigRational, BigRational) {
    let inv_n2 = BigRational::new(BigInt::one(), BigInt::from(n) * BigInt::from(n));
    let threshold = BigRational::new(BigInt::one(), BigInt::one() << (wp as usize + 4));
    let mut power = BigRational::new(BigInt::one(), BigInt::from(n));
    let mut sum = BigRational::zero();
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    let mut j: u64 = 0;
    loop {
        let term = &power / BigRational::from_integer(BigInt::from(2 * j + 1));
        if j.is_multiple_of(2) {
            sum += &term;
            hi = sum.clone();
        } else {
            sum -= &term;
            lo = sum.clone();
        }
        if term < threshold && j >= 1 {
            if j.is_multiple_of(2) {
                // Last kept term positive: the true value is below `sum`.
                lo = &sum - &term;
            } else {
                hi = &sum + &term;
            }
            return (lo, hi);
        }
        power *= &inv_n2;
        j += 1;
    }
}

/// Enclosure of ln 2 = 2 atanh(1/3), from exact-rational partial sums.
pub fn ln2_const(prec: u32) -> Enclosure {
    cached(ConstKind::Ln2, prec, || {
        let wp = prec + GUARD;
        let third_sq = BigRational::new(BigInt::one(), BigInt::from(9));
        let threshold = BigRational::new(BigInt::one(), BigInt::one() << (wp as usize + 4));
        let mut power = BigRational::new(BigInt::one(), BigInt::from(3));
        let mut sum = BigRational::zero();
        let mut j: u64 = 0;
        loop {
            let term = &power / BigRational::from_integer(BigInt::from(2 * j + 1));
            sum += &term;
            power *= &third_sq;
            j += 1;
            let next = &power / BigRational::from_integer(BigInt::from(2 * j + 1));
            if next < threshold {
                // All terms positive; tail <= (9/8) * next.
                let tail = &next * BigRational::new(BigInt::from(9), BigInt::from(8));
                let lo = &sum * BigRational::from_integer(BigInt::from(2));
                let hi = (&sum + &tail) * BigRational::from_integer(BigInt::from(2));
                return Enclosure::from_rational_bounds(&lo, &hi, prec);
            }
        }
    })
}

/// Certified exp of a single dyadic point.
pub fn exp_dyadic(x: &Dyadic, prec: u32) -> Enclosure {
    let wp = prec + GUARD;
    if x.is_zero() {
        return Enclosure::from_i64(1, prec);
    }
    let est = x.to_f64();
    assert!(
        est.is_finite() && est.abs() < 1e15,
        "exp argument out of supported range"
    );
    let k = (est / std::f64::consts::LN_2).round() as i64;
    let ln2 = ln2_const(wp);
    let r = Enclosure::point(x.clone(), wp).sub(&ln2.scale_i64(k));
    // |r| <= 1/2 + slack by construction; the tail bound below needs |r| <= 1.
    assert!(
        r.abs().hi().cmp_dyadic(&Dyadic::one()) == std::cmp::Ordering::Less,
        "exp range reduction failed"
    );
    let mut term = Enclosure::from_i64(1, wp);
    let mut sum = Enclosure::from_i64(1, wp);
    let threshold = Dyadic::pow2(-i64::from(wp));
    let mut j: u32 = 0;
    loop {
        j += 1;
        term = term.mul(&r).div_u32(j);
        sum = sum.add(&term);
        let bound = term.abs().hi().clone();
        if bound.cmp_dyadic(&threshold) == std::cmp::Ordering::Less && j >= 2 {
            // Tail after term j is at most 2 * |term_{j+1}| <= 2 * bound.
            let tail = bound.shift(1);
            let tail_enc = Enclosure::from_endpoints(tail.neg(), tail, wp);
            sum = sum.add(&tail_enc);
            break;
        }
        assert!(j < 100_000, "exp series failed to converge");
    }
    sum.shift(k).with_prec(prec)
}

/// Certified ln of a single positive dyadic point.
pub fn ln_dyadic(x: &Dyadic, prec: u32) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::Domain(
            "ln requires a strictly positive argument".into(),
        ));
    }
    let wp = prec + GUARD;
    // x = m * 2^s with m in [2/3, 4/3).
    let b = x.mant_bits() as i64;
    let e = x.raw_exp();
    let mut s = e + b - 1;
    let mut m = x.shift(-s); // in [1, 2)
    let four_thirds = BigRational::new(BigInt::from(4), BigInt::from(3));
    if m.cmp_rational(&four_thirds) != std::cmp::Ordering::Less {
        m = m.shift(-1);
        s += 1;
    }
    let num = m.sub(&Dyadic::one());
    let den = m.add(&Dyadic::one());
    let u = Enclosure::from_endpoints(
        num.div(&den, wp, Round::Down),
        num.div(&den, wp, Round::Up),
        wp,
    );
    // atanh(u) = sum u^(2j+1)/(2j+1). m in [2/3, 4/3) keeps |u| within an
    // outward ulp of 1/5; the doubled-next-term tail below stays valid for
    // any |u| <= 1/4 (geometric factor 1/(1 - u^2) <= 16/15).
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    assert!(
        u.abs().hi().cmp_rational(&quarter) != std::cmp::Ordering::Greater,
        "ln range reduction failed"
    );
    let u2 = u.mul(&u);
    let mut power = u.clone();
    let mut sum = Enclosure::from_i64(0, wp);
    let threshold = Dyadic::pow2(-i64::from(wp));
    let mut j: u32 = 0;
    loop {
        let term = power.div_u32(2 * j + 1);
        sum = sum.add(&term);
        power = power.mul(&u2);
        j += 1;
        let next_bound =
            power
                .abs()
                .hi()
                .div(&Dyadic::from_i64(i64::from(2 * j + 1)), wp, Round::Up);
        if next_bound.cmp_dyadic(&threshold) == std::cmp::Ordering::Less {
            // Tail <= (25/24) * next <= 2 * next.
            let tail = next_bound.shift(1);
            sum = sum.add(&Enclosure::from_endpoints(tail.neg(), tail, wp));
            break;
        }
        assert!(j < 100_000, "ln series failed to converge");
    }
    let ln2 = ln2_const(wp);
    Ok(ln2.scale_i64(s).add(&sum.shift(1)).with_prec(prec))
}

/// Monotone interval exp.
pub fn exp(x: &Enclosure) -> Enclosure {
    let prec = x.prec();
    let lo = exp_dyadic(x.lo(), prec);
    let hi = exp_dyadic(x.hi(), prec);
    Enclosure::from_endpoints(lo.lo().clone(), hi.hi().clone(), prec)
}

/// Monotone interval ln; the argument must be strictly positive.
pub fn ln(x: &Enclosure) -> Result<Enclosure> {
    let prec = x.prec();
    let lo = ln_dyadic(x.lo(), prec)?;
    let hi = ln_dyadic(x.hi(), prec)?;
    Ok(Enclosure::from_endpoints(
        lo.lo().clone(),
        hi.hi().clone(),
        prec,
    ))
}

/// Interval sqrt; the argument must be nonnegative.
pub fn sqrt(x: &Enclosure) -> Result<Enclosure> {
    if x.lo().is_negative() {
        return Err(Error::Domain("sqrt requires a nonnegative argument".into()));
    }
    let prec = x.prec();
    Ok(Enclosure::from_endpoints(
        x.lo().sqrt(prec, Round::Down),
        x.hi().sqrt(prec, Round::Up),
        prec,
    ))
}

/// Interval ln of an exact rational.
pub fn ln_rational(r: &BigRational, prec: u32) -> Result<Enclosure> {
    if !r.is_positive() {
        return Err(Error::Domain(
            "ln requires a strictly positive argument".into(),
        ));
    }
    let wp = prec + 8;
    ln(&Enclosure::from_rational(r, wp)).map(|e| e.with_prec(prec))
}
