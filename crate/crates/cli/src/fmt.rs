//! Deterministic decimal formatting for CSV output.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Round-half-even integer quotient.
fn div_half_even(num: &BigUint, den: &BigUint) -> BigUint {
    let (q, r) = num.div_rem(den);
    let twice = &r << 1u32;
    match twice.cmp(den) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + BigUint::one(),
        std::cmp::Ordering::Equal => {
            if (&q & BigUint::one()).is_zero() {
                q
            } else {
                q + BigUint::one()
            }
        }
    }
}

/// Decimal exponent e with 10^e <= |r| < 10^(e+1); r must be nonzero.
fn decimal_exponent(r: &BigRational) -> i64 {
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    if num >= den {
        let q = num / den;
        let mut e = q.to_string().len() as i64 - 1;
        // The string length overestimates by one exactly when |r| < 10^e.
        if num < &(den * BigUint::from(10u32).pow(e as u32)) {
            e -= 1;
        }
        e
    } else {
        let mut e = -1i64;
        let mut scaled = num * BigUint::from(10u32);
        while &scaled < den {
            scaled *= BigUint::from(10u32);
            e -= 1;
        }
        e
    }
}

/// `digits` significant digits, half-even, in scientific notation.
pub fn sci_sig(r: &BigRational, digits: u32) -> String {
    assert!(digits >= 1);
    if r.is_zero() {
        return format!("{}e0", "0".to_string().clone());
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    let mut e = decimal_exponent(&a);
    // scaled = a * 10^(digits - 1 - e), rounded half-even to an integer
    let shift = i64::from(digits) - 1 - e;
    let (num, den) = if shift >= 0 {
        (
            a.numer().magnitude() * BigUint::from(10u32).pow(shift as u32),
            a.denom().magnitude().clone(),
        )
    } else {
        (
            a.numer().magnitude().clone(),
            a.denom().magnitude() * BigUint::from(10u32).pow((-shift) as u32),
        )
    };
    let mut mantissa = div_half_even(&num, &den);
    let cap = BigUint::from(10u32).pow(digits);
    if mantissa >= cap {
        mantissa = div_half_even(&mantissa, &BigUint::from(10u32));
        e += 1;
    }
    let s = mantissa.to_string();
    debug_assert_eq!(s.len(), digits as usize);
    if digits == 1 {
        format!("{sign}{s}e{e}")
    } else {
        format!("{sign}{}.{}e{e}", &s[..1], &s[1..])
    }
}

/// `digits` significant digits in plain notation for moderate magnitudes,
/// scientific otherwise.
pub fn plain_sig(r: &BigRational, digits: u32) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let e = decimal_exponent(&r.abs());
    if !(-4..=9).contains(&e) {
        return sci_sig(r, digits);
    }
    let sci = sci_sig(r, digits);
    // Re-expand d.ddddde±x into plain decimal.
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i64 = exp.parse().unwrap();
    let neg = mant.starts_with('-');
    let digits_only: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = exp + 1; // digits before the decimal point
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits_only)
    } else if (point as usize) >= digits_only.len() {
        format!(
            "{}{}",
            digits_only,
            "0".repeat(point as usize - digits_only.len())
        )
    } else {
        format!(
            "{}.{}",
            &digits_only[..point as usize],
            &digits_only[point as usize..]
        )
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Exact ratio of two integers with 6 significant digits, plain form.
pub fn ratio6(num: u64, den: u64) -> String {
    plain_sig(&BigRational::new(BigInt::from(num), BigInt::from(den)), 6)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn scientific_basics() {
        assert_eq!(sci_sig(&rat(12345678, 1), 6), "1.23457e7");
        assert_eq!(sci_sig(&rat(1, 3), 6), "3.33333e-1");
        assert_eq!(sci_sig(&rat(-25, 2), 3), "-1.25e1");
        assert_eq!(sci_sig(&rat(999999999, 1), 6), "1.00000e9");
        assert_eq!(sci_sig(&rat(1, 1), 6), "1.00000e0");
    }

    #[test]
    fn half_even_at_ties() {
        assert_eq!(sci_sig(&rat(125, 100), 2), "1.2e0");
        assert_eq!(sci_sig(&rat(135, 100), 2), "1.4e0");
    }

    #[test]
    fn plain_basics() {
        assert_eq!(plain_sig(&rat(7, 6), 6), "1.16667");
        assert_eq!(plain_sig(&rat(1, 2), 6), "0.500000");
        assert_eq!(plain_sig(&rat(44, 1), 6), "44.0000");
        assert_eq!(ratio6(7, 6), "1.16667");
        assert_eq!(ratio6(1, 1), "1.00000");
    }

    #[test]
    fn exponent_edges() {
        assert_eq!(decimal_exponent(&rat(1, 1)), 0);
        assert_eq!(decimal_exponent(&rat(9, 1)), 0);
        assert_eq!(decimal_exponent(&rat(10, 1)), 1);
        assert_eq!(decimal_exponent(&rat(1, 10)), -1);
        assert_eq!(decimal_exponent(&rat(99, 100)), -1);
        assert_eq!(decimal_exponent(&rat(100, 1)), 2);
    }
}
