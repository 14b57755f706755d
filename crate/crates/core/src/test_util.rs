//! Helpers shared by the unit tests.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::interval::Enclosure;

/// Exact rational from a plain decimal string.
pub fn rat_str(s: &str) -> BigRational {
    let neg = s.starts_with('-');
    let body = s.trim_start_matches('-');
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    let digits: String = format!("{ip}{fp}");
    let v = BigRational::new(
        digits.parse::<BigInt>().unwrap(),
        BigInt::from(10u32).pow(fp.len() as u32),
    );
    if neg {
        -v
    } else {
        v
    }
}

/// Interval of radius ten units in the last digit around a decimal literal;
/// wide enough to absorb the literal's own rounding.
pub fn lit_interval(s: &str, prec: u32) -> Enclosure {
    let body = s.trim_start_matches('-');
    let frac_digits = body.split_once('.').map_or(0, |(_, fp)| fp.len()) as u32;
    let v = rat_str(s);
    let slack = BigRational::new(BigInt::from(10), BigInt::from(10u32).pow(frac_digits + 1));
    Enclosure::from_rational_bounds(&(&v - &slack), &(&v + &slack), prec)
}

/// Assert that an enclosure is consistent with a decimal reference value:
/// the enclosure and the literal's uncertainty interval must intersect.
pub fn assert_matches_literal(e: &Enclosure, s: &str, what: &str) {
    let lit = lit_interval(s, e.prec());
    assert!(
        e.overlaps(&lit),
        "{what}: enclosure {e:?} does not meet reference {s}"
    );
}
