//! Certified interval arithmetic over dyadic endpoints.
//!
//! Every operation rounds outward, so an [`Enclosure`] produced from
//! enclosures of the true operands is guaranteed to contain the true
//! result. Exact integers and rationals convert in without loss where
//! possible (rationals round outward at the working precision).

mod dyadic;
mod functions;

pub use dyadic::{Dyadic, Round};
pub use functions::{
    exp, exp_dyadic, literal_enclosure, ln, ln2_const, ln_dyadic, ln_rational, pi_const, pi_machin,
    pi_stormer, sqrt,
};

use std::cmp::Ordering as CmpOrdering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 192;
/// Hard cap for precision escalation.
pub const PRECISION_CAP: u32 = 1024;

/// A certified real interval [lo, hi] with outward rounding at `prec` bits.
#[derive(Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Enclosure {
    pub fn point(v: Dyadic, prec: u32) -> Self {
        Enclosure {
            lo: v.clone(),
            hi: v,
            prec,
        }
    }

    pub fn from_endpoints(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(
            lo.cmp_dyadic(&hi) != CmpOrdering::Greater,
            "inverted enclosure"
        );
        Enclosure { lo, hi, prec }
    }

    /// Exact embedding of a nonnegative big integer (no rounding).
    pub fn from_biguint(v: &BigUint, prec: u32) -> Self {
        Enclosure::point(Dyadic::from_biguint(v.clone()), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Enclosure::point(Dyadic::from_bigint(v.clone()), prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Enclosure::point(Dyadic::from_i64(v), prec)
    }

    /// Outward-rounded embedding of a rational.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Enclosure {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
            prec,
        }
    }

    /// Enclosure spanning two rationals (in either order).
    pub fn from_rational_bounds(a: &BigRational, b: &BigRational, prec: u32) -> Self {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Enclosure {
            lo: Dyadic::from_rational(lo, prec, Round::Down),
            hi: Dyadic::from_rational(hi, prec, Round::Up),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Enclosure {
            lo: self.lo.round_to(prec, Round::Down),
            hi: self.hi.round_to(prec, Round::Up),
            prec,
        }
    }

    fn out(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        Enclosure {
            lo: lo.round_to(prec, Round::Down),
            hi: hi.round_to(prec, Round::Up),
            prec,
        }
    }

    pub fn add(&self, rhs: &Enclosure) -> Enclosure {
        let prec = self.prec.max(rhs.prec);
        Enclosure::out(self.lo.add(&rhs.lo), self.hi.add(&rhs.hi), prec)
    }

    pub fn sub(&self, rhs: &Enclosure) -> Enclosure {
        let prec = self.prec.max(rhs.prec);
        Enclosure::out(self.lo.sub(&rhs.hi), self.hi.sub(&rhs.lo), prec)
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, rhs: &Enclosure) -> Enclosure {
        let prec = self.prec.max(rhs.prec);
        let cands = [
            self.lo.mul(&rhs.lo),
            self.lo.mul(&rhs.hi),
            self.hi.mul(&rhs.lo),
            self.hi.mul(&rhs.hi),
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Enclosure::out(lo, hi, prec)
    }

    /// Interval division; the divisor must not contain zero.
    pub fn div(&self, rhs: &Enclosure) -> Result<Enclosure> {
        if !rhs.lo.is_positive() && !rhs.hi.is_negative() {
            return Err(Error::Domain(
                "interval division by an interval containing zero".into(),
            ));
        }
        let prec = self.prec.max(rhs.prec);
        let lo = [
            self.lo.div(&rhs.lo, prec, Round::Down),
            self.lo.div(&rhs.hi, prec, Round::Down),
            self.hi.div(&rhs.lo, prec, Round::Down),
            self.hi.div(&rhs.hi, prec, Round::Down),
        ]
        .into_iter()
        .min()
        .unwrap();
        let hi = [
            self.lo.div(&rhs.lo, prec, Round::Up),
            self.lo.div(&rhs.hi, prec, Round::Up),
            self.hi.div(&rhs.lo, prec, Round::Up),
            self.hi.div(&rhs.hi, prec, Round::Up),
        ]
        .into_iter()
        .max()
        .unwrap();
        Ok(Enclosure { lo, hi, prec })
    }

    /// Exact scale by 2^e.
    pub fn shift(&self, e: i64) -> Enclosure {
        Enclosure {
            lo: self.lo.shift(e),
            hi: self.hi.shift(e),
            prec: self.prec,
        }
    }

    pub fn scale_i64(&self, v: i64) -> Enclosure {
        self.mul(&Enclosure::from_i64(v, self.prec))
    }

    pub fn div_u32(&self, v: u32) -> Enclosure {
        self.div(&Enclosure::from_i64(i64::from(v), self.prec))
            .expect("division by a nonzero integer")
    }

    pub fn hull(&self, rhs: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(rhs.lo.clone()),
            hi: self.hi.clone().max(rhs.hi.clone()),
            prec: self.prec.max(rhs.prec),
        }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).shift(-1)
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.cmp_rational(r) != CmpOrdering::Greater
            && self.hi.cmp_rational(r) != CmpOrdering::Less
    }

    /// Every point of the enclosure lies strictly above the rational.
    pub fn strictly_above_rational(&self, r: &BigRational) -> bool {
        self.lo.cmp_rational(r) == CmpOrdering::Greater
    }

    /// Every point of the enclosure lies strictly below the rational.
    pub fn strictly_below_rational(&self, r: &BigRational) -> bool {
        self.hi.cmp_rational(r) == CmpOrdering::Less
    }

    pub fn contains(&self, other: &Enclosure) -> bool {
        self.lo.cmp_dyadic(&other.lo) != CmpOrdering::Greater
            && self.hi.cmp_dyadic(&other.hi) != CmpOrdering::Less
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo.cmp_dyadic(&other.hi) != CmpOrdering::Greater
            && other.lo.cmp_dyadic(&self.hi) != CmpOrdering::Greater
    }

    /// True when every point of `self` lies strictly above every point of `other`.
    pub fn strictly_above(&self, other: &Enclosure) -> bool {
        self.lo.cmp_dyadic(&other.hi) == CmpOrdering::Greater
    }

    pub fn strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Widen both endpoints by one unit in the last place at `prec`.
    pub fn widen_ulp(&self) -> Enclosure {
        let ulp_lo = ulp_of(&self.lo, self.prec);
        let ulp_hi = ulp_of(&self.hi, self.prec);
        Enclosure {
            lo: self.lo.sub(&ulp_lo),
            hi: self.hi.add(&ulp_hi),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Enclosure {
                lo: Dyadic::zero(),
                hi: self.lo.abs().max(self.hi.abs()),
                prec: self.prec,
            }
        }
    }

    pub fn to_f64_mid(&self) -> f64 {
        self.midpoint().to_f64()
    }
}

fn ulp_of(v: &Dyadic, prec: u32) -> Dyadic {
    if v.is_zero() {
        return Dyadic::pow2(-i64::from(prec));
    }
    // 2^(top-1) <= |v| < 2^top; one ulp at prec bits is 2^(top - prec).
    let top = v.mant_bits() as i64 + v.raw_exp();
    Dyadic::pow2(top - i64::from(prec))
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Enclosure[{} .. {}] (width ~ {:.3e}, prec {})",
            self.lo.to_f64(),
            self.hi.to_f64(),
            self.width().to_f64(),
            self.prec
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_embedding_contains_value() {
        let r = rat(1, 3);
        let e = Enclosure::from_rational(&r, 64);
        assert!(e.contains_rational(&r));
        assert!(e.width().cmp_dyadic(&Dyadic::pow2(-60)) == CmpOrdering::Less);
    }

    #[test]
    fn arithmetic_contains_exact_results() {
        let a = Enclosure::from_rational(&rat(1, 3), 96);
        let b = Enclosure::from_rational(&rat(1, 7), 96);
        let sum = a.add(&b);
        assert!(sum.contains_rational(&rat(10, 21)));
        let prod = a.mul(&b);
        assert!(prod.contains_rational(&rat(1, 21)));
        let quot = a.div(&b).unwrap();
        assert!(quot.contains_rational(&rat(7, 3)));
        let diff = a.sub(&b);
        assert!(diff.contains_rational(&rat(4, 21)));
    }

    #[test]
    fn division_by_zero_interval_rejected() {
        let a = Enclosure::from_i64(1, 64);
        let z = Enclosure::from_endpoints(Dyadic::from_i64(-1), Dyadic::from_i64(1), 64);
        assert!(a.div(&z).is_err());
    }

    #[test]
    fn strict_order_predicates() {
        let a = Enclosure::from_rational_bounds(&rat(3, 2), &rat(2, 1), 64);
        let b = Enclosure::from_rational_bounds(&rat(1, 1), &rat(5, 4), 64);
        assert!(a.strictly_above(&b));
        assert!(!b.strictly_above(&a));
        assert!(!a.overlaps(&b));
        let c = Enclosure::from_rational_bounds(&rat(5, 4), &rat(7, 4), 64);
        assert!(a.overlaps(&c));
    }

    #[test]
    fn mixed_sign_multiplication() {
        let a = Enclosure::from_rational_bounds(&rat(-2, 1), &rat(3, 1), 64);
        let b = Enclosure::from_rational_bounds(&rat(-1, 1), &rat(4, 1), 64);
        let p = a.mul(&b);
        assert!(p.contains_rational(&rat(-8, 1)));
        assert!(p.contains_rational(&rat(12, 1)));
        assert!(p.contains_rational(&BigRational::one()));
    }

    #[test]
    fn widen_ulp_strictly_contains() {
        let e = Enclosure::from_rational(&rat(22, 7), 128);
        let w = e.widen_ulp();
        assert!(w.contains(&e));
        assert!(w.lo().cmp_dyadic(e.lo()) == CmpOrdering::Less);
        assert!(w.hi().cmp_dyadic(e.hi()) == CmpOrdering::Greater);
    }
}
