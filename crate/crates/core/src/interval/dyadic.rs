//! Arbitrary-precision dyadic reals: numbers of the form mant * 2^exp.
//!
//! Addition, subtraction and multiplication are exact. Division, square
//! roots and precision rounding take an explicit rounding direction so the
//! interval layer can round outward.

use std::cmp::Ordering as CmpOrdering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rounding direction for inexact operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// A dyadic rational mant * 2^exp, kept canonical (mant odd or zero).
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    /// 2^e exactly.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic { mant: v, exp: 0 }.normalized()
    }

    pub fn from_biguint(v: BigUint) -> Self {
        Dyadic::from_bigint(BigInt::from(v))
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::from_bigint(BigInt::from(v))
    }

    /// mant * 2^exp with arbitrary mantissa.
    pub fn from_parts(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Number of significant bits of the mantissa.
    pub fn mant_bits(&self) -> u64 {
        self.mant.magnitude().bits()
    }

    /// The canonical exponent (value = mant * 2^exp with odd mant).
    pub fn raw_exp(&self) -> i64 {
        self.exp
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Exact multiplication by 2^e.
    pub fn shift(&self, e: i64) -> Dyadic {
        if self.mant.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + e,
        }
    }

    pub fn add(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(rhs.exp);
        let a = &self.mant << u64::try_from(self.exp - exp).expect("exponent overflow");
        let b = &rhs.mant << u64::try_from(rhs.exp - exp).expect("exponent overflow");
        Dyadic { mant: a + b, exp }.normalized()
    }

    pub fn sub(&self, rhs: &Dyadic) -> Dyadic {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
        }
        .normalized()
    }

    /// Round to at most `prec` mantissa bits in direction `dir`.
    pub fn round_to(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant_bits();
        if bits <= u64::from(prec) {
            return self.clone();
        }
        let shift = bits - u64::from(prec);
        let (sign, mag) = (self.mant.sign(), self.mant.magnitude());
        let shifted: BigUint = mag >> shift;
        let exact = (mag & ((BigUint::one() << shift) - BigUint::one())).is_zero();
        let bump = match (sign, dir, exact) {
            (_, _, true) => false,
            (Sign::Plus, Round::Up, false) => true,
            (Sign::Minus, Round::Down, false) => true,
            _ => false,
        };
        let mut m = BigInt::from(shifted);
        if bump {
            m += 1;
        }
        if sign == Sign::Minus {
            m = -m;
        }
        Dyadic {
            mant: m,
            exp: self.exp + shift as i64,
        }
        .normalized()
    }

    /// Directed division to `prec` mantissa bits.
    pub fn div(&self, rhs: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!rhs.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let la = self.mant_bits() as i64;
        let lb = rhs.mant_bits() as i64;
        // Scale so the integer quotient carries at least prec + 2 bits.
        let s = (i64::from(prec) + 2 + lb - la).max(0) as u64;
        let num = self.mant.magnitude() << s;
        let den = rhs.mant.magnitude();
        let (q, r) = num_integer::Integer::div_rem(&num, den);
        let exact = r.is_zero();
        let sign_neg = self.mant.is_negative() != rhs.mant.is_negative();
        let bump = !exact && matches!((sign_neg, dir), (false, Round::Up) | (true, Round::Down));
        let mut m = BigInt::from(q);
        if bump {
            m += 1;
        }
        if sign_neg {
            m = -m;
        }
        let out = Dyadic {
            mant: m,
            exp: self.exp - rhs.exp - s as i64,
        }
        .normalized();
        out.round_to(prec, dir)
    }

    /// Directed square root (`self` must be nonnegative).
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut mag = self.mant.magnitude().clone();
        let mut exp = self.exp;
        if exp.rem_euclid(2) != 0 {
            mag <<= 1u32;
            exp -= 1;
        }
        // Scale by an even power so the root carries at least prec + 2 bits.
        let half_bits = mag.bits() / 2;
        let s = (u64::from(prec) + 2).saturating_sub(half_bits);
        mag <<= 2 * s;
        exp -= 2 * s as i64;
        let root = mag.sqrt();
        let exact = &root * &root == mag;
        let bumped = match (dir, exact) {
            (Round::Up, false) => root + BigUint::one(),
            _ => root,
        };
        let out = Dyadic {
            mant: BigInt::from(bumped),
            exp: exp / 2,
        }
        .normalized();
        out.round_to(prec, dir)
    }

    /// Exact conversion to a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << u64::try_from(self.exp).unwrap())
        } else {
            BigRational::new(
                self.mant.clone(),
                BigInt::one() << u64::try_from(-self.exp).unwrap(),
            )
        }
    }

    /// Directed conversion from a rational.
    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Dyadic {
        let num = Dyadic::from_bigint(r.numer().clone());
        let den = Dyadic::from_bigint(r.denom().clone());
        num.div(&den, prec, dir)
    }

    /// Lossy conversion for display purposes only.
    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant_bits();
        let (m53, e_extra) = if bits > 53 {
            let sh = bits - 53;
            let mag: BigUint = self.mant.magnitude() >> sh;
            (mag, sh as i64)
        } else {
            (self.mant.magnitude().clone(), 0)
        };
        let mut v = 0.0f64;
        for d in m53.to_u64_digits().iter().rev() {
            v = v * 18446744073709551616.0 + *d as f64;
        }
        let e = self.exp + e_extra;
        let scale = if e.unsigned_abs() > 20000 {
            if e > 0 {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            2f64.powi(e.clamp(-20000, 20000) as i32)
        };
        let sv = v * scale;
        if self.mant.is_negative() {
            -sv
        } else {
            sv
        }
    }

    /// Decimal string with `digits` fractional digits, round half to even.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let pow10 = BigInt::from(10u32).pow(digits);
        // self * 10^digits = mant * 2^exp * 10^digits, rounded half-even to an integer.
        let scaled_num;
        let scaled_den;
        if self.exp >= 0 {
            scaled_num = (&self.mant << u64::try_from(self.exp).unwrap()) * &pow10;
            scaled_den = BigInt::one();
        } else {
            scaled_num = &self.mant * &pow10;
            scaled_den = BigInt::one() << u64::try_from(-self.exp).unwrap();
        }
        let neg = scaled_num.is_negative();
        let num = scaled_num.magnitude().clone();
        let den = scaled_den.magnitude();
        let (q, r) = num_integer::Integer::div_rem(&num, den);
        let twice_r = &r << 1u32;
        let q = match twice_r.cmp(den) {
            CmpOrdering::Less => q,
            CmpOrdering::Greater => q + BigUint::one(),
            CmpOrdering::Equal => {
                if (&q & BigUint::one()).is_zero() {
                    q
                } else {
                    q + BigUint::one()
                }
            }
        };
        let s = q.to_string();
        let (int_part, frac_part) = if digits == 0 {
            (s, String::new())
        } else if s.len() > digits as usize {
            let split = s.len() - digits as usize;
            (s[..split].to_string(), s[split..].to_string())
        } else {
            (
                "0".to_string(),
                format!("{:0>width$}", s, width = digits as usize),
            )
        };
        let sign = if neg && !(int_part == "0" && frac_part.chars().all(|c| c == '0')) {
            "-"
        } else {
            ""
        };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    pub fn cmp_dyadic(&self, rhs: &Dyadic) -> CmpOrdering {
        match (self.mant.sign(), rhs.mant.sign()) {
            (Sign::Minus, Sign::NoSign | Sign::Plus) => return CmpOrdering::Less,
            (Sign::NoSign, Sign::Plus) => return CmpOrdering::Less,
            (Sign::Plus, Sign::NoSign | Sign::Minus) => return CmpOrdering::Greater,
            (Sign::NoSign, Sign::Minus) => return CmpOrdering::Greater,
            (Sign::NoSign, Sign::NoSign) => return CmpOrdering::Equal,
            _ => {}
        }
        let exp = self.exp.min(rhs.exp);
        let a = &self.mant << u64::try_from(self.exp - exp).unwrap();
        let b = &rhs.mant << u64::try_from(rhs.exp - exp).unwrap();
        a.cmp(&b)
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> CmpOrdering {
        self.to_rational().cmp(r)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> CmpOrdering {
        self.cmp_dyadic(other)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Dyadic({} * 2^{} ~ {})",
            self.mant,
            self.exp,
            self.to_f64()
        )
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: i64) -> Dyadic {
        Dyadic::from_i64(v)
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Dyadic::from_parts(BigInt::from(3), -2); // 0.75
        let b = Dyadic::from_parts(BigInt::from(5), -3); // 0.625
        assert_eq!(a.add(&b), Dyadic::from_parts(BigInt::from(11), -3));
        assert_eq!(a.sub(&b), Dyadic::from_parts(BigInt::from(1), -3));
        assert_eq!(a.mul(&b), Dyadic::from_parts(BigInt::from(15), -5));
    }

    #[test]
    fn directed_division_brackets_quotient() {
        let a = d(1);
        let b = d(3);
        let lo = a.div(&b, 64, Round::Down);
        let hi = a.div(&b, 64, Round::Up);
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        assert!(lo.cmp_rational(&third) == CmpOrdering::Less);
        assert!(hi.cmp_rational(&third) == CmpOrdering::Greater);
        let gap = hi.sub(&lo);
        assert!(gap.cmp_dyadic(&Dyadic::pow2(-60)) == CmpOrdering::Less);
    }

    #[test]
    fn directed_sqrt_brackets_root() {
        let two = d(2);
        let lo = two.sqrt(80, Round::Down);
        let hi = two.sqrt(80, Round::Up);
        assert!(lo.mul(&lo).cmp_dyadic(&two) == CmpOrdering::Less);
        assert!(hi.mul(&hi).cmp_dyadic(&two) == CmpOrdering::Greater);
        assert!(hi.sub(&lo).cmp_dyadic(&Dyadic::pow2(-75)) == CmpOrdering::Less);
    }

    #[test]
    fn sqrt_exact_square() {
        let nine = d(9);
        assert_eq!(nine.sqrt(64, Round::Down), d(3));
        assert_eq!(nine.sqrt(64, Round::Up), d(3));
    }

    #[test]
    fn rounding_direction_respects_sign() {
        // 21 = 10101b at three significant bits has granularity 4.
        let v = Dyadic::from_parts(BigInt::from(0b10101i64), 0);
        let down = v.round_to(3, Round::Down);
        let up = v.round_to(3, Round::Up);
        assert_eq!(down, d(20));
        assert_eq!(up, d(24));
        let negv = v.neg();
        assert_eq!(negv.round_to(3, Round::Down), d(-24));
        assert_eq!(negv.round_to(3, Round::Up), d(-20));
    }

    #[test]
    fn decimal_string_half_even() {
        let v = Dyadic::from_parts(BigInt::from(1), -1); // 0.5
        assert_eq!(v.to_decimal_string(0), "0");
        let v = Dyadic::from_parts(BigInt::from(3), -1); // 1.5
        assert_eq!(v.to_decimal_string(0), "2");
        let v = Dyadic::from_parts(BigInt::from(5), -2); // 1.25
        assert_eq!(v.to_decimal_string(1), "1.2");
        let v = Dyadic::from_parts(BigInt::from(7), -2); // 1.75
        assert_eq!(v.to_decimal_string(1), "1.8");
        let v = Dyadic::from_parts(BigInt::from(-7), -2);
        assert_eq!(v.to_decimal_string(2), "-1.75");
    }

    #[test]
    fn f64_roundtrip_small() {
        assert_eq!(d(42).to_f64(), 42.0);
        assert_eq!(Dyadic::from_parts(BigInt::from(3), -2).to_f64(), 0.75);
    }
}
