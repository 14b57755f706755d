//! Randomized invariants across modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use kindiv_core::exact::{build_pkx_table, d_bruteforce, d_exact, total_parts, ExactQuery};
use kindiv_core::interval::{Dyadic, Enclosure, Round};

fn rational() -> impl Strategy<Value = BigRational> {
    (-2_000_000i64..2_000_000, 1i64..2_000_000)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #[test]
    fn enclosure_arithmetic_contains_exact_value(a in rational(), b in rational()) {
        let prec = 96u32;
        let ea = Enclosure::from_rational(&a, prec);
        let eb = Enclosure::from_rational(&b, prec);
        prop_assert!(ea.add(&eb).contains_rational(&(&a + &b)));
        prop_assert!(ea.sub(&eb).contains_rational(&(&a - &b)));
        prop_assert!(ea.mul(&eb).contains_rational(&(&a * &b)));
        if !b.is_zero() && (b.is_positive() || b.is_negative()) && !eb.overlaps(&Enclosure::from_i64(0, prec)) {
            prop_assert!(ea.div(&eb).unwrap().contains_rational(&(&a / &b)));
        }
    }

    #[test]
    fn directed_rounding_brackets(a in rational(), prec in 8u32..80) {
        let down = Dyadic::from_rational(&a, prec, Round::Down);
        let up = Dyadic::from_rational(&a, prec, Round::Up);
        prop_assert!(down.cmp_rational(&a) != std::cmp::Ordering::Greater);
        prop_assert!(up.cmp_rational(&a) != std::cmp::Ordering::Less);
    }

    #[test]
    fn decimal_rendering_is_close(a in rational()) {
        let d = Dyadic::from_rational(&a, 128, Round::Down);
        let s = d.to_decimal_string(9);
        let parsed: f64 = s.parse().unwrap();
        let tol = 1e-8 + d.to_f64().abs() * 1e-9;
        prop_assert!((parsed - d.to_f64()).abs() <= tol);
    }

    #[test]
    fn table_count_agrees_with_enumeration(k in 2u32..6, t in 1u32..9, seed in 0u32..10_000, n in 0usize..23) {
        let r = seed % t + 1;
        let table = build_pkx_table(k, n).unwrap();
        let q = ExactQuery::new(k, t, r, n).unwrap();
        prop_assert_eq!(d_exact(&q, &table).unwrap(), d_bruteforce(&q).unwrap());
    }

    #[test]
    fn residue_sum_is_total(k in 2u32..6, t in 1u32..9, n in 0usize..40) {
        let table = build_pkx_table(k, n).unwrap();
        let mut sum = kindiv_core::exact::BigNat::from(0u32);
        for r in 1..=t {
            sum += d_exact(&ExactQuery::new(k, t, r, n).unwrap(), &table).unwrap();
        }
        prop_assert_eq!(sum, total_parts(k, n, &table).unwrap());
    }
}
