//! The main-term estimator for residue part counts and numeric
//! consistency checks for the generating-function analysis behind it.
//!
//! For coprime (k, t), residue r and size n, the estimator is
//!
//!   est(n) = pref(n) * [ (K/2) ln n + bias_{k,t}(r) + C_{k,t} ],
//!   pref(n) = 3^(1/4) e^(pi sqrt(2Kn/3)) / (2^(3/4) K^(1/4) n^(1/4) pi t sqrt(k)),
//!   C_{k,t} = (K/2) ln(pi sqrt(K/6)) - K ln t + (ln k)/k,
//!
//! with K = 1 - 1/k. `q_ratio` divides the exact count by the estimate;
//! the ratio drifts toward 1 as n grows.
//!
//! The supporting checks evaluate the summatory component of the
//! generating function two ways (`l_sum` against direct summation), the
//! major-arc expansion residual (which must decay linearly in z), and the
//! modular transformation of the product component at matched truncation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::bias::{psi_kt, rbar, BiasKey};
use crate::digamma::digamma;
use crate::error::{Error, Result};
use crate::exact::{d_exact, ExactQuery, PartitionTable};
use crate::interval::{exp, ln_rational, pi_const, sqrt, Dyadic, Enclosure, Round};

/// One evaluated estimate, kept factored for inspection.
#[derive(Debug, Clone)]
pub struct Estimate {
    pub key: (u32, u32),
    pub r: u32,
    pub n: usize,
    pub prefactor: Enclosure,
    pub bracket: Enclosure,
    pub value: Enclosure,
}

/// K = 1 - 1/k as an exact rational.
fn k_ratio(k: u32) -> BigRational {
    BigRational::new(BigInt::from(k - 1), BigInt::from(k))
}

/// Enclosure of the additive constant C_{k,t}.
pub fn c_kt(key: &BiasKey, prec: u32) -> Result<Enclosure> {
    let wp = prec + 16;
    let kk = k_ratio(key.k());
    let pi = pi_const(wp);
    let k_over_6 = &kk / BigRational::from_integer(BigInt::from(6));
    let root = sqrt(&Enclosure::from_rational(&k_over_6, wp))?;
    let ln_arg = crate::interval::ln(&pi.mul(&root))?;
    let half_k = Enclosure::from_rational(&(&kk / BigRational::from_integer(BigInt::from(2))), wp);
    let ln_t = ln_rational(&BigRational::from_integer(BigInt::from(key.t())), wp)?;
    let ln_k = ln_rational(&BigRational::from_integer(BigInt::from(key.k())), wp)?;
    let k_enc = Enclosure::from_rational(&kk, wp);
    Ok(half_k
        .mul(&ln_arg)
        .sub(&k_enc.mul(&ln_t))
        .add(&ln_k.div_u32(key.k()))
        .with_prec(prec))
}

/// The estimator itself, with its factors exposed.
pub fn d_hat(key: &BiasKey, r: u32, n: usize, prec: u32) -> Result<Estimate> {
    if n == 0 {
        return Err(Error::InvalidQuery("estimator needs n >= 1".into()));
    }
    let wp = prec + 16;
    let kk = k_ratio(key.k());
    let pi = pi_const(wp);

    // growth factor e^(pi sqrt(2 K n / 3))
    let arg = BigRational::new(
        BigInt::from(2u32) * BigInt::from(n as u64) * kk.numer(),
        BigInt::from(3u32) * kk.denom(),
    );
    let root = sqrt(&Enclosure::from_rational(&arg, wp))?;
    let growth = exp(&pi.mul(&root));

    let fourth =
        |v: &BigRational| -> Result<Enclosure> { sqrt(&sqrt(&Enclosure::from_rational(v, wp))?) };
    let three_fourth = fourth(&BigRational::from_integer(BigInt::from(3)))?;
    let two_three_fourth = fourth(&BigRational::from_integer(BigInt::from(8)))?;
    let k_fourth = fourth(&kk)?;
    let n_fourth = fourth(&BigRational::from_integer(BigInt::from(n as u64)))?;
    let sqrt_k = sqrt(&Enclosure::from_i64(i64::from(key.k()), wp))?;

    let numer = three_fourth.mul(&growth);
    let denom = two_three_fourth
        .mul(&k_fourth)
        .mul(&n_fourth)
        .mul(&pi)
        .mul(&Enclosure::from_i64(i64::from(key.t()), wp))
        .mul(&sqrt_k);
    let prefactor = numer.div(&denom)?;

    let half_k = Enclosure::from_rational(&(&kk / BigRational::from_integer(BigInt::from(2))), wp);
    let ln_n = ln_rational(&BigRational::from_integer(BigInt::from(n as u64)), wp)?;
    let bias = psi_kt(key, r, wp)?;
    let constant = c_kt(key, wp)?;
    let bracket = half_k.mul(&ln_n).add(&bias).add(&constant);

    let value = prefactor.mul(&bracket).with_prec(prec);
    assert!(
        prefactor.strictly_positive(),
        "estimator prefactor must be positive"
    );
    Ok(Estimate {
        key: (key.k(), key.t()),
        r,
        n,
        prefactor: prefactor.with_prec(prec),
        bracket: bracket.with_prec(prec),
        value,
    })
}

/// Exact count divided by the estimate.
pub fn q_ratio(
    key: &BiasKey,
    r: u32,
    n: usize,
    table: &PartitionTable,
    prec: u32,
) -> Result<Enclosure> {
    let q = ExactQuery::new(key.k(), key.t(), r, n)?;
    let exact = d_exact(&q, table)?;
    let est = d_hat(key, r, n, prec)?;
    Enclosure::from_biguint(&exact, prec).div(&est.value)
}

/// e^(-z) / (1 - e^(-z)) for an enclosure z > 0.
pub fn e_times(z: &Enclosure) -> Result<Enclosure> {
    if !z.lo().is_positive() {
        return Err(Error::Domain("e_times requires z > 0".into()));
    }
    let u = exp(&z.neg());
    let one = Enclosure::from_i64(1, z.prec());
    u.div(&one.sub(&u))
}

const SUM_ITERATION_CAP: usize = 5_000_000;

/// sum_{l >= 0} E((l t + c) s) with a certified geometric tail, where
/// E(w) = e^(-w)/(1 - e^(-w)).
///
/// Terms are generated by one interval multiplication each: with
/// u_l = e^(-(l t + c) s), u_{l+1} = u_l * e^(-t s). If we stop before
/// index L, every remaining E(w) <= w-term/(1 - u_L), so the tail is
/// bounded by u_L / ((1 - u_L)(1 - e^(-t s))).
fn e_times_progression(
    c: u32,
    t: u32,
    s: &BigRational,
    tol: &BigRational,
    prec: u32,
) -> Result<Enclosure> {
    let wp = prec + 32;
    let step = exp(&Enclosure::from_rational(
        &(-s * BigRational::from_integer(BigInt::from(t))),
        wp,
    ));
    let mut u = exp(&Enclosure::from_rational(
        &(-s * BigRational::from_integer(BigInt::from(c))),
        wp,
    ));
    let one = Enclosure::from_i64(1, wp);
    let mut sum = Enclosure::from_i64(0, wp);
    let quarter_tol = tol / BigRational::from_integer(BigInt::from(4));
    for _ in 0..SUM_ITERATION_CAP {
        let denom = one.sub(&u).mul(&one.sub(&step));
        if denom.strictly_positive() {
            let tail_hi = u.div(&denom)?.hi().clone();
            if tail_hi.cmp_rational(&quarter_tol) == std::cmp::Ordering::Less {
                let tail = Enclosure::from_endpoints(Dyadic::zero(), tail_hi, wp);
                return Ok(sum.add(&tail).with_prec(prec));
            }
        }
        sum = sum.add(&u.div(&one.sub(&u))?);
        u = u.mul(&step);
    }
    Err(Error::ToleranceUnachievable {
        cap: SUM_ITERATION_CAP,
    })
}

/// The summatory component at q = e^(-z): one progression over parts
/// congruent to r mod t minus one over the k-divisible ones, which fall
/// on the inverse-residue progression scaled by k.
pub fn l_sum(
    key: &BiasKey,
    r: u32,
    z: &BigRational,
    tol: &BigRational,
    prec: u32,
) -> Result<Enclosure> {
    if !z.is_positive() {
        return Err(Error::Domain("l_sum requires z > 0".into()));
    }
    let rb = rbar(key.k(), key.t(), r)?;
    let zk = z * BigRational::from_integer(BigInt::from(key.k()));
    let first = e_times_progression(r, key.t(), z, tol, prec)?;
    let second = e_times_progression(rb, key.t(), &zk, tol, prec)?;
    Ok(first.sub(&second))
}

/// One point of the major-arc expansion check: the summatory value at a
/// real z and the residual after removing the predicted leading terms.
#[derive(Debug, Clone)]
pub struct MajorArcSample {
    pub key: (u32, u32),
    pub r: u32,
    pub z: BigRational,
    pub l_value: Enclosure,
    pub residual: Enclosure,
}

/// Evaluate the summatory component at q = e^(-z) together with the
/// expansion residual
///
///   z * l_sum + (K/t) ln z - (1/t)(psi(rbar/t)/k - psi(r/t) - K ln t + (ln k)/k),
///
/// which the major-arc analysis makes O(z) as z -> 0+.
pub fn major_arc_sample(
    key: &BiasKey,
    r: u32,
    z: &BigRational,
    prec: u32,
) -> Result<MajorArcSample> {
    if !z.is_positive() || z > &BigRational::new(BigInt::one(), BigInt::from(4)) {
        return Err(Error::Domain(
            "major_arc_sample requires 0 < z <= 1/4".into(),
        ));
    }
    let wp = prec + 16;
    let tol = z * z / BigRational::from_integer(BigInt::from(1u64 << 30));
    let sum = l_sum(key, r, z, &tol, wp)?;
    let kk = k_ratio(key.k());
    let t = key.t();
    let ln_z = ln_rational(z, wp)?;
    let k_over_t = Enclosure::from_rational(
        &BigRational::new(kk.numer().clone(), kk.denom() * BigInt::from(t)),
        wp,
    );

    let rb = rbar(key.k(), key.t(), r)?;
    let psi_r = digamma(&BigRational::new(BigInt::from(r), BigInt::from(t)), wp)?;
    let psi_rb = digamma(&BigRational::new(BigInt::from(rb), BigInt::from(t)), wp)?;
    let ln_t = ln_rational(&BigRational::from_integer(BigInt::from(t)), wp)?;
    let ln_k = ln_rational(&BigRational::from_integer(BigInt::from(key.k())), wp)?;
    let constant = psi_rb
        .div_u32(key.k())
        .sub(&psi_r)
        .sub(&Enclosure::from_rational(&kk, wp).mul(&ln_t))
        .add(&ln_k.div_u32(key.k()))
        .div_u32(t);

    let z_enc = Enclosure::from_rational(z, wp);
    let residual = z_enc
        .mul(&sum)
        .add(&k_over_t.mul(&ln_z))
        .sub(&constant)
        .with_prec(prec);
    Ok(MajorArcSample {
        key: (key.k(), key.t()),
        r,
        z: z.clone(),
        l_value: sum.with_prec(prec),
        residual,
    })
}

/// The residual alone; see [`major_arc_sample`].
pub fn major_arc_residual(key: &BiasKey, r: u32, z: &BigRational, prec: u32) -> Result<Enclosure> {
    Ok(major_arc_sample(key, r, z, prec)?.residual)
}

const PRODUCT_FACTOR_CAP: usize = 1_000_000;

/// prod over m >= 1 (multiples of `skip` excluded) of (1 - x^m)^(-1) for
/// an enclosure 0 < x < 1, with the certified tail
///
///   1 <= prod_{m > M} (1 - x^m)^(-1) <= exp( x^(M+1) / ((1-x)(1-x^(M+1))) ),
///
/// from -ln(1 - y) <= y/(1 - y) summed geometrically.
fn product_inverse(x: &Enclosure, skip: Option<u32>, prec: u32) -> Result<Enclosure> {
    if !x.lo().is_positive() || x.hi().cmp_dyadic(&Dyadic::one()) != std::cmp::Ordering::Less {
        return Err(Error::Domain(
            "product argument must satisfy 0 < x < 1".into(),
        ));
    }
    let wp = prec + 32;
    let one = Enclosure::from_i64(1, wp);
    let mut xpow = Enclosure::from_i64(1, wp);
    let mut prod = Enclosure::from_i64(1, wp);
    let stop = Dyadic::pow2(-(i64::from(prec) + 16));
    for m in 1..=PRODUCT_FACTOR_CAP {
        xpow = xpow.mul(x);
        if skip.is_none_or(|k| m % (k as usize) != 0) {
            prod = prod.mul(&one.div(&one.sub(&xpow))?);
        }
        let x_next = xpow.hi().mul(x.hi());
        let denom = Dyadic::one()
            .sub(x.hi())
            .mul(&Dyadic::one().sub(&x_next))
            .round_to(wp, Round::Down);
        if denom.is_positive() {
            let bound = x_next.div(&denom, wp, Round::Up);
            if bound.cmp_dyadic(&stop) == std::cmp::Ordering::Less {
                let tail_hi = crate::interval::exp_dyadic(&bound, wp).hi().clone();
                let tail = Enclosure::from_endpoints(Dyadic::one(), tail_hi, wp);
                return Ok(prod.mul(&tail).with_prec(prec));
            }
        }
    }
    Err(Error::TruncationBudget {
        cap: PRODUCT_FACTOR_CAP,
    })
}

/// Relative difference between the k-indivisible generating product at
/// q = e^(-z) and its modular-transformation closed form
///
///   (1/sqrt k) exp( pi^2 K / (6z) + z(k-1)/24 ) P(eps^k)/P(eps),
///
/// with eps = e^(-4 pi^2/(k z)) and P the plain partition product.
pub fn xi_transform_check(k: u32, z: &BigRational, prec: u32) -> Result<Enclosure> {
    if k < 2 {
        return Err(Error::InvalidQuery(format!("k must be >= 2, got {k}")));
    }
    if !z.is_positive() || z > &BigRational::one() {
        return Err(Error::Domain(
            "xi_transform_check requires 0 < z <= 1".into(),
        ));
    }
    let wp = prec + 32;
    let q = exp(&Enclosure::from_rational(&-z.clone(), wp));
    let lhs = product_inverse(&q, Some(k), wp)?;

    let pi = pi_const(wp);
    let pi_sq = pi.mul(&pi);
    let kk = k_ratio(k);
    let scale = BigRational::new(kk.numer().clone(), kk.denom() * BigInt::from(6)) / z;
    let lead = pi_sq.mul(&Enclosure::from_rational(&scale, wp));
    let lin = Enclosure::from_rational(
        &(z * BigRational::new(BigInt::from(k - 1), BigInt::from(24))),
        wp,
    );
    let sqrt_k = sqrt(&Enclosure::from_i64(i64::from(k), wp))?;
    let eps_exp = pi_sq.mul(&Enclosure::from_rational(
        &(BigRational::new(BigInt::from(-4), BigInt::from(k)) / z),
        wp,
    ));
    let eps = exp(&eps_exp);
    let mut eps_k = eps.clone();
    for _ in 1..k {
        eps_k = eps_k.mul(&eps);
    }
    let p_eps_k = product_inverse(&eps_k, None, wp)?;
    let p_eps = product_inverse(&eps, None, wp)?;
    let rhs = exp(&lead.add(&lin))
        .div(&sqrt_k)?
        .mul(&p_eps_k)
        .div(&p_eps)?;

    lhs.sub(&rhs).div(&rhs).map(|e| e.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::build_pkx_table;
    use crate::interval::ln2_const;
    use crate::test_util::assert_matches_literal;
    use std::cmp::Ordering as CmpOrdering;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn e_times_at_ln2_is_one() {
        let z = ln2_const(192);
        let v = e_times(&z).unwrap();
        assert!(v.contains_rational(&BigRational::one()));
    }

    #[test]
    fn e_times_at_one() {
        let v = e_times(&Enclosure::from_i64(1, 192)).unwrap();
        assert_matches_literal(
            &v,
            "0.581976706869326424385002005109011558546869301",
            "1/(e-1)",
        );
    }

    #[test]
    fn e_times_decays() {
        let small = e_times(&Enclosure::from_i64(20, 192)).unwrap();
        let tiny = e_times(&Enclosure::from_i64(40, 192)).unwrap();
        assert!(small.strictly_above(&tiny));
        assert!(tiny.strictly_positive());
        assert!(e_times(&Enclosure::from_i64(0, 64)).is_err());
    }

    #[test]
    fn c_kt_two_algebraic_routes() {
        // (K/2) ln(pi sqrt(K/6)) = (K/4) ln(pi^2 K/6)
        let key = BiasKey::new(2, 3).unwrap();
        let direct = c_kt(&key, 192).unwrap();
        let wp = 208;
        let pi = pi_const(wp);
        let kk = rat(1, 2);
        let inner = pi
            .mul(&pi)
            .mul(&Enclosure::from_rational(&(&kk / rat(6, 1)), wp));
        let route_b = crate::interval::ln(&inner)
            .unwrap()
            .mul(&Enclosure::from_rational(&(&kk / rat(4, 1)), wp))
            .sub(&Enclosure::from_rational(&kk, wp).mul(&ln_rational(&rat(3, 1), wp).unwrap()))
            .add(&ln_rational(&rat(2, 1), wp).unwrap().div_u32(2));
        assert!(direct.overlaps(&route_b));
        assert_matches_literal(
            &direct,
            "-0.227163413815232186231863404873769745473982862",
            "C(2,3)",
        );
        assert!(direct.width().cmp_dyadic(&Dyadic::pow2(12 - 192)) == CmpOrdering::Less);
        assert!(c_kt(&BiasKey::new(3, 4).unwrap(), 128).is_ok());
    }

    #[test]
    fn estimator_factors() {
        let key = BiasKey::new(3, 4).unwrap();
        let est = d_hat(&key, 1, 100, 192).unwrap();
        assert!(est.prefactor.strictly_positive());
        assert!(est.value.overlaps(&est.prefactor.mul(&est.bracket)));
        assert!(d_hat(&key, 1, 0, 64).is_err());
    }

    #[test]
    fn q_ratio_reproduces_published_row_start() {
        let key = BiasKey::new(3, 4).unwrap();
        let table = build_pkx_table(3, 10).unwrap();
        let q = q_ratio(&key, 1, 10, &table, 192).unwrap();
        assert_eq!(q.midpoint().to_decimal_string(5), "0.95865");
    }

    /// Direct route oracle: sum over m = r (mod t), k !| m of E(m z) up to
    /// m = cutoff, plus a geometric tail in e^(-z).
    fn l_sum_direct(k: u32, t: u32, r: u32, z: &BigRational, cutoff: u32, wp: u32) -> Enclosure {
        let mut direct = Enclosure::from_i64(0, wp);
        for m in 1..=cutoff {
            if m % k == 0 || m % t != r % t {
                continue;
            }
            let w = Enclosure::from_rational(&(z * rat(i64::from(m), 1)), wp);
            direct = direct.add(&e_times(&w).unwrap());
        }
        // Every omitted term is at most e^(-m z)/(1 - e^(-(cutoff+1) z)).
        let u = exp(&Enclosure::from_rational(
            &(-z * rat(i64::from(cutoff) + 1, 1)),
            wp,
        ));
        let step = exp(&Enclosure::from_rational(&-z.clone(), wp));
        let one = Enclosure::from_i64(1, wp);
        let tail_hi = u
            .div(&one.sub(&u))
            .unwrap()
            .div(&one.sub(&step))
            .unwrap()
            .hi()
            .clone();
        direct.add(&Enclosure::from_endpoints(Dyadic::zero(), tail_hi, wp))
    }

    #[test]
    fn l_sum_matches_direct_summation_on_grid() {
        let tol = rat(1, 1_000_000_000_000_000i64);
        let close = rat(1, 1_000_000_000_000i64);
        for (k, t) in [(3u32, 4u32), (2, 7), (4, 5)] {
            let key = BiasKey::new(k, t).unwrap();
            for r in [1u32, 2] {
                for z in [rat(1, 4), rat(1, 8)] {
                    let fast = l_sum(&key, r, &z, &tol, 192).unwrap();
                    // Cutoff large enough for the direct tail at z >= 1/8.
                    let direct = l_sum_direct(k, t, r, &z, 900, 224);
                    assert!(
                        fast.overlaps(&direct),
                        "summation routes disagree at k={k} t={t} r={r} z={z}"
                    );
                    let gap = fast.midpoint().sub(&direct.midpoint()).abs();
                    assert!(
                        gap.cmp_rational(&close) == CmpOrdering::Less,
                        "routes further than 1e-12 apart at k={k} t={t} r={r} z={z}"
                    );
                }
            }
        }
    }

    #[test]
    fn l_sum_first_allowed_part_dominates() {
        // k=2, t=7, r=2: the smallest odd part congruent to 2 mod 7 is 9,
        // so at z = 2 the sum is pinned near E(18).
        let key = BiasKey::new(2, 7).unwrap();
        let z = rat(2, 1);
        let tol = rat(1, 1_000_000_000_000i64);
        let v = l_sum(&key, 2, &z, &tol, 192).unwrap();
        assert!(v.strictly_positive());
        let first = e_times(&Enclosure::from_rational(&rat(18, 1), 192)).unwrap();
        assert!(!v.strictly_above(&first.shift(1)));
        assert!(!first.strictly_above(&v));
    }

    #[test]
    fn l_sum_smoke_small_z() {
        let key = BiasKey::new(3, 4).unwrap();
        let z = rat(1, 256);
        let tol = rat(1, 1_000_000_000i64);
        assert!(l_sum(&key, 1, &z, &tol, 160).unwrap().strictly_positive());
    }

    #[test]
    fn residual_linear_decay() {
        let key = BiasKey::new(3, 4).unwrap();
        let mut values = Vec::new();
        for j in 3..=10i64 {
            let z = BigRational::new(BigInt::one(), BigInt::from(1i64 << j));
            let res = major_arc_residual(&key, 1, &z, 160).unwrap();
            values.push((j, res));
        }
        // Envelope fitted at the largest z.
        let c = values[0].1.abs().hi().shift(3);
        for (j, res) in &values {
            let bound = c.shift(-j);
            assert!(
                res.abs().hi().cmp_dyadic(&bound) != CmpOrdering::Greater,
                "envelope broken at j={j}"
            );
        }
        // Consecutive ratios approach 2.
        for w in values.windows(2) {
            let ratio = w[0]
                .1
                .midpoint()
                .div(&w[1].1.midpoint(), 64, Round::Down)
                .to_f64();
            assert!((1.5..=2.5).contains(&ratio), "ratio {ratio} out of range");
        }
    }

    #[test]
    fn residual_domain() {
        let key = BiasKey::new(3, 4).unwrap();
        assert!(major_arc_residual(&key, 1, &rat(1, 2), 96).is_err());
        assert!(major_arc_residual(&key, 1, &rat(-1, 8), 96).is_err());
    }

    #[test]
    fn xi_transform_small_cases() {
        let err = xi_transform_check(2, &rat(1, 2), 192).unwrap();
        assert!(err.abs().hi().cmp_rational(&rat(1, 10_000_000_000i64)) == CmpOrdering::Less);
        let err = xi_transform_check(3, &rat(1, 1), 192).unwrap();
        assert!(err.abs().hi().cmp_rational(&rat(1, 100_000_000i64)) == CmpOrdering::Less);
    }
}
