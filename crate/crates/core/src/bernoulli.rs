//! Exact Bernoulli numbers.
//!
//! The cache is built by the tangent-number triangle, which works in pure
//! integers: with T_1, T_2, ... the tangent numbers,
//!
//!   B_{2n} = (-1)^(n-1) * T_n * 2n / (4^n (4^n - 1)),
//!
//! together with B_0 = 1, B_1 = -1/2 and B_{2n+1} = 0 for n > 0. The
//! classical recurrence sum_{j=0}^{n} C(n+1, j) B_j = 0 is kept as an
//! independent cross-check (see tests); the two routes agree exactly.

use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Public index guard; interior consumers size their own caches.
pub const BERNOULLI_GUARD: usize = 1024;

/// Immutable table of exact Bernoulli numbers B_0..=B_max.
#[derive(Debug, Clone)]
pub struct BernoulliCache {
    values: Vec<BigRational>,
}

impl BernoulliCache {
    /// Build B_0..=B_max via tangent numbers.
    pub fn new(max: usize) -> Self {
        let half = max / 2;
        let mut values = vec![BigRational::zero(); max + 1];
        values[0] = BigRational::one();
        if max >= 1 {
            values[1] = BigRational::new(BigInt::from(-1), BigInt::from(2));
        }
        if half >= 1 {
            let tangent = tangent_numbers(half);
            for n in 1..=half {
                let four_n = BigUint::one() << (2 * n);
                let denom = BigInt::from(&four_n * (&four_n - BigUint::one()));
                let mut numer = BigInt::from(tangent[n].clone()) * BigInt::from(2 * n as u64);
                if n % 2 == 0 {
                    numer = -numer;
                }
                values[2 * n] = BigRational::new(numer, denom);
            }
        }
        BernoulliCache { values }
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> &BigRational {
        &self.values[n]
    }
}

/// Tangent numbers T_1..=T_n by the integer triangle.
fn tangent_numbers(n: usize) -> Vec<BigUint> {
    let mut t = vec![BigUint::zero(); n + 1];
    t[1] = BigUint::one();
    for k in 2..=n {
        t[k] = &t[k - 1] * BigUint::from(k as u64 - 1);
    }
    for k in 2..=n {
        for j in k..=n {
            let a = &t[j - 1] * BigUint::from((j - k) as u64);
            let b = &t[j] * BigUint::from((j - k + 2) as u64);
            t[j] = a + b;
        }
    }
    t
}

fn shared_cache() -> &'static Mutex<BernoulliCache> {
    static CACHE: OnceLock<Mutex<BernoulliCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BernoulliCache::new(160)))
}

/// Exact B_n from the shared cache, growing it on demand.
pub fn bernoulli(n: usize) -> Result<BigRational> {
    if n > BERNOULLI_GUARD {
        return Err(Error::BernoulliGuard {
            n,
            guard: BERNOULLI_GUARD,
        });
    }
    let mut cache = shared_cache().lock().unwrap();
    if cache.max_index() < n {
        // Rebuild with headroom; the triangle is quadratic, so growth is batched.
        *cache = BernoulliCache::new(n + n / 2 + 16);
    }
    Ok(cache.get(n).clone())
}
