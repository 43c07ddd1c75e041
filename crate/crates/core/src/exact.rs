//! Exact integer and rational scalars plus the combinatorial primitives
//! every other module is built from.
//!
//! Big numbers come from `num-bigint` / `num-rational`; this module adds the
//! generalized binomial coefficient (integer or rational upper argument),
//! odd double factorials, the odd-power weights `(2k+1)^(2l-1)` and Catalan
//! numbers.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("negative lower index k = {0}")]
    NegativeIndex(i64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{numerator} is not divisible by {denominator}")]
    NotDivisible {
        numerator: BigInt,
        denominator: BigInt,
    },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, ExactError>;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Divides `a` by `b`, failing unless the division is exact.
pub fn exact_div(a: &BigInt, b: &BigInt) -> Result<BigInt> {
    if b.is_zero() {
        return Err(ExactError::Domain("division by zero".into()));
    }
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(ExactError::NotDivisible {
            numerator: a.clone(),
            denominator: b.clone(),
        })
    }
}

/// `n(n-1)...(n-k+1)/k!` for any integer `n`.
///
/// The running product is divided by `i + 1` after each factor, so every
/// intermediate is itself a binomial coefficient and stays integral.
pub fn binom_int(n: i64, k: i64) -> Result<BigInt> {
    if k < 0 {
        return Err(ExactError::NegativeIndex(k));
    }
    if n >= 0 && k > n {
        return Ok(BigInt::zero());
    }
    // C(n, k) = C(n, n - k) keeps the loop short for large k.
    let k = if n >= 0 && 2 * k > n { n - k } else { k };
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// Generalized binomial `r(r-1)...(r-k+1)/k!` with rational `r`.
pub fn binom_rat(r: &BigRational, k: i64) -> Result<BigRational> {
    if k < 0 {
        return Err(ExactError::NegativeIndex(k));
    }
    let mut acc = BigRational::one();
    let mut factor = r.clone();
    let one = BigRational::one();
    for i in 0..k {
        acc *= &factor;
        acc /= BigRational::from_integer(BigInt::from(i + 1));
        factor -= &one;
    }
    Ok(acc)
}

/// `(2l-1)!! = 1 * 3 * ... * (2l-1)`.
pub fn double_factorial_odd(l: i64) -> Result<BigInt> {
    if l < 1 {
        return Err(ExactError::Domain(format!("double factorial needs l >= 1, got {l}")));
    }
    Ok((1..=l).fold(BigInt::one(), |acc, i| acc * (2 * i - 1)))
}

/// The weight `(2k+1)^(2l-1)`.
pub fn odd_power(k: i64, l: i64) -> Result<BigInt> {
    if l < 1 {
        return Err(ExactError::Domain(format!("odd power needs l >= 1, got {l}")));
    }
    Ok(num_traits::pow(BigInt::from(2 * k + 1), (2 * l - 1) as usize))
}

/// `eps^k` for `eps = +1 / -1`.
pub fn sign_power(eps: i8, k: i64) -> i64 {
    if eps < 0 && k.is_odd() {
        -1
    } else {
        1
    }
}

/// `C(2k,k)/(k+1)`, cross-checked against `C(2k,k) - C(2k,k-1)`.
pub fn catalan(k: i64) -> Result<BigInt> {
    if k < 0 {
        return Err(ExactError::NegativeIndex(k));
    }
    let central = binom_int(2 * k, k)?;
    let value = exact_div(&central, &BigInt::from(k + 1))?;
    // C(2k, -1) is taken as 0 here and nowhere else.
    let below = if k == 0 { BigInt::zero() } else { binom_int(2 * k, k - 1)? };
    if &central - &below != value {
        return Err(ExactError::Inconsistent(format!(
            "catalan({k}): C(2k,k)/(k+1) = {value} but C(2k,k) - C(2k,k-1) = {}",
            &central - &below
        )));
    }
    Ok(value)
}

pub fn is_integral(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// True iff `modulus` divides `value` (exact, no prior reduction).
pub fn divides(modulus: &BigInt, value: &BigInt) -> bool {
    if modulus.is_zero() {
        return value.is_zero();
    }
    (value % modulus.abs()).is_zero()
}

/// Bounded memo for `binom_int`, meant to be owned by one worker.
///
/// When the table reaches `capacity` entries it is cleared wholesale.
#[derive(Debug, Clone)]
pub struct BinomCache {
    map: HashMap<(i64, i64), BigInt>,
    capacity: usize,
}

impl Default for BinomCache {
    fn default() -> Self {
        Self::with_capacity(1 << 16)
    }
}

impl BinomCache {
    pub fn with_capacity(capacity: usize) -> Self {
        BinomCache {
            map: HashMap::new(),
            capacity: capacity.max(1),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&mut self, n: i64, k: i64) -> Result<BigInt> {
        if let Some(v) = self.map.get(&(n, k)) {
            return Ok(v.clone());
        }
        let v = binom_int(n, k)?;
        if self.map.len() >= self.capacity {
            self.map.clear();
        }
        self.map.insert((n, k), v.clone());
        Ok(v)
    }
}
