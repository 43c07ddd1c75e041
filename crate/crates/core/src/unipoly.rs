//! Dense univariate polynomials over exact rationals.
//!
//! Besides the ring operations this module carries the conversion to the
//! binomial basis `C(x,0), C(x,1), ...` and the integer-valuedness test built
//! on it: a rational polynomial maps ℤ into ℤ exactly when all of its
//! binomial-basis coefficients are integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{is_integral, BigInt, BigRational};

/// Coefficient `i` multiplies `x^i`.
///
/// Stored as integer numerators over one positive common denominator, reduced
/// so that the denominator shares no factor with all numerators at once.
/// Trailing zeros are trimmed; the zero polynomial has no numerators and
/// denominator 1. The representation is canonical, so derived equality is
/// value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatPoly {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Default for RatPoly {
    fn default() -> Self {
        RatPoly::zero()
    }
}

impl RatPoly {
    fn normalized(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        while num.last().is_some_and(|c| c.is_zero()) {
            num.pop();
        }
        if num.is_empty() {
            return RatPoly::zero();
        }
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            num.iter_mut().for_each(|c| *c /= &g);
            den /= &g;
        }
        RatPoly { num, den }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::normalized(num, den)
    }

    /// `sum_i num[i] x^i / den`.
    pub fn from_parts(num: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::normalized(num, den)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::normalized(coeffs.iter().map(|&c| BigInt::from(c)).collect(), BigInt::one())
    }

    pub fn zero() -> Self {
        RatPoly {
            num: Vec::new(),
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::normalized(vec![c.numer().clone()], c.denom().clone())
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `x + c`.
    pub fn linear(c: i64) -> Self {
        Self::from_ints(&[c, 1])
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        match self.num.get(i) {
            Some(c) => BigRational::new(c.clone(), self.den.clone()),
            None => BigRational::zero(),
        }
    }

    /// Common denominator of all coefficients.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// `None` for the zero polynomial; `None < Some(d)` for every `d`.
    pub fn degree(&self) -> Option<usize> {
        self.num.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<BigRational> {
        self.degree().map(|d| self.coeff(d))
    }

    /// The constant value if `self` has degree 0 (or is zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.num.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeff(0)),
            _ => None,
        }
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.den.is_one()
    }

    pub fn scale(&self, s: &BigRational) -> RatPoly {
        if s.is_zero() || self.is_zero() {
            return RatPoly::zero();
        }
        Self::normalized(
            self.num.iter().map(|c| c * s.numer()).collect(),
            &self.den * s.denom(),
        )
    }

    pub fn scale_int(&self, s: &BigInt) -> RatPoly {
        if s.is_zero() || self.is_zero() {
            return RatPoly::zero();
        }
        Self::normalized(self.num.iter().map(|c| c * s).collect(), self.den.clone())
    }

    /// Horner evaluation, carried out on integers with one final division.
    pub fn eval(&self, x0: &BigRational) -> BigRational {
        let Some(d) = self.degree() else {
            return BigRational::zero();
        };
        // sum num_i p^i q^(d-i) / (q^d den)
        let (p, q) = (x0.numer(), x0.denom());
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.num.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        BigRational::new(acc, &self.den * q.pow(d as u32))
    }

    pub fn eval_int(&self, x0: i64) -> BigRational {
        let x = BigInt::from(x0);
        let acc = self
            .num
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &x + c);
        BigRational::new(acc, self.den.clone())
    }

    /// `p(q(x))` by Horner's scheme on polynomials.
    pub fn compose(&self, inner: &RatPoly) -> RatPoly {
        let int_part = self.num.iter().rev().fold(RatPoly::zero(), |acc, c| {
            &(&acc * inner) + &Self::normalized(vec![c.clone()], BigInt::one())
        });
        int_part.scale(&BigRational::new(BigInt::one(), self.den.clone()))
    }

    /// `p(-x-1)`. An involution that permutes ℤ, so it preserves
    /// integer-valuedness.
    pub fn flip_sign_argument(&self) -> RatPoly {
        self.compose(&RatPoly::from_ints(&[-1, -1]))
    }

    pub fn pow(&self, e: u32) -> RatPoly {
        (0..e).fold(RatPoly::one(), |acc, _| &acc * self)
    }

    pub fn to_binomial_basis(&self) -> BinomialBasisRep {
        to_binomial_basis(self)
    }

    pub fn is_integer_valued(&self) -> IntegerValued {
        is_integer_valued(self)
    }
}

/// `C(x + shift, k) = (x+shift)(x+shift-1)...(x+shift-k+1) / k!`.
pub fn binom_poly(k: usize, shift: i64) -> RatPoly {
    let mut num = vec![BigInt::one()];
    let mut fact = BigInt::one();
    for i in 0..k {
        // multiply by (x + shift - i)
        let a = BigInt::from(shift - i as i64);
        let mut next = vec![BigInt::zero(); num.len() + 1];
        for (j, c) in num.iter().enumerate() {
            next[j] += c * &a;
            next[j + 1] += c;
        }
        num = next;
        fact *= i + 1;
    }
    RatPoly::from_parts(num, fact)
}

pub fn flip_sign_argument(p: &RatPoly) -> RatPoly {
    p.flip_sign_argument()
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                _ => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let den = self.den.lcm(&rhs.den);
        let fa = &den / &self.den;
        let fb = &den / &rhs.den;
        let mut num = vec![BigInt::zero(); self.num.len().max(rhs.num.len())];
        for (i, c) in self.num.iter().enumerate() {
            num[i] += c * &fa;
        }
        for (i, c) in rhs.num.iter().enumerate() {
            num[i] += c * &fb;
        }
        RatPoly::normalized(num, den)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self + &(-rhs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut num = vec![BigInt::zero(); self.num.len() + rhs.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                num[i + j] += a * b;
            }
        }
        RatPoly::normalized(num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for RatPoly {
    fn sum<I: Iterator<Item = RatPoly>>(iter: I) -> RatPoly {
        iter.fold(RatPoly::zero(), |acc, p| &acc + &p)
    }
}

/// Coefficient `i` multiplies `C(x, i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialBasisRep {
    pub coeffs: Vec<BigRational>,
}

impl BinomialBasisRep {
    pub fn all_integral(&self) -> bool {
        self.coeffs.iter().all(is_integral)
    }

    /// `sum_i coeffs[i] * C(x, i)`.
    pub fn to_poly(&self) -> RatPoly {
        let mut acc = RatPoly::zero();
        let mut basis = RatPoly::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = &acc + &basis.scale(c);
            basis = &basis * &RatPoly::linear(-(i as i64));
            basis = basis.scale(&BigRational::new(BigInt::one(), BigInt::from(i + 1)));
        }
        acc
    }
}

/// Forward differences `Δ^i p(0)` taken from the values `p(0), ..., p(d)`.
pub fn to_binomial_basis(p: &RatPoly) -> BinomialBasisRep {
    let Some(d) = p.degree() else {
        return BinomialBasisRep { coeffs: Vec::new() };
    };
    let mut row: Vec<BigRational> = (0..=d as i64).map(|x| p.eval_int(x)).collect();
    let mut coeffs = Vec::with_capacity(d + 1);
    while !row.is_empty() {
        coeffs.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    BinomialBasisRep { coeffs }
}

pub fn from_binomial_basis(rep: &BinomialBasisRep) -> RatPoly {
    rep.to_poly()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegerValued {
    Yes,
    /// `p(x0)` is not an integer; `x0` is the smallest such point in `0..=deg p`.
    No { x0: i64, value: BigRational },
}

impl IntegerValued {
    pub fn holds(&self) -> bool {
        matches!(self, IntegerValued::Yes)
    }

    pub fn witness(&self) -> Option<String> {
        match self {
            IntegerValued::Yes => None,
            IntegerValued::No { x0, value } => Some(format!("x0={x0} value={value}")),
        }
    }
}

pub fn is_integer_valued(p: &RatPoly) -> IntegerValued {
    if to_binomial_basis(p).all_integral() {
        return IntegerValued::Yes;
    }
    // Some p(x0) with 0 <= x0 <= deg p must be non-integral, otherwise all
    // forward differences at 0 would be integers.
    let d = p.degree().unwrap_or(0) as i64;
    for x0 in 0..=d {
        let value = p.eval_int(x0);
        if !is_integral(&value) {
            return IntegerValued::No { x0, value };
        }
    }
    unreachable!("non-integral binomial coefficients without a witness in 0..=deg")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn ring_ops() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        assert_eq!(&p(&[3, 0, 2]) + &RatPoly::zero(), p(&[3, 0, 2]));
        assert_eq!(
            p(&[0, 1, 1]).scale(&rat(1, 2)),
            RatPoly::from_coeffs(vec![rat(0, 1), rat(1, 2), rat(1, 2)])
        );
        assert_eq!(&p(&[1, 2, 3]) - &p(&[1, 2, 3]), RatPoly::zero());
        assert_eq!(p(&[1, 0, 0]).degree(), Some(0));
    }

    #[test]
    fn zero_degree_sorts_below_everything() {
        assert_eq!(RatPoly::zero().degree(), None);
        assert!(RatPoly::zero().degree() < RatPoly::one().degree());
        assert!(RatPoly::zero().degree() < Some(0));
    }

    #[test]
    fn evaluation() {
        assert_eq!(p(&[1, 0, 1]).eval_int(2), rat(5, 1));
        assert_eq!(p(&[7, 3, 4]).eval_int(0), rat(7, 1));
        assert_eq!(p(&[1, 2, 2]).eval(&rat(-1, 2)), rat(1, 2));
    }

    #[test]
    fn binomial_polynomials() {
        assert_eq!(binom_poly(1, 0), RatPoly::x());
        assert_eq!(
            binom_poly(2, 1),
            RatPoly::from_coeffs(vec![rat(0, 1), rat(1, 2), rat(1, 2)])
        );
        assert_eq!(binom_poly(0, 5), RatPoly::one());
        assert_eq!(binom_poly(0, -3), RatPoly::one());
    }

    #[test]
    fn flip() {
        assert_eq!(RatPoly::x().flip_sign_argument(), p(&[-1, -1]));
        let q = p(&[4, -3, 0, 5]);
        assert_eq!(q.flip_sign_argument().flip_sign_argument(), q);
        // C(-x-1, 2) = (x+1)(x+2)/2
        let expect = (&p(&[1, 1]) * &p(&[2, 1])).scale(&rat(1, 2));
        assert_eq!(flip_sign_argument(&binom_poly(2, 0)), expect);
    }

    #[test]
    fn binomial_basis() {
        assert_eq!(to_binomial_basis(&RatPoly::x()).coeffs, vec![rat(0, 1), rat(1, 1)]);
        assert_eq!(
            to_binomial_basis(&p(&[0, 0, 1])).coeffs,
            vec![rat(0, 1), rat(1, 1), rat(2, 1)]
        );
        assert_eq!(
            to_binomial_basis(&RatPoly::constant(rat(3, 7))).coeffs,
            vec![rat(3, 7)]
        );
        assert!(to_binomial_basis(&RatPoly::zero()).coeffs.is_empty());
    }

    #[test]
    fn integer_valuedness() {
        let tri = (&RatPoly::x() * &p(&[1, 1])).scale(&rat(1, 2));
        assert_eq!(
            to_binomial_basis(&tri).coeffs,
            vec![rat(0, 1), rat(1, 1), rat(1, 1)]
        );
        assert!(tri.is_integer_valued().holds());
        assert_eq!(
            RatPoly::x().scale(&rat(1, 2)).is_integer_valued(),
            IntegerValued::No { x0: 1, value: rat(1, 2) }
        );
        assert!(p(&[3, -4, 0, 9]).is_integer_valued().holds());
        assert!(RatPoly::zero().is_integer_valued().holds());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(RatPoly::zero().to_string(), "0");
        assert_eq!(
            RatPoly::from_coeffs(vec![rat(0, 1), rat(-1, 2)]).to_string(),
            "-1/2*x"
        );
    }
}
