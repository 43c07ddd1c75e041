//! Integer Laurent polynomials in `q`, Gaussian binomials, and the
//! `[n]^2` congruence for the q-weighted central-binomial sums.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::config_echo;
use crate::congruence::conjecture_final_value;
use crate::exact::{binom_int, is_integral, BigInt, BigRational, ExactError, Result};
use crate::report::{Case, CaseKey, Runner, Severity, VerificationReport};

/// `sum_i coeffs[i] q^(min_exp + i)`. Both ends of `coeffs` are nonzero; the
/// zero polynomial has no coefficients and `min_exp = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    min_exp: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn new(min_exp: i64, mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return LaurentPoly::zero();
        }
        coeffs.drain(..lead);
        LaurentPoly {
            min_exp: min_exp + lead as i64,
            coeffs,
        }
    }

    pub fn from_ints(min_exp: i64, coeffs: &[i64]) -> Self {
        Self::new(min_exp, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        LaurentPoly { min_exp: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c q^e`.
    pub fn monomial(c: i64, e: i64) -> Self {
        Self::from_ints(e, &[c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Exponent of the top term, `None` for zero.
    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.min_exp + self.coeffs.len() as i64 - 1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        let i = e - self.min_exp;
        if i < 0 {
            return BigInt::zero();
        }
        self.coeffs.get(i as usize).cloned().unwrap_or_else(BigInt::zero)
    }

    /// `q^s * self`.
    pub fn shift(&self, s: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            min_exp: self.min_exp + s,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.min_exp >= 0
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.min_exp + i as i64;
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            match (e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                _ => write!(f, "{a}*")?,
            }
            match e {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.min_exp.min(rhs.min_exp);
        let hi = self.max_exp().max(rhs.max_exp()).expect("nonzero");
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for p in [self, rhs] {
            let off = (p.min_exp - lo) as usize;
            for (i, c) in p.coeffs.iter().enumerate() {
                coeffs[off + i] += c;
            }
        }
        LaurentPoly::new(lo, coeffs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.min_exp + rhs.min_exp, coeffs)
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> LaurentPoly {
        iter.fold(LaurentPoly::zero(), |acc, p| &acc + &p)
    }
}

/// `[n] = 1 + q + ... + q^(n-1)`.
pub fn q_integer(n: i64) -> Result<LaurentPoly> {
    if n < 1 {
        return Err(ExactError::Domain(format!("q-integer needs n >= 1, got {n}")));
    }
    Ok(LaurentPoly::new(0, vec![BigInt::one(); n as usize]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QBinomial {
    pub n: i64,
    pub k: i64,
    pub value: LaurentPoly,
}

/// Gaussian binomial rows built with `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
#[derive(Debug, Clone)]
pub struct QBinomTable {
    rows: Vec<Vec<LaurentPoly>>,
}

impl QBinomTable {
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<LaurentPoly>> = vec![vec![LaurentPoly::one()]];
        for n in 1..=n_max {
            let prev = &rows[n - 1];
            let row: Vec<LaurentPoly> = (0..=n)
                .map(|k| {
                    let left = if k == 0 { LaurentPoly::zero() } else { prev[k - 1].clone() };
                    let right = prev.get(k).map_or_else(LaurentPoly::zero, |p| p.shift(k as i64));
                    &left + &right
                })
                .collect();
            rows.push(row);
        }
        QBinomTable { rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// Zero when `k > n`. Panics if `n` exceeds the table.
    pub fn get(&self, n: usize, k: usize) -> LaurentPoly {
        self.rows[n].get(k).cloned().unwrap_or_else(LaurentPoly::zero)
    }
}

pub fn q_binom(n: i64, k: i64) -> Result<QBinomial> {
    if n < 0 || k < 0 {
        return Err(ExactError::Domain(format!("q-binomial needs n, k >= 0, got n={n} k={k}")));
    }
    let value = if k > n {
        LaurentPoly::zero()
    } else {
        // Only the last row is needed; build it without keeping the table.
        let k = k as usize;
        let mut row = vec![LaurentPoly::one()];
        for m in 1..=n as usize {
            let next: Vec<LaurentPoly> = (0..=m.min(k))
                .map(|j| {
                    let left = if j == 0 { LaurentPoly::zero() } else { row[j - 1].clone() };
                    let right = row.get(j).map_or_else(LaurentPoly::zero, |p| p.shift(j as i64));
                    &left + &right
                })
                .collect();
            row = next;
        }
        row.swap_remove(k)
    };
    Ok(QBinomial { n, k, value })
}

/// Result of dividing one Laurent polynomial by another over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LaurentDivision {
    Divides(LaurentPoly),
    /// The rational long division left a nonzero remainder.
    Remainder(Vec<BigRational>),
    /// The division is exact over ℚ but the quotient is not integral.
    NonIntegralQuotient(Vec<BigRational>),
}

impl LaurentDivision {
    pub fn holds(&self) -> bool {
        matches!(self, LaurentDivision::Divides(_))
    }

    pub fn witness(&self) -> Option<String> {
        let show = |v: &[BigRational]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        match self {
            LaurentDivision::Divides(_) => None,
            LaurentDivision::Remainder(r) => Some(format!("remainder coefficients [{}]", show(r))),
            LaurentDivision::NonIntegralQuotient(q) => Some(format!("non-integral quotient [{}]", show(q))),
        }
    }
}

/// Decides `g | f` in ℤ[q, 1/q].
///
/// Both operands are shifted so their lowest terms sit at `q^0`; `q` is a unit,
/// and two polynomials with nonzero constant terms divide in the Laurent ring
/// exactly when they divide in ℤ[q].
pub fn laurent_divisible(f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentDivision> {
    if g.is_zero() {
        return Err(ExactError::Domain("division by the zero Laurent polynomial".into()));
    }
    if f.is_zero() {
        return Ok(LaurentDivision::Divides(LaurentPoly::zero()));
    }
    let num: Vec<BigRational> = f.coeffs.iter().cloned().map(BigRational::from_integer).collect();
    let den: Vec<BigRational> = g.coeffs.iter().cloned().map(BigRational::from_integer).collect();
    if num.len() < den.len() {
        return Ok(LaurentDivision::Remainder(num));
    }
    let (quot, rem) = poly_div_rem(num, &den);
    if rem.iter().any(|c| !c.is_zero()) {
        return Ok(LaurentDivision::Remainder(rem));
    }
    if !quot.iter().all(is_integral) {
        return Ok(LaurentDivision::NonIntegralQuotient(quot));
    }
    let q = LaurentPoly::new(f.min_exp - g.min_exp, quot.into_iter().map(|c| c.to_integer()).collect());
    Ok(LaurentDivision::Divides(q))
}

/// Schoolbook long division, coefficients in ascending order. `den` has a
/// nonzero top coefficient.
fn poly_div_rem(mut num: Vec<BigRational>, den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let dl = den.len();
    let lead = den.last().expect("nonzero divisor").clone();
    let mut quot = vec![BigRational::zero(); num.len() + 1 - dl];
    for i in (0..quot.len()).rev() {
        let c = &num[i + dl - 1] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            num[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    num.truncate(dl - 1);
    (quot, num)
}

/// `sum_{m=k}^{n-1} [2m+1] [m+k, 2k] [2k, k]^2 q^(-(k+1)m)`.
pub fn q_sun_sum(n: i64, k: i64) -> Result<LaurentPoly> {
    if n < 1 || k < 0 || k >= n {
        return Err(ExactError::Domain(format!("need 0 <= k <= n-1, got n={n} k={k}")));
    }
    let table = QBinomTable::new((2 * n) as usize);
    Ok(q_sun_sum_with(&table, n, k))
}

fn q_sun_sum_with(table: &QBinomTable, n: i64, k: i64) -> LaurentPoly {
    let central = table.get(2 * k as usize, k as usize).pow(2);
    (k..n)
        .map(|m| {
            let qi = q_integer(2 * m + 1).expect("2m+1 >= 1");
            let b = table.get((m + k) as usize, 2 * k as usize);
            (&(&qi * &b) * &central).shift(-(k + 1) * m)
        })
        .sum()
}

fn nk_cells(n_max: i64) -> Vec<(i64, i64)> {
    (1..=n_max).flat_map(|n| (0..n).map(move |k| (n, k))).collect()
}

pub fn check_q_sun(n_max: i64, runner: &Runner) -> VerificationReport {
    const TASK: &str = "q-sun";
    let table = QBinomTable::new((2 * n_max.max(0)) as usize);
    runner.run(TASK, config_echo!("n_max" => n_max), nk_cells(n_max), |(n, k)| {
        let key = CaseKey::new().with("n", n).with("k", k);
        let f = q_sun_sum_with(&table, n, k);
        let g = q_integer(n).expect("n >= 1").pow(2);
        let witness = match laurent_divisible(&f, &g) {
            Ok(d) => d.witness(),
            Err(e) => Some(e.to_string()),
        };
        Case::from_witness(TASK, key, Severity::Theorem, witness)
    })
}

pub fn q_specialization_check(n_max: i64, runner: &Runner) -> VerificationReport {
    const TASK: &str = "q-specialize";
    let table = QBinomTable::new((2 * n_max.max(0)) as usize);
    runner.run(TASK, config_echo!("n_max" => n_max), nk_cells(n_max), |(n, k)| {
        let key = CaseKey::new().with("n", n).with("k", k);
        let at_one = q_sun_sum_with(&table, n, k).at_one();
        let witness = match conjecture_final_value(1, n, k) {
            Ok(cc) if cc.value == at_one => None,
            Ok(cc) => Some(format!("q=1 gives {at_one}, integer sum is {}", cc.value)),
            Err(e) => Some(e.to_string()),
        };
        Case::from_witness(TASK, key, Severity::Theorem, witness)
    })
}

/// Gaussian-coefficient sanity: degree `k(n-k)`, value `C(n,k)` at `q = 1`,
/// non-negative coefficients.
pub fn q_binom_shape_ok(b: &QBinomial) -> bool {
    if b.k > b.n {
        return b.value.is_zero();
    }
    let deg_ok = b.value.min_exp() == 0 && b.value.max_exp() == Some(b.k * (b.n - b.k));
    let one_ok = binom_int(b.n, b.k).is_ok_and(|c| c == b.value.at_one());
    deg_ok && one_ok && b.value.coeffs().iter().all(|c| !c.is_negative())
}
