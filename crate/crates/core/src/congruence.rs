//! Integer-side checks: integer-valuedness of the weighted sums of `S_k(x)`,
//! divisibility of the Schmidt-combination coefficients, the `n^2`
//! congruence for the weighted central-binomial sums, and numeric spot checks
//! for higher powers `m` of the convolution.
//!
//! All divisibility verdicts are taken on exact integers.

use num_traits::{One, Zero};

use crate::config_echo;
use crate::exact::{
    binom_int, catalan, divides, double_factorial_odd, is_integral, odd_power, rat_int, sign_power,
    BigInt, BigRational, BinomCache, ExactError, Result,
};
use crate::identity::{family, telescoped_rhs, Side};
use crate::report::{Case, CaseKey, Runner, Severity, VerificationReport};
use crate::unipoly::{binom_poly, IntegerValued, RatPoly};

/// Coefficients of `sum_{k<n} eps^k (2k+1)^(2l-1) S_k(x_0, ..., x_k)` in the
/// Schmidt variables: `coeffs[j]` multiplies `x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchmidtCoeffs {
    pub n: i64,
    pub l: i64,
    pub eps: i8,
    pub coeffs: Vec<BigInt>,
}

impl SchmidtCoeffs {
    /// Index of the first coefficient not divisible by `n`.
    pub fn first_non_multiple(&self) -> Option<usize> {
        let n = BigInt::from(self.n);
        self.coeffs.iter().position(|c| !divides(&n, c))
    }

    /// Substitutes `x_j = C(2j,j) C(x+j,2j)`.
    pub fn specialize(&self) -> RatPoly {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let central = binom_int(2 * j as i64, j as i64).expect("j >= 0");
                binom_poly(2 * j, j as i64).scale_int(&(c * central))
            })
            .sum()
    }
}

pub fn schmidt_combination_coeffs(l: i64, n: i64, eps: i8) -> Result<SchmidtCoeffs> {
    schmidt_with_cache(l, n, eps, &mut BinomCache::default())
}

fn schmidt_with_cache(l: i64, n: i64, eps: i8, cache: &mut BinomCache) -> Result<SchmidtCoeffs> {
    if l < 1 || n < 1 {
        return Err(ExactError::Domain(format!("need l, n >= 1, got l={l} n={n}")));
    }
    let weights: Vec<BigInt> = (0..n)
        .map(|k| odd_power(k, l).map(|w| w * sign_power(eps, k)))
        .collect::<Result<_>>()?;
    let mut coeffs = Vec::with_capacity(n as usize);
    for j in 0..n {
        let central = cache.get(2 * j, j)?;
        let mut acc = BigInt::zero();
        for k in j..n {
            acc += &weights[k as usize] * cache.get(k + j, 2 * j)?;
        }
        coeffs.push(acc * central);
    }
    Ok(SchmidtCoeffs { n, l, eps, coeffs })
}

fn eps_values(eps: &[i8]) -> Vec<i8> {
    let mut v: Vec<i8> = eps.iter().map(|&e| if e < 0 { -1 } else { 1 }).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn eps_echo(eps: &[i8]) -> String {
    eps_values(eps)
        .iter()
        .map(|e| if *e < 0 { "-1" } else { "+1" })
        .collect::<Vec<_>>()
        .join(",")
}

fn grid_l_n_eps(l_max: i64, n_max: i64, eps: &[i8]) -> Vec<(i64, i64, i8)> {
    let eps = eps_values(eps);
    let mut cells = Vec::new();
    for l in 1..=l_max {
        for n in 1..=n_max {
            for &e in &eps {
                cells.push((l, n, e));
            }
        }
    }
    cells
}

fn key_l_n_eps(l: i64, n: i64, eps: i8) -> CaseKey {
    CaseKey::new().with("l", l).with("n", n).with("eps", eps as i64)
}

pub fn check_lemma_schmidt(l_max: i64, n_max: i64, eps: &[i8], runner: &Runner) -> VerificationReport {
    const TASK: &str = "lemma-schmidt";
    let cells = grid_l_n_eps(l_max, n_max, eps);
    let config = config_echo!("l_max" => l_max, "n_max" => n_max, "eps" => eps_echo(eps));
    runner.run(TASK, config, cells, |(l, n, e)| {
        let key = key_l_n_eps(l, n, e);
        let witness = match schmidt_combination_coeffs(l, n, e) {
            Ok(sc) => sc
                .first_non_multiple()
                .map(|j| format!("coeff[{j}] = {} not divisible by {n}", sc.coeffs[j])),
            Err(err) => Some(err.to_string()),
        };
        Case::from_witness(TASK, key, Severity::Theorem, witness)
    })
}

/// `(scale) * sum_{k<n} eps^k (2k+1)^(2l-1) S_k(x)` from precomputed `S_k`.
fn weighted_sum(sk: &[RatPoly], l: i64, n: i64, eps: i8, scale: &BigRational) -> RatPoly {
    let sum: RatPoly = (0..n)
        .map(|k| {
            let w = odd_power(k, l).expect("l >= 1") * sign_power(eps, k);
            sk[k as usize].scale_int(&w)
        })
        .sum();
    sum.scale(scale)
}

fn inv(n: &BigInt) -> BigRational {
    BigRational::new(BigInt::one(), n.clone())
}

pub fn theorem1_polynomial(l: i64, n: i64, eps: i8) -> RatPoly {
    let sk = family(Side::Lhs, n.max(1) as usize - 1, &Runner::serial());
    weighted_sum(&sk, l, n, eps, &inv(&BigInt::from(n)))
}

pub fn check_theorem1(l_max: i64, n_max: i64, eps: &[i8], runner: &Runner) -> VerificationReport {
    const TASK: &str = "theorem1";
    let sk = family(Side::Lhs, n_max.max(1) as usize - 1, runner);
    let cells = grid_l_n_eps(l_max, n_max, eps);
    let config = config_echo!("l_max" => l_max, "n_max" => n_max, "eps" => eps_echo(eps));
    runner.run(TASK, config, cells, |(l, n, e)| {
        let p = weighted_sum(&sk, l, n, e, &inv(&BigInt::from(n)));
        Case::from_witness(TASK, key_l_n_eps(l, n, e), Severity::Theorem, p.is_integer_valued().witness())
    })
}

pub fn theorem2_polynomial(n: i64) -> RatPoly {
    let sk = family(Side::Lhs, n.max(1) as usize - 1, &Runner::serial());
    weighted_sum(&sk, 1, n, 1, &inv(&BigInt::from(n * n)))
}

pub fn check_theorem2(n_max: i64, runner: &Runner) -> VerificationReport {
    const TASK: &str = "theorem2";
    let sk = family(Side::Lhs, n_max.max(1) as usize - 1, runner);
    runner.run(TASK, config_echo!("n_max" => n_max), (1..=n_max).collect(), |n| {
        let p = weighted_sum(&sk, 1, n, 1, &inv(&BigInt::from(n * n)));
        Case::from_witness(TASK, CaseKey::new().with("n", n), Severity::Theorem, p.is_integer_valued().witness())
    })
}

/// `C(n-1,k) C(n+k,k) Cat(k)`, the integer weight of `C(x+k,2k)` in the
/// Catalan form of the `1/n^2` sum.
pub fn catalan_weight(n: i64, k: i64) -> Result<BigInt> {
    Ok(binom_int(n - 1, k)? * binom_int(n + k, k)? * catalan(k)?)
}

/// `sum_{k<n} (1/(k+1)) C(n-1,k) C(n+k,k) C(2k,k) C(x+k,2k)`.
pub fn catalan_form_polynomial(n: i64) -> Result<RatPoly> {
    let mut acc = RatPoly::zero();
    for k in 0..n {
        let w = BigRational::new(binom_int(n - 1, k)? * binom_int(n + k, k)? * binom_int(2 * k, k)?, BigInt::from(k + 1));
        acc = &acc + &binom_poly(2 * k as usize, k).scale(&w);
    }
    Ok(acc)
}

fn catalan_form_witness(n: i64, sk: &[RatPoly], x_min: i64, x_max: i64) -> Result<Option<String>> {
    let lhs = weighted_sum(sk, 1, n, 1, &inv(&BigInt::from(n * n)));
    let rhs = catalan_form_polynomial(n)?;
    if lhs != rhs {
        return Ok(Some(format!("difference {}", &lhs - &rhs)));
    }
    for k in 0..n {
        let weight = catalan_weight(n, k)?;
        let over_k1 = BigRational::new(binom_int(n - 1, k)? * binom_int(n + k, k)? * binom_int(2 * k, k)?, BigInt::from(k + 1));
        for x0 in x_min..=x_max {
            let b = binom_int(x0 + k, 2 * k)?;
            let term = &over_k1 * rat_int(&b);
            if !is_integral(&term) || term != rat_int(&(&weight * &b)) {
                return Ok(Some(format!("summand k={k} at x0={x0} is {term}")));
            }
        }
    }
    Ok(None)
}

pub fn check_catalan_form(n_max: i64, x_min: i64, x_max: i64, runner: &Runner) -> VerificationReport {
    const TASK: &str = "catalan-form";
    let sk = family(Side::Lhs, n_max.max(1) as usize - 1, runner);
    let config = config_echo!("n_max" => n_max, "x_min" => x_min, "x_max" => x_max);
    runner.run(TASK, config, (1..=n_max).collect(), |n| {
        let witness = catalan_form_witness(n, &sk, x_min, x_max).unwrap_or_else(|e| Some(e.to_string()));
        Case::from_witness(TASK, CaseKey::new().with("n", n), Severity::Theorem, witness)
    })
}

/// One cell of the `n^2` congruence grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceCase {
    pub l: i64,
    pub n: i64,
    pub k: i64,
    pub value: BigInt,
    pub modulus: BigInt,
    pub holds: bool,
}

/// `(2l-1)!! sum_{m=k}^{n-1} (2m+1)^(2l-1) C(m+k,2k) C(2k,k)^2` against `n^2`.
pub fn conjecture_final_value(l: i64, n: i64, k: i64) -> Result<CongruenceCase> {
    final_value_with_cache(l, n, k, &mut BinomCache::default())
}

fn final_value_with_cache(l: i64, n: i64, k: i64, cache: &mut BinomCache) -> Result<CongruenceCase> {
    if l < 1 || n < 1 {
        return Err(ExactError::Domain(format!("need l, n >= 1, got l={l} n={n}")));
    }
    if k < 0 || k >= n {
        return Err(ExactError::Domain(format!("need 0 <= k <= n-1, got k={k} n={n}")));
    }
    let mut sum = BigInt::zero();
    for m in k..n {
        sum += odd_power(m, l)? * cache.get(m + k, 2 * k)?;
    }
    let central = cache.get(2 * k, k)?;
    let value = double_factorial_odd(l)? * sum * &central * &central;
    let modulus = BigInt::from(n * n);
    let holds = divides(&modulus, &value);
    Ok(CongruenceCase { l, n, k, value, modulus, holds })
}

/// The `l = 1` closed form `n C(n,k+1) C(n+k,k) C(2k,k)`.
pub fn final_value_closed_form(n: i64, k: i64) -> Result<BigInt> {
    Ok(telescoped_rhs(n, k)? * binom_int(2 * k, k)?)
}

pub fn check_conjecture_final(l_max: i64, n_max: i64, runner: &Runner) -> Result<VerificationReport> {
    const TASK: &str = "conjecture-final";
    if l_max < 1 || n_max < 1 {
        return Err(ExactError::Domain(format!(
            "conjecture-final needs l_max, n_max >= 1, got l_max={l_max} n_max={n_max}"
        )));
    }
    // Rows are independent in l, so one cell per (l, n) keeps the memo useful.
    let cells: Vec<(i64, i64)> = (1..=l_max).flat_map(|l| (1..=n_max).map(move |n| (l, n))).collect();
    let config = config_echo!("l_max" => l_max, "n_max" => n_max);
    let rows = runner.map(cells, |(l, n)| {
        let mut cache = BinomCache::default();
        (0..n).map(|k| final_case(l, n, k, &mut cache)).collect::<Vec<_>>()
    });
    Ok(VerificationReport::new(TASK, config, rows.into_iter().flatten().collect()))
}

fn final_case(l: i64, n: i64, k: i64, cache: &mut BinomCache) -> Case {
    const TASK: &str = "conjecture-final";
    let key = CaseKey::new().with("l", l).with("n", n).with("k", k);
    let severity = if l == 1 { Severity::Theorem } else { Severity::Conjecture };
    let cc = match final_value_with_cache(l, n, k, cache) {
        Ok(cc) => cc,
        Err(e) => return Case::fail(TASK, key, severity, e.to_string()),
    };
    let mut witness = (!cc.holds).then(|| format!("value={} mod {} = {}", cc.value, cc.modulus, &cc.value % &cc.modulus));
    if l == 1 && witness.is_none() {
        match final_value_closed_form(n, k) {
            Ok(v) if v == cc.value => {}
            Ok(v) => witness = Some(format!("value={} but n*C(n,k+1)*C(n+k,k)*C(2k,k)={v}", cc.value)),
            Err(e) => witness = Some(e.to_string()),
        }
    }
    Case::from_witness(TASK, key, severity, witness)
}

/// `sum_j C(-x0-1,j)^m C(x0,k-j)^m`.
pub fn power_convolution(m: u32, k: i64, x0: i64, cache: &mut BinomCache) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    for j in 0..=k {
        let a = cache.get(-x0 - 1, j)?;
        let b = cache.get(x0, k - j)?;
        acc += (a * b).pow(m);
    }
    Ok(acc)
}

/// Numerator `sum_{k<n} eps^k (2k+1)^(2l-1) sum_j C(-x0-1,j)^m C(x0,k-j)^m`;
/// the conjectured integrality is divisibility of this by `n`.
pub fn sun_m_numerator(m: u32, l: i64, n: i64, eps: i8, x0: i64) -> Result<BigInt> {
    let mut cache = BinomCache::default();
    let inner: Vec<BigInt> = (0..n).map(|k| power_convolution(m, k, x0, &mut cache)).collect::<Result<_>>()?;
    weighted_numerator(&inner, l, n, eps)
}

fn weighted_numerator(inner: &[BigInt], l: i64, n: i64, eps: i8) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    for k in 0..n {
        acc += odd_power(k, l)? * sign_power(eps, k) * &inner[k as usize];
    }
    Ok(acc)
}

/// Whether the sampled points determine the polynomial in `x`, whose degree is
/// at most `m (n-1)`.
pub fn sun_m_regime(m: u32, n: i64, x_min: i64, x_max: i64) -> (bool, i64, i64) {
    let degree = m as i64 * (n - 1);
    let points = (x_max - x_min + 1).max(0);
    (points > degree, degree, points)
}

#[allow(clippy::too_many_arguments)]
pub fn check_conjecture_sun_m(
    m: u32,
    l_max: i64,
    n_max: i64,
    eps: &[i8],
    x_min: i64,
    x_max: i64,
    runner: &Runner,
) -> VerificationReport {
    const TASK: &str = "conjecture-sun-m";
    let config = config_echo!(
        "m" => m, "l_max" => l_max, "n_max" => n_max, "eps" => eps_echo(eps),
        "x_min" => x_min, "x_max" => x_max,
    );
    // Inner convolutions depend only on (x0, k); share them across all cells.
    let xs: Vec<i64> = (x_min..=x_max).collect();
    let table: Vec<Result<Vec<BigInt>>> = runner.map(xs.clone(), |x0| {
        let mut cache = BinomCache::default();
        (0..n_max).map(|k| power_convolution(m, k, x0, &mut cache)).collect()
    });
    let severity = if m <= 2 { Severity::Theorem } else { Severity::Conjecture };
    let cells = grid_l_n_eps(l_max, n_max, eps);
    runner.run(TASK, config, cells, |(l, n, e)| {
        let key = CaseKey::new().with("m", m as i64).with("l", l).with("n", n).with("eps", e as i64);
        let (complete, degree, points) = sun_m_regime(m, n, x_min, x_max);
        let note = format!(
            "{} (degree <= {degree}, {points} points)",
            if complete { "complete" } else { "spot check" }
        );
        let modulus = BigInt::from(n);
        let mut witness = None;
        for (x0, inner) in xs.iter().zip(&table) {
            let verdict = inner
                .as_ref()
                .map_err(|e| e.clone())
                .and_then(|inner| weighted_numerator(inner, l, n, e));
            match verdict {
                Ok(num) if divides(&modulus, &num) => {}
                Ok(num) => {
                    witness = Some(format!("x0={x0} value={}", BigRational::new(num, modulus.clone())));
                    break;
                }
                Err(err) => {
                    witness = Some(err.to_string());
                    break;
                }
            }
        }
        Case::from_witness(TASK, key, severity, witness).with_note(note)
    })
}

/// `((2l-1)!!/n^2) sum_{k<n} (2k+1)^(2l-1) S_k(x)`.
pub fn sun_ii_polynomial(l: i64, n: i64) -> RatPoly {
    let sk = family(Side::Lhs, n.max(1) as usize - 1, &Runner::serial());
    sun_ii_from(&sk, l, n)
}

fn sun_ii_from(sk: &[RatPoly], l: i64, n: i64) -> RatPoly {
    let scale = BigRational::new(double_factorial_odd(l).expect("l >= 1"), BigInt::from(n * n));
    weighted_sum(sk, l, n, 1, &scale)
}

pub fn check_conjecture_sun_ii(l_max: i64, n_max: i64, runner: &Runner) -> VerificationReport {
    const TASK: &str = "conjecture-sun-ii";
    let sk = family(Side::Lhs, n_max.max(1) as usize - 1, runner);
    let cells: Vec<(i64, i64)> = (1..=l_max).flat_map(|l| (1..=n_max).map(move |n| (l, n))).collect();
    runner.run(TASK, config_echo!("l_max" => l_max, "n_max" => n_max), cells, |(l, n)| {
        let severity = if l == 1 { Severity::Theorem } else { Severity::Conjecture };
        let verdict = sun_ii_from(&sk, l, n).is_integer_valued();
        Case::from_witness(TASK, CaseKey::new().with("l", l).with("n", n), severity, verdict.witness())
    })
}

/// `n * p` has integer binomial-basis coefficients. Weaker than `p` being
/// integer-valued; holds whenever `p` is built correctly.
pub fn scaled_integer_valued(p: &RatPoly, n: i64) -> bool {
    matches!(p.scale_int(&BigInt::from(n)).is_integer_valued(), IntegerValued::Yes)
}
