//! Both sides of the square-convolution transformation
//!
//! ```text
//! S_n(x) = sum_k C(-x-1,k)^2 C(x,n-k)^2 = sum_k C(n+k,2k) C(2k,k)^2 C(x+k,2k)
//! ```
//!
//! as exact polynomials, together with the order-2 recurrence both sides
//! satisfy, Chu-Vandermonde for the unsquared convolution, the telescoped
//! weight sum used for the `1/n^2` theorem, and two half-integer identities of
//! the same flavour.

use num_traits::Zero;

use crate::config_echo;
use crate::exact::{binom_int, binom_rat, rat, rat_int, BigInt, BigRational, ExactError, Result};
use crate::report::{Case, CaseKey, Runner, Severity, VerificationReport};
use crate::unipoly::{binom_poly, RatPoly};

/// Which closed form of `S_n(x)` a polynomial came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

impl Side {
    pub fn build(self, n: usize) -> RatPoly {
        match self {
            Side::Lhs => build_lhs(n),
            Side::Rhs => build_rhs(n),
        }
    }

    fn code(self) -> i64 {
        match self {
            Side::Lhs => 1,
            Side::Rhs => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Side::Lhs => "convolution form",
            Side::Rhs => "Schmidt form",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformPair {
    pub n: usize,
    pub lhs: RatPoly,
    pub rhs: RatPoly,
}

impl TransformPair {
    pub fn new(n: usize) -> Self {
        TransformPair {
            n,
            lhs: build_lhs(n),
            rhs: build_rhs(n),
        }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `sum_{k=0}^n C(-x-1,k)^2 C(x,n-k)^2`.
pub fn build_lhs(n: usize) -> RatPoly {
    let squares: Vec<RatPoly> = (0..=n).map(|j| binom_poly(j, 0).pow(2)).collect();
    (0..=n)
        .map(|k| &squares[k].flip_sign_argument() * &squares[n - k])
        .sum()
}

/// `sum_{k=0}^n C(n+k,2k) C(2k,k)^2 C(x+k,2k)`.
pub fn build_rhs(n: usize) -> RatPoly {
    let n = n as i64;
    (0..=n)
        .map(|k| {
            let w = binom_int(n + k, 2 * k).expect("k >= 0") * binom_int(2 * k, k).expect("k >= 0").pow(2);
            binom_poly(2 * k as usize, k).scale_int(&w)
        })
        .sum()
}

/// `S_0, ..., S_{n_max}` from one closed form.
pub fn family(side: Side, n_max: usize, runner: &Runner) -> Vec<RatPoly> {
    runner.map((0..=n_max).collect(), |n| side.build(n))
}

pub fn verify_transformation(n_max: usize, runner: &Runner) -> VerificationReport {
    const TASK: &str = "transform";
    runner.run(TASK, config_echo!("n_max" => n_max), (0..=n_max).collect(), |n| {
        let pair = TransformPair::new(n);
        let key = CaseKey::new().with("n", n as i64);
        let witness = if pair.holds() {
            None
        } else {
            Some(format!("lhs - rhs = {}", &pair.lhs - &pair.rhs))
        };
        Case::from_witness(TASK, key, Severity::Theorem, witness)
    })
}

/// Trailing coefficient of the order-2 recurrence.
///
/// `Printed` is `3n^2+3n+1`, the form the recurrence is usually quoted in;
/// it only holds at `n = 0`. `Cubic` is `(n+1)^3`, which holds for all `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Trailing {
    Printed,
    #[default]
    Cubic,
}

impl Trailing {
    pub fn coefficient(self, n: i64) -> BigInt {
        match self {
            Trailing::Printed => BigInt::from(3 * n * n + 3 * n + 1),
            Trailing::Cubic => BigInt::from(n + 1).pow(3),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Trailing::Printed => "3n^2+3n+1",
            Trailing::Cubic => "(n+1)^3",
        }
    }
}

/// `(n+2)^3 S_{n+2} - (2n+3)(2x^2+2x+n^2+3n+3) S_{n+1} + c(n) S_n`.
pub fn recurrence_residual(
    trailing: Trailing,
    n: usize,
    s0: &RatPoly,
    s1: &RatPoly,
    s2: &RatPoly,
) -> RatPoly {
    let n = n as i64;
    let c2 = BigInt::from((n + 2).pow(3));
    let mid = RatPoly::from_ints(&[n * n + 3 * n + 3, 2, 2]).scale_int(&BigInt::from(2 * n + 3));
    let c0 = trailing.coefficient(n);
    &(&s2.scale_int(&c2) - &(&mid * s1)) + &s0.scale_int(&c0)
}

/// Checks the recurrence separately on each closed form for
/// `0 <= n <= n_max - 2`, plus equality of the two forms at `n = 0, 1`.
///
/// Key field `form`: 0 = base case, 1 = convolution form, 2 = Schmidt form.
pub fn verify_recurrence(n_max: usize, trailing: Trailing, runner: &Runner) -> VerificationReport {
    const TASK: &str = "recurrence";
    let top = n_max.max(1);
    let lhs = family(Side::Lhs, top, runner);
    let rhs = family(Side::Rhs, top, runner);
    let mut cells: Vec<(usize, Option<Side>)> = vec![(0, None), (1, None)];
    for n in 0..=n_max.saturating_sub(2) {
        if n + 2 <= n_max {
            cells.push((n, Some(Side::Lhs)));
            cells.push((n, Some(Side::Rhs)));
        }
    }
    let config = config_echo!("n_max" => n_max, "trailing" => trailing.label());
    runner.run(TASK, config, cells, |(n, side)| {
        let form = side.map_or(0, Side::code);
        let key = CaseKey::new().with("n", n as i64).with("form", form);
        match side {
            None => {
                let witness = (lhs[n] != rhs[n]).then(|| format!("base case differs: {}", &lhs[n] - &rhs[n]));
                Case::from_witness(TASK, key, Severity::Theorem, witness).with_note("base case lhs = rhs")
            }
            Some(side) => {
                let fam = if side == Side::Lhs { &lhs } else { &rhs };
                let res = recurrence_residual(trailing, n, &fam[n], &fam[n + 1], &fam[n + 2]);
                let witness = (!res.is_zero()).then(|| format!("residual {res}"));
                Case::from_witness(TASK, key, Severity::Theorem, witness).with_note(side.label())
            }
        }
    })
}

/// `sum_j C(-x-1,j) C(x,k-j)` as a polynomial.
pub fn chu_vandermonde_sum(k: usize) -> RatPoly {
    (0..=k)
        .map(|j| &binom_poly(j, 0).flip_sign_argument() * &binom_poly(k - j, 0))
        .sum()
}

pub fn verify_chu_vandermonde(k_max: usize, runner: &Runner) -> VerificationReport {
    const TASK: &str = "chu-vandermonde";
    runner.run(TASK, config_echo!("k_max" => k_max), (0..=k_max).collect(), |k| {
        let sum = chu_vandermonde_sum(k);
        let expect = RatPoly::constant(rat(if k % 2 == 0 { 1 } else { -1 }, 1));
        let witness = (sum != expect).then(|| format!("sum = {sum}"));
        Case::from_witness(TASK, CaseKey::new().with("k", k as i64), Severity::Theorem, witness)
    })
}

/// Left side `sum_{m=k}^{n-1} (2m+1) C(m+k,2k) C(2k,k)`.
pub fn telescoped_lhs(n: i64, k: i64) -> Result<BigInt> {
    let central = binom_int(2 * k, k)?;
    let mut acc = BigInt::zero();
    for m in k..n {
        acc += binom_int(m + k, 2 * k)? * (2 * m + 1);
    }
    Ok(acc * central)
}

/// Right side `n C(n,k+1) C(n+k,k)`.
pub fn telescoped_rhs(n: i64, k: i64) -> Result<BigInt> {
    Ok(binom_int(n, k + 1)? * binom_int(n + k, k)? * n)
}

pub fn verify_telescoped_sum(n_max: usize, runner: &Runner) -> VerificationReport {
    const TASK: &str = "telescope";
    let cells: Vec<(i64, i64)> = (1..=n_max as i64).flat_map(|n| (0..n).map(move |k| (n, k))).collect();
    runner.run(TASK, config_echo!("n_max" => n_max), cells, |(n, k)| {
        let key = CaseKey::new().with("n", n).with("k", k);
        let witness = match (telescoped_lhs(n, k), telescoped_rhs(n, k)) {
            (Ok(a), Ok(b)) if a == b => None,
            (Ok(a), Ok(b)) => Some(format!("lhs={a} rhs={b}")),
            (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
        };
        Case::from_witness(TASK, key, Severity::Theorem, witness)
    })
}

/// Both sides of `16^n sum C(-1/2,k)^2 C(-1/2,n-k)^2 = sum C(2k,k)^3 C(k,n-k) (-16)^(n-k)`.
pub fn sun_identity_one_sides(n: i64) -> Result<(BigRational, BigRational)> {
    let half = rat(-1, 2);
    let mut lhs = BigRational::zero();
    for k in 0..=n {
        let a = binom_rat(&half, k)?;
        let b = binom_rat(&half, n - k)?;
        lhs += &a * &a * &b * &b;
    }
    lhs *= rat_int(&BigInt::from(16).pow(n as u32));
    let mut rhs = BigInt::zero();
    for k in 0..=n {
        rhs += binom_int(2 * k, k)?.pow(3) * binom_int(k, n - k)? * BigInt::from(-16).pow((n - k) as u32);
    }
    Ok((lhs, rat_int(&rhs)))
}

/// Both sides of `64^n sum C(-1/4,k)^2 C(-3/4,n-k)^2 = sum C(2k,k)^3 C(2n-2k,n-k) 16^(n-k)`.
pub fn sun_identity_two_sides(n: i64) -> Result<(BigRational, BigRational)> {
    let quarter = rat(-1, 4);
    let three_quarters = rat(-3, 4);
    let mut lhs = BigRational::zero();
    for k in 0..=n {
        let a = binom_rat(&quarter, k)?;
        let b = binom_rat(&three_quarters, n - k)?;
        lhs += &a * &a * &b * &b;
    }
    lhs *= rat_int(&BigInt::from(64).pow(n as u32));
    let mut rhs = BigInt::zero();
    for k in 0..=n {
        rhs += binom_int(2 * k, k)?.pow(3) * binom_int(2 * n - 2 * k, n - k)? * BigInt::from(16).pow((n - k) as u32);
    }
    Ok((lhs, rat_int(&rhs)))
}

fn rational_identity_report(
    task: &str,
    n_max: usize,
    runner: &Runner,
    sides: fn(i64) -> Result<(BigRational, BigRational)>,
) -> VerificationReport {
    runner.run(task, config_echo!("n_max" => n_max), (0..=n_max as i64).collect(), |n| {
        let witness = match sides(n) {
            Ok((l, r)) if l == r => None,
            Ok((l, r)) => Some(format!("lhs={l} rhs={r}")),
            Err(e) => Some(e.to_string()),
        };
        Case::from_witness(task, CaseKey::new().with("n", n), Severity::Theorem, witness)
    })
}

pub fn verify_sun_identity_one(n_max: usize, runner: &Runner) -> VerificationReport {
    rational_identity_report("sun-one", n_max, runner, sun_identity_one_sides)
}

pub fn verify_sun_identity_two(n_max: usize, runner: &Runner) -> VerificationReport {
    rational_identity_report("sun-two", n_max, runner, sun_identity_two_sides)
}

/// `S_n(x0)` from both closed forms; they must agree.
pub fn eval_transform_at(n: usize, x0: &BigRational) -> Result<BigRational> {
    let a = build_lhs(n).eval(x0);
    let b = build_rhs(n).eval(x0);
    if a != b {
        return Err(ExactError::Inconsistent(format!(
            "S_{n}({x0}): convolution form gives {a}, Schmidt form gives {b}"
        )));
    }
    Ok(a)
}

/// `S_n(x0)` at an integer point by summing integer binomials directly,
/// without building any polynomial.
pub fn eval_lhs_int(n: i64, x0: i64) -> BigInt {
    (0..=n)
        .map(|k| {
            let a = binom_int(-x0 - 1, k).expect("k >= 0");
            let b = binom_int(x0, n - k).expect("k <= n");
            &a * &a * &b * &b
        })
        .fold(BigInt::zero(), |acc, t| acc + t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        rat(n, d)
    }

    #[test]
    fn small_cases_by_hand() {
        assert_eq!(build_lhs(0), RatPoly::one());
        assert_eq!(build_rhs(0), RatPoly::one());
        let s1 = RatPoly::from_ints(&[1, 2, 2]);
        assert_eq!(build_lhs(1), s1);
        assert_eq!(build_rhs(1), s1);
    }

    #[test]
    fn n_two_term_by_term() {
        // C(x,2)^2 + (x+1)^2 x^2 + ((x+1)(x+2)/2)^2, expanded by hand.
        let expect = RatPoly::from_coeffs(vec![r(1, 1), r(3, 1), r(9, 2), r(3, 1), r(3, 2)]);
        assert_eq!(build_lhs(2), expect);
        assert_eq!(build_rhs(2), expect);
    }

    #[test]
    fn pointwise_against_integer_sums() {
        for n in 0..=10 {
            let lhs = build_lhs(n);
            let rhs = build_rhs(n);
            for x0 in -10..=10 {
                let v = rat_int(&eval_lhs_int(n as i64, x0));
                assert_eq!(lhs.eval_int(x0), v, "n={n} x0={x0}");
                assert_eq!(rhs.eval_int(x0), v, "n={n} x0={x0}");
            }
        }
    }

    #[test]
    fn reflection_symmetry() {
        for n in 0..=10 {
            let p = build_lhs(n);
            for x0 in -10..=10 {
                assert_eq!(p.eval_int(x0), p.eval_int(-x0 - 1));
            }
        }
    }

    #[test]
    fn values_are_nonnegative_integers() {
        for n in 0..=20 {
            let p = build_rhs(n);
            for x0 in -20..=20 {
                let v = p.eval_int(x0);
                assert!(v.is_integer() && v >= BigRational::zero(), "n={n} x0={x0} v={v}");
            }
        }
    }

    #[test]
    fn degrees_and_leading_coefficients() {
        for n in 0..=12 {
            let (l, r) = (build_lhs(n), build_rhs(n));
            assert_eq!(l.degree(), Some(2 * n));
            assert_eq!(r.degree(), Some(2 * n));
            assert_eq!(l.leading_coeff(), r.leading_coeff());
        }
    }

    #[test]
    fn recurrence_at_zero() {
        for side in [Side::Lhs, Side::Rhs] {
            let s: Vec<RatPoly> = (0..3).map(|n| side.build(n)).collect();
            assert!(recurrence_residual(Trailing::Printed, 0, &s[0], &s[1], &s[2]).is_zero());
            assert!(recurrence_residual(Trailing::Cubic, 0, &s[0], &s[1], &s[2]).is_zero());
        }
    }

    #[test]
    fn printed_trailing_coefficient_misses_by_n_cubed() {
        let s: Vec<RatPoly> = (0..=8).map(build_rhs).collect();
        for n in 1..=6 {
            let res = recurrence_residual(Trailing::Printed, n, &s[n], &s[n + 1], &s[n + 2]);
            let n3 = BigInt::from(n as i64).pow(3);
            assert_eq!(res, -&s[n].scale_int(&n3), "n={n}");
        }
    }

    #[test]
    fn recurrence_detects_a_wrong_sequence() {
        let s0 = build_lhs(0);
        let s1 = build_lhs(1);
        let bad = &build_lhs(2) + &RatPoly::one();
        assert!(!recurrence_residual(Trailing::Cubic, 0, &s0, &s1, &bad).is_zero());
    }

    #[test]
    fn reports_small_grids() {
        let run = Runner::serial();
        assert!(verify_transformation(10, &run).all_pass());
        assert_eq!(verify_transformation(10, &run).summary.total, 11);
        let rec = verify_recurrence(8, Trailing::Cubic, &run);
        assert!(rec.all_pass());
        assert_eq!(rec.summary.total, 2 + 2 * 7);
        assert!(verify_chu_vandermonde(12, &run).all_pass());
    }

    #[test]
    fn chu_vandermonde_small() {
        assert_eq!(chu_vandermonde_sum(0), RatPoly::one());
        assert_eq!(chu_vandermonde_sum(1), RatPoly::from_ints(&[-1]));
    }

    #[test]
    fn telescoped_examples() {
        assert_eq!(telescoped_lhs(2, 0).unwrap(), BigInt::from(4));
        assert_eq!(telescoped_rhs(2, 0).unwrap(), BigInt::from(4));
        for k in 0..20 {
            let single = BigInt::from(2 * k + 1) * binom_int(2 * k, k).unwrap();
            assert_eq!(telescoped_lhs(k + 1, k).unwrap(), single);
            let alt = binom_int(2 * k + 1, k).unwrap() * (k + 1);
            assert_eq!(telescoped_rhs(k + 1, k).unwrap(), alt);
        }
    }

    #[test]
    fn half_integer_identities_small() {
        assert_eq!(sun_identity_one_sides(0).unwrap(), (r(1, 1), r(1, 1)));
        assert_eq!(sun_identity_one_sides(1).unwrap(), (r(8, 1), r(8, 1)));
        assert_eq!(sun_identity_two_sides(0).unwrap(), (r(1, 1), r(1, 1)));
        assert_eq!(sun_identity_two_sides(1).unwrap(), (r(40, 1), r(40, 1)));
    }

    #[test]
    fn transform_evaluation() {
        assert_eq!(eval_transform_at(1, &r(0, 1)).unwrap(), r(1, 1));
        assert_eq!(eval_transform_at(1, &r(-1, 2)).unwrap(), r(1, 2));
        let v = eval_transform_at(2, &r(3, 1)).unwrap();
        assert_eq!(v, rat_int(&eval_lhs_int(2, 3)));
        assert!(eval_transform_at(5, &r(-3, 4)).is_ok());
    }
}
