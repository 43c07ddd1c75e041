//! Acceptance suite. Every check is exact; each criterion also carries the
//! wall-time budget it is expected to finish in.
//!
//! Runs as a plain binary (`harness = false`) so that one line per criterion
//! is always printed: `cargo test -p binomsum --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use binomsum::cli::{self, GridConfig, Task};
use binomsum::congruence::{
    check_catalan_form, check_conjecture_final, check_lemma_schmidt, check_theorem1, check_theorem2,
};
use binomsum::exact::{binom_int, binom_rat, catalan, BigInt, BigRational};
use binomsum::identity::{
    verify_chu_vandermonde, verify_recurrence, verify_sun_identity_one,
    verify_sun_identity_two, verify_telescoped_sum, verify_transformation, Trailing,
};
use binomsum::qpoly::{check_q_sun, q_binom, q_specialization_check};
use binomsum::report::{Format, Runner, Severity, VerificationReport};
use binomsum::unipoly::{from_binomial_basis, to_binomial_basis, RatPoly};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn runner() -> Runner {
    Runner::with_jobs(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn expect_pass(r: &VerificationReport, total: usize) -> Outcome {
    if r.summary.total != total {
        return Err(format!("{}: expected {total} cases, got {}", r.task, r.summary.total));
    }
    match &r.counterexample {
        None => Ok(()),
        Some(c) => Err(format!(
            "{}: {} of {} failed; first {} {}",
            r.task,
            r.summary.fail,
            r.summary.total,
            c.key,
            c.witness.as_deref().unwrap_or("")
        )),
    }
}

fn triangle(n_max: usize) -> usize {
    n_max * (n_max + 1) / 2
}

fn c01_transformation() -> Outcome {
    expect_pass(&verify_transformation(40, &runner()), 41)
}

/// As printed: trailing coefficient `3n^2+3n+1`, both closed forms, n <= 38,
/// plus the base cases.
fn c02_recurrence_as_printed() -> Outcome {
    // 40 so that n + 2 <= 40 covers 0 <= n <= 38.
    expect_pass(&verify_recurrence(40, Trailing::Printed, &runner()), 2 + 2 * 39)
}

/// The same check with trailing coefficient `(n+1)^3`.
fn c02b_recurrence_cubic_trailing() -> Outcome {
    expect_pass(&verify_recurrence(40, Trailing::Cubic, &runner()), 2 + 2 * 39)
}

fn c03_chu_vandermonde() -> Outcome {
    expect_pass(&verify_chu_vandermonde(30, &runner()), 31)
}

fn c04_theorem1() -> Outcome {
    expect_pass(&check_theorem1(4, 25, &[1, -1], &runner()), 4 * 25 * 2)
}

fn c05_theorem2_catalan_telescope() -> Outcome {
    let run = runner();
    expect_pass(&check_theorem2(25, &run), 25)?;
    expect_pass(&check_catalan_form(25, -10, 10, &run), 25)?;
    expect_pass(&verify_telescoped_sum(100, &run), triangle(100))
}

fn c06_lemma_schmidt() -> Outcome {
    expect_pass(&check_lemma_schmidt(3, 20, &[1, -1], &runner()), 3 * 20 * 2)
}

fn c07_conjecture_final() -> Outcome {
    let r = check_conjecture_final(4, 50, &runner()).map_err(|e| e.to_string())?;
    // l = 1 rows compare against n C(n,k+1) C(n+k,k) C(2k,k) inside each case.
    let l1 = r.cases.iter().filter(|c| c.key.get("l") == Some(1)).count();
    if l1 != triangle(50) || r.cases.iter().any(|c| (c.key.get("l") == Some(1)) != (c.severity == Severity::Theorem)) {
        return Err("l = 1 rows are not all flagged as theorem cases".into());
    }
    expect_pass(&r, 4 * triangle(50))
}

fn c08_q_congruence() -> Outcome {
    let run = runner();
    expect_pass(&check_q_sun(20, &run), triangle(20))?;
    let spec = q_specialization_check(20, &run);
    expect_pass(&spec, triangle(20))?;
    let fin = check_conjecture_final(1, 20, &run).map_err(|e| e.to_string())?;
    let a: Vec<String> = spec.cases.iter().map(|c| format!("n={};k={}", c.key.get("n").unwrap(), c.key.get("k").unwrap())).collect();
    let b: Vec<String> = fin.cases.iter().map(|c| format!("n={};k={}", c.key.get("n").unwrap(), c.key.get("k").unwrap())).collect();
    if a != b {
        return Err("q = 1 cells do not line up with the l = 1 integer cells".into());
    }
    Ok(())
}

fn c09_half_integer_identities() -> Outcome {
    let run = runner();
    expect_pass(&verify_sun_identity_one(30, &run), 31)?;
    expect_pass(&verify_sun_identity_two(30, &run), 31)
}

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-1000i64..=1000, 1i64..=1000).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn random_poly(max_deg: usize) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(small_rat(), 0..=max_deg + 1).prop_map(RatPoly::from_coeffs)
}

fn c10_properties() -> Outcome {
    let mut tr = TestRunner::new_with_rng(
        Config { cases: 64, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    tr.run(&random_poly(60), |p| {
        prop_assert_eq!(from_binomial_basis(&to_binomial_basis(&p)), p);
        Ok(())
    })
    .map_err(|e| format!("binomial-basis round trip: {e}"))?;

    for n in 0..=30i64 {
        for k in 0..=n {
            let b = q_binom(n, k).unwrap().value;
            if b != q_binom(n, n - k).unwrap().value {
                return Err(format!("q-binomial symmetry fails at n={n} k={k}"));
            }
            if k >= 1 && n >= 1 {
                let rhs = &q_binom(n - 1, k - 1).unwrap().value + &q_binom(n - 1, k).unwrap().value.shift(k);
                if b != rhs {
                    return Err(format!("q-Pascal fails at n={n} k={k}"));
                }
            }
            if b.at_one() != binom_int(n, k).unwrap() {
                return Err(format!("q = 1 specialization fails at n={n} k={k}"));
            }
        }
    }

    for n in -20i64..=20 {
        for k in 1..=20 {
            if binom_int(n, k).unwrap() != binom_int(n - 1, k - 1).unwrap() + binom_int(n - 1, k).unwrap() {
                return Err(format!("Pascal fails at n={n} k={k}"));
            }
            let r = BigRational::from_integer(BigInt::from(n));
            if binom_rat(&r, k).unwrap() != BigRational::from_integer(binom_int(n, k).unwrap()) {
                return Err(format!("rational binomial disagrees at n={n} k={k}"));
            }
        }
    }
    for n in 1i64..=15 {
        for k in 0..=15 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            if binom_int(-n, k).unwrap() != binom_int(n + k - 1, k).unwrap() * sign {
                return Err(format!("negation identity fails at n={n} k={k}"));
            }
        }
    }
    for k in 0..=200i64 {
        if catalan(k).map_err(|e| e.to_string())? * (k + 1) != binom_int(2 * k, k).unwrap() {
            return Err(format!("catalan consistency fails at k={k}"));
        }
    }
    // Parallel and serial runs serialize identically once timing is removed.
    let mut cfg = GridConfig::new(Task::All);
    cfg.l_max = 2;
    cfg.n_max = 10;
    cfg.k_max = 10;
    cfg.x_min = -5;
    cfg.x_max = 5;
    cfg.format = Format::Json;
    let serial = cli::run(&cfg).map_err(|e| e.to_string())?;
    cfg.jobs = 4;
    let parallel = cli::run(&cfg).map_err(|e| e.to_string())?;
    if strip_timing(&serial.to_json()) != strip_timing(&parallel.to_json()) || serial.to_csv() != parallel.to_csv() {
        return Err("parallel report differs from serial report".into());
    }
    if !serial.all_pass() {
        return Err("`all` with small bounds has failures".into());
    }
    Ok(())
}

fn strip_timing(json: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(json).expect("valid json");
    v.as_object_mut().expect("object").remove("metadata");
    v.to_string()
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1  transformation identity, n <= 40", Duration::from_secs(30), c01_transformation),
        ("2  recurrence as printed (3n^2+3n+1), n <= 38", Duration::from_secs(30), c02_recurrence_as_printed),
        ("2b recurrence with (n+1)^3 trailing, n <= 38", Duration::from_secs(30), c02b_recurrence_cubic_trailing),
        ("3  Chu-Vandermonde, k <= 30", Duration::from_secs(5), c03_chu_vandermonde),
        ("4  weighted 1/n sums integer-valued, l <= 4, n <= 25", Duration::from_secs(120), c04_theorem1),
        ("5  1/n^2 sum, Catalan form, telescoped sum", Duration::from_secs(60), c05_theorem2_catalan_telescope),
        ("6  Schmidt coefficients divisible by n", Duration::from_secs(30), c06_lemma_schmidt),
        ("7  n^2 congruence, l <= 4, n <= 50", Duration::from_secs(120), c07_conjecture_final),
        ("8  [n]^2 q-congruence and q = 1 match", Duration::from_secs(60), c08_q_congruence),
        ("9  half-integer identities, n <= 30", Duration::from_secs(10), c09_half_integer_identities),
        ("10 property suites and parallel determinism", Duration::from_secs(120), c10_properties),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed > budget {
                Err(format!("took {elapsed:.2?}, budget {budget:?}"))
            } else {
                Ok(())
            }
        });
        match outcome {
            Ok(()) => println!("criterion {name}: PASS ({elapsed:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({elapsed:.2?}) {msg}");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
