//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! Runs without the test harness so the lines always show:
//! `cargo test -p lattes-pillow --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use lattes_pillow::budget::Budget;
use lattes_pillow::classify::{lattes_verdict, Verdict};
use lattes_pillow::cli::run_with;
use lattes_pillow::exact::Rational;
use lattes_pillow::expansion::{dn_bounds, dn_folded, dn_planar, lambda0_estimate, menger_verify};
use lattes_pillow::metrics::{default_pairs, visual_report};
use lattes_pillow::orbifold::{euler_char, nu_minimal, nu_values, pillow_portrait, ExtNat, Portrait};
use lattes_pillow::pillow::{cell_counts, CellCounts};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use common::{as_options, cycles_unramified, exhaust, for_each_portrait, map, portrait, BOUND, TEST_MATRICES, VALUES};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let b = Budget::default();
    for (m, top) in [([2, 0, 0, 2], 8), ([2, 0, 0, 3], 5)] {
        let f = map(m);
        for n in 0..=top {
            let dn = dn_planar(&f, n, &b).map_err(|e| e.to_string())?;
            ensure(dn == 1u64 << n, || format!("{m:?} n={n}: D_n={dn}, expected {}", 1u64 << n))?;
        }
    }
    let t = within(Duration::from_secs(30), start)?;
    Ok(format!("D_n = 2^n for 2I (n<=8) and diag(2,3) (n<=5) in {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let b = Budget::default();
    let mut checked = 0;
    for m in TEST_MATRICES {
        let f = map(m);
        for n in 0..=6 {
            let dn = Rational::from_integer(BigInt::from(dn_planar(&f, n, &b).map_err(|e| e.to_string())?));
            let (lo, hi) = dn_bounds(&f, n).map_err(|e| e.to_string())?;
            ensure(lo <= dn && dn <= hi, || format!("{m:?} n={n}: {dn} outside [{lo}, {hi}]"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (matrix, level) pairs inside the norm bounds"))
}

fn criterion_3() -> Outcome {
    let b = Budget::default();
    for m in TEST_MATRICES {
        let f = map(m);
        for n in 0..=3 {
            let p = dn_planar(&f, n, &b).map_err(|e| e.to_string())?;
            let q = dn_folded(&f, n, &b).map_err(|e| e.to_string())?;
            ensure(p == q, || format!("{m:?} n={n}: planar {p}, folded {q}"))?;
        }
    }
    Ok("planar and folded D_n agree on all test matrices for n<=3".into())
}

fn criterion_4() -> Outcome {
    let b = Budget::default();
    for m in TEST_MATRICES {
        let f = map(m);
        for n in 0..=3 {
            let c = cell_counts(&f, n, &b).map_err(|e| e.to_string())?;
            let k = f.degree_pow(n).to_u64().unwrap();
            ensure(c == CellCounts::expected(k), || format!("{m:?} n={n}: {c:?}"))?;
            ensure(c.euler_characteristic() == 2, || format!("{m:?} n={n}: chi {}", c.euler_characteristic()))?;
        }
    }
    Ok("(V,E,F) = (2d+2, 4d, 2d) and V-E+F = 2 on all test matrices for n<=3".into())
}

fn criterion_5() -> Outcome {
    let b = Budget::default();
    let mut errors = Vec::new();
    for m in [[2, 0, 0, 2], [1, -2, 1, 1]] {
        let f = map(m);
        let r = lambda0_estimate(&f, 8, &b).map_err(|e| e.to_string())?;
        ensure(r.final_error_f64 <= 0.15, || format!("{m:?}: error {} at n=8", r.final_error_f64))?;
        for t in &r.terms {
            let (lo, hi) = dn_bounds(&f, t.n).map_err(|e| e.to_string())?;
            let dn = Rational::from_integer(BigInt::from(t.dn));
            ensure(lo <= dn && dn <= hi, || format!("{m:?} n={}: D_n outside envelope", t.n))?;
            ensure(t.lower_root_f64 <= t.root_f64 && t.root_f64 <= t.upper_root_f64, || {
                format!("{m:?} n={}: root {} outside [{}, {}]", t.n, t.root_f64, t.lower_root_f64, t.upper_root_f64)
            })?;
        }
        errors.push(format!("{:.4}", r.final_error_f64));
    }
    Ok(format!("|D_8^(1/8) - lambda0| = {} for 2I and [[1,-2],[1,1]]", errors.join(", ")))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let b = Budget::default();
    let mut lines = Vec::new();
    for (m, n) in [([2, 0, 0, 2], 1), ([2, 0, 0, 2], 2), ([2, 0, 0, 3], 1)] {
        let r = menger_verify(&map(m), n, &b).map_err(|e| e.to_string())?;
        let (d, nn, k, cap) = (r.dn, r.path_min_tiles, r.max_disjoint_paths, r.tile_budget);
        ensure(d <= nn && d <= k && k * nn <= cap, || format!("{m:?} n={n}: D={d} N={nn} k={k} deg^n={cap}"))?;
        lines.push(format!("D={d} N={nn} k={k}"));
    }
    let t = within(Duration::from_secs(5), start)?;
    Ok(format!("{} in {t:.2?}", lines.join("; ")))
}

fn criterion_7() -> Outcome {
    use ExtNat::{Finite as F, Infinite as I};
    let power = Portrait::from_triples(&[("0", "0", 2), ("inf", "inf", 2)]).unwrap();
    let chain = Portrait::from_triples(&[("X", "A", 2), ("A", "B", 2), ("B", "C", 1), ("C", "C", 1)]).unwrap();
    let zero = Rational::from_integer(BigInt::from(0));
    for (name, p, sig) in [
        ("pillow", pillow_portrait(), vec![F(2), F(2), F(2), F(2)]),
        ("power map", power, vec![I, I]),
        ("chain", chain, vec![F(2), F(4), F(4)]),
    ] {
        let d = nu_minimal(&p).map_err(|e| e.to_string())?;
        ensure(d.signature == sig, || format!("{name}: signature {:?}", d.signature))?;
        ensure(d.chi == zero, || format!("{name}: chi {}", d.chi))?;
    }
    let chi = euler_char(&[F(2), F(3), F(7)]);
    ensure(chi == Rational::new(BigInt::from(-1), BigInt::from(42)), || format!("chi(2,3,7) = {chi}"))?;

    // exhaustive over portraits whose minimal answer is finite and divides 12
    let (mut portraits, mut valid) = (0u64, 0u64);
    for k in 1..=6 {
        let mut failure = None;
        for_each_portrait(k, &[1, 2, 3, 4], |image, degree| {
            if failure.is_some() || !cycles_unramified(image, degree) {
                return;
            }
            let nu = match nu_values(&portrait(image, degree)) {
                Ok(nu) => as_options(&nu),
                Err(e) => {
                    failure = Some(format!("{image:?} {degree:?}: {e}"));
                    return;
                }
            };
            if !nu.iter().all(|v| VALUES.contains(v)) {
                return;
            }
            let ex = exhaust(image, degree, &nu);
            portraits += 1;
            valid += ex.valid;
            if ex.counterexamples > 0 || !ex.candidate_seen {
                failure = Some(format!("{image:?} {degree:?}: fixpoint {nu:?} is not the minimum ({ex:?})"));
            }
        });
        if let Some(f) = failure {
            return Err(f);
        }
    }
    Ok(format!(
        "signatures and chi match; minimality confirmed on {portraits} portraits (<=6 nodes, degrees 1..4, answers dividing {BOUND}) against {valid} valid functions"
    ))
}

fn criterion_8() -> Outcome {
    let b = Budget::default();
    let cases = [
        ([2, 0, 0, 2], Verdict::Lattes),
        ([1, -2, 1, 1], Verdict::Lattes),
        ([2, 0, 0, 3], Verdict::LattesTypeNonLattes),
        ([2, 1, 0, 2], Verdict::LattesTypeNonLattes),
    ];
    for (m, expected) in cases {
        let v = lattes_verdict(&map(m), 8, &b).map_err(|e| e.to_string())?;
        ensure(v.verdict == expected, || format!("{m:?}: {:?}", v.verdict))?;
        ensure(v.consistency, || format!("{m:?}: inconsistent ratios"))?;
    }
    // D_n / 2^n strictly decreasing is D_{n+1} < 2 D_n
    let shear = map([2, 1, 0, 2]);
    let d: Vec<u64> = (2..=8).map(|n| dn_planar(&shear, n, &b).unwrap()).collect();
    for (w, n) in d.windows(2).zip(2..) {
        ensure(w[1] < 2 * w[0], || {
            format!("verdicts and consistency hold, but the shear ratio is flat: D_{n}/2^{n} = {}/{} = D_{}/2^{} = {}/{}", w[0], 1u64 << n, n + 1, n + 1, w[1], 1u64 << (n + 1))
        })?;
    }
    Ok("verdict table matches, consistency true, shear ratio strictly decreasing on 2..8".into())
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let r = visual_report(&map([2, 0, 0, 2]), &default_pairs(12), 5, 20, &Budget::default()).map_err(|e| e.to_string())?;
    ensure(r.samples.len() + r.excluded.len() == 12, || "pair count".into())?;
    ensure(r.excluded.is_empty(), || format!("excluded pairs: {:?}", r.excluded))?;
    ensure(r.spread_at_most(64), || format!("spread {}", r.spread_f64))?;
    ensure(r.triangle_violations == 0, || format!("{} triangle violations", r.triangle_violations))?;
    ensure(r.m_prime_violations == 0, || format!("{} pairs with m' > m+1", r.m_prime_violations))?;
    let t = within(Duration::from_secs(60), start)?;
    Ok(format!(
        "c = {:.4}, C = {:.4}, spread {:.2}, {} triples, max m'-m = {} in {t:.2?}",
        r.empirical_c.value_f64, r.empirical_big_c.value_f64, r.spread_f64, r.triples_checked, r.max_m_gap
    ))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let portrait = dir.path().join("portrait.json");
    std::fs::write(&portrait, serde_json::to_string(&pillow_portrait()).unwrap()).map_err(|e| e.to_string())?;
    let portrait = portrait.to_str().unwrap().to_string();
    let m = "1,-2,1,1";
    let mut runs: Vec<Vec<String>> = Vec::new();
    for format in ["json", "csv", "text"] {
        let f = format.to_string();
        runs.extend([
            vec!["cells", "--matrix", m, "--levels", "0..2", "--format", &f],
            vec!["dn", "--matrix", m, "--levels", "0..4", "--method", "both", "--format", &f],
            vec!["lambda0", "--matrix", m, "--n-max", "5", "--format", &f],
            vec!["menger", "--matrix", "2,0,0,2", "--levels", "1..2", "--format", &f],
            vec!["orbifold", "--portrait", &portrait, "--format", &f],
            vec!["metric", "--matrix", "2,0,0,2", "--pairs", "4", "--window", "3", "--format", &f],
            vec!["classify", "--matrix", m, "--n-max", "5", "--format", &f],
        ]
        .into_iter()
        .map(|v| v.into_iter().map(String::from).collect()));
    }
    runs.push(["render", "--matrix", m, "--levels", "2"].map(String::from).to_vec());
    for args in &runs {
        let once = || {
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let argv = std::iter::once("lattes-pillow".to_string()).chain(args.iter().cloned());
            let code = run_with(argv, &mut out, &mut err);
            (code, out, err)
        };
        let (a, b) = (once(), once());
        ensure(a.0 == 0, || format!("{args:?} exited {}: {}", a.0, String::from_utf8_lossy(&a.2)))?;
        ensure(a == b, || format!("{args:?} differs between runs"))?;
    }
    Ok(format!("{} command configurations byte-identical across two runs", runs.len()))
}

/// Criteria that fail as worded: the shear has D_2/2^2 = D_3/2^3 = 1/2.
const EXPECTED_FAILURES: [u32; 1] = [8];

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "D_n exactness", criterion_1),
        (2, "norm sandwich", criterion_2),
        (3, "planar/folded oracle", criterion_3),
        (4, "cell counts", criterion_4),
        (5, "Gelfand convergence", criterion_5),
        (6, "Menger chain", criterion_6),
        (7, "orbifold fixpoint", criterion_7),
        (8, "classification table", criterion_8),
        (9, "visual metric properties", criterion_9),
        (10, "determinism", criterion_10),
    ];
    let mut surprises = Vec::new();
    for (k, name, check) in criteria {
        let outcome = check();
        let expected_fail = EXPECTED_FAILURES.contains(&k);
        match &outcome {
            Ok(detail) => println!("criterion {k:>2} {name}: PASS ({detail})"),
            Err(detail) => {
                let tag = if expected_fail { " [known]" } else { "" };
                println!("criterion {k:>2} {name}: FAIL{tag} ({detail})");
            }
        }
        if outcome.is_ok() == expected_fail {
            surprises.push(k);
        }
    }
    if !surprises.is_empty() {
        eprintln!("criteria with unexpected outcomes: {surprises:?}");
        std::process::exit(1);
    }
}
