//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Set ACCEPTANCE_LONG=1 to include the r = 7, 8 circulant censuses.

use std::time::{Duration, Instant};

use mds_census::census::{
    self, census_2x2, census_circulant4_mds, census_hadamard4_involutory_mds, census_hadamard4_mds,
    census_involutory4_mds, formula_count, hadamard4_mds_by_row_sum, run_census, upper_bound_involutory4,
    CensusOptions, ClassId, Method,
};
use mds_census::field::irreducible_polys;
use mds_census::parallel::Parallelism;
use mds_census::predicates::{fast_circulant4_mds, fast_hadamard4_mds, is_mds, is_nmds};
use mds_census::theorems::{self, ScanMode, VerifyOptions, ORTHOGONAL_TYPE1_NMDS4};
use mds_census::{Elem, FieldSpec, Matrix};
use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

/// Criteria whose failure is explained in the decisions ledger.
const KNOWN_RED: &[u32] = &[7];

type Check = Result<String, String>;

fn gf(r: u32) -> FieldSpec {
    FieldSpec::new(r, None).expect("default polynomial")
}

fn opts() -> CensusOptions {
    CensusOptions::default()
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(())
    } else {
        Err(format!("took {:.1} s, limit {:.0} s", t.as_secs_f64(), limit.as_secs_f64()))
    }
}

fn table1(r: u32) -> (u64, u64, u64) {
    match r {
        3 => (168, 24, 144),
        4 => (22680, 1512, 21168),
        5 => (651000, 21000, 630000),
        6 => (13358520, 212040, 13146480),
        7 => (240094008, 1890504, 238203504),
        8 => (4064187960, 15937992, 4048249968),
        _ => unreachable!(),
    }
}

fn table2_circulant(r: u32) -> u64 {
    [0, 16560, 580320, 12685680, 234269280, 4015735920][r as usize - 3]
}

fn c1() -> Check {
    let start = Instant::now();
    for r in 3..=5 {
        let f = gf(r);
        let total = census_hadamard4_mds(&f, Method::Brute, opts()).map_err(|e| e.to_string())?.count;
        let split = census_hadamard4_involutory_mds(&f, Method::Brute, opts()).map_err(|e| e.to_string())?;
        expect_eq(&format!("r = {r}"), (total, split.involutory.count, split.non_involutory.count), table1(r))?;
    }
    within(Duration::from_secs(10), start)?;
    Ok("brute-force Hadamard counts match for r = 3, 4, 5".into())
}

fn c2() -> Check {
    let start = Instant::now();
    for r in 3..=8 {
        let got = (
            census::hadamard4_mds_formula(r),
            census::hadamard4_inv_mds_formula(r),
            census::hadamard4_noninv_mds_formula(r),
        );
        expect_eq(&format!("r = {r}"), got, table1(r))?;
    }
    within(Duration::from_millis(1), start)?;
    Ok("closed forms match for r = 3..8".into())
}

fn c3() -> Check {
    let start = Instant::now();
    for r in 3..=5 {
        let n = census_circulant4_mds(&gf(r), opts()).map_err(|e| e.to_string())?.count;
        expect_eq(&format!("r = {r}"), n, table2_circulant(r))?;
    }
    within(Duration::from_secs(10), start)?;
    let long = CensusOptions { allow_long: true, ..opts() };
    let t6 = Instant::now();
    let n = census_circulant4_mds(&gf(6), long).map_err(|e| e.to_string())?.count;
    expect_eq("r = 6", n, table2_circulant(6))?;
    within(Duration::from_secs(120), t6)?;
    let mut note = "r = 3..6 match".to_string();
    if std::env::var("ACCEPTANCE_LONG").is_ok_and(|v| v == "1") {
        for r in 7..=8 {
            let n = census_circulant4_mds(&gf(r), long).map_err(|e| e.to_string())?.count;
            expect_eq(&format!("r = {r}"), n, table2_circulant(r))?;
        }
        note.push_str("; r = 7, 8 match");
    } else {
        note.push_str("; r = 7, 8 not run (ACCEPTANCE_LONG=1)");
    }
    Ok(note)
}

fn c4() -> Check {
    let start = Instant::now();
    for r in 2..=6 {
        let f = gf(r);
        let q = 1u64 << r;
        let mds = census_2x2(&f, false, Method::Brute, opts()).map_err(|e| e.to_string())?.count;
        let inv = census_2x2(&f, true, Method::Brute, opts()).map_err(|e| e.to_string())?.count;
        expect_eq(&format!("2x2 MDS r = {r}"), mds, (q - 1).pow(3) * (q - 2))?;
        expect_eq(&format!("involutory 2x2 MDS r = {r}"), inv, (q - 1) * (q - 2))?;
        if mds == (q - 1).pow(3) * (q - 3) {
            return Err(format!("r = {r}: brute force agrees with the (2^r - 3) variant"));
        }
    }
    within(Duration::from_secs(5), start)?;
    Ok("(2^r-1)^3 (2^r-2) and (2^r-1)(2^r-2) hold for r = 2..6; 2058 vs 1715 at r = 3".into())
}

fn c5() -> Check {
    let start = Instant::now();
    let res = census_involutory4_mds(&gf(3), opts()).map_err(|e| e.to_string())?;
    expect_eq("count", res.count, 16464)?;
    let cand = res.candidates.ok_or("no candidate count")?;
    let bound = upper_bound_involutory4(3);
    expect_eq("bound", bound.clone(), BigUint::from(1975680u32))?;
    if BigUint::from(cand) <= bound {
        within(Duration::from_secs(120), start)?;
        Ok(format!("16464 involutory MDS from {cand} candidates (bound {bound})"))
    } else {
        Err(format!("{cand} candidates exceed the bound {bound}"))
    }
}

fn c6() -> Check {
    let start = Instant::now();
    for r in 2..=5 {
        let f = gf(r);
        for class in [ClassId::Hadamard4Nmds1Zero, ClassId::Hadamard4InvNmds1Zero, ClassId::Circulant4Nmds1Zero] {
            let n = run_census(class, &f, Method::Brute, opts()).map_err(|e| e.to_string())?.count;
            expect_eq(&format!("{class} r = {r}"), n, formula_count(class, r).map_err(|e| e.to_string())?)?;
        }
    }
    let s = run_census(ClassId::Circulant4Nmds1ZeroSingular, &gf(4), Method::Brute, opts()).map_err(|e| e.to_string())?;
    expect_eq("singular circulant one-zero NMDS r = 4", s.count, 840)?;
    within(Duration::from_secs(30), start)?;
    Ok("three one-zero formulas hold for r = 2..5; 840 singular at r = 4".into())
}

fn c7() -> Check {
    let start = Instant::now();
    let vopts = VerifyOptions::default();
    let mut failures = Vec::new();
    let mut passes = Vec::new();

    let mut bad = 0;
    for r in 2..=5 {
        let f = gf(r);
        let a = theorems::verify_singular_hadamard_not_nmds(&f, 4, ScanMode::Exhaustive, vopts).map_err(|e| e.to_string())?;
        let b = theorems::verify_singular_hadamard_not_nmds(&f, 8, ScanMode::Sampled(10_000), vopts).map_err(|e| e.to_string())?;
        bad += a.counterexamples.len() + b.counterexamples.len();
    }
    tally(&mut passes, &mut failures, "singular_hadamard_not_nmds", bad);

    let mut per_r = Vec::new();
    for r in 2..=4 {
        let rep = theorems::verify_type2_even_not_nmds(&gf(r), 2, ScanMode::Exhaustive, vopts).map_err(|e| e.to_string())?;
        per_r.push(format!("r={r}: {}", rep.counterexamples.len()));
    }
    if per_r.iter().all(|s| s.ends_with(": 0")) {
        passes.push("type2_even_not_nmds".to_string());
    } else {
        failures.push(format!("type2_even_not_nmds n = 2 has NMDS members ({})", per_r.join(", ")));
    }

    let mut bad = 0;
    for r in 2..=4 {
        bad += theorems::verify_adjugate_identity(&gf(r), vopts).map_err(|e| e.to_string())?.counterexamples.len();
    }
    tally(&mut passes, &mut failures, "adjugate_identity", bad);

    let rep = theorems::verify_decomposition_roundtrip(&gf(3), vopts).map_err(|e| e.to_string())?;
    let bad = rep.counterexamples.len() + usize::from(rep.scanned != 16464);
    tally(&mut passes, &mut failures, "decomposition_roundtrip", bad);

    let expected: Vec<Vec<Vec<Elem>>> = ORTHOGONAL_TYPE1_NMDS4
        .iter()
        .map(|m| m.iter().map(|row| row.iter().map(|&x| Elem(x)).collect()).collect())
        .collect();
    let mut bad = 0;
    for r in 2..=8 {
        let f = gf(r);
        let found: Vec<_> = theorems::find_orthogonal_type1_nmds4(&f).iter().map(|m| m.to_rows()).collect();
        bad += usize::from(found != expected);
    }
    tally(&mut passes, &mut failures, "orthogonal_type1_exactly_two", bad);

    let control = FieldSpec::new(4, Some(0x13)).map_err(|e| e.to_string())?;
    let odd = theorems::type2_odd_control(&control).map_err(|e| e.to_string())?;
    tally(&mut passes, &mut failures, "odd Type-II control", usize::from(!odd));

    within(Duration::from_secs(300), start).map_err(|e| format!("{}; {e}", failures.join("; ")))?;
    if failures.is_empty() {
        Ok(format!("zero counterexamples: {}", passes.join(", ")))
    } else {
        Err(format!("{} (passing: {})", failures.join("; "), passes.join(", ")))
    }
}

fn tally(passes: &mut Vec<String>, failures: &mut Vec<String>, name: &str, bad: usize) {
    if bad == 0 {
        passes.push(name.to_string());
    } else {
        failures.push(format!("{name}: {bad} counterexamples"));
    }
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn c8() -> Check {
    let mut notes = Vec::new();

    // fast checks against the generic minor scan
    for r in 2..=4 {
        let f = gf(r);
        let q = f.order() as u32;
        for i in 0..q.pow(4) {
            let v = [i % q, (i / q) % q, (i / q / q) % q, i / q / q / q].map(|x| Elem(x as u16));
            compare_fast(&f, v).map_err(|e| format!("r = {r}: {e}"))?;
        }
    }
    let mut tuples = 0u64;
    for r in 5..=8 {
        let f = gf(r);
        let q = f.order() as u16;
        let cases = 250_000;
        runner(cases)
            .run(&prop::array::uniform4(0..q), |v| {
                compare_fast(&f, v.map(Elem)).map_err(TestCaseError::fail)
            })
            .map_err(|e| format!("r = {r}: {e}"))?;
        tuples += u64::from(cases);
    }
    notes.push(format!("fast checks exhaustive r <= 4, {tuples} random tuples r = 5..8"));

    // MDS and NMDS are disjoint
    for r in 2..=4 {
        let f = gf(r);
        let q = f.order() as u16;
        let strat = (2usize..=4).prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(0..q, n), n));
        runner(2_000)
            .run(&strat, |rows| {
                let rows: Vec<Vec<Elem>> = rows.into_iter().map(|r| r.into_iter().map(Elem).collect()).collect();
                let m = Matrix::from_rows(&f, &rows).unwrap();
                prop_assert!(!(is_mds(&m).unwrap().holds && is_nmds(&m).unwrap().holds));
                Ok(())
            })
            .map_err(|e| format!("disjointness r = {r}: {e}"))?;
    }
    notes.push("MDS/NMDS disjoint".into());

    // D1 M D2 and P M Q keep both verdicts
    for r in 2..=8 {
        let f = gf(r);
        let q = f.order() as u16;
        let strat = (
            prop::array::uniform4(0..q),
            prop::collection::vec(prop::collection::vec(0..q, 4), 4),
            prop::bool::ANY,
            prop::array::uniform4(1..q),
            prop::array::uniform4(1..q),
            Just([0usize, 1, 2, 3]).prop_shuffle(),
            Just([0usize, 1, 2, 3]).prop_shuffle(),
        );
        runner(1_000)
            .run(&strat, |(row, free, use_hadamard, d1, d2, p, qp)| {
                let m = if use_hadamard {
                    Matrix::hadamard(&f, &row.map(Elem)).unwrap()
                } else {
                    let rows: Vec<Vec<Elem>> = free.into_iter().map(|r| r.into_iter().map(Elem).collect()).collect();
                    Matrix::from_rows(&f, &rows).unwrap()
                };
                let dm = |d: [u16; 4]| Matrix::diagonal(&f, &d.map(Elem)).unwrap();
                let scaled = dm(d1).matmul(&m).unwrap().matmul(&dm(d2)).unwrap();
                let permuted: Vec<Vec<Elem>> = p.iter().map(|&i| qp.iter().map(|&j| m.get(i, j)).collect()).collect();
                let permuted = Matrix::from_rows(&f, &permuted).unwrap();
                let verdict = |x: &Matrix<'_>| (is_mds(x).unwrap().holds, is_nmds(x).unwrap().holds);
                let base = verdict(&m);
                prop_assert_eq!(verdict(&scaled), base);
                prop_assert_eq!(verdict(&permuted), base);
                Ok(())
            })
            .map_err(|e| format!("invariance r = {r}: {e}"))?;
    }
    notes.push("scaling/permutation invariance (1000 trials per field, r = 2..8)".into());

    // every nonzero row sum carries the same number of Hadamard MDS matrices
    for r in 2..=5 {
        let hist = hadamard4_mds_by_row_sum(&gf(r), Parallelism::default());
        if hist[0] != 0 || hist[1..].iter().any(|&h| h != hist[1]) {
            return Err(format!("row-sum classes differ at r = {r}: {hist:?}"));
        }
    }
    notes.push("equal row-sum classes r <= 5".into());

    // polynomial choice does not change any count
    for r in [3, 4] {
        let polys = irreducible_polys(r);
        for class in ClassId::ALL {
            if class == ClassId::InvMds4x4 && r == 4 {
                continue;
            }
            let mut counts = Vec::new();
            for &p in &polys {
                let f = FieldSpec::new(r, Some(p)).map_err(|e| e.to_string())?;
                counts.push(run_census(class, &f, Method::Brute, opts()).map_err(|e| e.to_string())?.count);
            }
            if counts.windows(2).any(|w| w[0] != w[1]) {
                return Err(format!("{class} at r = {r} depends on the polynomial: {counts:?}"));
            }
        }
    }
    notes.push("polynomial invariance r = 3, 4 (inv_mds_4x4 at r = 3)".into());

    // identical counts for 1, 2 and all workers
    let f = gf(5);
    for class in [ClassId::Hadamard4Mds, ClassId::Hadamard4InvMds, ClassId::Circulant4Mds, ClassId::Hadamard4Nmds1Zero] {
        let counts: Vec<u64> = [1, 2, 0]
            .iter()
            .map(|&jobs| {
                let o = CensusOptions { parallelism: Parallelism::with_jobs(jobs), allow_long: false };
                run_census(class, &f, Method::Brute, o).map(|c| c.count)
            })
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if counts.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("{class} differs across worker counts: {counts:?}"));
        }
    }
    notes.push("determinism across 1/2/max workers".into());
    Ok(notes.join("; "))
}

fn compare_fast(f: &FieldSpec, v: [Elem; 4]) -> Result<(), String> {
    let [a, b, c, d] = v;
    let h = is_mds(&Matrix::hadamard(f, &v).unwrap()).unwrap().holds;
    if fast_hadamard4_mds(f, a, b, c, d) != h {
        return Err(format!("Hadamard fast check disagrees at {v:?}"));
    }
    let ci = is_mds(&Matrix::circulant(f, &v).unwrap()).unwrap().holds;
    if fast_circulant4_mds(f, a, b, c, d) != ci {
        return Err(format!("circulant fast check disagrees at {v:?}"));
    }
    Ok(())
}

fn c9() -> Check {
    let start = Instant::now();
    let mut notes = Vec::new();
    for r in 3..=5 {
        let rep = theorems::verify_t_set_audit(&gf(r)).map_err(|e| e.to_string())?;
        if !rep.passed() {
            let n = rep.counterexamples.len();
            return Err(format!("r = {r}: {n} violations, first {}", rep.counterexamples[0]));
        }
        let total = &rep.details["admissible_total"];
        expect_eq(&format!("r = {r} total"), total.as_u64(), Some(census::hadamard4_mds_formula(r)))?;
        let cards = rep.details["t_cardinalities"].as_object().ok_or("missing cardinalities")?;
        if cards.keys().any(|k| !["4", "7", "8"].contains(&k.as_str())) {
            return Err(format!("r = {r}: unexpected |T| values {:?}", cards.keys().collect::<Vec<_>>()));
        }
        notes.push(format!("r={r}: {total} with |T| in {:?}", cards.keys().collect::<Vec<_>>()));
    }
    within(Duration::from_secs(30), start)?;
    Ok(notes.join(", "))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Check); 9] = [
        (1, "Hadamard table by brute force", c1),
        (2, "Hadamard table by formula", c2),
        (3, "circulant MDS counts", c3),
        (4, "2x2 counts", c4),
        (5, "involutory 4x4 census", c5),
        (6, "one-zero NMDS counts", c6),
        (7, "structural claims", c7),
        (8, "property suites", c8),
        (9, "exclusion-set audit", c9),
    ];
    let mut unexpected = 0;
    for (n, title, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {n} {title}: {msg} [{secs:.2} s]"),
            Err(msg) => {
                let known = KNOWN_RED.contains(&n);
                let tag = if known { " (known, see decisions ledger)" } else { "" };
                println!("FAIL {n} {title}{tag}: {msg} [{secs:.2} s]");
                if !known {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}
