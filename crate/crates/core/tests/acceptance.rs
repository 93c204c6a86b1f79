//! Acceptance suite: one PASS/FAIL line per criterion, each with a wall-clock
//! limit. Run with `cargo test --test acceptance` (optimized test profile).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_integer::Integer;
use pdsing::{
    classify::{
        enumerate_and_verify, enumerate_corpus, sharp_example, threshold_report, EnumerationBounds,
    },
    deg_floor, dual_graph, fundamental_cycle, hj_closed_form, hj_eval, hj_expand, intersections,
    is_f_rational, is_rational_singularity, multiplicity, rat, recursion_cycle, verify_cycle,
    ClosedForm, CycleCheck, FundamentalCycle, HjSequence, NormalizedDivisor, Vertex,
};

type Outcome = Result<String, String>;
type Run<'a> = (u32, &'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn primes_to_50() -> Vec<u64> {
    (2..=50u64)
        .filter(|&p| (2..p).all(|q| p % q != 0))
        .collect()
}

fn sequences(max_len: usize, max_entry: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &layer {
            for b in 2..=max_entry {
                let mut t = s.clone();
                t.push(b);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn eval(v: &[i64]) -> pdsing::Rational {
    hj_eval(&HjSequence::new(v.to_vec()).unwrap()).unwrap()
}

fn criterion_1() -> Outcome {
    let mut cases = 0;
    for d in 2..=200i64 {
        for c in 1..d {
            if c.gcd(&d) != 1 {
                continue;
            }
            let x = rat(d, c);
            let seq = hj_expand(&x).map_err(|e| format!("expand {d}/{c}: {e}"))?;
            check(hj_eval(&seq).unwrap() == x, || {
                format!("round trip {d}/{c}")
            })?;
            cases += 1;
        }
    }
    let mut closed = 0;
    for a in 0..=10 {
        for b in 0..=10 {
            for n in 2..=8 {
                let k = ClosedForm::TwoNTwo { a, n, b };
                check(
                    hj_closed_form(k).unwrap() == hj_eval(&k.sequence().unwrap()).unwrap(),
                    || format!("closed form {k:?}"),
                )?;
                closed += 1;
            }
            for c in 0..=10 {
                let k = ClosedForm::TwoThreeTwoThreeTwo { a, b, c };
                check(
                    hj_closed_form(k).unwrap() == hj_eval(&k.sequence().unwrap()).unwrap(),
                    || format!("closed form {k:?}"),
                )?;
                closed += 1;
            }
        }
    }
    let seqs = sequences(5, 5);
    let mut pairs = 0u64;
    for s in &seqs {
        let v = eval(s);
        for k in 1..s.len() {
            // Appending entries strictly decreases the value.
            check(v < eval(&s[..k]), || {
                format!("append {:?} < {:?}", s, &s[..k])
            })?;
            pairs += 1;
        }
    }
    for s in seqs.iter().filter(|s| s.len() <= 4) {
        for t in seqs.iter().filter(|t| t.len() <= 4) {
            // Prefix A of length k shared, then the first differing entry decides.
            let common = s.iter().zip(t).take_while(|(x, y)| x == y).count();
            if common < s.len() && common < t.len() && s[common] < t[common] {
                check(eval(s) < eval(t), || format!("{s:?} < {t:?}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "{cases} round trips, {closed} closed forms, {pairs} monotonicity pairs"
    ))
}

fn criterion_2() -> Outcome {
    for p in [2u64, 3, 5, 7, 11, 13] {
        let d = sharp_example(p).unwrap();
        check(is_rational_singularity(&d).unwrap().is_rational(), || {
            format!("p={p}: not rational")
        })?;
        let e = multiplicity(&d).unwrap().value;
        check(e == (p + 1).div_ceil(2), || {
            format!("p={p}: multiplicity {e}")
        })?;
        let v = is_f_rational(&d, p).unwrap();
        let w = v
            .witness
            .as_ref()
            .ok_or_else(|| format!("p={p}: reported F-rational"))?;
        check(w.n == 1, || format!("p={p}: witness n={}", w.n))?;
        if p >= 3 {
            check(w.value == 2, || format!("p={p}: value {}", w.value))?;
        }
    }
    Ok("p in {2,3,5,7,11,13}".into())
}

fn corpus() -> Vec<NormalizedDivisor> {
    enumerate_corpus(4, 5, 9)
}

fn criterion_3(corpus: &[NormalizedDivisor]) -> Outcome {
    let primes = primes_to_50();
    let mut rational = 0u64;
    let mut checks = 0u64;
    for d in corpus {
        let rat_ok = is_rational_singularity(d).unwrap().is_rational();
        let s_ge_r = d.s() >= d.r() as i64;
        if s_ge_r {
            check(rat_ok, || format!("(b) {d} has s >= r but is not rational"))?;
        }
        if !rat_ok {
            continue;
        }
        rational += 1;
        let deg_ge_1 = d.degree() >= rat(1, 1);
        for &p in &primes {
            let f = is_f_rational(d, p).unwrap().is_f_rational();
            checks += 1;
            let coprime = d
                .fractions()
                .iter()
                .all(|a| !(a.den() as u64).is_multiple_of(p));
            check(!coprime || f, || format!("(a) {d} fails at p={p}"))?;
            check(!s_ge_r || f, || format!("(b) {d} fails at p={p}"))?;
            check(f || d.s() + 1 == d.r() as i64, || {
                format!("(c) {d} fails at p={p} with s+1 != r")
            })?;
            check(!(deg_ge_1 && p + 1 >= d.r() as u64) || f, || {
                format!("(d) {d} fails at p={p}")
            })?;
        }
    }
    Ok(format!(
        "{} divisors, {rational} rational, {checks} prime checks",
        corpus.len()
    ))
}

fn criterion_4(corpus: &[NormalizedDivisor]) -> Outcome {
    let mut verified = 0u64;
    let mut rows = 0u64;
    for d in corpus {
        let Ok(g) = dual_graph(d) else { continue };
        for l in 1..=10 {
            let f = recursion_cycle(d, l);
            let products = intersections(&g, &f).unwrap();
            check(
                products[0].0 == Vertex::Central && products[0].1 as i128 == -deg_floor(d, l),
                || format!("F_{l}.E0 on {d}"),
            )?;
            rows += 1;
        }
        if !is_rational_singularity(d).unwrap().is_rational() {
            continue;
        }
        let z = fundamental_cycle(d).unwrap();
        if z.total() > 40 {
            continue;
        }
        match verify_cycle(&g, &z) {
            CycleCheck::ValidFundamental => verified += 1,
            other => return Err(format!("{d}: {other:?}")),
        }
    }
    Ok(format!(
        "{verified} cycles verified by search, {rows} central rows"
    ))
}

fn criterion_5() -> Outcome {
    let bounds = EnumerationBounds::default();
    let mut notes = Vec::new();
    for e in [3u64, 4] {
        let r = enumerate_and_verify(&bounds, e).map_err(|err| err.to_string())?;
        check(r.outside_table.is_empty(), || {
            format!(
                "e={e}: {} divisors outside the table, first {}",
                r.outside_table.len(),
                r.outside_table[0]
            )
        })?;
        check(r.table_false_positives.is_empty(), || {
            format!("e={e}: table false positives")
        })?;
        check(r.instance_failures.is_empty(), || {
            format!("e={e}: instance failure {:?}", r.instance_failures[0])
        })?;
        check(r.passed(), || format!("e={e}: report not passed"))?;
        notes.push(format!(
            "e={e}: {} divisors, {} with e, {} instances",
            r.divisors_examined,
            r.with_target_multiplicity,
            r.coverage.iter().map(|c| c.instances_checked).sum::<u64>()
        ));
    }
    Ok(notes.join("; "))
}

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    for (e, clean, sharp) in [(3u64, vec![7u64, 11, 13], 5u64), (4, vec![11, 13], 7)] {
        let mut primes = clean.clone();
        primes.push(sharp);
        let r = threshold_report(e, &primes, 8).map_err(|err| err.to_string())?;
        for &p in &clean {
            let t = r.prime(p).unwrap();
            check(t.failure_count == 0 && t.errors.is_empty(), || {
                format!("e={e} p={p}: {} failures", t.failure_count)
            })?;
        }
        let t = r.prime(sharp).unwrap();
        let w = t
            .sharpness
            .as_ref()
            .ok_or_else(|| format!("e={e} p={sharp}: no sharpness witness"))?;
        check(
            w.divisor == sharp_example(sharp).unwrap() && w.multiplicity == e,
            || format!("e={e} p={sharp}: witness {}", w.divisor),
        )?;
        check(w.in_table && w.reported_failing, || {
            format!("e={e} p={sharp}: witness not flagged")
        })?;
        let b = w
            .witness
            .as_ref()
            .ok_or_else(|| format!("e={e} p={sharp}: sharp example F-rational"))?;
        check(b.n == 1 && b.value == 2, || {
            format!("e={e} p={sharp}: n={} value={}", b.n, b.value)
        })?;
        notes.push(format!(
            "e={e}: {} instances clean at {:?}, sharp example fails at p={sharp} ({} failures)",
            r.prime(clean[0]).unwrap().divisors_checked,
            clean,
            t.failure_count
        ));
    }
    Ok(notes.join("; "))
}

struct Fixture {
    s: i64,
    fractions: &'static [(i64, i64)],
    graph: &'static [&'static [i64]],
    n0: u64,
    coeffs: &'static [&'static [u64]],
    e: u64,
}

const FIXTURES: &[Fixture] = &[
    Fixture {
        s: 2,
        fractions: &[(3, 5), (4, 5), (1, 2)],
        graph: &[&[2, 3], &[2, 2, 2, 2], &[2]],
        n0: 5,
        coeffs: &[&[3, 1], &[4, 3, 2, 1], &[3]],
        e: 3,
    },
    Fixture {
        s: 2,
        fractions: &[(2, 3), (2, 3), (1, 2)],
        graph: &[&[2, 2], &[2, 2], &[2]],
        n0: 3,
        coeffs: &[&[2, 1], &[2, 1], &[2]],
        e: 2,
    },
    Fixture {
        s: 2,
        fractions: &[(4, 7), (6, 7), (1, 2)],
        graph: &[&[2, 4], &[2, 2, 2, 2, 2, 2], &[2]],
        n0: 7,
        coeffs: &[&[4, 1], &[6, 5, 4, 3, 2, 1], &[4]],
        e: 4,
    },
    Fixture {
        s: 2,
        fractions: &[(1, 2), (5, 6), (3, 5)],
        graph: &[&[2], &[2, 2, 2, 2, 2], &[2, 3]],
        n0: 6,
        coeffs: &[&[3], &[5, 4, 3, 2, 1], &[4, 2]],
        e: 4,
    },
    Fixture {
        s: 2,
        fractions: &[(2, 3), (4, 5), (1, 3)],
        graph: &[&[2, 2], &[2, 2, 2, 2], &[3]],
        n0: 3,
        coeffs: &[&[2, 1], &[3, 3, 2, 1], &[1]],
        e: 3,
    },
    Fixture {
        s: 2,
        fractions: &[(3, 4), (3, 4), (1, 3)],
        graph: &[&[2, 2, 2], &[2, 2, 2], &[3]],
        n0: 4,
        coeffs: &[&[3, 2, 1], &[3, 2, 1], &[2]],
        e: 4,
    },
    Fixture {
        s: 2,
        fractions: &[(3, 4), (4, 5), (1, 3)],
        graph: &[&[2, 2, 2], &[2, 2, 2, 2], &[3]],
        n0: 5,
        coeffs: &[&[4, 3, 2], &[4, 3, 2, 1], &[2]],
        e: 4,
    },
    Fixture {
        s: 2,
        fractions: &[(3, 4), (5, 6), (1, 3)],
        graph: &[&[2, 2, 2], &[2, 2, 2, 2, 2], &[3]],
        n0: 6,
        coeffs: &[&[5, 4, 2], &[5, 4, 3, 2, 1], &[2]],
        e: 4,
    },
    Fixture {
        s: 2,
        fractions: &[(1, 2), (2, 3), (10, 17)],
        graph: &[&[2], &[2, 2], &[2, 4, 2, 2]],
        n0: 3,
        coeffs: &[&[2], &[2, 1], &[2, 1, 1, 1]],
        e: 4,
    },
    Fixture {
        s: 3,
        fractions: &[(1, 2), (1, 2), (3, 4), (4, 5)],
        graph: &[&[2], &[2], &[2, 2, 2], &[2, 2, 2, 2]],
        n0: 2,
        coeffs: &[&[1], &[1], &[2, 2, 1], &[2, 2, 2, 1]],
        e: 4,
    },
    Fixture {
        s: 3,
        fractions: &[(1, 2), (2, 3), (3, 4)],
        graph: &[&[2], &[2, 2], &[2, 2, 2]],
        n0: 1,
        coeffs: &[&[1], &[1, 1], &[1, 1, 1]],
        e: 3,
    },
    Fixture {
        s: 2,
        fractions: &[(1, 2), (3, 4), (7, 12)],
        graph: &[&[2], &[2, 2, 2], &[2, 4, 2]],
        n0: 4,
        coeffs: &[&[2], &[3, 2, 1], &[3, 1, 1]],
        e: 4,
    },
    Fixture {
        s: 2,
        fractions: &[(1, 2), (5, 6), (4, 7)],
        graph: &[&[2], &[2, 2, 2, 2, 2], &[2, 4]],
        n0: 6,
        coeffs: &[&[3], &[5, 4, 3, 2, 1], &[4, 1]],
        e: 4,
    },
    Fixture {
        s: 2,
        fractions: &[(1, 2), (2, 3), (7, 9)],
        graph: &[&[2], &[2, 2], &[2, 2, 2, 3]],
        n0: 6,
        coeffs: &[&[3], &[4, 2], &[5, 4, 3, 1]],
        e: 3,
    },
];

fn criterion_7() -> Outcome {
    for f in FIXTURES {
        let d = NormalizedDivisor::from_pairs(f.s, f.fractions).unwrap();
        let g = dual_graph(&d).unwrap();
        let got: Vec<&[i64]> = g.branches.iter().map(|b| b.entries()).collect();
        check(g.central_weight == f.s && got == f.graph, || {
            format!("{d}: graph {got:?}")
        })?;
        let z = fundamental_cycle(&d).unwrap();
        let want = FundamentalCycle {
            n0: f.n0,
            branch_coeffs: f.coeffs.iter().map(|c| c.to_vec()).collect(),
        };
        check(z == want, || format!("{d}: cycle {z}"))?;
        check(multiplicity(&d).unwrap().value == f.e, || {
            format!("{d}: multiplicity")
        })?;
    }
    // p = 2 is checked against the recursion, and the all-ones vector that is
    // easy to mistake for its cycle must be rejected.

    let d = sharp_example(2).unwrap();
    let g = dual_graph(&d).unwrap();
    let z = fundamental_cycle(&d).unwrap();
    check(
        matches!(verify_cycle(&g, &z), CycleCheck::ValidFundamental),
        || format!("sharp example p=2: {z}"),
    )?;
    let drawn = FundamentalCycle {
        n0: 2,
        branch_coeffs: vec![vec![1, 1, 1], vec![1], vec![1]],
    };
    check(
        matches!(verify_cycle(&g, &drawn), CycleCheck::Violation { .. }),
        || "sharp example p=2 drawn vector accepted".into(),
    )?;
    Ok(format!(
        "{} fixtures, sharp example p=2 cycle {z}",
        FIXTURES.len()
    ))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let corpus = corpus();
    let corpus_time = started.elapsed();
    println!(
        "corpus: {} ample divisors (s <= 4, r <= 5, d_i <= 9) built in {:.2?}",
        corpus.len(),
        corpus_time
    );

    let runs: Vec<Run<'_>> = vec![
        (1, "HJ suite", Duration::from_secs(5), Box::new(criterion_1)),
        (
            2,
            "sharp example family",
            Duration::from_secs(1),
            Box::new(criterion_2),
        ),
        (
            3,
            "F-rationality theorems on the corpus",
            Duration::from_secs(120),
            Box::new(|| criterion_3(&corpus)),
        ),
        (
            4,
            "fundamental-cycle oracle",
            Duration::from_secs(120),
            Box::new(|| criterion_4(&corpus)),
        ),
        (
            5,
            "classification cross-check",
            Duration::from_secs(300),
            Box::new(criterion_5),
        ),
        (
            6,
            "threshold sharpness",
            Duration::from_secs(600),
            Box::new(criterion_6),
        ),
        (
            7,
            "dual-graph fixtures",
            Duration::from_secs(5),
            Box::new(criterion_7),
        ),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in runs {
        let t = Instant::now();
        let outcome = run();
        // The shared corpus is charged to every criterion that reads it.
        let elapsed = t.elapsed()
            + if n == 3 || n == 4 {
                corpus_time
            } else {
                Duration::ZERO
            };
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("too slow: {d}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {n} [{name}]: {status} in {elapsed:.2?} (limit {limit:?}) — {detail}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
