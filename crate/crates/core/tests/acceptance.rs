//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails or overruns its time limit.

use std::time::{Duration, Instant};

use cfmonoid::congruence::{sweep, SweepConfig, SweepReport};
use cfmonoid::family::{
    abelianization_check, build_presentation, decompose, enumerate_normal_forms, group_collapse_check, recompose, render,
    EnumerationBound, FamilyIndex, GroupImage,
};
use cfmonoid::greens::{d_witness, h_trivial_scan, related_bounded, Relatedness, Relation};
use cfmonoid::{CompletionConfig, Confluence, Strategy, Symbol, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fi(n: u32) -> FamilyIndex {
    FamilyIndex::new(n).unwrap()
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_words(len: usize) -> impl Iterator<Item = Word> {
    (0u64..1 << len).map(move |bits| Word::from_symbols((0..len).rev().map(|i| Symbol((bits >> i & 1) as u8)).collect()))
}

fn presentations() -> Outcome {
    for n in 1..=16u32 {
        let sys = build_presentation(fi(n));
        ensure(sys.rules().len() == n as usize + 1, || format!("n = {n}: {} rules", sys.rules().len()))?;
        let k = n as usize;
        for (i, r) in sys.rules().iter().enumerate() {
            let lhs = render(&r.lhs);
            let want =
                if i < k { format!("{}b{}b", "a".repeat(k + 1), "a".repeat(k - i)) } else { format!("{}bb", "a".repeat(k + 1)) };
            ensure(lhs == want, || format!("n = {n}, rule {i}: {lhs} != {want}"))?;
            let rhs = if i < k { "1" } else { "b" };
            ensure(render(&r.rhs) == rhs, || format!("n = {n}, rule {i}: rhs {}", render(&r.rhs)))?;
        }
    }
    for n in 1..=3 {
        let text = build_presentation(fi(n)).to_presentation();
        ensure(text == golden(&format!("m{n}.txt")), || format!("n = {n}: presentation text differs from golden"))?;
    }
    Ok("n = 1..16 rule shapes, golden texts for n = 1, 2, 3".into())
}

fn confluence() -> Outcome {
    for n in 1..=8 {
        let sys = build_presentation(fi(n));
        ensure(sys.is_length_reducing(), || format!("n = {n} not length reducing"))?;
        ensure(sys.critical_pairs().is_empty(), || format!("n = {n} has critical pairs"))?;
        ensure(sys.is_confluent(1) == Confluence::Confluent, || format!("n = {n} not confluent"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    for n in 1..=3 {
        let sys = build_presentation(fi(n));
        for _ in 0..10_000 {
            let len = rng.gen_range(0..=30);
            let w = Word::from_symbols((0..len).map(|_| Symbol(rng.gen_range(0..2))).collect());
            let x = sys.normalize_by(&w, Strategy::LeftmostInnermost).map_err(|e| e.to_string())?;
            let y = sys.normalize_by(&w, Strategy::Rightmost).map_err(|e| e.to_string())?;
            ensure(x == y, || format!("n = {n}: {} normalizes to {} and {}", render(&w), render(&x), render(&y)))?;
            checked += 1;
        }
    }
    Ok(format!("n = 1..8 without critical pairs, {checked} random words strategy independent"))
}

fn grammar() -> Outcome {
    let mut total = 0;
    for n in 1..=3 {
        let sys = build_presentation(fi(n));
        for len in 0..=12 {
            for w in all_words(len) {
                let irreducible = sys.is_irreducible(&w);
                match decompose(&w, fi(n)) {
                    Ok(d) => {
                        ensure(irreducible, || format!("n = {n}: {} parses but is reducible", render(&w)))?;
                        let back = recompose(&d).map_err(|e| e.to_string())?;
                        ensure(back == w, || format!("n = {n}: {} does not round-trip", render(&w)))?;
                    }
                    Err(_) => ensure(!irreducible, || format!("n = {n}: {} irreducible but rejected", render(&w)))?,
                }
                total += 1;
            }
        }
    }
    Ok(format!("{total} words checked against the grammar"))
}

fn counts() -> Outcome {
    let sys = build_presentation(fi(1));
    let listed = enumerate_normal_forms(fi(1), EnumerationBound::MaxLength(5));
    let mut got = vec![0usize; 6];
    for w in &listed {
        got[w.len()] += 1;
    }
    // independent count: substring search for a left-hand side
    let lhs: Vec<String> = sys.rules().iter().map(|r| render(&r.lhs)).collect();
    let brute: Vec<usize> =
        (0..=5).map(|len| all_words(len).filter(|w| !lhs.iter().any(|l| render(w).contains(l.as_str()))).count()).collect();
    let text = golden("counts_n1.txt");
    let expected: Vec<usize> =
        text.lines().find(|l| !l.starts_with('#')).unwrap_or("").split_whitespace().map(|t| t.parse().unwrap()).collect();
    ensure(got == brute, || format!("enumerated {got:?}, brute force {brute:?}"))?;
    ensure(got == expected, || format!("enumerated {got:?}, golden {expected:?}"))?;
    Ok(format!("counts {got:?}"))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn abelianization() -> Outcome {
    for n in 1..=8 {
        let ab = abelianization_check(fi(n)).map_err(|e| e.to_string())?;
        ensure(ab.trivial && ab.divisors == [1, 1], || format!("n = {n}: divisors {:?}", ab.divisors))?;
        // the gcd of the 2x2 minors must be 1 for a trivial quotient
        let mut g = 0;
        for i in 0..ab.rows.len() {
            for j in i + 1..ab.rows.len() {
                g = gcd(g, ab.rows[i][0] * ab.rows[j][1] - ab.rows[i][1] * ab.rows[j][0]);
            }
        }
        ensure(g == 1, || format!("n = {n}: minors have gcd {g}"))?;
    }
    let cfg = CompletionConfig::default();
    for n in 1..=4 {
        let g = group_collapse_check(fi(n), &cfg).map_err(|e| e.to_string())?;
        ensure(g.verdict == GroupImage::Trivial, || format!("n = {n}: group image {:?} {:?}", g.verdict, g.diagnostic))?;
    }
    Ok("abelianization trivial for n = 1..8, group image trivial for n = 1..4".into())
}

fn bisimplicity() -> Outcome {
    const BOUND: usize = 15;
    let mut certified = 0;
    let mut searched = 0;
    for n in 1..=3 {
        let sys = build_presentation(fi(n));
        for w in enumerate_normal_forms(fi(n), EnumerationBound::MaxLength(10)) {
            let c = d_witness(&w, fi(n)).map_err(|e| format!("n = {n}, {}: {e}", render(&w)))?;
            let nf = |x: &Word| sys.normalize(x).unwrap();
            ensure(nf(&c.left_part().concat(c.right_part())) == w, || format!("{}: factors", render(&w)))?;
            ensure(nf(&c.left_inverse().concat(c.left_part())).is_empty(), || format!("{}: left inverse", render(&w)))?;
            ensure(nf(&c.right_part().concat(c.right_inverse())).is_empty(), || format!("{}: right inverse", render(&w)))?;
            certified += 1;

            let l = related_bounded(&w, c.middle(), Relation::L, &sys, BOUND);
            let l_expected = c.left_inverse().len() <= BOUND && c.left_part().len() <= BOUND;
            ensure(!l_expected || matches!(l, Relatedness::Witnessed(_)), || {
                format!("n = {n}: no L witness for {} ~ {}", render(&w), render(c.middle()))
            })?;
            let r = related_bounded(c.middle(), &Word::empty(), Relation::R, &sys, BOUND);
            let r_expected = c.right_inverse().len() <= BOUND && c.right_part().len() <= BOUND;
            ensure(!r_expected || matches!(r, Relatedness::Witnessed(_)), || {
                format!("n = {n}: no R witness for {} ~ 1", render(c.middle()))
            })?;
            searched += 2;
        }
    }
    Ok(format!("{certified} D-chains verified, {searched} bounded searches consistent"))
}

fn h_trivial() -> Outcome {
    for n in 1..=2 {
        let v = h_trivial_scan(fi(n), 8, 25);
        ensure(v.is_empty(), || {
            let first = &v[0];
            format!("n = {n}: {} violations, first {} H {}", v.len(), render(&first.u), render(&first.v))
        })?;
    }
    Ok("no H-related distinct pairs up to length 8 for n = 1, 2".into())
}

fn run_sweeps() -> Result<Vec<SweepReport>, String> {
    [(1, 6), (2, 4)]
        .into_iter()
        .map(|(n, budget)| sweep(fi(n), budget, &SweepConfig::for_family(fi(n))).map_err(|e| e.to_string()))
        .collect()
}

fn sweeps(reports: &[SweepReport]) -> Outcome {
    let mut parts = Vec::new();
    for r in reports {
        ensure(r.inconclusive.is_empty(), || {
            format!(
                "n = {}: {} inconclusive, first {} = {}",
                r.n,
                r.inconclusive.len(),
                render(&r.inconclusive[0].u),
                render(&r.inconclusive[0].v)
            )
        })?;
        ensure(r.collapsed == r.pairs_tested, || format!("n = {}: {}/{} collapsed", r.n, r.collapsed, r.pairs_tested))?;
        ensure(r.oracle_inconclusive.is_empty() && r.oracle_collapsed == r.oracle_checked, || {
            format!("n = {}: oracle collapsed {}/{}", r.n, r.oracle_collapsed, r.oracle_checked)
        })?;
        parts.push(format!(
            "n = {}: {}/{} collapsed, oracle {}/{}",
            r.n, r.collapsed, r.pairs_tested, r.oracle_collapsed, r.oracle_checked
        ));
    }
    Ok(parts.join("; "))
}

fn contradictions(reports: &[SweepReport]) -> Outcome {
    let total: usize = reports.iter().map(|r| r.contradictions.len()).sum();
    ensure(total == 0, || format!("{total} pairs collapsed by the oracle but not by completion"))?;
    let checked: usize = reports.iter().map(|r| r.oracle_checked).sum();
    Ok(format!("{checked} oracle verdicts consistent with completion"))
}

fn report(id: usize, name: &str, limit: Duration, elapsed: Duration, outcome: Outcome) -> bool {
    let (ok, detail) = match outcome {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
        Err(e) => (false, e),
    };
    println!("{} [{id}] {name} ({elapsed:.2?}): {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn main() {
    let secs = Duration::from_secs;
    let simple: [(&str, Duration, fn() -> Outcome); 7] = [
        ("presentation fidelity", Duration::from_secs(1), presentations),
        ("confluence and strategy independence", secs(10), confluence),
        ("normal-form grammar", secs(60), grammar),
        ("normal-form counts", secs(5), counts),
        ("abelianization and group image", secs(30), abelianization),
        ("bisimplicity witnesses", secs(60), bisimplicity),
        ("H-triviality scan", secs(300), h_trivial),
    ];
    let mut all_ok = true;
    for (i, (name, limit, f)) in simple.into_iter().enumerate() {
        let (outcome, elapsed) = timed(f);
        all_ok &= report(i + 1, name, limit, elapsed, outcome);
    }
    let (reports, elapsed) = timed(run_sweeps);
    match reports {
        Ok(reports) => {
            all_ok &= report(8, "collapse sweep", secs(600), elapsed, sweeps(&reports));
            all_ok &= report(9, "no engine contradictions", secs(600), elapsed, contradictions(&reports));
        }
        Err(e) => {
            all_ok &= report(8, "collapse sweep", secs(600), elapsed, Err(e.clone()));
            all_ok &= report(9, "no engine contradictions", secs(600), elapsed, Err(e));
        }
    }
    if !all_ok {
        std::process::exit(1);
    }
}
