use std::cmp::Ordering;

use cfmonoid::congruence::{closure_classes, collapse_by_closure, collapse_by_completion, right_unit_probe};
use cfmonoid::family::{
    build_presentation, decompose, enumerate_normal_forms, recompose, render, word, Block, EnumerationBound, FamilyIndex,
    NormalFormDecomposition,
};
use cfmonoid::greens::{d_witness, related_bounded, Relatedness, Relation};
use cfmonoid::{
    complete, interreduce, Alphabet, CompletionConfig, Confluence, RewriteSystem, Rule, ShortlexOrder, Strategy as Reduction,
    Symbol, Word,
};
use proptest::prelude::*;

fn fi(n: u32) -> FamilyIndex {
    FamilyIndex::new(n).unwrap()
}

fn ab_word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..2, 0..=max_len).prop_map(|v| Word::from_symbols(v.into_iter().map(Symbol).collect()))
}

fn small_system() -> impl Strategy<Value = RewriteSystem> {
    prop::collection::vec((ab_word(4), ab_word(3)), 1..4).prop_filter_map("needs distinct oriented rules", |pairs| {
        let ord = ShortlexOrder::natural(&Alphabet::ab());
        let mut rules: Vec<Rule> = Vec::new();
        for (u, v) in pairs {
            let Ok(r) = ord.orient(u, v) else { continue };
            if !rules.iter().any(|q| q.lhs == r.lhs) {
                rules.push(r);
            }
        }
        RewriteSystem::new(Alphabet::ab(), rules).ok().filter(|s| !s.rules().is_empty())
    })
}

fn decomposition(n: u32) -> impl Strategy<Value = NormalFormDecomposition> {
    (0u32..3, prop::collection::vec((1..=n, 1u32..3), 0..3), prop::collection::vec(n + 1..n + 4, 0..3), 0u32..3).prop_map(
        move |(leading_b, blocks, tails, trailing_a)| NormalFormDecomposition {
            n: fi(n),
            leading_b,
            blocks: blocks.into_iter().map(|(a, b)| Block { a, b }).collect(),
            tails,
            trailing_a,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalize_is_strategy_independent(n in 1u32..=3, w in ab_word(30)) {
        let sys = build_presentation(fi(n));
        let left = sys.normalize_by(&w, Reduction::LeftmostInnermost).unwrap();
        let right = sys.normalize_by(&w, Reduction::Rightmost).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(sys.normalize(&w).unwrap(), left);
    }

    #[test]
    fn reduction_steps_bounded_by_length(n in 1u32..=4, w in ab_word(40)) {
        let sys = build_presentation(fi(n));
        let (nf, steps) = sys.normalize_with_budget(&w, usize::MAX).unwrap();
        prop_assert!(steps <= w.len());
        prop_assert!(sys.is_irreducible(&nf));
    }

    #[test]
    fn one_step_replaces_exactly_one_factor(n in 1u32..=3, w in ab_word(25), rightmost in any::<bool>()) {
        let sys = build_presentation(fi(n));
        let strategy = if rightmost { Reduction::Rightmost } else { Reduction::LeftmostInnermost };
        match sys.reduce_once(&w, strategy) {
            None => prop_assert!(sys.is_irreducible(&w)),
            Some(step) => {
                let r = &sys.rules()[step.rule];
                prop_assert_eq!(&w.symbols()[step.offset..step.offset + r.lhs.len()], r.lhs.symbols());
                prop_assert_eq!(step.word, w.splice(step.offset, r.lhs.len(), r.rhs.symbols()));
            }
        }
    }

    #[test]
    fn grammar_matches_irreducibility(n in 1u32..=3, w in ab_word(20)) {
        let sys = build_presentation(fi(n));
        match decompose(&w, fi(n)) {
            Ok(d) => {
                prop_assert!(sys.is_irreducible(&w));
                prop_assert_eq!(recompose(&d).unwrap(), w);
            }
            Err(cfmonoid::Error::NotNormalForm { offset }) => {
                prop_assert!(!sys.is_irreducible(&w));
                prop_assert!(sys.rules().iter().any(|r| w.symbols()[offset..].starts_with(r.lhs.symbols())));
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn decompositions_round_trip(d in (1u32..=3).prop_flat_map(decomposition)) {
        let w = recompose(&d).unwrap();
        prop_assert_eq!(decompose(&w, d.n).unwrap(), d.clone());
        let parts = d.leading_b as u64
            + d.blocks.iter().map(|b| b.b as u64).sum::<u64>()
            + d.tails.iter().map(|&m| m as u64).sum::<u64>()
            + d.trailing_a as u64;
        prop_assert_eq!(d.norm().0, parts);
        prop_assert_eq!(d.norm().0 == 0, w.is_empty());
    }

    #[test]
    fn d_chains_verify(n in 1u32..=3, w in ab_word(16)) {
        let sys = build_presentation(fi(n));
        let w = sys.normalize(&w).unwrap();
        let c = d_witness(&w, fi(n)).unwrap();
        prop_assert_eq!(sys.normalize(&c.left_part().concat(c.right_part())).unwrap(), w);
        prop_assert!(sys.normalize(&c.left_inverse().concat(c.left_part())).unwrap().is_empty());
        prop_assert!(sys.normalize(&c.right_part().concat(c.right_inverse())).unwrap().is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn completion_orients_by_shortlex_and_stays_confluent(s in small_system(), extra in prop::option::of((ab_word(4), ab_word(4)))) {
        let ord = ShortlexOrder::natural(&Alphabet::ab());
        let cfg = CompletionConfig { max_steps: 400, max_rules: 64, max_word_length: 24 };
        let extra: Vec<(Word, Word)> = extra.into_iter().collect();
        let out = complete(&s, &extra, &ord, &cfg).unwrap();
        for r in out.system.rules() {
            prop_assert_eq!(ord.compare(&r.lhs, &r.rhs), Ordering::Greater);
        }
        if out.is_completed() {
            prop_assert_eq!(out.system.is_confluent(100_000), Confluence::Confluent);
            prop_assert_eq!(interreduce(&out.system, &ord).rules().len(), out.system.rules().len());
        }
    }

    // closure-related words must get equal normal forms; the converse can
    // fail only because the closure is bounded
    #[test]
    fn completion_preserves_the_congruence(s in small_system(), x in ab_word(3), y in ab_word(3)) {
        let ord = ShortlexOrder::natural(&Alphabet::ab());
        let cfg = CompletionConfig { max_steps: 400, max_rules: 64, max_word_length: 24 };
        let extra = if x != y { vec![(x, y)] } else { vec![] };
        let out = complete(&s, &extra, &ord, &cfg).unwrap();
        prop_assume!(out.is_completed());
        let classes = closure_classes(&s, &extra, 8, 1 << 12).unwrap();
        let words = enumerate_all(6);
        for p in &words {
            for q in &words {
                if classes.related(p, q) {
                    prop_assert_eq!(out.system.normalize(p).unwrap(), out.system.normalize(q).unwrap());
                }
            }
        }
    }

    #[test]
    fn interreduce_is_idempotent(s in small_system()) {
        let ord = ShortlexOrder::natural(&Alphabet::ab());
        let once = interreduce(&s, &ord);
        let twice = interreduce(&once, &ord);
        let key = |s: &RewriteSystem| {
            let mut v: Vec<_> = s.rules().iter().map(|r| (r.lhs.clone(), r.rhs.clone())).collect();
            v.sort();
            v
        };
        prop_assert_eq!(key(&once), key(&twice));
        for r in once.rules() {
            prop_assert_eq!(once.normalize(&r.rhs).unwrap(), r.rhs.clone());
        }
    }

    #[test]
    fn collapse_verdicts_are_symmetric(u in ab_word(6), v in ab_word(6)) {
        let sys = build_presentation(fi(1));
        let (u, v) = (sys.normalize(&u).unwrap(), sys.normalize(&v).unwrap());
        prop_assume!(u != v);
        let cfg = CompletionConfig::default();
        let uv = collapse_by_completion(fi(1), &u, &v, &cfg).unwrap();
        let vu = collapse_by_completion(fi(1), &v, &u, &cfg).unwrap();
        prop_assert_eq!(uv.status, vu.status);
        let bound = u.len().max(v.len()).max(8);
        prop_assert_eq!(
            collapse_by_closure(fi(1), &u, &v, bound).unwrap().status,
            collapse_by_closure(fi(1), &v, &u, bound).unwrap().status
        );
    }

    #[test]
    fn closure_collapse_implies_completion_collapse(n in 1u32..=2, u in ab_word(5), v in ab_word(5)) {
        let sys = build_presentation(fi(n));
        let (u, v) = (sys.normalize(&u).unwrap(), sys.normalize(&v).unwrap());
        prop_assume!(u != v);
        let closure = collapse_by_closure(fi(n), &u, &v, 12).unwrap();
        let completion = collapse_by_completion(fi(n), &u, &v, &CompletionConfig::default()).unwrap();
        prop_assert!(!closure.collapsed() || completion.collapsed());
    }

    #[test]
    fn closure_is_monotone_in_the_bound(u in ab_word(5), v in ab_word(5)) {
        let sys = build_presentation(fi(1));
        let (u, v) = (sys.normalize(&u).unwrap(), sys.normalize(&v).unwrap());
        prop_assume!(u != v);
        let mut seen = false;
        for bound in u.len().max(v.len())..=13 {
            let c = collapse_by_closure(fi(1), &u, &v, bound).unwrap().collapsed();
            prop_assert!(!seen || c, "collapsed below {bound} but not at it");
            seen |= c;
        }
    }

    // an element with both one-sided inverses is a unit; adjoining u = 1
    // then collapses the monoid
    #[test]
    fn unit_class_members_collapse(u in ab_word(6)) {
        let sys = build_presentation(fi(1));
        let u = sys.normalize(&u).unwrap();
        prop_assume!(!u.is_empty());
        let r = related_bounded(&u, &Word::empty(), Relation::R, &sys, 10);
        let l = related_bounded(&u, &Word::empty(), Relation::L, &sys, 10);
        if let (Relatedness::Witnessed(_), Relatedness::Witnessed(_)) = (r, l) {
            let v = collapse_by_completion(fi(1), &u, &Word::empty(), &CompletionConfig::default()).unwrap();
            prop_assert!(v.collapsed());
        }
    }
}

fn enumerate_all(max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| [0u8, 1].map(|s| w.concat(&Word::from_symbols(vec![Symbol(s)])))).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

// substring test on rendered strings, independent of the rewriting engine
fn brute_force_normal_forms(n: u32, max_len: usize) -> Vec<String> {
    let lhs: Vec<String> = build_presentation(fi(n)).rules().iter().map(|r| render(&r.lhs)).collect();
    let mut out = Vec::new();
    for len in 0..=max_len {
        for bits in 0u32..(1 << len) {
            let s: String = (0..len).rev().map(|i| if bits >> i & 1 == 0 { 'a' } else { 'b' }).collect();
            if !lhs.iter().any(|l| s.contains(l.as_str())) {
                out.push(if s.is_empty() { "1".to_string() } else { s });
            }
        }
    }
    out
}

#[test]
fn enumeration_agrees_with_brute_force() {
    for n in 1..=2 {
        let listed: Vec<String> = enumerate_normal_forms(fi(n), EnumerationBound::MaxLength(12)).iter().map(render).collect();
        assert_eq!(listed, brute_force_normal_forms(n, 12), "n = {n}");
    }
}

#[test]
fn rule_counts() {
    for n in 1..=16 {
        assert_eq!(build_presentation(fi(n)).rules().len(), n as usize + 1);
    }
}

#[test]
fn critical_pairs_vanish() {
    for n in 1..=8 {
        let sys = build_presentation(fi(n));
        assert!(sys.is_length_reducing());
        assert!(sys.critical_pairs().is_empty());
        assert_eq!(sys.is_confluent(1), Confluence::Confluent);
    }
}

#[test]
fn right_unit_probes_collapse_under_both_engines() {
    let cfg = CompletionConfig::default();
    for (n, d, w) in [(1, 1, "1"), (2, 2, "a"), (2, 1, "b"), (3, 2, "ab"), (3, 3, "1")] {
        let w = word(w).unwrap();
        assert!(right_unit_probe(fi(n), d, &w, &cfg).unwrap().collapsed());
        let sys = build_presentation(fi(n));
        let mut lhs = vec![Symbol(0); d as usize];
        lhs.push(Symbol(1));
        let u = sys.normalize(&Word::from_symbols(lhs).concat(&w)).unwrap();
        let c = collapse_by_closure(fi(n), &u, &Word::empty(), 14).unwrap();
        assert!(c.collapsed(), "n={n} d={d}");
    }
}
