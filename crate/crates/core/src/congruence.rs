//! Collapse tests for congruences on `M_n`.
//!
//! Adjoining a relation `u = v` between distinct normal forms should
//! generate the universal congruence. Two engines decide instances:
//! Knuth–Bendix completion, and a bounded congruence closure over all
//! words up to a fixed length. Neither ever reports separation.

use std::time::{Duration, Instant};

use petgraph::unionfind::UnionFind;

use crate::completion::{complete, is_trivial_monoid, CompletionConfig, ShortlexOrder};
use crate::error::{Error, Result};
use crate::family::{build_presentation, enumerate_normal_forms, word_norm, EnumerationBound, FamilyIndex, A, B};
use crate::par_map;
use crate::rewrite::RewriteSystem;
use crate::word::{Symbol, Word};

/// Largest word set the closure oracle will materialize by default.
pub const DEFAULT_CLOSURE_CAP: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    Collapsed,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Completion,
    BoundedClosure,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Completion => "completion",
            Method::BoundedClosure => "closure",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// The final rule set of the completion run.
    System(RewriteSystem),
    /// Closure over `words` words; `identity_class` of them ended up in the
    /// class of the identity (which contains `a` and `b` on collapse).
    Classes { words: usize, identity_class: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceVerdict {
    pub status: VerdictStatus,
    pub method: Method,
    pub evidence: Evidence,
    /// Completion steps, or union operations for the closure.
    pub steps: usize,
}

impl CongruenceVerdict {
    pub fn collapsed(&self) -> bool {
        self.status == VerdictStatus::Collapsed
    }
}

fn check_pair(sys: &RewriteSystem, u: &Word, v: &Word) -> Result<()> {
    if u == v {
        return Err(Error::Precondition("the pair must consist of distinct words".into()));
    }
    for w in [u, v] {
        if !sys.alphabet().contains(w) || !sys.is_irreducible(w) {
            return Err(Error::Precondition("both words must be normal forms".into()));
        }
    }
    Ok(())
}

/// Complete `M_n ∪ {u = v}` and test whether the result is trivial.
pub fn collapse_by_completion(n: FamilyIndex, u: &Word, v: &Word, cfg: &CompletionConfig) -> Result<CongruenceVerdict> {
    let sys = build_presentation(n);
    check_pair(&sys, u, v)?;
    completion_verdict(&sys, u, v, cfg)
}

fn completion_verdict(sys: &RewriteSystem, u: &Word, v: &Word, cfg: &CompletionConfig) -> Result<CongruenceVerdict> {
    let ord = ShortlexOrder::natural(sys.alphabet());
    let out = complete(sys, &[(u.clone(), v.clone())], &ord, cfg)?;
    let collapsed = out.is_completed() && is_trivial_monoid(&out)?;
    Ok(CongruenceVerdict {
        status: if collapsed { VerdictStatus::Collapsed } else { VerdictStatus::Inconclusive },
        method: Method::Completion,
        steps: out.steps_used,
        evidence: Evidence::System(out.system),
    })
}

/// Bounded closure with the default memory cap.
pub fn collapse_by_closure(n: FamilyIndex, u: &Word, v: &Word, len_bound: usize) -> Result<CongruenceVerdict> {
    let sys = build_presentation(n);
    check_pair(&sys, u, v)?;
    if len_bound < u.len().max(v.len()) {
        return Err(Error::Precondition("length bound shorter than the pair".into()));
    }
    closure_verdict(&sys, &[(u.clone(), v.clone())], len_bound, DEFAULT_CLOSURE_CAP)
}

/// Dense numbering of all words of length `<= max_len` over `k` letters:
/// shorter words first, then base-`k` value of the word.
struct WordIndex {
    k: usize,
    // offsets[len] = number of words shorter than len
    offsets: Vec<usize>,
}

impl WordIndex {
    fn new(k: usize, max_len: usize, cap: usize) -> Result<Self> {
        let mut offsets = Vec::with_capacity(max_len + 2);
        let (mut total, mut layer) = (0u128, 1u128);
        for _ in 0..=max_len {
            offsets.push(total as usize);
            total += layer;
            layer *= k as u128;
            if total > cap as u128 {
                let words = (0..=max_len as u32).map(|l| (k as u128).saturating_pow(l)).fold(0u128, u128::saturating_add);
                return Err(Error::MemoryGuard { words, cap });
            }
        }
        offsets.push(total as usize);
        Ok(WordIndex { k, offsets })
    }

    fn total(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn index(&self, w: &[Symbol]) -> usize {
        self.offsets[w.len()] + w.iter().fold(0, |acc, s| acc * self.k + s.index())
    }

    fn decode(&self, len: usize, mut code: usize, out: &mut Vec<Symbol>) {
        out.clear();
        out.resize(len, Symbol(0));
        for slot in out.iter_mut().rev() {
            *slot = Symbol((code % self.k) as u8);
            code /= self.k;
        }
    }
}

/// Classes of the congruence generated by a rule set and extra equations,
/// restricted to one-step moves between words of bounded length.
pub struct ClosureClasses {
    idx: WordIndex,
    len_bound: usize,
    uf: UnionFind<u32>,
    unions: usize,
}

impl ClosureClasses {
    pub fn words(&self) -> usize {
        self.idx.total()
    }

    pub fn unions(&self) -> usize {
        self.unions
    }

    /// False also when either word exceeds the bound.
    pub fn related(&self, x: &Word, y: &Word) -> bool {
        if x.len() > self.len_bound || y.len() > self.len_bound {
            return x == y;
        }
        self.uf.equiv(self.idx.index(x.symbols()) as u32, self.idx.index(y.symbols()) as u32)
    }

    pub fn class_size(&self, x: &Word) -> usize {
        let root = self.uf.find(self.idx.index(x.symbols()) as u32);
        (0..self.idx.total() as u32).filter(|&i| self.uf.find(i) == root).count()
    }
}

/// Merge every pair of words of length `<= len_bound` related by one
/// application of a rule of `sys` or of an `extra` equation.
pub fn closure_classes(sys: &RewriteSystem, extra: &[(Word, Word)], len_bound: usize, cap: usize) -> Result<ClosureClasses> {
    let k = sys.alphabet().len();
    let idx = WordIndex::new(k, len_bound, cap)?;
    let relations: Vec<(&Word, &Word)> =
        sys.rules().iter().map(|r| (&r.lhs, &r.rhs)).chain(extra.iter().map(|(u, v)| (u, v))).collect();
    let mut uf = UnionFind::<u32>::new(idx.total());
    let mut unions = 0;
    let mut x = Vec::new();
    let mut y = Vec::new();
    for len in 0..=len_bound {
        for code in 0..idx.offsets[len + 1] - idx.offsets[len] {
            idx.decode(len, code, &mut x);
            let xi = idx.offsets[len] + code;
            // scanning each word for the left side of each relation covers
            // every one-step edge with both ends inside the bound
            for &(p, q) in &relations {
                let (p, q) = (p.symbols(), q.symbols());
                if p.len() > len || len - p.len() + q.len() > len_bound {
                    continue;
                }
                for i in 0..=len - p.len() {
                    if &x[i..i + p.len()] != p {
                        continue;
                    }
                    y.clear();
                    y.extend_from_slice(&x[..i]);
                    y.extend_from_slice(q);
                    y.extend_from_slice(&x[i + p.len()..]);
                    if uf.union(xi as u32, idx.index(&y) as u32) {
                        unions += 1;
                    }
                }
            }
        }
    }
    Ok(ClosureClasses { idx, len_bound, uf, unions })
}

/// Bounded closure, then ask whether every generator shares the class of
/// the identity.
pub fn closure_verdict(sys: &RewriteSystem, extra: &[(Word, Word)], len_bound: usize, cap: usize) -> Result<CongruenceVerdict> {
    let classes = closure_classes(sys, extra, len_bound, cap)?;
    let one = Word::empty();
    let collapsed = len_bound >= 1 && sys.alphabet().symbols().all(|s| classes.related(&Word::from_symbols(vec![s]), &one));
    Ok(CongruenceVerdict {
        status: if collapsed { VerdictStatus::Collapsed } else { VerdictStatus::Inconclusive },
        method: Method::BoundedClosure,
        evidence: Evidence::Classes { words: classes.words(), identity_class: classes.class_size(&one) },
        steps: classes.unions(),
    })
}

/// Adjoin `a^d b w = 1`, making `a^d b` right invertible in the quotient.
pub fn right_unit_probe(n: FamilyIndex, d: u32, w: &Word, cfg: &CompletionConfig) -> Result<CongruenceVerdict> {
    if d == 0 || d > n.get() {
        return Err(Error::Precondition(format!("d = {d} outside 1..={n}")));
    }
    let sys = build_presentation(n);
    let mut lhs = vec![A; d as usize];
    lhs.push(B);
    lhs.extend_from_slice(w.symbols());
    completion_verdict(&sys, &Word::from_symbols(lhs), &Word::empty(), cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub completion: CompletionConfig,
    pub oracle_len_bound: usize,
    /// Run the closure oracle on every `oracle_every`-th pair (0 disables it).
    pub oracle_every: usize,
    pub oracle_cap: usize,
}

impl SweepConfig {
    pub fn for_family(n: FamilyIndex) -> Self {
        SweepConfig {
            completion: CompletionConfig::default(),
            // some sampled pairs at norm budget 6 (n = 1) and 4 (n = 2)
            // only collapse with intermediates of length 17
            oracle_len_bound: if n.get() <= 2 { 18 } else { 20 },
            oracle_every: 10,
            oracle_cap: DEFAULT_CLOSURE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InconclusivePair {
    pub u: Word,
    pub v: Word,
    pub method: Method,
    pub steps: usize,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub n: FamilyIndex,
    pub norm_budget: u64,
    pub pairs_tested: usize,
    /// Pairs collapsed by completion.
    pub collapsed: usize,
    /// Pairs completion could not collapse within budget.
    pub inconclusive: Vec<InconclusivePair>,
    pub oracle_checked: usize,
    pub oracle_collapsed: usize,
    pub oracle_inconclusive: Vec<InconclusivePair>,
    /// Pairs the oracle collapsed but completion did not.
    pub contradictions: Vec<(Word, Word)>,
    pub completion_steps: usize,
    pub elapsed: Duration,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.inconclusive.is_empty() && self.contradictions.is_empty()
    }
}

fn shortlex_key(w: &Word) -> (usize, &[Symbol]) {
    (w.len(), w.symbols())
}

/// All unordered pairs of distinct normal forms with norm sum within the
/// budget, ordered by norm sum and then shortlex. In each pair `u` is the
/// shortlex-larger word.
pub fn sweep_pairs(n: FamilyIndex, norm_budget: u64) -> Vec<(Word, Word, u64)> {
    let mut words: Vec<(Word, u64)> = enumerate_normal_forms(n, EnumerationBound::MaxNorm(norm_budget))
        .into_iter()
        .map(|w| {
            let k = word_norm(&w, n).expect("enumerated words are normal").0;
            (w, k)
        })
        .collect();
    words.sort_by(|x, y| shortlex_key(&x.0).cmp(&shortlex_key(&y.0)));
    let mut pairs = Vec::new();
    for (i, (u, nu)) in words.iter().enumerate() {
        for (v, nv) in &words[..i] {
            if nu + nv <= norm_budget {
                pairs.push((u.clone(), v.clone(), nu + nv));
            }
        }
    }
    pairs.sort_by(|x, y| (x.2, shortlex_key(&x.0), shortlex_key(&x.1)).cmp(&(y.2, shortlex_key(&y.0), shortlex_key(&y.1))));
    pairs
}

struct PairResult {
    completion: CongruenceVerdict,
    oracle: Option<CongruenceVerdict>,
}

/// Run the completion engine on every pair and the closure oracle on a
/// deterministic subsample.
pub fn sweep(n: FamilyIndex, norm_budget: u64, cfg: &SweepConfig) -> Result<SweepReport> {
    let start = Instant::now();
    cfg.completion.validate()?;
    let pairs = sweep_pairs(n, norm_budget);
    let sys = build_presentation(n);
    let indexed: Vec<(usize, &(Word, Word, u64))> = pairs.iter().enumerate().collect();
    let results: Vec<Result<PairResult>> = par_map(&indexed, |&(i, (u, v, _))| {
        let completion = completion_verdict(&sys, u, v, &cfg.completion)?;
        let oracle = if cfg.oracle_every > 0 && i % cfg.oracle_every == 0 {
            let bound = cfg.oracle_len_bound.max(u.len()).max(v.len());
            Some(closure_verdict(&sys, &[(u.clone(), v.clone())], bound, cfg.oracle_cap)?)
        } else {
            None
        };
        Ok(PairResult { completion, oracle })
    });
    let mut report = SweepReport {
        n,
        norm_budget,
        pairs_tested: pairs.len(),
        collapsed: 0,
        inconclusive: Vec::new(),
        oracle_checked: 0,
        oracle_collapsed: 0,
        oracle_inconclusive: Vec::new(),
        contradictions: Vec::new(),
        completion_steps: 0,
        elapsed: Duration::ZERO,
    };
    for ((u, v, _), res) in pairs.iter().zip(results) {
        let res = res?;
        report.completion_steps += res.completion.steps;
        if res.completion.collapsed() {
            report.collapsed += 1;
        } else {
            report.inconclusive.push(InconclusivePair {
                u: u.clone(),
                v: v.clone(),
                method: Method::Completion,
                steps: res.completion.steps,
            });
        }
        if let Some(o) = res.oracle {
            report.oracle_checked += 1;
            if o.collapsed() {
                report.oracle_collapsed += 1;
                if !res.completion.collapsed() {
                    report.contradictions.push((u.clone(), v.clone()));
                }
            } else {
                report.oracle_inconclusive.push(InconclusivePair {
                    u: u.clone(),
                    v: v.clone(),
                    method: Method::BoundedClosure,
                    steps: o.steps,
                });
            }
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}
