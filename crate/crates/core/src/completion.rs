//! Shortlex Knuth–Bendix completion for monoid presentations.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::rewrite::{overlap_pairs, Confluence, CriticalPair, RewriteSystem, Rule};
use crate::word::{Alphabet, Symbol, Word};

/// Length first, then lexicographic by symbol precedence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortlexOrder {
    // rank[symbol] = position in the precedence list
    rank: Vec<usize>,
}

impl ShortlexOrder {
    /// Precedence given by alphabet order (`a < b < ...`).
    pub fn natural(alphabet: &Alphabet) -> Self {
        ShortlexOrder { rank: (0..alphabet.len()).collect() }
    }

    /// `precedence` lists the symbols from smallest to largest.
    pub fn with_precedence(precedence: &[Symbol]) -> Result<Self> {
        let mut rank = vec![usize::MAX; precedence.len()];
        for (pos, s) in precedence.iter().enumerate() {
            match rank.get_mut(s.index()) {
                Some(r) if *r == usize::MAX => *r = pos,
                _ => return Err(Error::Precondition("precedence must be a permutation".into())),
            }
        }
        Ok(ShortlexOrder { rank })
    }

    pub fn compare(&self, u: &Word, v: &Word) -> Ordering {
        u.len()
            .cmp(&v.len())
            .then_with(|| u.symbols().iter().map(|s| self.rank[s.index()]).cmp(v.symbols().iter().map(|s| self.rank[s.index()])))
    }

    /// Orient `u = v` from the larger to the smaller word.
    pub fn orient(&self, u: Word, v: Word) -> Result<Rule> {
        match self.compare(&u, &v) {
            Ordering::Greater => Ok(Rule::new(u, v)),
            Ordering::Less => Ok(Rule::new(v, u)),
            Ordering::Equal => Err(Error::Unorientable),
        }
    }
}

pub fn shortlex_compare(u: &Word, v: &Word, ord: &ShortlexOrder) -> Ordering {
    ord.compare(u, v)
}

pub fn orient(u: &Word, v: &Word, ord: &ShortlexOrder) -> Result<Rule> {
    ord.orient(u.clone(), v.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionConfig {
    pub max_rules: usize,
    pub max_steps: usize,
    pub max_word_length: usize,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        CompletionConfig { max_rules: 512, max_steps: 10_000, max_word_length: 64 }
    }
}

impl CompletionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_rules == 0 || self.max_steps == 0 || self.max_word_length == 0 {
            return Err(Error::Precondition("completion limits must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionStatus {
    Completed,
    Exhausted,
}

#[derive(Clone, Debug)]
pub struct CompletionOutcome {
    pub status: CompletionStatus,
    pub system: RewriteSystem,
    pub steps_used: usize,
    /// Critical pairs skipped because their overlap exceeded `max_word_length`.
    pub dropped_pairs: usize,
    /// Why the run stopped early, when it did.
    pub diagnostic: Option<String>,
}

impl CompletionOutcome {
    pub fn is_completed(&self) -> bool {
        self.status == CompletionStatus::Completed
    }
}

/// True iff every generator normalizes to the identity.
pub fn is_trivial_monoid(out: &CompletionOutcome) -> Result<bool> {
    if !out.is_completed() {
        return Err(Error::NotCompleted);
    }
    let sys = &out.system;
    Ok(sys.alphabet().symbols().all(|s| sys.nf(&[s]).is_empty()))
}

/// Working rule set: deleted rules leave a hole so indices stay stable.
struct RuleSet {
    alphabet: Alphabet,
    rules: Vec<Option<Rule>>,
    active: usize,
    snapshot: Option<RewriteSystem>,
}

impl RuleSet {
    fn new(alphabet: Alphabet) -> Self {
        RuleSet { alphabet, rules: Vec::new(), active: 0, snapshot: None }
    }

    fn system(&mut self) -> &RewriteSystem {
        if self.snapshot.is_none() {
            let rules = self.rules.iter().flatten().cloned().collect();
            self.snapshot = Some(RewriteSystem::new(self.alphabet.clone(), rules).expect("interreduced rules are valid"));
        }
        self.snapshot.as_ref().unwrap()
    }

    fn normalize(&mut self, w: &Word) -> Word {
        self.system().nf(w.symbols())
    }

    /// Normalize both sides and, if distinct, add the oriented rule while
    /// keeping the set interreduced. Rules whose lhs becomes reducible are
    /// pushed back onto `requeue`. Returns the new rule's index.
    fn add_equation(&mut self, u: &Word, v: &Word, ord: &ShortlexOrder, requeue: &mut Vec<(Word, Word)>) -> Option<usize> {
        let (u, v) = (self.normalize(u), self.normalize(v));
        if u == v {
            return None;
        }
        let rule = ord.orient(u, v).expect("distinct words are orientable");
        for slot in self.rules.iter_mut() {
            if let Some(r) = slot {
                if r.lhs.occurrences(rule.lhs.symbols()).next().is_some() {
                    let r = slot.take().unwrap();
                    self.active -= 1;
                    requeue.push((r.lhs, r.rhs));
                }
            }
        }
        self.rules.push(Some(rule));
        self.active += 1;
        self.snapshot = None;
        // right-hand sides may now be reducible by the new rule
        let sys = self.system().clone();
        let mut changed = false;
        for r in self.rules.iter_mut().flatten() {
            let nf = sys.nf(r.rhs.symbols());
            if nf != r.rhs {
                r.rhs = nf;
                changed = true;
            }
        }
        if changed {
            self.snapshot = None;
        }
        Some(self.rules.len() - 1)
    }

    fn collapsed(&mut self) -> bool {
        let sys = self.system();
        sys.alphabet().symbols().all(|s| sys.nf(&[s]).is_empty())
    }
}

/// Rewrite every rule against the others until all left-hand sides are
/// irreducible and all right-hand sides are normal.
pub fn interreduce(sys: &RewriteSystem, ord: &ShortlexOrder) -> RewriteSystem {
    let mut set = RuleSet::new(sys.alphabet().clone());
    let mut queue: Vec<(Word, Word)> = sys.rules().iter().rev().map(|r| (r.lhs.clone(), r.rhs.clone())).collect();
    let mut requeue = Vec::new();
    while let Some((u, v)) = queue.pop() {
        set.add_equation(&u, &v, ord, &mut requeue);
        queue.extend(requeue.drain(..).rev());
    }
    set.system().clone()
}

/// Queue entry: pairs are served smallest overlap first, FIFO among equals.
type Pending = Reverse<(usize, u64, Word, Word)>;

/// Knuth–Bendix completion of `sys` together with the equations `extra`.
pub fn complete(
    sys: &RewriteSystem,
    extra: &[(Word, Word)],
    ord: &ShortlexOrder,
    cfg: &CompletionConfig,
) -> Result<CompletionOutcome> {
    cfg.validate()?;
    for (u, v) in extra {
        if !sys.alphabet().contains(u) || !sys.alphabet().contains(v) {
            return Err(Error::Precondition("extra equation uses a symbol outside the alphabet".into()));
        }
    }
    let mut run = Run::new(sys.alphabet().clone(), cfg);
    for r in sys.rules() {
        run.push(0, r.lhs.clone(), r.rhs.clone());
    }
    for (u, v) in extra {
        run.push(0, u.clone(), v.clone());
    }
    Ok(run.drive(ord))
}

struct Run<'a> {
    cfg: &'a CompletionConfig,
    set: RuleSet,
    queue: BinaryHeap<Pending>,
    seq: u64,
    steps: usize,
    dropped: usize,
}

impl<'a> Run<'a> {
    fn new(alphabet: Alphabet, cfg: &'a CompletionConfig) -> Self {
        Run { cfg, set: RuleSet::new(alphabet), queue: BinaryHeap::new(), seq: 0, steps: 0, dropped: 0 }
    }

    fn push(&mut self, priority: usize, u: Word, v: Word) {
        self.queue.push(Reverse((priority, self.seq, u, v)));
        self.seq += 1;
    }

    fn finish(&mut self, status: CompletionStatus, diagnostic: Option<String>) -> CompletionOutcome {
        CompletionOutcome {
            status,
            system: self.set.system().clone(),
            steps_used: self.steps,
            dropped_pairs: self.dropped,
            diagnostic,
        }
    }

    fn collapse_outcome(&mut self) -> CompletionOutcome {
        let alphabet = self.set.alphabet.clone();
        let rules = alphabet.symbols().map(|s| Rule::new(Word::from_symbols(vec![s]), Word::empty())).collect();
        CompletionOutcome {
            status: CompletionStatus::Completed,
            system: RewriteSystem::new(alphabet, rules).expect("generator rules are valid"),
            steps_used: self.steps,
            dropped_pairs: self.dropped,
            diagnostic: None,
        }
    }

    fn enqueue_pairs(&mut self, new: usize) {
        let rule = self.set.rules[new].clone().expect("just added");
        let mut cps: Vec<CriticalPair> = Vec::new();
        for (j, other) in self.set.rules.iter().enumerate() {
            let Some(other) = other else { continue };
            overlap_pairs(new, &rule, j, other, &mut cps);
            if j != new {
                overlap_pairs(j, other, new, &rule, &mut cps);
            }
        }
        for cp in cps {
            if cp.source.len() > self.cfg.max_word_length {
                self.dropped += 1;
            } else {
                self.push(cp.source.len(), cp.left_result, cp.right_result);
            }
        }
    }

    fn drive(&mut self, ord: &ShortlexOrder) -> CompletionOutcome {
        let mut requeue = Vec::new();
        loop {
            while let Some(Reverse((_, _, u, v))) = self.queue.pop() {
                if self.steps >= self.cfg.max_steps {
                    let msg = format!("step limit {} reached", self.cfg.max_steps);
                    return self.finish(CompletionStatus::Exhausted, Some(msg));
                }
                self.steps += 1;
                let Some(idx) = self.set.add_equation(&u, &v, ord, &mut requeue) else { continue };
                for (l, r) in requeue.drain(..) {
                    self.push(0, l, r);
                }
                if self.set.collapsed() {
                    return self.collapse_outcome();
                }
                if self.set.active > self.cfg.max_rules {
                    let msg = format!("rule limit {} exceeded", self.cfg.max_rules);
                    return self.finish(CompletionStatus::Exhausted, Some(msg));
                }
                self.enqueue_pairs(idx);
            }
            if self.dropped > 0 {
                let msg = format!("{} critical pairs exceeded the word-length cap {}", self.dropped, self.cfg.max_word_length);
                return self.finish(CompletionStatus::Exhausted, Some(msg));
            }
            // final sweep: any pair left unjoined goes back in the queue
            let sys = self.set.system().clone();
            let unjoined: Vec<CriticalPair> = sys
                .critical_pairs()
                .into_iter()
                .filter(|cp| sys.nf(cp.left_result.symbols()) != sys.nf(cp.right_result.symbols()))
                .collect();
            if unjoined.is_empty() {
                debug_assert_eq!(sys.is_confluent(usize::MAX), Confluence::Confluent);
                return self.finish(CompletionStatus::Completed, None);
            }
            for cp in unjoined {
                self.push(cp.source.len(), cp.left_result, cp.right_result);
            }
        }
    }
}
