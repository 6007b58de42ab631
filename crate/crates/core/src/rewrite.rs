//! Oriented string rewriting over a finite alphabet.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Symbol, Word};

/// Step cap used by [`RewriteSystem::normalize`] for systems that are not
/// length-reducing.
pub const DEFAULT_STEP_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

impl Rule {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Rule { lhs, rhs }
    }
}

/// Which redex [`RewriteSystem::reduce_once`] contracts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// The occurrence ending earliest; among those, the shortest.
    #[default]
    LeftmostInnermost,
    /// The occurrence starting latest; among those, the shortest.
    Rightmost,
}

/// One contraction: the resulting word, the rule used and where.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub word: Word,
    pub rule: usize,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    /// The overlap word.
    pub source: Word,
    pub left_result: Word,
    pub right_result: Word,
    pub left_rule: usize,
    pub left_offset: usize,
    pub right_rule: usize,
    pub right_offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Confluence {
    Confluent,
    NotConfluent(CriticalPair),
    Unknown,
}

/// A finite set of oriented rules. Immutable once built.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    alphabet: Alphabet,
    rules: Vec<Rule>,
    // rule indices keyed by the last symbol of their lhs, shortest lhs first
    by_last: Vec<Vec<usize>>,
    length_reducing: bool,
}

impl PartialEq for RewriteSystem {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.rules == other.rules
    }
}

impl Eq for RewriteSystem {}

impl RewriteSystem {
    pub fn new(alphabet: Alphabet, rules: Vec<Rule>) -> Result<Self> {
        for (i, r) in rules.iter().enumerate() {
            if r.lhs.is_empty() {
                return Err(Error::EmptyLhs { rule: i });
            }
            if r.lhs == r.rhs {
                return Err(Error::TrivialRule { rule: i });
            }
            if !alphabet.contains(&r.lhs) || !alphabet.contains(&r.rhs) {
                return Err(Error::SymbolOutsideAlphabet { rule: i });
            }
            if let Some(j) = rules[..i].iter().position(|q| q.lhs == r.lhs) {
                return Err(Error::DuplicateLhs { first: j, second: i });
            }
        }
        let mut by_last = vec![Vec::new(); alphabet.len()];
        for (i, r) in rules.iter().enumerate() {
            let last = *r.lhs.symbols().last().expect("nonempty lhs");
            by_last[last.index()].push(i);
        }
        for bucket in &mut by_last {
            bucket.sort_by_key(|&i| (rules[i].lhs.len(), i));
        }
        let length_reducing = rules.iter().all(|r| r.lhs.len() > r.rhs.len());
        Ok(RewriteSystem { alphabet, rules, by_last, length_reducing })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn max_lhs_len(&self) -> usize {
        self.rules.iter().map(|r| r.lhs.len()).max().unwrap_or(0)
    }

    /// True iff every rule strictly shortens the word.
    pub fn is_length_reducing(&self) -> bool {
        self.length_reducing
    }

    /// The mirror-image system: every lhs and rhs reversed.
    pub fn reversed(&self) -> RewriteSystem {
        let rules = self.rules.iter().map(|r| Rule::new(r.lhs.reversed(), r.rhs.reversed())).collect();
        RewriteSystem::new(self.alphabet.clone(), rules).expect("mirror of a valid system is valid")
    }

    /// Shortest rule whose lhs is a suffix of `stack`.
    fn suffix_redex(&self, stack: &[Symbol]) -> Option<usize> {
        let last = stack.last()?;
        self.by_last[last.index()].iter().copied().find(|&i| stack.ends_with(self.rules[i].lhs.symbols()))
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        let s = w.symbols();
        (1..=s.len()).all(|end| self.suffix_redex(&s[..end]).is_none())
    }

    /// Contract a single redex chosen by `strategy`, or `None` if `w` is irreducible.
    pub fn reduce_once(&self, w: &Word, strategy: Strategy) -> Option<Step> {
        let s = w.symbols();
        let (rule, offset) = match strategy {
            Strategy::LeftmostInnermost => {
                (1..=s.len()).find_map(|end| self.suffix_redex(&s[..end]).map(|i| (i, end - self.rules[i].lhs.len())))?
            }
            Strategy::Rightmost => (0..s.len()).rev().find_map(|start| {
                self.rules
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| s[start..].starts_with(r.lhs.symbols()))
                    .min_by_key(|(i, r)| (r.lhs.len(), *i))
                    .map(|(i, _)| (i, start))
            })?,
        };
        let r = &self.rules[rule];
        Some(Step { word: w.splice(offset, r.lhs.len(), r.rhs.symbols()), rule, offset })
    }

    /// Step budget used by [`normalize`](Self::normalize).
    pub fn default_budget(&self, w: &Word) -> usize {
        if self.length_reducing {
            w.len() + 1
        } else {
            DEFAULT_STEP_CAP
        }
    }

    /// Irreducible descendant of `w` under leftmost-innermost reduction.
    pub fn normalize(&self, w: &Word) -> Result<Word> {
        self.normalize_with_budget(w, self.default_budget(w)).map(|(w, _)| w)
    }

    /// Normal form reached by repeated [`reduce_once`](Self::reduce_once)
    /// under `strategy`, with the default step budget.
    pub fn normalize_by(&self, w: &Word, strategy: Strategy) -> Result<Word> {
        let budget = self.default_budget(w);
        let mut cur = w.clone();
        for _ in 0..=budget {
            match self.reduce_once(&cur, strategy) {
                Some(step) => cur = step.word,
                None => return Ok(cur),
            }
        }
        Err(Error::StepBudgetExceeded { budget })
    }

    /// Like [`normalize`](Self::normalize), also returning the number of steps.
    pub fn normalize_with_budget(&self, w: &Word, budget: usize) -> Result<(Word, usize)> {
        let mut stack = Vec::with_capacity(w.len());
        let steps = self.push_all(&mut stack, w.symbols(), Some(budget))?;
        Ok((Word::from_symbols(stack), steps))
    }

    /// Normal form for systems known to terminate (length-reducing or
    /// oriented by a well-order); no budget is enforced.
    pub(crate) fn nf(&self, w: &[Symbol]) -> Word {
        let mut stack = Vec::with_capacity(w.len());
        self.push_all(&mut stack, w, None).expect("no budget");
        Word::from_symbols(stack)
    }

    /// Append `input` to an irreducible `stack`, reducing as it goes. Every
    /// redex found ends at the current top, which makes this the same
    /// sequence of contractions as repeated leftmost-innermost steps.
    pub(crate) fn push_all(&self, stack: &mut Vec<Symbol>, input: &[Symbol], budget: Option<usize>) -> Result<usize> {
        let mut pending: Vec<Symbol> = input.iter().rev().copied().collect();
        let mut steps = 0;
        while let Some(s) = pending.pop() {
            stack.push(s);
            if let Some(i) = self.suffix_redex(stack) {
                steps += 1;
                if let Some(b) = budget {
                    if steps > b {
                        return Err(Error::StepBudgetExceeded { budget: b });
                    }
                }
                let r = &self.rules[i];
                stack.truncate(stack.len() - r.lhs.len());
                pending.extend(r.rhs.symbols().iter().rev());
            }
        }
        Ok(steps)
    }

    /// Every containment and overlap critical pair, by rule pair; for each
    /// pair of rules containments come first.
    pub fn critical_pairs(&self) -> Vec<CriticalPair> {
        let mut out = Vec::new();
        for (i, ri) in self.rules.iter().enumerate() {
            for (j, rj) in self.rules.iter().enumerate() {
                if i != j {
                    containment_pairs(i, ri, j, rj, &mut out);
                }
                overlap_pairs(i, ri, j, rj, &mut out);
            }
        }
        out
    }

    /// Joins every critical pair within `budget` steps per side.
    pub fn is_confluent(&self, budget: usize) -> Confluence {
        let mut exhausted = false;
        for cp in self.critical_pairs() {
            let l = self.normalize_with_budget(&cp.left_result, budget);
            let r = self.normalize_with_budget(&cp.right_result, budget);
            match (l, r) {
                (Ok((l, _)), Ok((r, _))) if l != r => return Confluence::NotConfluent(cp),
                (Ok(_), Ok(_)) => {}
                _ => exhausted = true,
            }
        }
        if exhausted {
            Confluence::Unknown
        } else {
            Confluence::Confluent
        }
    }

    /// Render in the presentation text format.
    pub fn to_presentation(&self) -> String {
        let mut out = String::from("generators:");
        for c in self.alphabet.names() {
            out.push(' ');
            out.push(*c);
        }
        out.push('\n');
        for r in &self.rules {
            let _ = writeln!(out, "rule: {} -> {}", self.alphabet.render(&r.lhs), self.alphabet.render(&r.rhs));
        }
        out
    }

    /// Parse the presentation text format:
    ///
    /// ```text
    /// generators: a b
    /// rule: aabab -> 1
    /// rule: aabb -> b
    /// ```
    pub fn parse_presentation(text: &str) -> Result<Self> {
        let err = |line: usize, message: &str| Error::Presentation { line, message: message.into() };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| err(1, "missing generators line"))?;
        let names = header.strip_prefix("generators: ").ok_or_else(|| err(1, "expected `generators: <symbols>`"))?;
        let mut chars = Vec::new();
        for tok in names.split(' ') {
            let mut it = tok.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => chars.push(c),
                _ => return Err(err(1, "generators must be single characters separated by one space")),
            }
        }
        let alphabet = Alphabet::new(&chars).map_err(|e| err(1, &e.to_string()))?;
        let mut rules = Vec::new();
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            let body = line.strip_prefix("rule: ").ok_or_else(|| err(no, "expected `rule: <lhs> -> <rhs>`"))?;
            let (lhs, rhs) = body.split_once(" -> ").ok_or_else(|| err(no, "expected `<lhs> -> <rhs>`"))?;
            if lhs.is_empty() || rhs.is_empty() || lhs.contains(' ') || rhs.contains(' ') {
                return Err(err(no, "malformed word"));
            }
            let lhs = alphabet.parse(lhs).map_err(|e| err(no, &e.to_string()))?;
            let rhs = alphabet.parse(rhs).map_err(|e| err(no, &e.to_string()))?;
            rules.push(Rule::new(lhs, rhs));
        }
        RewriteSystem::new(alphabet, rules).map_err(|e| Error::Presentation { line: 0, message: e.to_string() })
    }
}

/// Pairs from a proper suffix of `ri.lhs` equal to a proper prefix of `rj.lhs`.
pub(crate) fn overlap_pairs(i: usize, ri: &Rule, j: usize, rj: &Rule, out: &mut Vec<CriticalPair>) {
    let (li, lj) = (ri.lhs.symbols(), rj.lhs.symbols());
    for k in 1..li.len().min(lj.len()) {
        if li[li.len() - k..] != lj[..k] {
            continue;
        }
        let source = ri.lhs.concat(&Word::from(&lj[k..]));
        let left_result = ri.rhs.concat(&Word::from(&lj[k..]));
        let right_offset = li.len() - k;
        let right_result = source.splice(right_offset, lj.len(), rj.rhs.symbols());
        out.push(CriticalPair { source, left_result, right_result, left_rule: i, left_offset: 0, right_rule: j, right_offset });
    }
}

/// Pairs from `rj.lhs` occurring inside `ri.lhs`.
pub(crate) fn containment_pairs(i: usize, ri: &Rule, j: usize, rj: &Rule, out: &mut Vec<CriticalPair>) {
    for p in ri.lhs.occurrences(rj.lhs.symbols()) {
        out.push(CriticalPair {
            source: ri.lhs.clone(),
            left_result: ri.rhs.clone(),
            right_result: ri.lhs.splice(p, rj.lhs.len(), rj.rhs.symbols()),
            left_rule: i,
            left_offset: 0,
            right_rule: j,
            right_offset: p,
        });
    }
}
