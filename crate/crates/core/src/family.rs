//! The presentations `M_n`, their normal-form grammar and norm, and the
//! group-image checks.
//!
//! Every irreducible word of `M_n` has the shape
//!
//! ```text
//! b^e (a^{d_1} b^{k_1}) ... (a^{d_s} b^{k_s}) (a^{m_1} b) ... (a^{m_p} b) a^l
//! ```
//!
//! with `1 <= d_i <= n`, `k_i >= 1` and `m_j >= n + 1`.

use std::fmt;

use crate::completion::{complete, CompletionConfig, ShortlexOrder};
use crate::error::{Error, Result};
use crate::rewrite::{RewriteSystem, Rule};
use crate::smith::smith_diagonal;
use crate::word::{Alphabet, Symbol, Word};

pub const A: Symbol = Symbol(0);
pub const B: Symbol = Symbol(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyIndex(u32);

impl FamilyIndex {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidFamilyIndex);
        }
        Ok(FamilyIndex(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    fn usize(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for FamilyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Parse a word over `{a, b}` (`1` is the identity).
pub fn word(text: &str) -> Result<Word> {
    Alphabet::ab().parse(text)
}

pub fn render(w: &Word) -> String {
    Alphabet::ab().render(w)
}

fn power(s: Symbol, k: usize) -> Word {
    Word::from_symbols(vec![s; k])
}

fn a_pow(k: usize) -> Word {
    power(A, k)
}

fn b_pow(k: usize) -> Word {
    power(B, k)
}

/// The `n + 1` rules `a^{n+1} b a^d b -> 1` for `d = n, ..., 1` followed by
/// `a^{n+1} b^2 -> b`.
pub fn build_presentation(n: FamilyIndex) -> RewriteSystem {
    RewriteSystem::new(Alphabet::ab(), presentation_rules(n)).expect("M_n is well formed")
}

fn presentation_rules(n: FamilyIndex) -> Vec<Rule> {
    let n = n.usize();
    let head = a_pow(n + 1).concat(&b_pow(1));
    let mut rules: Vec<Rule> =
        (1..=n).rev().map(|d| Rule::new(head.concat(&a_pow(d)).concat(&b_pow(1)), Word::empty())).collect();
    rules.push(Rule::new(head.concat(&b_pow(1)), b_pow(1)));
    rules
}

/// One `a^d b^k` factor with `1 <= d <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub a: u32,
    pub b: u32,
}

/// The parsed shape of an irreducible word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalFormDecomposition {
    pub n: FamilyIndex,
    pub leading_b: u32,
    pub blocks: Vec<Block>,
    /// Exponents `m_j >= n + 1` of the `a^{m_j} b` factors.
    pub tails: Vec<u32>,
    pub trailing_a: u32,
}

/// The induction measure: leading b's, block b-exponents, tail
/// a-exponents and trailing a's, summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Norm(pub u64);

impl NormalFormDecomposition {
    pub fn identity(n: FamilyIndex) -> Self {
        NormalFormDecomposition { n, leading_b: 0, blocks: Vec::new(), tails: Vec::new(), trailing_a: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n.get();
        for blk in &self.blocks {
            if blk.a == 0 || blk.a > n {
                return Err(Error::Range(format!("block a-exponent {} outside 1..={n}", blk.a)));
            }
            if blk.b == 0 {
                return Err(Error::Range("block b-exponent must be positive".into()));
            }
        }
        if let Some(&m) = self.tails.iter().find(|&&m| m <= n) {
            return Err(Error::Range(format!("tail exponent {m} below {}", n + 1)));
        }
        Ok(())
    }

    /// `b^e` followed by the blocks.
    pub fn prefix(&self) -> Word {
        let mut v = vec![B; self.leading_b as usize];
        for blk in &self.blocks {
            v.extend(std::iter::repeat_n(A, blk.a as usize));
            v.extend(std::iter::repeat_n(B, blk.b as usize));
        }
        Word::from_symbols(v)
    }

    /// The tails followed by `a^l`.
    pub fn suffix(&self) -> Word {
        let mut v = Vec::new();
        for &m in &self.tails {
            v.extend(std::iter::repeat_n(A, m as usize));
            v.push(B);
        }
        v.extend(std::iter::repeat_n(A, self.trailing_a as usize));
        Word::from_symbols(v)
    }

    pub fn norm(&self) -> Norm {
        let blocks: u64 = self.blocks.iter().map(|b| b.b as u64).sum();
        let tails: u64 = self.tails.iter().map(|&m| m as u64).sum();
        Norm(self.leading_b as u64 + blocks + tails + self.trailing_a as u64)
    }
}

/// Parse `w` against the normal-form grammar. Fails exactly when `w` is
/// reducible, reporting the offset of a redex.
pub fn decompose(w: &Word, n: FamilyIndex) -> Result<NormalFormDecomposition> {
    let s = w.symbols();
    let nn = n.get();
    let run = |from: usize, sym: Symbol| s[from..].iter().take_while(|&&x| x == sym).count();
    let mut d = NormalFormDecomposition::identity(n);
    let mut i = run(0, B);
    d.leading_b = i as u32;
    while i < s.len() {
        let ra = run(i, A);
        let start = i;
        i += ra;
        if i == s.len() {
            d.trailing_a = ra as u32;
            break;
        }
        let rb = run(i, B);
        i += rb;
        let redex_at = || start + ra - (nn as usize + 1);
        if ra as u32 <= nn {
            if let Some(&m) = d.tails.last() {
                // a^{m} b a^{ra} b with m > n contains a^{n+1} b a^{ra} b
                let prev_start = start - 1 - m as usize;
                return Err(Error::NotNormalForm { offset: prev_start + m as usize - (nn as usize + 1) });
            }
            d.blocks.push(Block { a: ra as u32, b: rb as u32 });
        } else if rb >= 2 {
            return Err(Error::NotNormalForm { offset: redex_at() });
        } else {
            d.tails.push(ra as u32);
        }
    }
    Ok(d)
}

pub fn recompose(d: &NormalFormDecomposition) -> Result<Word> {
    d.validate()?;
    Ok(d.prefix().concat(&d.suffix()))
}

pub fn norm(d: &NormalFormDecomposition) -> Norm {
    d.norm()
}

/// Norm of an irreducible word.
pub fn word_norm(w: &Word, n: FamilyIndex) -> Result<Norm> {
    decompose(w, n).map(|d| d.norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationBound {
    MaxLength(usize),
    MaxNorm(u64),
}

/// All irreducible words within the bound, in shortlex order.
pub fn enumerate_normal_forms(n: FamilyIndex, bound: EnumerationBound) -> Vec<Word> {
    let sys = build_presentation(n);
    let max_len = match bound {
        EnumerationBound::MaxLength(l) => l,
        // a block a^d b^k has length <= (n+1)k, a tail a^m b length <= (n+1)m
        EnumerationBound::MaxNorm(k) => (n.get() as usize + 1) * k as usize,
    };
    let mut out = vec![Word::empty()];
    let mut level = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * 2);
        for w in &level {
            for s in [A, B] {
                // irreducible words are factor-closed: only a new suffix can be a redex
                let mut v = w.symbols().to_vec();
                v.push(s);
                let ext = Word::from_symbols(v);
                if sys.rules().iter().all(|r| !ext.symbols().ends_with(r.lhs.symbols())) {
                    next.push(ext);
                }
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    if let EnumerationBound::MaxNorm(k) = bound {
        out.retain(|w| decompose(w, n).map(|d| d.norm().0 <= k).unwrap_or(false));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub n: FamilyIndex,
    /// Exponent sums of `a` and `b` in `lhs - rhs`, one row per rule.
    pub rows: Vec<[i64; 2]>,
    pub divisors: Vec<i64>,
    pub trivial: bool,
}

/// Smith normal form of the abelianized relation matrix.
pub fn abelianization_check(n: FamilyIndex) -> Result<Abelianization> {
    let rows: Vec<[i64; 2]> = build_presentation(n)
        .rules()
        .iter()
        .map(|r| {
            let e = |w: &Word, s| w.exponent_sum(s) as i64;
            [e(&r.lhs, A) - e(&r.rhs, A), e(&r.lhs, B) - e(&r.rhs, B)]
        })
        .collect();
    let matrix: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    let divisors = smith_diagonal(&matrix)?;
    let trivial = divisors == [1, 1];
    Ok(Abelianization { n, rows, divisors, trivial })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupImage {
    Trivial,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct GroupCollapse {
    pub verdict: GroupImage,
    pub steps_used: usize,
    pub diagnostic: Option<String>,
}

/// Adjoin formal inverses `A`, `B` and complete: the group presented by
/// the rules of `M_n` is trivial iff all four generators collapse.
pub fn group_collapse_check(n: FamilyIndex, cfg: &CompletionConfig) -> Result<GroupCollapse> {
    let alphabet = Alphabet::new(&['a', 'b', 'A', 'B'])?;
    let (inv_a, inv_b) = (Symbol(2), Symbol(3));
    let sys = RewriteSystem::new(alphabet.clone(), presentation_rules(n))?;
    let pair = |x: Symbol, y: Symbol| (Word::from_symbols(vec![x, y]), Word::empty());
    let inverses = [pair(A, inv_a), pair(inv_a, A), pair(B, inv_b), pair(inv_b, B)];
    let out = complete(&sys, &inverses, &ShortlexOrder::natural(&alphabet), cfg)?;
    let trivial = out.is_completed()
        && alphabet.symbols().all(|s| out.system.normalize(&Word::from_symbols(vec![s])).is_ok_and(|w| w.is_empty()));
    Ok(GroupCollapse {
        verdict: if trivial { GroupImage::Trivial } else { GroupImage::Inconclusive },
        steps_used: out.steps_used,
        diagnostic: out.diagnostic,
    })
}
