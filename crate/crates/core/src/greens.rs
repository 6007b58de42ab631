//! Green's-relations evidence for `M_n`.
//!
//! Two independent routes: closed-form one-sided inverses read off the
//! normal-form shape, and a bounded breadth-first search for multiplier
//! words. Every witness that leaves this module has been re-checked by
//! normalization.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::family::{build_presentation, decompose, enumerate_normal_forms, Block, EnumerationBound, FamilyIndex, A, B};
use crate::par_map;
use crate::rewrite::RewriteSystem;
use crate::word::{Symbol, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// Same principal right ideal: multipliers act on the right.
    R,
    /// Same principal left ideal: multipliers act on the left.
    L,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::R => "R",
            Relation::L => "L",
        }
    }
}

fn act(sys: &RewriteSystem, relation: Relation, w: &Word, m: &Word) -> Result<Word> {
    match relation {
        Relation::R => sys.normalize(&w.concat(m)),
        Relation::L => sys.normalize(&m.concat(w)),
    }
}

/// `u` and `v` are related: `forward` carries `u` to `v`, `backward`
/// carries `v` back to `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreensWitness {
    relation: Relation,
    u: Word,
    v: Word,
    forward: Word,
    backward: Word,
}

impl GreensWitness {
    /// Builds the witness only if both normalizations check out.
    pub fn verify(sys: &RewriteSystem, relation: Relation, u: Word, v: Word, forward: Word, backward: Word) -> Option<Self> {
        let nu = sys.normalize(&u).ok()?;
        let nv = sys.normalize(&v).ok()?;
        if act(sys, relation, &u, &forward).ok()? != nv || act(sys, relation, &v, &backward).ok()? != nu {
            return None;
        }
        Some(GreensWitness { relation, u, v, forward, backward })
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }
    pub fn u(&self) -> &Word {
        &self.u
    }
    pub fn v(&self) -> &Word {
        &self.v
    }
    pub fn forward(&self) -> &Word {
        &self.forward
    }
    pub fn backward(&self) -> &Word {
        &self.backward
    }
}

/// `w = left_part · right_part` with `w L right_part` (via `left_inverse`)
/// and `right_part R 1` (via `right_inverse`), so `w D 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DChain {
    w: Word,
    middle: Word,
    left_part: Word,
    right_part: Word,
    left_inverse: Word,
    right_inverse: Word,
}

impl DChain {
    pub fn w(&self) -> &Word {
        &self.w
    }
    pub fn middle(&self) -> &Word {
        &self.middle
    }
    pub fn left_part(&self) -> &Word {
        &self.left_part
    }
    pub fn right_part(&self) -> &Word {
        &self.right_part
    }
    pub fn left_inverse(&self) -> &Word {
        &self.left_inverse
    }
    pub fn right_inverse(&self) -> &Word {
        &self.right_inverse
    }
}

fn pw(s: Symbol, k: usize) -> Word {
    Word::from_symbols(vec![s; k])
}

/// Left inverse of `b^e (a^{d_1} b^{k_1}) ... (a^{d_s} b^{k_s})`.
///
/// `b` is cancelled on the left by `a^{n+1} b a^n`, and `a^d b^k` by
/// `(a^{n+1} b a^n)^{k-1} a^{n+1} b a^{n-d}`.
pub fn left_inverse_of_prefix(leading_b: u32, blocks: &[Block], n: FamilyIndex) -> Result<Word> {
    let n = n.get() as usize;
    let head = pw(A, n + 1).concat(&pw(B, 1));
    let kill_b = head.concat(&pw(A, n));
    let mut factors = vec![kill_b.clone(); leading_b as usize];
    for blk in blocks {
        let (d, k) = (blk.a as usize, blk.b as usize);
        if d == 0 || d > n || k == 0 {
            return Err(Error::Range(format!("block a^{d} b^{k} outside the prefix grammar")));
        }
        factors.push(kill_b.pow(k - 1).concat(&head).concat(&pw(A, n - d)));
    }
    Ok(factors.iter().rev().fold(Word::empty(), |acc, f| acc.concat(f)))
}

/// Right inverse of `(a^{m_1} b) ... (a^{m_p} b) a^l`.
///
/// `a` is cancelled on the right by `a^n b a b`, and `a^m b` by
/// `a b (a^n b a b)^{m-n-1}`.
pub fn right_inverse_of_suffix(tails: &[u32], trailing_a: u32, n: FamilyIndex) -> Result<Word> {
    let n = n.get() as usize;
    let ab = pw(A, 1).concat(&pw(B, 1));
    let kill_a = pw(A, n).concat(&pw(B, 1)).concat(&ab);
    let mut inverse = kill_a.pow(trailing_a as usize);
    for &m in tails.iter().rev() {
        let m = m as usize;
        if m <= n {
            return Err(Error::Range(format!("tail exponent {m} below {}", n + 1)));
        }
        inverse = inverse.concat(&ab.concat(&kill_a.pow(m - n - 1)));
    }
    Ok(inverse)
}

/// Split an irreducible word into its prefix and suffix parts and certify
/// `w D 1` through them.
pub fn d_witness(w: &Word, n: FamilyIndex) -> Result<DChain> {
    let d = decompose(w, n)?;
    let sys = build_presentation(n);
    let left_part = d.prefix();
    let right_part = d.suffix();
    let chain = DChain {
        w: w.clone(),
        middle: right_part.clone(),
        left_inverse: left_inverse_of_prefix(d.leading_b, &d.blocks, n)?,
        right_inverse: right_inverse_of_suffix(&d.tails, d.trailing_a, n)?,
        left_part,
        right_part,
    };
    let ok = sys.normalize(&chain.left_part.concat(&chain.right_part))? == *w
        && sys.normalize(&chain.left_inverse.concat(&chain.left_part))?.is_empty()
        && sys.normalize(&chain.right_part.concat(&chain.right_inverse))?.is_empty();
    if !ok {
        return Err(Error::Precondition("closed-form inverses failed verification".into()));
    }
    Ok(chain)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relatedness {
    Witnessed(GreensWitness),
    Unknown,
}

/// Limits of a multiplier search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBound {
    /// Longest multiplier word tried.
    pub witness_len: usize,
    /// Longest intermediate normal form kept in the frontier.
    pub state_len: usize,
}

impl SearchBound {
    /// Witness bound `witness_len`; intermediate states may exceed the
    /// longer endpoint by one left-hand side.
    pub fn for_pair(sys: &RewriteSystem, u: &Word, v: &Word, witness_len: usize) -> Self {
        SearchBound { witness_len, state_len: u.len().max(v.len()) + sys.max_lhs_len() }
    }
}

/// Breadth-first exploration of right multiplication from `start`:
/// states are normal forms, edges append one generator. Visits states in
/// order of shortest multiplier, shortlex among equals.
struct Frontier {
    states: Vec<Word>,
    parent: Vec<(u32, Symbol)>,
    index: HashMap<Word, u32>,
}

impl Frontier {
    fn explore(sys: &RewriteSystem, start: &Word, bound: SearchBound, mut stop: impl FnMut(&Word) -> bool) -> Self {
        let start = sys.nf(start.symbols());
        let mut f = Frontier { states: vec![start.clone()], parent: vec![(u32::MAX, Symbol(0))], index: HashMap::new() };
        f.index.insert(start.clone(), 0);
        if stop(&start) {
            return f;
        }
        let letters: Vec<Symbol> = sys.alphabet().symbols().collect();
        let mut layer = vec![0u32];
        let mut buf = Vec::new();
        for _ in 0..bound.witness_len {
            let mut next = Vec::new();
            for &i in &layer {
                for &s in &letters {
                    buf.clear();
                    buf.extend_from_slice(f.states[i as usize].symbols());
                    sys.push_all(&mut buf, &[s], None).expect("no budget");
                    if buf.len() > bound.state_len || f.index.contains_key(buf.as_slice()) {
                        continue;
                    }
                    let state = Word::from(buf.as_slice());
                    let id = f.states.len() as u32;
                    f.index.insert(state.clone(), id);
                    f.states.push(state);
                    f.parent.push((i, s));
                    if stop(&f.states[id as usize]) {
                        return f;
                    }
                    next.push(id);
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        f
    }

    fn path_to(&self, target: &Word) -> Option<Word> {
        let mut i = *self.index.get(target)?;
        let mut letters = Vec::new();
        while i != 0 {
            let (p, s) = self.parent[i as usize];
            letters.push(s);
            i = p;
        }
        letters.reverse();
        Some(Word::from_symbols(letters))
    }
}

/// Shortest multiplier carrying `from` to `to` on the given side, if one
/// exists within the bound.
fn find_multiplier(
    sys: &RewriteSystem,
    mirror: &RewriteSystem,
    relation: Relation,
    from: &Word,
    to: &Word,
    bound: SearchBound,
) -> Option<Word> {
    match relation {
        Relation::R => {
            let target = sys.nf(to.symbols());
            Frontier::explore(sys, from, bound, |s| *s == target).path_to(&target)
        }
        Relation::L => {
            // left multiplication is right multiplication in the mirror image
            let target = mirror.nf(to.reversed().symbols());
            Frontier::explore(mirror, &from.reversed(), bound, |s| *s == target).path_to(&target).map(|p| p.reversed())
        }
    }
}

/// Semi-decide `u R v` or `u L v` by multiplier search. `Unknown` is not a
/// refutation.
pub fn related_bounded(u: &Word, v: &Word, relation: Relation, sys: &RewriteSystem, witness_len_bound: usize) -> Relatedness {
    related_within(u, v, relation, sys, SearchBound::for_pair(sys, u, v, witness_len_bound))
}

pub fn related_within(u: &Word, v: &Word, relation: Relation, sys: &RewriteSystem, bound: SearchBound) -> Relatedness {
    let mirror = sys.reversed();
    let found = find_multiplier(sys, &mirror, relation, u, v, bound)
        .zip(find_multiplier(sys, &mirror, relation, v, u, bound))
        .and_then(|(f, b)| GreensWitness::verify(sys, relation, u.clone(), v.clone(), f, b));
    match found {
        Some(w) => Relatedness::Witnessed(w),
        None => Relatedness::Unknown,
    }
}

/// A pair of distinct words that are both R- and L-related.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HViolation {
    pub u: Word,
    pub v: Word,
    pub r: GreensWitness,
    pub l: GreensWitness,
}

/// Search every pair of distinct normal forms of length `<= len_bound`
/// for R- and L-witnesses of length `<= witness_len_bound`. Each returned
/// entry is a verified nontrivial H-class; an empty result proves nothing
/// beyond the bounds.
pub fn h_trivial_scan(n: FamilyIndex, len_bound: usize, witness_len_bound: usize) -> Vec<HViolation> {
    let sys = build_presentation(n);
    let mirror = sys.reversed();
    let words = enumerate_normal_forms(n, EnumerationBound::MaxLength(len_bound));
    let bound = SearchBound { witness_len: witness_len_bound, state_len: len_bound + sys.max_lhs_len() };
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();

    // for each root, the short normal forms it reaches and how
    let reach = |sys: &RewriteSystem, root: &Word| -> HashMap<usize, Word> {
        let f = Frontier::explore(sys, root, bound, |_| false);
        f.states.iter().filter_map(|s| index.get(s).map(|&i| (i, f.path_to(s).expect("visited")))).collect()
    };
    let right: Vec<HashMap<usize, Word>> = par_map(&words, |u| reach(&sys, u));
    let mirrored: Vec<Word> = words.iter().map(Word::reversed).collect();
    let left: Vec<HashMap<usize, Word>> = par_map(&mirrored, |u| {
        let f = Frontier::explore(&mirror, u, bound, |_| false);
        f.states
            .iter()
            .filter_map(|s| index.get(&s.reversed()).map(|&i| (i, f.path_to(s).expect("visited").reversed())))
            .collect()
    });

    let mut out = Vec::new();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let (Some(rf), Some(rb), Some(lf), Some(lb)) = (right[i].get(&j), right[j].get(&i), left[i].get(&j), left[j].get(&i))
            else {
                continue;
            };
            let (u, v) = (&words[i], &words[j]);
            let r = GreensWitness::verify(&sys, Relation::R, u.clone(), v.clone(), rf.clone(), rb.clone());
            let l = GreensWitness::verify(&sys, Relation::L, u.clone(), v.clone(), lf.clone(), lb.clone());
            if let (Some(r), Some(l)) = (r, l) {
                out.push(HViolation { u: u.clone(), v: v.clone(), r, l });
            }
        }
    }
    out
}
