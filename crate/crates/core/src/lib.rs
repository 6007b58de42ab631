//! Rewriting and semigroup tooling for the monoids `M_n` presented by
//!
//! ```text
//! a^{n+1} b a^d b -> 1   (d = n, n-1, ..., 1)
//! a^{n+1} b b     -> b
//! ```
//!
//! The crate builds these presentations, solves their word problem, and
//! produces bounded, machine-checked evidence for their structural
//! properties: confluence, the shape of normal forms, one-sided inverses
//! and D-chains, absence of nontrivial H-classes among short words, a
//! trivial group image, and collapse of every small congruence.

pub mod completion;
pub mod congruence;
pub mod error;
pub mod family;
pub mod greens;
pub mod rewrite;
pub mod smith;
pub mod word;

/// Map over a slice, in parallel when the `parallel` feature is on. Output
/// order always matches input order.
pub(crate) fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

pub use completion::{
    complete, interreduce, is_trivial_monoid, orient, shortlex_compare, CompletionConfig, CompletionOutcome, CompletionStatus,
    ShortlexOrder,
};
pub use error::{Error, Result};
pub use rewrite::{Confluence, CriticalPair, RewriteSystem, Rule, Step, Strategy};
pub use word::{Alphabet, Symbol, Word};
