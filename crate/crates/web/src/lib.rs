//! Browser bindings. Every export takes plain strings and numbers and
//! returns a JSON document; failures come back as `{"error": "..."}`.

use cfmonoid::congruence::{collapse_by_completion, Evidence};
use cfmonoid::family::{build_presentation, decompose, render, word, FamilyIndex};
use cfmonoid::greens::d_witness;
use cfmonoid::{CompletionConfig, Word};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Longest input word accepted from the page.
pub const MAX_INPUT: usize = 200;

fn family(n: u32) -> Result<FamilyIndex, String> {
    if n > 64 {
        return Err("n is limited to 64 in the browser".into());
    }
    FamilyIndex::new(n).map_err(|e| e.to_string())
}

fn element(n: FamilyIndex, text: &str) -> Result<Word, String> {
    let text = text.trim();
    if text.len() > MAX_INPUT {
        return Err(format!("words are limited to {MAX_INPUT} letters"));
    }
    let w = word(if text.is_empty() { "1" } else { text }).map_err(|e| e.to_string())?;
    build_presentation(n).normalize(&w).map_err(|e| e.to_string())
}

fn finish(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

pub fn presentation_json(n: u32) -> Result<Value, String> {
    let sys = build_presentation(family(n)?);
    let rules: Vec<Value> = sys.rules().iter().map(|r| json!({"lhs": render(&r.lhs), "rhs": render(&r.rhs)})).collect();
    Ok(json!({ "n": n, "rules": rules }))
}

pub fn normal_form_json(n: u32, text: &str) -> Result<Value, String> {
    let n = family(n)?;
    let w = element(n, text)?;
    let d = decompose(&w, n).map_err(|e| e.to_string())?;
    Ok(json!({
        "normal_form": render(&w),
        "leading_b": d.leading_b,
        "blocks": d.blocks.iter().map(|b| [b.a, b.b]).collect::<Vec<_>>(),
        "tails": d.tails,
        "trailing_a": d.trailing_a,
        "prefix": render(&d.prefix()),
        "suffix": render(&d.suffix()),
        "norm": d.norm().0,
    }))
}

pub fn d_chain_json(n: u32, text: &str) -> Result<Value, String> {
    let n = family(n)?;
    let c = d_witness(&element(n, text)?, n).map_err(|e| e.to_string())?;
    Ok(json!({
        "w": render(c.w()),
        "middle": render(c.middle()),
        "left_part": render(c.left_part()),
        "right_part": render(c.right_part()),
        "left_inverse": render(c.left_inverse()),
        "right_inverse": render(c.right_inverse()),
    }))
}

pub fn collapse_json(n: u32, u: &str, v: &str) -> Result<Value, String> {
    let n = family(n)?;
    let (u, v) = (element(n, u)?, element(n, v)?);
    if u == v {
        return Err(format!("both words reduce to {}; pick distinct elements", render(&u)));
    }
    let verdict = collapse_by_completion(n, &u, &v, &CompletionConfig::default()).map_err(|e| e.to_string())?;
    let rules = match &verdict.evidence {
        Evidence::System(sys) => sys.rules().iter().map(|r| format!("{} -> {}", render(&r.lhs), render(&r.rhs))).collect(),
        Evidence::Classes { .. } => Vec::new(),
    };
    Ok(json!({
        "u": render(&u),
        "v": render(&v),
        "collapsed": verdict.collapsed(),
        "steps": verdict.steps,
        "rules": rules,
    }))
}

#[wasm_bindgen]
pub fn presentation(n: u32) -> String {
    finish(presentation_json(n))
}

#[wasm_bindgen]
pub fn normal_form(n: u32, word: &str) -> String {
    finish(normal_form_json(n, word))
}

#[wasm_bindgen]
pub fn d_chain(n: u32, word: &str) -> String {
    finish(d_chain_json(n, word))
}

#[wasm_bindgen]
pub fn collapse(n: u32, u: &str, v: &str) -> String {
    finish(collapse_json(n, u, v))
}
