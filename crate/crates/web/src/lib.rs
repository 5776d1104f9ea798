//! Browser bindings: every export takes plain strings and returns JSON text.

use serde_json::json;
use wasm_bindgen::prelude::*;
use wml_core::invariants::report;
use wml_core::surfaces::{genus_spectrum, DEFAULT_SPEC_CAP};
use wml_core::weingarten::{laurent, moment, TraceMonomial};
use wml_core::{Error, Word};

fn js(e: Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn parse(text: &str, rank: usize) -> Result<Word, Error> {
    if rank == 0 {
        let w = Word::parse(text, 26)?;
        let r = w.max_generator().max(1);
        return Ok(w.with_rank(r));
    }
    Ok(Word::parse(text, rank)?)
}

/// Primitivity rank, commutator length and CommCrit of `word` in `F_rank`
/// (`rank = 0` picks the largest generator used).
#[wasm_bindgen]
pub fn invariants_json(word: &str, rank: usize) -> Result<String, JsValue> {
    let w = parse(word, rank).map_err(js)?;
    let r = report(&w, w.rank());
    serde_json::to_string(&r).map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Exact `E_w[T]`, its expansion at infinity and its values for `n` in
/// `n_from..=n_to` (skipping sizes below the validity threshold).
#[wasm_bindgen]
pub fn moment_json(word: &str, trace: &str, n_from: u32, n_to: u32) -> Result<String, JsValue> {
    let w = parse(word, 0).map_err(js)?;
    let t: TraceMonomial = trace.parse().map_err(js)?;
    let m = moment(&w, &t).map_err(js)?;
    let curve: Vec<_> = (n_from.max(1)..=n_to)
        .filter(|&n| u64::from(n) >= m.n_min)
        .map(|n| json!([n, m.value.eval_f64(f64::from(n))]))
        .collect();
    let out = json!({
        "word": w,
        "T": t.to_string(),
        "value": m.value,
        "n_min": m.n_min,
        "laurent": laurent(&m.value, 4),
        "curve": curve,
    });
    Ok(out.to_string())
}

/// Genus spectrum of the matching surfaces of `words` (separated by `;`).
#[wasm_bindgen]
pub fn surface_spectrum_json(words: &str, max_subdivision: usize) -> Result<String, JsValue> {
    let parsed = words
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(s, 0))
        .collect::<Result<Vec<_>, _>>()
        .map_err(js)?;
    let r = parsed.iter().map(|w| w.rank()).max().unwrap_or(1);
    let words: Vec<Word> = parsed.into_iter().map(|w| w.with_rank(r)).collect();
    let s = genus_spectrum(&words, max_subdivision.clamp(1, 2), DEFAULT_SPEC_CAP).map_err(js)?;
    Ok(s.to_json().to_string())
}
