//! Browser demo bindings. Every entry point returns a JSON string so the page
//! needs no generated TypeScript types. The plain functions are usable (and
//! tested) natively; the `wasm` module only re-exports them to JavaScript.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use lrcgeom::bounds::{bound_suite, Family};
use lrcgeom::constructions::{construct_d6r3_char2, greedy_spread_d7r2, greedy_sunflower_d7r2};
use lrcgeom::galois::prime_power;
use lrcgeom::lrc::{LrcError, DEFAULT_SUBSET_BUDGET};
use lrcgeom::{Field, LrcCode};

/// The page allows q up to this value; larger fields make the exact distance
/// check too slow for an interactive demo.
pub const MAX_DEMO_Q: u64 = 32;

pub fn bounds_table_json(family: &str, q_min: u64, q_max: u64) -> Result<String, String> {
    let family: Family = family.parse().map_err(|e| format!("{e}"))?;
    if q_max > 10_000 || q_min > q_max {
        return Err("choose 2 <= q_min <= q_max <= 10000".into());
    }
    let rows: Vec<_> = (q_min.max(2)..=q_max)
        .filter(|&q| prime_power(q).is_some())
        .filter_map(|q| bound_suite(q, family).ok())
        .collect();
    Ok(serde_json::to_string(&rows).expect("serializable"))
}

fn build(family: &str, q: u64) -> Result<(LrcCode, Option<String>), String> {
    if q > MAX_DEMO_Q {
        return Err(format!("the demo is limited to q <= {MAX_DEMO_Q}"));
    }
    let (mut code, note) = match family {
        "d6r3-char2" => {
            let m = match prime_power(q) {
                Some((2, m)) => m,
                _ => return Err(format!("d6r3-char2 needs q = 2^m, got {q}")),
            };
            let c = construct_d6r3_char2(m, DEFAULT_SUBSET_BUDGET).map_err(|e| e.to_string())?;
            let note = c
                .closed_form_failure
                .map(|v| format!("closed-form layout rejected ({v}); groups taken from the canonical search"));
            (c.code, note)
        }
        "d7r2-spread" | "d7r2-sunflower" => {
            let f = Field::with_order(q).map_err(|e| e.to_string())?;
            let built = if family == "d7r2-spread" { greedy_spread_d7r2(&f) } else { greedy_sunflower_d7r2(&f) };
            (built.map_err(|e| e.to_string())?.1, None)
        }
        other => return Err(format!("unknown family {other:?}")),
    };
    if code.verified_d().is_none() {
        code.verify_min_distance(DEFAULT_SUBSET_BUDGET).map_err(|e| e.to_string())?;
    }
    Ok((code, note))
}

fn describe(code: &LrcCode) -> Value {
    let optimal = code.singleton_report().is_some_and(|s| s.verdict == lrcgeom::lrc::Optimality::Optimal);
    json!({
        "q": code.field().order(),
        "n": code.n(),
        "k": code.k(),
        "d": code.verified_d().and_then(|c| c.d),
        "r": code.r(),
        "optimal": optimal,
        "groups": code.repair_groups(),
        "h": code.parity_check().to_rows(),
    })
}

pub fn construct_json(family: &str, q: u64) -> Result<String, String> {
    let (code, note) = build(family, q)?;
    let mut v = describe(&code);
    v["note"] = json!(note);
    Ok(v.to_string())
}

/// Encodes a random message, erases `erase` (comma separated) and repairs
/// each position locally when its group allows, globally otherwise.
pub fn repair_demo_json(family: &str, q: u64, erase: &str, seed: u64) -> Result<String, String> {
    let (code, _) = build(family, q)?;
    let n = code.n();
    let mut erased = Vec::new();
    for tok in erase.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let i: usize = tok.parse().map_err(|_| format!("bad position {tok:?}"))?;
        if i >= n {
            return Err(format!("position {i} is outside 0..{n}"));
        }
        erased.push(i);
    }
    erased.sort_unstable();
    erased.dedup();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let message: Vec<u32> = (0..code.k()).map(|_| rng.gen_range(0..code.field().order())).collect();
    let word = code.encode(&message).map_err(|e| e.to_string())?;
    let mut received: Vec<Option<u32>> = word.iter().copied().map(Some).collect();
    for &i in &erased {
        received[i] = None;
    }

    let mut steps = Vec::new();
    let mut global = None;
    for &pos in &erased {
        match code.local_repair(&received, pos) {
            Ok(rep) => steps.push(json!({ "pos": pos, "mode": "local", "reads": rep.reads, "value": rep.value })),
            Err(LrcError::UnrepairableLocally { .. }) => {
                if global.is_none() {
                    global = Some(code.erasure_decode(&received).map_err(|e| e.to_string())?);
                }
                let full = global.as_ref().expect("decoded");
                steps.push(json!({ "pos": pos, "mode": "global", "reads": n - erased.len(), "value": full[pos] }));
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    let ok = steps.iter().all(|s| s["value"] == word[s["pos"].as_u64().unwrap() as usize]);
    Ok(json!({ "codeword": word, "erased": erased, "steps": steps, "ok": ok }).to_string())
}

#[cfg(target_arch = "wasm32")]
mod wasm {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen]
    pub fn bounds_table(family: &str, q_min: u32, q_max: u32) -> Result<String, JsValue> {
        super::bounds_table_json(family, q_min.into(), q_max.into()).map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen]
    pub fn construct(family: &str, q: u32) -> Result<String, JsValue> {
        super::construct_json(family, q.into()).map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen]
    pub fn repair_demo(family: &str, q: u32, erase: &str, seed: u32) -> Result<String, JsValue> {
        super::repair_demo_json(family, q.into(), erase, seed.into()).map_err(|e| JsValue::from_str(&e))
    }
}
