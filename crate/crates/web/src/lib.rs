//! WebAssembly entry points for the demo page. Every function returns a JSON
//! string: `{"ok": true, ...}` on success, `{"ok": false, "error": ...}`
//! otherwise.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use permpoly::coeffx::{
    extract_coefficient, extract_coefficient_exact, MonomialTarget, WindowProduct,
};
use permpoly::ffield::make_field_with_cap;
use permpoly::hermite::{classify_case, cn_borrow_set, cn_bruteforce_capped, cn_closed_form};
use permpoly::ppcheck::is_pp;
use permpoly::{Error, Result};

/// Fields up to this size are enumerated in the browser.
pub const BROWSER_CAP: u64 = 59_049;

/// Largest field whose full permutation map is returned.
pub const MAP_CAP: u64 = 2_187;

fn respond(r: Result<Value>) -> String {
    match r {
        Ok(mut v) => {
            v["ok"] = json!(true);
            v.to_string()
        }
        Err(err) => json!({ "ok": false, "error": err.to_string() }).to_string(),
    }
}

fn classify_json(p: u64, k: u32, e: u32, a: u64) -> Result<Value> {
    let params = classify_case(p, k, e, a)?;
    let gcd = a.gcd(&(p * e as u64));
    let mut out = json!({ "case": params, "kernel_gcd": gcd });
    match cn_closed_form(&params) {
        Ok(r) => {
            out["n"] = json!(r.n.to_string());
            out["closed_form"] = json!(r.value);
            out["claimed"] = json!(r.claimed.map(|c| c.to_string()));
            if let Ok(b) = cn_borrow_set(&params) {
                out["borrow_set"] = json!(b.value);
            }
            let size = params.q.checked_pow(e);
            if size.is_some_and(|s| s <= BROWSER_CAP) {
                let field = make_field_with_cap(p, k, e, BROWSER_CAP)?;
                out["brute"] =
                    json!(cn_bruteforce_capped(&field, a as i64, &r.n, BROWSER_CAP)?.value);
            }
        }
        Err(Error::NoClosedForm(why)) => out["note"] = json!(why),
        Err(err) => return Err(err),
    }
    Ok(out)
}

fn permutation_json(p: u64, k: u32, e: u32, a: i64) -> Result<Value> {
    let field = make_field_with_cap(p, k, e, MAP_CAP)?;
    let verdict = is_pp(&field, a, MAP_CAP)?;
    let eval = permpoly::ppcheck::Evaluator::new(&field, a)?;
    let images = eval.images();
    Ok(json!({ "verdict": verdict, "images": images }))
}

/// Parses `"0:9, 1:4"` into `{0: 9, 1: 4}`; repeated keys add up.
pub fn parse_exponents(text: &str) -> Result<BTreeMap<u64, u64>> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || Error::Precondition(format!("expected index:exponent, got {item:?}"));
        let (i, m) = item.split_once(':').ok_or_else(bad)?;
        let i: u64 = i.trim().parse().map_err(|_| bad())?;
        let m: u64 = m.trim().parse().map_err(|_| bad())?;
        *out.entry(i).or_insert(0) += m;
    }
    Ok(out)
}

fn window_json(width: u64, factors: &str, target: &str, p: u64) -> Result<Value> {
    let prod = WindowProduct::new(width, parse_exponents(factors)?)?;
    let target = MonomialTarget::new(parse_exponents(target)?);
    if prod.degree() > 400 {
        return Err(Error::Precondition(
            "keep the total degree at most 400".into(),
        ));
    }
    let exact = extract_coefficient_exact(&prod, &target);
    let residue = extract_coefficient(&prod, &target, p)?;
    Ok(json!({ "exact": exact.to_string(), "residue": residue, "p": p }))
}

/// Band, subcase, exponent `N` and `C(N)` by each route that fits in the
/// browser.
#[wasm_bindgen]
pub fn classify(p: u32, k: u32, e: u32, a: u32) -> String {
    respond(classify_json(p as u64, k, e, a as u64))
}

/// The image of every element under `f_{a,q}` on a small field, with the
/// permutation verdict.
#[wasm_bindgen]
pub fn permutation_map(p: u32, k: u32, e: u32, a: i32) -> String {
    respond(permutation_json(p as u64, k, e, a as i64))
}

/// The coefficient of a monomial in a product of window forms, exactly and
/// mod `p`.
#[wasm_bindgen]
pub fn window_coefficient(width: u32, factors: &str, target: &str, p: u32) -> String {
    respond(window_json(width as u64, factors, target, p as u64))
}
