//! Browser bindings. Every export returns a JSON string, or an object with
//! an `error` field when the input is rejected.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use hk_core::cb::{census, check_level, to_svg};
use hk_core::character::{geometry_of, Character};
use hk_core::invariants::{chi_sum, closed_form, euler_by_stratification};
use hk_core::vanishing::{prove, Registry, VanishingProblem, DEFAULT_SUPERSET_DEPTH};

/// Largest modulus for which the character sum is computed in the page.
const CHI_SUM_LIMIT: u32 = 16;

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

#[wasm_bindgen]
pub fn invariants(n: u32) -> String {
    if !(2..=1000).contains(&n) {
        return error(format!("n must lie in 2..=1000, got {n}"));
    }
    let c = closed_form(n);
    let sum = (n <= CHI_SUM_LIMIT).then(|| chi_sum(n).ok()).flatten();
    json!({
        "n": n,
        "k2": c.k2,
        "euler": c.euler,
        "euler_stratified": euler_by_stratification(n),
        "chi_o": c.chi_o,
        "chi_theta": c.chi_theta,
        "chi_sum": sum,
        "crosscheck_ok": sum.map(|s| s == c.chi_theta),
    })
    .to_string()
}

/// Census of the configuration at level `n` with its drawing.
#[wasm_bindgen]
pub fn configuration(n: u32) -> String {
    if n > 12 {
        return error(format!("level {n} is too large to draw"));
    }
    let (c, check) = match (census(n), check_level(n)) {
        (Ok(c), Ok(k)) => (c, k),
        (Err(e), _) | (_, Err(e)) => return error(e),
    };
    let tally: Value = c.tally.iter().map(|(v, k)| (v.to_string(), json!(k))).collect::<serde_json::Map<_, _>>().into();
    let formula: Value =
        c.formula_tally().iter().map(|(v, k)| (v.to_string(), json!(k))).collect::<serde_json::Map<_, _>>().into();
    json!({
        "n": n,
        "lines": c.lines.len(),
        "points": c.points.len(),
        "tally": tally,
        "formula_tally": formula,
        "pair_identity": c.pair_identity(),
        "checks_pass": check.pass(),
        "svg": to_svg(&c),
    })
    .to_string()
}

/// Geometry of one character and the kind of certificate found for it.
#[wasm_bindgen]
pub fn character(n: u32, a1: i32, a2: i32, a3: i32, a4: i32, a5: i32) -> String {
    if !(2..=1000).contains(&n) {
        return error(format!("n must lie in 2..=1000, got {n}"));
    }
    let psi = match Character::new(n, [a1, a2, a3, a4, a5].map(i64::from)) {
        Ok(p) => p,
        Err(e) => return error(e),
    };
    let (g, prob) = match (geometry_of(&psi), VanishingProblem::from_character(&psi)) {
        (Ok(g), Ok(p)) => (g, p),
        (Err(e), _) | (_, Err(e)) => return error(e),
    };
    let cert = prove(&prob, Registry::builtin(), DEFAULT_SUPERSET_DEPTH);
    json!({
        "character": psi.to_string(),
        "a6": psi.a6(),
        "f": g.f,
        "lambda": g.lambda,
        "s": g.s,
        "eigenclass": g.eigenclass.to_string(),
        "twist": g.twist.to_string(),
        "logset": g.logset.to_string(),
        "case": g.case_id.to_string(),
        "chi": prob.chi(),
        "certificate": cert.kind().name(),
    })
    .to_string()
}
