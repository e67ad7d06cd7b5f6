//! Browser bindings. Every export takes plain strings and numbers and
//! returns a JSON string, so the page needs no generated type glue.

use coopkit::belief_space::{BeliefSpace, Event, Player};
use coopkit::cooperation::{self, check_pair, Mode};
use coopkit::demo::threshold_of;
use coopkit::fixtures;
use coopkit::rational::{self, format, q, to_f64, Extended, Rational};
use coopkit::stage_game::{CooperationGame, ThresholdProfile};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest grid the page may request; the neighborhood grid has `(n-1)^2` states.
pub const MAX_GRID: i64 = 80;

fn game(spec: &str) -> Result<CooperationGame, String> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        CooperationGame::from_json_str(spec).map_err(|e| e.to_string())
    } else {
        fixtures::game_by_name(spec).map_err(|e| e.to_string())
    }
}

fn space(spec: &str) -> Result<BeliefSpace, String> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        BeliefSpace::from_json_str(spec).map_err(|e| e.to_string())
    } else {
        fixtures::space_by_name(spec).ok_or_else(|| format!("unknown space `{spec}`"))
    }
}

fn num(x: &Extended) -> Value {
    match x {
        Extended::Finite(r) => json!(to_f64(r)),
        Extended::PosInf => json!("inf"),
        Extended::NegInf => json!("-inf"),
    }
}

/// `f_i`, `g_i` and `min(g_i, 1)` sampled at `k/samples` for `0 < k < samples`.
pub fn threshold_curves_value(game_spec: &str, samples: u32) -> Result<Value, String> {
    let g = game(game_spec)?;
    let samples = samples.clamp(4, 2000) as i64;
    let mut players = Vec::new();
    for p in Player::BOTH {
        let l0 = g.cooperation_threshold(p).map_err(|e| e.to_string())?;
        let mut points = Vec::new();
        for k in 1..samples {
            let l = q(k, samples);
            let gv = g.g_value(p, &l);
            points.push(json!({
                "lambda": to_f64(&l),
                "f": num(&g.f_value(p, &l).value),
                "g": num(&gv.value),
                "g1": num(&gv.g1),
                "g2": num(&gv.g2),
                "g3": num(&gv.g3),
            }));
        }
        players.push(json!({
            "player": p.number(),
            "lambda0": format(&l0),
            "lambda0_f64": to_f64(&l0),
            "points": points,
        }));
    }
    Ok(json!({ "two_by_two": g.game().is_two_by_two(), "players": players }))
}

fn names(space: &BeliefSpace, e: &Event) -> Value {
    json!(space.event_names(e))
}

fn own_values(space: &BeliefSpace, player: Player, text: &str) -> Result<Event, String> {
    let mut e = space.empty_event();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v = rational::parse(item).map_err(|e| e.to_string())?;
        e = e.union(&space.event_from_fn(|w| *space.discount(player, w) == v));
    }
    Ok(e)
}

/// Largest pair for a space and game, plus the candidate pair built from
/// own-discount lists `c1`, `c2` (comma separated) when either is nonempty.
pub fn analyze_value(space_spec: &str, game_spec: &str, c1: &str, c2: &str) -> Result<Value, String> {
    let s = space(space_spec)?;
    let g = game(game_spec)?;
    let th = ThresholdProfile::build(&s, &g).map_err(|e| e.to_string())?;
    let largest = cooperation::largest_pair(&s, &th);
    let mut out = json!({
        "states": s.len(),
        "lambda0": Player::BOTH.map(|p| format(th.lambda0(p))),
        "lambda": Player::BOTH.map(|p| names(&s, th.lambda_region(p))),
        "largest": serde_json::to_value(&largest.report).map_err(|e| e.to_string())?,
        "rounds": largest.candidate.common.rounds,
    });
    if !c1.trim().is_empty() || !c2.trim().is_empty() {
        let c = [own_values(&s, Player::One, c1)?, own_values(&s, Player::Two, c2)?];
        let cand = cooperation::candidate_pair(&s, &th, &c[0], &c[1]).map_err(|e| e.to_string())?;
        let report = check_pair(&s, &th, &cand.pair[0], &cand.pair[1], Mode::Bayesian).map_err(|e| e.to_string())?;
        out["candidate"] = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    }
    Ok(out)
}

/// Grid `{k/n}^2` where each player believes the other's discount is
/// uniform within `halfwidth` of their own. Returns membership of each grid
/// point in `Λ_1`, `D(Λ)` and `K_1`, and the threshold of `K_1`.
pub fn neighborhood_grid_value(n: i64, halfwidth: &str, game_spec: &str) -> Result<Value, String> {
    if !(3..=MAX_GRID).contains(&n) {
        return Err(format!("grid size must lie in 3..={MAX_GRID}"));
    }
    let h: Rational = rational::parse(halfwidth).map_err(|e| e.to_string())?;
    if h <= Rational::from_integer(0.into()) || h >= Rational::from_integer(1.into()) {
        return Err("half-width must lie in (0,1)".into());
    }
    let s = fixtures::prisonerex4_grid(n, h);
    let g = game(game_spec)?;
    let th = ThresholdProfile::build(&s, &g).map_err(|e| e.to_string())?;
    let largest = cooperation::largest_pair(&s, &th);
    let m = (n - 1) as usize;
    let cell = |w: usize| {
        let mut code = 0u8;
        if th.lambda_region(Player::One).contains(w) {
            code |= 1;
        }
        if largest.candidate.common.event.contains(w) {
            code |= 2;
        }
        if largest.pair()[0].contains(w) {
            code |= 4;
        }
        code
    };
    let rows: Vec<Vec<u8>> = (0..m).map(|a| (0..m).map(|b| cell(a * m + b)).collect()).collect();
    let t = threshold_of(&s, Player::One, &largest.pair()[0]);
    Ok(json!({
        "size": m,
        "cells": rows,
        "threshold": t.as_ref().map(format),
        "threshold_f64": t.as_ref().map(to_f64),
        "verdict": largest.report.verdict,
        "rounds": largest.candidate.common.rounds,
    }))
}

fn to_js(v: Result<Value, String>) -> Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn threshold_curves(game_spec: &str, samples: u32) -> Result<String, JsValue> {
    to_js(threshold_curves_value(game_spec, samples))
}

#[wasm_bindgen]
pub fn analyze(space_spec: &str, game_spec: &str, c1: &str, c2: &str) -> Result<String, JsValue> {
    to_js(analyze_value(space_spec, game_spec, c1, c2))
}

#[wasm_bindgen]
pub fn neighborhood_grid(n: i32, halfwidth: &str, game_spec: &str) -> Result<String, JsValue> {
    to_js(neighborhood_grid_value(n as i64, halfwidth, game_spec))
}

#[wasm_bindgen]
pub fn space_names() -> String {
    json!(fixtures::SPACE_NAMES).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pd_curves() {
        let v = threshold_curves_value("pd", 4).unwrap();
        let p1 = &v["players"][0];
        assert_eq!(p1["lambda0"], "1/3");
        // λ = 1/2: f = (1 - λ) / (2λ) = 1/2.
        assert_eq!(p1["points"][1]["f"], 0.5);
        assert_eq!(v["two_by_two"], true);
    }

    #[test]
    fn g3x3_curves_have_components() {
        let v = threshold_curves_value("g3x3:a=5", 10).unwrap();
        assert_eq!(v["two_by_two"], false);
        assert!(v["players"][1]["points"][0]["g1"].is_number());
    }

    #[test]
    fn analyze_example6_with_candidate() {
        let v = analyze_value("example6", "g3x3:a=5", "3/4", "3/4").unwrap();
        assert_eq!(v["largest"]["verdict"], false);
        assert_eq!(v["candidate"]["verdict"], true);
    }

    #[test]
    fn analyze_accepts_json_documents() {
        let doc = fixtures::prisonerex3().to_json().to_string();
        let v = analyze_value(&doc, "pd", "", "").unwrap();
        assert_eq!(v["largest"]["k1"], json!(["(1/2,1/4)", "(1/2,1/2)", "(1/2,3/4)"]));
        assert!(v.get("candidate").is_none());
    }

    #[test]
    fn analyze_rejects_candidate_outside_lambda() {
        assert!(analyze_value("prisonerex1", "pd", "1/4", "").is_err());
    }

    #[test]
    fn neighborhood_grid_threshold() {
        let v = neighborhood_grid_value(40, "1/10", "pd").unwrap();
        assert_eq!(v["size"], 39);
        let t = v["threshold_f64"].as_f64().unwrap();
        assert!((t - 0.5).abs() <= 0.1 + 1.0 / 40.0, "t = {t}");
        assert!(neighborhood_grid_value(2, "1/10", "pd").is_err());
        assert!(neighborhood_grid_value(20, "3/2", "pd").is_err());
    }

    #[test]
    fn unknown_inputs() {
        assert!(analyze_value("nosuch", "pd", "", "").is_err());
        assert!(threshold_curves_value("chess", 10).is_err());
    }
}
