//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes matrix text in the `r;r;r` row format and returns a
//! string, so the page needs no generated glue beyond wasm-bindgen's.

use frob_core::census::{census_visit, CensusReport, DEFAULT_CENSUS_CAP};
use frob_core::frobenius::{decide_thm2, decide_thm3};
use frob_core::parallel::Workers;
use frob_core::sail::{analyze_sail, svg};
use frob_core::solver::SolverConfig;
use frob_core::IntMatrix;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest norm the page will enumerate; larger censuses belong in the CLI.
pub const MAX_DEMO_NORM: u32 = 6;

fn parse(text: &str) -> Result<IntMatrix, String> {
    text.parse::<IntMatrix>().map_err(|e| e.to_string())
}

pub fn verdict_json(matrix: &str) -> Result<String, String> {
    let m = parse(matrix)?;
    let config = SolverConfig::default();
    let verdict = match m.dim() {
        2 => decide_thm2(&m, &config),
        _ => decide_thm3(&m, &config),
    }
    .map_err(|e| e.to_string())?;
    let doc = json!({ "matrix": m.to_string(), "verdict": verdict });
    serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())
}

pub fn sail_picture(matrix: &str, radius: u32) -> Result<String, String> {
    let m = parse(matrix)?;
    let start = (radius > 0).then_some(i64::from(radius));
    let analysis = analyze_sail(&m, start).map_err(|e| e.to_string())?;
    Ok(svg::render(&analysis))
}

pub fn census_csv(dim: usize, norm: u32) -> Result<String, String> {
    if norm > MAX_DEMO_NORM {
        return Err(format!("the demo stops at norm {MAX_DEMO_NORM}"));
    }
    let workers = Workers::new(1).map_err(|e| e.to_string())?;
    let mut out = format!("{}\n", CensusReport::csv_header());
    for n in 0..=norm {
        let r = census_visit(dim, n, DEFAULT_CENSUS_CAP, &workers, |_, _| {}).map_err(|e| e.to_string())?;
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn verdict(matrix: &str) -> Result<String, JsError> {
    verdict_json(matrix).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sail_svg(matrix: &str, radius: u32) -> Result<String, JsError> {
    sail_picture(matrix, radius).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn census(dim: usize, norm: u32) -> Result<String, JsError> {
    census_csv(dim, norm).map_err(|e| JsError::new(&e))
}
