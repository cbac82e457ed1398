//! Browser bindings. Every export returns a JSON string; errors come back as
//! `{"error": "..."}` so the page can show them inline.

use kashaev_core::asymptotics::{conjecture_report, fit_samples, volume_sequence, ClosedForm};
use kashaev_core::hypergeo::{
    figure_eight_gluing_system, newton_solve, volume, NewtonOptions, ShapeAssignment,
};
use kashaev_core::tangle::{state_sum, InvariantRecord, TangleDiagram};
use kashaev_core::{Complex64, QContext, Result};
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn respond<T: Serialize>(r: Result<T>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).expect("output serializes"),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Volume points `2π log|⟨K⟩_N| / N` over a range and the growth fit.
#[wasm_bindgen]
pub fn volume_curve(knot: &str, n_min: usize, n_max: usize, step: usize) -> String {
    respond((|| {
        let form = match knot {
            "trefoil" => ClosedForm::Trefoil,
            _ => ClosedForm::FigureEight,
        };
        let samples = volume_sequence(form, n_min, n_max, step)?;
        let report = fit_samples(&samples, true)
            .ok()
            .map(|f| conjecture_report(&f, form.geometric_volume()));
        Ok(json!({ "samples": samples, "report": report }))
    })())
}

/// Newton iterates on the figure-eight gluing equations from `(b, d)`.
#[wasm_bindgen]
pub fn gluing_trajectory(b_re: f64, b_im: f64, d_re: f64, d_im: f64) -> String {
    respond((|| {
        let init = ShapeAssignment::new(&[Complex64::new(b_re, b_im), Complex64::new(d_re, d_im)]);
        let sol = newton_solve(&figure_eight_gluing_system(), &init, &NewtonOptions::default())?;
        let vol = volume(&sol.shapes)?;
        Ok(json!({
            "path": sol.path,
            "history": sol.history,
            "iterations": sol.iterations,
            "volume": vol,
        }))
    })())
}

/// State-sum invariant of a built-in diagram.
#[wasm_bindgen]
pub fn invariant(builtin: &str, n: usize) -> String {
    respond((|| {
        let d = TangleDiagram::builtin(builtin)?;
        Ok(InvariantRecord::new(n, state_sum(&QContext::new(n)?, &d)?))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn exports_return_json() {
        let v: Value = serde_json::from_str(&invariant("figure-eight", 4)).unwrap();
        assert!((v["modulus"].as_f64().unwrap() - 27.0).abs() < 1e-9);
        let v: Value = serde_json::from_str(&invariant("nope", 4)).unwrap();
        assert!(v["error"].is_string());
        let v: Value = serde_json::from_str(&gluing_trajectory(0.0, 1.0, 0.0, 1.0)).unwrap();
        assert!((v["volume"].as_f64().unwrap() - 2.029883212819).abs() < 1e-9);
        assert!(v["path"].as_array().unwrap().len() >= 2);
        let v: Value = serde_json::from_str(&volume_curve("figure-eight", 10, 200, 10)).unwrap();
        assert_eq!(v["samples"].as_array().unwrap().len(), 20);
        assert!(v["report"]["gap"].as_f64().unwrap() < 0.1);
    }
}
