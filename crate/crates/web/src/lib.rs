//! Browser bindings for three interactive checks: the w-function of a
//! Fermat point, a seeded tetrahedron-equation run, and the planar-model
//! identities of one trihedron.
//!
//! Every binding returns a JSON string; the plain-Rust versions are also
//! exported so they can be tested natively.

use std::f64::consts::PI;

use serde_json::json;
use tpsi_core::fermat::{phi_tilde, CyclicSpin, FermatPoint};
use tpsi_core::geometry::Trihedron;
use tpsi_core::planar::{decompose_check, self_duality_check, PhaseChoice};
use tpsi_core::suite::{self, Suite, SuiteConfig};
use tpsi_core::verify::SweepMode;
use tpsi_core::Complex64;
use wasm_bindgen::prelude::*;

/// Largest modulus the page offers.
pub const MAX_N: u32 = 7;

fn check_n(n: u32) -> Result<(), String> {
    if (2..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(format!("N must lie in 2..={MAX_N}"))
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// The point with `z = 1`, `x = r e^{-2π t / N}` for `t ∈ (0, 1)`, and the
/// root `y` of `1 - x^N` inside the branch region. Reports `w(p|a)` for all
/// `a` and the residuals of the product and inversion identities.
pub fn w_function(n: u32, t: f64, r: f64) -> Result<String, String> {
    check_n(n)?;
    if !(t > 0.0 && t < 1.0 && r > 0.0 && r.is_finite()) {
        return Err("need 0 < t < 1 and r > 0".into());
    }
    let nf = n as f64;
    let x = Complex64::from_polar(r, -2.0 * PI * t / nf);
    let one = Complex64::new(1.0, 0.0);
    let base = (one - x.powi(n as i32)).ln() / nf;
    let p = (0..n)
        .map(|k| FermatPoint {
            x,
            y: (base + Complex64::new(0.0, 2.0 * PI * k as f64 / nf)).exp(),
            z: one,
            n,
        })
        .find(|p| p.in_region() == Ok(true))
        .ok_or("no root y lies in the branch region for this x")?;
    let table = p.w_table().map_err(|e| e.to_string())?;
    let image = p.apply_o().w_table().map_err(|e| e.to_string())?;
    let product: Complex64 = table.values().iter().product();
    let inversion = (0..n as i64)
        .map(|a| (table.get(a) * image.get(-a) * phi_tilde(CyclicSpin::new(a, n), n) - 1.0).norm())
        .fold(0.0, f64::max);
    Ok(json!({
        "n": n,
        "x": pair(p.x),
        "y": pair(p.y),
        "w": table.values().iter().map(|z| pair(*z)).collect::<Vec<_>>(),
        "product_residual": (product - 1.0).norm(),
        "inversion_residual": inversion,
    })
    .to_string())
}

/// Runs one tetrahedron-equation suite (`vertex-te`, `irc-te`, `psi` or
/// `psibar`) on the tetrahedron sampled from `seed`.
pub fn tetrahedron_check(suite_name: &str, n: u32, seed: u64, samples: usize) -> Result<String, String> {
    check_n(n)?;
    let suite: Suite = suite_name.parse()?;
    if !matches!(suite, Suite::VertexTe | Suite::IrcTe | Suite::Psi | Suite::Psibar) {
        return Err(format!("{suite} is not offered here"));
    }
    let mut cfg = SuiteConfig::new(suite, n, seed);
    cfg.samples = samples.clamp(1, 20_000);
    let report = suite::run(&cfg).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Self-duality and ψ-decomposition residuals for the planar-limit
/// trihedron with face angles `a1`, `a3` (degrees).
pub fn planar_check(n: u32, a1_deg: f64, a3_deg: f64) -> Result<String, String> {
    check_n(n)?;
    let tri = Trihedron::planar_limit(a1_deg.to_radians(), a3_deg.to_radians()).map_err(|e| e.to_string())?;
    let mode = if n <= 3 {
        SweepMode::Full
    } else {
        SweepMode::Sampled { samples: 4000, seed: 0 }
    };
    let dual = self_duality_check(&tri, n).map_err(|e| e.to_string())?;
    let second = decompose_check(&tri, n, PhaseChoice::Second, mode).map_err(|e| e.to_string())?;
    let first = decompose_check(&tri, n, PhaseChoice::First, mode).map_err(|e| e.to_string())?;
    Ok(json!({
        "n": n,
        "trihedron": tri,
        "self_duality": dual,
        "decompose": second,
        "decompose_first_phase": first,
    })
    .to_string())
}

#[wasm_bindgen(js_name = wFunction)]
pub fn w_function_js(n: u32, t: f64, r: f64) -> Result<String, JsValue> {
    w_function(n, t, r).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = tetrahedronCheck)]
pub fn tetrahedron_check_js(suite: &str, n: u32, seed: u32, samples: u32) -> Result<String, JsValue> {
    tetrahedron_check(suite, n, seed as u64, samples as usize).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = planarCheck)]
pub fn planar_check_js(n: u32, a1_deg: f64, a3_deg: f64) -> Result<String, JsValue> {
    planar_check(n, a1_deg, a3_deg).map_err(|e| JsValue::from_str(&e))
}
