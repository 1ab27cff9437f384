//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function takes plain strings from form fields and returns a
//! JSON document; errors come back as a thrown string. The `*_json` functions
//! hold the logic and are ordinary Rust so they can be tested on the host.

use std::fmt::Write as _;

use serde_json::json;
use wasm_bindgen::prelude::*;

use gl2ext::exactalg::Rat;
use gl2ext::lattices::{self, LatticeSite, PadicPoint, PlaceBox};
use gl2ext::padicval::{self, RootSpec, Variant};
use gl2ext::weights::{adjacent, is_prime, rectangle, GraphPoint};

fn ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| format!("not an integer: {t:?}")))
        .collect()
}

/// The rectangle between the origin and `omega`, with its adjacency graph as DOT.
pub fn rectangle_json(omega: &str) -> Result<String, String> {
    let omega = GraphPoint(ints(omega)?);
    if omega.0.is_empty() || omega.len() > 6 {
        return Err("give between 1 and 6 coordinates".into());
    }
    if omega.0.iter().any(|x| x.abs() > 8) {
        return Err("keep coordinates within ±8".into());
    }
    let pts = rectangle(&GraphPoint::zero(omega.len()), &omega);
    let mut dot = String::from("graph rectangle {\n");
    for p in &pts {
        let _ = writeln!(dot, "  \"{p}\";");
    }
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            if adjacent(a, b) {
                let _ = writeln!(dot, "  \"{a}\" -- \"{b}\";");
            }
        }
    }
    dot.push_str("}\n");
    let labels: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
    Ok(json!({ "points": labels, "dot": dot }).to_string())
}

/// Checks a root specification and returns its valuation certificate.
pub fn certificate_json(p: u64, roots: &str, xfactor: bool) -> Result<String, String> {
    if p <= 3 || !is_prime(p) {
        return Err(format!("{p} is not a prime greater than 3"));
    }
    let roots = RootSpec::parse_roots(roots).map_err(|e| e.to_string())?;
    if roots.is_empty() || roots.len() > 12 {
        return Err("give between 1 and 12 roots".into());
    }
    let variant = if xfactor { Variant::XFactor } else { Variant::Monic };
    let spec = RootSpec::new(p, roots, variant);
    let report = padicval::check_spec(&spec).map_err(|e| e.to_string())?;
    let cert = padicval::extract_certificate(&spec).map_err(|e| e.to_string())?;
    Ok(json!({
        "vp_det": report.vp_det,
        "expected_vp_det": report.expected_vp_det,
        "valuation": cert.valuation,
        "bound": cert.bound,
        "verified": cert.verify().is_ok(),
        "within_bound": cert.within_bound(),
        "x0": cert.x0.to_string(),
    })
    .to_string())
}

/// The profile of a box of lattices at a uniform point `t`.
pub fn profile_json(lo: &str, hi: &str, s_tilde: &str, origin: &str, t: &str) -> Result<String, String> {
    let lo = ints(lo)?;
    let hi = ints(hi)?;
    if lo.len() > 4 {
        return Err("at most 4 coordinates".into());
    }
    let s = if s_tilde.trim().is_empty() { vec![0; lo.len()] } else { ints(s_tilde)? };
    let origin = if origin.trim().is_empty() { GraphPoint::zero(lo.len()) } else { GraphPoint(ints(origin)?) };
    let place = PlaceBox::new(lo, hi, origin, s).map_err(|e| e.to_string())?;
    if place.points().len() > 4096 {
        return Err("box too large for the demo".into());
    }
    let site = LatticeSite::single(place);
    let t: Rat = t.trim().parse().map_err(|_| format!("not a rational number: {t:?}"))?;
    let point = PadicPoint::uniform(&site, t);
    let prof = lattices::lattice_profile(&site, &point).map_err(|e| e.to_string())?;
    let values: Vec<String> = prof.distinct_values().iter().map(|v| v.to_string()).collect();
    let entries: Vec<_> = prof
        .entries
        .iter()
        .map(|e| json!({ "kappa": e.point.to_string(), "varpi": e.varpi.to_string(), "value": e.value.to_string() }))
        .collect();
    Ok(json!({ "values": values, "entries": entries, "dot": prof.to_dot(&site) }).to_string())
}

#[wasm_bindgen]
pub fn rectangle_graph(omega: &str) -> Result<String, JsValue> {
    rectangle_json(omega).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn padic_certificate(p: u32, roots: &str, xfactor: bool) -> Result<String, JsValue> {
    certificate_json(p.into(), roots, xfactor).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn lattice_profile(lo: &str, hi: &str, s_tilde: &str, origin: &str, t: &str) -> Result<String, JsValue> {
    profile_json(lo, hi, s_tilde, origin, t).map_err(|e| JsValue::from_str(&e))
}
