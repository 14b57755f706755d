//! Browser bindings: a small JSON API over the core crate for the static
//! demo page in `www/`.
//!
//! Three operations are exposed: the ordering atlas for a modulus, the
//! per-residue bias profile for one (k, t), and the exact-to-estimate
//! ratio curve. Results are JSON strings; errors come back as
//! `{"error": "..."}` so the page can render them inline.

use wasm_bindgen::prelude::*;

use kindiv_core::asymptotics::{d_hat, q_ratio};
use kindiv_core::bias::{euler_phi, order_count_at, ordering_at, psi_kt, rbar, BiasKey};
use kindiv_core::exact::{build_pkx_table, d_exact, ExactQuery};
use kindiv_core::interval::PRECISION_CAP;

const DEMO_PRECISION: u32 = 128;
const CURVE_N_CAP: u32 = 20_000;
const ATLAS_T_CAP: u32 = 60;

fn err_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

/// Ordering atlas for a modulus: every distinct most-common-first residue
/// ordering over the scanned k range, with witnesses.
#[wasm_bindgen]
pub fn orderings_table(t: u32) -> String {
    if !(2..=ATLAS_T_CAP).contains(&t) {
        return err_json(format!("t must be between 2 and {ATLAS_T_CAP}"));
    }
    match order_count_at(t, None, DEMO_PRECISION, PRECISION_CAP) {
        Ok(atlas) => {
            let natural: Vec<u32> = (1..=t).collect();
            let mut rows: Vec<_> = atlas.entries.iter().collect();
            rows.sort_by_key(|(seq, ks)| {
                (
                    ks.is_empty(),
                    ks.first().copied().unwrap_or(u32::MAX),
                    (*seq).clone(),
                )
            });
            let rows: Vec<_> = rows
                .into_iter()
                .map(|(seq, ks)| {
                    serde_json::json!({
                        "sequence": seq,
                        "witnesses": ks,
                        "natural": *seq == natural,
                    })
                })
                .collect();
            serde_json::json!({
                "t": t,
                "count": atlas.count,
                "phi": euler_phi(t),
                "k_max_searched": atlas.k_max_searched,
                "min_gap": atlas.min_gap.map(|g| g.to_f64()),
                "rows": rows,
            })
            .to_string()
        }
        Err(e) => err_json(e),
    }
}

/// Bias values for every residue class of one (k, t), plus the certified
/// ordering they induce.
#[wasm_bindgen]
pub fn bias_profile(k: u32, t: u32) -> String {
    let key = match BiasKey::new(k, t) {
        Ok(key) => key,
        Err(e) => return err_json(e),
    };
    if t > 200 {
        return err_json("t must be at most 200");
    }
    let ord = match ordering_at(&key, DEMO_PRECISION, PRECISION_CAP) {
        Ok(o) => o,
        Err(e) => return err_json(e),
    };
    let mut values = Vec::new();
    for r in 1..=t {
        match (psi_kt(&key, r, DEMO_PRECISION), rbar(k, t, r)) {
            (Ok(v), Ok(rb)) => values.push(serde_json::json!({
                "r": r,
                "rbar": rb,
                "bias": v.to_f64_mid(),
                "width": v.width().to_f64(),
            })),
            (Err(e), _) | (_, Err(e)) => return err_json(e),
        }
    }
    serde_json::json!({
        "k": k,
        "t": t,
        "certified": ord.certified,
        "sequence": ord.sequence,
        "values": values,
    })
    .to_string()
}

/// Exact counts against the estimator on a geometric grid of n up to
/// `n_max`, for plotting the convergence of the ratio toward 1.
#[wasm_bindgen]
pub fn ratio_curve(k: u32, t: u32, r: u32, n_max: u32) -> String {
    let key = match BiasKey::new(k, t) {
        Ok(key) => key,
        Err(e) => return err_json(e),
    };
    if r < 1 || r > t {
        return err_json("r must satisfy 1 <= r <= t");
    }
    if !(10..=CURVE_N_CAP).contains(&n_max) {
        return err_json(format!("n_max must be between 10 and {CURVE_N_CAP}"));
    }
    let table = match build_pkx_table(k, n_max as usize) {
        Ok(t) => t,
        Err(e) => return err_json(e),
    };
    // Geometric grid from 10 to n_max, about two dozen points.
    let steps = 24usize;
    let mut ns: Vec<usize> = (0..steps)
        .map(|i| {
            let frac = i as f64 / (steps - 1) as f64;
            (10.0 * (n_max as f64 / 10.0).powf(frac)).round() as usize
        })
        .collect();
    ns.dedup();
    let mut points = Vec::new();
    for n in ns {
        let query = match ExactQuery::new(k, t, r, n) {
            Ok(q) => q,
            Err(e) => return err_json(e),
        };
        let exact = match d_exact(&query, &table) {
            Ok(v) => v,
            Err(e) => return err_json(e),
        };
        let est = match d_hat(&key, r, n, DEMO_PRECISION) {
            Ok(v) => v,
            Err(e) => return err_json(e),
        };
        let q = match q_ratio(&key, r, n, &table, DEMO_PRECISION) {
            Ok(v) => v,
            Err(e) => return err_json(e),
        };
        points.push(serde_json::json!({
            "n": n,
            "exact": exact.to_string(),
            "estimate": est.value.to_f64_mid(),
            "q": q.to_f64_mid(),
        }));
    }
    serde_json::json!({ "k": k, "t": t, "r": r, "points": points }).to_string()
}
