//! Text artifacts: CSV, JSON and SVG.
//!
//! Every emitter iterates in the canonical order of its input, so equal
//! inputs give byte-identical output.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::itinerary::{prefix_products, Itinerary};
use crate::mahavier::{BranchSet, PointCloud, ProjectedSegment};
use crate::orbits::OrbitWindow;

/// Float columns are informational; exact values sit in the `p/q` columns.
fn float(q: &Rational) -> String {
    format!("{:.12}", q.to_f64())
}

/// `k,l,class,value_num,value_den,value_float`, one row per orbit element.
pub fn orbit_csv(window: &OrbitWindow) -> String {
    let mut out = String::from("k,l,class,value_num,value_den,value_float\n");
    for e in &window.entries {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            e.exponents.k,
            e.exponents.l,
            e.klass,
            e.value.numer(),
            e.value.denom(),
            float(&e.value)
        );
    }
    out
}

/// Exact columns `x1..xd`, then float columns `f1..fd`.
pub fn point_cloud_csv(cloud: &PointCloud) -> String {
    let dim = cloud.dim().unwrap_or(0);
    let mut header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    header.extend((1..=dim).map(|i| format!("f{i}")));
    let mut out = header.join(",");
    out.push('\n');
    for p in &cloud.points {
        let mut row: Vec<String> = p.coords().iter().map(Rational::to_string).collect();
        row.extend(p.coords().iter().map(float));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `{pair, depth, branches: [{word, param_max, endpoint}]}`.
pub fn branch_set_json(bs: &BranchSet) -> serde_json::Value {
    let branches: Vec<_> = bs
        .branches
        .iter()
        .map(|b| {
            json!({
                "word": b.word.to_string(),
                "param_max": b.param_max,
                "endpoint": b.endpoint(),
            })
        })
        .collect();
    json!({
        "pair": { "r": bs.pair.r, "rho": bs.pair.rho },
        "depth": bs.depth,
        "branches": branches,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| Error::Precondition(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// `x0,y0,x1,y1,words` with the start always at the origin.
pub fn projection_csv(segments: &[ProjectedSegment]) -> String {
    let mut out = String::from("x0,y0,x1,y1,words\n");
    for s in segments {
        let words: Vec<String> = s.words.iter().map(|w| w.to_string()).collect();
        let _ = writeln!(out, "0,0,{},{},{}", s.end.0, s.end.1, words.join(" "));
    }
    out
}

/// Unit-square SVG with the origin at the bottom left, one polyline per
/// segment and its words as a hover title.
pub fn projection_svg(segments: &[ProjectedSegment], i: usize, j: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1" width="512" height="512">"#
    );
    let _ = writeln!(
        out,
        "  <title>projection onto coordinates {i} and {j}</title>"
    );
    let _ = writeln!(
        out,
        r##"  <rect x="0" y="0" width="1" height="1" fill="none" stroke="#bbb" stroke-width="0.002"/>"##
    );
    let _ = writeln!(
        out,
        r#"  <g fill="none" stroke="black" stroke-width="0.003" stroke-linecap="round">"#
    );
    for s in segments {
        let words: Vec<String> = s.words.iter().map(|w| w.to_string()).collect();
        let x = s.end.0.to_f64();
        let y = 1.0 - s.end.1.to_f64();
        let _ = writeln!(
            out,
            r#"    <polyline points="0.000000,1.000000 {x:.6},{y:.6}"><title>{}</title></polyline>"#,
            words.join(" ")
        );
    }
    out.push_str("  </g>\n</svg>\n");
    out
}

/// `n,symbol,value,value_float` for the orbit `x·P_n` of an itinerary.
pub fn prefix_table_csv(x: &Rational, it: &Itinerary) -> String {
    let mut out = String::from("n,symbol,value,value_float\n");
    let products = prefix_products(it);
    for (n, p) in products.as_slice().iter().enumerate() {
        let v = x * p;
        let sym = if n == 0 {
            "-".to_string()
        } else {
            it.word.symbols()[n - 1].as_char().to_string()
        };
        let _ = writeln!(out, "{n},{sym},{v},{}", float(&v));
    }
    out
}
