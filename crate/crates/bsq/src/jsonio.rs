//! Text formats. Every rational travels as a canonical `"p/q"` string;
//! objects serialize with sorted keys so identical inputs produce
//! byte-identical output.

use crate::cech::{BrickWallCover, CohomologyReport, Layer, PlaneCover, SupportPoint};
use crate::geometry::{Band, Leaf};
use crate::linalg::Mat;
use crate::rational::{format_q, parse_q, Q};
use crate::spectral::BigradedPage;
use crate::toric::{DelzantPolytope, Halfspace, LatticeReport, Quantization};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("{0}")]
    Shape(String),
}

pub fn parse_value(text: &str) -> Result<Value, JsonError> {
    serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))
}

/// Canonical text: sorted keys, no whitespace.
pub fn to_text(v: &Value) -> String {
    serde_json::to_string(v).expect("serializing json value")
}

fn shape(msg: impl Into<String>) -> JsonError {
    JsonError::Shape(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, JsonError> {
    v.get(key).ok_or_else(|| shape(format!("missing key `{key}`")))
}

fn as_obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, JsonError> {
    v.as_object().ok_or_else(|| shape(format!("{what} must be an object")))
}

fn as_arr<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array().ok_or_else(|| shape(format!("{what} must be an array")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize, JsonError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| shape(format!("{what} must be a nonnegative integer")))
}

fn as_i64(v: &Value, what: &str) -> Result<i64, JsonError> {
    v.as_i64().ok_or_else(|| shape(format!("{what} must be an integer")))
}

/// Rational from a `"p/q"` string (integers may also appear as JSON numbers).
pub fn q_from_value(v: &Value, what: &str) -> Result<Q, JsonError> {
    match v {
        Value::String(s) => parse_q(s).map_err(|e| shape(format!("{what}: {e}"))),
        Value::Number(n) => n
            .as_i64()
            .map(|x| Q::from_integer(x.into()))
            .ok_or_else(|| shape(format!("{what} must be an integer or \"p/q\" string"))),
        _ => Err(shape(format!("{what} must be a \"p/q\" string"))),
    }
}

pub fn q_to_value(x: &Q) -> Value {
    Value::String(format_q(x))
}

/// Unit-circle values travel as their exact argument in turns.
pub fn phase_to_value(u: &crate::phase::UnitPhase) -> Value {
    json!({ "arg": u.arg_string() })
}

pub fn phase_from_value(v: &Value) -> Result<crate::phase::UnitPhase, JsonError> {
    let turns = q_from_value(get(v, "arg")?, "arg")?;
    Ok(crate::phase::UnitPhase::from_turns(turns))
}

fn interval_from_value(v: &Value, what: &str) -> Result<(Q, Q), JsonError> {
    let arr = as_arr(v, what)?;
    if arr.len() != 2 {
        return Err(shape(format!("{what} must be a [lo, hi] pair")));
    }
    Ok((
        q_from_value(&arr[0], what)?,
        q_from_value(&arr[1], what)?,
    ))
}

fn interval_to_value(iv: &(Q, Q)) -> Value {
    json!([format_q(&iv.0), format_q(&iv.1)])
}

// ---- bands and leaves ----

pub fn band_from_value(v: &Value) -> Result<Band, JsonError> {
    let obj = as_obj(v, "band")?;
    let m = as_usize(get(v, "m")?, "m")?;
    let k = as_usize(get(v, "k")?, "k")?;
    let mut t_intervals = Vec::new();
    if let Some(ts) = obj.get("t_intervals") {
        for (i, iv) in as_arr(ts, "t_intervals")?.iter().enumerate() {
            t_intervals.push(interval_from_value(iv, &format!("t_intervals[{i}]"))?);
        }
    }
    let mut s_radii = Vec::new();
    if let Some(ss) = obj.get("s_radii") {
        for (i, r) in as_arr(ss, "s_radii")?.iter().enumerate() {
            s_radii.push(q_from_value(r, &format!("s_radii[{i}]"))?);
        }
    }
    if t_intervals.len() != m || s_radii.len() != k {
        return Err(shape(format!(
            "band lists t_intervals x{} and s_radii x{}, but m={m}, k={k}",
            t_intervals.len(),
            s_radii.len()
        )));
    }
    Band::new(t_intervals, s_radii).map_err(|e| shape(e.to_string()))
}

pub fn band_to_value(b: &Band) -> Value {
    json!({
        "m": b.t_intervals().len(),
        "k": b.s_radii().len(),
        "t_intervals": b.t_intervals().iter().map(interval_to_value).collect::<Vec<_>>(),
        "s_radii": b.s_radii().iter().map(|r| Value::String(format_q(r))).collect::<Vec<_>>(),
    })
}

pub fn leaf_to_value(l: &Leaf) -> Value {
    json!({
        "t": l.t().iter().map(|x| Value::String(format_q(x))).collect::<Vec<_>>(),
        "s": l.s().iter().map(|x| Value::String(format_q(x))).collect::<Vec<_>>(),
        "singular": l.is_singular(),
    })
}

pub fn leaves_to_value(ls: &[Leaf]) -> Value {
    Value::Array(ls.iter().map(leaf_to_value).collect())
}

// ---- covers ----

pub fn wall_from_value(v: &Value) -> Result<BrickWallCover, JsonError> {
    let layers_v = as_arr(get(v, "layers")?, "layers")?;
    if layers_v.is_empty() {
        return Err(shape("layers must be nonempty"));
    }
    let mut specs = Vec::new();
    for (i, lv) in layers_v.iter().enumerate() {
        let what = format!("layers[{i}]");
        let interval = interval_from_value(get(lv, "interval")?, &format!("{what}.interval"))?;
        let arcs = as_usize(get(lv, "arcs")?, &format!("{what}.arcs"))?;
        let offset = match lv.get("offset") {
            Some(o) => Some(q_from_value(o, &format!("{what}.offset"))?),
            None => None,
        };
        let overlap = match lv.get("overlap") {
            Some(o) => Some(q_from_value(o, &format!("{what}.overlap"))?),
            None => None,
        };
        specs.push((interval, arcs, offset, overlap));
    }
    crate::cech::cover_from_layer_specs(&specs).map_err(|e| shape(e.to_string()))
}

pub fn wall_to_value(w: &BrickWallCover) -> Value {
    let layers: Vec<Value> = w
        .layers()
        .iter()
        .map(|l: &Layer| {
            let arcs = l.circle.arcs();
            // overlap half-width is recoverable from the first arc
            let width = &arcs[0].1 - &arcs[0].0;
            let nominal = Q::new(1.into(), (arcs.len() as i64).into());
            let overlap = (width - nominal) / Q::from_integer(2.into());
            json!({
                "interval": interval_to_value(&l.interval),
                "arcs": arcs.len(),
                "offset": format_q(&l.offset),
                "overlap": format_q(&overlap),
            })
        })
        .collect();
    json!({ "layers": layers })
}

pub fn plane_cover_from_value(v: &Value) -> Result<PlaneCover, JsonError> {
    let obj = as_obj(v, "plane cover")?;
    let arcs = as_usize(get(v, "arcs")?, "arcs")?;
    if let Some(r) = obj.get("radius") {
        let radius = q_from_value(r, "radius")?;
        return PlaneCover::build(&radius, arcs).map_err(|e| shape(e.to_string()));
    }
    let ring_lo = q_from_value(get(v, "ring_lo")?, "ring_lo")?;
    let disc_radius = q_from_value(get(v, "disc_radius")?, "disc_radius")?;
    let ring_hi = q_from_value(get(v, "ring_hi")?, "ring_hi")?;
    PlaneCover::build_explicit(&ring_lo, &disc_radius, &ring_hi, arcs)
        .map_err(|e| shape(e.to_string()))
}

pub fn plane_cover_to_value(c: &PlaneCover) -> Value {
    json!({
        "arcs": c.ring().arc_count(),
        "ring_lo": format_q(&c.ring_interval().0),
        "disc_radius": format_q(c.disc_radius()),
        "ring_hi": format_q(&c.ring_interval().1),
    })
}

// ---- cohomology reports ----

pub fn report_to_value(r: &CohomologyReport) -> Value {
    let mut h = Map::new();
    for (deg, dim) in r.dims() {
        h.insert(deg.to_string(), json!(dim));
    }
    let support: Vec<Value> = r
        .support()
        .iter()
        .map(|sp| {
            let param = if sp.param.len() == 1 {
                Value::String(format_q(&sp.param[0]))
            } else {
                Value::Array(sp.param.iter().map(|x| Value::String(format_q(x))).collect())
            };
            let mut m = Map::new();
            m.insert(r.param_key().to_string(), param);
            m.insert("dim".into(), json!(sp.dim));
            Value::Object(m)
        })
        .collect();
    json!({
        "H": Value::Object(h),
        "cover": r.cover_hash(),
        "support": support,
    })
}

pub fn report_from_value(v: &Value) -> Result<CohomologyReport, JsonError> {
    let h = as_obj(get(v, "H")?, "H")?;
    let mut dims = BTreeMap::new();
    for (k, dv) in h {
        let deg: usize = k
            .parse()
            .map_err(|_| shape(format!("H key `{k}` is not a degree")))?;
        dims.insert(deg, as_usize(dv, "H value")?);
    }
    let cover = get(v, "cover")?
        .as_str()
        .ok_or_else(|| shape("cover must be a string"))?
        .to_string();
    let mut support = Vec::new();
    let mut param_key = "t".to_string();
    for sv in as_arr(get(v, "support")?, "support")? {
        let obj = as_obj(sv, "support entry")?;
        let dim = as_usize(get(sv, "dim")?, "support dim")?;
        let (key, pv) = obj
            .iter()
            .find(|(k, _)| k.as_str() != "dim")
            .ok_or_else(|| shape("support entry missing parameter"))?;
        param_key = key.clone();
        let param = match pv {
            Value::Array(xs) => xs
                .iter()
                .map(|x| q_from_value(x, "support param"))
                .collect::<Result<Vec<_>, _>>()?,
            other => vec![q_from_value(other, "support param")?],
        };
        support.push(SupportPoint { param, dim });
    }
    Ok(CohomologyReport::new(dims, support, cover, param_key))
}

// ---- spectral pages ----

pub fn page_to_value(p: &BigradedPage) -> Value {
    let entries: Vec<Value> = p
        .entries()
        .iter()
        .map(|(&(pp, qq), e)| {
            let mut m = Map::new();
            m.insert("p".into(), json!(pp));
            m.insert("q".into(), json!(qq));
            m.insert("dim".into(), json!(e.dim));
            if let Some(basis) = &e.basis {
                m.insert("basis".into(), json!(basis));
            }
            Value::Object(m)
        })
        .collect();
    let diffs: Vec<Value> = p
        .diffs()
        .iter()
        .map(|(&(pp, qq), m)| {
            let rows: Vec<Value> = (0..m.rows())
                .map(|r| {
                    Value::Array(
                        (0..m.cols())
                            .map(|c| Value::String(format_q(m.at(r, c))))
                            .collect(),
                    )
                })
                .collect();
            json!({ "p": pp, "q": qq, "rows": m.rows(), "cols": m.cols(), "matrix": rows })
        })
        .collect();
    json!({ "r": p.r(), "entries": entries, "diffs": diffs })
}

pub fn page_from_value(v: &Value) -> Result<BigradedPage, JsonError> {
    let r = as_usize(get(v, "r")?, "r")? as u32;
    let mut page = BigradedPage::new(r).map_err(|e| shape(e.to_string()))?;
    for ev in as_arr(get(v, "entries")?, "entries")? {
        let p = as_i64(get(ev, "p")?, "entry p")?;
        let qq = as_i64(get(ev, "q")?, "entry q")?;
        match ev.get("basis") {
            Some(bv) => {
                let basis: Vec<String> = as_arr(bv, "basis")?
                    .iter()
                    .map(|x| {
                        x.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| shape("basis labels must be strings"))
                    })
                    .collect::<Result<_, _>>()?;
                page.set_entry_with_basis(p, qq, basis);
            }
            None => {
                let dim = as_usize(get(ev, "dim")?, "entry dim")?;
                page.set_entry(p, qq, dim);
            }
        }
    }
    if let Some(dv) = v.get("diffs") {
        for mv in as_arr(dv, "diffs")? {
            let p = as_i64(get(mv, "p")?, "diff p")?;
            let qq = as_i64(get(mv, "q")?, "diff q")?;
            let rows_n = as_usize(get(mv, "rows")?, "diff rows")?;
            let cols_n = as_usize(get(mv, "cols")?, "diff cols")?;
            let mrows = as_arr(get(mv, "matrix")?, "diff matrix")?;
            if mrows.len() != rows_n {
                return Err(shape("diff matrix row count mismatch"));
            }
            let mat = if rows_n == 0 || cols_n == 0 {
                Mat::zero(rows_n, cols_n, &Q::from_integer(0.into()))
            } else {
                let mut rows = Vec::with_capacity(rows_n);
                for rv in mrows {
                    let cells = as_arr(rv, "diff matrix row")?;
                    if cells.len() != cols_n {
                        return Err(shape("diff matrix column count mismatch"));
                    }
                    rows.push(
                        cells
                            .iter()
                            .map(|c| q_from_value(c, "diff entry"))
                            .collect::<Result<Vec<_>, _>>()?,
                    );
                }
                Mat::from_rows(rows)
            };
            page.set_differential(p, qq, mat)
                .map_err(|e| shape(e.to_string()))?;
        }
    }
    Ok(page)
}

// ---- polytopes ----

pub fn polytope_from_value(v: &Value) -> Result<DelzantPolytope, JsonError> {
    let n = as_usize(get(v, "n")?, "n")?;
    let mut halfspaces = Vec::new();
    for (i, hv) in as_arr(get(v, "halfspaces")?, "halfspaces")?.iter().enumerate() {
        let what = format!("halfspaces[{i}]");
        let normal = as_arr(get(hv, "u")?, &format!("{what}.u"))?
            .iter()
            .map(|x| as_i64(x, "normal entry"))
            .collect::<Result<Vec<_>, _>>()?;
        let offset = q_from_value(get(hv, "c")?, &format!("{what}.c"))?;
        halfspaces.push(Halfspace::new(normal, offset));
    }
    DelzantPolytope::new(n, halfspaces).map_err(|e| shape(e.to_string()))
}

pub fn polytope_to_value(p: &DelzantPolytope) -> Value {
    let hs: Vec<Value> = p
        .halfspaces()
        .iter()
        .map(|h| json!({ "u": h.normal, "c": format_q(&h.offset) }))
        .collect();
    json!({ "n": p.dim(), "halfspaces": hs })
}

pub fn quantization_to_value(q: &Quantization) -> Value {
    json!({
        "real_dim": q.real_dim,
        "kahler_dim": q.kahler_dim,
        "boundary": q.discrepancy,
    })
}

pub fn lattice_report_to_value(r: &LatticeReport) -> Value {
    json!({
        "interior": r.interior_points,
        "boundary": r.boundary_points,
    })
}
