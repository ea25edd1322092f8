//! JSON encodings. Rationals are lowest-terms strings "n" or "n/d".

use crate::breakhom::{BreakVector, OrbitLabel};
use crate::error::{Error, Result};
use crate::plmap::{AffineMap, GroupContext, IntervalDesc, IntervalKind, PLMap};
use crate::rational::*;
use crate::ring::SlopeGroup;
use crate::subdivide::{CodeSeq, SymbolWord};
use crate::words::{Presentation, Word};
use num_traits::Signed;
use serde_json::{json, Value};

fn perr(m: impl Into<String>) -> Error {
    Error::Parse(m.into())
}

pub fn q_to_json(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

/// Accepts "n/d" strings and JSON integers.
pub fn q_from_json(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => n.as_i64().map(qi).ok_or_else(|| perr(format!("not an integer: {n}"))),
        _ => Err(perr(format!("expected a rational, got {v}"))),
    }
}

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value> {
    v.get(k).ok_or_else(|| perr(format!("missing field {k:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(format!("{what} must be an array")))
}

fn pair(v: &Value) -> Result<(Q, Q)> {
    let a = array(v, "a point")?;
    if a.len() != 2 {
        return Err(perr("a point has two coordinates"));
    }
    Ok((q_from_json(&a[0])?, q_from_json(&a[1])?))
}

fn affine_to_json(a: &AffineMap) -> Value {
    json!({"slope": q_to_json(&a.slope), "offset": q_to_json(&a.offset)})
}

fn affine_from_json(v: &Value) -> Result<AffineMap> {
    let s = q_from_json(field(v, "slope")?)?;
    if !s.is_positive() {
        return Err(perr("slopes must be positive"));
    }
    Ok(AffineMap::new(s, q_from_json(field(v, "offset")?)?))
}

pub fn plmap_to_json(f: &PLMap) -> Value {
    let verts: Vec<Value> = f.vertices().iter().map(|(x, y)| json!([q_to_json(x), q_to_json(y)])).collect();
    json!({"vertices": verts, "left": affine_to_json(f.left()), "right": affine_to_json(f.right())})
}

/// Either the canonical form `{"vertices", "left", "right"}`, or `{"points", "left_slope",
/// "right_slope"}` with slopes defaulting to 1.
pub fn plmap_from_json(v: &Value) -> Result<PLMap> {
    if let Some(pts) = v.get("points") {
        let pts = array(pts, "points")?.iter().map(pair).collect::<Result<Vec<_>>>()?;
        if pts.is_empty() {
            return Err(perr("points must not be empty"));
        }
        if pts.windows(2).any(|w| w[0].0 >= w[1].0 || w[0].1 >= w[1].1) {
            return Err(perr("points must be strictly increasing"));
        }
        let slope = |k: &str| v.get(k).map(q_from_json).unwrap_or(Ok(one()));
        let (ls, rs) = (slope("left_slope")?, slope("right_slope")?);
        if !ls.is_positive() || !rs.is_positive() {
            return Err(perr("slopes must be positive"));
        }
        return Ok(PLMap::from_points(pts, ls, rs));
    }
    let verts = array(field(v, "vertices")?, "vertices")?.iter().map(pair).collect::<Result<Vec<_>>>()?;
    PLMap::new(verts, affine_from_json(field(v, "left")?)?, affine_from_json(field(v, "right")?)?)
}

pub fn slopes_to_json(s: &SlopeGroup) -> Value {
    Value::Array(s.generators().iter().map(q_to_json).collect())
}

pub fn slopes_from_json(v: &Value) -> Result<SlopeGroup> {
    SlopeGroup::new(array(v, "slopes")?.iter().map(q_from_json).collect::<Result<_>>()?)
}

pub fn context_to_json(ctx: &GroupContext) -> Value {
    let i = &ctx.interval;
    let kind = match i.kind {
        IntervalKind::Line => "line",
        IntervalKind::HalfLineUp => "up",
        IntervalKind::HalfLineDown => "down",
        IntervalKind::Compact => "compact",
    };
    let mut iv = json!({"kind": kind});
    if let Some(lo) = &i.lo {
        iv["lo"] = q_to_json(lo);
    }
    if let Some(hi) = &i.hi {
        iv["hi"] = q_to_json(hi);
    }
    json!({"interval": iv, "slopes": slopes_to_json(&ctx.slopes)})
}

/// `{"interval": {"kind": "line"|"up"|"down"|"compact", "lo", "hi"}, "slopes": ["2","3"]}`
pub fn context_from_json(v: &Value) -> Result<GroupContext> {
    let iv = field(v, "interval")?;
    let end = |k: &str| q_from_json(field(iv, k)?);
    let interval = match field(iv, "kind")?.as_str() {
        Some("line") => IntervalDesc::line(),
        Some("up") => IntervalDesc::up(end("lo")?),
        Some("down") => IntervalDesc::down(end("hi")?),
        Some("compact") => IntervalDesc::compact(end("lo")?, end("hi")?)?,
        _ => return Err(perr("interval kind must be line, up, down or compact")),
    };
    Ok(GroupContext::new(interval, slopes_from_json(field(v, "slopes")?)?))
}

pub fn break_vector_to_json(v: &BreakVector) -> Value {
    let terms: Vec<Value> = v
        .terms
        .iter()
        .map(|(l, e)| {
            let orbit = match l {
                OrbitLabel::Left => json!("left"),
                OrbitLabel::Right => json!("right"),
                OrbitLabel::Interior(r) => json!({"interior": r}),
            };
            json!({"orbit": orbit, "exponents": e})
        })
        .collect();
    Value::Array(terms)
}

pub fn presentation_to_json(p: &Presentation) -> Value {
    match p {
        Presentation::GpInfinite { p } => json!({"kind": "gp_infinite", "p": p}),
        Presentation::GpFinite { p } => json!({"kind": "gp_finite", "p": p}),
        Presentation::GhalfFinite { p } => json!({"kind": "ghalf_finite", "p": p}),
        Presentation::Gpp { pp, p0 } => json!({"kind": "gpp", "pp": pp, "p0": p0}),
        Presentation::FClassic => json!({"kind": "f_classic"}),
    }
}

pub fn presentation_from_json(v: &Value) -> Result<Presentation> {
    let p = || field(v, "p")?.as_u64().ok_or_else(|| perr("p must be a positive integer"));
    let pres = match field(v, "kind")?.as_str() {
        Some("gp_infinite") => Presentation::GpInfinite { p: p()? },
        Some("gp_finite") => Presentation::GpFinite { p: p()? },
        Some("ghalf_finite") => Presentation::GhalfFinite { p: p()? },
        Some("f_classic") => Presentation::FClassic,
        Some("gpp") => {
            let pp = array(field(v, "pp")?, "pp")?
                .iter()
                .map(|x| x.as_u64().ok_or_else(|| perr("pp entries must be integers")))
                .collect::<Result<Vec<_>>>()?;
            let p0 = match v.get("p0") {
                Some(x) => x.as_u64().ok_or_else(|| perr("p0 must be an integer"))?,
                None => *pp.iter().min().ok_or_else(|| perr("pp must not be empty"))?,
            };
            Presentation::Gpp { pp, p0 }
        }
        _ => return Err(perr("unknown presentation kind")),
    };
    pres.validate()?;
    Ok(pres)
}

pub fn word_to_json(w: &Word) -> Value {
    json!({"presentation": presentation_to_json(&w.pres), "word": w.tokens()})
}

pub fn word_from_json(v: &Value) -> Result<Word> {
    let pres = presentation_from_json(field(v, "presentation")?)?;
    let toks = array(field(v, "word")?, "word")?
        .iter()
        .map(|t| t.as_str().map(String::from).ok_or_else(|| perr("word entries must be strings")))
        .collect::<Result<Vec<_>>>()?;
    Word::parse(pres, &toks)
}

pub fn code_to_json(c: &CodeSeq) -> Value {
    Value::Array(c.steps.iter().map(|(n, p)| json!([n, p])).collect())
}

pub fn code_from_json(v: &Value) -> Result<CodeSeq> {
    let steps = array(v, "code")?
        .iter()
        .map(|s| {
            let a = array(s, "a code step")?;
            match (a.first().and_then(Value::as_u64), a.get(1).and_then(Value::as_u64), a.len()) {
                (Some(n), Some(p), 2) => Ok((n as usize, p)),
                _ => Err(perr("code steps are [n, p] pairs")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CodeSeq::new(steps))
}

pub fn symbols_to_json(w: &SymbolWord) -> Value {
    Value::Array(w.iter().map(|(s, e)| json!({"symbol": s.to_string(), "exp": e})).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plmap_round_trip() {
        let f = crate::plmap::basic_bounded(&q(1, 3), &q(1, 9), &qi(2));
        assert_eq!(plmap_from_json(&plmap_to_json(&f)).unwrap(), f);
        let g = plmap_from_json(&json!({"points": [["0","0"],["1/2","1/4"],["3/4","1/2"],["1","1"]]})).unwrap();
        assert_eq!(g.slopes().len(), 5);
        assert!(plmap_from_json(&json!({"points": [["0","1"],["1","0"]]})).is_err());
    }

    #[test]
    fn context_round_trip() {
        let c = GroupContext::thompson();
        assert_eq!(context_from_json(&context_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn word_round_trip() {
        let w = Word::parse(Presentation::Gpp { pp: vec![2, 3], p0: 2 }, &["f".into(), "g(1,3)^-2".into()]).unwrap();
        assert_eq!(word_from_json(&word_to_json(&w)).unwrap(), w);
    }
}
