//! JSON document formats for curves, invariants, line classes, line sums
//! and formal point sums, plus the JSON renderings of every report.
//!
//! Integers are read and written as JSON numbers of arbitrary size;
//! rationals are written as `"p/q"` strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::bounds::{BoundsReport, FormalPointSum, StackDims};
use crate::curve::{validate_curve, RawCurve, StackyCurve};
use crate::error::{Error, Result};
use crate::ktheory::{LineBundleClass, NumericalInvariant};
use crate::rational::{render_rational, Rational};
use crate::stability::{HnType, LineSum};
use crate::walls::{SegmentWall, WallLocus, WallReport};

/// Serde adapter storing a [`BigInt`] as an exact JSON number.
pub mod bigint_number {
    use std::str::FromStr;

    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        serde_json::Number::from_str(&x.to_string())
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        BigInt::from_str(&n.to_string())
            .map_err(|_| D::Error::custom(format!("expected an integer, found {n}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
struct JsonInt(#[serde(with = "bigint_number")] BigInt);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InvariantDoc {
    #[serde(with = "bigint_number")]
    rank: BigInt,
    #[serde(with = "bigint_number")]
    coarse_degree: BigInt,
    #[serde(default)]
    multiplicities: BTreeMap<String, Vec<JsonInt>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LineDoc {
    #[serde(with = "bigint_number")]
    coarse_degree: BigInt,
    #[serde(default)]
    twists: BTreeMap<String, JsonInt>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LineSumDoc {
    summands: Vec<Value>,
}

pub fn int_value(x: &BigInt) -> Value {
    Value::Number(
        x.to_string()
            .parse()
            .expect("integers are valid JSON numbers"),
    )
}

pub fn rational_value(x: &Rational) -> Value {
    Value::String(render_rational(x))
}

fn malformed(what: &str, e: impl std::fmt::Display) -> Error {
    Error::Malformed(format!("{what}: {e}"))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| malformed("invalid JSON", e))
}

pub fn curve_from_json(text: &str) -> Result<Arc<StackyCurve>> {
    let raw: RawCurve = serde_json::from_str(text).map_err(|e| malformed("curve document", e))?;
    validate_curve(&raw)
}

/// Canonical serialization of a validated curve (declaration order kept).
pub fn curve_to_value(curve: &StackyCurve) -> Value {
    serde_json::to_value(curve.to_raw()).expect("curve serializes")
}

pub fn invariant_from_value(curve: &Arc<StackyCurve>, value: &Value) -> Result<NumericalInvariant> {
    let doc = InvariantDoc::deserialize(value).map_err(|e| malformed("invariant document", e))?;
    let mut slots: Vec<Option<Vec<BigInt>>> = vec![None; curve.points().len()];
    for (label, v) in doc.multiplicities {
        let idx = curve.index_of(&label).ok_or_else(|| {
            Error::InvalidInvariant(format!(
                "invariant references unknown point label '{label}'"
            ))
        })?;
        slots[idx] = Some(v.into_iter().map(|x| x.0).collect());
    }
    let multiplicities = slots
        .into_iter()
        .zip(curve.points())
        .map(|(m, p)| {
            m.ok_or_else(|| {
                Error::InvalidInvariant(format!(
                    "invariant is missing multiplicities for point '{}'",
                    p.label()
                ))
            })
        })
        .collect::<Result<_>>()?;
    NumericalInvariant::new(curve, doc.rank, doc.coarse_degree, multiplicities)
}

pub fn invariant_to_value(inv: &NumericalInvariant) -> Value {
    let mut mults = Map::new();
    for (p, m) in inv.curve().points().iter().zip(inv.multiplicities()) {
        mults.insert(
            p.label().to_string(),
            Value::Array(m.iter().map(int_value).collect()),
        );
    }
    json!({
        "rank": int_value(inv.rank()),
        "coarse_degree": int_value(inv.coarse_degree()),
        "multiplicities": mults,
    })
}

pub fn line_from_value(curve: &Arc<StackyCurve>, value: &Value) -> Result<LineBundleClass> {
    let doc = LineDoc::deserialize(value).map_err(|e| malformed("line bundle document", e))?;
    let mut twists = vec![0u32; curve.points().len()];
    for (label, a) in doc.twists {
        let idx = curve.index_of(&label).ok_or_else(|| {
            Error::InvalidLine(format!(
                "line class references unknown point label '{label}'"
            ))
        })?;
        let order = curve.points()[idx].order();
        twists[idx] =
            a.0.to_u32()
                .filter(|&t| t < order)
                .ok_or_else(|| Error::TwistOutOfRange {
                    label: label.clone(),
                    twist: a.0.to_string(),
                    order,
                })?;
    }
    LineBundleClass::new(curve, doc.coarse_degree, twists)
}

/// Twists equal to zero are omitted, matching the input convention.
pub fn line_to_value(line: &LineBundleClass) -> Value {
    let mut twists = Map::new();
    for (p, &a) in line.curve().points().iter().zip(line.twists()) {
        if a != 0 {
            twists.insert(p.label().to_string(), json!(a));
        }
    }
    json!({
        "coarse_degree": int_value(line.coarse_degree()),
        "twists": twists,
    })
}

pub fn line_sum_from_value(curve: &Arc<StackyCurve>, value: &Value) -> Result<LineSum> {
    let doc = LineSumDoc::deserialize(value).map_err(|e| malformed("line sum document", e))?;
    let summands = doc
        .summands
        .iter()
        .map(|v| line_from_value(curve, v))
        .collect::<Result<Vec<_>>>()?;
    LineSum::new(summands)
}

pub fn line_sum_to_value(sum: &LineSum) -> Value {
    json!({ "summands": sum.summands().iter().map(line_to_value).collect::<Vec<_>>() })
}

pub fn point_sum_from_value(value: &Value) -> Result<FormalPointSum> {
    let doc: BTreeMap<String, JsonInt> =
        BTreeMap::deserialize(value).map_err(|e| malformed("point sum document", e))?;
    Ok(FormalPointSum::new(doc.into_iter().map(|(k, v)| (k, v.0))))
}

pub fn point_sum_to_value(sum: &FormalPointSum) -> Value {
    Value::Object(
        sum.coefficients()
            .iter()
            .map(|(k, v)| (k.clone(), int_value(v)))
            .collect(),
    )
}

pub fn hn_type_to_value(hn: &HnType) -> Value {
    json!({
        "semistable": hn.is_semistable(),
        "blocks": hn.blocks().iter().map(|b| json!({
            "slope": rational_value(&b.slope),
            "summands": b.summands.iter().map(line_to_value).collect::<Vec<_>>(),
            "invariant": invariant_to_value(&b.invariant),
        })).collect::<Vec<_>>(),
    })
}

pub fn wall_report_to_value(report: &WallReport) -> Value {
    json!({
        "on_wall": report.on_wall(),
        "witnesses": report.witnesses().iter().map(invariant_to_value).collect::<Vec<_>>(),
    })
}

pub fn segment_walls_to_value(walls: &[SegmentWall]) -> Value {
    Value::Array(
        walls
            .iter()
            .map(|w| {
                let t = match &w.locus {
                    WallLocus::EntireSegment => Value::String("segment".into()),
                    WallLocus::At(t) => rational_value(t),
                };
                json!({ "t": t, "report": wall_report_to_value(&w.report) })
            })
            .collect(),
    )
}

pub fn bounds_to_value(b: &BoundsReport) -> Value {
    json!({
        "kappa": rational_value(&b.kappa),
        "kappa_plus": rational_value(&b.kappa_plus),
        "basepoint_free_min_m": int_value(&b.basepoint_free_min_m),
        "finite_map_min_m": int_value(&b.finite_map_min_m),
        "stack_dim": int_value(&b.stack_dim),
    })
}

pub fn stack_dims_to_value(d: &StackDims) -> Value {
    json!({
        "bun_dim_1": int_value(&d.bun_dim_1),
        "bun_dim_2": int_value(&d.bun_dim_2),
        "ext_stack_dim": int_value(&d.ext_stack_dim),
    })
}
