//! Tame stacky curves: coarse genus plus an ordered list of stacky points.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ktheory::LineBundleClass;
use crate::rational::{frac, Rational};

/// Largest stabilizer order accepted; multiplicity vectors have this length.
pub const MAX_ORDER: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StackyPoint {
    label: String,
    order: u32,
}

impl StackyPoint {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> u32 {
        self.order
    }
}

/// A validated tame stacky curve.
///
/// The declaration order of the points is canonical: multiplicity vectors
/// and twists elsewhere in the crate are stored in this order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StackyCurve {
    coarse_genus: BigInt,
    points: Vec<StackyPoint>,
}

impl StackyCurve {
    /// Validates and wraps a curve given as `(genus, [(label, order)])`.
    pub fn new<S: Into<String>>(
        coarse_genus: impl Into<BigInt>,
        points: impl IntoIterator<Item = (S, u32)>,
    ) -> Result<Arc<Self>> {
        let raw = RawCurve {
            genus: coarse_genus.into(),
            points: points
                .into_iter()
                .map(|(label, order)| RawPoint {
                    label: label.into(),
                    order: order.into(),
                })
                .collect(),
        };
        validate_curve(&raw)
    }

    pub fn coarse_genus(&self) -> &BigInt {
        &self.coarse_genus
    }

    pub fn points(&self) -> &[StackyPoint] {
        &self.points
    }

    pub fn orders(&self) -> impl Iterator<Item = u32> + '_ {
        self.points.iter().map(|p| p.order)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p.label == label)
    }

    pub fn to_raw(&self) -> RawCurve {
        RawCurve {
            genus: self.coarse_genus.clone(),
            points: self
                .points
                .iter()
                .map(|p| RawPoint {
                    label: p.label.clone(),
                    order: p.order.into(),
                })
                .collect(),
        }
    }
}

/// Unvalidated curve description, as read from a curve document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCurve {
    #[serde(with = "crate::io::bigint_number")]
    pub genus: BigInt,
    #[serde(default)]
    pub points: Vec<RawPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPoint {
    pub label: String,
    #[serde(with = "crate::io::bigint_number")]
    pub order: BigInt,
}

/// One broken curve invariant together with where it was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Checks every curve invariant and reports all violations at once.
pub fn validate_curve(raw: &RawCurve) -> Result<Arc<StackyCurve>> {
    let mut violations = Vec::new();
    if raw.genus.is_negative() {
        violations.push(Violation {
            location: "genus".into(),
            message: "genus must be >= 0".into(),
        });
    }
    let mut seen = HashSet::new();
    let mut points = Vec::with_capacity(raw.points.len());
    for (i, p) in raw.points.iter().enumerate() {
        let location = format!("points[{i}]");
        if p.label.is_empty() {
            violations.push(Violation {
                location: location.clone(),
                message: "label must be nonempty".into(),
            });
        }
        if !seen.insert(p.label.as_str()) {
            violations.push(Violation {
                location: location.clone(),
                message: format!("duplicate label {}", p.label),
            });
        }
        if p.order < BigInt::from(2) {
            violations.push(Violation {
                location,
                message: "order must be >= 2".into(),
            });
        } else if p.order > BigInt::from(MAX_ORDER) {
            violations.push(Violation {
                location,
                message: format!("order must be <= {MAX_ORDER}"),
            });
        } else {
            points.push(StackyPoint {
                label: p.label.clone(),
                order: p.order.to_u32().expect("order checked to fit"),
            });
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidCurve(violations));
    }
    Ok(Arc::new(StackyCurve {
        coarse_genus: raw.genus.clone(),
        points,
    }))
}

/// g + 1/2 Σ (e_p − 1)/e_p.
pub fn stacky_genus(curve: &StackyCurve) -> Rational {
    let correction: Rational = curve
        .orders()
        .map(|e| frac(i64::from(e) - 1, 2 * i64::from(e)))
        .sum();
    Rational::from_integer(curve.coarse_genus.clone()) + correction
}

/// The canonical class: coarse degree 2g − 2 and twist e_p − 1 everywhere.
pub fn canonical_class(curve: &Arc<StackyCurve>) -> LineBundleClass {
    let degree = BigInt::from(2) * &curve.coarse_genus - 2;
    let twists = curve.orders().map(|e| e - 1).collect();
    LineBundleClass::from_parts(curve.clone(), degree, twists)
}
