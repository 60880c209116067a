//! Proptest strategies shared by the unit tests.

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use crate::curve::StackyCurve;
use crate::ktheory::{LineBundleClass, NumericalInvariant};

pub fn arb_curve() -> impl Strategy<Value = Arc<StackyCurve>> {
    (0i64..=3, prop::collection::vec(2u32..=5, 0..=3)).prop_map(|(g, orders)| {
        let pts: Vec<_> = orders
            .into_iter()
            .enumerate()
            .map(|(i, e)| (format!("p{i}"), e))
            .collect();
        StackyCurve::new(g, pts).unwrap()
    })
}

/// Splits `total` into `parts` nonnegative pieces using sorted cut points.
fn composition(total: i64, parts: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..=total, parts.saturating_sub(1)).prop_map(move |mut cuts| {
        cuts.sort_unstable();
        let mut out = Vec::with_capacity(parts);
        let mut prev = 0;
        for c in cuts {
            out.push(c - prev);
            prev = c;
        }
        out.push(total - prev);
        out
    })
}

fn build(
    curve: &Arc<StackyCurve>,
    rank: i64,
    degree: i64,
    mults: Vec<Vec<i64>>,
) -> NumericalInvariant {
    let m = mults
        .into_iter()
        .map(|v| v.into_iter().map(BigInt::from).collect())
        .collect();
    NumericalInvariant::new(curve, rank, degree, m).unwrap()
}

/// Arbitrary classes, including negative ranks and multiplicities.
pub fn arb_invariant(curve: Arc<StackyCurve>) -> impl Strategy<Value = NumericalInvariant> {
    let orders: Vec<usize> = curve.orders().map(|e| e as usize).collect();
    let free: Vec<_> = orders
        .iter()
        .map(|&e| prop::collection::vec(-4i64..=4, e - 1))
        .collect();
    (-5i64..=5, -10i64..=10, free).prop_map(move |(r, d, free)| {
        let mults = free
            .into_iter()
            .map(|tail| {
                let head = r - tail.iter().sum::<i64>();
                std::iter::once(head).chain(tail).collect()
            })
            .collect();
        build(&curve, r, d, mults)
    })
}

/// Positive rank with nonnegative multiplicities.
pub fn arb_positive(
    curve: Arc<StackyCurve>,
    max_rank: i64,
) -> impl Strategy<Value = NumericalInvariant> {
    (1..=max_rank, -10i64..=10).prop_flat_map(move |(r, d)| {
        let parts: Vec<_> = curve.orders().map(|e| composition(r, e as usize)).collect();
        let curve = curve.clone();
        parts.prop_map(move |mults| build(&curve, r, d, mults))
    })
}

/// Every multiplicity strictly positive.
pub fn arb_generating(curve: Arc<StackyCurve>) -> impl Strategy<Value = NumericalInvariant> {
    let emax = curve.orders().max().unwrap_or(1) as i64;
    (0i64..=4, -10i64..=10).prop_flat_map(move |(extra, d)| {
        let r = emax + extra;
        let parts: Vec<_> = curve
            .orders()
            .map(|e| {
                composition(r - e as i64, e as usize)
                    .prop_map(|v| v.into_iter().map(|x| x + 1).collect::<Vec<_>>())
            })
            .collect();
        let curve = curve.clone();
        parts.prop_map(move |mults| build(&curve, r, d, mults))
    })
}

pub fn arb_line(curve: Arc<StackyCurve>) -> impl Strategy<Value = LineBundleClass> {
    let twists: Vec<_> = curve.orders().map(|e| 0..e).collect();
    (-6i64..=6, twists).prop_map(move |(d, t)| LineBundleClass::new(&curve, d, t).unwrap())
}
