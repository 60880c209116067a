use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::curve::StackyCurve;
use crate::error::{Error, Result};

/// An element of K₀^num: rank, coarse degree `deg π_*` and the
/// multiplicity vector at every stacky point (in curve order).
///
/// The constructor enforces that every multiplicity vector has the
/// point's order as length and sums to the rank. Ranks may be zero or
/// negative; positivity is a predicate, not a type constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumericalInvariant {
    curve: Arc<StackyCurve>,
    rank: BigInt,
    coarse_degree: BigInt,
    multiplicities: Vec<Vec<BigInt>>,
}

impl NumericalInvariant {
    pub fn new(
        curve: &Arc<StackyCurve>,
        rank: impl Into<BigInt>,
        coarse_degree: impl Into<BigInt>,
        multiplicities: Vec<Vec<BigInt>>,
    ) -> Result<Self> {
        let rank = rank.into();
        if multiplicities.len() != curve.points().len() {
            return Err(Error::InvalidInvariant(format!(
                "expected multiplicities for {} points, got {}",
                curve.points().len(),
                multiplicities.len()
            )));
        }
        for (point, m) in curve.points().iter().zip(&multiplicities) {
            if m.len() != point.order() as usize {
                return Err(Error::InvalidInvariant(format!(
                    "multiplicity vector at '{}' has length {}, expected {}",
                    point.label(),
                    m.len(),
                    point.order()
                )));
            }
            let total: BigInt = m.iter().sum();
            if total != rank {
                return Err(Error::InvalidInvariant(format!(
                    "multiplicities at '{}' sum to {total}, not to the rank {rank}",
                    point.label()
                )));
            }
        }
        Ok(Self {
            curve: curve.clone(),
            rank,
            coarse_degree: coarse_degree.into(),
            multiplicities,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(
        curve: &Arc<StackyCurve>,
        rank: i64,
        coarse_degree: i64,
        multiplicities: &[&[i64]],
    ) -> Result<Self> {
        let m = multiplicities
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::new(curve, rank, coarse_degree, m)
    }

    pub fn zero(curve: &Arc<StackyCurve>) -> Self {
        Self {
            curve: curve.clone(),
            rank: BigInt::zero(),
            coarse_degree: BigInt::zero(),
            multiplicities: curve
                .orders()
                .map(|e| vec![BigInt::zero(); e as usize])
                .collect(),
        }
    }

    /// The class [O] of the structure sheaf.
    pub fn structure_sheaf(curve: &Arc<StackyCurve>) -> Self {
        LineBundleClass::trivial(curve).to_invariant()
    }

    pub fn curve(&self) -> &Arc<StackyCurve> {
        &self.curve
    }

    pub fn rank(&self) -> &BigInt {
        &self.rank
    }

    pub fn coarse_degree(&self) -> &BigInt {
        &self.coarse_degree
    }

    pub fn multiplicities(&self) -> &[Vec<BigInt>] {
        &self.multiplicities
    }

    /// Positive rank and nonnegative multiplicities.
    pub fn is_positive(&self) -> bool {
        self.rank.is_positive()
            && self
                .multiplicities
                .iter()
                .flatten()
                .all(|m| !m.is_negative())
    }

    /// Positive rank and every multiplicity strictly positive.
    pub fn is_generating(&self) -> bool {
        self.rank.is_positive()
            && self
                .multiplicities
                .iter()
                .flatten()
                .all(|m| m.is_positive())
    }

    pub fn same_curve(&self, other: &Self) -> bool {
        same_curve(&self.curve, &other.curve)
    }

    pub(crate) fn ensure_same_curve(&self, other: &Self) -> Result<()> {
        if self.same_curve(other) {
            Ok(())
        } else {
            Err(Error::MixedCurves)
        }
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        Self {
            curve: self.curve.clone(),
            rank: &self.rank * k,
            coarse_degree: &self.coarse_degree * k,
            multiplicities: self
                .multiplicities
                .iter()
                .map(|v| v.iter().map(|x| x * k).collect())
                .collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(&-BigInt::one())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.ensure_same_curve(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.ensure_same_curve(other)?;
        Ok(self.add_unchecked(&other.negated()))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        Self {
            curve: self.curve.clone(),
            rank: &self.rank + &other.rank,
            coarse_degree: &self.coarse_degree + &other.coarse_degree,
            multiplicities: self
                .multiplicities
                .iter()
                .zip(&other.multiplicities)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    pub(crate) fn with_degree_shift(&self, shift: &BigInt) -> Self {
        let mut out = self.clone();
        out.coarse_degree += shift;
        out
    }

    pub(crate) fn from_parts_unchecked(
        curve: Arc<StackyCurve>,
        rank: BigInt,
        coarse_degree: BigInt,
        multiplicities: Vec<Vec<BigInt>>,
    ) -> Self {
        Self {
            curve,
            rank,
            coarse_degree,
            multiplicities,
        }
    }

    /// Canonical order: rank, then coarse degree, then multiplicities
    /// lexicographically.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.coarse_degree.cmp(&other.coarse_degree))
            .then_with(|| self.multiplicities.cmp(&other.multiplicities))
    }

    pub fn is_zero(&self) -> bool {
        self.rank.is_zero()
            && self.coarse_degree.is_zero()
            && self.multiplicities.iter().flatten().all(Zero::is_zero)
    }
}

pub(crate) fn same_curve(a: &Arc<StackyCurve>, b: &Arc<StackyCurve>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A normalized element of Pic: `π^*L ⊗ ⊗_p O(p/e_p)^{a_p}` with
/// `0 ≤ a_p < e_p`, recorded by `deg L` and the twists `a_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LineBundleClass {
    curve: Arc<StackyCurve>,
    coarse_degree: BigInt,
    twists: Vec<u32>,
}

impl LineBundleClass {
    pub fn new(
        curve: &Arc<StackyCurve>,
        coarse_degree: impl Into<BigInt>,
        twists: Vec<u32>,
    ) -> Result<Self> {
        if twists.len() != curve.points().len() {
            return Err(Error::InvalidLine(format!(
                "expected {} twists, got {}",
                curve.points().len(),
                twists.len()
            )));
        }
        for (point, &a) in curve.points().iter().zip(&twists) {
            if a >= point.order() {
                return Err(Error::TwistOutOfRange {
                    label: point.label().to_string(),
                    twist: a.to_string(),
                    order: point.order(),
                });
            }
        }
        Ok(Self::from_parts(
            curve.clone(),
            coarse_degree.into(),
            twists,
        ))
    }

    /// Builds a class from `(label, twist)` pairs; unnamed points get twist 0.
    pub fn from_labels(
        curve: &Arc<StackyCurve>,
        coarse_degree: impl Into<BigInt>,
        twists: &[(&str, i64)],
    ) -> Result<Self> {
        let mut out = vec![0u32; curve.points().len()];
        for &(label, a) in twists {
            let idx = curve.index_of(label).ok_or_else(|| {
                Error::InvalidLine(format!(
                    "line class references unknown point label '{label}'"
                ))
            })?;
            let order = curve.points()[idx].order();
            out[idx] = u32::try_from(a)
                .ok()
                .filter(|&a| a < order)
                .ok_or_else(|| Error::TwistOutOfRange {
                    label: label.to_string(),
                    twist: a.to_string(),
                    order,
                })?;
        }
        Ok(Self::from_parts(curve.clone(), coarse_degree.into(), out))
    }

    pub(crate) fn from_parts(
        curve: Arc<StackyCurve>,
        coarse_degree: BigInt,
        twists: Vec<u32>,
    ) -> Self {
        Self {
            curve,
            coarse_degree,
            twists,
        }
    }

    pub fn trivial(curve: &Arc<StackyCurve>) -> Self {
        Self::pullback(curve, 0)
    }

    /// Pullback of a degree-`d` line bundle from the coarse curve.
    pub fn pullback(curve: &Arc<StackyCurve>, degree: impl Into<BigInt>) -> Self {
        Self::from_parts(curve.clone(), degree.into(), vec![0; curve.points().len()])
    }

    pub fn curve(&self) -> &Arc<StackyCurve> {
        &self.curve
    }

    pub fn coarse_degree(&self) -> &BigInt {
        &self.coarse_degree
    }

    pub fn twists(&self) -> &[u32] {
        &self.twists
    }

    /// Tensor product, carrying `O(p/e)^{⊗e} = π^*O(x)` into the degree.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if !same_curve(&self.curve, &other.curve) {
            return Err(Error::MixedCurves);
        }
        let mut carries = 0u64;
        let twists = self
            .curve
            .orders()
            .zip(self.twists.iter().zip(&other.twists))
            .map(|(e, (&a, &b))| {
                let s = a + b;
                if s >= e {
                    carries += 1;
                    s - e
                } else {
                    s
                }
            })
            .collect();
        let degree = &self.coarse_degree + &other.coarse_degree + carries;
        Ok(Self::from_parts(self.curve.clone(), degree, twists))
    }

    /// The inverse class: `(−d − #{a_p > 0}, (e − a) mod e)`.
    pub fn dual(&self) -> Self {
        let nonzero = self.twists.iter().filter(|&&a| a > 0).count();
        let twists = self
            .curve
            .orders()
            .zip(&self.twists)
            .map(|(e, &a)| if a == 0 { 0 } else { e - a })
            .collect();
        Self::from_parts(self.curve.clone(), -&self.coarse_degree - nonzero, twists)
    }

    pub fn to_invariant(&self) -> NumericalInvariant {
        let multiplicities = self
            .curve
            .orders()
            .zip(&self.twists)
            .map(|(e, &a)| {
                let mut v = vec![BigInt::zero(); e as usize];
                v[a as usize] = BigInt::one();
                v
            })
            .collect();
        NumericalInvariant::from_parts_unchecked(
            self.curve.clone(),
            BigInt::one(),
            self.coarse_degree.clone(),
            multiplicities,
        )
    }
}

/// Rank 1, coarse degree `d`, and the indicator vector of slot `a_p` at
/// every stacky point.
pub fn invariant_of_line(
    curve: &Arc<StackyCurve>,
    line: &LineBundleClass,
) -> Result<NumericalInvariant> {
    if !same_curve(curve, &line.curve) {
        return Err(Error::MixedCurves);
    }
    Ok(line.to_invariant())
}

/// The class δ = (0, 1, 0) of a length-one skyscraper at a non-stacky point.
pub fn skyscraper_class(curve: &Arc<StackyCurve>) -> NumericalInvariant {
    let mut d = NumericalInvariant::zero(curve);
    d.coarse_degree = BigInt::one();
    d
}

/// Integer linear combination of invariants over one curve.
pub fn combine(terms: &[(BigInt, &NumericalInvariant)]) -> Result<NumericalInvariant> {
    let (_, first) = terms.first().ok_or(Error::EmptyCombination)?;
    let mut acc = NumericalInvariant::zero(first.curve());
    for (k, inv) in terms {
        acc.ensure_same_curve(inv)?;
        acc = acc.add_unchecked(&inv.scaled(k));
    }
    Ok(acc)
}

/// An expression `Σ c_k [L_k] + c_δ δ` over degree-0 line classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorCombination {
    pub line_terms: Vec<(BigInt, LineBundleClass)>,
    pub delta_coefficient: BigInt,
}

impl GeneratorCombination {
    pub fn recompose(&self, curve: &Arc<StackyCurve>) -> Result<NumericalInvariant> {
        let mut acc = skyscraper_class(curve).scaled(&self.delta_coefficient);
        for (c, line) in &self.line_terms {
            acc = acc.add_unchecked(&invariant_of_line(curve, line)?.scaled(c));
        }
        Ok(acc)
    }
}

/// Writes `beta` over the generators `[L(0, a)]` and δ.
///
/// Each sign part of the multiplicities is turned into a run-length list of
/// twists per point, sorted ascending; the lists are zipped across points
/// to produce line classes. Equal classes are merged and the result is
/// sorted by twist vector, so the output is a function of `beta` alone.
pub fn decompose(beta: &NumericalInvariant) -> GeneratorCombination {
    let curve = beta.curve();
    let negative_totals: Vec<BigInt> = beta
        .multiplicities
        .iter()
        .map(|v| v.iter().filter(|m| m.is_negative()).map(|m| -m).sum())
        .collect();
    let pad = negative_totals
        .iter()
        .cloned()
        .chain([BigInt::zero(), -beta.rank.clone()])
        .max()
        .expect("nonempty");

    let mut positive_runs = Vec::with_capacity(negative_totals.len());
    let mut negative_runs = Vec::with_capacity(negative_totals.len());
    for (v, neg_total) in beta.multiplicities.iter().zip(&negative_totals) {
        let fill = &pad - neg_total;
        let mut pos: Vec<(u32, BigInt)> = Vec::new();
        let mut neg: Vec<(u32, BigInt)> = Vec::new();
        for (i, m) in v.iter().enumerate() {
            let extra = if i == 0 { fill.clone() } else { BigInt::zero() };
            let p = if m.is_positive() {
                m.clone()
            } else {
                BigInt::zero()
            } + &extra;
            let n = if m.is_negative() { -m } else { BigInt::zero() } + &extra;
            if p.is_positive() {
                pos.push((i as u32, p));
            }
            if n.is_positive() {
                neg.push((i as u32, n));
            }
        }
        positive_runs.push(pos);
        negative_runs.push(neg);
    }

    let mut merged: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    let pos_count = &beta.rank + &pad;
    for (twists, count) in zip_runs(positive_runs, pos_count) {
        *merged.entry(twists).or_default() += count;
    }
    for (twists, count) in zip_runs(negative_runs, pad) {
        *merged.entry(twists).or_default() -= count;
    }

    let line_terms = merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(twists, c)| {
            (
                c,
                LineBundleClass::from_parts(curve.clone(), BigInt::zero(), twists),
            )
        })
        .collect();
    GeneratorCombination {
        line_terms,
        delta_coefficient: beta.coarse_degree.clone(),
    }
}

/// Pairs the k-th smallest twist at every point, for `total` lines.
fn zip_runs(mut runs: Vec<Vec<(u32, BigInt)>>, total: BigInt) -> Vec<(Vec<u32>, BigInt)> {
    let mut out = Vec::new();
    if !total.is_positive() {
        return out;
    }
    if runs.is_empty() {
        out.push((Vec::new(), total));
        return out;
    }
    for r in &mut runs {
        r.reverse();
    }
    loop {
        if runs.iter().any(Vec::is_empty) {
            break;
        }
        let step = runs
            .iter()
            .map(|r| r.last().expect("nonempty").1.clone())
            .min()
            .expect("nonempty");
        let twists = runs.iter().map(|r| r.last().expect("nonempty").0).collect();
        for r in &mut runs {
            let last = r.last_mut().expect("nonempty");
            last.1 -= &step;
            if last.1.is_zero() {
                r.pop();
            }
        }
        out.push((twists, step));
    }
    out
}
