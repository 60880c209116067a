//! Potential destabilizing subinvariants and walls in stability-parameter
//! space.
//!
//! A candidate subinvariant γ of a positive β has 0 < rank γ < rank β and
//! multiplicities bounded componentwise by those of β. Such γ are only
//! *potential* destabilizers: nothing here checks that a subsheaf with
//! that class exists.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ktheory::{degree_wrt, pairing_with_structure_sheaf, NumericalInvariant};
use crate::rational::{ceil_div, Rational};

/// Hard cap on the number of candidates any enumeration may produce.
pub const MAX_CANDIDATES: usize = 2_000_000;

/// Degree window for candidate subinvariants.
///
/// Without overrides the window for a pattern of rank k is
/// `[−ℓ·k, D_max]`, where `D_max` is the largest degree with ⟨α, γ⟩ < 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubinvariantFilter {
    ell: BigInt,
    degree_floor: Option<BigInt>,
    degree_ceiling: Option<BigInt>,
}

impl SubinvariantFilter {
    pub fn new(
        ell: impl Into<BigInt>,
        degree_floor: Option<BigInt>,
        degree_ceiling: Option<BigInt>,
    ) -> Result<Self> {
        let ell = ell.into();
        if ell.is_negative() {
            return Err(Error::InvalidWindow(format!(
                "regularity bound must be >= 0, got {ell}"
            )));
        }
        if let (Some(lo), Some(hi)) = (&degree_floor, &degree_ceiling) {
            if lo > hi {
                return Err(Error::InvalidWindow(format!(
                    "degree floor {lo} exceeds ceiling {hi}"
                )));
            }
        }
        Ok(Self {
            ell,
            degree_floor,
            degree_ceiling,
        })
    }

    pub fn with_ell(ell: impl Into<BigInt>) -> Result<Self> {
        Self::new(ell, None, None)
    }

    /// Explicit window `[lo, hi]` for every pattern.
    pub fn with_window(lo: impl Into<BigInt>, hi: impl Into<BigInt>) -> Result<Self> {
        Self::new(0, Some(lo.into()), Some(hi.into()))
    }

    pub fn ell(&self) -> &BigInt {
        &self.ell
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallReport {
    witnesses: Vec<NumericalInvariant>,
}

impl WallReport {
    pub fn on_wall(&self) -> bool {
        !self.witnesses.is_empty()
    }

    pub fn witnesses(&self) -> &[NumericalInvariant] {
        &self.witnesses
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum WallLocus {
    /// The slope equality holds for every parameter on the segment.
    EntireSegment,
    At(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentWall {
    pub locus: WallLocus,
    pub report: WallReport,
}

fn to_count(x: &BigInt) -> Result<u64> {
    x.to_u64()
        .filter(|&n| n as usize <= MAX_CANDIDATES)
        .ok_or_else(|| Error::TooLarge(format!("multiplicity {x} is too large to enumerate")))
}

/// All vectors `v` with `0 ≤ v ≤ bound` componentwise and `Σ v = total`.
fn bounded_compositions(bound: &[u64], total: u64) -> Vec<Vec<u64>> {
    fn go(bound: &[u64], total: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        match bound.split_first() {
            None => {
                if total == 0 {
                    out.push(prefix.clone());
                }
            }
            Some((&b, rest)) => {
                let room: u64 = rest.iter().sum();
                let lo = total.saturating_sub(room);
                for x in lo..=b.min(total) {
                    prefix.push(x);
                    go(rest, total - x, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(bound, total, &mut Vec::with_capacity(bound.len()), &mut out);
    out
}

/// Degree-zero candidates, one per admissible (rank, multiplicity) pattern.
fn candidate_patterns(beta: &NumericalInvariant) -> Result<Vec<NumericalInvariant>> {
    let curve = beta.curve();
    let rank = to_count(beta.rank())?;
    let bounds: Vec<Vec<u64>> = beta
        .multiplicities()
        .iter()
        .map(|m| m.iter().map(to_count).collect())
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for k in 1..rank {
        let mut partial: Vec<Vec<Vec<BigInt>>> = vec![Vec::new()];
        for b in &bounds {
            let choices = bounded_compositions(b, k);
            let mut next = Vec::with_capacity(partial.len() * choices.len());
            for prefix in &partial {
                for c in &choices {
                    let mut v = prefix.clone();
                    v.push(c.iter().map(|&x| BigInt::from(x)).collect());
                    next.push(v);
                }
            }
            if next.len() > MAX_CANDIDATES {
                return Err(Error::TooLarge(format!(
                    "more than {MAX_CANDIDATES} multiplicity patterns"
                )));
            }
            partial = next;
        }
        for mults in partial {
            out.push(NumericalInvariant::from_parts_unchecked(
                curve.clone(),
                BigInt::from(k),
                BigInt::zero(),
                mults,
            ));
        }
    }
    Ok(out)
}

fn require_positive_beta(beta: &NumericalInvariant) -> Result<()> {
    if beta.is_positive() {
        Ok(())
    } else {
        Err(Error::NotPositive("target invariant"))
    }
}

fn require_positive_alpha(alpha: &NumericalInvariant) -> Result<()> {
    if alpha.rank().is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveRank("stability parameter"))
    }
}

fn sort_canonical(v: &mut [NumericalInvariant]) {
    v.sort_by(NumericalInvariant::canonical_cmp);
}

/// Every candidate subinvariant γ of β inside the filter's degree window,
/// sorted by (rank, degree, multiplicities).
pub fn enumerate_subinvariants(
    beta: &NumericalInvariant,
    alpha: &NumericalInvariant,
    filter: &SubinvariantFilter,
) -> Result<Vec<NumericalInvariant>> {
    require_positive_beta(beta)?;
    require_positive_alpha(alpha)?;
    alpha.ensure_same_curve(beta)?;
    let structure_pairing = pairing_with_structure_sheaf(alpha);
    let mut out = Vec::new();
    for pattern in candidate_patterns(beta)? {
        let k = pattern.rank();
        let lo = match &filter.degree_floor {
            Some(lo) => lo.clone(),
            None => -(&filter.ell * k),
        };
        let hi = match &filter.degree_ceiling {
            Some(hi) => hi.clone(),
            None => {
                // r_α d + W < −k⟨α,O⟩  ⇔  d ≤ ⌈(−k⟨α,O⟩ − W) / r_α⌉ − 1
                let w = degree_wrt(alpha, &pattern)?;
                ceil_div(&(-(k * &structure_pairing) - w), alpha.rank()) - 1
            }
        };
        let mut d = lo;
        while d <= hi {
            if out.len() >= MAX_CANDIDATES {
                return Err(Error::TooLarge(format!(
                    "more than {MAX_CANDIDATES} candidates"
                )));
            }
            out.push(pattern.with_degree_shift(&d));
            d += 1;
        }
    }
    sort_canonical(&mut out);
    Ok(out)
}

/// Candidates γ with μ_α(γ) = μ_α(β).
///
/// For each pattern the equality fixes deg_α(γ), and since rank(α) > 0
/// that fixes at most one integral coarse degree.
pub fn is_on_wall(alpha: &NumericalInvariant, beta: &NumericalInvariant) -> Result<WallReport> {
    require_positive_alpha(alpha)?;
    require_positive_beta(beta)?;
    alpha.ensure_same_curve(beta)?;
    let beta_degree = degree_wrt(alpha, beta)?;
    let mut witnesses = Vec::new();
    for pattern in candidate_patterns(beta)? {
        let target = pattern.rank() * &beta_degree;
        if !(&target % beta.rank()).is_zero() {
            continue;
        }
        let residual = target / beta.rank() - degree_wrt(alpha, &pattern)?;
        if (&residual % alpha.rank()).is_zero() {
            witnesses.push(pattern.with_degree_shift(&(residual / alpha.rank())));
        }
    }
    sort_canonical(&mut witnesses);
    Ok(WallReport { witnesses })
}

/// Walls met by α(t) = (1 − t)·α0 + t·α1 for t ∈ [0, 1].
///
/// Each candidate γ (every pattern, every degree in `degree_range`) gives
/// the linear condition `rank(β)·deg_{α(t)}(γ) = rank(γ)·deg_{α(t)}(β)`.
/// Identically satisfied conditions are reported under
/// [`WallLocus::EntireSegment`] first; isolated roots follow in increasing t.
pub fn walls_on_segment(
    alpha0: &NumericalInvariant,
    alpha1: &NumericalInvariant,
    beta: &NumericalInvariant,
    degree_range: (&BigInt, &BigInt),
) -> Result<Vec<SegmentWall>> {
    alpha0.ensure_same_curve(alpha1)?;
    alpha0.ensure_same_curve(beta)?;
    if alpha0 == alpha1 {
        return Err(Error::DegenerateSegment);
    }
    if !alpha0.rank().is_positive() || !alpha1.rank().is_positive() {
        return Err(Error::RankNotPositiveOnSegment);
    }
    require_positive_beta(beta)?;
    let (lo, hi) = degree_range;
    if lo > hi {
        return Err(Error::InvalidWindow(format!(
            "degree range {lo}:{hi} is empty"
        )));
    }

    let beta_deg0 = degree_wrt(alpha0, beta)?;
    let beta_deg1 = degree_wrt(alpha1, beta)?;
    let mut everywhere = Vec::new();
    let mut at: BTreeMap<Rational, Vec<NumericalInvariant>> = BTreeMap::new();
    let mut seen = 0usize;
    for pattern in candidate_patterns(beta)? {
        let k = pattern.rank().clone();
        let w0 = beta.rank() * degree_wrt(alpha0, &pattern)? - &k * &beta_deg0;
        let w1 = beta.rank() * degree_wrt(alpha1, &pattern)? - &k * &beta_deg1;
        let mut d = lo.clone();
        while &d <= hi {
            seen += 1;
            if seen > MAX_CANDIDATES {
                return Err(Error::TooLarge(format!(
                    "more than {MAX_CANDIDATES} candidates"
                )));
            }
            // deg_α(γ) grows by rank(α)·d when γ's degree is shifted by d.
            let f0 = &w0 + beta.rank() * alpha0.rank() * &d;
            let f1 = &w1 + beta.rank() * alpha1.rank() * &d;
            let gamma = || pattern.with_degree_shift(&d);
            if f0.is_zero() && f1.is_zero() {
                everywhere.push(gamma());
            } else if f0 != f1 {
                let t = Rational::new(f0.clone(), &f0 - &f1);
                if !t.is_negative() && t <= Rational::one() {
                    at.entry(t).or_default().push(gamma());
                }
            }
            d += 1;
        }
    }

    let mut out = Vec::new();
    if !everywhere.is_empty() {
        sort_canonical(&mut everywhere);
        out.push(SegmentWall {
            locus: WallLocus::EntireSegment,
            report: WallReport {
                witnesses: everywhere,
            },
        });
    }
    for (t, mut witnesses) in at {
        sort_canonical(&mut witnesses);
        out.push(SegmentWall {
            locus: WallLocus::At(t),
            report: WallReport { witnesses },
        });
    }
    Ok(out)
}
