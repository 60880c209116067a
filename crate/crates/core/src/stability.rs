//! Slopes, slope comparison, orthogonalization of stability parameters and
//! Harder–Narasimhan types of split bundles.
//!
//! HN types are computed only for direct sums of line-bundle classes: the
//! maximal-slope split subbundle is what is decided here. Nothing is
//! claimed about non-split subsheaves.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::curve::canonical_class;
use crate::error::{Error, Result};
use crate::ktheory::{degree_wrt, euler_pair, tensor_line, LineBundleClass, NumericalInvariant};
use crate::rational::{ceil_div, floor_div, Rational};

/// A direct sum of line-bundle classes (repeats allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSum {
    summands: Vec<LineBundleClass>,
    total: NumericalInvariant,
}

impl LineSum {
    pub fn new(summands: Vec<LineBundleClass>) -> Result<Self> {
        let first = summands
            .first()
            .ok_or_else(|| Error::InvalidLine("a line sum needs at least one summand".into()))?;
        let mut total = NumericalInvariant::zero(first.curve());
        for l in &summands {
            total = total.checked_add(&l.to_invariant())?;
        }
        Ok(Self { summands, total })
    }

    pub fn summands(&self) -> &[LineBundleClass] {
        &self.summands
    }

    pub fn total(&self) -> &NumericalInvariant {
        &self.total
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    /// Every summand tensored by `line`.
    pub fn twisted(&self, line: &LineBundleClass) -> Result<Self> {
        Self::new(
            self.summands
                .iter()
                .map(|l| l.tensor(line))
                .collect::<Result<_>>()?,
        )
    }

    /// SD(⊕ L_i) = ⊕ (L_i^∨ ⊗ ω).
    pub fn serre_dual(&self) -> Self {
        let omega = canonical_class(self.total.curve());
        Self::new(
            self.summands
                .iter()
                .map(|l| l.dual().tensor(&omega).expect("same curve"))
                .collect(),
        )
        .expect("nonempty")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnBlock {
    pub slope: Rational,
    pub summands: Vec<LineBundleClass>,
    pub invariant: NumericalInvariant,
}

/// Blocks of equal slope, strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnType {
    blocks: Vec<HnBlock>,
}

impl HnType {
    pub fn blocks(&self) -> &[HnBlock] {
        &self.blocks
    }

    pub fn is_semistable(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn max_slope(&self) -> &Rational {
        &self.blocks[0].slope
    }
}

fn require_positive_rank(inv: &NumericalInvariant, what: &'static str) -> Result<()> {
    if inv.rank().is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveRank(what))
    }
}

/// μ_α(γ) = deg_α(γ) / rank(γ).
pub fn slope(alpha: &NumericalInvariant, gamma: &NumericalInvariant) -> Result<Rational> {
    require_positive_rank(gamma, "slope argument")?;
    Ok(Rational::new(
        degree_wrt(alpha, gamma)?,
        gamma.rank().clone(),
    ))
}

/// Compares μ_α(γ) with μ_α(β) by cross-multiplication.
pub fn slope_compare(
    alpha: &NumericalInvariant,
    beta: &NumericalInvariant,
    gamma: &NumericalInvariant,
) -> Result<Ordering> {
    require_positive_rank(beta, "reference invariant")?;
    require_positive_rank(gamma, "compared invariant")?;
    let lhs = beta.rank() * degree_wrt(alpha, gamma)?;
    let rhs = gamma.rank() * degree_wrt(alpha, beta)?;
    Ok(lhs.cmp(&rhs))
}

/// Replaces a generating α by a generating α' with ⟨α', β⟩ = 0 and
/// deg_{α'} = (|A| + |B|) deg_α, so every slope comparison is unchanged.
///
/// With A = ⟨α, β⟩ and η the degree-one pullback class,
/// B(r) = ⟨α ⊗ η^r, β⟩ = A − r·rank(α)·rank(β); r is the value of least
/// absolute value for which B(r) has sign opposite to A, and
/// α' = |B| α + |A| (α ⊗ η^r).
pub fn orthogonalize(
    alpha: &NumericalInvariant,
    beta: &NumericalInvariant,
) -> Result<NumericalInvariant> {
    if !alpha.is_generating() {
        return Err(Error::NotGenerating);
    }
    require_positive_rank(beta, "orthogonalization target")?;
    let a = euler_pair(alpha, beta)?;
    if a.is_zero() {
        return Ok(alpha.clone());
    }
    let step = alpha.rank() * beta.rank();
    let r = if a.is_positive() {
        floor_div(&a, &step) + 1
    } else {
        ceil_div(&a, &step) - 1
    };
    let b: BigInt = &a - &r * &step;
    debug_assert!(a.is_positive() != b.is_positive() && !b.is_zero());
    let twisted = tensor_line(alpha, &LineBundleClass::pullback(alpha.curve(), r))?;
    Ok(alpha
        .scaled(&b.abs())
        .add_unchecked(&twisted.scaled(&a.abs())))
}

/// Groups summands by α-slope, highest slope first.
pub fn hn_type(alpha: &NumericalInvariant, bundle: &LineSum) -> Result<HnType> {
    require_positive_rank(alpha, "stability parameter")?;
    alpha.ensure_same_curve(bundle.total())?;
    let mut groups: BTreeMap<Reverse<BigInt>, Vec<LineBundleClass>> = BTreeMap::new();
    for l in bundle.summands() {
        let s = degree_wrt(alpha, &l.to_invariant())?;
        groups.entry(Reverse(s)).or_default().push(l.clone());
    }
    let blocks = groups
        .into_iter()
        .map(|(Reverse(s), summands)| {
            let invariant = LineSum::new(summands.clone())
                .expect("nonempty group")
                .total()
                .clone();
            HnBlock {
                slope: Rational::from_integer(s),
                summands,
                invariant,
            }
        })
        .collect();
    Ok(HnType { blocks })
}

/// Largest slope of a split subbundle, i.e. max_i μ_α(L_i).
pub fn mu_max_sum(alpha: &NumericalInvariant, bundle: &LineSum) -> Result<Rational> {
    Ok(hn_type(alpha, bundle)?.max_slope().clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundednessThresholds {
    /// Slopes of F above this force Ext¹(E, F) = 0.
    pub ext1_threshold: Rational,
    /// Slopes of F above this make Hom(E, F) ⊗ E → F surjective.
    pub globgen_threshold: Rational,
}

pub fn boundedness_thresholds(
    alpha: &NumericalInvariant,
    e: &LineSum,
    f: &NumericalInvariant,
) -> Result<BoundednessThresholds> {
    require_positive_rank(f, "target invariant")?;
    let omega = canonical_class(alpha.curve());
    let ext1_threshold = mu_max_sum(alpha, &e.twisted(&omega)?)?;
    let globgen_threshold =
        &ext1_threshold + Rational::new(BigInt::from(e.rank()), f.rank().clone());
    Ok(BoundednessThresholds {
        ext1_threshold,
        globgen_threshold,
    })
}
