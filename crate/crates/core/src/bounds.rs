//! Effective bounds for the determinantal line bundle on moduli of
//! bundles with fixed invariant β.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::curve::{stacky_genus, StackyCurve};
use crate::error::{Error, Result};
use crate::ktheory::classes::same_curve;
use crate::ktheory::{euler_pair, NumericalInvariant};
use crate::rational::{next_integer_above, Rational};
use crate::walls::{enumerate_subinvariants, SubinvariantFilter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    /// max((g − 1)·r², 0) with g the stacky genus and r = rank β.
    pub kappa: Rational,
    /// max((g − 1 + 1/r)·r², 0).
    pub kappa_plus: Rational,
    /// Smallest m ≥ 1 exceeding (g − 1)·r².
    pub basepoint_free_min_m: BigInt,
    /// Smallest m exceeding the plus-bound for the doubled class 2β.
    pub finite_map_min_m: BigInt,
    /// −⟨β, β⟩.
    pub stack_dim: BigInt,
}

pub fn effective_bounds(
    curve: &Arc<StackyCurve>,
    beta: &NumericalInvariant,
) -> Result<BoundsReport> {
    if !same_curve(curve, beta.curve()) {
        return Err(Error::MixedCurves);
    }
    if !beta.rank().is_positive() {
        return Err(Error::NonPositiveRank("bounds target"));
    }
    let g1 = stacky_genus(curve) - Rational::one();
    let r = Rational::from_integer(beta.rank().clone());
    let zero = Rational::zero();
    let base = &g1 * &r * &r;
    let plus = (&g1 + r.recip()) * &r * &r;
    let doubled = Rational::from_integer(BigInt::from(2)) * &r;
    let finite = (&g1 + doubled.recip()) * &doubled * &doubled;
    Ok(BoundsReport {
        kappa: base.clone().max(zero.clone()),
        kappa_plus: plus.max(zero.clone()),
        basepoint_free_min_m: next_integer_above(&base).max(BigInt::one()),
        finite_map_min_m: next_integer_above(&finite.max(zero)),
        stack_dim: -euler_pair(beta, beta)?,
    })
}

/// Smallest m ≥ 1 with (⟨γ,γ⟩ − ⟨η,γ⟩)/⟨α,γ⟩ < m for every enumerated γ
/// with ⟨α, γ⟩ < 0.
pub fn hom_vanishing_bound(
    alpha: &NumericalInvariant,
    beta: &NumericalInvariant,
    eta: &NumericalInvariant,
    filter: &SubinvariantFilter,
) -> Result<BigInt> {
    alpha.ensure_same_curve(beta)?;
    alpha.ensure_same_curve(eta)?;
    if !alpha.is_generating() {
        return Err(Error::NotGenerating);
    }
    if !beta.is_positive() {
        return Err(Error::NotPositive("target invariant"));
    }
    let ab = euler_pair(alpha, beta)?;
    if !ab.is_zero() {
        return Err(Error::NotOrthogonal(format!(
            "<alpha, beta> = {ab}, expected 0"
        )));
    }
    let mut worst: Option<Rational> = None;
    for gamma in enumerate_subinvariants(beta, alpha, filter)? {
        let ag = euler_pair(alpha, &gamma)?;
        if !ag.is_negative() {
            continue;
        }
        let v = Rational::new(euler_pair(&gamma, &gamma)? - euler_pair(eta, &gamma)?, ag);
        if worst.as_ref().is_none_or(|w| &v > w) {
            worst = Some(v);
        }
    }
    Ok(worst.map_or_else(BigInt::one, |w| next_integer_above(&w).max(BigInt::one())))
}

/// ⟨γ,γ⟩ − m⟨α,γ⟩ − ⟨η,γ⟩: the codimension estimate for the stratum of
/// bundles admitting a map from a subsheaf of class γ.
pub fn codim_bound(
    alpha: &NumericalInvariant,
    eta: &NumericalInvariant,
    gamma: &NumericalInvariant,
    m: &BigInt,
) -> Result<BigInt> {
    Ok(euler_pair(gamma, gamma)? - m * euler_pair(alpha, gamma)? - euler_pair(eta, gamma)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackDims {
    pub bun_dim_1: BigInt,
    pub bun_dim_2: BigInt,
    /// Dimension of the stack of extensions 0 → E₂ → E → E₁ → 0.
    pub ext_stack_dim: BigInt,
}

pub fn stack_dims(beta1: &NumericalInvariant, beta2: &NumericalInvariant) -> Result<StackDims> {
    let bun_dim_1 = -euler_pair(beta1, beta1)?;
    let bun_dim_2 = -euler_pair(beta2, beta2)?;
    let ext_stack_dim = &bun_dim_1 + &bun_dim_2 - euler_pair(beta2, beta1)?;
    Ok(StackDims {
        bun_dim_1,
        bun_dim_2,
        ext_stack_dim,
    })
}

/// Finite formal sum of points with integer coefficients. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormalPointSum {
    coefficients: BTreeMap<String, BigInt>,
}

impl FormalPointSum {
    /// Repeated labels accumulate.
    pub fn new<S: Into<String>>(terms: impl IntoIterator<Item = (S, BigInt)>) -> Self {
        let mut coefficients: BTreeMap<String, BigInt> = BTreeMap::new();
        for (label, c) in terms {
            *coefficients.entry(label.into()).or_default() += c;
        }
        coefficients.retain(|_, c| !c.is_zero());
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &BTreeMap<String, BigInt> {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// The divisor D − D′ relating the determinantal line bundles built from
/// two choices of correction divisor.
pub fn detline_correction(d: &FormalPointSum, d_prime: &FormalPointSum) -> FormalPointSum {
    FormalPointSum::new(
        d.coefficients
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .chain(d_prime.coefficients.iter().map(|(k, v)| (k.clone(), -v))),
    )
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::ktheory::{combine, skyscraper_class, LineBundleClass};
    use crate::rational::{frac, int};
    use crate::stability::orthogonalize;
    use crate::testing::{arb_curve, arb_generating, arb_positive};

    fn inv(c: &Arc<StackyCurve>, r: i64, d: i64, m: &[&[i64]]) -> NumericalInvariant {
        NumericalInvariant::from_ints(c, r, d, m).unwrap()
    }

    #[test]
    fn bounds_example() {
        let c = StackyCurve::new(2, [("p", 2)]).unwrap();
        let b = inv(&c, 2, 0, &[&[1, 1]]);
        let rep = effective_bounds(&c, &b).unwrap();
        assert_eq!(rep.kappa, int(5));
        assert_eq!(rep.kappa_plus, int(7));
        assert_eq!(rep.basepoint_free_min_m, BigInt::from(6));
        assert_eq!(rep.finite_map_min_m, BigInt::from(25));
        assert_eq!(rep.stack_dim, -euler_pair(&b, &b).unwrap());
    }

    #[test]
    fn bounds_clamp_on_spherical_curves() {
        let c = StackyCurve::new(0, [("p", 2), ("q", 3)]).unwrap();
        let b = inv(&c, 3, 0, &[&[2, 1], &[1, 1, 1]]);
        let rep = effective_bounds(&c, &b).unwrap();
        assert_eq!(rep.kappa, int(0));
        assert_eq!(rep.kappa_plus, int(0));
        assert_eq!(rep.basepoint_free_min_m, BigInt::one());
        assert_eq!(rep.finite_map_min_m, BigInt::one());
        // g − 1 = −7/12; a fractional κ⁺ shows up for rank one on g = 1.
        let e = StackyCurve::new(1, [("p", 2)]).unwrap();
        let rep = effective_bounds(&e, &LineBundleClass::trivial(&e).to_invariant()).unwrap();
        assert_eq!(rep.kappa, frac(1, 4));
        assert_eq!(rep.kappa_plus, frac(5, 4));
        assert_eq!(rep.basepoint_free_min_m, BigInt::one());
        assert_eq!(rep.finite_map_min_m, BigInt::from(4));
    }

    #[test]
    fn bounds_errors() {
        let c = StackyCurve::new(2, [("p", 2)]).unwrap();
        let other = StackyCurve::new(2, [("p", 3)]).unwrap();
        let b = inv(&other, 2, 0, &[&[1, 1, 0]]);
        assert!(matches!(effective_bounds(&c, &b), Err(Error::MixedCurves)));
        let sky = skyscraper_class(&c);
        assert!(matches!(
            effective_bounds(&c, &sky),
            Err(Error::NonPositiveRank(_))
        ));
    }

    #[test]
    fn codim_example() {
        let c = StackyCurve::new(0, [("p", 2), ("q", 3)]).unwrap();
        let g = LineBundleClass::from_labels(&c, 0, &[("p", 1)])
            .unwrap()
            .to_invariant();
        let a = inv(&c, 3, 0, &[&[2, 1], &[1, 1, 1]]);
        let eta = NumericalInvariant::zero(&c);
        assert_eq!(
            codim_bound(&a, &eta, &g, &BigInt::from(2)).unwrap(),
            BigInt::from(-1)
        );
    }

    #[test]
    fn dims_example() {
        let c = StackyCurve::new(2, Vec::<(&str, u32)>::new()).unwrap();
        let o = NumericalInvariant::structure_sheaf(&c);
        let d = stack_dims(&o, &o).unwrap();
        assert_eq!(
            (d.bun_dim_1, d.bun_dim_2, d.ext_stack_dim),
            (BigInt::from(1), BigInt::from(1), BigInt::from(3))
        );
    }

    #[test]
    fn detline_example() {
        let d = FormalPointSum::new([("x", BigInt::from(2)), ("y", BigInt::from(1))]);
        let dp = FormalPointSum::new([("x", BigInt::from(2)), ("z", BigInt::from(-1))]);
        let diff = detline_correction(&d, &dp);
        let expect: BTreeMap<String, BigInt> = [
            ("y".to_string(), BigInt::from(1)),
            ("z".to_string(), BigInt::from(1)),
        ]
        .into();
        assert_eq!(diff.coefficients(), &expect);
        assert!(detline_correction(&d, &d).is_zero());
        assert!(FormalPointSum::new([("x", BigInt::zero())]).is_zero());
    }

    #[test]
    fn hom_vanishing_preconditions() {
        let c = StackyCurve::new(0, [("p", 2), ("q", 3)]).unwrap();
        let a = inv(&c, 3, 0, &[&[2, 1], &[1, 1, 1]]);
        let b = inv(&c, 2, 0, &[&[1, 1], &[1, 1, 0]]);
        let f = SubinvariantFilter::with_ell(2).unwrap();
        let eta = NumericalInvariant::zero(&c);
        assert!(matches!(
            hom_vanishing_bound(&a, &b, &eta, &f),
            Err(Error::NotOrthogonal(_))
        ));
        let ortho = orthogonalize(&a, &b).unwrap();
        assert!(hom_vanishing_bound(&ortho, &b, &eta, &f).unwrap() >= BigInt::one());
        let o = NumericalInvariant::structure_sheaf(&c);
        assert!(matches!(
            hom_vanishing_bound(&o, &b, &eta, &f),
            Err(Error::NotGenerating)
        ));
    }

    /// On g = 0 with three points of order 2 the stacky genus is 3/4 and the
    /// plus-bound for rank 4 is 0, yet the rank-two candidate with
    /// multiplicities (1, 1) everywhere forces m ≥ 2 when η = −δ.
    #[test]
    fn plus_bound_fails_below_genus_one() {
        let c = StackyCurve::new(0, [("a", 2), ("b", 2), ("c", 2)]).unwrap();
        let a = inv(&c, 2, 1, &[&[1, 1], &[1, 1], &[1, 1]]);
        let b = inv(&c, 4, 1, &[&[2, 2], &[2, 2], &[2, 2]]);
        assert!(euler_pair(&a, &b).unwrap().is_zero());
        let minus_delta = skyscraper_class(&c).negated();
        let f = SubinvariantFilter::with_ell(1).unwrap();
        let got = hom_vanishing_bound(&a, &b, &minus_delta, &f).unwrap();
        let rep = effective_bounds(&c, &b).unwrap();
        assert_eq!(rep.kappa_plus, int(0));
        assert_eq!(got, BigInt::from(2));
        assert!(got > next_integer_above(&rep.kappa_plus));
    }

    fn orthogonal_instance() -> impl Strategy<Value = (NumericalInvariant, NumericalInvariant)> {
        arb_curve()
            .prop_flat_map(|c| (arb_generating(c.clone()), arb_positive(c, 4)))
            .prop_map(|(a, b)| (orthogonalize(&a, &b).unwrap(), b))
    }

    fn orthogonal_instance_with_m(
    ) -> impl Strategy<Value = (NumericalInvariant, NumericalInvariant, BigInt)> {
        (orthogonal_instance(), -5i64..=20).prop_map(|((a, b), m)| (a, b, BigInt::from(m)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn hom_vanishing_within_kappa((a, b) in orthogonal_instance()) {
            let c = a.curve().clone();
            let f = SubinvariantFilter::with_ell(2).unwrap();
            let rep = effective_bounds(&c, &b).unwrap();
            let zero = NumericalInvariant::zero(&c);
            prop_assert!(hom_vanishing_bound(&a, &b, &zero, &f).unwrap() <= rep.basepoint_free_min_m);
            if stacky_genus(&c) >= int(1) {
                let minus_delta = skyscraper_class(&c).negated();
                let plus = next_integer_above(&rep.kappa_plus);
                prop_assert!(hom_vanishing_bound(&a, &b, &minus_delta, &f).unwrap() <= plus);
            }
        }

        #[test]
        fn codim_positive_past_basepoint_bound((a, b) in orthogonal_instance(), extra in 0u32..3) {
            let c = a.curve().clone();
            let m = effective_bounds(&c, &b).unwrap().basepoint_free_min_m + extra;
            let f = SubinvariantFilter::with_ell(2).unwrap();
            let etas = [NumericalInvariant::zero(&c), skyscraper_class(&c)];
            for g in enumerate_subinvariants(&b, &a, &f).unwrap() {
                if euler_pair(&a, &g).unwrap() <= BigInt::from(-1) {
                    for eta in &etas {
                        prop_assert!(codim_bound(&a, eta, &g, &m).unwrap().is_positive());
                    }
                }
            }
        }

        #[test]
        fn polystable_separation((a, b, m) in orthogonal_instance_with_m()) {
            let shifted = combine(&[(m.clone(), &a), (-BigInt::one(), &skyscraper_class(a.curve()))]).unwrap();
            prop_assert_eq!(euler_pair(&shifted, &b).unwrap(), b.rank().clone());
        }

        #[test]
        fn codim_linear_in_m((a, b, m) in orthogonal_instance_with_m()) {
            let c = a.curve().clone();
            let zero = NumericalInvariant::zero(&c);
            prop_assert_eq!(codim_bound(&a, &zero, &b, &BigInt::zero()).unwrap(), euler_pair(&b, &b).unwrap());
            let step = codim_bound(&a, &zero, &b, &(&m + 1)).unwrap() - codim_bound(&a, &zero, &b, &m).unwrap();
            prop_assert_eq!(step, -euler_pair(&a, &b).unwrap());
        }
    }
}
