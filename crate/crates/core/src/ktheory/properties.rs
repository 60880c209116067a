use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use super::*;
use crate::curve::{canonical_class, stacky_genus, StackyCurve};
use crate::rational::{int, Rational};
use crate::testing::{arb_curve, arb_invariant, arb_line, arb_positive};

fn pair_on_curve() -> impl Strategy<Value = (NumericalInvariant, NumericalInvariant)> {
    arb_curve().prop_flat_map(|c| (arb_invariant(c.clone()), arb_invariant(c)))
}

/// (g − 1)·r² + Σ_p Σ_{j<i} m_j m_i, computed straight from the entries.
fn diagonal_oracle(f: &NumericalInvariant) -> BigInt {
    let g = f.curve().coarse_genus();
    let r = f.rank();
    let mut total = (g - 1) * r * r;
    for m in f.multiplicities() {
        for i in 0..m.len() {
            for j in 0..i {
                total += &m[j] * &m[i];
            }
        }
    }
    total
}

/// Tensoring rotates each multiplicity vector by the twist; entries that
/// wrap past the order each contribute one unit of coarse degree.
fn tensor_oracle(a: &NumericalInvariant, l: &LineBundleClass) -> NumericalInvariant {
    let mut degree = a.coarse_degree() + a.rank() * l.coarse_degree();
    let mut mults = Vec::new();
    for ((m, &t), e) in a
        .multiplicities()
        .iter()
        .zip(l.twists())
        .zip(a.curve().orders())
    {
        let (e, t) = (e as usize, t as usize);
        let mut out = vec![BigInt::zero(); e];
        for (i, x) in m.iter().enumerate() {
            out[(i + t) % e] = x.clone();
            if i + t >= e {
                degree += x;
            }
        }
        mults.push(out);
    }
    NumericalInvariant::new(a.curve(), a.rank().clone(), degree, mults).unwrap()
}

/// Dualizing reflects slot i to slot −i and lowers the degree by the
/// number of nonzero-weight entries.
fn dual_oracle(a: &NumericalInvariant) -> NumericalInvariant {
    let mut degree = -a.coarse_degree();
    let mut mults = Vec::new();
    for m in a.multiplicities() {
        let e = m.len();
        let mut out = vec![BigInt::zero(); e];
        for (i, x) in m.iter().enumerate() {
            out[(e - i) % e] = x.clone();
            if i > 0 {
                degree -= x;
            }
        }
        mults.push(out);
    }
    NumericalInvariant::new(a.curve(), a.rank().clone(), degree, mults).unwrap()
}

fn rank_sq(a: &NumericalInvariant) -> Rational {
    Rational::from_integer(a.rank() * a.rank())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn routes_agree((a, b) in pair_on_curve()) {
        prop_assert_eq!(euler_pair_closed_form(&a, &b).unwrap(), euler_pair_generators(&a, &b).unwrap());
    }

    #[test]
    fn decompose_recomposes(a in arb_curve().prop_flat_map(arb_invariant)) {
        let parts = decompose(&a);
        prop_assert_eq!(parts.recompose(a.curve()).unwrap(), a);
    }

    #[test]
    fn diagonal_formula(a in arb_curve().prop_flat_map(arb_invariant)) {
        prop_assert_eq!(-euler_pair(&a, &a).unwrap(), diagonal_oracle(&a));
    }

    #[test]
    fn pairing_bounds(a in arb_curve().prop_flat_map(|c| arb_positive(c, 6))) {
        let c = a.curve();
        let neg = Rational::from_integer(-euler_pair(&a, &a).unwrap());
        let g = Rational::from_integer(c.coarse_genus().clone());
        prop_assert!((g - int(1)) * rank_sq(&a) <= neg);
        prop_assert!(neg <= (stacky_genus(c) - int(1)) * rank_sq(&a));
    }

    #[test]
    fn single_slot_attains_lower_bound(
        (c, slots, r, d) in arb_curve().prop_flat_map(|c| {
            let slots: Vec<_> = c.orders().map(|e| 0..e as usize).collect();
            (Just(c), slots, 1i64..=6, -10i64..=10)
        })
    ) {
        let mults = c
            .orders()
            .zip(&slots)
            .map(|(e, &s)| {
                let mut v = vec![BigInt::zero(); e as usize];
                v[s] = BigInt::from(r);
                v
            })
            .collect();
        let a = NumericalInvariant::new(&c, r, d, mults).unwrap();
        let g = c.coarse_genus();
        prop_assert_eq!(-euler_pair(&a, &a).unwrap(), (g - 1) * r * r);
    }

    #[test]
    fn balanced_attains_upper_bound((c, k, d) in (arb_curve(), 1i64..=2, -10i64..=10)) {
        let lcm = c.orders().fold(1i64, |acc, e| num_integer::lcm(acc, e as i64));
        let r = lcm * k;
        let mults = c
            .orders()
            .map(|e| vec![BigInt::from(r / e as i64); e as usize])
            .collect();
        let a = NumericalInvariant::new(&c, r, d, mults).unwrap();
        let neg = Rational::from_integer(-euler_pair(&a, &a).unwrap());
        prop_assert_eq!(neg, (stacky_genus(&c) - int(1)) * rank_sq(&a));
    }

    #[test]
    fn serre_duality((a, b) in pair_on_curve()) {
        let omega = canonical_class(a.curve());
        let twisted = tensor_line(&a, &omega).unwrap();
        prop_assert_eq!(euler_pair(&a, &b).unwrap(), -euler_pair(&b, &twisted).unwrap());
        prop_assert_eq!(serre_dual(&a), tensor_line(&dual(&a), &omega).unwrap());
        prop_assert_eq!(serre_dual(&serre_dual(&a)), a);
    }

    #[test]
    fn riemann_roch((a, b) in pair_on_curve()) {
        let lhs = euler_pair(&a, &b).unwrap();
        prop_assert_eq!(lhs, degree_wrt(&a, &b).unwrap() + b.rank() * pairing_with_structure_sheaf(&a));
    }

    #[test]
    fn skyscraper_pairings(a in arb_curve().prop_flat_map(arb_invariant)) {
        let d = skyscraper_class(a.curve());
        prop_assert_eq!(euler_pair(&d, &a).unwrap(), -a.rank());
        prop_assert_eq!(euler_pair(&a, &d).unwrap(), a.rank().clone());
    }

    #[test]
    fn tensor_matches_rotation(
        (a, b, l, k) in arb_curve().prop_flat_map(|c| {
            (arb_invariant(c.clone()), arb_invariant(c.clone()), arb_line(c), -3i64..=3)
        })
    ) {
        let t = tensor_line(&a, &l).unwrap();
        prop_assert_eq!(&t, &tensor_oracle(&a, &l));
        let k = BigInt::from(k);
        let lin = combine(&[(k.clone(), &a), (BigInt::from(1), &b)]).unwrap();
        let expect = combine(&[(k, &t), (BigInt::from(1), &tensor_line(&b, &l).unwrap())]).unwrap();
        prop_assert_eq!(tensor_line(&lin, &l).unwrap(), expect);
        prop_assert_eq!(tensor_line(&t, &l.dual()).unwrap(), a);
    }

    #[test]
    fn dual_matches_reflection((a, b) in pair_on_curve()) {
        prop_assert_eq!(dual(&a), dual_oracle(&a));
        prop_assert_eq!(dual(&dual(&a)), a.clone());
        prop_assert_eq!(dual(&a.checked_add(&b).unwrap()), dual(&a).checked_add(&dual(&b)).unwrap());
    }

    #[test]
    fn line_adjunction((l, m) in arb_curve().prop_flat_map(|c| (arb_line(c.clone()), arb_line(c)))) {
        let c = l.curve().clone();
        let o = NumericalInvariant::structure_sheaf(&c);
        let lhs = euler_pair(&l.to_invariant(), &m.to_invariant()).unwrap();
        let rhs = euler_pair(&o, &m.tensor(&l.dual()).unwrap().to_invariant()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs, line_pairing(&l, &m));
        prop_assert_eq!(l.dual().dual(), l.clone());
        prop_assert_eq!(l.tensor(&l.dual()).unwrap(), LineBundleClass::trivial(&c));
    }
}

#[test]
fn weights_of_positive_classes_are_monotone() {
    let c: Arc<StackyCurve> = StackyCurve::new(1, [("p", 4)]).unwrap();
    let a = NumericalInvariant::from_ints(&c, 5, 0, &[&[1, 2, 0, 2]]).unwrap();
    let w = weights(&a).unwrap();
    assert!(w[0].windows(2).all(|x| x[0] <= x[1]));
    assert!(w[0].iter().all(|x| !x.is_negative() && *x < int(1)));
}
