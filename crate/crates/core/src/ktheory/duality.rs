use super::classes::{decompose, skyscraper_class, LineBundleClass, NumericalInvariant};
use crate::curve::canonical_class;
use crate::error::{Error, Result};

/// α ⊗ L, defined on generators (lines tensor with carries, δ ⊗ L = δ)
/// and extended additively.
pub fn tensor_line(
    alpha: &NumericalInvariant,
    line: &LineBundleClass,
) -> Result<NumericalInvariant> {
    let curve = alpha.curve();
    if !super::classes::same_curve(curve, line.curve()) {
        return Err(Error::MixedCurves);
    }
    let parts = decompose(alpha);
    let mut acc = skyscraper_class(curve).scaled(&parts.delta_coefficient);
    for (c, l) in &parts.line_terms {
        acc = acc.add_unchecked(&l.tensor(line)?.to_invariant().scaled(c));
    }
    Ok(acc)
}

/// The derived dual: `L^∨` on line generators and δ^∨ = −δ.
pub fn dual(alpha: &NumericalInvariant) -> NumericalInvariant {
    let curve = alpha.curve();
    let parts = decompose(alpha);
    let mut acc = skyscraper_class(curve).scaled(&-&parts.delta_coefficient);
    for (c, l) in &parts.line_terms {
        acc = acc.add_unchecked(&l.dual().to_invariant().scaled(c));
    }
    acc
}

/// SD(α) = α^∨ ⊗ ω.
pub fn serre_dual(alpha: &NumericalInvariant) -> NumericalInvariant {
    let omega = canonical_class(alpha.curve());
    tensor_line(&dual(alpha), &omega).expect("canonical class lives on the same curve")
}
