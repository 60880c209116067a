use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::classes::{decompose, LineBundleClass, NumericalInvariant};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `Σ_p Σ_{i=1}^{e_p−1} (Σ_{j=1}^{i} m_{p,j}(α)) · m_{p,i}(γ)`: the weight
/// term of the α-degree, scaled by rank(α) so it stays integral.
fn weighted_multiplicity_sum(alpha: &NumericalInvariant, gamma: &NumericalInvariant) -> BigInt {
    let mut total = BigInt::zero();
    for (ma, mg) in alpha.multiplicities().iter().zip(gamma.multiplicities()) {
        let mut partial = BigInt::zero();
        for i in 1..ma.len() {
            partial += &ma[i];
            total += &partial * &mg[i];
        }
    }
    total
}

/// deg_α(γ) = r_α d_γ + Σ_p Σ_{i≥1} (Σ_{1≤j≤i} m_{p,j}(α)) m_{p,i}(γ).
pub fn degree_wrt(alpha: &NumericalInvariant, gamma: &NumericalInvariant) -> Result<BigInt> {
    alpha.ensure_same_curve(gamma)?;
    Ok(alpha.rank() * gamma.coarse_degree() + weighted_multiplicity_sum(alpha, gamma))
}

/// ⟨α, [O]⟩ = r_α(1 − g) − d_α − Σ_p (r_α − m_{p,0}(α)).
pub fn pairing_with_structure_sheaf(alpha: &NumericalInvariant) -> BigInt {
    let r = alpha.rank();
    let g = alpha.curve().coarse_genus();
    let off_zero: BigInt = alpha.multiplicities().iter().map(|m| r - &m[0]).sum();
    r * (BigInt::one() - g) - alpha.coarse_degree() - off_zero
}

/// The Euler pairing ⟨α, β⟩ = dim Hom − dim Ext¹, extended bilinearly.
pub fn euler_pair(alpha: &NumericalInvariant, beta: &NumericalInvariant) -> Result<BigInt> {
    euler_pair_closed_form(alpha, beta)
}

/// Riemann–Roch route: ⟨α, β⟩ = deg_α(β) + rank(β) · ⟨α, [O]⟩.
pub fn euler_pair_closed_form(
    alpha: &NumericalInvariant,
    beta: &NumericalInvariant,
) -> Result<BigInt> {
    Ok(degree_wrt(alpha, beta)? + beta.rank() * pairing_with_structure_sheaf(alpha))
}

/// Pairing of two line classes:
/// `(d_j − d_i) + 1 − g − #{p : a_{p,j} < a_{p,i}}`.
pub fn line_pairing(li: &LineBundleClass, lj: &LineBundleClass) -> BigInt {
    let drops = li
        .twists()
        .iter()
        .zip(lj.twists())
        .filter(|(ai, aj)| aj < ai)
        .count();
    lj.coarse_degree() - li.coarse_degree() + BigInt::one() - li.curve().coarse_genus() - drops
}

/// Generator route: decompose both sides and expand bilinearly using the
/// line pairing and ⟨L, δ⟩ = 1, ⟨δ, L⟩ = −1, ⟨δ, δ⟩ = 0.
pub fn euler_pair_generators(
    alpha: &NumericalInvariant,
    beta: &NumericalInvariant,
) -> Result<BigInt> {
    alpha.ensure_same_curve(beta)?;
    let a = decompose(alpha);
    let b = decompose(beta);
    let mut total = BigInt::zero();
    for (ca, la) in &a.line_terms {
        for (cb, lb) in &b.line_terms {
            total += ca * cb * line_pairing(la, lb);
        }
    }
    let a_lines: BigInt = a.line_terms.iter().map(|(c, _)| c).sum();
    let b_lines: BigInt = b.line_terms.iter().map(|(c, _)| c).sum();
    total += a_lines * &b.delta_coefficient;
    total -= &a.delta_coefficient * b_lines;
    Ok(total)
}

/// w_{p,0} = 0 and w_{p,i} = (Σ_{j=1}^{i} m_{p,j}) / rank for i ≥ 1.
pub fn weights(alpha: &NumericalInvariant) -> Result<Vec<Vec<Rational>>> {
    if !alpha.rank().is_positive() {
        return Err(Error::NonPositiveRank("weights argument"));
    }
    let r = alpha.rank();
    Ok(alpha
        .multiplicities()
        .iter()
        .map(|m| {
            let mut partial = BigInt::zero();
            let mut w = Vec::with_capacity(m.len());
            w.push(Rational::zero());
            for x in &m[1..] {
                partial += x;
                w.push(Rational::new(partial.clone(), r.clone()));
            }
            w
        })
        .collect())
}
