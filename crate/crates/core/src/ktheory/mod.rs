//! The numerical Grothendieck group K₀^num of a stacky curve.
//!
//! A class is recorded as (rank, coarse degree, multiplicity vectors); the
//! multiplicities at each point sum to the rank. Slot `i` of the vector at
//! a point of order `e` is the character of weight `i`; the orientation is
//! fixed so that `O(p/e)` has its single multiplicity in slot 1.

pub(crate) mod classes;
mod duality;
mod pairing;

pub use classes::{
    combine, decompose, invariant_of_line, skyscraper_class, GeneratorCombination, LineBundleClass,
    NumericalInvariant,
};
pub use duality::{dual, serre_dual, tensor_line};
pub use pairing::{
    degree_wrt, euler_pair, euler_pair_closed_form, euler_pair_generators, line_pairing,
    pairing_with_structure_sheaf, weights,
};

#[cfg(test)]
mod properties;
