//! Exact numerical K-theory of tame stacky curves.
//!
//! A stacky curve is modelled by the genus of its coarse space and the
//! orders of its stacky points. On top of that the crate provides the
//! numerical Grothendieck group (ranks, coarse degrees and multiplicity
//! vectors), the Euler pairing, slopes with respect to a stability
//! parameter, Harder–Narasimhan types of split bundles, wall detection and
//! the effective bounds governing the determinantal line bundle.
//!
//! All arithmetic is exact: integers are [`num_bigint::BigInt`] and
//! fractions are [`Rational`].

pub mod bounds;
pub mod curve;
pub mod error;
pub mod io;
pub mod ktheory;
pub mod rational;
pub mod stability;
pub mod walls;

#[cfg(test)]
pub(crate) mod testing;

pub use bounds::{
    codim_bound, detline_correction, effective_bounds, hom_vanishing_bound, stack_dims,
    BoundsReport, FormalPointSum, StackDims,
};
pub use curve::{
    canonical_class, stacky_genus, validate_curve, RawCurve, RawPoint, StackyCurve, StackyPoint,
    Violation,
};
pub use error::{Error, Result};
pub use ktheory::{
    combine, decompose, degree_wrt, dual, euler_pair, euler_pair_closed_form,
    euler_pair_generators, invariant_of_line, serre_dual, skyscraper_class, tensor_line, weights,
    GeneratorCombination, LineBundleClass, NumericalInvariant,
};
pub use rational::{render_rational, Rational};
pub use stability::{
    boundedness_thresholds, hn_type, mu_max_sum, orthogonalize, slope, slope_compare,
    BoundednessThresholds, HnBlock, HnType, LineSum,
};
pub use walls::{
    enumerate_subinvariants, is_on_wall, walls_on_segment, SegmentWall, SubinvariantFilter,
    WallLocus, WallReport,
};
