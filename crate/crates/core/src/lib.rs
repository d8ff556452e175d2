//! Exact free-probability calculus over the N-th diagonal algebra.
//!
//! The crate computes moments, free cumulants, R- and S-transforms, and free
//! additive/multiplicative convolutions of diagonal-algebra-valued random
//! variables, entirely in exact rational arithmetic. Every transform
//! identity is backed by an independent combinatorial route over the
//! noncrossing-partition lattice, and [`selfcheck`] runs the whole invariant
//! suite on demand.

pub mod dalg;
pub mod json;
pub mod ncpart;
pub mod rational;
pub mod selfcheck;
pub mod series;
pub mod stardist;
pub mod transforms;

pub use dalg::{DalgError, DiagonalScalar};
pub use ncpart::{
    catalan, enumerate_noncrossing, is_noncrossing, mobius_brute, mobius_full,
    noncrossing_partitions, MobiusValue, NcError, NoncrossingPartition,
};
pub use rational::{Rat, RationalError};
pub use series::{
    mob_series, multiplicative_extension, zeta_series, SeriesError, TruncatedSeries,
};
pub use stardist::{
    all_words, check_freeness, classify_even, classify_r_diagonal, classify_semicircular,
    classify_semicircular_star, divide_free, joint_from_cumulant_fn, joint_from_free_pair,
    mixed_cumulant, product_moments_through_joint, sum_moments_through_joint, Classification,
    ClassifyOutcome, FreenessReport, JointDistribution, StarError, StarLetter, StarWord,
};
pub use transforms::{
    cumulants_to_moments, f_homomorphism, free_add_convolve, free_mult_convolve,
    free_mult_convolve_all, moment_series, moments_to_cumulants, product_cumulants, r_transform,
    s_transform, CumulantSequence, Distribution, MultConvolutionReport, MultMethod,
    TransformError,
};
