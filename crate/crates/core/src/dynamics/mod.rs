//! Continued-fraction dynamics of the Gauss map and hyperbolic classes of the
//! modular group.

mod classes;
mod surd;
mod word;

pub use classes::{census_csv, enumerate_classes, norm_from_trace, reduced_matrix, HyperbolicClass};
pub use surd::QuadraticSurd;
pub use word::{
    canonical_rotation, enumerate_fix_words, gauss_map, orbit_product, orbit_product_from_trace, periodic_point,
    primitive_period, trace_polynomial, word_matrix, word_trace, CfWord, TracePolynomial,
};

/// Largest number of words any enumeration is allowed to produce.
pub const WORD_LIMIT: u128 = 50_000_000;
