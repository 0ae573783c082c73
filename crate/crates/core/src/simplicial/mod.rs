//! Bar constructions and Eilenberg–MacLane homology.

pub mod bar;

pub use bar::{
    bar_complex, em_homology, normalized_bar_complex, normalized_chains, Coefficients, EmHomology, Simplex,
    TaggedComplex,
};
