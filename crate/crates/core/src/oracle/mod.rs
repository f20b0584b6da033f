//! Independent verification by explicit blow-ups with exact rational arithmetic.

pub mod interp;
pub mod model;
pub mod poly;
pub mod witness;

pub use interp::{interpolate, MonomialBasis};
pub use model::{realize_model, realize_model_with, ChartCase, LocalModel, Step};
pub use poly::{Poly, Vars};
pub use witness::{
    sample_check, witness_search, SampleReport, Witness, WitnessMode, WitnessOutcome,
};
