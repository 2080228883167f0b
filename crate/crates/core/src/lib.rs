//! Exact cell models of composition operators `T_f φ = φ ∘ f` on `L^p` over a
//! wandering set, and the weighted backward shifts they factor onto.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod factor;
pub mod lab;
pub mod measure;
pub mod rational;
pub mod sampling;
pub mod shift;
pub mod step;

pub use error::{Error, Result};
pub use measure::{MeasureSystem, Tails};
pub use rational::{Exponent, Rational};
pub use shift::{derive_weights, RadicalVector, SeqVector, Side, WeightSequence};
pub use step::StepFunction;
