//! Hypercyclicity, weak mixing and spaceability criteria.
//!
//! Limit statements over `ℤ` are only decided through the closed forms that
//! geometric (or periodic) tails provide. A system without tails yields
//! [`Verdict::InconclusiveWindow`] instead of a guess.

mod condition_mix;
mod hypercyclic;
mod menet;
mod telescoping;
mod weak_mixing;
mod witness;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::rational::{format_rational, parse_rational, Rational};

pub use condition_mix::{conditionmix_lhs, ConditionMix};
pub use hypercyclic::{hypercyclicity_report, shift_product_criterion};
pub use menet::{menet_unilateral, MenetOutcome};
pub use telescoping::{telescoping_bound_check, TelescopingOutcome};
pub use weak_mixing::{weak_mixing_consistency, DECAY_THRESHOLD};
pub use witness::{cofinite_quotient_witness, CoefficientFunctional, QuotientWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Violated,
    InconclusiveWindow,
}

/// Witness data attached to a verdict: schedules, constants and attained
/// bounds, rationals written as exact strings.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Witness(Map<String, Value>);

impl Witness {
    pub fn new() -> Self {
        Witness::default()
    }

    pub fn rational(mut self, key: &str, q: &Rational) -> Self {
        self.0.insert(key.into(), Value::String(format_rational(q)));
        self
    }

    pub fn text(mut self, key: &str, s: impl Into<String>) -> Self {
        self.0.insert(key.into(), Value::String(s.into()));
        self
    }

    pub fn integer(mut self, key: &str, v: i64) -> Self {
        self.0.insert(key.into(), Value::from(v));
        self
    }

    pub fn float(mut self, key: &str, v: f64) -> Self {
        self.0.insert(key.into(), Value::from(v));
        self
    }

    pub fn boolean(mut self, key: &str, v: bool) -> Self {
        self.0.insert(key.into(), Value::Bool(v));
        self
    }

    pub fn integers(mut self, key: &str, v: &[i64]) -> Self {
        self.0.insert(key.into(), Value::from(v.to_vec()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn get_rational(&self, key: &str) -> Option<Rational> {
        self.0.get(key)?.as_str().and_then(|s| parse_rational(s).ok())
    }

    pub fn get_integer(&self, key: &str) -> Option<i64> {
        self.0.get(key)?.as_i64()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub notes: String,
}

impl CriterionReport {
    pub fn new(criterion: &str, verdict: Verdict, witness: Option<Witness>, notes: impl Into<String>) -> Self {
        CriterionReport {
            criterion: criterion.into(),
            verdict,
            witness,
            notes: notes.into(),
        }
    }

    pub fn is_satisfied(&self) -> bool {
        self.verdict == Verdict::Satisfied
    }
}
