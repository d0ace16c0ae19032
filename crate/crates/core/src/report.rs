use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Evidence for a checked claim: the predicted value next to the observed
/// one, plus witnesses when they disagree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub claim: String,
    pub formula_value: Value,
    pub observed_value: Value,
    pub witnesses: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl Report {
    pub fn new(claim: impl Into<String>, formula: impl Into<Value>, observed: impl Into<Value>) -> Self {
        Report {
            claim: claim.into(),
            formula_value: formula.into(),
            observed_value: observed.into(),
            witnesses: Vec::new(),
            details: None,
        }
    }

    pub fn with_witness(mut self, w: Value) -> Self {
        self.witnesses.push(w);
        self
    }

    pub fn with_details(mut self, d: Value) -> Self {
        self.details = Some(d);
        self
    }

    pub fn holds(&self) -> bool {
        self.formula_value == self.observed_value
    }
}

pub(crate) fn factorial(k: u64) -> u128 {
    (1..=k as u128).product()
}

pub(crate) fn big(v: u128) -> Value {
    match u64::try_from(v) {
        Ok(s) => Value::from(s),
        Err(_) => Value::String(v.to_string()),
    }
}
