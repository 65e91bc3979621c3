use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::matlin::{MatrixJson, VectorJson};
use crate::polysys::ShapeStats;

/// A recovered session key: a matrix for the transport scheme, a vector for
/// the key agreements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveredKey {
    Matrix(MatrixJson),
    Vector(VectorJson),
}

/// What happened modulo one prime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub prime: String,
    /// Distinct session keys recovered modulo this prime.
    pub keys: usize,
    /// Candidate equivalent keys in the combination that succeeded.
    pub candidates: usize,
    pub combos_tried: usize,
    pub shape: Option<ShapeStats>,
    pub diagnostic: Option<String>,
    pub seconds: f64,
}

/// Outcome of one attack run. `success` implies every consistency check the
/// attack performs passed for `key`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub protocol: String,
    pub success: bool,
    pub key: Option<RecoveredKey>,
    pub primes: Vec<PrimeRecord>,
    /// `2 (max |entry| + 1)` over the public matrices and the recovered key.
    pub lambda_estimate: Option<String>,
    /// Wall-clock seconds by stage.
    pub timings: BTreeMap<String, f64>,
    pub seed: u64,
    pub failure: Option<String>,
    pub budget_exhausted: bool,
    /// Filled in when ground truth was available to compare against.
    pub matches_truth: Option<bool>,
}

impl AttackReport {
    pub fn new(protocol: &str, seed: u64) -> Self {
        AttackReport {
            protocol: protocol.to_string(),
            success: false,
            key: None,
            primes: Vec::new(),
            lambda_estimate: None,
            timings: BTreeMap::new(),
            seed,
            failure: None,
            budget_exhausted: false,
            matches_truth: None,
        }
    }

    pub fn candidate_counts(&self) -> Vec<usize> {
        self.primes.iter().map(|p| p.keys).collect()
    }
}
