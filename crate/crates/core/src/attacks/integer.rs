//! Integer session keys from per-prime recoveries and Chinese remaindering.
//!
//! The adversary never learns a bound on the entries. Instead a combined
//! lift is accepted once a further prime leaves it unchanged and it has
//! determinant 1.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{CrtState, Field, Integers, PrimeField, PrimeStream};
use crate::error::{Error, Result};
use crate::matlin::{mat_det, Matrix, MatrixJson};
use crate::polysys::GbConfig;
use crate::protocols::BcfrxTranscript;

use super::bcfrx::attack_bcfrx_mod_p;
use super::report::{AttackReport, PrimeRecord, RecoveredKey};

/// Parameters of the integer attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerAttackConfig {
    pub prime_bits: u64,
    pub seed: u64,
    /// Primes drawn before giving up.
    pub max_primes: usize,
    /// Cap on simultaneously tracked cross-prime candidate combinations.
    pub max_branches: usize,
    pub gb: GbConfig,
}

impl Default for IntegerAttackConfig {
    fn default() -> Self {
        IntegerAttackConfig {
            prime_bits: 32,
            seed: 0,
            max_primes: 64,
            max_branches: 4096,
            gb: GbConfig::default(),
        }
    }
}

/// One choice of per-prime key for every prime so far, combined entrywise.
#[derive(Debug, Clone)]
struct Branch {
    crt: Vec<CrtState>,
    lift: Matrix<BigInt>,
}

impl Branch {
    fn start(key: &Matrix<BigUint>, p: &PrimeField) -> Self {
        let crt: Vec<CrtState> = key.entries().iter().map(|x| CrtState::new(x, p)).collect();
        let lift = lift_of(&crt);
        Branch { crt, lift }
    }

    fn extend(&self, key: &Matrix<BigUint>, p: &PrimeField) -> Result<Self> {
        let crt = self
            .crt
            .iter()
            .zip(key.entries())
            .map(|(s, x)| s.extend(x, p))
            .collect::<Result<Vec<_>>>()?;
        let lift = lift_of(&crt);
        Ok(Branch { crt, lift })
    }
}

/// `det = 1` over the integers.
pub fn is_special_linear(m: &Matrix<BigInt>) -> bool {
    mat_det(&Integers, m).is_one()
}

fn lift_of(crt: &[CrtState]) -> Matrix<BigInt> {
    Matrix::from_vec(4, 4, crt.iter().map(|s| s.centered()).collect())
}

/// Cross-prime combination of per-prime key candidates.
#[derive(Debug, Clone)]
pub struct LiftSearch {
    branches: Vec<Branch>,
    max_branches: usize,
}

impl LiftSearch {
    pub fn new(max_branches: usize) -> Self {
        LiftSearch {
            branches: Vec::new(),
            max_branches,
        }
    }

    /// Adds the candidates modulo a fresh prime `p`. Returns the first lift
    /// that `p` left unchanged and that has determinant 1.
    pub fn push(&mut self, keys: &[Matrix<BigUint>], p: &PrimeField) -> Result<Option<Matrix<BigInt>>> {
        if self.branches.is_empty() {
            self.branches = keys.iter().map(|k| Branch::start(k, p)).collect();
            return Ok(None);
        }
        let mut next = Vec::with_capacity(self.branches.len() * keys.len());
        for b in &self.branches {
            for k in keys {
                let nb = b.extend(k, p)?;
                if nb.lift == b.lift && is_special_linear(&nb.lift) {
                    return Ok(Some(nb.lift));
                }
                next.push(nb);
            }
        }
        if next.len() > self.max_branches {
            return Err(Error::AttackFailed(format!(
                "{} candidate combinations exceed the cap of {}",
                next.len(),
                self.max_branches
            )));
        }
        self.branches = next;
        Ok(None)
    }

    pub fn branches(&self) -> usize {
        self.branches.len()
    }
}

/// Keys modulo `p` as canonical residues, plus the per-prime record.
fn keys_mod_prime<F: Field>(
    f: &F,
    p: &PrimeField,
    transcripts: &[BcfrxTranscript<BigInt>],
    gb: &GbConfig,
) -> (Result<Vec<Matrix<BigUint>>>, PrimeRecord) {
    let start = Instant::now();
    let z = Integers;
    let reduced: Vec<_> = transcripts.iter().map(|t| t.reduce(&z, f)).collect();
    let mut record = PrimeRecord {
        prime: p.modulus().to_string(),
        keys: 0,
        candidates: 0,
        combos_tried: 0,
        shape: None,
        diagnostic: None,
        seconds: 0.0,
    };
    let out = attack_bcfrx_mod_p(f, &reduced[0], &reduced[1..], gb).map(|a| {
        record.combos_tried = a.attempts.len();
        if let Some(last) = a.attempts.last() {
            record.candidates = last.candidates;
            record.shape = last.shape;
        }
        a.keys
            .iter()
            .map(|k| k.map(|x| f.to_bigint(x).magnitude().clone()))
            .collect::<Vec<_>>()
    });
    match &out {
        Ok(keys) => record.keys = keys.len(),
        Err(e) => record.diagnostic = Some(e.to_string()),
    }
    record.seconds = start.elapsed().as_secs_f64();
    (out, record)
}

fn lambda_estimate(transcripts: &[BcfrxTranscript<BigInt>], key: &Matrix<BigInt>) -> BigInt {
    let max = transcripts
        .iter()
        .flat_map(|t| [&t.c, &t.d, &t.e])
        .chain([key])
        .flat_map(|m| m.entries().iter().map(|x| x.abs()))
        .max()
        .unwrap_or_default();
    (max + 1) * 2
}

/// Recovers the integer session key of the first transcript. Further
/// transcripts must share the long-term key; with at least two, each prime
/// usually yields a single key. With one, every cross-prime choice of
/// candidate is tracked until one stabilises.
pub fn attack_bcfrx_integer(transcripts: &[BcfrxTranscript<BigInt>], cfg: &IntegerAttackConfig) -> AttackReport {
    let start = Instant::now();
    let mut report = AttackReport::new("bcfrx", cfg.seed);
    if transcripts.is_empty() {
        report.failure = Some("no transcripts".into());
        return report;
    }
    let transcripts: Vec<_> = transcripts.iter().map(|t| t.public()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut stream = PrimeStream::new(cfg.prime_bits);
    let mut search = LiftSearch::new(cfg.max_branches);
    let (mut modp_secs, mut crt_secs) = (0.0, 0.0);
    let mut any_exhausted = false;

    let finish = |report: &mut AttackReport, modp: f64, crt: f64| {
        report.timings.insert("mod_p".into(), modp);
        report.timings.insert("crt".into(), crt);
        report.timings.insert("total".into(), start.elapsed().as_secs_f64());
    };

    while report.primes.len() < cfg.max_primes {
        let p = match stream.next_prime(&mut rng) {
            Ok(p) => p,
            Err(e) => {
                report.failure = Some(e.to_string());
                finish(&mut report, modp_secs, crt_secs);
                return report;
            }
        };
        let (keys, record) = match p.fp64() {
            Some(f) => keys_mod_prime(&f, &p, &transcripts, &cfg.gb),
            None => keys_mod_prime(&p.fp_big(), &p, &transcripts, &cfg.gb),
        };
        modp_secs += record.seconds;
        report.primes.push(record);
        let keys = match keys {
            Ok(k) => k,
            Err(e) => {
                any_exhausted |= matches!(e, Error::BudgetExhausted { .. });
                continue;
            }
        };

        let t = Instant::now();
        let step = search.push(&keys, &p);
        crt_secs += t.elapsed().as_secs_f64();
        match step {
            Ok(Some(k)) => {
                report.success = true;
                report.lambda_estimate = Some(lambda_estimate(&transcripts, &k).to_string());
                report.key = Some(RecoveredKey::Matrix(MatrixJson::encode(&Integers, &k)));
                finish(&mut report, modp_secs, crt_secs);
                return report;
            }
            Ok(None) => {}
            Err(e) => {
                report.failure = Some(e.to_string());
                finish(&mut report, modp_secs, crt_secs);
                return report;
            }
        }
    }
    report.budget_exhausted = any_exhausted;
    report.failure = Some(format!("no stable lift after {} primes", report.primes.len()));
    finish(&mut report, modp_secs, crt_secs);
    report
}

/// The recovered integer key of a successful report.
pub fn report_key_matrix(report: &AttackReport) -> Option<Matrix<BigInt>> {
    match &report.key {
        Some(RecoveredKey::Matrix(m)) => m.integers().ok(),
        _ => None,
    }
}
