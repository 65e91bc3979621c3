//! Experiment driver: seeded trials of honest runs followed by attacks,
//! aggregated into reproducible reports.

mod instances;
mod verify;

pub use instances::{attack_instance, generate_instance, AttackOptions};
pub use verify::{verify_transcript_file, Diagnostics, DocumentKind};

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gen_prime, Field, Integers};
use crate::attacks::{
    attack_bcfrx_integer, attack_bcfrx_mod_p, attack_hks, attack_ru, audit_computation, hks_public_sampler,
    report_key_matrix, BasisAudit, IntegerAttackConfig,
};
use crate::error::{Error, Result};
use crate::matlin::sample_sl;
use crate::polysys::{Budget, GbConfig, ShapeStats};
use crate::protocols::{
    alice_finish, bcfrx_keygen, bcfrx_run, hks_bob_key, hks_setup, ru_bob_key, ru_setup, run_lambda,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolId {
    /// Transport over `SL_4(Z)`, attacked prime by prime.
    Bcfrx,
    /// Transport over `SL_4(Z_p)` for one prime.
    BcfrxP,
    Hks,
    Ru,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 4] = [ProtocolId::Bcfrx, ProtocolId::BcfrxP, ProtocolId::Hks, ProtocolId::Ru];

    pub fn as_str(&self) -> &'static str {
        match self {
            ProtocolId::Bcfrx => "bcfrx",
            ProtocolId::BcfrxP => "bcfrx_p",
            ProtocolId::Hks => "hks",
            ProtocolId::Ru => "ru",
        }
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProtocolId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown protocol {s:?} (expected bcfrx, bcfrx_p, hks or ru)")))
    }
}

/// Everything that determines an experiment. Two runs with equal configs
/// produce equal reports apart from timings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub protocol: ProtocolId,
    pub trials: usize,
    /// Matrix size of the key agreements (`m` for HKS, `n` for RU).
    pub dim: usize,
    /// Exponent bound of `x + ... + x^(n-1)` in HKS.
    pub exp_n: usize,
    /// Secret polynomial degree; `None` picks `dim` for HKS and 3 for RU.
    pub degree: Option<usize>,
    pub prime_bits: u64,
    pub word_len: usize,
    /// Sampler draws in the HKS attack.
    pub samples: usize,
    pub seed: u64,
    /// Transcripts under one long-term key in the transport experiments.
    pub transcripts: usize,
    pub budget: Budget,
    /// Re-verify every Gröbner basis of the transport attacks.
    pub audit_bases: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            protocol: ProtocolId::BcfrxP,
            trials: 1,
            dim: 6,
            exp_n: 5,
            degree: None,
            prime_bits: 32,
            word_len: 12,
            samples: 8,
            seed: 0,
            transcripts: 2,
            budget: Budget::default(),
            audit_bases: false,
            threads: None,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let usage = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.trials == 0 {
            return usage("trials must be positive");
        }
        if self.prime_bits < 3 {
            return usage("prime_bits must be at least 3");
        }
        match self.protocol {
            ProtocolId::Bcfrx | ProtocolId::BcfrxP if self.transcripts == 0 => usage("transcripts must be positive"),
            ProtocolId::Hks | ProtocolId::Ru if self.dim < 2 => usage("dim must be at least 2"),
            ProtocolId::Hks if self.exp_n < 2 => usage("exp_n must be at least 2"),
            ProtocolId::Hks if self.samples == 0 => usage("samples must be positive"),
            _ if self.degree == Some(0) && self.protocol == ProtocolId::Hks => usage("degree must be positive"),
            _ if self.threads == Some(0) => usage("threads must be positive"),
            _ => Ok(()),
        }
    }

    fn gb(&self) -> GbConfig {
        GbConfig {
            budget: self.budget,
            ..GbConfig::default()
        }
    }

    /// Generator of trial `index`: an independent stream of the seeded cipher.
    pub fn trial_rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

/// One trial: setup, honest run, attack, comparison with ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    /// The honest parties agreed on the key.
    pub honest: bool,
    /// The attack recovered the honest key (uniquely, when that is expected).
    pub success: bool,
    pub prime: Option<String>,
    /// Candidate equivalent keys in the successful combination.
    pub candidates: Option<usize>,
    /// Distinct session keys returned.
    pub keys: Option<usize>,
    /// The honest key is among those returned.
    pub key_found: Option<bool>,
    pub combos_tried: Option<usize>,
    pub shape: Option<ShapeStats>,
    pub audit: Option<BasisAudit>,
    pub primes_used: Option<usize>,
    pub lambda_log2: Option<f64>,
    /// `ceil(log2 Λ / (prime_bits - 1)) + 2`.
    pub prime_bound: Option<usize>,
    pub samples_used: Option<usize>,
    pub error: Option<String>,
    pub budget_exhausted: bool,
    pub timings: BTreeMap<String, f64>,
}

impl TrialRecord {
    fn new(index: usize) -> Self {
        TrialRecord {
            index,
            honest: false,
            success: false,
            prime: None,
            candidates: None,
            keys: None,
            key_found: None,
            combos_tried: None,
            shape: None,
            audit: None,
            primes_used: None,
            lambda_log2: None,
            prime_bound: None,
            samples_used: None,
            error: None,
            budget_exhausted: false,
            timings: BTreeMap::new(),
        }
    }
}

/// Per-trial records and the aggregates derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialRecord>,
    pub successes: usize,
    pub success_rate: f64,
    pub honest_rate: f64,
    /// Trials by eliminant degree.
    pub eliminant_degrees: BTreeMap<usize, usize>,
    /// Trials by largest cofactor degree.
    pub cofactor_degrees: BTreeMap<usize, usize>,
    /// Trials by candidate count.
    pub candidate_counts: BTreeMap<usize, usize>,
    pub elapsed: f64,
}

impl TrialSummary {
    pub fn from_records(config: ExperimentConfig, mut trials: Vec<TrialRecord>, elapsed: f64) -> Self {
        trials.sort_by_key(|t| t.index);
        let n = trials.len().max(1) as f64;
        let successes = trials.iter().filter(|t| t.success).count();
        let honest = trials.iter().filter(|t| t.honest).count();
        let histogram = |f: &dyn Fn(&TrialRecord) -> Option<usize>| {
            let mut h = BTreeMap::new();
            for t in &trials {
                if let Some(v) = f(t) {
                    *h.entry(v).or_insert(0) += 1;
                }
            }
            h
        };
        let eliminant_degrees = histogram(&|t| t.shape.map(|s| s.eliminant_degree));
        let cofactor_degrees = histogram(&|t| t.shape.map(|s| s.max_cofactor_degree));
        let candidate_counts = histogram(&|t| t.candidates);
        TrialSummary {
            config,
            successes,
            success_rate: successes as f64 / n,
            honest_rate: honest as f64 / n,
            eliminant_degrees,
            cofactor_degrees,
            candidate_counts,
            trials,
            elapsed,
        }
    }

    /// The report with every wall-clock field zeroed, for comparing runs.
    pub fn canonical(&self) -> TrialSummary {
        let mut out = self.clone();
        out.elapsed = 0.0;
        for t in &mut out.trials {
            t.timings.clear();
        }
        out
    }

    /// Fraction of trials satisfying `pred`.
    pub fn rate(&self, pred: impl Fn(&TrialRecord) -> bool) -> f64 {
        self.trials.iter().filter(|t| pred(t)).count() as f64 / self.trials.len().max(1) as f64
    }
}

fn elapsed_into(timings: &mut BTreeMap<String, f64>, stage: &str, since: Instant) {
    timings.insert(stage.to_string(), since.elapsed().as_secs_f64());
}

fn transport_integer(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, rec: &mut TrialRecord) {
    let z = Integers;
    let t0 = Instant::now();
    let key = bcfrx_keygen(&z, cfg.word_len, rng);
    let k = sample_sl(&z, 4, cfg.word_len, rng);
    let runs: Vec<_> = (0..cfg.transcripts).map(|_| bcfrx_run(&z, &key, &k, cfg.word_len, rng)).collect();
    rec.honest = runs.iter().all(|t| {
        let s = t.truth.as_ref().expect("honest runs carry truth");
        alice_finish(&z, &s.a, &s.a2, &t.e).as_ref() == Ok(&k)
    });
    let lambda = run_lambda(&key, &runs).log2();
    rec.lambda_log2 = Some(lambda);
    rec.prime_bound = Some((lambda / (cfg.prime_bits - 1) as f64).ceil() as usize + 2);
    elapsed_into(&mut rec.timings, "honest", t0);

    let attack_cfg = IntegerAttackConfig {
        prime_bits: cfg.prime_bits,
        seed: rng.gen(),
        gb: cfg.gb(),
        ..IntegerAttackConfig::default()
    };
    let report = attack_bcfrx_integer(&runs, &attack_cfg);
    rec.primes_used = Some(report.primes.len());
    rec.keys = report.primes.iter().map(|p| p.keys).max();
    rec.budget_exhausted = report.budget_exhausted;
    rec.error = report.failure.clone();
    for (stage, secs) in &report.timings {
        rec.timings.insert(format!("attack_{stage}"), *secs);
    }
    let got = report_key_matrix(&report);
    rec.key_found = Some(got.as_ref() == Some(&k));
    rec.success = report.success && got.as_ref() == Some(&k);
}

fn transport_mod_p<F: Field>(f: &F, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, rec: &mut TrialRecord) {
    let t0 = Instant::now();
    let key = bcfrx_keygen(f, cfg.word_len, rng);
    let k = sample_sl(f, 4, cfg.word_len, rng);
    let runs: Vec<_> = (0..cfg.transcripts).map(|_| bcfrx_run(f, &key, &k, cfg.word_len, rng)).collect();
    rec.honest = runs.iter().all(|t| {
        let s = t.truth.as_ref().expect("honest runs carry truth");
        alice_finish(f, &s.a, &s.a2, &t.e).as_ref() == Ok(&k)
    });
    elapsed_into(&mut rec.timings, "honest", t0);

    let t1 = Instant::now();
    let out = attack_bcfrx_mod_p(f, &runs[0], &runs[1..], &cfg.gb());
    elapsed_into(&mut rec.timings, "attack", t1);
    let attack = match out {
        Ok(a) => a,
        Err(e) => {
            rec.budget_exhausted = matches!(e, Error::BudgetExhausted { .. });
            rec.error = Some(e.to_string());
            rec.key_found = Some(false);
            return;
        }
    };
    let last = attack.attempts.last().expect("a successful attack made an attempt");
    rec.combos_tried = Some(attack.attempts.len());
    rec.candidates = Some(last.candidates);
    rec.shape = last.shape;
    rec.keys = Some(attack.keys.len());
    let found = attack.keys.contains(&k);
    rec.key_found = Some(found);
    rec.success = found && (cfg.transcripts == 1 || attack.keys.len() == 1);
    rec.timings.insert("groebner".into(), attack.attempts.iter().map(|a| a.seconds).sum());
    if cfg.audit_bases {
        if let (Some(sys), Some(comp)) = (&attack.system, &attack.computation) {
            let t2 = Instant::now();
            rec.audit = Some(audit_computation(sys, last.combo, comp));
            elapsed_into(&mut rec.timings, "audit", t2);
        }
    }
}

fn hks_trial<F: Field>(f: &F, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, rec: &mut TrialRecord) {
    let t0 = Instant::now();
    let inst = hks_setup(f, cfg.dim, cfg.exp_n, cfg.degree.unwrap_or(cfg.dim), rng);
    let truth = inst.truth.as_ref().expect("setup keeps truth");
    rec.honest = hks_bob_key(f, &inst.public, &truth.k) == truth.key;
    elapsed_into(&mut rec.timings, "honest", t0);
    let t1 = Instant::now();
    let out = attack_hks(f, &inst.public, hks_public_sampler(f, &inst.public, rng), cfg.samples);
    elapsed_into(&mut rec.timings, "attack", t1);
    match out {
        Ok(a) => {
            rec.samples_used = Some(a.samples);
            rec.success = a.key == truth.key;
            rec.key_found = Some(rec.success);
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
}

fn ru_trial<F: Field>(f: &F, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, rec: &mut TrialRecord) {
    let t0 = Instant::now();
    let inst = ru_setup(f, cfg.dim, cfg.degree.unwrap_or(3), rng);
    let truth = inst.truth.as_ref().expect("setup keeps truth");
    rec.honest = ru_bob_key(f, &inst.public, &truth.f_b) == truth.key;
    elapsed_into(&mut rec.timings, "honest", t0);
    let t1 = Instant::now();
    let out = attack_ru(f, &inst.public);
    elapsed_into(&mut rec.timings, "attack", t1);
    match out {
        Ok(a) => {
            rec.success = a.key == truth.key;
            rec.key_found = Some(rec.success);
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
}

/// Runs trial `index` of `cfg`; the outcome depends only on `cfg` and `index`.
pub fn run_trial(cfg: &ExperimentConfig, index: usize) -> TrialRecord {
    let start = Instant::now();
    let mut rng = cfg.trial_rng(index);
    let mut rec = TrialRecord::new(index);
    if cfg.protocol == ProtocolId::Bcfrx {
        transport_integer(cfg, &mut rng, &mut rec);
    } else {
        let p = match gen_prime(cfg.prime_bits, &mut rng) {
            Ok(p) => p,
            Err(e) => {
                rec.error = Some(e.to_string());
                return rec;
            }
        };
        rec.prime = Some(p.modulus().to_string());
        macro_rules! dispatch {
            ($f:expr) => {
                match cfg.protocol {
                    ProtocolId::BcfrxP => transport_mod_p($f, cfg, &mut rng, &mut rec),
                    ProtocolId::Hks => hks_trial($f, cfg, &mut rng, &mut rec),
                    ProtocolId::Ru => ru_trial($f, cfg, &mut rng, &mut rec),
                    ProtocolId::Bcfrx => unreachable!(),
                }
            };
        }
        match p.fp64() {
            Some(f) => dispatch!(&f),
            None => dispatch!(&p.fp_big()),
        }
    }
    elapsed_into(&mut rec.timings, "total", start);
    rec
}

/// Runs every trial on a worker pool and writes the report to `cfg.out` if set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<TrialSummary> {
    cfg.validate()?;
    let start = Instant::now();
    let run = || (0..cfg.trials).into_par_iter().map(|i| run_trial(cfg, i)).collect::<Vec<_>>();
    let records = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(run),
        None => run(),
    };
    let summary = TrialSummary::from_records(cfg.clone(), records, start.elapsed().as_secs_f64());
    if let Some(path) = &cfg.out {
        let text = serde_json::to_string_pretty(&summary).map_err(|e| Error::Schema(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_is_a_usage_error() {
        let cfg = ExperimentConfig {
            trials: 0,
            ..Default::default()
        };
        assert!(matches!(run_experiment(&cfg), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn ru_experiment_succeeds_every_time() {
        let cfg = ExperimentConfig {
            protocol: ProtocolId::Ru,
            trials: 10,
            dim: 4,
            seed: 1,
            prime_bits: 31,
            ..Default::default()
        };
        let s = run_experiment(&cfg).unwrap();
        assert_eq!(s.successes, 10);
        assert_eq!(s.honest_rate, 1.0);
    }

    #[test]
    fn transport_mod_p_experiment_gives_unique_keys() {
        let cfg = ExperimentConfig {
            protocol: ProtocolId::BcfrxP,
            trials: 5,
            prime_bits: 32,
            transcripts: 2,
            audit_bases: true,
            ..Default::default()
        };
        let s = run_experiment(&cfg).unwrap();
        assert_eq!(s.successes, 5);
        assert!(s.trials.iter().all(|t| t.candidates == Some(1) && t.audit.unwrap().sound));
    }

    #[test]
    fn reports_are_deterministic_modulo_timing() {
        let cfg = ExperimentConfig {
            protocol: ProtocolId::Hks,
            trials: 6,
            dim: 4,
            seed: 42,
            threads: Some(3),
            ..Default::default()
        };
        let a = run_experiment(&cfg).unwrap().canonical();
        let b = run_experiment(&ExperimentConfig { threads: Some(1), ..cfg }).unwrap().canonical();
        assert_eq!(a.trials, b.trials);
        assert_eq!(a.success_rate, b.success_rate);
    }

    #[test]
    fn protocol_names_round_trip() {
        for p in ProtocolId::ALL {
            assert_eq!(p.as_str().parse::<ProtocolId>().unwrap(), p);
        }
        assert!("shamir".parse::<ProtocolId>().is_err());
    }
}
