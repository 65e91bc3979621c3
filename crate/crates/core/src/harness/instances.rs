use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{gen_prime, Field, Integers, PrimeField};
use crate::attacks::{
    attack_bcfrx_integer, attack_bcfrx_mod_p, attack_hks, attack_ru, hks_public_sampler, report_key_matrix,
    AttackReport, IntegerAttackConfig, PrimeRecord, RecoveredKey,
};
use crate::error::{Error, Result};
use crate::matlin::{sample_sl, MatrixJson, VectorJson};
use crate::polysys::{Budget, GbConfig};
use crate::protocols::doc::InstanceDoc;
use crate::protocols::{bcfrx_keygen, bcfrx_run, hks_setup, ru_setup, run_lambda};

use super::{ExperimentConfig, ProtocolId};

/// One instance drawn exactly as trial 0 of `cfg` would draw it.
pub fn generate_instance(cfg: &ExperimentConfig, with_truth: bool) -> Result<InstanceDoc> {
    let mut probe = cfg.clone();
    probe.trials = probe.trials.max(1);
    probe.validate()?;
    let mut rng = cfg.trial_rng(0);
    if cfg.protocol == ProtocolId::Bcfrx {
        let z = Integers;
        let key = bcfrx_keygen(&z, cfg.word_len, &mut rng);
        let k = sample_sl(&z, 4, cfg.word_len, &mut rng);
        let runs: Vec<_> = (0..cfg.transcripts)
            .map(|_| bcfrx_run(&z, &key, &k, cfg.word_len, &mut rng))
            .collect();
        let lambda = run_lambda(&key, &runs).lambda();
        return InstanceDoc::from_bcfrx_integer(cfg.word_len, &key, &runs, Some(lambda), with_truth);
    }
    let p = gen_prime(cfg.prime_bits, &mut rng)?;
    fn with_field<F: Field>(
        f: &F,
        cfg: &ExperimentConfig,
        rng: &mut ChaCha8Rng,
        with_truth: bool,
    ) -> Result<InstanceDoc> {
        match cfg.protocol {
            ProtocolId::BcfrxP => {
                let key = bcfrx_keygen(f, cfg.word_len, rng);
                let k = sample_sl(f, 4, cfg.word_len, rng);
                let runs: Vec<_> = (0..cfg.transcripts).map(|_| bcfrx_run(f, &key, &k, cfg.word_len, rng)).collect();
                InstanceDoc::from_bcfrx_mod_p(f, cfg.word_len, &key, &runs, with_truth)
            }
            ProtocolId::Hks => Ok(InstanceDoc::from_hks(
                f,
                &hks_setup(f, cfg.dim, cfg.exp_n, cfg.degree.unwrap_or(cfg.dim), rng),
                with_truth,
            )),
            ProtocolId::Ru => Ok(InstanceDoc::from_ru(
                f,
                &ru_setup(f, cfg.dim, cfg.degree.unwrap_or(3), rng),
                with_truth,
            )),
            ProtocolId::Bcfrx => unreachable!("handled over the integers"),
        }
    }
    match p.fp64() {
        Some(f) => with_field(&f, cfg, &mut rng, with_truth),
        None => with_field(&p.fp_big(), cfg, &mut rng, with_truth),
    }
}

/// Knobs of an attack on a stored instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttackOptions {
    /// Prime size for the integer transport attack.
    pub prime_bits: u64,
    pub seed: u64,
    /// Sampler draws for HKS.
    pub samples: usize,
    pub budget: Budget,
}

impl Default for AttackOptions {
    fn default() -> Self {
        AttackOptions {
            prime_bits: 32,
            seed: 0,
            samples: 8,
            budget: Budget::default(),
        }
    }
}

/// Attacks the public part of `doc`. Ground truth, if present, is only
/// consulted afterwards to fill in `matches_truth`.
pub fn attack_instance(doc: &InstanceDoc, opts: &AttackOptions) -> Result<AttackReport> {
    let public = doc.public_only();
    let gb = GbConfig {
        budget: opts.budget,
        ..GbConfig::default()
    };
    if let InstanceDoc::Bcfrx { .. } = doc {
        let runs = public.bcfrx_integer()?;
        let cfg = IntegerAttackConfig {
            prime_bits: opts.prime_bits,
            seed: opts.seed,
            gb,
            ..IntegerAttackConfig::default()
        };
        let mut report = attack_bcfrx_integer(&runs, &cfg);
        if doc.has_truth() {
            let truth = doc.bcfrx_integer()?;
            let k = truth[0].truth.as_ref().map(|s| s.k.clone());
            report.matches_truth = Some(report.success && report_key_matrix(&report) == k);
        }
        return Ok(report);
    }
    let modulus = doc.modulus()?.ok_or_else(|| Error::Schema("missing modulus".into()))?;
    let p = PrimeField::new(modulus)?;
    match p.fp64() {
        Some(f) => attack_over(&f, doc, &public, opts, &gb),
        None => attack_over(&p.fp_big(), doc, &public, opts, &gb),
    }
}

fn attack_over<F: Field>(
    f: &F,
    doc: &InstanceDoc,
    public: &InstanceDoc,
    opts: &AttackOptions,
    gb: &GbConfig,
) -> Result<AttackReport> {
    let start = Instant::now();
    let mut report = AttackReport::new(doc.protocol(), opts.seed);
    match doc {
        InstanceDoc::BcfrxP { .. } => {
            let runs = public.bcfrx_mod_p(f)?;
            let mut record = PrimeRecord {
                prime: f.modulus().to_string(),
                keys: 0,
                candidates: 0,
                combos_tried: 0,
                shape: None,
                diagnostic: None,
                seconds: 0.0,
            };
            match attack_bcfrx_mod_p(f, &runs[0], &runs[1..], gb) {
                Ok(a) => {
                    let last = a.attempts.last().expect("successful attack made an attempt");
                    record.keys = a.keys.len();
                    record.candidates = last.candidates;
                    record.combos_tried = a.attempts.len();
                    record.shape = last.shape;
                    if a.keys.len() == 1 {
                        report.success = true;
                        report.key = Some(RecoveredKey::Matrix(MatrixJson::encode(f, &a.keys[0])));
                    } else {
                        report.failure = Some(format!(
                            "{} candidate keys; a second transcript would single one out",
                            a.keys.len()
                        ));
                    }
                    if doc.has_truth() {
                        let truth = doc.bcfrx_mod_p(f)?;
                        let k = &truth[0].truth.as_ref().expect("truth present").k;
                        report.matches_truth = Some(report.success && a.keys[0] == *k);
                    }
                }
                Err(e) => {
                    report.budget_exhausted = matches!(e, Error::BudgetExhausted { .. });
                    record.diagnostic = Some(e.to_string());
                    report.failure = Some(e.to_string());
                }
            }
            record.seconds = start.elapsed().as_secs_f64();
            report.primes.push(record);
        }
        InstanceDoc::Hks { .. } => {
            let inst = public.hks(f)?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let out = attack_hks(f, &inst.public, hks_public_sampler(f, &inst.public, &mut rng), opts.samples);
            finish_linear(f, doc.hks(f)?.truth.map(|t| t.key), out, &mut report);
        }
        InstanceDoc::Ru { .. } => {
            let inst = public.ru(f)?;
            finish_linear(f, doc.ru(f)?.truth.map(|t| t.key), attack_ru(f, &inst.public), &mut report);
        }
        InstanceDoc::Bcfrx { .. } => unreachable!("handled over the integers"),
    }
    report.timings.insert("total".into(), start.elapsed().as_secs_f64());
    Ok(report)
}

fn finish_linear<F: Field>(
    f: &F,
    truth: Option<Vec<F::Elem>>,
    out: Result<crate::attacks::LinearAttack<F::Elem>>,
    report: &mut AttackReport,
) {
    match out {
        Ok(a) => {
            report.success = true;
            report.matches_truth = truth.map(|k| k == a.key);
            report.key = Some(RecoveredKey::Vector(VectorJson::encode(f, &a.key)));
        }
        Err(e) => report.failure = Some(e.to_string()),
    }
}
