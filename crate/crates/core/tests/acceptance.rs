//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::time::Instant;

use matbreak::arith::{gen_prime, Integers};
use matbreak::harness::{run_experiment, ExperimentConfig, ProtocolId, TrialSummary};
use matbreak::matlin::sample_sl;
use matbreak::protocols::{alice_finish, bcfrx_keygen, bcfrx_run, hks_bob_key, hks_setup, ru_bob_key, ru_setup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(n: usize, title: &str, o: &Outcome) {
    println!("criterion {n} {}: {title} | {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
}

fn pct(x: f64) -> String {
    format!("{:.1}%", 100.0 * x)
}

fn experiment(cfg: ExperimentConfig) -> TrialSummary {
    run_experiment(&cfg).expect("valid configuration")
}

fn honest_runs() -> Outcome {
    const RUNS: u64 = 1000;
    let start = Instant::now();
    let z = Integers;
    let integer = (0..RUNS)
        .into_par_iter()
        .filter(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let key = bcfrx_keygen(&z, 12, &mut rng);
            let k = sample_sl(&z, 4, 12, &mut rng);
            let t = bcfrx_run(&z, &key, &k, 12, &mut rng);
            let sec = t.truth.as_ref().unwrap();
            alice_finish(&z, &sec.a, &sec.a2, &t.e).as_ref() == Ok(&k)
        })
        .count();
    let modular = (0..RUNS)
        .into_par_iter()
        .filter(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let f = gen_prime(64, &mut rng).unwrap().fp64().unwrap();
            let key = bcfrx_keygen(&f, 12, &mut rng);
            let k = sample_sl(&f, 4, 12, &mut rng);
            let t = bcfrx_run(&f, &key, &k, 12, &mut rng);
            let sec = t.truth.as_ref().unwrap();
            alice_finish(&f, &sec.a, &sec.a2, &t.e).as_ref() == Ok(&k)
        })
        .count();
    let hks = (0..RUNS)
        .into_par_iter()
        .filter(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let f = gen_prime(31, &mut rng).unwrap().fp64().unwrap();
            let inst = hks_setup(&f, 6, 5, 6, &mut rng);
            let truth = inst.truth.unwrap();
            hks_bob_key(&f, &inst.public, &truth.k) == truth.key
        })
        .count();
    let ru = (0..RUNS)
        .into_par_iter()
        .filter(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let f = gen_prime(31, &mut rng).unwrap().fp64().unwrap();
            let inst = ru_setup(&f, 6, 3, &mut rng);
            let truth = inst.truth.unwrap();
            ru_bob_key(&f, &inst.public, &truth.f_b) == truth.key
        })
        .count();
    let secs = start.elapsed().as_secs_f64();
    let all = [integer, modular, hks, ru].iter().all(|&c| c as u64 == RUNS);
    Outcome {
        pass: all && secs < 300.0,
        detail: format!(
            "agreement Z {integer}/{RUNS}, Z_p {modular}/{RUNS}, hks {hks}/{RUNS}, ru {ru}/{RUNS}; {secs:.1}s"
        ),
    }
}

fn two_transcripts(s: &TrialSummary) -> Outcome {
    let rate = s.rate(|t| t.success && t.candidates == Some(1) && t.keys == Some(1));
    let max = s
        .trials
        .iter()
        .filter_map(|t| t.timings.get("attack"))
        .fold(0.0f64, |a, b| a.max(*b));
    Outcome {
        pass: rate >= 0.98 && max < 300.0 && s.trials.len() == 50,
        detail: format!("unique N and exact key in {}; slowest attack {max:.2}s", pct(rate)),
    }
}

fn shape_rates(s: &TrialSummary) -> [f64; 4] {
    [
        s.rate(|t| t.shape.is_some_and(|sh| sh.eliminant_degree <= 6 && sh.max_cofactor_degree <= 5)),
        s.rate(|t| t.shape.is_some_and(|sh| sh.eliminant_degree <= 6)),
        s.rate(|t| t.candidates.is_some_and(|c| (1..=6).contains(&c))),
        s.rate(|t| t.key_found == Some(true)),
    ]
}

fn single_transcript(s: &TrialSummary, low_word: &TrialSummary) -> Outcome {
    let [shape, _, cands, found] = shape_rates(s);
    let [l_shape, _, l_cands, l_found] = shape_rates(low_word);
    Outcome {
        pass: shape >= 0.9 && cands >= 0.9 && found >= 0.9 && s.trials.len() == 50,
        detail: format!(
            "word_len {}: shape {} (eliminant degrees {:?}, cofactor degrees {:?}), <= 6 candidates {}, key found {}; \
             informational word_len {}: shape {}, <= 6 candidates {}, key found {}",
            s.config.word_len,
            pct(shape),
            s.eliminant_degrees,
            s.cofactor_degrees,
            pct(cands),
            pct(found),
            low_word.config.word_len,
            pct(l_shape),
            pct(l_cands),
            pct(l_found),
        ),
    }
}

fn integer_attack(s: &TrialSummary) -> Outcome {
    let completed: Vec<_> = s.trials.iter().filter(|t| !t.budget_exhausted).collect();
    let exact = completed.iter().filter(|t| t.success).count();
    let within = s
        .trials
        .iter()
        .filter(|t| matches!((t.primes_used, t.prime_bound), (Some(u), Some(b)) if u <= b))
        .count();
    let used: Vec<_> = s.trials.iter().filter_map(|t| t.primes_used).collect();
    Outcome {
        pass: !completed.is_empty() && exact == completed.len() && within == s.trials.len(),
        detail: format!(
            "exact K with det 1 in {exact}/{} completed trials ({} total); primes within bound {within}/{}; primes used {:?}",
            completed.len(),
            s.trials.len(),
            s.trials.len(),
            used
        ),
    }
}

fn linear(s: &TrialSummary, need: f64) -> Outcome {
    Outcome {
        pass: s.success_rate >= need && s.elapsed < 60.0 && s.trials.len() == 1000,
        detail: format!("recovered {}/{} ({}); {:.2}s", s.successes, s.trials.len(), pct(s.success_rate), s.elapsed),
    }
}

fn groebner_soundness(runs: &[&TrialSummary]) -> Outcome {
    let audits: Vec<_> = runs.iter().flat_map(|s| s.trials.iter().filter_map(|t| t.audit)).collect();
    let attacked = runs.iter().flat_map(|s| s.trials.iter()).filter(|t| t.shape.is_some()).count();
    let sound = audits.iter().filter(|a| a.sound).count();
    let bases: usize = audits.iter().map(|a| a.bases).sum();
    let s_pairs: usize = audits.iter().map(|a| a.s_pairs).sum();
    let textbook = common::textbook_ideals();
    let textbook_ok = textbook.iter().filter(|(_, r)| r.is_ok()).count();
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for p in [3, 5, 7] {
        for v in 1..=4 {
            for seed in 0..40 {
                match common::enumeration_trial(p, v, seed) {
                    Some(Ok(())) => compared += 1,
                    Some(Err(e)) => mismatches.push(e),
                    None => {}
                }
            }
        }
    }
    Outcome {
        pass: sound == audits.len()
            && audits.len() >= attacked
            && textbook_ok == textbook.len()
            && mismatches.is_empty()
            && compared >= 200,
        detail: format!(
            "{sound}/{} solves sound ({bases} bases, {s_pairs} S-pairs); textbook {textbook_ok}/{}; \
             enumeration agrees on {compared} systems{}",
            audits.len(),
            textbook.len(),
            if mismatches.is_empty() { String::new() } else { format!(", mismatches {mismatches:?}") }
        ),
    }
}

fn equivalent_key_suites() -> Outcome {
    const TRIALS: u64 = 1000;
    let recovery: Vec<String> = (0..TRIALS).into_par_iter().filter_map(|s| common::equivalent_key_recovery_trial(s).err()).collect();
    let normal: Vec<String> = (0..TRIALS).into_par_iter().filter_map(|s| common::equivalent_key_normal_form_trial(s).err()).collect();
    Outcome {
        pass: recovery.is_empty() && normal.is_empty(),
        detail: format!(
            "recovery from equivalent keys {}/{TRIALS}, normal form {}/{TRIALS}",
            TRIALS as usize - recovery.len(),
            TRIALS as usize - normal.len()
        ),
    }
}

fn main() {
    let base = ExperimentConfig {
        audit_bases: true,
        ..Default::default()
    };
    let mut results = Vec::new();

    let o = honest_runs();
    report(1, "honest protocol runs agree", &o);
    results.push(o.pass);

    let two = experiment(ExperimentConfig {
        protocol: ProtocolId::BcfrxP,
        trials: 50,
        prime_bits: 64,
        word_len: 12,
        transcripts: 2,
        seed: 2,
        ..base.clone()
    });
    let o = two_transcripts(&two);
    report(2, "two-transcript attack modulo 64-bit primes", &o);
    results.push(o.pass);

    let single = ExperimentConfig {
        protocol: ProtocolId::BcfrxP,
        trials: 50,
        prime_bits: 32,
        word_len: 100,
        transcripts: 1,
        seed: 3,
        ..base.clone()
    };
    let one = experiment(single.clone());
    let one_low = experiment(ExperimentConfig { word_len: 12, ..single });
    let o = single_transcript(&one, &one_low);
    report(3, "single-transcript shape statistics", &o);
    results.push(o.pass);

    let integer = experiment(ExperimentConfig {
        protocol: ProtocolId::Bcfrx,
        trials: 20,
        prime_bits: 32,
        word_len: 12,
        transcripts: 2,
        seed: 4,
        ..base.clone()
    });
    let o = integer_attack(&integer);
    report(4, "integer attack by Chinese remaindering", &o);
    results.push(o.pass);

    let hks = experiment(ExperimentConfig {
        protocol: ProtocolId::Hks,
        trials: 1000,
        dim: 6,
        exp_n: 5,
        prime_bits: 31,
        samples: 8,
        seed: 5,
        ..base.clone()
    });
    let o = linear(&hks, 0.99);
    report(5, "HKS linearization attack", &o);
    results.push(o.pass);

    let ru = experiment(ExperimentConfig {
        protocol: ProtocolId::Ru,
        trials: 1000,
        dim: 6,
        degree: Some(3),
        prime_bits: 31,
        seed: 6,
        ..base
    });
    let o = linear(&ru, 1.0);
    report(6, "RU linearization attack", &o);
    results.push(o.pass);

    let o = groebner_soundness(&[&two, &one, &one_low]);
    report(7, "Groebner engine soundness", &o);
    results.push(o.pass);

    let o = equivalent_key_suites();
    report(8, "equivalent-key suites", &o);
    results.push(o.pass);

    let passed = results.iter().filter(|p| **p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
