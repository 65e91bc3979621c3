use std::path::Path;

use num_bigint::{BigInt, BigUint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{is_probable_prime, FpBig, Integers, Ring, RingDescriptor};
use crate::attacks::AttackReport;
use crate::protocols::doc::InstanceDoc;

use super::TrialSummary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentKind {
    Instance,
    ExperimentReport,
    AttackReport,
    Unknown,
}

/// Itemized findings; empty `errors` means the file is valid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub kind: DocumentKind,
    pub errors: Vec<String>,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Schema and ring-consistency checks on an instance or report file. Never
/// writes.
pub fn verify_transcript_file(path: impl AsRef<Path>) -> Diagnostics {
    let path = path.as_ref();
    let mut d = Diagnostics {
        kind: DocumentKind::Unknown,
        errors: Vec::new(),
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            d.errors.push(format!("cannot read {}: {e}", path.display()));
            return d;
        }
    };
    let value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            d.errors.push(format!("malformed JSON: {e}"));
            return d;
        }
    };
    let Some(obj) = value.as_object() else {
        d.errors.push("top level is not an object".into());
        return d;
    };
    if obj.contains_key("protocol") && !obj.contains_key("primes") {
        d.kind = DocumentKind::Instance;
        verify_instance(&value, &mut d.errors);
    } else if obj.contains_key("trials") || obj.contains_key("config") {
        d.kind = DocumentKind::ExperimentReport;
        verify_experiment(&value, &mut d.errors);
    } else if obj.contains_key("primes") {
        d.kind = DocumentKind::AttackReport;
        verify_attack_report(&value, &mut d.errors);
    } else {
        d.errors
            .push("unrecognised document: expected field `protocol` (instance) or `trials` (report)".into());
    }
    d
}

#[derive(Clone, Copy)]
enum Shape {
    Matrix(usize),
    Vector(usize),
}

/// The ring entries must live in, as a checker.
enum Expected {
    Integers,
    Field(FpBig),
}

impl Expected {
    fn descriptor(&self) -> RingDescriptor {
        match self {
            Expected::Integers => Integers.descriptor(),
            Expected::Field(f) => f.descriptor(),
        }
    }

    fn is_canonical(&self, x: &BigInt) -> bool {
        match self {
            Expected::Integers => true,
            Expected::Field(f) => f.is_canonical(x),
        }
    }
}

fn get<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(v, |v, k| v.get(k))
}

fn require<'a>(v: &'a Value, path: &str, errors: &mut Vec<String>) -> Option<&'a Value> {
    let found = get(v, path);
    if found.is_none() {
        errors.push(format!("missing field `{path}`"));
    }
    found
}

fn require_usize(v: &Value, path: &str, errors: &mut Vec<String>) -> Option<usize> {
    let x = require(v, path, errors)?;
    let n = x.as_u64().map(|n| n as usize);
    if n.is_none() {
        errors.push(format!("`{path}` is not a non-negative integer"));
    }
    n
}

fn check_entries(entries: &[Value], path: &str, ring: &Expected, errors: &mut Vec<String>) {
    for (i, e) in entries.iter().enumerate() {
        match e.as_str().map(|s| s.parse::<BigInt>()) {
            Some(Ok(x)) if ring.is_canonical(&x) => {}
            Some(Ok(x)) => errors.push(format!(
                "`{path}` entry {i} = {x} is not reduced in {}",
                ring.descriptor()
            )),
            _ => errors.push(format!("`{path}` entry {i} is not a decimal string")),
        }
    }
}

fn check_object(root: &Value, path: &str, shape: Shape, ring: &Expected, errors: &mut Vec<String>) {
    let Some(v) = require(root, path, errors) else { return };
    match v.get("ring").map(|r| serde_json::from_value::<RingDescriptor>(r.clone())) {
        None => errors.push(format!("missing field `{path}.ring`")),
        Some(Err(e)) => errors.push(format!("`{path}.ring` is malformed: {e}")),
        Some(Ok(r)) if r != ring.descriptor() => errors.push(format!(
            "`{path}.ring` is {r}, expected {}",
            ring.descriptor()
        )),
        Some(Ok(_)) => {}
    }
    match shape {
        Shape::Matrix(n) => {
            let Some(rows) = v.get("rows") else {
                errors.push(format!("missing field `{path}.rows`"));
                return;
            };
            let Some(rows) = rows.as_array() else {
                errors.push(format!("`{path}.rows` is not an array"));
                return;
            };
            if rows.len() != n {
                errors.push(format!("`{path}` has {} rows, expected {n}", rows.len()));
            }
            for (i, r) in rows.iter().enumerate() {
                match r.as_array() {
                    Some(r) if r.len() == n => check_entries(r, &format!("{path}.rows[{i}]"), ring, errors),
                    _ => errors.push(format!("`{path}.rows[{i}]` is not a row of length {n}")),
                }
            }
        }
        Shape::Vector(n) => match v.get("entries").and_then(Value::as_array) {
            Some(e) if e.len() == n => check_entries(e, &format!("{path}.entries"), ring, errors),
            Some(e) => errors.push(format!("`{path}` has {} entries, expected {n}", e.len())),
            None => errors.push(format!("missing field `{path}.entries`")),
        },
    }
}

fn field_from(v: &Value, errors: &mut Vec<String>) -> Option<Expected> {
    let s = require(v, "params.modulus", errors)?;
    let Some(p) = s.as_str().and_then(|s| s.parse::<BigUint>().ok()) else {
        errors.push("`params.modulus` is not a decimal string".into());
        return None;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    if !is_probable_prime(&p, &mut rng) {
        errors.push(format!("`params.modulus` = {p} is not prime"));
        return None;
    }
    Some(Expected::Field(FpBig::new_unchecked(p)))
}

fn verify_instance(v: &Value, errors: &mut Vec<String>) {
    let protocol = v.get("protocol").and_then(Value::as_str).unwrap_or("");
    require(v, "params", errors);
    require(v, "public", errors);
    let mut objects: Vec<(String, Shape)> = Vec::new();
    let ring = match protocol {
        "bcfrx" | "bcfrx_p" => {
            require_usize(v, "params.word_len", errors);
            let ring = if protocol == "bcfrx" {
                Some(Expected::Integers)
            } else {
                field_from(v, errors)
            };
            match get(v, "public.runs").and_then(Value::as_array) {
                Some(runs) if !runs.is_empty() => {
                    for i in 0..runs.len() {
                        for m in ["c", "d", "e"] {
                            objects.push((format!("public.runs.{i}.{m}"), Shape::Matrix(4)));
                        }
                    }
                }
                Some(_) => errors.push("`public.runs` is empty".into()),
                None => errors.push("missing field `public.runs`".into()),
            }
            if let Some(t) = v.get("truth") {
                objects.push(("truth.m".into(), Shape::Matrix(4)));
                let n = t.get("runs").and_then(Value::as_array).map_or(0, Vec::len);
                for i in 0..n {
                    for m in ["k", "a", "a2", "b", "b2"] {
                        objects.push((format!("truth.runs.{i}.{m}"), Shape::Matrix(4)));
                    }
                }
            }
            ring
        }
        "hks" => {
            let m = require_usize(v, "params.m", errors);
            require_usize(v, "params.n", errors);
            require_usize(v, "params.deg", errors);
            let ring = field_from(v, errors);
            if let Some(m) = m {
                objects.push(("public.q".into(), Shape::Matrix(m)));
                for x in ["b", "w_a", "w_b"] {
                    objects.push((format!("public.{x}"), Shape::Vector(m)));
                }
                if v.get("truth").is_some() {
                    objects.push(("truth.j".into(), Shape::Matrix(m)));
                    objects.push(("truth.k".into(), Shape::Matrix(m)));
                    objects.push(("truth.key".into(), Shape::Vector(m)));
                }
            }
            ring
        }
        "ru" => {
            let n = require_usize(v, "params.n", errors);
            let ring = field_from(v, errors);
            if let Some(n) = n {
                for x in ["c", "d"] {
                    objects.push((format!("public.{x}"), Shape::Matrix(n)));
                }
                for x in ["vec_d", "w_a", "w_b"] {
                    objects.push((format!("public.{x}"), Shape::Vector(n)));
                }
                if v.get("truth").is_some() {
                    objects.push(("truth.key".into(), Shape::Vector(n)));
                }
            }
            ring
        }
        other => {
            errors.push(format!("unknown protocol {other:?}"));
            return;
        }
    };
    if let Some(ring) = ring {
        // arrays are addressed with dotted indices
        let indexed = index_arrays(v);
        for (path, shape) in &objects {
            check_object(&indexed, path, *shape, &ring, errors);
        }
    }
    if errors.is_empty() {
        if let Err(e) = serde_json::from_value::<InstanceDoc>(v.clone()) {
            errors.push(format!("schema: {e}"));
        }
    }
}

/// Copy of `v` with arrays turned into objects keyed by index.
fn index_arrays(v: &Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(
            m.iter()
                .map(|(k, x)| {
                    // matrix rows and vector entries stay arrays
                    let keep = k == "rows" || k == "entries";
                    (k.clone(), if keep { x.clone() } else { index_arrays(x) })
                })
                .collect(),
        ),
        Value::Array(a) => Value::Object(a.iter().enumerate().map(|(i, x)| (i.to_string(), index_arrays(x))).collect()),
        other => other.clone(),
    }
}

fn verify_experiment(v: &Value, errors: &mut Vec<String>) {
    for field in ["config", "trials", "successes", "success_rate"] {
        require(v, field, errors);
    }
    if !errors.is_empty() {
        return;
    }
    let summary: TrialSummary = match serde_json::from_value(v.clone()) {
        Ok(s) => s,
        Err(e) => {
            errors.push(format!("schema: {e}"));
            return;
        }
    };
    let n = summary.trials.len();
    if n != summary.config.trials {
        errors.push(format!("{n} trial records for {} configured trials", summary.config.trials));
    }
    if summary.trials.iter().enumerate().any(|(i, t)| t.index != i) {
        errors.push("trial indices are not 0..n in order".into());
    }
    let recomputed = TrialSummary::from_records(summary.config.clone(), summary.trials.clone(), summary.elapsed);
    if recomputed.successes != summary.successes {
        errors.push(format!(
            "successes = {} but {} trial records succeed",
            summary.successes, recomputed.successes
        ));
    }
    if (recomputed.success_rate - summary.success_rate).abs() > 1e-12 {
        errors.push(format!(
            "success_rate = {} but per-trial flags give {}",
            summary.success_rate, recomputed.success_rate
        ));
    }
    if recomputed.eliminant_degrees != summary.eliminant_degrees || recomputed.candidate_counts != summary.candidate_counts {
        errors.push("histograms disagree with per-trial records".into());
    }
}

fn verify_attack_report(v: &Value, errors: &mut Vec<String>) {
    let report: AttackReport = match serde_json::from_value(v.clone()) {
        Ok(r) => r,
        Err(e) => {
            errors.push(format!("schema: {e}"));
            return;
        }
    };
    if report.success && report.key.is_none() {
        errors.push("successful report without a key".into());
    }
    if !report.success && report.failure.is_none() {
        errors.push("failed report without a failure reason".into());
    }
}
