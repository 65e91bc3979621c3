//! JSON instance documents: public data of one protocol instance, with
//! ground truth only when explicitly requested.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::arith::{Field, Integers, Ring};
use crate::error::{Error, Result};
use crate::matlin::{MatrixJson, VectorJson};

use super::bcfrx::{BcfrxKey, BcfrxSecrets, BcfrxTranscript};
use super::commuting::{Bivariate, HksInstance, HksPublic, HksSecrets, RuInstance, RuPublic, RuSecrets};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunDoc {
    pub c: MatrixJson,
    pub d: MatrixJson,
    pub e: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTruthDoc {
    pub k: MatrixJson,
    pub a: MatrixJson,
    pub a2: MatrixJson,
    pub b: MatrixJson,
    pub b2: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcfrxParams {
    pub word_len: usize,
    /// Present for the prime-field model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcfrxPublicDoc {
    pub runs: Vec<RunDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcfrxTruthDoc {
    pub m: MatrixJson,
    pub runs: Vec<RunTruthDoc>,
    /// `Λ` over the integer run, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HksParams {
    pub modulus: String,
    pub m: usize,
    pub n: usize,
    pub deg: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HksPublicDoc {
    pub q: MatrixJson,
    pub b: VectorJson,
    pub w_a: VectorJson,
    pub w_b: VectorJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HksTruthDoc {
    pub g_a: VectorJson,
    pub g_b: VectorJson,
    pub j: MatrixJson,
    pub k: MatrixJson,
    pub key: VectorJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuParams {
    pub modulus: String,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuPublicDoc {
    pub c: MatrixJson,
    pub d: MatrixJson,
    pub vec_d: VectorJson,
    pub w_a: VectorJson,
    pub w_b: VectorJson,
}

/// One coefficient `c x^i y^j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub i: usize,
    pub j: usize,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuTruthDoc {
    pub f_a: Vec<TermDoc>,
    pub f_b: Vec<TermDoc>,
    pub key: VectorJson,
}

/// A protocol instance on the wire, tagged by `protocol`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "protocol", rename_all = "snake_case")]
pub enum InstanceDoc {
    /// Transport over `SL_4(Z)`.
    Bcfrx {
        params: BcfrxParams,
        public: BcfrxPublicDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truth: Option<BcfrxTruthDoc>,
    },
    /// Transport over `SL_4(Z_p)`.
    BcfrxP {
        params: BcfrxParams,
        public: BcfrxPublicDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truth: Option<BcfrxTruthDoc>,
    },
    Hks {
        params: HksParams,
        public: HksPublicDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truth: Option<HksTruthDoc>,
    },
    Ru {
        params: RuParams,
        public: RuPublicDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truth: Option<RuTruthDoc>,
    },
}

fn parse_modulus(s: &str) -> Result<BigUint> {
    s.parse()
        .map_err(|_| Error::Schema(format!("modulus is not a decimal integer: {s:?}")))
}

fn encode_runs<R: Ring>(ring: &R, runs: &[BcfrxTranscript<R::Elem>]) -> BcfrxPublicDoc {
    BcfrxPublicDoc {
        runs: runs
            .iter()
            .map(|t| RunDoc {
                c: MatrixJson::encode(ring, &t.c),
                d: MatrixJson::encode(ring, &t.d),
                e: MatrixJson::encode(ring, &t.e),
            })
            .collect(),
    }
}

fn encode_bcfrx_truth<R: Ring>(
    ring: &R,
    key: &BcfrxKey<R::Elem>,
    runs: &[BcfrxTranscript<R::Elem>],
    lambda: Option<BigInt>,
) -> Result<BcfrxTruthDoc> {
    let runs = runs
        .iter()
        .map(|t| {
            let s = t
                .truth
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("run without ground truth".into()))?;
            Ok(RunTruthDoc {
                k: MatrixJson::encode(ring, &s.k),
                a: MatrixJson::encode(ring, &s.a),
                a2: MatrixJson::encode(ring, &s.a2),
                b: MatrixJson::encode(ring, &s.b),
                b2: MatrixJson::encode(ring, &s.b2),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BcfrxTruthDoc {
        m: MatrixJson::encode(ring, &key.m),
        runs,
        lambda: lambda.map(|l| l.to_string()),
    })
}

fn decode_runs<R: Ring>(
    ring: &R,
    public: &BcfrxPublicDoc,
    truth: Option<&BcfrxTruthDoc>,
) -> Result<Vec<BcfrxTranscript<R::Elem>>> {
    if public.runs.is_empty() {
        return Err(Error::Schema("public.runs is empty".into()));
    }
    if let Some(t) = truth {
        if t.runs.len() != public.runs.len() {
            return Err(Error::Schema("truth.runs and public.runs differ in length".into()));
        }
    }
    public
        .runs
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let secrets = match truth {
                Some(t) => {
                    let s = &t.runs[i];
                    Some(BcfrxSecrets {
                        k: s.k.decode(ring)?,
                        a: s.a.decode(ring)?,
                        a2: s.a2.decode(ring)?,
                        b: s.b.decode(ring)?,
                        b2: s.b2.decode(ring)?,
                    })
                }
                None => None,
            };
            Ok(BcfrxTranscript {
                c: r.c.decode(ring)?,
                d: r.d.decode(ring)?,
                e: r.e.decode(ring)?,
                truth: secrets,
            })
        })
        .collect()
}

fn encode_bivariate<F: Field>(f: &F, p: &Bivariate<F::Elem>) -> Vec<TermDoc> {
    p.iter()
        .map(|((i, j), c)| TermDoc {
            i: *i,
            j: *j,
            c: f.to_bigint(c).to_string(),
        })
        .collect()
}

fn decode_bivariate<F: Field>(f: &F, p: &[TermDoc]) -> Result<Bivariate<F::Elem>> {
    p.iter()
        .map(|t| {
            let v = VectorJson {
                ring: f.descriptor(),
                entries: vec![t.c.clone()],
            };
            Ok(((t.i, t.j), v.decode(f)?.remove(0)))
        })
        .collect()
}

impl InstanceDoc {
    pub fn protocol(&self) -> &'static str {
        match self {
            InstanceDoc::Bcfrx { .. } => "bcfrx",
            InstanceDoc::BcfrxP { .. } => "bcfrx_p",
            InstanceDoc::Hks { .. } => "hks",
            InstanceDoc::Ru { .. } => "ru",
        }
    }

    /// The prime of a prime-field instance.
    pub fn modulus(&self) -> Result<Option<BigUint>> {
        match self {
            InstanceDoc::Bcfrx { .. } => Ok(None),
            InstanceDoc::BcfrxP { params, .. } => match &params.modulus {
                Some(m) => parse_modulus(m).map(Some),
                None => Err(Error::Schema("params.modulus is missing".into())),
            },
            InstanceDoc::Hks { params, .. } => parse_modulus(&params.modulus).map(Some),
            InstanceDoc::Ru { params, .. } => parse_modulus(&params.modulus).map(Some),
        }
    }

    pub fn has_truth(&self) -> bool {
        match self {
            InstanceDoc::Bcfrx { truth, .. } | InstanceDoc::BcfrxP { truth, .. } => truth.is_some(),
            InstanceDoc::Hks { truth, .. } => truth.is_some(),
            InstanceDoc::Ru { truth, .. } => truth.is_some(),
        }
    }

    /// The same instance with ground truth removed.
    pub fn public_only(&self) -> InstanceDoc {
        let mut out = self.clone();
        match &mut out {
            InstanceDoc::Bcfrx { truth, .. } | InstanceDoc::BcfrxP { truth, .. } => *truth = None,
            InstanceDoc::Hks { truth, .. } => *truth = None,
            InstanceDoc::Ru { truth, .. } => *truth = None,
        }
        out
    }

    pub fn from_bcfrx_integer(
        word_len: usize,
        key: &BcfrxKey<BigInt>,
        runs: &[BcfrxTranscript<BigInt>],
        lambda: Option<BigInt>,
        with_truth: bool,
    ) -> Result<Self> {
        let z = Integers;
        Ok(InstanceDoc::Bcfrx {
            params: BcfrxParams {
                word_len,
                modulus: None,
            },
            public: encode_runs(&z, runs),
            truth: with_truth.then(|| encode_bcfrx_truth(&z, key, runs, lambda)).transpose()?,
        })
    }

    pub fn from_bcfrx_mod_p<F: Field>(
        f: &F,
        word_len: usize,
        key: &BcfrxKey<F::Elem>,
        runs: &[BcfrxTranscript<F::Elem>],
        with_truth: bool,
    ) -> Result<Self> {
        Ok(InstanceDoc::BcfrxP {
            params: BcfrxParams {
                word_len,
                modulus: Some(f.modulus().to_string()),
            },
            public: encode_runs(f, runs),
            truth: with_truth.then(|| encode_bcfrx_truth(f, key, runs, None)).transpose()?,
        })
    }

    pub fn from_hks<F: Field>(f: &F, inst: &HksInstance<F::Elem>, with_truth: bool) -> Self {
        let p = &inst.public;
        InstanceDoc::Hks {
            params: HksParams {
                modulus: f.modulus().to_string(),
                m: p.m,
                n: p.n,
                deg: p.deg,
            },
            public: HksPublicDoc {
                q: MatrixJson::encode(f, &p.q),
                b: VectorJson::encode(f, &p.b),
                w_a: VectorJson::encode(f, &p.w_a),
                w_b: VectorJson::encode(f, &p.w_b),
            },
            truth: inst.truth.as_ref().filter(|_| with_truth).map(|t| HksTruthDoc {
                g_a: VectorJson::encode(f, &t.g_a),
                g_b: VectorJson::encode(f, &t.g_b),
                j: MatrixJson::encode(f, &t.j),
                k: MatrixJson::encode(f, &t.k),
                key: VectorJson::encode(f, &t.key),
            }),
        }
    }

    pub fn from_ru<F: Field>(f: &F, inst: &RuInstance<F::Elem>, with_truth: bool) -> Self {
        let p = &inst.public;
        InstanceDoc::Ru {
            params: RuParams {
                modulus: f.modulus().to_string(),
                n: p.n,
            },
            public: RuPublicDoc {
                c: MatrixJson::encode(f, &p.c),
                d: MatrixJson::encode(f, &p.d),
                vec_d: VectorJson::encode(f, &p.vec_d),
                w_a: VectorJson::encode(f, &p.w_a),
                w_b: VectorJson::encode(f, &p.w_b),
            },
            truth: inst.truth.as_ref().filter(|_| with_truth).map(|t| RuTruthDoc {
                f_a: encode_bivariate(f, &t.f_a),
                f_b: encode_bivariate(f, &t.f_b),
                key: VectorJson::encode(f, &t.key),
            }),
        }
    }

    /// Integer transcripts, with ground truth attached when present.
    pub fn bcfrx_integer(&self) -> Result<Vec<BcfrxTranscript<BigInt>>> {
        match self {
            InstanceDoc::Bcfrx { public, truth, .. } => decode_runs(&Integers, public, truth.as_ref()),
            _ => Err(Error::Schema(format!("expected a bcfrx instance, found {}", self.protocol()))),
        }
    }

    pub fn bcfrx_mod_p<F: Field>(&self, f: &F) -> Result<Vec<BcfrxTranscript<F::Elem>>> {
        match self {
            InstanceDoc::BcfrxP { public, truth, .. } => decode_runs(f, public, truth.as_ref()),
            _ => Err(Error::Schema(format!("expected a bcfrx_p instance, found {}", self.protocol()))),
        }
    }

    pub fn hks<F: Field>(&self, f: &F) -> Result<HksInstance<F::Elem>> {
        let InstanceDoc::Hks { params, public, truth } = self else {
            return Err(Error::Schema(format!("expected an hks instance, found {}", self.protocol())));
        };
        let q = public.q.decode(f)?;
        let public = HksPublic {
            m: params.m,
            n: params.n,
            b: public.b.decode(f)?,
            w_a: public.w_a.decode(f)?,
            w_b: public.w_b.decode(f)?,
            deg: params.deg,
            q,
        };
        if public.q.rows() != public.m || [&public.b, &public.w_a, &public.w_b].iter().any(|v| v.len() != public.m) {
            return Err(Error::Schema(format!("dimensions disagree with params.m = {}", public.m)));
        }
        let truth = truth
            .as_ref()
            .map(|t| {
                Ok::<_, Error>(HksSecrets {
                    g_a: t.g_a.decode(f)?,
                    g_b: t.g_b.decode(f)?,
                    j: t.j.decode(f)?,
                    k: t.k.decode(f)?,
                    key: t.key.decode(f)?,
                })
            })
            .transpose()?;
        Ok(HksInstance { public, truth })
    }

    pub fn ru<F: Field>(&self, f: &F) -> Result<RuInstance<F::Elem>> {
        let InstanceDoc::Ru { params, public, truth } = self else {
            return Err(Error::Schema(format!("expected an ru instance, found {}", self.protocol())));
        };
        let public = RuPublic {
            n: params.n,
            c: public.c.decode(f)?,
            d: public.d.decode(f)?,
            vec_d: public.vec_d.decode(f)?,
            w_a: public.w_a.decode(f)?,
            w_b: public.w_b.decode(f)?,
        };
        if public.c.rows() != public.n
            || public.d.rows() != public.n
            || [&public.vec_d, &public.w_a, &public.w_b].iter().any(|v| v.len() != public.n)
        {
            return Err(Error::Schema(format!("dimensions disagree with params.n = {}", public.n)));
        }
        let truth = truth
            .as_ref()
            .map(|t| {
                Ok::<_, Error>(RuSecrets {
                    f_a: decode_bivariate(f, &t.f_a)?,
                    f_b: decode_bivariate(f, &t.f_b)?,
                    key: t.key.decode(f)?,
                })
            })
            .transpose()?;
        Ok(RuInstance { public, truth })
    }
}
