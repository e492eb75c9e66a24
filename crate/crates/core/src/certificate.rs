//! JSON form of a [`DensityCertificate`] and its replay.
//!
//! Rationals are decimal strings `"n"` or `"n/d"`. An element of `F_{p^2}`
//! is the residue pair `[c0, c1]` meaning `c0 + c1 g`, where `g` is the
//! fixed generator (`g^2 = n` for odd `p`, `g^2 + g + 1 = 0` for `p = 2`).
//! Quaternion coordinates are on the basis `1, i, j, k`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::density::{evaluate, DensityCertificate, Parameters, SearchFailure, Witness, WitnessRole};
use crate::error::{Error, Result};
use crate::local::FrattiniImage;
use crate::quatalg::{algebra_and_order, Quaternion};
use crate::witt::FqElement;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub parameters: ParametersJson,
    pub witnesses: Vec<WitnessJson>,
    pub failures: Vec<FailureJson>,
    pub verdicts: VerdictsJson,
    pub versions: VersionsJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParametersJson {
    pub p: u64,
    pub ell: u64,
    pub precision: u32,
    pub k_extra: u32,
    pub m_max: u32,
    /// `(a, b)` with `i^2 = a`, `j^2 = b`.
    pub algebra: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub role: String,
    pub provenance: String,
    pub coordinates: [String; 4],
    pub alpha: Option<String>,
    pub norm: String,
    pub trace: String,
    pub denominator_exponent: Option<u32>,
    pub digits: Option<Vec<[u64; 2]>>,
    pub norm_digits: Option<Vec<u64>>,
    pub frattini: Option<Vec<[u64; 2]>>,
    pub residue_order: Option<u64>,
    pub in_tilde_s2: Option<bool>,
    pub checks: Vec<CheckJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckJson {
    pub name: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureJson {
    pub stage: String,
    pub message: String,
    pub inconclusive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictJson {
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictsJson {
    pub frattini_rank: usize,
    pub topological_generator: bool,
    pub thm_lambda: VerdictJson,
    pub cor_gamma1: VerdictJson,
    pub thm_gamma: VerdictJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VersionsJson {
    pub format: u32,
    pub morava_density: String,
}

fn rat(x: &BigRational) -> String {
    x.to_string()
}

fn parse_rat(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(BigInt::from_str(n).map_err(|_| bad())?, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

fn fq(x: &FqElement) -> [u64; 2] {
    let (a, b) = x.coeffs();
    [a, b]
}

impl From<&DensityCertificate> for CertificateJson {
    fn from(c: &DensityCertificate) -> Self {
        let pr = &c.parameters;
        let (alg, _) = algebra_and_order(pr.p).expect("parameters were validated");
        let witnesses = c
            .witnesses
            .iter()
            .map(|(w, r)| WitnessJson {
                role: w.role.name().into(),
                provenance: w.role.provenance().into(),
                coordinates: w.element.coords().clone().map(|x| rat(&x)),
                alpha: w.alpha.as_ref().map(rat),
                norm: rat(&r.norm),
                trace: rat(&r.trace),
                denominator_exponent: r.denominator_exponent,
                digits: r.digits.as_ref().map(|d| d.iter().map(fq).collect()),
                norm_digits: r.norm_digits.clone(),
                frattini: r.frattini.as_ref().map(|f: &FrattiniImage| f.components().iter().map(fq).collect()),
                residue_order: r.residue_order,
                in_tilde_s2: r.in_tilde_s2,
                checks: r.checks.iter().map(|k| CheckJson { name: k.name.into(), ok: k.ok }).collect(),
            })
            .collect();
        CertificateJson {
            parameters: ParametersJson {
                p: pr.p,
                ell: pr.ell,
                precision: pr.precision,
                k_extra: pr.k_extra,
                m_max: pr.m_max,
                algebra: [rat(alg.a()), rat(alg.b())],
            },
            witnesses,
            failures: c
                .failures
                .iter()
                .map(|f| FailureJson {
                    stage: f.stage.clone(),
                    message: f.message.clone(),
                    inconclusive: f.inconclusive,
                })
                .collect(),
            verdicts: VerdictsJson {
                frattini_rank: c.span_rank,
                topological_generator: c.topological_generator,
                thm_lambda: VerdictJson { verdict: c.thm_lambda.label() },
                cor_gamma1: VerdictJson { verdict: c.cor_gamma1.label() },
                thm_gamma: VerdictJson { verdict: c.thm_gamma.label() },
            },
            versions: VersionsJson { format: FORMAT_VERSION, morava_density: env!("CARGO_PKG_VERSION").into() },
        }
    }
}

impl CertificateJson {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn parameters(&self) -> Parameters {
        let p = &self.parameters;
        Parameters { p: p.p, ell: p.ell, precision: p.precision, k_extra: p.k_extra, m_max: p.m_max }
    }

    /// The bare witnesses and search failures, ignoring all derived fields.
    pub fn inputs(&self) -> Result<(Vec<Witness>, Vec<SearchFailure>)> {
        let params = self.parameters();
        params.validate()?;
        let (alg, _) = algebra_and_order(params.p)?;
        let mut witnesses = Vec::new();
        for w in &self.witnesses {
            let role =
                WitnessRole::from_name(&w.role).ok_or_else(|| Error::Parse(format!("unknown role {:?}", w.role)))?;
            let coords = [
                parse_rat(&w.coordinates[0])?,
                parse_rat(&w.coordinates[1])?,
                parse_rat(&w.coordinates[2])?,
                parse_rat(&w.coordinates[3])?,
            ];
            let alpha = w.alpha.as_deref().map(parse_rat).transpose()?;
            witnesses.push(Witness { role, element: Quaternion::new(&alg, coords), alpha });
        }
        let failures = self
            .failures
            .iter()
            .map(|f| SearchFailure { stage: f.stage.clone(), message: f.message.clone(), inconclusive: f.inconclusive })
            .collect();
        Ok((witnesses, failures))
    }
}

/// Outcome of re-checking a stored certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub certificate: DensityCertificate,
    /// Top-level fields whose stored value differs from the recomputation.
    pub mismatches: Vec<String>,
}

impl Replay {
    pub fn consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Recomputes every derived field from the stored witnesses alone.
pub fn replay(stored: &CertificateJson) -> Result<Replay> {
    let params = stored.parameters();
    let (witnesses, failures) = stored.inputs()?;
    let certificate = evaluate(&params, witnesses, failures)?;
    let fresh = CertificateJson::from(&certificate);
    let mut mismatches = Vec::new();
    if fresh.parameters != stored.parameters {
        mismatches.push("parameters".to_string());
    }
    for (i, (a, b)) in fresh.witnesses.iter().zip(&stored.witnesses).enumerate() {
        if a != b {
            mismatches.push(format!("witnesses[{i}] ({})", b.role));
        }
    }
    if fresh.verdicts != stored.verdicts {
        mismatches.push("verdicts".to_string());
    }
    if fresh.versions.format != stored.versions.format {
        mismatches.push("versions.format".to_string());
    }
    Ok(Replay { certificate, mismatches })
}
