//! Records of single inequality evaluations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Tolerance applied to closed-form and direct-sum certificate margins.
pub const CERT_TOL: f64 = 1e-10;

/// Slack applied to sampled (grid) checks.
pub const SAMPLED_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConditionId {
    /// `2u′(1) + (2 − cos α − β)(u(1) − 1) ≤ cos α − β`
    T1Hh,
    /// Exponential majorant of `T1Hh`.
    T2Q,
    /// `2u″(1) + (6 − cos α − β)u′(1) + (2 − cos α − β)(u(1) − 1) ≤ cos α − β`
    T3Gh,
    /// Exponential majorant of `T3Gh`.
    #[serde(rename = "T4_66")]
    T466,
    /// `(A − B)|τ|` times the `T1Hh` left-hand side.
    T5D3,
    /// `(A − B)|τ|` times the `T2Q` left-hand side.
    T7D3exp,
    /// `T1Hh` read as the membership test of the integral operator `G`.
    G6Hh,
    /// `T466` read as the membership test of the integral operator `G`.
    #[serde(rename = "G8_66")]
    G866,
    /// `Σ (2n − cos α − β)|a_n| ≤ cos α − β`
    #[serde(rename = "LEMMA1_T1")]
    Lemma1T1,
    /// `Σ n(2n − cos α − β)|a_n| ≤ cos α − β`
    #[serde(rename = "LEMMA1_B1")]
    Lemma1B1,
    /// Sampled check of the defining inequality of `SP_p(α, β)`.
    Geometric,
    /// Sampled check of the defining inequality of `R^τ(A, B)`.
    Rtau,
}

impl ConditionId {
    pub const ALL: [ConditionId; 12] = [
        ConditionId::T1Hh,
        ConditionId::T2Q,
        ConditionId::T3Gh,
        ConditionId::T466,
        ConditionId::T5D3,
        ConditionId::T7D3exp,
        ConditionId::G6Hh,
        ConditionId::G866,
        ConditionId::Lemma1T1,
        ConditionId::Lemma1B1,
        ConditionId::Geometric,
        ConditionId::Rtau,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionId::T1Hh => "T1_HH",
            ConditionId::T2Q => "T2_Q",
            ConditionId::T3Gh => "T3_GH",
            ConditionId::T466 => "T4_66",
            ConditionId::T5D3 => "T5_D3",
            ConditionId::T7D3exp => "T7_D3EXP",
            ConditionId::G6Hh => "G6_HH",
            ConditionId::G866 => "G8_66",
            ConditionId::Lemma1T1 => "LEMMA1_T1",
            ConditionId::Lemma1B1 => "LEMMA1_B1",
            ConditionId::Geometric => "GEOMETRIC",
            ConditionId::Rtau => "RTAU",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_uppercase();
        ConditionId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == wanted)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown condition id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    ClosedForm,
    DirectSum,
    Sampled,
}

/// How much a `holds` verdict actually establishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClaimStrength {
    /// `holds` implies membership; failure says nothing.
    Sufficient,
    /// `holds` is equivalent to membership.
    NecessaryAndSufficient,
    /// Stated as an equivalence in the literature, but only the sufficient
    /// direction follows from the coefficient argument; see `note`.
    PaperClaimsIffSeeNotes,
    /// A sampled check: a failure refutes, a pass only suggests.
    RefutationOnly,
}

/// Grid description echoed into sampled certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEcho {
    pub radii: usize,
    pub angles: usize,
    pub r_max: f64,
    /// Grid point where the minimum margin was attained, as `[re, im]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_point: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateMeta {
    pub params: BTreeMap<String, f64>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n_terms: Option<usize>,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridEcho>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim_strength: Option<ClaimStrength>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CertificateMeta {
    pub fn new(tol: f64) -> Self {
        CertificateMeta {
            params: BTreeMap::new(),
            n_terms: None,
            tol,
            grid: None,
            tail_bound: None,
            claim_strength: None,
            note: None,
        }
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }
}

/// One evaluated condition `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub condition_id: ConditionId,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
    pub method: Method,
    pub meta: CertificateMeta,
}

impl Certificate {
    /// `margin = rhs − lhs`; `holds ⇔ margin ≥ −meta.tol`.
    pub fn new(condition_id: ConditionId, lhs: f64, rhs: f64, method: Method, meta: CertificateMeta) -> Self {
        let margin = rhs - lhs;
        let holds = margin >= -meta.tol;
        Certificate { condition_id, lhs, rhs, margin, holds, method, meta }
    }

    /// Same values under a different condition id.
    pub fn relabel(mut self, condition_id: ConditionId) -> Self {
        self.condition_id = condition_id;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate fields are finite")
    }
}
