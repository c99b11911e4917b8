//! Machine-readable run reports. Serialization is deterministic for a fixed
//! configuration and seed: fields are plain structs (fixed order), every
//! vector has a canonical order, and complex numbers are [re, im] pairs.
//! Exact rationals print as "p/q" strings.

use gaudin_core::scalar::{Complex64, Rational};
use serde::{Deserialize, Serialize};

pub fn c2(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn cvec(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(c2).collect()
}

pub fn rational_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsSection {
    pub multiplicity: i64,
    pub dimension_difference: i64,
    pub alternating_count: i64,
    pub singular_dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissible_sequences: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub t: Vec<[f64; 2]>,
    pub lambda: Vec<[f64; 2]>,
    pub residual: f64,
    pub hessian_det: [f64; 2],
    pub hessian_min_sv: f64,
    pub hessian_cond: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_lambda: Option<Vec<String>>,
    pub from_multistart: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuchsianSection {
    pub h_coeffs: Vec<[f64; 2]>,
    pub second_solution_degree: usize,
    pub second_solution_roots: Vec<[f64; 2]>,
    pub wronskian_rel_err: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_residual: Option<f64>,
    pub exact_division: bool,
    pub nondegenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheSection {
    pub e_residual: f64,
    pub eigenvalues: Vec<[f64; 2]>,
    pub eigen_residual: f64,
    pub pairing_square: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_identity_rel_err: Option<f64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSection {
    pub gram_det: [f64; 2],
    pub column_norms: Vec<f64>,
    pub is_basis: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineSection {
    pub base_lambda: Vec<[f64; 2]>,
    pub direction_lambda: Vec<[f64; 2]>,
    pub h_coeffs: Vec<[f64; 2]>,
    pub sample_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_orbit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub config_digest: String,
    pub m: Vec<u32>,
    pub k: usize,
    pub z: Vec<[f64; 2]>,
    pub mode: String,
    pub seed: u64,
    pub regime: String,
    pub expected: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<CountsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbits: Option<Vec<OrbitReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuchsian: Option<Vec<FuchsianSection>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bethe: Option<Vec<BetheSection>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lines: Option<Vec<LineSection>>,
    pub genericity_flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds_failed: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multistart_used: Option<bool>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
