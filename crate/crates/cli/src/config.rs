//! Run configuration: JSON on disk, resolved into a concrete problem
//! instance plus solver settings. Marker points are either explicit
//! [re, im] pairs or the token "generic:<seed>" for a reproducible draw.

use anyhow::{bail, Context};
use gaudin_core::master::generic_configuration;
use gaudin_core::scalar::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZSpec {
    Generic(String),
    Points(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Tolerances {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dedup: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line_sample: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub m: Vec<u32>,
    pub k: usize,
    pub z: ZSpec,
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Float,
    Exact,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Float => "float",
            Mode::Exact => "exact",
        })
    }
}

/// Fully resolved configuration: explicit marker points, explicit knobs.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub m: Vec<u32>,
    pub k: usize,
    pub z: Vec<Complex64>,
    pub mode: Mode,
    pub seed: u64,
    pub s: f64,
    pub tol_newton: f64,
    pub tol_dedup: f64,
    pub tol_line_sample: f64,
}

pub struct Overrides {
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub s: Option<f64>,
    pub tol_newton: Option<f64>,
    pub tol_dedup: Option<f64>,
}

pub fn resolve(cfg: &RunConfig, over: &Overrides) -> anyhow::Result<Resolved> {
    if cfg.m.is_empty() {
        bail!("m must contain at least one weight");
    }
    if cfg.m.iter().all(|&x| x == 0) {
        bail!("m must contain a positive weight");
    }
    if cfg.k == 0 {
        bail!("k must be positive");
    }
    let z: Vec<Complex64> = match &cfg.z {
        ZSpec::Points(pts) => {
            if pts.len() != cfg.m.len() {
                bail!("{} marker points for {} weights", pts.len(), cfg.m.len());
            }
            pts.iter().map(|p| Complex64::new(p[0], p[1])).collect()
        }
        ZSpec::Generic(token) => {
            let seed_str = token
                .strip_prefix("generic:")
                .with_context(|| format!("bad z token {token:?}, expected \"generic:<seed>\""))?;
            let zseed: u64 = seed_str
                .parse()
                .with_context(|| format!("bad generic seed {seed_str:?}"))?;
            generic_configuration(zseed, cfg.m.len())
        }
    };
    let mode_str = over
        .mode
        .clone()
        .or_else(|| cfg.mode.clone())
        .unwrap_or_else(|| "float".into());
    let mode = match mode_str.as_str() {
        "float" => Mode::Float,
        "exact" => Mode::Exact,
        other => bail!("unknown mode {other:?}, expected \"exact\" or \"float\""),
    };
    let tol = cfg.tolerances.clone().unwrap_or_default();
    Ok(Resolved {
        m: cfg.m.clone(),
        k: cfg.k,
        z,
        mode,
        seed: over.seed.or(cfg.seed).unwrap_or(0),
        s: over.s.or(cfg.s).unwrap_or(32.0),
        tol_newton: over.tol_newton.or(tol.newton).unwrap_or(1e-12),
        tol_dedup: over.tol_dedup.or(tol.dedup).unwrap_or(1e-6),
        tol_line_sample: tol.line_sample.unwrap_or(1e-9),
    })
}

impl Resolved {
    pub fn solver_config(&self) -> gaudin_core::solver::SolverConfig {
        gaudin_core::solver::SolverConfig {
            s: self.s,
            newton_tol: self.tol_newton,
            dedup_tol: self.tol_dedup,
            line_sample_tol: self.tol_line_sample,
            seed: self.seed,
            ..gaudin_core::solver::SolverConfig::default()
        }
    }

    /// Stable digest of everything that determines the run.
    pub fn digest(&self) -> String {
        let mut repr = format!(
            "m={:?};k={};mode={};seed={};s={};tn={};td={};tl={};z=",
            self.m,
            self.k,
            self.mode,
            self.seed,
            self.s,
            self.tol_newton,
            self.tol_dedup,
            self.tol_line_sample
        );
        for zl in &self.z {
            repr.push_str(&format!("({:x},{:x})", zl.re.to_bits(), zl.im.to_bits()));
        }
        // FNV-1a, 64-bit.
        let mut hash: u64 = 0xcbf29ce484222325;
        for b in repr.as_bytes() {
            hash ^= *b as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
        format!("{hash:016x}")
    }
}
