//! JSON documents for specs, grids, signals and reports.
//!
//! Every writer emits pretty-printed JSON with shortest round-trip float
//! rendering, so write → read → write reproduces the bytes exactly.

use crate::error::{CliError, CliResult};
use num_complex::Complex64;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sphereframe::frames::{FrameSpec, Metadata, Scale, Signal};
use sphereframe::harmonics::{CoeffTable, MultiIndex, Rotation};
use sphereframe::quadrature::{RotationRule, Variant};
use std::path::Path;

pub const VERSION: u32 = 1;

/// Orthogonality tolerance for rotations read from disk.
const ROTATION_TOL: f64 = 1e-10;

/// `[n, [k_1, …, k_{d-2}], re, im]`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffRow(pub u32, pub Vec<i32>, pub f64, pub f64);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetadataFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steerable_k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant_m: Option<usize>,
    /// `d × d`, row-major.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_rotation: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleFile {
    pub j: usize,
    pub bandwidth: u32,
    pub coeffs: Vec<CoeffRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameSpecFile {
    pub version: u32,
    pub d: usize,
    pub metadata: MetadataFile,
    pub scales: Vec<ScaleFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFile {
    pub version: u32,
    pub d: usize,
    pub variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steer_k: Option<u32>,
    pub class_degree: u32,
    /// One row-major `d × d` matrix per rotation.
    pub rotations: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalFile {
    pub version: u32,
    pub d: usize,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub coeffs: Vec<CoeffRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub version: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub body: serde_json::Value,
}

fn rows(table: &CoeffTable) -> Vec<CoeffRow> {
    table
        .iter()
        .map(|(n, k, c)| CoeffRow(n, k.as_slice().to_vec(), c.re, c.im))
        .collect()
}

fn table(d: usize, rows: &[CoeffRow]) -> CliResult<CoeffTable> {
    let mut t = CoeffTable::new(d);
    for CoeffRow(n, k, re, im) in rows {
        if !re.is_finite() || !im.is_finite() {
            return Err(CliError::Input(format!("non-finite coefficient at degree {n}")));
        }
        t.insert(*n, MultiIndex::new(k.clone()), Complex64::new(*re, *im))?;
    }
    Ok(t)
}

impl FrameSpecFile {
    pub fn from_spec(spec: &FrameSpec) -> Self {
        let m = spec.metadata();
        FrameSpecFile {
            version: VERSION,
            d: spec.dim(),
            metadata: MetadataFile {
                steerable_k: m.steerable_k,
                invariant_m: m.invariant_m,
                base_rotation: m.base_rotation.as_ref().map(|b| b.as_row_major().to_vec()),
            },
            scales: spec
                .scales()
                .iter()
                .enumerate()
                .map(|(j, s)| ScaleFile {
                    j,
                    bandwidth: s.bandwidth,
                    coeffs: rows(&s.coeffs),
                })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> CliResult<FrameSpec> {
        check_version(self.version)?;
        let base_rotation = self
            .metadata
            .base_rotation
            .as_ref()
            .map(|data| Rotation::from_row_major(self.d, data.clone(), ROTATION_TOL))
            .transpose()?;
        let mut scales = Vec::with_capacity(self.scales.len());
        for (pos, s) in self.scales.iter().enumerate() {
            if s.j != pos {
                return Err(CliError::Input(format!("scale at position {pos} is labelled j = {}", s.j)));
            }
            scales.push(Scale {
                bandwidth: s.bandwidth,
                coeffs: table(self.d, &s.coeffs)?,
            });
        }
        let metadata = Metadata {
            steerable_k: self.metadata.steerable_k,
            invariant_m: self.metadata.invariant_m,
            base_rotation,
        };
        let spec = FrameSpec::new(self.d, scales, metadata)?;
        spec.validate_metadata()?;
        Ok(spec)
    }
}

impl GridFile {
    pub fn from_rule(rule: &RotationRule, d: usize) -> Self {
        GridFile {
            version: VERSION,
            d,
            variant: rule.variant.name().to_string(),
            steer_k: rule.variant.steer_order(),
            class_degree: rule.class_degree,
            rotations: rule.rotations.iter().map(|g| g.as_row_major().to_vec()).collect(),
            weights: rule.weights.clone(),
        }
    }

    pub fn to_rule(&self) -> CliResult<RotationRule> {
        check_version(self.version)?;
        if self.rotations.len() != self.weights.len() {
            return Err(CliError::Input("rotation and weight counts differ".into()));
        }
        if let Some(w) = self.weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(CliError::Input(format!("grid weight {w} is not positive")));
        }
        let rotations = self
            .rotations
            .iter()
            .map(|r| Rotation::from_row_major(self.d, r.clone(), ROTATION_TOL))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RotationRule {
            rotations,
            weights: self.weights.clone(),
            class_degree: self.class_degree,
            variant: Variant::parse(&self.variant, self.steer_k)?,
        })
    }
}

impl SignalFile {
    pub fn from_signal(f: &Signal, seed: Option<u64>) -> Self {
        SignalFile {
            version: VERSION,
            d: f.dim(),
            degree: f.degree(),
            seed,
            coeffs: rows(f.coeffs()),
        }
    }

    pub fn to_signal(&self) -> CliResult<Signal> {
        check_version(self.version)?;
        Ok(Signal::new(table(self.d, &self.coeffs)?, self.degree)?)
    }
}

impl ReportFile {
    pub fn new(command: &str, seed: Option<u64>, body: serde_json::Value) -> Self {
        ReportFile {
            version: VERSION,
            command: command.to_string(),
            seed,
            body,
        }
    }
}

fn check_version(v: u32) -> CliResult<()> {
    if v == VERSION {
        Ok(())
    } else {
        Err(CliError::Input(format!("unsupported file version {v}")))
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("parse error: {e}")))
}

pub fn read<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    from_json(&text)
        .map_err(|e| CliError::Input(format!("{}: {}", path.display(), e.message())))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

pub fn write<T: Serialize>(path: &Path, doc: &T) -> CliResult<()> {
    write_bytes(path, to_json(doc).as_bytes())
}

pub fn read_spec(path: &Path) -> CliResult<FrameSpec> {
    read::<FrameSpecFile>(path)?.to_spec()
}
