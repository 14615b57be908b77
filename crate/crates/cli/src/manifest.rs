//! Declarative run manifests.
//!
//! ```toml
//! seed = 7
//! out_dir = "out"
//! formats = ["csv", "json"]
//!
//! [[probe]]
//! id = "knapp"
//! label = "knapp-endpoint"
//! scales = [0.125, 0.0625]
//! p_prime = 4.0        # probe-specific parameters are plain keys
//! ```
//!
//! Every field except `id` is optional; omitted fields take the probe's
//! registry defaults. The global seed seeds every probe that does not set
//! its own.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use restriction_core::probes::{default_config, ProbeConfig};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("manifest parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("{0}")]
    Probe(#[from] restriction_core::Error),
    #[error("duplicate probe label `{label}`")]
    DuplicateLabel { label: String },
    #[error("probe `{label}`: parameter `{key}` must be a number or list of numbers")]
    BadParam { label: String, key: String },
    #[error("unknown output format `{format}` (expected csv or json)")]
    BadFormat { format: String },
}

/// Output format for emitted reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format, ManifestError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(ManifestError::BadFormat {
                format: other.into(),
            }),
        }
    }
}

/// A fully validated run plan.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub configs: Vec<ProbeConfig>,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    pub formats: Vec<Format>,
}

#[derive(Debug, Deserialize)]
struct RawManifest {
    seed: Option<u64>,
    out_dir: Option<String>,
    formats: Option<Vec<String>>,
    #[serde(default)]
    probe: Vec<RawProbe>,
}

#[derive(Debug, Deserialize)]
struct RawProbe {
    id: String,
    label: Option<String>,
    seed: Option<u64>,
    trials: Option<usize>,
    scales: Option<Vec<f64>>,
    slope_tol: Option<f64>,
    defect_tol: Option<f64>,
    #[serde(flatten)]
    params: BTreeMap<String, toml::Value>,
}

/// Load and validate a manifest file.
pub fn load_manifest(path: &Path) -> Result<RunManifest, ManifestError> {
    let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    manifest_from_str(&text)
}

/// Parse and validate manifest text.
pub fn manifest_from_str(text: &str) -> Result<RunManifest, ManifestError> {
    let raw: RawManifest = toml::from_str(text)?;
    let seed = raw.seed.unwrap_or(0);
    let mut configs = Vec::with_capacity(raw.probe.len());
    let mut labels = std::collections::BTreeSet::new();
    for p in raw.probe {
        let mut config = default_config(&p.id, p.seed.unwrap_or(seed))?;
        if let Some(label) = p.label {
            config.label = label;
        }
        if let Some(t) = p.trials {
            config.trials = t;
        }
        if let Some(s) = p.scales {
            config.scales = s;
        }
        if let Some(v) = p.slope_tol {
            config.slope_tol = v;
        }
        if let Some(v) = p.defect_tol {
            config.defect_tol = v;
        }
        for (key, value) in p.params {
            match value.as_float().or_else(|| value.as_integer().map(|i| i as f64)) {
                Some(num) => {
                    config.params.insert(key, num);
                }
                None => {
                    return Err(ManifestError::BadParam {
                        label: config.label,
                        key,
                    })
                }
            }
        }
        config.validate()?;
        if !labels.insert(config.label.clone()) {
            return Err(ManifestError::DuplicateLabel {
                label: config.label,
            });
        }
        configs.push(config);
    }
    let formats = match raw.formats {
        Some(list) => list
            .iter()
            .map(|s| Format::parse(s))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![Format::Csv, Format::Json],
    };
    Ok(RunManifest {
        configs,
        seed,
        out_dir: raw.out_dir.map(PathBuf::from),
        formats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_manifest_fills_defaults() {
        let m = manifest_from_str("[[probe]]\nid = \"knapp\"\n").unwrap();
        assert_eq!(m.configs.len(), 1);
        let c = &m.configs[0];
        assert_eq!(c.kind, "knapp");
        assert_eq!(c.label, "knapp");
        assert_eq!(c.seed, 0);
        assert!(!c.scales.is_empty());
        assert_eq!(m.formats, vec![Format::Csv, Format::Json]);
    }

    #[test]
    fn unknown_probe_id_is_named() {
        let err = manifest_from_str("[[probe]]\nid = \"frobnicate\"\n").unwrap_err();
        assert!(err.to_string().contains("frobnicate"), "{err}");
    }

    #[test]
    fn non_monotone_scales_rejected() {
        let err = manifest_from_str(
            "[[probe]]\nid = \"knapp\"\nscales = [0.5, 0.5, 0.25]\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("monotone"), "{err}");
    }

    #[test]
    fn parse_error_carries_location() {
        let err = manifest_from_str("seed = [[\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn duplicate_labels_rejected() {
        let err = manifest_from_str(
            "[[probe]]\nid = \"knapp\"\n[[probe]]\nid = \"knapp\"\n",
        )
        .unwrap_err();
        assert!(matches!(err, ManifestError::DuplicateLabel { .. }));
    }

    #[test]
    fn probe_params_and_global_seed_flow_through() {
        let m = manifest_from_str(
            "seed = 11\n[[probe]]\nid = \"knapp\"\np_prime = 6.0\nq_prime = 2\n",
        )
        .unwrap();
        let c = &m.configs[0];
        assert_eq!(c.seed, 11);
        assert_eq!(c.param("p_prime", 0.0), 6.0);
        assert_eq!(c.param("q_prime", 0.0), 2.0);
    }

    #[test]
    fn bad_format_rejected() {
        let err =
            manifest_from_str("formats = [\"yaml\"]\n[[probe]]\nid = \"knapp\"\n").unwrap_err();
        assert!(matches!(err, ManifestError::BadFormat { .. }));
    }
}
