//! Manifest loading, probe orchestration, and report emission.
//!
//! A run manifest is a TOML file naming probes and overriding their
//! defaults. Reports are emitted as CSV (one row per scale, fixed column
//! order) and JSON (the full report, per-trial payloads included), both
//! written atomically and byte-identical across repeated runs: every
//! float is printed with 17 significant digits and wall-clock fields are
//! normalized away.

pub mod emit;
pub mod manifest;
pub mod runner;

pub use manifest::{load_manifest, manifest_from_str, Format, ManifestError, RunManifest};
pub use runner::{exit_code, run};
