//! Probe drivers: one operation per measured inequality.
//!
//! Each probe sweeps a scale list (a cap width, a ball radius, a bump
//! count, a dyadic level), measures norms or ratios at every scale with
//! seeded random trials, fits a log-log slope where the claim is an
//! exponent, and returns a [`ProbeReport`] whose verdict compares the
//! measurement against the predicted exponent or bound at the configured
//! tolerance. All trial randomness is keyed by `(seed, scale index,
//! trial index)`, so reports are bit-identical across runs and worker
//! counts.

mod bilinear;
pub mod fresnel;
mod linear;
mod multilinear;
mod special_fn;

pub use bilinear::{bilinear_ratio_direct, reverse_square_trial_ratio, CapLayout};
pub use special_fn::bessel_j0;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::SlopeFit;

/// Declarative description of one probe run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Registry id of the probe to run.
    pub kind: String,
    /// Unique label within a manifest; defaults to the kind.
    pub label: String,
    pub seed: u64,
    pub trials: usize,
    /// Strictly monotone scale list (increasing or decreasing).
    pub scales: Vec<f64>,
    /// Tolerance on fitted exponents: `|fitted - target| <= slope_tol`.
    pub slope_tol: f64,
    /// Tolerance on bounds: `value <= bound (1 + defect_tol)`.
    pub defect_tol: f64,
    /// Probe-specific numeric parameters.
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl ProbeConfig {
    pub fn param(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::BadConfig {
                reason: "trials must be at least 1".into(),
            });
        }
        if !(self.slope_tol > 0.0) || !(self.defect_tol > 0.0) {
            return Err(Error::BadConfig {
                reason: "tolerances must be positive".into(),
            });
        }
        if self.scales.is_empty() {
            return Err(Error::BadConfig {
                reason: "scale list must be non-empty".into(),
            });
        }
        if self.scales.iter().any(|s| !s.is_finite()) {
            return Err(Error::BadConfig {
                reason: "scale list must be finite".into(),
            });
        }
        if self.scales.len() >= 2 {
            let increasing = self.scales.windows(2).all(|w| w[0] < w[1]);
            let decreasing = self.scales.windows(2).all(|w| w[0] > w[1]);
            if !increasing && !decreasing {
                return Err(Error::BadConfig {
                    reason: "scale list must be strictly monotone".into(),
                });
            }
        }
        Ok(())
    }
}

/// Per-scale measurement with the raw per-trial payloads.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScaleRow {
    pub scale: f64,
    /// Headline value at this scale (a max ratio, a sup norm, a mean).
    pub measured: f64,
    /// One entry per non-skipped trial.
    pub trial_values: Vec<f64>,
    pub skipped_trials: usize,
    /// Secondary named quantities at this scale.
    #[serde(default)]
    pub extra: BTreeMap<String, f64>,
}

/// How a check compares its value against its target. All slacks are
/// additive, so shrinking the tolerance can only flip pass into fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckKind {
    /// `|value - target| <= tolerance`
    Within,
    /// `value <= target + tolerance`
    AtMost,
    /// `value >= target - tolerance`
    AtLeast,
}

/// One named pass/fail criterion inside a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub kind: CheckKind,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, value: f64, target: f64, tolerance: f64, kind: CheckKind) -> Self {
        let pass = match kind {
            CheckKind::Within => (value - target).abs() <= tolerance,
            CheckKind::AtMost => value <= target + tolerance,
            CheckKind::AtLeast => value >= target - tolerance,
        };
        Check {
            name: name.into(),
            value,
            target,
            tolerance,
            kind,
            pass,
        }
    }
}

/// Full result of one probe run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport {
    pub label: String,
    pub kind: String,
    pub seed: u64,
    pub trials: usize,
    /// Trials rejected by preconditions (margins, guards), never silently
    /// dropped.
    pub rejected_trials: usize,
    pub rows: Vec<ScaleRow>,
    /// Log-log fit of the headline measurement against the scale, when
    /// the scale list has at least two usable entries.
    pub fit: Option<SlopeFit>,
    /// Predicted exponent, when the claim under test is a power law.
    pub target_exponent: Option<f64>,
    /// What the target means and where the predicted value comes from.
    pub target_note: String,
    /// Largest measured ratio/constant across all scales and trials.
    pub empirical_constant: f64,
    pub checks: Vec<Check>,
    pub verdict: bool,
    /// Wall-clock runtime; normalized away in deterministic emissions.
    pub runtime_ms: u64,
    pub error: Option<String>,
}

impl ProbeReport {
    fn verdict_from_checks(checks: &[Check]) -> bool {
        checks.iter().all(|c| c.pass)
    }
}

/// Builder used by the probe implementations.
pub(crate) struct ReportBuilder {
    label: String,
    kind: String,
    seed: u64,
    trials: usize,
    rejected_trials: usize,
    rows: Vec<ScaleRow>,
    fit: Option<SlopeFit>,
    target_exponent: Option<f64>,
    target_note: String,
    empirical_constant: f64,
    checks: Vec<Check>,
}

impl ReportBuilder {
    pub fn new(config: &ProbeConfig) -> Self {
        ReportBuilder {
            label: config.label.clone(),
            kind: config.kind.clone(),
            seed: config.seed,
            trials: config.trials,
            rejected_trials: 0,
            rows: Vec::new(),
            fit: None,
            target_exponent: None,
            target_note: String::new(),
            empirical_constant: 0.0,
            checks: Vec::new(),
        }
    }

    pub fn row(&mut self, row: ScaleRow) -> &mut Self {
        self.empirical_constant = self.empirical_constant.max(row.measured);
        self.rows.push(row);
        self
    }

    pub fn peek_rows(&self) -> &[ScaleRow] {
        &self.rows
    }

    pub fn reject_trials(&mut self, n: usize) -> &mut Self {
        self.rejected_trials += n;
        self
    }

    pub fn target(&mut self, exponent: f64, note: &str) -> &mut Self {
        self.target_exponent = Some(exponent);
        self.target_note = note.into();
        self
    }

    pub fn note(&mut self, note: &str) -> &mut Self {
        self.target_note = note.into();
        self
    }

    pub fn fit(&mut self, fit: SlopeFit) -> &mut Self {
        self.fit = Some(fit);
        self
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    /// Fit the headline measurements against the scales and add a
    /// `Within` check on the exponent. Skipped when fewer than two rows
    /// carry positive values (a degenerate fit is refused, not faked).
    pub fn fit_headline(&mut self, target: f64, tol: f64, name: &str) -> &mut Self {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.scale > 0.0 && r.measured > 0.0)
            .map(|r| (r.scale, r.measured))
            .collect();
        if pts.len() >= 2 {
            if let Ok(fit) = crate::spectral::fit_slope(&pts) {
                self.checks
                    .push(Check::new(name, fit.exponent, target, tol, CheckKind::Within));
                self.fit = Some(fit);
            }
        }
        self
    }

    pub fn build(self) -> ProbeReport {
        let verdict = ProbeReport::verdict_from_checks(&self.checks);
        ProbeReport {
            label: self.label,
            kind: self.kind,
            seed: self.seed,
            trials: self.trials,
            rejected_trials: self.rejected_trials,
            rows: self.rows,
            fit: self.fit,
            target_exponent: self.target_exponent,
            target_note: self.target_note,
            empirical_constant: self.empirical_constant,
            checks: self.checks,
            verdict,
        runtime_ms: 0,
            error: None,
        }
    }
}

/// A registered probe.
pub struct ProbeDef {
    pub id: &'static str,
    pub summary: &'static str,
    pub defaults: fn(seed: u64) -> ProbeConfig,
    pub run: fn(&ProbeConfig) -> Result<ProbeReport>,
}

/// All probes, in a stable order.
pub fn registry() -> &'static [ProbeDef] {
    &[
        ProbeDef {
            id: "hausdorff-young",
            summary: "transform norm ratios ||f^||_p' / ||f||_p stay below 1 for 1 <= p <= 2",
            defaults: linear::hausdorff_young_defaults,
            run: linear::hausdorff_young_probe,
        },
        ProbeDef {
            id: "khintchine",
            summary: "random sign sums of spread bumps: ||f^||_p' grows like m^(1/2), ||f||_p like m^(1/p)",
            defaults: linear::khintchine_defaults,
            run: linear::khintchine_probe,
        },
        ProbeDef {
            id: "knapp",
            summary: "cap indicators under the extension operator probe the admissible exponent line",
            defaults: linear::knapp_defaults,
            run: linear::knapp_probe,
        },
        ProbeDef {
            id: "stein-tomas-pieces",
            summary: "dyadic pieces of the surface-measure transform: sup-norm decay and spectral growth",
            defaults: linear::stein_tomas_defaults,
            run: linear::stein_tomas_probe,
        },
        ProbeDef {
            id: "reverse-square",
            summary: "geometric-mean L4 norm controlled by cap square functions on separated intervals",
            defaults: bilinear::reverse_square_defaults,
            run: bilinear::reverse_square_probe,
        },
        ProbeDef {
            id: "transverse-packet",
            summary: "L4 interaction of fields band-limited to transverse plates scales like delta^((n+2)/4)",
            defaults: bilinear::transverse_packet_defaults,
            run: bilinear::transverse_packet_probe,
        },
        ProbeDef {
            id: "bilinear",
            summary: "product extension estimate on balls: uniform in radius, with a distance power sweep",
            defaults: bilinear::bilinear_defaults,
            run: bilinear::bilinear_probe,
        },
        ProbeDef {
            id: "whitney-assembly",
            summary: "squared extension reassembled from diagonal-pair pieces up to the uncovered strip",
            defaults: bilinear::whitney_assembly_defaults,
            run: bilinear::whitney_assembly_probe,
        },
        ProbeDef {
            id: "superposition",
            summary: "low-exponent quasi-norm superposition and spectrally disjoint family norms",
            defaults: multilinear::superposition_defaults,
            run: multilinear::superposition_probe,
        },
        ProbeDef {
            id: "loomis-whitney",
            summary: "discrete projection inequality on lattices, brute force, sharp constant one",
            defaults: multilinear::loomis_whitney_defaults,
            run: multilinear::loomis_whitney_probe,
        },
        ProbeDef {
            id: "lattice-partition",
            summary: "band-limited partition of unity sums to one; weighted window sums stay bounded",
            defaults: multilinear::lattice_partition_defaults,
            run: multilinear::lattice_partition_probe,
        },
        ProbeDef {
            id: "commutation",
            summary: "position/multiplier commutation identity through the extension operator",
            defaults: multilinear::commutation_defaults,
            run: multilinear::commutation_probe,
        },
        ProbeDef {
            id: "mr-growth",
            summary: "trilinear extension constant on parallelepipeds grows slower than any power",
            defaults: multilinear::mr_growth_defaults,
            run: multilinear::mr_growth_probe,
        },
    ]
}

pub fn find_probe(id: &str) -> Result<&'static ProbeDef> {
    registry()
        .iter()
        .find(|d| d.id == id)
        .ok_or_else(|| Error::UnknownProbe { id: id.into() })
}

/// Default configuration for a probe id.
pub fn default_config(id: &str, seed: u64) -> Result<ProbeConfig> {
    Ok((find_probe(id)?.defaults)(seed))
}

/// Validate and run one probe, filling in the runtime.
pub fn run_probe(config: &ProbeConfig) -> Result<ProbeReport> {
    config.validate()?;
    let def = find_probe(&config.kind)?;
    let start = std::time::Instant::now();
    let mut report = (def.run)(config)?;
    report.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

pub(crate) fn base_config(kind: &str, seed: u64, scales: Vec<f64>, trials: usize) -> ProbeConfig {
    ProbeConfig {
        kind: kind.into(),
        label: kind.into(),
        seed,
        trials,
        scales,
        slope_tol: 0.1,
        defect_tol: 1e-6,
        params: BTreeMap::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_unique() {
        let mut ids: Vec<&str> = registry().iter().map(|d| d.id).collect();
        ids.sort();
        let before = ids.len();
        ids.dedup();
        assert_eq!(before, ids.len());
    }

    #[test]
    fn unknown_probe_named_in_error() {
        match find_probe("no-such-probe") {
            Err(Error::UnknownProbe { id }) => assert_eq!(id, "no-such-probe"),
            Err(other) => panic!("unexpected error {other:?}"),
            Ok(_) => panic!("lookup should fail"),
        }
    }

    #[test]
    fn config_validation() {
        let mut c = base_config("knapp", 0, vec![0.5, 0.25, 0.125], 3);
        c.validate().unwrap();
        c.scales = vec![0.5, 0.5];
        assert!(c.validate().is_err());
        c.scales = vec![0.5, 0.25];
        c.trials = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn check_semantics_monotone_in_tolerance() {
        let pass = Check::new("x", 1.05, 1.0, 0.1, CheckKind::Within);
        assert!(pass.pass);
        let fail = Check::new("x", 1.05, 1.0, 0.01, CheckKind::Within);
        assert!(!fail.pass);
        let at_most = Check::new("y", 0.9, 1.0, 1e-9, CheckKind::AtMost);
        assert!(at_most.pass);
        let zero_target = Check::new("z", 5e-7, 0.0, 1e-6, CheckKind::AtMost);
        assert!(zero_target.pass);
        // negative-target one-sided bounds use additive slack
        let slope = Check::new("s", -0.5, -0.4, 1e-9, CheckKind::AtMost);
        assert!(slope.pass);
        let slope_bad = Check::new("s", -0.3, -0.4, 1e-9, CheckKind::AtMost);
        assert!(!slope_bad.pass);
    }
}
