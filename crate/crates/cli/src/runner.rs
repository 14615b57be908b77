//! Probe execution with error capture.

use restriction_core::probes::{run_probe, ProbeConfig, ProbeReport};

use crate::manifest::RunManifest;

/// Run every probe in the manifest. Reports come back in manifest order
/// regardless of scheduling; a probe error becomes a failed report with
/// an error payload rather than a crash.
pub fn run(manifest: &RunManifest) -> Vec<ProbeReport> {
    let configs = &manifest.configs;
    restriction_core::exec::par_map_indexed(configs.len(), |i| run_one(&configs[i]))
}

fn run_one(config: &ProbeConfig) -> ProbeReport {
    match run_probe(config) {
        Ok(report) => report,
        Err(err) => ProbeReport {
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
            verdict: false,
            runtime_ms: 0,
            error: Some(err.to_string()),
        },
    }
}

/// Process exit code: 0 when all verdicts pass, 1 when any fails,
/// 2 when any probe errored.
pub fn exit_code(reports: &[ProbeReport]) -> i32 {
    if reports.iter().any(|r| r.error.is_some()) {
        2
    } else if reports.iter().any(|r| !r.verdict) {
        1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifest::manifest_from_str;

    #[test]
    fn empty_manifest_runs_clean() {
        let m = manifest_from_str("").unwrap();
        let reports = run(&m);
        assert!(reports.is_empty());
        assert_eq!(exit_code(&reports), 0);
    }

    #[test]
    fn guard_failure_becomes_error_report() {
        // a transverse-packet probe with an impossible margin errors out
        let m = manifest_from_str(
            "[[probe]]\nid = \"transverse-packet\"\nnu = 0.001\ntrials = 1\n",
        )
        .unwrap();
        let reports = run(&m);
        assert_eq!(reports.len(), 1);
        assert!(reports[0].error.is_some());
        assert_eq!(exit_code(&reports), 2);
    }
}
