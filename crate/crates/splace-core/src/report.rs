//! Run reports: the metrics emitted after a pipeline run, serialized
//! as versioned JSON so downstream tooling can rely on the schema.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bump when a field is added, removed, or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// Wall time per pipeline stage, in seconds.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct StageTimes {
    pub init_s: f64,
    pub refine_s: f64,
    pub place_s: f64,
}

impl StageTimes {
    pub fn total(&self) -> f64 {
        self.init_s + self.refine_s + self.place_s
    }
}

/// Metrics of one placement run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub design: String,
    pub config_hash: String,
    pub seed: u64,
    pub times: StageTimes,
    pub hpwl: f64,
    pub overflow: f64,
    pub iterations: usize,
    pub converged: bool,
    /// stage name if the run stopped early on an error
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_stage: Option<String>,
}

impl RunReport {
    pub fn new(design: impl Into<String>, config_hash: impl Into<String>, seed: u64) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            design: design.into(),
            config_hash: config_hash.into(),
            seed,
            times: StageTimes::default(),
            hpwl: f64::NAN,
            overflow: f64::NAN,
            iterations: 0,
            converged: false,
            failed_stage: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "report schema version {} (expected {})",
                self.schema_version, SCHEMA_VERSION
            )));
        }
        if self.times.init_s < 0.0 || self.times.refine_s < 0.0 || self.times.place_s < 0.0 {
            return Err(Error::Config("stage times must be non-negative".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<RunReport> {
        let report: RunReport = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("bad report JSON: {e}")))?;
        report.validate()?;
        Ok(report)
    }
}

/// Summary statistics over a set of per-seed wirelength results.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeedSweepSummary {
    pub schema_version: u32,
    pub design: String,
    pub config_hash: String,
    pub seeds: Vec<u64>,
    pub hpwl: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// (max - min) / mean, the dispersion figure of merit
    pub range_over_avg: f64,
}

impl SeedSweepSummary {
    pub fn from_runs(
        design: impl Into<String>,
        config_hash: impl Into<String>,
        seeds: Vec<u64>,
        hpwl: Vec<f64>,
    ) -> Result<Self> {
        if seeds.len() != hpwl.len() || hpwl.is_empty() {
            return Err(Error::Config("seed sweep needs one result per seed".into()));
        }
        let min = hpwl.iter().copied().fold(f64::INFINITY, f64::min);
        let max = hpwl.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = hpwl.iter().sum::<f64>() / hpwl.len() as f64;
        Ok(SeedSweepSummary {
            schema_version: SCHEMA_VERSION,
            design: design.into(),
            config_hash: config_hash.into(),
            seeds,
            hpwl,
            min,
            max,
            mean,
            range_over_avg: (max - min) / mean,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips_through_json() {
        let mut r = RunReport::new("d1", "abcd1234", 7);
        r.hpwl = 123.5;
        r.overflow = 0.08;
        r.iterations = 42;
        r.converged = true;
        r.times = StageTimes {
            init_s: 0.1,
            refine_s: 0.2,
            place_s: 1.5,
        };
        let back = RunReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back.design, "d1");
        assert_eq!(back.config_hash, "abcd1234");
        assert_eq!(back.seed, 7);
        assert_eq!(back.iterations, 42);
        assert!((back.times.total() - 1.8).abs() < 1e-12);
        assert!(back.failed_stage.is_none());
    }

    #[test]
    fn wrong_schema_version_rejected() {
        let mut r = RunReport::new("d", "h", 1);
        r.schema_version = 999;
        assert!(RunReport::from_json(&r.to_json()).is_err());
    }

    #[test]
    fn negative_times_rejected() {
        let mut r = RunReport::new("d", "h", 1);
        r.times.place_s = -1.0;
        assert!(r.validate().is_err());
    }

    #[test]
    fn seed_sweep_single_run_degenerates() {
        let s = SeedSweepSummary::from_runs("d", "h", vec![3], vec![10.0]).unwrap();
        assert_eq!(s.min, 10.0);
        assert_eq!(s.max, 10.0);
        assert_eq!(s.mean, 10.0);
        assert_eq!(s.range_over_avg, 0.0);
    }

    #[test]
    fn seed_sweep_statistics() {
        let s =
            SeedSweepSummary::from_runs("d", "h", vec![1, 2, 3], vec![9.0, 10.0, 11.0]).unwrap();
        assert_eq!(s.min, 9.0);
        assert_eq!(s.max, 11.0);
        assert!((s.mean - 10.0).abs() < 1e-12);
        assert!((s.range_over_avg - 0.2).abs() < 1e-12);
        assert!(SeedSweepSummary::from_runs("d", "h", vec![1], vec![]).is_err());
    }
}
