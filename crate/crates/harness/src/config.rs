use std::fmt;
use std::str::FromStr;

use sparsenum_core::arithmetic::PrimeSet;
use sparsenum_core::bounds::DEFAULT_PRECISION_CAP;
use sparsenum_core::BigNat;

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    Thm11,
    Thm12,
    Thm13,
    Thm14,
    Thm15,
    MatveevAudit,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 6] = [
        ExperimentId::Thm11,
        ExperimentId::Thm12,
        ExperimentId::Thm13,
        ExperimentId::Thm14,
        ExperimentId::Thm15,
        ExperimentId::MatveevAudit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentId::Thm11 => "thm11",
            ExperimentId::Thm12 => "thm12",
            ExperimentId::Thm13 => "thm13",
            ExperimentId::Thm14 => "thm14",
            ExperimentId::Thm15 => "thm15",
            ExperimentId::MatveevAudit => "matveev-audit",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(HarnessError::Config(format!("unknown format '{other}'"))),
        }
    }
}

/// Parameters for one experiment run. Fields irrelevant to the chosen
/// experiment are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub id: ExperimentId,
    pub k: usize,
    pub b: u32,
    pub primes: Vec<u64>,
    pub limit: BigNat,
    pub epsilon: f64,
    /// Threshold/requirement pair for thm13 (1, 2 or 3).
    pub variant: u8,
    /// Random instances per family for the audit.
    pub count: usize,
    pub seed: u64,
    pub workers: usize,
    pub precision_cap: u32,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn new(id: ExperimentId) -> Self {
        Self {
            id,
            k: 2,
            b: 10,
            primes: vec![2, 3, 5],
            limit: BigNat::from(1_000_000u32),
            epsilon: 0.1,
            variant: 1,
            count: 100,
            seed: 0,
            workers: 1,
            precision_cap: DEFAULT_PRECISION_CAP,
            format: OutputFormat::Csv,
        }
    }

    pub fn prime_set(&self) -> Result<PrimeSet, HarnessError> {
        PrimeSet::new(self.primes.clone()).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Checks the preconditions of the selected experiment.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        if self.precision_cap < 128 {
            return bad("precision cap must be at least 128 bits".into());
        }
        match self.id {
            ExperimentId::Thm11 => {
                self.prime_set()?;
                if self.k < 1 {
                    return bad("thm11 needs k >= 1".into());
                }
                if self.limit < BigNat::from(2u32) {
                    return bad("thm11 needs limit >= 2".into());
                }
            }
            ExperimentId::Thm12 => {
                if self.k < 1 {
                    return bad("thm12 needs k >= 1".into());
                }
                let cap = 1.0 / self.k as f64;
                if !(self.epsilon > 0.0 && self.epsilon < cap) {
                    return bad(format!("thm12 needs 0 < epsilon < 1/k = {cap}"));
                }
            }
            ExperimentId::Thm13 => {
                if !(1..=3).contains(&self.variant) {
                    return bad("thm13 variant must be 1, 2 or 3".into());
                }
                if u64::try_from(&self.limit).is_err() {
                    return bad("thm13 scans every integer; limit must fit in 64 bits".into());
                }
            }
            ExperimentId::Thm14 => {
                self.prime_set()?;
                if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
                    return bad("thm14 needs 0 < epsilon < 1".into());
                }
            }
            ExperimentId::Thm15 => {
                self.prime_set()?;
                if self.b < 2 {
                    return bad("thm15 needs b >= 2".into());
                }
                if self.k < 2 {
                    return bad("thm15 needs k >= 2".into());
                }
                let cap = 1.0 / (self.k as f64 - 1.0);
                if !(self.epsilon > 0.0 && self.epsilon < cap) {
                    return bad(format!("thm15 needs 0 < epsilon < 1/(k-1) = {cap}"));
                }
            }
            ExperimentId::MatveevAudit => {
                if self.count < 1 {
                    return bad("matveev-audit needs count >= 1".into());
                }
            }
        }
        Ok(())
    }
}
