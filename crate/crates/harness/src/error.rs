use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("audit failed: {0}")]
    Audit(String),

    #[error("factorization budget exhausted: {0}")]
    Budget(String),

    #[error(transparent)]
    Core(#[from] sparsenum_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// Process exit code: 2 invalid config, 3 audit failure, 4 fatal budget exhaustion.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Audit(_) => 3,
            HarnessError::Budget(_) => 4,
            HarnessError::Core(sparsenum_core::Error::FactorBudgetExhausted { .. }) => 4,
            HarnessError::Core(_) => 2,
            HarnessError::Io(_) | HarnessError::Csv(_) | HarnessError::Json(_) => 1,
        }
    }
}
