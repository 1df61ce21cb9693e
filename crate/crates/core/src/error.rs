use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// The weighted information matrix is singular; the listed columns are
    /// linearly dependent on earlier columns of the design.
    #[error("rank-deficient design: column(s) {columns:?} are aliased")]
    RankDeficient { columns: Vec<String> },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// Both latent classes carry zero joint mass for this subject.
    #[error("degenerate subject at row {row}: zero joint mass in both latent classes")]
    DegenerateSubject { row: usize },

    #[error("unidentifiable fit: average sensitivity + specificity is exactly 1")]
    Unidentifiable,

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("OLS correction infeasible: corrected second-moment matrix has eigenvalue {eigenvalue:e}")]
    CorrectionInfeasible { eigenvalue: f64 },

    #[error("CSV error at row {row}: {message}")]
    Csv { row: usize, message: String },

    #[error("missing column: {0}")]
    MissingColumn(String),

    #[error("invalid mediator code {value} at row {row} (expected 0/1 or 1/2)")]
    MediatorCode { row: usize, value: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
