use divcorr_core::error::Category;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] divcorr_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Core(e) => match e.category() {
                Category::Config => "config",
                Category::Range => "range",
                Category::Capacity => "capacity",
                Category::Degeneracy => "math-degeneracy",
            },
            CliError::Io(_) | CliError::Output(_) => "capacity",
        }
    }

    /// 2 config, 3 range, 4 capacity, 5 degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "config" => 2,
            "range" => 3,
            "capacity" => 4,
            _ => 5,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
