use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Sim(#[from] qdmera::Error),

    #[error("i/o on {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("results file line {line}: {msg}")]
    Results { line: usize, msg: String },
}

impl HarnessError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.display().to_string(), source }
    }
}
