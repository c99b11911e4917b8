use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration points z[{i}] and z[{j}] coincide")]
    CoincidentPoints { i: usize, j: usize },

    #[error("point lies on the arrangement: {0}")]
    Arrangement(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("regime is {found}; {hint}")]
    RegimeMismatch { found: String, hint: String },

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error(
        "not a critical point: division remainder {remainder:.3e} exceeds tolerance {tol:.3e}"
    )]
    NotCritical { remainder: f64, tol: f64 },

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
