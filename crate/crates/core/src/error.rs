use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown {kind} '{tag}'")]
    Registry { kind: &'static str, tag: String },

    #[error("no sign change in bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracketing {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("outside domain of validity: {0}")]
    Domain(String),

    #[error("block structure violated: element ({row}, {col}) = {value} couples sectors {sector_row} and {sector_col}")]
    Structure {
        row: usize,
        col: usize,
        value: f64,
        sector_row: i32,
        sector_col: i32,
    },

    #[error("tracking grid too coarse near J = {j} MHz: best step overlap {overlap:.3} < {threshold}")]
    GridTooCoarse { j: f64, overlap: f64, threshold: f64 },

    #[error("sweep spec error: {0}")]
    Spec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
