use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("non-finite sample at flat index {index}")]
    NonFiniteInput { index: usize },
    #[error("multiplier `{description}` is not finite at unguarded frequency k = {k:?}")]
    NonFiniteSymbol { description: String, k: [i64; 3] },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("no sample times fall inside the usable window [{lo}, {hi}]")]
    EmptyWindow { lo: f64, hi: f64 },
    #[error("evaluation time {t} is not below the quadrature horizon {t_max}")]
    BeyondHorizon { t: f64, t_max: f64 },
    #[error("Picard iteration diverged: distance ratios {ratios:?}; try a larger T")]
    PicardDivergence { ratios: Vec<f64> },
    #[error("time step produced non-finite values at t = {t}")]
    NonFiniteStep { t: f64 },
    #[error("H^1 norm grew by a factor {growth:.3e} at t = {t}; aborting")]
    BlowUp { t: f64, growth: f64 },
    #[error("snapshot {path}: {reason}")]
    Snapshot { path: PathBuf, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
