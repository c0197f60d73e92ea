use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole or logarithmic singularity at {0}")]
    Pole(String),
    #[error("Re s = {sigma} lies in the divergence region (Euler product needs Re s >= {limit})")]
    Divergent { sigma: f64, limit: f64 },
    #[error("quadrature did not reach tolerance: estimated error {achieved:.3e}, requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("empty prime system: {0}")]
    EmptySystem(String),
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    #[error("malformed data: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
