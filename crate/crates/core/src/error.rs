use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the range a table or grid was built for.
    #[error("{what} = {value} is outside the supported range [{lo}, {hi}]")]
    Range {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// A requested table would exceed the configured memory budget.
    #[error("sieve limit {limit} exceeds the memory budget of {budget} entries")]
    Resource { limit: u64, budget: u64 },

    /// Mathematical domain violation (e.g. J(u) for u <= 0).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation at a pole of g(s): s = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    /// A root finder failed to bracket or converge.
    #[error("solver failure: {0}")]
    Solver(String),

    /// |g| came too close to zero on an argument-principle contour.
    #[error("contour passes within {min_abs:e} of a zero or pole (margin {margin:e}); move the contour")]
    Contour { min_abs: f64, margin: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// The brute-force oracle was asked for an input above its scale.
    #[error("n = {n} exceeds the oracle scale {max}")]
    Scale { n: u64, max: u64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn check_range(what: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::Range { what, value, lo, hi })
    }
}
