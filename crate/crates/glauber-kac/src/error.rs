use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("kernel support is empty for gamma = {gamma} on a lattice of half-size {half_size}")]
    EmptyKernel { gamma: f64, half_size: usize },
    #[error("measure is not isotropic: {0}")]
    NonIsotropic(String),
    #[error("moment problem infeasible: Hankel minor of order {order} equals {determinant:.3e}")]
    InfeasibleMoments { order: usize, determinant: f64 },
    #[error("leading coefficient {value} is below the admissible bound {bound} for n = {n}")]
    InadmissibleLeading { n: usize, value: f64, bound: f64 },
    #[error("stopping threshold {threshold} reached at t = {time}")]
    Stopped { threshold: f64, time: f64 },
    #[error("remainder blew up at t = {time}: sup norm {norm:.3e}")]
    BlowUp { time: f64, norm: f64 },
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
