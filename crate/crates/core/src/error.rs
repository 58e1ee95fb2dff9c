use thiserror::Error;

/// Errors produced by the models, the state engines and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no cooperativity reaches efficiency {target} (maximum is {max})")]
    NoSolution { target: f64, max: f64 },

    #[error("unsupported regime: {0}")]
    Unsupported(String),

    #[error("photon number {needed} exceeds the Fock cutoff {cutoff}")]
    CutoffOverflow { needed: usize, cutoff: usize },

    #[error("register of {requested} qubits exceeds the cap of {cap}")]
    SizeCap { requested: usize, cap: usize },

    #[error("expected {expected} EPR resources, got {got}")]
    ResourceMismatch { expected: usize, got: usize },

    #[error("EPR resource {0} was erased")]
    ErasedResource(usize),

    #[error("distribution incomplete: links {0:?} have no EPR pair")]
    DistributionIncomplete(Vec<usize>),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("config line {line}: {message}")]
    ConfigParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_fraction(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {x} is outside [0, 1]")))
    }
}
