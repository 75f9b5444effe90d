use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("exponent {field}[{index}] = {value}: {reason}")]
    InvalidExponent {
        field: String,
        index: usize,
        value: f64,
        reason: String,
    },

    /// A cell power left the range of finite doubles.
    #[error("overflow in cell {cell} ({context})")]
    Overflow { cell: usize, context: String },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: String, iterations: usize },

    /// The precondition of a probe does not hold; `modular` is the measured value.
    #[error("premise not satisfied: {context} (measured modular {modular})")]
    Premise { context: String, modular: f64 },

    #[error("component {index}: {source}")]
    Component {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_component(self, index: usize) -> Self {
        Error::Component {
            index,
            source: Box::new(self),
        }
    }

    /// Strips `Component` wrappers.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Component { source, .. } => source.root_cause(),
            e => e,
        }
    }
}
