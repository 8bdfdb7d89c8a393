use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a unit: negative power or division by a multi-term expression")]
    NotAUnit,
    #[error("not a total derivative: {0}")]
    NotExact(String),
    #[error("not a skew form: nonzero remainder at lambda^{degree}")]
    NotSkewForm { degree: u32 },
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("Lenard-Magri obstruction: {0}")]
    Obstruction(String),
    #[error("not a contact transformation: {0}")]
    NotContact(String),
    #[error("not an eigenvector of L_(1): {0}")]
    NotEigen(String),
    #[error("map does not have the required shape: {0}")]
    ShapeViolation(String),
    #[error("bad argument: {0}")]
    BadArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
