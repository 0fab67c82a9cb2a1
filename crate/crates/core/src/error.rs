use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed cycle notation at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("image list is not a bijection")]
    NotABijection,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("not a subgroup of the ambient group")]
    NotSubgroup,
    #[error("group is not transitive")]
    Intransitive,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{p} does not divide the group order {order}")]
    PrimeDoesNotDivide { p: u64, order: u128 },
    #[error("group is not a {0}-group")]
    NotPGroup(u64),
    #[error("Sylow {0}-subgroup is elementary abelian")]
    ElementaryAbelian(u64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown group name: {0}")]
    UnknownGroup(String),
    #[error("matrix is not invertible")]
    NonInvertibleMatrix,
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("no witness found and exhaustive search is out of range ({0} points)")]
    Undecided(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
