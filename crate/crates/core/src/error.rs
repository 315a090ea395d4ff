use thiserror::Error;

/// Errors raised by field construction, matrix algebra, and the census engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} is outside the supported range 2..=16")]
    InvalidDegree(u32),
    #[error("polynomial {poly:#X} has degree {actual}, expected degree {expected}")]
    DegreeMismatch { poly: u32, expected: u32, actual: u32 },
    #[error("polynomial {poly:#X} is reducible: it has a factor of degree {factor_degree}")]
    ReduciblePolynomial { poly: u32, factor_degree: u32 },
    #[error("element {value:#X} does not belong to GF(2^{r})")]
    ElementOutOfRange { value: u32, r: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("first row must not be empty")]
    EmptyRow,
    #[error("Hadamard first row length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("Type-I inner row must start with 0x1 and have length at least 1")]
    InnerRowMustStartWithOne,
    #[error("parameter outside the Type-I domain: {0}")]
    ParameterDomain(String),
    #[error("generator circulant is singular")]
    SingularGenerator,
    #[error("matrix is {nrows}x{ncols}, expected a square matrix")]
    NotSquare { nrows: usize, ncols: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("index set must be nonempty and strictly increasing")]
    InvalidIndexSet,
    #[error("matrix order {0} is too small for this predicate")]
    OrderTooSmall(usize),

    #[error("matrix order {0} is odd, expected an even order")]
    OddOrder(usize),
    #[error("matrix is not involutory")]
    NotInvolutory,
    #[error("block {0} is singular; the input is not MDS")]
    SingularBlock(&'static str),
    #[error("matrix is not Hadamard-structured")]
    NotHadamard,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no closed formula for class {0}")]
    NoClosedForm(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
