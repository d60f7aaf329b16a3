use thiserror::Error;

/// Errors raised by field construction, function evaluation and the analyses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not a supported prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{n} exceeds the table bound of 2^20 elements")]
    OrderTooLarge { p: u32, n: u32 },
    #[error("modulus must be a monic polynomial of degree {degree} with coefficients below {p}")]
    BadModulus { degree: u32, p: u32 },
    #[error("modulus {0} is reducible")]
    ReducibleModulus(String),
    #[error("no primitive element exists for this modulus (it is not irreducible)")]
    NoPrimitiveElement,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element index {index} out of range for a field of order {order}")]
    IndexOutOfRange { index: u64, order: u32 },
    #[error("subfield degree {m} does not divide extension degree {n}")]
    NotADivisor { m: u32, n: u32 },
    #[error("invalid field description `{0}`")]
    FieldDescription(String),
    #[error("exponent 0 is not allowed on a composite or trace power")]
    ZeroExponent,
    #[error("cannot parse function at byte {pos}: {msg}")]
    FuncParse { pos: usize, msg: String },
    #[error("cannot parse element `{0}`")]
    ElemParse(String),
    #[error("expected characteristic {expected}, found {found}")]
    WrongCharacteristic { expected: u32, found: u32 },
    #[error("the cubic parameter must be nonzero")]
    ZeroCubicParameter,
    #[error("table has {found} entries, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("value at index {index} does not lie in the prime field")]
    NotPrimeValued { index: usize },
    #[error("element does not lie in the subfield of degree {m}")]
    NotInSubfield { m: u32 },
    #[error("a = 0 is excluded when c = 1")]
    ExcludedDerivative,
    #[error("character sum {total} is not an integer multiple of the field order")]
    NonIntegralCharacterSum { total: i64 },
    #[error("function is not a permutation: F({first}) = F({second})")]
    NotAPermutation { first: u32, second: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid family parameters: {0}")]
    FamilyParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
