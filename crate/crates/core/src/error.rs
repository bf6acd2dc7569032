use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not in the valuation ring")]
    NotIntegral(String),
    #[error("matrix has rank {rank} over the fraction field, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable '{name}' at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("division by zero at offset {offset}")]
    DivisionByZero { offset: usize },
    #[error("'{0}' is not a polynomial")]
    NotPolynomial(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("resource cap exceeded: {what} > {limit}")]
    ResourceCap { what: &'static str, limit: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("witness open of the composite is empty")]
    EmptyWitness,
    #[error("irreducibility of {0} was not asserted")]
    AssertionMissing(String),
    #[error("invalid rational map: {0}")]
    Invalid(String),
    #[error("variety mismatch: {0}")]
    Mismatch(String),
    #[error("point lies outside the witness open")]
    PointOutsideWitness,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("point {0} does not lie on the variety")]
    NotOnVariety(String),
    #[error("slice of {map} at {point} is not dense")]
    NonDenseSlice { map: String, point: String },
    #[error("fixed point {0} found but the element is not the identity")]
    FixedPointViolation(String),
    #[error("the elements belong to different laws")]
    LawMismatch,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SmoothError {
    #[error("centre {0} is not on the special fibre")]
    NotOnSpecialFiber(String),
    #[error("section {0} does not pass through the centre")]
    NotThroughCenter(String),
    #[error("Jacobian at {section} has rank {rank}, expected {expected}: generic fibre singular along the section")]
    RankDeficient { section: String, rank: usize, expected: usize },
    #[error("smoothening did not finish within {0} rounds")]
    IterationCap(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("invalid model data: {0}")]
    Invalid(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VolumeError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not regular in codimension one: {0}")]
    NotRegular(String),
    #[error("no components to normalize")]
    NoComponents,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Smooth(#[from] SmoothError),
}

impl GroebnerError {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, GroebnerError::ResourceCap { .. })
    }
}

impl MapError {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, MapError::Groebner(e) if e.is_resource_cap())
    }
}

impl GroupError {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, GroupError::Map(e) if e.is_resource_cap())
    }
}

impl SmoothError {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, SmoothError::Groebner(e) if e.is_resource_cap())
    }
}

impl VolumeError {
    pub fn is_resource_cap(&self) -> bool {
        match self {
            VolumeError::Map(e) => e.is_resource_cap(),
            VolumeError::Groebner(e) => e.is_resource_cap(),
            VolumeError::Smooth(e) => e.is_resource_cap(),
            _ => false,
        }
    }
}
