use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{value} is not a unit modulo {ell}")]
    NotAUnit { value: i64, ell: u64 },
    #[error("prime {p} is ramified in Q(zeta_{ell})")]
    RamifiedPrime { p: String, ell: u64 },
    #[error("{f} does not divide the group order {order}")]
    NotADivisor { f: u64, order: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupRingError {
    #[error("group ring elements over different moduli ({left} vs {right})")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("a = {a} is not coprime to {ell}")]
    NotCoprime { a: u64, ell: u64 },
    #[error("Kummer index {i} outside 1..={max}")]
    IndexOutOfRange { i: u64, max: u64 },
    #[error("cannot parse group ring element: {0}")]
    Parse(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("solver produced an outcome that fails its own check: {0}")]
    CertificateFailed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StickelbergerError {
    #[error(transparent)]
    GroupRing(#[from] GroupRingError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(
        "h_plus of Q(zeta_{ell}) is not known to be 1 (h_l^+ = 1 for l < 100); \
         pass the assume-h-plus-one flag to proceed"
    )]
    HPlusUnknown { ell: u64 },
    #[error("class number record is for ell = {got}, expected {expected}")]
    RecordMismatch { expected: u64, got: u64 },
    #[error("Kummer basis for ell = {ell} has rank {rank}, expected {expected}")]
    RankDefect { ell: u64, rank: usize, expected: usize },
    #[error("internal certificate check failed: {0}")]
    CertificateRejected(String),
}

#[derive(Debug, Error)]
pub enum ClassDataError {
    #[error("malformed class number table at line {line}: {reason}")]
    MalformedTable { line: usize, reason: String },
    #[error("class number table has no record for ell = {0}")]
    MissingPrime(u64),
    #[error("Maillet determinant for ell = {ell} is not divisible by ell^{exponent}")]
    InexactDivision { ell: u64, exponent: u64 },
    #[error("cannot read class number table: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormError {
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("cannot parse rational: {0}")]
    Parse(String),
    #[error("could not completely factor {0}")]
    Unfactored(String),
}
