use std::fmt;

/// Errors raised while parsing the edge-list text format.
///
/// Line numbers are 1-based and count every physical line of the input,
/// including comments and blank lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    /// Input has no header line.
    Empty,
    /// Header line is not two non-negative integers `n m`.
    BadHeader { line: usize },
    /// An edge line is not two integers `u v`.
    Malformed { line: usize },
    /// An endpoint is outside `0..n`.
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    /// An edge joins a vertex to itself.
    SelfLoop { line: usize },
    /// The same unordered pair appears twice.
    DuplicateEdge { line: usize },
    /// Number of edge lines does not match the header.
    WrongEdgeCount { expected: usize, found: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Empty => write!(f, "empty input: expected a header line \"n m\""),
            ParseError::BadHeader { line } => {
                write!(f, "line {line}: header must be two integers \"n m\"")
            }
            ParseError::Malformed { line } => {
                write!(f, "line {line}: edge must be two integers \"u v\"")
            }
            ParseError::VertexOutOfRange { line, vertex, n } => {
                write!(f, "line {line}: vertex {vertex} out of range 0..{n}")
            }
            ParseError::SelfLoop { line } => write!(f, "line {line}: self-loop is not allowed"),
            ParseError::DuplicateEdge { line } => {
                write!(f, "line {line}: duplicate edge")
            }
            ParseError::WrongEdgeCount { expected, found } => {
                write!(f, "header declares {expected} edges but {found} were given")
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// Errors raised by graph construction, linear algebra, counting and
/// estimation routines.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    Parse(ParseError),
    /// A precondition on the inputs failed (bad parameter, wrong shape, ...).
    InvalidInput(String),
    /// A vertex of odd degree makes the quantity zero or undefined.
    OddDegree { vertex: usize },
    /// The operation requires a connected graph.
    Disconnected,
    /// Exact enumeration refused: too many edges for the configured cap.
    EdgeCapExceeded { edges: usize, cap: usize },
    /// Exact enumeration refused: elimination frontier wider than the cap.
    FrontierCapExceeded { width: usize, cap: usize },
    /// Rejection sampling gave up.
    RejectionCapExceeded { attempts: usize },
    /// A matrix expected to be symmetric is not.
    NotSymmetric { i: usize, j: usize },
    /// The eigensolver did not converge within the sweep cap.
    NoConvergence { sweeps: usize },
    /// The matrix is singular (or numerically indistinguishable from it).
    Singular,
    /// Cholesky factorization failed; the matrix is not positive definite.
    NotPositiveDefinite,
    /// `truncated_logdet` requires a spectral norm strictly below one.
    SpectralNormTooLarge { norm: f64 },
    /// A lemma hypothesis does not hold on the given instance.
    HypothesisFailed(String),
    /// The quadrature error estimate is too large to decide the inequality.
    QuadratureUnreliable { error_estimate: f64, gap: f64 },
    /// A Monte Carlo mean came out non-positive; no log-space estimate exists.
    NonPositiveEstimate,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(e) => write!(f, "parse error: {e}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::OddDegree { vertex } => {
                write!(f, "vertex {vertex} has odd degree")
            }
            Error::Disconnected => write!(f, "graph is disconnected"),
            Error::EdgeCapExceeded { edges, cap } => {
                write!(f, "{edges} edges exceed the exact-count cap of {cap}")
            }
            Error::FrontierCapExceeded { width, cap } => {
                write!(f, "elimination frontier width {width} exceeds the cap of {cap}")
            }
            Error::RejectionCapExceeded { attempts } => {
                write!(f, "rejection sampling gave up after {attempts} attempts")
            }
            Error::NotSymmetric { i, j } => {
                write!(f, "matrix is not symmetric at ({i}, {j})")
            }
            Error::NoConvergence { sweeps } => {
                write!(f, "eigensolver did not converge within {sweeps} sweeps")
            }
            Error::Singular => write!(f, "matrix is singular"),
            Error::NotPositiveDefinite => write!(f, "matrix is not positive definite"),
            Error::SpectralNormTooLarge { norm } => {
                write!(f, "spectral norm {norm} is not strictly below 1")
            }
            Error::HypothesisFailed(msg) => write!(f, "hypothesis failed: {msg}"),
            Error::QuadratureUnreliable { error_estimate, gap } => write!(
                f,
                "quadrature error estimate {error_estimate:.3e} exceeds 10% of the bound gap {gap:.3e}"
            ),
            Error::NonPositiveEstimate => {
                write!(f, "sample mean is non-positive; increase the sample count")
            }
        }
    }
}

impl std::error::Error for Error {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
