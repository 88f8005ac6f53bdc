//! Error type shared by every module of the crate.
//!
//! All fallible public functions return [`Result<T>`](crate::Result) with
//! this enum as the error. Variants are grouped by the layer that raises
//! them; each carries enough context to diagnose the call site without a
//! backtrace.

use thiserror::Error;

/// Crate-wide error enum.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    // --- finite field / Gauss sum layer ------------------------------------

    /// The characteristic must be an odd prime (2 is rejected by design).
    #[error("invalid characteristic {0}: must be an odd prime")]
    InvalidPrime(u64),

    /// Extension degree out of range, or p^u overflows the supported size.
    #[error("invalid field size p={p}, u={u}: {reason}")]
    InvalidDegree { p: u64, u: u32, reason: String },

    /// A floating-point certification failed (e.g. |g(m)|^2 drifted from q),
    /// meaning the requested working precision is insufficient.
    #[error("precision {bits} bits insufficient: {detail}")]
    PrecisionError { bits: u32, detail: String },

    /// q - 1 is not divisible by a required order (character does not exist).
    #[error("divisor {n} does not divide q-1 = {qx}")]
    DivisibilityError { n: u64, qx: u64 },

    // --- hypergeometric parameter layer -------------------------------------

    /// Parameter lists violate a structural requirement (empty, zero entry,
    /// shared factor, mismatched lengths, ...).
    #[error("malformed hypergeometric parameters: {0}")]
    MalformedParameters(String),

    /// The field size shares a factor with the parameter data (the
    /// characters required by the sum do not exist over this field).
    #[error("field size {q} is bad for these parameters: {detail}")]
    BadPrimeForParameters { q: u64, detail: String },

    /// A twisted-sum triple (gamma, delta, N) fails its consistency checks.
    #[error("invalid twisted-sum triple: {0}")]
    InvalidGammaTriple(String),

    /// Generic argument error (t in {0,1}, out-of-range index, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    // --- pencil / point-count layer -----------------------------------------

    /// Family label not in the catalog.
    #[error("unknown pencil family {0:?}")]
    UnknownPencil(String),

    /// The monomial-counting method requires every nonzero exponent of the
    /// solution lattice to be invertible mod q-1; this field violates that.
    #[error("monomial counting hypothesis fails over F_{q}: {detail}")]
    HypothesisViolated { q: u64, detail: String },

    /// The requested characteristic divides the discriminant data of the
    /// family, so the closed-form count does not apply.
    #[error("characteristic {p} is bad for family {family}")]
    BadPrimeForFamily { p: u64, family: String },

    /// The fiber at this (q, psi) is singular (t-parameter hits 0 or 1).
    #[error("degenerate fiber for family {family} at q={q}, psi index {psi}")]
    DegenerateFiber { family: String, q: u64, psi: u64 },

    // --- differential-equation parameter layer ------------------------------

    /// The exponent matrix is singular over Q, so weights cannot be solved.
    #[error("singular exponent matrix for family {0}")]
    SingularMatrix(String),

    /// The requested exponent vector is not a lattice point of the family.
    #[error("{point:?} is not a solution lattice point of family {family}")]
    NotABasisPoint { family: String, point: Vec<i64> },

    /// Series expansion requested at a pole of the coefficient ratio.
    #[error("series coefficient has a pole at index {0}")]
    PolePosition(usize),

    // --- L-factor layer ------------------------------------------------------

    /// Local data was requested at a prime dividing the conductor data.
    #[error("prime {p} is ramified for {context}")]
    RamifiedPrime { p: u64, context: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
