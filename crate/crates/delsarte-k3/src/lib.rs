//! Verifiable arithmetic for five one-parameter families of quartic K3
//! surfaces cut out by chains of Delsarte monomials.
//!
//! The crate computes, for each family and each odd prime power q:
//!
//! * brute-force and monomial-lattice point counts over F_q,
//! * finite-field hypergeometric sums built from Gauss sums,
//! * closed-form point counts expressed through those sums,
//! * hypergeometric parameters of the associated Picard-Fuchs operators,
//! * truncated L-function data matching local factors against counts.
//!
//! Everything is deterministic: field construction, character indexing,
//! and output ordering are all canonical, so results are bit-reproducible
//! across runs at a given precision.

pub mod closed;
pub mod cyclotomic;
pub mod error;
pub mod pencil;
pub mod picard_fuchs;
pub mod field;
pub mod gauss;
pub mod hyp;
pub mod koblitz;
pub mod l_series;
pub mod numeric;

pub use error::{Error, Result};
