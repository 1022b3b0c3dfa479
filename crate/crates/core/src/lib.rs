//! Exact construction, checking and falsification of "good pairs" of
//! full-rank lattices: pairs `(Γ1, Γ2)` of equal covolume that share a
//! fundamental domain of the form `N[0,1)^d`.
//!
//! All arithmetic is exact over `Q` or a real quadratic field `Q(sqrt(r))`.

pub mod boxenum;
pub mod cli;
pub mod constructors;
pub mod error;
pub mod exactlin;
pub mod goodpair;
pub mod lattice;
pub mod oracle;

pub use error::{Error, Result};
pub use exactlin::{IntVector, Matrix, Scalar};
