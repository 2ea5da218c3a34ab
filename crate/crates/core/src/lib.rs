//! Fixed-shell eigenstates of the two-dimensional isotropic harmonic
//! oscillator: their nodal algebraic curves, the degeneracy strata along which
//! those curves change topology, and entropy diagnostics (nodal-domain
//! entropy, Cartesian mutual information, position/momentum Shannon
//! entropies) evaluated along one-parameter coefficient paths.

pub mod checkpoints;
pub mod entropy;
pub mod error;
pub mod hermite1d;
pub mod nodal;
pub mod oracle;
pub mod paths;
pub mod poly;
pub mod polyalgebra;
pub mod quad;
pub mod report;
pub mod shell;

pub use error::{Error, Result};
