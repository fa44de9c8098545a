//! Exact combinatorics of Galois-equivariant Dynkin diagrams.
//!
//! The crate is organised bottom-up:
//!
//! * [`rootsys`]: Cartan matrices, pairings, affine extensions, special nodes,
//!   the opposition involution and symplectic nodes.
//! * [`gaction`]: permutation-group actions on diagrams and equivariant
//!   isomorphism search.
//! * [`deldyn`]: Deligne–Dynkin diagrams, their symplectic sets, types,
//!   determining subsets and automorphism counts.
//! * [`localglobal`]: the local-global gluing algorithm, an independent
//!   oracle and the exhaustive verification campaign.
//! * [`tannaka`]: hyperadjoint iteration on reductive data and Goursat's lemma.
//! * [`hodge`]: fractional Hodge bidegrees and Deligne's construction.
//! * [`table`]: the per-type table of labels and symplectic nodes.
//! * [`diagram_file`]: the JSON file format shared with the command line.

pub mod deldyn;
pub mod diagram_file;
pub mod error;
pub mod gaction;
pub mod hodge;
pub mod localglobal;
mod par;
pub mod perm;
pub mod rational;
pub mod rootsys;
pub mod table;
pub mod tannaka;

pub use error::{Error, Result};
pub use rational::Rational;
