//! Exact algebra of modules over integral group rings of small finite
//! groups: Tate cohomology, Z-split extensions and their classes, envelopes
//! of finite cyclic modules, relation modules, coinduction and Shapiro maps,
//! and isomorphism fingerprints.
//!
//! All arithmetic is exact (64-bit with transparent big-integer escalation);
//! every value is immutable after validated construction, so types are
//! freely shareable across threads.

pub mod characters;
pub mod construction;
pub mod cohomology;
pub mod envelope;
pub mod error;
pub mod ext;
pub mod gmod;
pub mod group;
pub mod homtensor;
pub mod linalg;
pub mod sequence;

pub use error::{Error, Result};
