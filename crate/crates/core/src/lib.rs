//! Experimental combinatorics in countable amenable groups.
//!
//! The crate builds large sets that avoid structure (Straus-type sets,
//! non-piecewise-syndetic sets of large lower density, the A(ℕ) example
//! without decreasing finite products) and measures them exactly at finite
//! scale: densities along Følner sequences, Følner defects, window tests for
//! syndetic, thick and piecewise syndetic sets, bounded searches for shifted
//! finite-sums and finite-products sets, and empirical cylinder frequencies
//! of orbit points in `{0,1}^G`.
//!
//! Every ratio is an exact rational. Infinite statements are only ever
//! checked through bounded certificates that carry their search bounds.

pub mod constructions;
pub mod error;
pub mod folner;
pub mod group;
pub mod rational;
pub mod rle;
pub mod sets;
pub mod structures;
pub mod symbolic;

pub use error::{Error, Result};
pub use folner::{FolnerSequence, Handedness, ReiterWeights};
pub use group::{Backend, Element, FiniteSet, Group, Perm};
pub use rational::{BigRational, Rational};
pub use sets::{DensityReport, SubsetSpec};
