//! Exact cohomology, K-theory and classification calculus for homogeneous and
//! presented vector bundles on the quintic del Pezzo threefold `V5`, a linear
//! section of the Grassmannian `G(2,5)`.

pub mod chow;
pub mod classify;
pub mod derived;
pub mod engine;
pub mod error;
pub mod expr;
pub mod library;
pub mod parse;
pub mod rep;
pub mod sheaf;

pub use error::{Error, Result};
pub use expr::{BundleExpr, Generator};
pub use parse::parse;
pub use rep::{GlWeight, RepSum, Sl2Character, Term};
