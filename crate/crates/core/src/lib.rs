//! Exact Ext groups of free Z/l^r-modules with a finite group action,
//! Bockstein long exact sequences between reductions, and the
//! matrix-factorization reduction on filtered modules over F_p[G].

pub mod bockstein;
pub mod cli;
pub mod error;
pub mod ext;
pub mod gen;
pub mod group;
pub mod linalg;
pub mod filtered;
pub mod mfred;
pub mod props;

pub use error::{Error, Result};
