//! The reduction of an exact category with a twist by sigma: matrix factorizations
//! modulo morphisms killed by Delta, localized at the Delta-isomorphisms.

mod battery;
mod category;
mod fraction;
mod hom;
mod instance;
mod object;
mod segment;

pub use battery::{mf_pool, mf_suite, run_mf_case, MfCaseReport, Tally, MF_CASES};
pub use category::{key_positions, Arrow, Background, ExactCategory, Key};
pub use fraction::{delta_short_exact, Admissibility, Fraction, OrePullback};
pub use hom::{HomG, WitnessReport};
pub use instance::{FilteredCategory, GrBackground, GrFlatBackground};
pub use object::{Delta, MFMorphism, MFObject, Reduction};
pub use segment::{first_bockstein_segment, independence_compare, IndependenceReport, SegmentReport, SEGMENT_LEVEL};

#[cfg(test)]
mod tests;
