//! Exact linear algebra over Z/l^r.

mod exact;
mod howell;
mod mat;
mod modulus;
mod present;

pub use exact::{
    composite_zero, exact_at, image_lattice, injectivity_witness, kernel_lattice, respects_orders, surjectivity_witness,
    CyclicGroup, Exactness,
};
pub use howell::{
    howell_form, inverse, is_split_epi, is_split_mono, kernel, rank_mod_l, retraction, section, solve, span_contains,
    span_eq, Solver,
};
pub use mat::{kron, Mat};
pub use modulus::{is_prime, Modulus};
pub use present::{subquotient, FiniteModulePresentation};
