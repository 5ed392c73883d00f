//! Finite groups, free Z/l^r-modules with a group action, and the reduction functors.

mod finite;
mod module;
mod setup;

pub use finite::{group_from_generators, group_from_generators_capped, FiniteGroup, DEFAULT_GROUP_CAP};
pub use module::{
    cokernel_module, factor_through_epi, factor_through_mono, free_cover, free_map, hom_g, hom_module, kernel_module,
    lift_through, GModule, GMorphism, DEFAULT_RANK_CAP,
};
pub use setup::BocksteinSetup;
