//! Relative Ext groups for the Z/l^r-split exact structure, Yoneda products,
//! extensions and syzygy factorization.

mod group;
mod oracle;
mod resolution;
mod ses;
mod yoneda;

pub use group::{coboundary, ext_group, ext_group_capped, ExtElement, ExtPresentation, DEFAULT_MAX_DEGREE};
pub use oracle::{bar_orders, periodic_orders};
pub use resolution::{Resolution, ResolutionCache, Syzygy, MAX_RESOLUTION_LEN};
pub use ses::{
    class_of_ses, commuting_squares, find_isomorphism, find_morphism, morphism_of_sequences, secondary_product,
    secondary_sequence, ses_of_class, square_filler, tensor, tensor_map, ShortExactSequence,
};
pub use yoneda::{factor_ext, pullback, pushforward, syzygy_class, yoneda};
