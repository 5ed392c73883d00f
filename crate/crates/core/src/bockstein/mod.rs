//! The Bockstein long exact sequence for the coefficient instance
//! F_t -> F_st -> F_s over Z/l^R with s = l^a, t = l^b.

mod battery;
mod laws;
mod les;
mod maps;
mod snake;

pub use battery::{
    battery_cases, lift_control, module_label, module_pairs, module_pool, negative_controls, run_case, BatteryCase,
    CaseReport, ControlReport, PairReport, BATTERY_GROUPS, SMOKE_GROUPS,
};
pub use laws::{check_laws, LawCount, LawReport};
pub use les::{assemble_les, ExactnessReport, LongSequence, MapMatrix, TermCheck, TermInfo};
pub use maps::{d0, exponent, r0, sigma0, Bockstein, Cat};
pub use snake::{snake_oracle, OracleComparison};
