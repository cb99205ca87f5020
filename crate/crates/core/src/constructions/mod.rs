//! Explicit large sets lacking additive or multiplicative structure.

mod alt;
mod doubling;
mod greedy;
mod straus;
mod trim;

pub use alt::{alt_coset_index, alt_group_example, fpd_obstruction_check, ObstructionCheck, OBSTRUCTION_MAX_LEVEL};
pub use doubling::doubling_example;
pub use greedy::{
    check_greedy, greedy_disjoint_cover, shrinking_syndetic_family, syndetic_family_with_sizes, GreedyCheck,
    LevelCertificate, SyndeticFamily,
};
pub use straus::{straus_set, StrausParams};
pub use trim::{
    calibration_grid, cofinite_trim, non_pws_large_set, non_pws_schedule, CoreCheck, NonPwsConstruction,
    TrimCalibration,
};
