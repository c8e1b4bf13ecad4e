//! Free algebras, the linear Maltsev condition solver, and level searches.

pub mod free;
pub mod levels;
pub mod linear;

pub use free::{build_free_algebra, build_partial, FreeAlgebra};
pub use levels::{
    day_level, default_max_k, diamond_condition, directed_jonsson_length, jonsson_level,
    DiamondReport, LevelKind, LevelOptions, LevelReport, LevelResult, LevelStats,
};
pub use linear::{
    has_half_nu_term, has_nu_term, has_pixley_term, has_skew_edge_term, solve_linear_spec,
    LinearEquation, LinearRhs, LinearTermSpec, SolveOutcome, SolveReport, SolveStats,
};
