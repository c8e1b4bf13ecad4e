//! Concrete algebras, term chains, translations and equation suites around
//! half near-unanimity terms.

pub mod algebras;
pub mod chains;
pub mod nua;
pub mod suites;
pub mod translations;

pub use algebras::{
    beta_gamma_star, bool2, bool4, build_a4, build_gnu, build_njm_plus, ell, generators_nhalf,
    gnu_term, lattice2, semilattice2, set2, subuniverse_b_power, trivial, z2_maltsev, U,
};
pub use chains::{ipp_directed_gumm_terms, ipp_jonsson_terms, ippm_day_terms};
pub use suites::suite_by_name;
pub use translations::TranslationKind;
