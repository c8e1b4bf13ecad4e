//! Binary relations, congruences, relation expressions and congruence identities.

pub mod binrel;
pub mod congruence;
pub mod identities;
pub mod relexpr;

pub use binrel::BinRel;
pub use congruence::{
    all_congruences, all_congruences_with, congruence_generated, principal_congruence, ConLimits,
    Congruence,
};
pub use identities::{
    check_identity_instance, identity_catalog, search_identity_failure, Identity, IdentityCheck,
    IdentityFailure, SearchLimits,
};
pub use relexpr::{parse_identity, parse_identity_file, RelExpr};
