//! A Garside-structure engine for Artin braid groups.
//!
//! The crate computes left canonical forms, the prefix-order lattice of
//! permutation braids, cycling/decycling and super summit reductions, and
//! exhaustive searches for minimal conjugators. On top of that sits a
//! laboratory for a family of rigid pseudo-Anosov braids built from binary
//! matrices, whose conjugacy invariants can be enumerated and checked both
//! in closed form and by brute force.

pub mod braid;
pub mod conjugacy;
pub mod curves;
pub mod family;
pub mod search;
pub mod simple;
pub mod verify;

pub use braid::{parse_signed_word, Braid, NormalFormError};
pub use conjugacy::{
    cycling, decycling, rigid_in_cycling_orbit, to_super_summit, CyclingError, SummitBudget,
    SummitCertificate, SummitError,
};
pub use curves::{all_standard_curves, find_standard_reduction, PeriodicCurve, StandardCurve};
pub use family::{
    alpha_row, family_rigid_graph, forced_prefixes, make_element, matrix_text, parse_family_braid,
    parse_matrix_text, predicted_size, search_hints, tail_path_closed_form, tail_path_sigma_form,
    theta, BitRow, FamilyElement, FamilyError, PositiveWord, ReducedCycle, Side,
};
pub use search::{
    enumerate_class, is_conjugate, minimal_conjugators, minimal_conjugators_hinted,
    minimal_conjugators_of_kind, ConjugacyGraph, ConjugatorKind, GraphEdge, MinimalConjugators,
    SearchBudget, SearchError, SearchHints,
};
pub use simple::{IndexSet, SimpleBraid, WordError};
pub use verify::{verify_suite, CheckResult, Status, VerificationReport};
