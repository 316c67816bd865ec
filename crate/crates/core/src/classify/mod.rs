//! Counting formulas, parameter equivalences, isomorphism testing and the
//! classification of maximal-class rings of order `p^8`.

mod equiv;
mod iso;
mod pipeline;
mod porc;

pub use equiv::{
    allowed_tuples, brute_force_orbits, check_representatives, parse_comment, solve_equivalence, ActingGroup, Action,
    Constraint, EquivRelation,
};
pub use iso::{
    brute_force_isomorphic, invariants, is_isomorphic, is_isomorphism, Invariants, IsoContext, IsoResult, BUDGET_ENV,
};
pub use pipeline::{
    classify, cross_validate, run_classification, Classification, ClassificationReport, CrossValidation, MemberCount,
    Mismatch, ParentReport, TARGET_DIM,
};
pub use porc::{
    parent_formula, parent_porc, porc_sum_check, total_count, total_formula, Poly, PorcFormula, PARENT_FORMULAS,
    TOTAL_FORMULA,
};
