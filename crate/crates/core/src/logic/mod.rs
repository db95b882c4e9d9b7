//! Conjunctive formulas, stratified sequent calculi and the functors between them and frames.

mod csl;
mod formula;
mod global;
mod meta;
mod table;

pub use csl::{derives, Csl, Derivation, Gamma, Sequent, Step, Trace, RULE_AND_RIGHT, RULE_BAR, RULE_ENTAILMENT};
pub use formula::{big_and, flatten, parse_formula, parse_formulas, Formula};
pub use global::{apply_c_morphism, apply_e_morphism, compose_global, global_derives};
pub use meta::{verify_logic_metatheorems, verify_logic_metatheorems_with};
pub use table::{apply_c, apply_e, apply_e_with, check_csl_table, check_csl_table_with, Antecedent, CslTable, Stage};

/// Rule names used in table and metatheorem reports.
pub mod ids {
    pub use super::meta::{BAR, INT_SINT, INVERSE_CUT};
    pub use super::table::{CUT, R_TOP, SINT, STAGE_INCLUSION, STRATIFICATION, TRANSFER, WEAKENING};
}
