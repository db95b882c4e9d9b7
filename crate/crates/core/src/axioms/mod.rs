//! Exhaustive axiom checks for systems, frames and their morphisms.

pub(crate) mod frame;
mod meta;
mod morphism;
mod system;

pub use frame::{check_frame, check_frame_with, derived_r, DerivedR};
pub use meta::{verify_metatheorems, verify_metatheorems_with};
pub use morphism::{check_family, check_family_with, check_mapping, check_mapping_with};
pub use system::{check_system, check_system_with, SystemLevel};

/// Axiom ids used in frame reports.
pub mod ids {
    pub use super::frame::{CON_TRANSFER, CUT, ENT_TRANSFER, INTERPOLATION, PRESERVATION, SELF_CONSISTENCY, SOUNDNESS, STRONG, TRUTH, WEAKENING};
    pub use super::morphism::{INTERP_LEFT, INTERP_RIGHT, LEFT_CUT, RIGHT_CUT, TRANSFER, TRUTH_RESPECT};
}
