//! The functors F, S, T and W, and the witnesses that they are equivalences.

mod apply;
mod witness;

pub use apply::{
    apply_f, apply_f_morphism, apply_f_morphism_with, apply_f_with, apply_s, apply_s_morphism, apply_t, apply_t_morphism,
    apply_t_morphism_with, apply_t_with, apply_w, apply_w_morphism, FunctorTag,
};
pub use witness::{check_witness_pair, check_witness_pair_with, BACKWARD_FORWARD, FORWARD_BACKWARD, NATURALITY, verify_equivalence, verify_equivalence_with, witness, witness_with, PairId, WitnessPair};
