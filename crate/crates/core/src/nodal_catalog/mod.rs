//! The sequence `d_n`, breakpoints, the curves `D_n`, the exact `S(v_t)` and
//! the finite generation classifier for slopes at the node.

mod classify;
mod curves;
mod exact;
mod sequence;
mod witness;

pub use classify::{classify, thresholds, DegenerationDescriptor, Verdict};
pub use curves::{
    catalog_curve, certified_newton_polygon, construct_dn, construct_dn_up_to, dn_order,
    newton_bezout_certificate, newton_polygon, Irreducibility, SingularCurve, DEFAULT_MAX_CONSTRUCTED,
};
pub use exact::{a_invariant, a_invariant_rational, piece_formula, s_exact, s_exact_rational, tail_formula};
pub use sequence::{d, d_big, piece_index, tau, tau_conjugate, Breakpoints, DSequence};
pub use witness::{candidate_witnesses, invariants, Witness};
