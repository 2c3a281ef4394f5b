//! Dense tensors, pairwise contraction, and the residual checks of the
//! tetrahedron and ψ-intertwining equations.

mod contract;
mod convention;
mod psi;
mod residual;
mod sweep;
mod te;
mod tensor;

pub use contract::{contract, contract_pair, ContractionPlan};
pub use convention::{convention_search, ConventionCandidate};
pub use psi::{
    psi_eq_residual, psi_eq_residual_ordered, psi_eq_residual_with, psibar_eq_residual, psibar_eq_residual_ordered,
    psibar_eq_residual_with, Model, PsiEquationParts, PSI_ORDER, ROTATED_PSI_ORDER,
};
pub use residual::{compare, ResidualReport, RATIO_THRESHOLD};
pub use sweep::{SweepMode, Sweep};
pub use te::{
    irc_te_residual, irc_te_residual_with, random_tensor, vertex_te_residual, vertex_te_residual_for,
    vertex_te_sides, IrcWiring, IRC_GAUGE, IRC_OUTER, VERTEX_OUTER,
};
pub use tensor::{WeightTensor, TENSOR_MAGIC, TENSOR_VERSION};
