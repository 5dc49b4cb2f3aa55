//! Prehomogeneous vector spaces given by a Lie algebra of operators.
//!
//! Every decision (orbit rank, isotropy, reductivity, invariant count) is an
//! exact rational computation at a pseudorandom point chosen by rank
//! maximization.

mod filtration;
mod instance;
mod invariant;
mod parabolic;
mod regularity;

pub use filtration::{decompose_filtration, FiltrationError, FiltrationReport, FiltrationStage};
pub use instance::{Op, PvComponent, PvError, PvInstance};
pub use invariant::{
    hessian_product_identity_check, relative_invariance, verify_invariant, IdentityReport, Invariant,
    InvariantError, InvariantReport, RelativeInvarianceReport,
};
pub use parabolic::{build_parabolic_pv, parabolic_pv};
pub use regularity::{
    count_fundamental_invariants, generic_point, is_reductive, is_regular, isotropy_algebra, orbit_rank,
    q_irreducible, GenericPoint, LatticeScan, QIrreducibility, Reductivity, RegularityReport, GENERIC_CANDIDATES,
};
