//! Steady-state behaviour of open systems: the black-box relation.

mod linalg;
mod newton;
mod relation;
mod sample;
mod steady;

pub use linalg::{least_squares, null_space, rref, solve, span_basis, QVec};
pub use newton::{gauss_newton, NewtonOptions, Outcome};
pub use relation::{compose_linear, linear_blackbox, LinRelation};
pub use sample::{
    check_functoriality, check_membership, sample_blackbox, FunctorialityReport, Membership,
    SampleOptions, SampledTuple,
};
pub use steady::{
    flows_for, is_steady, partition, residual, solve_internal, AffineFlowSolution,
    BoundaryPartition, InternalSolution, SteadyTuple, INTERNAL_ZERO_TOL, STEADY_TOL,
};
