//! Shared kernels: an exact rational simplex solver and integral max-flow.

pub mod flow;
pub mod lp;

pub use flow::{max_bipartite_matching, max_flow, FlowNetwork, FlowResult};
pub use lp::{lp_solve, lp_solve_with, LpProblem, LpSolution, LpStatus, Relation, SolveOptions};
