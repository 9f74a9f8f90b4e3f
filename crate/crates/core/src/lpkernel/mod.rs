//! Dense linear programming and the linear algebra the exact paths rely on.

mod linalg;
mod simplex;

pub use linalg::{
    asymmetry, equality_qp, lstsq, null_space, pseudo_inverse_apply, range_basis, rank, Matrix,
    QpOutcome,
};
pub use simplex::{solve_lp, LinearProgram, LpSolution, LpStatus, VarBound};
