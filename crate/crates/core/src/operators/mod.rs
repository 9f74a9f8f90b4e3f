//! Multi-valued monotone operators on `Rⁿ`: representations, evaluation,
//! domains, sampling and the refutation probes that work on graphs.

mod checks;
mod discretize;
pub(crate) mod exact;
mod graph;
mod polytope;
mod probe;
mod rep;

pub use checks::{is_monotone_finite, maximality_probe, monotone_related_inf, RelatedInf, NEAR_GRAPH_STEPS};
pub use discretize::discretize_graph;
pub use graph::{FiniteGraph, LinearMap};
pub use polytope::{GenPolytope, Halfspace, Halfspaces};
pub(crate) use polytope::combinations;
pub use probe::{BoxProbe, DEFAULT_RADIUS, DEFAULT_RESOLUTION, DEFAULT_TOL};
pub use rep::{AffineOp, DomainSet, OperatorRep, PiecewiseLinear, PolyhedralForm, SkewOp, ACTIVE_TOL, MATCH_TOL};
pub(crate) use rep::normal_cone_at;
