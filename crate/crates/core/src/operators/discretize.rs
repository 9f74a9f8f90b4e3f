//! Finite subgraphs sampled on a probe grid.

use crate::error::{check_dim, Result};
use crate::lpkernel::{lstsq, rank, Matrix};
use crate::pairing::{PairedPoint, Vector};

use super::graph::FiniteGraph;
use super::polytope::GenPolytope;
use super::probe::{axis_values, BoxProbe};
use super::rep::{DomainSet, OperatorRep};

const MEMBER_TOL: f64 = 1e-9;

/// Samples the graph of `op` over the primal part of `probe`.
///
/// Abscissae are the probe lattice plus the vertices of a polyhedral domain
/// lying in the box. Bounded value sets are sampled at the probe step with
/// their vertices kept; rays are followed from their apex for a length equal
/// to the dual width of the box. Every returned point lies on the graph.
pub fn discretize_graph(op: &OperatorRep, probe: &BoxProbe) -> Result<FiniteGraph> {
    let n = probe.z_dim()?;
    check_dim(op.dim(), n)?;
    if let OperatorRep::FiniteGraph(g) = op {
        return Ok(g.restricted(probe.lo(), probe.hi()));
    }
    let xbox = probe.x_part()?;
    let res = probe.resolution();
    let reach = probe.dual_width().max(res);

    let mut xs: Vec<Vector> = Vec::with_capacity(xbox.grid_len());
    xbox.for_each_point(|x| {
        xs.push(Vector::from_column_slice(x));
        true
    });
    if let Ok(DomainSet::Polyhedron(h)) = op.domain_set() {
        if !h.is_empty() {
            for v in h.to_vrep()?.vertices() {
                let inside = (0..n).all(|i| v[i] >= xbox.lo()[i] - 1e-12 && v[i] <= xbox.hi()[i] + 1e-12);
                if inside {
                    xs.push(v.clone());
                }
            }
        }
    }

    let mut pts = Vec::new();
    for x in xs {
        let val = op.evaluate(&x)?;
        if val.is_empty() {
            continue;
        }
        for s in sample_set(&val, res, reach)? {
            pts.push(PairedPoint::raw(x.clone(), s));
        }
    }
    Ok(FiniteGraph::from_sorted_dedup(n, pts))
}

/// Points of a polyhedron at step `res`, rays truncated at length `reach`.
pub(crate) fn sample_set(p: &GenPolytope, res: f64, reach: f64) -> Result<Vec<Vector>> {
    if p.is_empty() {
        return Ok(Vec::new());
    }
    let vs = p.vertices();
    let rs = p.rays();
    if rs.is_empty() {
        return match vs.len() {
            1 => Ok(vec![vs[0].clone()]),
            2 => Ok(segment(&vs[0], &vs[1], res)),
            _ => lattice_members(p, vs.to_vec(), res),
        };
    }
    if vs.len() == 1 && rs.len() == 1 {
        let u = &rs[0] / rs[0].norm();
        let steps = (reach / res).ceil() as usize;
        return Ok((0..=steps).map(|k| &vs[0] + &u * (k as f64 * res)).collect());
    }
    if vs.len() == 1 && rs.len() == 2 {
        let u = &rs[0] / rs[0].norm();
        let w = &rs[1] / rs[1].norm();
        if (&u + &w).amax() <= 1e-9 {
            let steps = (reach / res).ceil() as i64;
            return Ok((-steps..=steps).map(|k| &vs[0] + &u * (k as f64 * res)).collect());
        }
    }
    let mut corners: Vec<Vector> = vs.to_vec();
    for v in vs {
        for r in rs {
            corners.push(v + r * (reach / r.norm()));
        }
    }
    lattice_members(p, corners, res)
}

fn segment(a: &Vector, b: &Vector, res: f64) -> Vec<Vector> {
    let steps = ((b - a).norm() / res).ceil().max(1.0) as usize;
    (0..=steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            a * (1.0 - t) + b * t
        })
        .collect()
}

/// Lattice points `k·res` in the bounding box of `corners` that belong to
/// `p`, plus the vertices of `p`.
fn lattice_members(p: &GenPolytope, corners: Vec<Vector>, res: f64) -> Result<Vec<Vector>> {
    let d = p.dim();
    let lo: Vec<f64> = (0..d)
        .map(|i| corners.iter().map(|c| c[i]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..d)
        .map(|i| corners.iter().map(|c| c[i]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let axes: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let start = (lo[i] / res).ceil() * res;
            if start > hi[i] {
                Vec::new()
            } else {
                axis_values(start, hi[i].max(start), res)
            }
        })
        .collect();
    let member = Membership::new(p);
    let mut out: Vec<Vector> = p.vertices().to_vec();
    if axes.iter().any(|a| a.is_empty()) {
        return Ok(out);
    }
    let mut idx = vec![0usize; d];
    loop {
        let s = Vector::from_fn(d, |i, _| axes[i][idx[i]]);
        let is_vertex = p.vertices().iter().any(|v| (v - &s).amax() <= 1e-12);
        if !is_vertex && member.contains(&s)? {
            out.push(s);
        }
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < axes[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Membership oracle with a linear-solve shortcut for simplicial cones.
struct Membership<'a> {
    p: &'a GenPolytope,
    simplicial: Option<Matrix>,
}

impl<'a> Membership<'a> {
    fn new(p: &'a GenPolytope) -> Self {
        let simplicial = if p.vertices().len() == 1 && !p.rays().is_empty() {
            let r = Matrix::from_columns(p.rays());
            (rank(&r) == p.rays().len()).then_some(r)
        } else {
            None
        };
        Membership { p, simplicial }
    }

    fn contains(&self, s: &Vector) -> Result<bool> {
        match &self.simplicial {
            Some(r) => {
                let (mu, res) = lstsq(r, &(s - &self.p.vertices()[0]))?;
                Ok(res <= MEMBER_TOL * (1.0 + s.amax()) && mu.iter().all(|&m| m >= -MEMBER_TOL))
            }
            None => self.p.contains(s, MEMBER_TOL),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::vector;

    fn has(g: &FiniteGraph, x: f64, xs: f64) -> bool {
        g.points().iter().any(|p| (p.x()[0] - x).abs() < 1e-9 && (p.xstar()[0] - xs).abs() < 1e-9)
    }

    #[test]
    fn normal_cone_faces() {
        let op = OperatorRep::normal_cone_box(&[0.0], &[1.0]).unwrap();
        let probe = BoxProbe::cube(2, 1.0, 0.5, 1e-9).unwrap();
        let g = discretize_graph(&op, &probe).unwrap();
        assert!(has(&g, 0.0, 0.0));
        assert!(has(&g, 1.0, 0.0));
        assert!(has(&g, 1.0, 1.0));
        assert!(has(&g, 0.0, -1.0));
        assert!(!has(&g, 0.5, 0.5));
    }

    #[test]
    fn identity_unit_step() {
        let g = discretize_graph(&OperatorRep::identity(1), &BoxProbe::cube(2, 1.0, 1.0, 1e-9).unwrap()).unwrap();
        assert_eq!(g.len(), 3);
        assert!(has(&g, -1.0, -1.0) && has(&g, 0.0, 0.0) && has(&g, 1.0, 1.0));
    }

    #[test]
    fn finite_graph_is_restricted_to_box() {
        let g = FiniteGraph::new(
            1,
            vec![
                PairedPoint::from_slices(&[0.0], &[0.0]).unwrap(),
                PairedPoint::from_slices(&[3.0], &[3.0]).unwrap(),
            ],
        )
        .unwrap();
        let out = discretize_graph(&OperatorRep::finite(g), &BoxProbe::cube(2, 1.0, 0.5, 1e-9).unwrap()).unwrap();
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn square_value_set_is_filled() {
        let op = OperatorRep::subdiff_l1(2);
        let v = op.evaluate(&vector(&[0.0, 0.0])).unwrap();
        let s = sample_set(&v, 0.5, 1.0).unwrap();
        // 5 × 5 lattice in [−1, 1]²
        assert_eq!(s.len(), 25);
    }

    #[test]
    fn samples_lie_on_graph() {
        let op = OperatorRep::sum(
            OperatorRep::subdiff_l1(2),
            OperatorRep::normal_cone_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap(),
        )
        .unwrap();
        let probe = BoxProbe::cube(4, 1.0, 0.5, 1e-9).unwrap();
        let g = discretize_graph(&op, &probe).unwrap();
        for p in g.points() {
            assert!(op.evaluate(p.x()).unwrap().contains(p.xstar(), 1e-9).unwrap());
        }
    }
}
