//! Monotonicity, the monotonically-related infimum and the maximality probe.

use std::collections::HashMap;

use crate::error::{check_dim, Error, Result};
use crate::pairing::{pairing_diff_flat, PairedPoint};
use crate::report::{CheckReport, Verdict, Witness};

use super::discretize::discretize_graph;
use super::exact::ExactFitz;
use super::graph::FiniteGraph;
use super::probe::BoxProbe;
use super::rep::OperatorRep;

/// Points closer than this many grid steps to the graph are never reported
/// as maximality witnesses.
pub const NEAR_GRAPH_STEPS: f64 = 10.0;

/// Pairwise test `p(a₁ − a₂) ≥ −tol`; the first violating pair in index
/// order is the witness.
pub fn is_monotone_finite(g: &FiniteGraph, tol: f64) -> CheckReport {
    let w = 2 * g.dim();
    let mut worst = f64::INFINITY;
    for i in 0..g.len() {
        let a = &g.flat()[i * w..(i + 1) * w];
        for j in i + 1..g.len() {
            let v = pairing_diff_flat(a, g.row(j));
            worst = worst.min(v);
            if v < -tol {
                return CheckReport::new(Verdict::Fails, tol)
                    .with_witness(Witness::Pair {
                        first: g.points()[i].clone(),
                        second: g.points()[j].clone(),
                    })
                    .with_extreme("min_pair_pairing", v);
            }
        }
    }
    let mut r = CheckReport::new(Verdict::Holds, tol);
    if worst.is_finite() {
        r = r.with_extreme("min_pair_pairing", worst);
    }
    r
}

/// `inf_{a ∈ A} p(z − a)` together with whether it is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelatedInf {
    /// May be `−∞` (e.g. for skew maps off their graph).
    pub value: f64,
    /// `false` when taken over a sampled subgraph (an upper bound).
    pub exact: bool,
}

/// The infimum of `p(z − a)` over the graph of `op`.
pub fn monotone_related_inf(op: &OperatorRep, z: &PairedPoint, probe: &BoxProbe) -> Result<RelatedInf> {
    check_dim(op.dim(), z.dim())?;
    let zf = z.concat();
    if let OperatorRep::FiniteGraph(g) = op {
        let (_, v) = g.min_pairing_diff(&zf).ok_or(Error::EmptyOperator)?;
        return Ok(RelatedInf { value: v, exact: true });
    }
    if let Some(e) = ExactFitz::for_operator(op)? {
        return Ok(RelatedInf { value: e.related_inf(&zf), exact: true });
    }
    let g = discretize_graph(op, probe)?;
    let (_, v) = g.min_pairing_diff(&zf).ok_or(Error::EmptyOperator)?;
    Ok(RelatedInf { value: v, exact: false })
}

/// Spatial hash of graph points keyed by `a.x + a.x*`, used to find a graph
/// point `a` with `p(z − a)` below a threshold. For a maximal operator the
/// point of the graph with the same key as `z` gives `p(z − a) = −|x − y|²`,
/// so the search starts at the key of `z`.
pub(crate) struct MintyIndex<'a> {
    g: &'a FiniteGraph,
    n: usize,
    cell: f64,
    buckets: HashMap<[i32; 6], Vec<u32>>,
    offsets: Vec<[i32; 6]>,
    hint: Option<usize>,
}

pub(crate) enum Search {
    Found,
    /// Nothing below the threshold among nearby candidates; carries the
    /// smallest distance from `z` to a candidate.
    NotFound { nearest: f64 },
}

const RINGS: i32 = 3;

impl<'a> MintyIndex<'a> {
    pub(crate) fn new(g: &'a FiniteGraph, cell: f64) -> Result<Self> {
        let n = g.dim();
        if n > 6 {
            return Err(Error::Unsupported("graph search index supports n ≤ 6".into()));
        }
        let mut buckets: HashMap<[i32; 6], Vec<u32>> = HashMap::new();
        for i in 0..g.len() {
            buckets.entry(key(g.row(i), n, cell)).or_default().push(i as u32);
        }
        let mut offsets: Vec<[i32; 6]> = Vec::new();
        let span = (2 * RINGS + 1) as usize;
        let total = span.pow(n as u32);
        for c in 0..total {
            let mut o = [0i32; 6];
            let mut rem = c;
            for slot in o.iter_mut().take(n) {
                *slot = (rem % span) as i32 - RINGS;
                rem /= span;
            }
            offsets.push(o);
        }
        offsets.sort_by_key(|o| (o.iter().map(|v| v.abs()).max().unwrap_or(0), *o));
        Ok(MintyIndex { g, n, cell, buckets, offsets, hint: None })
    }

    /// Looks for `a` with `p(z − a) < threshold`.
    pub(crate) fn search(&mut self, z: &[f64], threshold: f64) -> Search {
        if let Some(h) = self.hint {
            if pairing_diff_flat(z, self.g.row(h)) < threshold {
                return Search::Found;
            }
        }
        let base = key(z, self.n, self.cell);
        let mut nearest2 = f64::INFINITY;
        for o in &self.offsets {
            let mut k = base;
            for i in 0..self.n {
                k[i] += o[i];
            }
            let Some(bucket) = self.buckets.get(&k) else { continue };
            for &idx in bucket {
                let a = self.g.row(idx as usize);
                if pairing_diff_flat(z, a) < threshold {
                    self.hint = Some(idx as usize);
                    return Search::Found;
                }
                let d2: f64 = a.iter().zip(z).map(|(u, v)| (u - v) * (u - v)).sum();
                nearest2 = nearest2.min(d2);
            }
        }
        Search::NotFound { nearest: nearest2.sqrt() }
    }
}

fn key(z: &[f64], n: usize, cell: f64) -> [i32; 6] {
    let mut k = [0i32; 6];
    for i in 0..n {
        k[i] = ((z[i] + z[n + i]) / cell).floor() as i32;
    }
    k
}

/// Refutation search for maximality.
///
/// A grid point `z` farther than `10·resolution` from the graph with
/// `inf_a p(z − a) ≥ −tol` is monotonically related to the graph without
/// being on it. The graph is sampled on the probe widened by its largest
/// width so that points near the edge of the box keep their partners.
/// Witnesses found through a sampled graph are reported as `POSSIBLE_FAIL`.
pub fn maximality_probe(op: &OperatorRep, probe: &BoxProbe) -> Result<CheckReport> {
    let n = probe.z_dim()?;
    check_dim(op.dim(), n)?;
    let tol = probe.tol();
    let res = probe.resolution();
    let near = NEAR_GRAPH_STEPS * res;
    let exact = ExactFitz::for_operator(op)?;

    let affine = match &exact {
        Some(ExactFitz::Affine(a)) => Some(a.clone()),
        _ => None,
    };
    let graph = match (op, &affine) {
        (OperatorRep::FiniteGraph(g), _) => g.clone(),
        (_, Some(_)) => FiniteGraph::new(n, Vec::new())?,
        _ => discretize_graph(op, &probe.padded(probe.max_width()))?,
    };
    if affine.is_none() && graph.is_empty() {
        return Err(Error::EmptyOperator);
    }
    let mut index = MintyIndex::new(&graph, res)?;

    let mut witness: Option<(Vec<f64>, f64)> = None;
    let mut scanned = 0usize;
    let mut fallbacks = 0usize;
    let mut failure: Option<Error> = None;
    probe.for_each_point(|z| {
        scanned += 1;
        if let Some(a) = &affine {
            let inf = crate::pairing::pairing_flat(z) - a.value(z);
            if inf < -tol || a.graph_distance(z) <= near {
                return true;
            }
            witness = Some((z.to_vec(), inf));
            return false;
        }
        let nearest = match index.search(z, -tol) {
            Search::Found => return true,
            Search::NotFound { nearest } => nearest,
        };
        if nearest <= near {
            return true;
        }
        fallbacks += 1;
        let inf = match &exact {
            Some(e) => e.related_inf(z),
            None => graph.min_pairing_diff(z).map_or(f64::INFINITY, |(_, v)| v),
        };
        if inf < -tol {
            return true;
        }
        if graph.distance(z) <= near {
            return true;
        }
        match on_graph(op, z) {
            Ok(true) => return true,
            Ok(false) => {}
            Err(e) => {
                failure = Some(e);
                return false;
            }
        }
        witness = Some((z.to_vec(), inf));
        false
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let base = |v: Verdict| {
        CheckReport::new(v, tol)
            .with_resolution(res)
            .with_extreme("grid_points", scanned as f64)
            .with_extreme("graph_points", graph.len() as f64)
            .with_extreme("fallback_points", fallbacks as f64)
    };
    Ok(match witness {
        None => base(Verdict::HoldsAtResolution),
        Some((z, inf)) => {
            let verdict = if exact.is_some() { Verdict::Fails } else { Verdict::PossibleFail };
            base(verdict)
                .with_witness(Witness::Point { point: PairedPoint::from_concat(&z)? })
                .with_extreme("witness_related_inf", inf)
                .with_note("monotonically related point away from the graph")
        }
    })
}

fn on_graph(op: &OperatorRep, z: &[f64]) -> Result<bool> {
    let p = PairedPoint::from_concat(z)?;
    let v = op.evaluate(p.x())?;
    if v.is_empty() {
        return Ok(false);
    }
    v.contains(p.xstar(), 1e-9)
}
