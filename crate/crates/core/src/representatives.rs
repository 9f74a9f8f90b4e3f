//! Fitzpatrick and Penot functions, their conjugates, and the grid
//! certificates for representability, NI and maximality.

use crate::error::{check_dim, Error, Result};
use crate::lpkernel::{solve_lp, LinearProgram, LpStatus, Matrix, VarBound};
use crate::operators::exact::{finite_fitz, AffineFitz, ExactFitz};
use crate::operators::{
    discretize_graph, is_monotone_finite, monotone_related_inf, BoxProbe, FiniteGraph, OperatorRep, SkewOp,
    NEAR_GRAPH_STEPS,
};
use crate::pairing::{dual_product_flat, pairing_flat, pairing_p, ExtReal, PairedPoint, Vector};
use crate::report::{CheckReport, Verdict, Witness};

/// A function value with a flag telling whether it is exact or only a
/// bound obtained from a sampled graph or a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FnValue {
    pub value: ExtReal,
    pub exact: bool,
}

impl FnValue {
    pub fn exact(v: f64) -> Self {
        FnValue { value: ExtReal::from_f64(v), exact: true }
    }

    pub fn bound(v: f64) -> Self {
        FnValue { value: ExtReal::from_f64(v), exact: false }
    }

    pub fn to_f64(self) -> f64 {
        self.value.to_f64()
    }
}

/// Convex functions on `Z` that arise as representatives.
#[derive(Debug, Clone, PartialEq)]
pub enum RepFunction {
    /// `h_G` as a maximum of affine pieces indexed by graph points.
    FitzFinite(FiniteGraph),
    /// `h_A` of `x ↦ Mx + q` in closed form.
    FitzAffine { m: Matrix, q: Vector },
    /// `φ_G`, evaluated by linear programming.
    PenotLp(FiniteGraph),
    /// `(x, x*) ↦ base(x, x* − Bx)`.
    Shifted { base: Box<RepFunction>, shift: SkewOp },
    /// `p + ι_G`, the function whose conjugate is `h_G`.
    GraphCoupling(FiniteGraph),
    /// `h_A` of a general operator, sampled on the probe when no closed
    /// form is available.
    FitzOperator { op: OperatorRep, probe: BoxProbe },
}

impl RepFunction {
    pub fn fitz_finite(g: FiniteGraph) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::EmptyOperator);
        }
        Ok(RepFunction::FitzFinite(g))
    }

    pub fn fitz_affine(m: Matrix, q: Vector) -> Result<Self> {
        let op = OperatorRep::affine(m.clone(), q.clone())?;
        debug_assert_eq!(op.dim(), q.len());
        Ok(RepFunction::FitzAffine { m, q })
    }

    pub fn penot(g: FiniteGraph) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::EmptyOperator);
        }
        Ok(RepFunction::PenotLp(g))
    }

    pub fn shifted(base: RepFunction, shift: SkewOp) -> Result<Self> {
        check_dim(base.dim(), shift.dim())?;
        Ok(RepFunction::Shifted { base: Box::new(base), shift })
    }

    pub fn dim(&self) -> usize {
        match self {
            RepFunction::FitzFinite(g) | RepFunction::PenotLp(g) | RepFunction::GraphCoupling(g) => g.dim(),
            RepFunction::FitzAffine { q, .. } => q.len(),
            RepFunction::Shifted { base, .. } => base.dim(),
            RepFunction::FitzOperator { op, .. } => op.dim(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            RepFunction::FitzFinite(_) => "fitz-finite",
            RepFunction::FitzAffine { .. } => "fitz-affine",
            RepFunction::PenotLp(_) => "penot-lp",
            RepFunction::Shifted { .. } => "shifted",
            RepFunction::GraphCoupling(_) => "graph-coupling",
            RepFunction::FitzOperator { .. } => "fitz-operator",
        }
    }

    pub fn value(&self, z: &PairedPoint) -> Result<FnValue> {
        check_dim(self.dim(), z.dim())?;
        let zf = z.concat();
        Ok(match self {
            RepFunction::FitzFinite(g) => FnValue::exact(finite_fitz(g, &zf)),
            RepFunction::FitzAffine { m, q } => FnValue::exact(AffineFitz::new(m, q).value(&zf)),
            RepFunction::PenotLp(g) => FnValue { value: penot_value(g, z)?, exact: true },
            RepFunction::Shifted { base, shift } => base.value(&unshift(z, shift))?,
            RepFunction::GraphCoupling(g) => {
                if g.distance(&zf) <= 1e-12 {
                    FnValue::exact(pairing_p(z))
                } else {
                    FnValue::exact(f64::INFINITY)
                }
            }
            RepFunction::FitzOperator { op, probe } => fitzpatrick_value(op, z, probe)?,
        })
    }
}

/// `(x, x* − Bx)`.
fn unshift(z: &PairedPoint, b: &SkewOp) -> PairedPoint {
    PairedPoint::raw(z.x().clone(), z.xstar() - b.matrix() * z.x())
}

/// `h_A(z) = sup_{a ∈ A} z·a − p(a)`.
///
/// Exact for finite graphs, affine maps and polyhedral subdifferentials;
/// otherwise the maximum over the graph sampled on `probe`, which bounds
/// `h_A` from below and is flagged inexact.
pub fn fitzpatrick_value(op: &OperatorRep, z: &PairedPoint, probe: &BoxProbe) -> Result<FnValue> {
    check_dim(op.dim(), z.dim())?;
    let zf = z.concat();
    if let Some(e) = ExactFitz::for_operator(op)? {
        if let ExactFitz::Finite(g) = &e {
            if g.is_empty() {
                return Err(Error::EmptyOperator);
            }
        }
        return Ok(FnValue::exact(e.value(&zf)));
    }
    let g = discretize_graph(op, probe)?;
    if g.is_empty() {
        return Err(Error::EmptyOperator);
    }
    Ok(FnValue::bound(finite_fitz(&g, &zf)))
}

/// `p(z) − inf_{a ∈ A} p(z − a)`.
pub fn fitzpatrick_altform_value(op: &OperatorRep, z: &PairedPoint, probe: &BoxProbe) -> Result<FnValue> {
    let r = monotone_related_inf(op, z, probe)?;
    let v = pairing_p(z) - r.value;
    Ok(FnValue { value: ExtReal::from_f64(v), exact: r.exact })
}

/// `φ_G(z) = min Σλᵢ p(aᵢ)` over convex weights with `Σλᵢ aᵢ = z`;
/// `+∞` outside the convex hull of the graph.
pub fn penot_value(g: &FiniteGraph, z: &PairedPoint) -> Result<ExtReal> {
    check_dim(g.dim(), z.dim())?;
    if g.is_empty() {
        return Err(Error::EmptyOperator);
    }
    let zf = z.concat();
    let m = g.len();
    let mut lp = LinearProgram::new(m);
    lp.set_objective((0..m).map(|i| pairing_flat(g.row(i))).collect())?;
    for (k, zk) in zf.iter().enumerate() {
        lp.add_eq((0..m).map(|i| g.row(i)[k]).collect(), *zk)?;
    }
    lp.add_eq(vec![1.0; m], 1.0)?;
    let sol = solve_lp(&lp);
    match sol.status {
        LpStatus::Optimal => Ok(ExtReal::Finite(sol.value)),
        LpStatus::Infeasible => Ok(ExtReal::PosInf),
        LpStatus::Unbounded | LpStatus::NumericFailure => Err(Error::NumericFailure),
    }
}

/// `f*(w) = sup_z w·z − f(z)` with respect to the dual product.
pub fn conjugate_value(f: &RepFunction, w: &PairedPoint, probe: &BoxProbe) -> Result<FnValue> {
    check_dim(f.dim(), w.dim())?;
    let wf = w.concat();
    match f {
        RepFunction::GraphCoupling(g) => {
            if g.is_empty() {
                return Err(Error::EmptyOperator);
            }
            Ok(FnValue::exact(finite_fitz(g, &wf)))
        }
        RepFunction::PenotLp(g) => penot_conjugate(g, &wf).map(FnValue::exact),
        RepFunction::FitzFinite(g) => finite_fitz_conjugate(g, &wf).map(FnValue::exact),
        RepFunction::FitzAffine { m, q } => Ok(FnValue::exact(affine_fitz_conjugate(m, q, w))),
        RepFunction::Shifted { base, shift } => conjugate_value(base, &unshift(w, shift), probe),
        RepFunction::FitzOperator { op, .. } => match ExactFitz::for_operator(op)? {
            Some(ExactFitz::Finite(g)) => finite_fitz_conjugate(&g, &wf).map(FnValue::exact),
            Some(ExactFitz::Affine(_)) => {
                let (m, q) = op.as_affine().ok_or(Error::NumericFailure)?;
                Ok(FnValue::exact(affine_fitz_conjugate(&m, &q, w)))
            }
            _ => grid_conjugate(f, &wf, probe),
        },
    }
}

/// `φ_G* (w) = max over convex weights of Σλᵢ (w·aᵢ − p(aᵢ))`.
fn penot_conjugate(g: &FiniteGraph, w: &[f64]) -> Result<f64> {
    if g.is_empty() {
        return Err(Error::EmptyOperator);
    }
    let m = g.len();
    let mut lp = LinearProgram::new(m);
    lp.set_objective((0..m).map(|i| pairing_flat(g.row(i)) - dual_product_flat(w, g.row(i))).collect())?;
    lp.add_eq(vec![1.0; m], 1.0)?;
    let sol = solve_lp(&lp);
    match sol.status {
        LpStatus::Optimal => Ok(-sol.value),
        _ => Err(Error::NumericFailure),
    }
}

/// `h_G*(w) = sup_{z, t} w·z − t` subject to `t ≥ z·aᵢ − p(aᵢ)`.
fn finite_fitz_conjugate(g: &FiniteGraph, w: &[f64]) -> Result<f64> {
    if g.is_empty() {
        return Err(Error::EmptyOperator);
    }
    let n = g.dim();
    let nv = 2 * n + 1;
    let mut lp = LinearProgram::new(nv);
    for j in 0..nv {
        lp.set_bounds(j, VarBound::FREE)?;
    }
    // w·z = ⟨w.x*, z.x⟩ + ⟨z.x*, w.x⟩
    let mut obj: Vec<f64> = (0..n).map(|j| -w[n + j]).chain((0..n).map(|j| -w[j])).collect();
    obj.push(1.0);
    lp.set_objective(obj)?;
    for i in 0..g.len() {
        let a = g.row(i);
        let mut row: Vec<f64> = (0..n).map(|j| a[n + j]).chain((0..n).map(|j| a[j])).collect();
        row.push(-1.0);
        lp.add_le(row, pairing_flat(a))?;
    }
    let sol = solve_lp(&lp);
    match sol.status {
        LpStatus::Optimal => Ok(-sol.value),
        LpStatus::Unbounded => Ok(f64::INFINITY),
        _ => Err(Error::NumericFailure),
    }
}

/// For an affine monotone map the Penot function is `p` on the graph and
/// `+∞` elsewhere.
fn affine_fitz_conjugate(m: &Matrix, q: &Vector, w: &PairedPoint) -> f64 {
    let r = w.xstar() - (m * w.x() + q);
    if r.amax() <= 1e-9 * (1.0 + w.xstar().amax()) {
        pairing_p(w)
    } else {
        f64::INFINITY
    }
}

fn grid_conjugate(f: &RepFunction, w: &[f64], probe: &BoxProbe) -> Result<FnValue> {
    let mut best = f64::NEG_INFINITY;
    let mut failure = None;
    probe.for_each_point(|z| match PairedPoint::from_concat(z).and_then(|zp| f.value(&zp)) {
        Ok(v) => {
            best = best.max(dual_product_flat(w, z) - v.to_f64());
            true
        }
        Err(e) => {
            failure = Some(e);
            false
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    if best == f64::NEG_INFINITY {
        return Err(Error::EmptySet);
    }
    Ok(FnValue::bound(best))
}

/// `h_A` evaluator reused across a grid scan.
enum FitzEval {
    Exact(ExactFitz),
    Sampled(FiniteGraph),
}

impl FitzEval {
    /// Sampled graphs are taken on the probe widened by its largest width
    /// so that the sampled `h_A` is accurate inside the probe box.
    fn new(op: &OperatorRep, probe: &BoxProbe) -> Result<Self> {
        let e = match ExactFitz::for_operator(op)? {
            Some(e) => FitzEval::Exact(e),
            None => FitzEval::Sampled(discretize_graph(op, &probe.padded(probe.max_width()))?),
        };
        let empty = match &e {
            FitzEval::Exact(ExactFitz::Finite(g)) | FitzEval::Sampled(g) => g.is_empty(),
            _ => false,
        };
        if empty {
            return Err(Error::EmptyOperator);
        }
        Ok(e)
    }

    fn value(&self, z: &[f64]) -> f64 {
        match self {
            FitzEval::Exact(e) => e.value(z),
            FitzEval::Sampled(g) => finite_fitz(g, z),
        }
    }

    fn is_exact(&self) -> bool {
        matches!(self, FitzEval::Exact(_))
    }
}

fn point_witness(z: &[f64]) -> Result<Witness> {
    Ok(Witness::Point { point: PairedPoint::from_concat(z)? })
}

/// Grid test of `h_A ≥ p`.
pub fn ni_probe(op: &OperatorRep, probe: &BoxProbe) -> Result<CheckReport> {
    let n = probe.z_dim()?;
    check_dim(op.dim(), n)?;
    let tol = probe.tol();
    let eval = FitzEval::new(op, probe)?;
    let mut min_gap = f64::INFINITY;
    let mut witness = None;
    probe.for_each_point(|z| {
        let gap = eval.value(z) - pairing_flat(z);
        min_gap = min_gap.min(gap);
        if gap < -tol {
            witness = Some(z.to_vec());
            return false;
        }
        true
    });
    let mut r = match &witness {
        None => CheckReport::new(Verdict::HoldsAtResolution, tol),
        Some(z) => {
            let v = if eval.is_exact() { Verdict::Fails } else { Verdict::PossibleFail };
            CheckReport::new(v, tol).with_witness(point_witness(z)?).with_note("h below p")
        }
    };
    r = r.with_resolution(probe.resolution());
    if min_gap.is_finite() {
        r = r.with_extreme("min_h_minus_p", min_gap);
    }
    Ok(r)
}

/// Every grid point where `φ_G ≤ p + tol` must lie on the graph, and `φ_G`
/// must not drop below `p`, for `G` the operator itself or its sample on
/// `probe`.
pub fn representability_probe(op: &OperatorRep, probe: &BoxProbe) -> Result<CheckReport> {
    let n = probe.z_dim()?;
    check_dim(op.dim(), n)?;
    let tol = probe.tol();
    let res = probe.resolution();
    let (g, sampled) = match op {
        OperatorRep::FiniteGraph(g) => (g.clone(), false),
        _ => (discretize_graph(op, probe)?, true),
    };
    if g.is_empty() {
        return Err(Error::EmptyOperator);
    }
    // h_G ≤ φ_G holds for monotone G, so h_G > p rules a point out cheaply
    let mono = is_monotone_finite(&g, tol);
    if !sampled {
        // a pair with p(a − b) < 0 puts φ below p at its midpoint
        if let Some(Witness::Pair { first, second }) = &mono.witness {
            let mid = first.add(second).scale(0.5);
            let phi = penot_value(&g, &mid)?.to_f64();
            let gap = phi - pairing_p(&mid);
            if gap < -tol {
                return Ok(CheckReport::new(Verdict::Fails, tol)
                    .with_witness(Witness::Point { point: mid })
                    .with_note("φ below p between two graph points")
                    .with_extreme("graph_points", g.len() as f64)
                    .with_extreme("phi_minus_p", gap));
            }
        }
    }
    let prefilter = sampled || mono.passed();
    // an exact graph is matched exactly; a sampled one up to a few steps
    let near = if sampled { NEAR_GRAPH_STEPS * res } else { tol };
    let mut tight = 0usize;
    let mut witness = None;
    let mut failure = None;
    probe.for_each_point(|z| {
        let p = pairing_flat(z);
        if prefilter && finite_fitz(&g, z) > p + tol {
            return true;
        }
        let zp = PairedPoint::from_concat(z).expect("probe point");
        let phi = match penot_value(&g, &zp) {
            Ok(v) => v.to_f64(),
            Err(e) => {
                failure = Some(e);
                return false;
            }
        };
        if phi > p + tol {
            return true;
        }
        tight += 1;
        if phi >= p - tol && g.distance(z) <= near {
            return true;
        }
        if sampled {
            match op.evaluate(zp.x()).and_then(|v| v.contains(zp.xstar(), 1e-9)) {
                Ok(true) => return true,
                Ok(false) => {}
                Err(e) => {
                    failure = Some(e);
                    return false;
                }
            }
        }
        witness = Some(z.to_vec());
        false
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let r = match &witness {
        None => CheckReport::new(Verdict::HoldsAtResolution, tol),
        Some(z) => {
            let v = if sampled { Verdict::PossibleFail } else { Verdict::Fails };
            CheckReport::new(v, tol).with_witness(point_witness(z)?).with_note("φ reaches p off the graph")
        }
    };
    Ok(r.with_resolution(res)
        .with_extreme("graph_points", g.len() as f64)
        .with_extreme("tight_points", tight as f64))
}

/// Representability and NI together; the sub-reports are kept as details.
pub fn maximality_certificate(op: &OperatorRep, probe: &BoxProbe) -> Result<CheckReport> {
    let rep = representability_probe(op, probe)?.with_note("representability");
    let ni = ni_probe(op, probe)?.with_note("negative infimum");
    let verdict = if rep.passed() && ni.passed() {
        Verdict::HoldsAtResolution
    } else if rep.verdict == Verdict::Fails || ni.verdict == Verdict::Fails {
        Verdict::Fails
    } else {
        Verdict::PossibleFail
    };
    let mut r = CheckReport::new(verdict, probe.tol()).with_resolution(probe.resolution());
    if let Some(w) = [&ni, &rep].iter().find(|s| !s.passed()).and_then(|s| s.witness.clone()) {
        r = r.with_witness(w);
    }
    Ok(r.with_details(vec![rep, ni]))
}

/// The grid points where `h_G + φ_G = 2p` together with `G`.
///
/// Both functions dominate `p` on the relevant set and the set where their
/// sum meets `2p` is monotone, so it recovers the unique maximal extension
/// of a graph with full domain at grid level. Every grid abscissa of the
/// probe must have a graph abscissa within one grid step.
pub fn extension_from_fitzpatrick(g: &FiniteGraph, probe: &BoxProbe) -> Result<FiniteGraph> {
    let n = probe.z_dim()?;
    check_dim(g.dim(), n)?;
    if g.is_empty() {
        return Err(Error::EmptyOperator);
    }
    let tol = probe.tol();
    let reach = probe.resolution() * (1.0 + 1e-9);
    let mut missing = None;
    probe.x_part()?.for_each_point(|x| {
        let covered = g
            .points()
            .iter()
            .any(|a| a.x().iter().zip(x).all(|(u, v)| (u - v).abs() <= reach));
        if !covered {
            missing = Some(x.to_vec());
        }
        covered
    });
    if let Some(x) = missing {
        return Err(Error::DomainCoverage(x));
    }
    let mut pts: Vec<PairedPoint> = g.restricted(probe.lo(), probe.hi()).points().to_vec();
    let mut failure = None;
    probe.for_each_point(|z| {
        let p = pairing_flat(z);
        let h = finite_fitz(g, z);
        if h > p + tol {
            return true;
        }
        let zp = PairedPoint::from_concat(z).expect("probe point");
        match penot_value(g, &zp) {
            Ok(phi) => {
                if (h + phi.to_f64() - 2.0 * p).abs() <= tol {
                    pts.push(zp);
                }
                true
            }
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(FiniteGraph::from_sorted_dedup(n, pts))
}
