//! Sums, precompositions, the chain representative, the partial infimal
//! convolution and the identities relating them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::lpkernel::{equality_qp, lstsq, rank, solve_lp, LinearProgram, LpStatus, Matrix, QpOutcome, VarBound};
use crate::operators::exact::{finite_fitz, AffineFitz, ExactFitz};
use crate::operators::{discretize_graph, BoxProbe, FiniteGraph, LinearMap, OperatorRep, SkewOp};
use crate::pairing::{pairing_flat, ExtReal, PairedPoint, Vector};
use crate::report::{CheckReport, Verdict, Witness};
use crate::representatives::{FnValue, RepFunction};

/// `M(x₁, x₂) = Ax₁ × Bx₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductOperator {
    a: OperatorRep,
    b: OperatorRep,
}

impl ProductOperator {
    pub fn new(a: OperatorRep, b: OperatorRep) -> Result<Self> {
        check_dim(a.dim(), b.dim())?;
        Ok(ProductOperator { a, b })
    }

    pub fn factors(&self) -> (&OperatorRep, &OperatorRep) {
        (&self.a, &self.b)
    }

    pub fn to_operator(&self) -> OperatorRep {
        OperatorRep::product(self.a.clone(), self.b.clone())
    }
}

/// `Lx = (x, x)` from `Rⁿ` to `R²ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMap {
    map: LinearMap,
}

impl DiagonalMap {
    /// Builds the map and checks `L*(u, v) = u + v` on the standard basis.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        let map = LinearMap::diagonal(n);
        for k in 0..2 * n {
            let e = Vector::from_fn(2 * n, |i, _| if i == k { 1.0 } else { 0.0 });
            let img = map.adjoint_apply(&e)?;
            let want = Vector::from_fn(n, |i, _| if i == k % n { 1.0 } else { 0.0 });
            if (img - want).amax() > 0.0 {
                return Err(Error::NumericFailure);
            }
        }
        Ok(DiagonalMap { map })
    }

    pub fn dim(&self) -> usize {
        self.map.input_dim()
    }

    pub fn as_linear_map(&self) -> &LinearMap {
        &self.map
    }
}

pub fn sum_operator(a: OperatorRep, b: OperatorRep) -> Result<OperatorRep> {
    OperatorRep::sum(a, b)
}

/// `x ↦ L*M(Lx)`.
pub fn precompose(l: LinearMap, m: OperatorRep) -> Result<OperatorRep> {
    OperatorRep::precomp(l, m)
}

/// Compares `(A + B)x` with `L*(A × B)(Lx)` for the diagonal `L` by support
/// values in 16 seeded directions at every sample.
pub fn sum_as_chain_check(a: &OperatorRep, b: &OperatorRep, samples: &[Vector], seed: u64) -> Result<CheckReport> {
    let n = a.dim();
    let sum = sum_operator(a.clone(), b.clone())?;
    let diag = DiagonalMap::new(n)?;
    let chain = precompose(
        diag.as_linear_map().clone(),
        ProductOperator::new(a.clone(), b.clone())?.to_operator(),
    )?;
    let dirs = seeded_directions(n, 16, seed);
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    for x in samples {
        check_dim(n, x.len())?;
        let u = sum.evaluate(x)?;
        let v = chain.evaluate(x)?;
        if u.is_empty() != v.is_empty() {
            return Ok(CheckReport::new(Verdict::Fails, tol)
                .with_witness(Witness::vector(x))
                .with_note("domains differ"));
        }
        if u.is_empty() {
            continue;
        }
        for d in &dirs {
            let (su, sv) = (u.support(d), v.support(d));
            let dev = if su == sv { 0.0 } else { (su - sv).abs() };
            worst = worst.max(dev);
            if dev.is_nan() || dev > tol * (1.0 + su.abs().min(sv.abs())) {
                return Ok(CheckReport::new(Verdict::Fails, tol)
                    .with_witness(Witness::vector(x))
                    .with_extreme("max_support_deviation", dev));
            }
        }
    }
    Ok(CheckReport::new(Verdict::Holds, tol).with_extreme("max_support_deviation", worst))
}

/// Unit directions drawn from a seeded generator.
pub(crate) fn seeded_directions(n: usize, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let norm = d.norm();
        if norm > 1e-3 {
            out.push(d / norm);
        }
    }
    out
}

/// Value of the chain representative with the LP status and the
/// minimizing `y*` when one exists.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainValue {
    pub value: ExtReal,
    pub status: LpStatus,
    pub ystar: Option<Vector>,
}

/// `r(x, x*) = min { φ_M(Lx, y*) : L*y* = x* }` for a finite graph `M`.
///
/// Variables are the convex weights `λ` on the graph of `M` and a free
/// `y*`: `Σλᵢ mᵢ = (Lx, y*)`, `L*y* = x*`, objective `Σλᵢ p(mᵢ)`.
pub fn chain_representative_value(l: &LinearMap, m: &FiniteGraph, x: &Vector, xstar: &Vector) -> Result<ChainValue> {
    let k = l.output_dim();
    let n = l.input_dim();
    check_dim(k, m.dim())?;
    check_dim(n, x.len())?;
    check_dim(n, xstar.len())?;
    if m.is_empty() {
        return Err(Error::EmptyOperator);
    }
    let cnt = m.len();
    let nv = cnt + k;
    let lx = l.apply(x)?;
    let mut lp = LinearProgram::new(nv);
    for j in cnt..nv {
        lp.set_bounds(j, VarBound::FREE)?;
    }
    let mut obj: Vec<f64> = (0..cnt).map(|i| pairing_flat(m.row(i))).collect();
    obj.resize(nv, 0.0);
    lp.set_objective(obj)?;
    for r in 0..k {
        let mut row: Vec<f64> = (0..cnt).map(|i| m.row(i)[r]).collect();
        row.resize(nv, 0.0);
        lp.add_eq(row, lx[r])?;
    }
    for r in 0..k {
        let mut row: Vec<f64> = (0..cnt).map(|i| m.row(i)[k + r]).collect();
        row.resize(nv, 0.0);
        row[cnt + r] = -1.0;
        lp.add_eq(row, 0.0)?;
    }
    let lm = l.matrix();
    for c in 0..n {
        let mut row = vec![0.0; nv];
        for r in 0..k {
            row[cnt + r] = lm[(r, c)];
        }
        lp.add_eq(row, xstar[c])?;
    }
    let mut simplex = vec![1.0; cnt];
    simplex.resize(nv, 0.0);
    lp.add_eq(simplex, 1.0)?;
    let sol = solve_lp(&lp);
    match sol.status {
        LpStatus::Optimal => Ok(ChainValue {
            value: ExtReal::Finite(sol.value),
            status: sol.status,
            ystar: Some(Vector::from_column_slice(&sol.point[cnt..])),
        }),
        LpStatus::Infeasible => Ok(ChainValue { value: ExtReal::PosInf, status: sol.status, ystar: None }),
        LpStatus::Unbounded => Ok(ChainValue { value: ExtReal::PosInf, status: sol.status, ystar: None }),
        LpStatus::NumericFailure => Err(Error::NumericFailure),
    }
}

/// Grid comparison of `{r = p}` with the graph of `T = L*ML`.
///
/// A grid point counts as a graph point of `T` when `x*` lies in `T(x)`
/// within `1e-9`. An `UNBOUNDED` LP status anywhere is a failure.
pub fn chain_representative_check(l: &LinearMap, m: &FiniteGraph, probe: &BoxProbe) -> Result<CheckReport> {
    let n = probe.z_dim()?;
    check_dim(l.input_dim(), n)?;
    let tol = probe.tol();
    let t = precompose(l.clone(), OperatorRep::finite(m.clone()))?;
    let mut tight = 0usize;
    let mut finite = 0usize;
    let mut outcome: Result<Option<(Vec<f64>, &'static str)>> = Ok(None);
    probe.for_each_point(|z| {
        let step = (|| -> Result<Option<&'static str>> {
            let x = Vector::from_column_slice(&z[..n]);
            let xs = Vector::from_column_slice(&z[n..]);
            let r = chain_representative_value(l, m, &x, &xs)?;
            if r.status == LpStatus::Unbounded {
                return Ok(Some("chain LP unbounded"));
            }
            let p = pairing_flat(z);
            if let ExtReal::Finite(v) = r.value {
                finite += 1;
                if v < p - tol {
                    return Ok(Some("r below p"));
                }
            }
            let on_level = matches!(r.value, ExtReal::Finite(v) if (v - p).abs() <= tol);
            let on_graph = t.evaluate(&x)?.contains(&xs, 1e-9)?;
            if on_level {
                tight += 1;
            }
            Ok(match (on_level, on_graph) {
                (true, false) => Some("r = p off the graph of T"),
                (false, true) => Some("graph point of T with r ≠ p"),
                _ => None,
            })
        })();
        match step {
            Ok(None) => true,
            Ok(Some(msg)) => {
                outcome = Ok(Some((z.to_vec(), msg)));
                false
            }
            Err(e) => {
                outcome = Err(e);
                false
            }
        }
    });
    let base = |v: Verdict| {
        CheckReport::new(v, tol)
            .with_resolution(probe.resolution())
            .with_extreme("level_points", tight as f64)
            .with_extreme("finite_points", finite as f64)
    };
    Ok(match outcome? {
        None => base(Verdict::HoldsAtResolution),
        Some((z, msg)) => base(Verdict::Fails)
            .with_witness(Witness::Point { point: PairedPoint::from_concat(&z)? })
            .with_note(msg),
    })
}

/// `y ↦ h(x, y)` at a fixed `x`: a max-affine part, a quadratic part
/// `¼(y + c)ᵀP(y + c)`, a constant and linear constraints.
#[derive(Debug, Clone)]
struct Slice {
    pieces: Vec<(Vector, f64)>,
    quad: Option<(Matrix, Vector)>,
    konst: f64,
    eqs: Vec<(Vector, f64)>,
    ineqs: Vec<(Vector, f64)>,
    infinite: bool,
}

impl Slice {
    fn empty() -> Self {
        Slice { pieces: Vec::new(), quad: None, konst: 0.0, eqs: Vec::new(), ineqs: Vec::new(), infinite: false }
    }

    fn infinite() -> Self {
        Slice { infinite: true, ..Slice::empty() }
    }

    fn from_graph(g: &FiniteGraph, x: &Vector) -> Self {
        let n = g.dim();
        let pieces = (0..g.len())
            .map(|i| {
                let a = g.row(i);
                let s = Vector::from_column_slice(&a[..n]);
                let c: f64 = (0..n).map(|j| a[n + j] * x[j]).sum::<f64>() - pairing_flat(a);
                (s, c)
            })
            .collect();
        Slice { pieces, ..Slice::empty() }
    }

    fn from_affine(m: &Matrix, q: &Vector, x: &Vector) -> Self {
        let f = AffineFitz::new(m, q);
        let c = m.tr_mul(x) - q;
        let kr = f.kernel_rows();
        let eqs = (0..kr.nrows())
            .map(|i| {
                let g = kr.row(i).transpose();
                let b = -g.dot(&c);
                (g, b)
            })
            .collect();
        let p = f.s_pinv().clone();
        let quad = (p.amax() > 0.0).then_some((p, c));
        Slice { quad, konst: x.dot(q), eqs, ..Slice::empty() }
    }

    /// `y ↦ self(y − d)`.
    fn translated(mut self, d: &Vector) -> Self {
        for (s, c) in &mut self.pieces {
            *c -= s.dot(d);
        }
        if let Some((_, c)) = &mut self.quad {
            *c -= d;
        }
        for (g, b) in self.eqs.iter_mut().chain(self.ineqs.iter_mut()) {
            *b += g.dot(d);
        }
        self
    }

    /// `y ↦ self(x* − y)`.
    fn reflected(mut self, xstar: &Vector) -> Self {
        for (s, c) in &mut self.pieces {
            *c += s.dot(xstar);
            *s = -&*s;
        }
        if let Some((_, c)) = &mut self.quad {
            *c = -(xstar + &*c);
        }
        for (g, b) in self.eqs.iter_mut().chain(self.ineqs.iter_mut()) {
            *b -= g.dot(xstar);
            *g = -&*g;
        }
        self
    }
}

fn slice_of(f: &RepFunction, x: &Vector) -> Result<Slice> {
    match f {
        RepFunction::FitzFinite(g) => Ok(Slice::from_graph(g, x)),
        RepFunction::FitzAffine { m, q } => Ok(Slice::from_affine(m, q, x)),
        RepFunction::Shifted { base, shift } => Ok(slice_of(base, x)?.translated(&(shift.matrix() * x))),
        RepFunction::FitzOperator { op, .. } => match ExactFitz::for_operator(op)? {
            Some(ExactFitz::Finite(g)) => Ok(Slice::from_graph(&g, x)),
            Some(ExactFitz::Affine(_)) => {
                let (m, q) = op.as_affine().ok_or(Error::NumericFailure)?;
                Ok(Slice::from_affine(&m, &q, x))
            }
            Some(ExactFitz::Poly(p)) => Ok(match p.slice(x) {
                None => Slice::infinite(),
                Some(s) => Slice { pieces: s.pieces, ineqs: s.ineqs, ..Slice::empty() },
            }),
            None => Err(Error::Unsupported(format!("no exact Fitzpatrick function for {}", op.kind_name()))),
        },
        other => Err(Error::Unsupported(format!("partial infimal convolution of {}", other.kind_name()))),
    }
}

/// When the equalities fix `y`, the value of the max-affine slices at that
/// `y`; `+∞` if the equalities or inequalities are inconsistent there.
fn pinned_value(
    n: usize,
    eqs: &[&(Vector, f64)],
    ineqs: &[&(Vector, f64)],
    slices: &[&Vec<(Vector, f64)>],
) -> Result<Option<f64>> {
    if eqs.len() < n {
        return Ok(None);
    }
    let cm = Matrix::from_fn(eqs.len(), n, |i, j| eqs[i].0[j]);
    if rank(&cm) < n {
        return Ok(None);
    }
    let d = Vector::from_iterator(eqs.len(), eqs.iter().map(|e| e.1));
    let (y, residual) = lstsq(&cm, &d)?;
    if residual > PINNED_TOL * (1.0 + d.norm()) || ineqs.iter().any(|(g, b)| g.dot(&y) > b + PINNED_TOL * (1.0 + b.abs())) {
        return Ok(Some(f64::INFINITY));
    }
    let value = slices
        .iter()
        .filter(|p| !p.is_empty())
        .map(|p| p.iter().map(|(s, c)| s.dot(&y) + c).fold(f64::NEG_INFINITY, f64::max))
        .sum();
    Ok(Some(value))
}

const PINNED_TOL: f64 = 1e-9;

/// `(h₁ □₂ h₂)(x, x*) = inf { h₁(x, y*) + h₂(x, x* − y*) }`.
///
/// Max-affine slices are combined by linear programming with one epigraph
/// variable per function; quadratic slices by an equality-constrained QP.
/// Mixing a non-degenerate quadratic with max-affine pieces is not supported.
pub fn infconv2_value(h1: &RepFunction, h2: &RepFunction, x: &Vector, xstar: &Vector) -> Result<FnValue> {
    let n = h1.dim();
    check_dim(n, h2.dim())?;
    check_dim(n, x.len())?;
    check_dim(n, xstar.len())?;
    let s1 = slice_of(h1, x)?;
    let s2 = slice_of(h2, x)?.reflected(xstar);
    if s1.infinite || s2.infinite {
        return Ok(FnValue::exact(f64::INFINITY));
    }
    let konst = s1.konst + s2.konst;
    let eqs: Vec<&(Vector, f64)> = s1.eqs.iter().chain(&s2.eqs).collect();
    let ineqs: Vec<&(Vector, f64)> = s1.ineqs.iter().chain(&s2.ineqs).collect();
    let quads: Vec<&(Matrix, Vector)> = s1.quad.iter().chain(s2.quad.iter()).collect();
    if !quads.is_empty() {
        if !s1.pieces.is_empty() || !s2.pieces.is_empty() || !ineqs.is_empty() {
            return Err(Error::Unsupported("quadratic slice combined with max-affine pieces".into()));
        }
        let mut h = Matrix::zeros(n, n);
        let mut g = Vector::zeros(n);
        let mut c0 = konst;
        for (p, c) in quads {
            h += p * 0.5;
            g += p * c * 0.5;
            c0 += 0.25 * c.dot(&(p * c));
        }
        let cm = Matrix::from_fn(eqs.len(), n, |i, j| eqs[i].0[j]);
        let d = Vector::from_iterator(eqs.len(), eqs.iter().map(|e| e.1));
        return match equality_qp(&h, &g, c0, &cm, &d)? {
            QpOutcome::Optimal { value, .. } => Ok(FnValue::exact(value)),
            QpOutcome::Infeasible => Ok(FnValue::exact(f64::INFINITY)),
            QpOutcome::Unbounded => Err(Error::Unbounded),
        };
    }
    if let Some(v) = pinned_value(n, &eqs, &ineqs, &[&s1.pieces, &s2.pieces])? {
        return Ok(FnValue::exact(v + konst));
    }
    // variables: y (n, free), then one epigraph variable per max-affine slice
    let epi: Vec<&Vec<(Vector, f64)>> = [&s1.pieces, &s2.pieces].into_iter().filter(|p| !p.is_empty()).collect();
    let nv = n + epi.len();
    let mut lp = LinearProgram::new(nv);
    for j in 0..nv {
        lp.set_bounds(j, VarBound::FREE)?;
    }
    let mut obj = vec![0.0; nv];
    for t in 0..epi.len() {
        obj[n + t] = 1.0;
    }
    lp.set_objective(obj)?;
    for (t, pieces) in epi.iter().enumerate() {
        for (s, c) in pieces.iter() {
            let mut row: Vec<f64> = s.iter().copied().collect();
            row.resize(nv, 0.0);
            row[n + t] = -1.0;
            lp.add_le(row, -c)?;
        }
    }
    for (g, b) in eqs {
        let mut row: Vec<f64> = g.iter().copied().collect();
        row.resize(nv, 0.0);
        lp.add_eq(row, *b)?;
    }
    for (g, b) in ineqs {
        let mut row: Vec<f64> = g.iter().copied().collect();
        row.resize(nv, 0.0);
        lp.add_le(row, *b)?;
    }
    let sol = solve_lp(&lp);
    match sol.status {
        LpStatus::Optimal => Ok(FnValue::exact(sol.value + konst)),
        LpStatus::Infeasible => Ok(FnValue::exact(f64::INFINITY)),
        LpStatus::Unbounded => Err(Error::Unbounded),
        LpStatus::NumericFailure => Err(Error::NumericFailure),
    }
}

fn same_ext(a: f64, b: f64, tol: f64) -> (bool, f64) {
    if a == f64::INFINITY || b == f64::INFINITY {
        return (a == b, if a == b { 0.0 } else { f64::INFINITY });
    }
    let d = (a - b).abs();
    (d <= tol, d)
}

/// Grid comparison of `h_{A+B}(x, x*)` with `h_A(x, x* − Bx)`.
///
/// Affine and finite `A` are compared in closed form at tolerance `1e-9`;
/// for these kinds the identity is algebraic, so agreement on the grid is
/// reported as `Holds`. Otherwise both sides come from the graphs of `A` and `A + B` sampled on
/// the probe, and the tolerance is `3·resolution` times a Lipschitz bound of
/// `a ↦ z·a − p(a)` over the box and the samples.
pub fn skew_shift_identity_check(a: &OperatorRep, b: &SkewOp, probe: &BoxProbe) -> Result<CheckReport> {
    let n = probe.z_dim()?;
    check_dim(a.dim(), n)?;
    check_dim(b.dim(), n)?;
    let bm = b.matrix();
    let shift = |z: &[f64]| -> Vec<f64> {
        let mut w = z.to_vec();
        for i in 0..n {
            for j in 0..n {
                w[n + i] -= bm[(i, j)] * z[j];
            }
        }
        w
    };
    type Eval = Box<dyn Fn(&[f64]) -> f64>;
    let (left, right, tol, kind): (Eval, Eval, f64, &str) = if let Some((m, q)) = a.as_affine() {
        let lhs = AffineFitz::new(&(&m + bm), &q);
        let rhs = AffineFitz::new(&m, &q);
        (Box::new(move |z| lhs.value(z)), Box::new(move |z| rhs.value(z)), 1e-9, "closed form")
    } else if let OperatorRep::FiniteGraph(g) = a {
        let shifted: Vec<PairedPoint> = g
            .points()
            .iter()
            .map(|p| PairedPoint::raw(p.x().clone(), p.xstar() + bm * p.x()))
            .collect();
        let gs = FiniteGraph::new(n, shifted)?;
        let g = g.clone();
        (Box::new(move |z| finite_fitz(&gs, z)), Box::new(move |z| finite_fitz(&g, z)), 1e-9, "finite graph")
    } else {
        let skew = OperatorRep::SkewLinear(b.clone());
        let ga = discretize_graph(a, probe)?;
        let gab = discretize_graph(&OperatorRep::sum(a.clone(), skew)?, probe)?;
        if ga.is_empty() || gab.is_empty() {
            return Err(Error::EmptyOperator);
        }
        let amax = ga.points().iter().chain(gab.points()).map(|p| p.norm()).fold(0.0, f64::max);
        let zmax = probe
            .lo()
            .iter()
            .zip(probe.hi())
            .map(|(l, h)| l.abs().max(h.abs()).powi(2))
            .sum::<f64>()
            .sqrt();
        let tol = 3.0 * probe.resolution() * (amax + zmax);
        (Box::new(move |z| finite_fitz(&gab, z)), Box::new(move |z| finite_fitz(&ga, z)), tol, "sampled")
    };
    let mut worst: f64 = 0.0;
    let mut witness = None;
    probe.for_each_point(|z| {
        let lhs = left(z);
        let rhs = right(&shift(z));
        let scale = if kind == "sampled" { 1.0 } else { 1.0 + lhs.abs().min(rhs.abs()) };
        let (ok, d) = same_ext(lhs, rhs, tol * scale);
        if d.is_finite() {
            worst = worst.max(d);
        }
        if !ok {
            witness = Some(z.to_vec());
            return false;
        }
        true
    });
    let mut r = match &witness {
        None if kind == "sampled" => CheckReport::new(Verdict::HoldsAtResolution, tol),
        None => CheckReport::new(Verdict::Holds, tol),
        Some(z) => CheckReport::new(Verdict::Fails, tol).with_witness(Witness::Point { point: PairedPoint::from_concat(z)? }),
    };
    r = r.with_resolution(probe.resolution()).with_extreme("max_deviation", worst).with_note(kind);
    Ok(r)
}

/// Grid comparison of `h_T` for `T = L*ML` with
/// `min { h_M(Lx, y*) : L*y* = x* }` for an affine monotone `M`.
///
/// `M` has full domain, so the interiority hypothesis of the identity holds
/// for every `L`.
pub fn convex_graph_chain_check(l: &LinearMap, m: &OperatorRep, probe: &BoxProbe) -> Result<CheckReport> {
    let n = probe.z_dim()?;
    check_dim(l.input_dim(), n)?;
    check_dim(l.output_dim(), m.dim())?;
    let (mm, q) = m
        .as_affine()
        .ok_or_else(|| Error::InvalidInput("the chain identity check needs an affine operator".into()))?;
    let lm = l.matrix();
    let ht = AffineFitz::new(&(lm.transpose() * &mm * lm), &(lm.transpose() * &q));
    let tol = 1e-7;
    let mut worst: f64 = 0.0;
    let mut outcome: Result<Option<Vec<f64>>> = Ok(None);
    probe.for_each_point(|z| {
        let x = Vector::from_column_slice(&z[..n]);
        let xs = Vector::from_column_slice(&z[n..]);
        let rhs = match fiber_min(&mm, &q, lm, &x, &xs) {
            Ok(v) => v,
            Err(e) => {
                outcome = Err(e);
                return false;
            }
        };
        let (ok, d) = same_ext(ht.value(z), rhs, tol);
        if d.is_finite() {
            worst = worst.max(d);
        }
        if !ok {
            outcome = Ok(Some(z.to_vec()));
            return false;
        }
        true
    });
    let r = match outcome? {
        None => CheckReport::new(Verdict::HoldsAtResolution, tol),
        Some(z) => CheckReport::new(Verdict::Fails, tol).with_witness(Witness::Point { point: PairedPoint::from_concat(&z)? }),
    };
    Ok(r.with_resolution(probe.resolution()).with_extreme("max_deviation", worst))
}

/// `min { h_M(Lx, y) : Lᵀy = x* }` with `h_M(u, y) = ¼(y + c)ᵀS⁺(y + c) + ⟨u, q⟩`,
/// `c = Mᵀu − q`, restricted to `y + c ∈ range S`.
fn fiber_min(m: &Matrix, q: &Vector, l: &Matrix, x: &Vector, xstar: &Vector) -> Result<f64> {
    let u = l * x;
    let s = Slice::from_affine(m, q, &u);
    let k = u.len();
    let mut rows: Vec<(Vector, f64)> = (0..l.ncols()).map(|c| (l.column(c).into_owned(), xstar[c])).collect();
    rows.extend(s.eqs);
    let cm = Matrix::from_fn(rows.len(), k, |i, j| rows[i].0[j]);
    let d = Vector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    let (h, g, c0) = match &s.quad {
        Some((p, c)) => (p * 0.5, p * c * 0.5, 0.25 * c.dot(&(p * c)) + s.konst),
        None => (Matrix::zeros(k, k), Vector::zeros(k), s.konst),
    };
    match equality_qp(&h, &g, c0, &cm, &d)? {
        QpOutcome::Optimal { value, .. } => Ok(value),
        QpOutcome::Infeasible => Ok(f64::INFINITY),
        QpOutcome::Unbounded => Err(Error::Unbounded),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::vector;

    fn pp(x: f64, xs: f64) -> PairedPoint {
        PairedPoint::from_slices(&[x], &[xs]).unwrap()
    }

    #[test]
    fn sum_examples() {
        let id = OperatorRep::identity(1);
        let s = sum_operator(id.clone(), id.clone()).unwrap();
        assert_eq!(s.evaluate(&vector(&[1.0])).unwrap().vertices(), &[vector(&[2.0])]);
        let s = sum_operator(OperatorRep::subdiff_l1(1), id).unwrap();
        let v = s.evaluate(&vector(&[0.0])).unwrap();
        assert_eq!(v.support(&vector(&[1.0])), 1.0);
        assert_eq!(v.support(&vector(&[-1.0])), 1.0);
        let touching = sum_operator(
            OperatorRep::normal_cone_box(&[0.0], &[1.0]).unwrap(),
            OperatorRep::normal_cone_box(&[1.0], &[2.0]).unwrap(),
        )
        .unwrap();
        let v = touching.evaluate(&vector(&[1.0])).unwrap();
        assert_eq!(v.support(&vector(&[1.0])), f64::INFINITY);
        assert_eq!(v.support(&vector(&[-1.0])), f64::INFINITY);
    }

    #[test]
    fn precompose_examples() {
        let diag = DiagonalMap::new(1).unwrap().as_linear_map().clone();
        let t = precompose(diag.clone(), OperatorRep::identity(2)).unwrap();
        assert_eq!(t.evaluate(&vector(&[1.5])).unwrap().vertices(), &[vector(&[3.0])]);
        let zero = LinearMap::new(Matrix::zeros(1, 1)).unwrap();
        let c = precompose(zero, OperatorRep::subdiff_l1(1)).unwrap();
        assert_eq!(c.evaluate(&vector(&[7.0])).unwrap().vertices(), &[vector(&[0.0])]);
        let sq = OperatorRep::normal_cone_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let t = precompose(diag, sq).unwrap();
        let direct = OperatorRep::normal_cone_box(&[0.0], &[1.0]).unwrap();
        for x in [-0.5, 0.0, 0.5, 1.0, 1.5] {
            let (u, v) = (t.evaluate(&vector(&[x])).unwrap(), direct.evaluate(&vector(&[x])).unwrap());
            assert_eq!(u.is_empty(), v.is_empty());
            for d in [1.0, -1.0] {
                if !u.is_empty() {
                    assert_eq!(u.support(&vector(&[d])), v.support(&vector(&[d])));
                }
            }
        }
    }

    #[test]
    fn sum_equals_chain_of_product() {
        let a = OperatorRep::subdiff_l1(2);
        let b = OperatorRep::normal_cone_box(&[-1.0, 0.0], &[1.0, 1.0]).unwrap();
        let xs: Vec<Vector> = (0..20).map(|i| vector(&[-1.2 + 0.12 * i as f64, 0.5 - 0.05 * i as f64])).collect();
        assert_eq!(sum_as_chain_check(&a, &b, &xs, 7).unwrap().verdict, Verdict::Holds);
    }

    fn sampled_identity_2d() -> FiniteGraph {
        let probe = BoxProbe::cube(2, 1.0, 0.5, 1e-9).unwrap();
        let pts = probe
            .points()
            .into_iter()
            .map(|x| PairedPoint::from_slices(&x, &x).unwrap())
            .collect();
        FiniteGraph::new(2, pts).unwrap()
    }

    #[test]
    fn chain_representative_examples() {
        let l = LinearMap::diagonal(1);
        let m = sampled_identity_2d();
        let r = chain_representative_value(&l, &m, &vector(&[1.0]), &vector(&[2.0])).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value.to_f64() - 2.0).abs() < 1e-12);
        let y = r.ystar.unwrap();
        assert!((y[0] - 1.0).abs() < 1e-12 && (y[1] - 1.0).abs() < 1e-12);
        let r = chain_representative_value(&l, &m, &vector(&[1.0]), &vector(&[3.0])).unwrap();
        assert_eq!(r.value, ExtReal::PosInf);
    }

    #[test]
    fn chain_with_identity_map_is_penot() {
        let g = FiniteGraph::new(1, vec![pp(0.0, 0.0), pp(1.0, 1.0)]).unwrap();
        let l = LinearMap::identity(1);
        let r = chain_representative_value(&l, &g, &vector(&[0.5]), &vector(&[0.5])).unwrap();
        let phi = crate::representatives::penot_value(&g, &pp(0.5, 0.5)).unwrap();
        assert!((r.value.to_f64() - phi.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn chain_level_set_is_graph() {
        let probe = BoxProbe::paired(&[-1.0], &[1.0], &[-2.0], &[2.0], 0.5, 1e-9).unwrap();
        let r = chain_representative_check(&LinearMap::diagonal(1), &sampled_identity_2d(), &probe).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsAtResolution, "{r:?}");
        assert_eq!(r.extremes["level_points"], 5.0);
    }

    fn single() -> RepFunction {
        RepFunction::FitzFinite(FiniteGraph::new(1, vec![pp(0.0, 0.0)]).unwrap())
    }

    #[test]
    fn infconv_examples() {
        let v = infconv2_value(&single(), &single(), &vector(&[0.4]), &vector(&[-1.3])).unwrap();
        assert_eq!(v.to_f64(), 0.0);
        let id = RepFunction::fitz_affine(Matrix::identity(1, 1), vector(&[0.0])).unwrap();
        let zero = RepFunction::fitz_affine(Matrix::zeros(1, 1), vector(&[0.0])).unwrap();
        let v = infconv2_value(&id, &zero, &vector(&[1.0]), &vector(&[1.0])).unwrap();
        assert!((v.to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infconv_with_skew_is_shift() {
        let b = SkewOp::rotation();
        let hb = RepFunction::fitz_affine(b.matrix().clone(), Vector::zeros(2)).unwrap();
        let hi = RepFunction::fitz_affine(Matrix::identity(2, 2), Vector::zeros(2)).unwrap();
        let habs = RepFunction::FitzOperator { op: OperatorRep::subdiff_l1(2), probe: BoxProbe::default_for(2) };
        for h in [hi, habs] {
            for (x, xs) in [([1.0, 0.0], [0.0, 0.0]), ([0.3, -0.7], [0.2, 0.9]), ([0.0, 0.0], [0.5, -0.5])] {
                let (x, xs) = (vector(&x), vector(&xs));
                let lhs = infconv2_value(&h, &hb, &x, &xs).unwrap().to_f64();
                let rhs = h.value(&PairedPoint::raw(x.clone(), &xs - b.matrix() * &x)).unwrap().to_f64();
                assert!(lhs == rhs || (lhs - rhs).abs() <= 1e-12, "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn skew_shift_examples() {
        let probe = BoxProbe::cube(4, 1.0, 0.5, 1e-9).unwrap();
        let b = SkewOp::rotation();
        let r = skew_shift_identity_check(&OperatorRep::identity(2), &b, &probe).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let zero = SkewOp::new(Matrix::zeros(2, 2)).unwrap();
        let r = skew_shift_identity_check(&OperatorRep::identity(2), &zero, &probe).unwrap();
        assert_eq!(r.extremes["max_deviation"], 0.0);
        let r = skew_shift_identity_check(&OperatorRep::subdiff_l1(2), &b, &probe).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsAtResolution, "{r:?}");
        // spot value: ¼|x + x* − Bx|² at x = (1, 0), x* = 0
        let lhs = AffineFitz::new(&(Matrix::identity(2, 2) + b.matrix()), &Vector::zeros(2)).value(&[1.0, 0.0, 0.0, 0.0]);
        assert!((lhs - 0.5).abs() < 1e-15);
    }

    #[test]
    fn convex_graph_chain_examples() {
        let probe = BoxProbe::cube(2, 1.0, 0.25, 1e-9).unwrap();
        let m = OperatorRep::identity(2);
        let r = convex_graph_chain_check(&LinearMap::diagonal(1), &m, &probe).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsAtResolution, "{r:?}");
        let r = convex_graph_chain_check(&LinearMap::identity(1), &OperatorRep::identity(1), &probe).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsAtResolution);
        let zero = LinearMap::new(Matrix::zeros(2, 1)).unwrap();
        let r = convex_graph_chain_check(&zero, &m, &probe).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsAtResolution, "{r:?}");
    }
}
