//! The tagged operator representation, evaluation and domains.

use crate::error::{check_dim, Error, Result};
use crate::lpkernel::{lstsq, null_space, Matrix};
use crate::pairing::{all_finite, Vector};

use super::graph::{FiniteGraph, LinearMap};
use super::polytope::{GenPolytope, Halfspaces};

/// Activity tolerance for max-affine pieces and constraint tightness.
pub const ACTIVE_TOL: f64 = 1e-9;
/// Tolerance for matching a query point against finite-graph abscissae.
pub const MATCH_TOL: f64 = 1e-12;

/// `x ↦ Mx + q` with `(M + Mᵀ)/2 ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineOp {
    m: Matrix,
    q: Vector,
}

impl AffineOp {
    pub fn new(m: Matrix, q: Vector) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidInput("affine operator needs a square matrix".into()));
        }
        check_dim(m.nrows(), q.len())?;
        if m.iter().any(|v| !v.is_finite()) || !all_finite(&q) {
            return Err(Error::NonFinite);
        }
        let s = (&m + m.transpose()) * 0.5;
        let min_eig = s.symmetric_eigenvalues().iter().fold(f64::INFINITY, |a, b| a.min(*b));
        if min_eig < -1e-9 {
            return Err(Error::NotMonotone(format!("symmetric part has eigenvalue {min_eig:e}")));
        }
        Ok(AffineOp { m, q })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn offset(&self) -> &Vector {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.m * x + &self.q
    }
}

/// `x ↦ Bx` with `B + Bᵀ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewOp {
    b: Matrix,
}

impl SkewOp {
    pub fn new(b: Matrix) -> Result<Self> {
        if b.nrows() != b.ncols() || b.nrows() == 0 {
            return Err(Error::InvalidInput("skew operator needs a square matrix".into()));
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let defect = (&b + b.transpose()).amax();
        if defect > 1e-12 {
            return Err(Error::InvalidInput(format!("matrix is not skew (|B + Bᵀ| = {defect:e})")));
        }
        Ok(SkewOp { b })
    }

    /// Generator of plane rotations, `[[0, −1], [1, 0]]`.
    pub fn rotation() -> Self {
        SkewOp { b: Matrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.b.nrows()
    }
}

/// `f(x) = maxᵢ ⟨aᵢ, x⟩ + bᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    dim: usize,
    slopes: Vec<Vector>,
    offsets: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(pieces: Vec<(Vector, f64)>) -> Result<Self> {
        let dim = pieces.first().map(|(a, _)| a.len()).ok_or(Error::EmptyOperator)?;
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        let mut slopes = Vec::with_capacity(pieces.len());
        let mut offsets = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            check_dim(dim, a.len())?;
            if !all_finite(&a) || !b.is_finite() {
                return Err(Error::NonFinite);
            }
            slopes.push(a);
            offsets.push(b);
        }
        Ok(PiecewiseLinear { dim, slopes, offsets })
    }

    /// `x ↦ Σ |xᵢ|`.
    pub fn l1(n: usize) -> Self {
        let mut pieces = Vec::with_capacity(1 << n);
        for mask in 0..(1usize << n) {
            let a = Vector::from_fn(n, |i, _| if mask & (1 << i) != 0 { -1.0 } else { 1.0 });
            pieces.push((a, 0.0));
        }
        PiecewiseLinear::new(pieces).expect("valid pieces")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slopes(&self) -> &[Vector] {
        &self.slopes
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn value(&self, x: &Vector) -> f64 {
        self.slopes
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| a.dot(x) + b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn active(&self, x: &Vector) -> Vec<usize> {
        let f = self.value(x);
        (0..self.slopes.len())
            .filter(|&i| self.slopes[i].dot(x) + self.offsets[i] >= f - ACTIVE_TOL * (1.0 + f.abs()))
            .collect()
    }
}

/// Multi-valued monotone operator on `Rⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorRep {
    FiniteGraph(FiniteGraph),
    AffineMonotone(AffineOp),
    SkewLinear(SkewOp),
    /// Subdifferential of a max-affine function.
    SubdiffPL(PiecewiseLinear),
    /// Normal cone of a non-empty polyhedron.
    NormalCone(Halfspaces),
    Sum(Box<OperatorRep>, Box<OperatorRep>),
    /// `x ↦ L*M(Lx)`.
    Precomp(LinearMap, Box<OperatorRep>),
    /// `(x₁, x₂) ↦ A x₁ × B x₂`.
    Product(Box<OperatorRep>, Box<OperatorRep>),
}

/// Domain of an operator: a polyhedron, or a finite point set.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSet {
    Polyhedron(Halfspaces),
    Points(Vec<Vector>),
}

/// `∂(f + ι_C)` for a max-affine `f` and a polyhedron `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralForm {
    pub f: PiecewiseLinear,
    pub constraints: Halfspaces,
}

impl OperatorRep {
    pub fn finite(g: FiniteGraph) -> Self {
        OperatorRep::FiniteGraph(g)
    }

    pub fn affine(m: Matrix, q: Vector) -> Result<Self> {
        Ok(OperatorRep::AffineMonotone(AffineOp::new(m, q)?))
    }

    /// The identity map on `Rⁿ`.
    pub fn identity(n: usize) -> Self {
        OperatorRep::AffineMonotone(AffineOp { m: Matrix::identity(n, n), q: Vector::zeros(n) })
    }

    pub fn skew(b: Matrix) -> Result<Self> {
        Ok(OperatorRep::SkewLinear(SkewOp::new(b)?))
    }

    pub fn subdiff_pl(pieces: Vec<(Vector, f64)>) -> Result<Self> {
        Ok(OperatorRep::SubdiffPL(PiecewiseLinear::new(pieces)?))
    }

    /// `∂|·|₁` on `Rⁿ`.
    pub fn subdiff_l1(n: usize) -> Self {
        OperatorRep::SubdiffPL(PiecewiseLinear::l1(n))
    }

    pub fn normal_cone(c: Halfspaces) -> Result<Self> {
        if !c.is_feasible()? {
            return Err(Error::EmptySet);
        }
        Ok(OperatorRep::NormalCone(c))
    }

    /// Normal cone of the box `[lo, hi]`.
    pub fn normal_cone_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        Self::normal_cone(Halfspaces::boxed(lo, hi)?)
    }

    pub fn sum(a: OperatorRep, b: OperatorRep) -> Result<Self> {
        check_dim(a.dim(), b.dim())?;
        Ok(OperatorRep::Sum(Box::new(a), Box::new(b)))
    }

    pub fn precomp(l: LinearMap, inner: OperatorRep) -> Result<Self> {
        check_dim(l.output_dim(), inner.dim())?;
        Ok(OperatorRep::Precomp(l, Box::new(inner)))
    }

    pub fn product(a: OperatorRep, b: OperatorRep) -> Self {
        OperatorRep::Product(Box::new(a), Box::new(b))
    }

    pub fn dim(&self) -> usize {
        match self {
            OperatorRep::FiniteGraph(g) => g.dim(),
            OperatorRep::AffineMonotone(a) => a.dim(),
            OperatorRep::SkewLinear(s) => s.dim(),
            OperatorRep::SubdiffPL(f) => f.dim(),
            OperatorRep::NormalCone(c) => c.dim(),
            OperatorRep::Sum(a, _) => a.dim(),
            OperatorRep::Precomp(l, _) => l.input_dim(),
            OperatorRep::Product(a, b) => a.dim() + b.dim(),
        }
    }

    /// Short label for reports.
    pub fn kind_name(&self) -> &'static str {
        match self {
            OperatorRep::FiniteGraph(_) => "finite",
            OperatorRep::AffineMonotone(_) => "affine",
            OperatorRep::SkewLinear(_) => "skew",
            OperatorRep::SubdiffPL(_) => "subdiff-pl",
            OperatorRep::NormalCone(_) => "normal-cone",
            OperatorRep::Sum(..) => "sum",
            OperatorRep::Precomp(..) => "precomp",
            OperatorRep::Product(..) => "product",
        }
    }

    /// The value set `Ax`; empty outside the domain.
    pub fn evaluate(&self, x: &Vector) -> Result<GenPolytope> {
        check_dim(self.dim(), x.len())?;
        let n = self.dim();
        match self {
            OperatorRep::FiniteGraph(g) => {
                let vals: Vec<Vector> = g
                    .points()
                    .iter()
                    .filter(|p| (p.x() - x).amax() <= MATCH_TOL)
                    .map(|p| p.xstar().clone())
                    .collect();
                if vals.is_empty() {
                    Ok(GenPolytope::empty(n))
                } else {
                    Ok(GenPolytope::raw(n, vals, Vec::new()))
                }
            }
            OperatorRep::AffineMonotone(a) => Ok(GenPolytope::point(a.apply(x))),
            OperatorRep::SkewLinear(s) => Ok(GenPolytope::point(s.matrix() * x)),
            OperatorRep::SubdiffPL(f) => {
                let vals = f.active(x).into_iter().map(|i| f.slopes()[i].clone()).collect();
                Ok(GenPolytope::raw(n, vals, Vec::new()))
            }
            OperatorRep::NormalCone(c) => Ok(normal_cone_at(c, x)),
            OperatorRep::Sum(a, b) => a.evaluate(x)?.minkowski_sum(&b.evaluate(x)?),
            OperatorRep::Precomp(l, inner) => {
                let inner_val = inner.evaluate(&l.apply(x)?)?;
                if inner_val.is_empty() {
                    return Ok(GenPolytope::empty(n));
                }
                inner_val.map(&l.adjoint().matrix().clone())
            }
            OperatorRep::Product(a, b) => {
                let na = a.dim();
                let xa = x.rows(0, na).into_owned();
                let xb = x.rows(na, n - na).into_owned();
                Ok(a.evaluate(&xa)?.product(&b.evaluate(&xb)?))
            }
        }
    }

    /// `D(A)` as a polyhedron or a finite set.
    pub fn domain_set(&self) -> Result<DomainSet> {
        let n = self.dim();
        match self {
            OperatorRep::FiniteGraph(g) => {
                let mut pts: Vec<Vector> = Vec::new();
                for p in g.points() {
                    if !pts.iter().any(|q| (q - p.x()).amax() <= MATCH_TOL) {
                        pts.push(p.x().clone());
                    }
                }
                Ok(DomainSet::Points(pts))
            }
            OperatorRep::AffineMonotone(_) | OperatorRep::SkewLinear(_) | OperatorRep::SubdiffPL(_) => {
                Ok(DomainSet::Polyhedron(Halfspaces::whole_space(n)))
            }
            OperatorRep::NormalCone(c) => Ok(DomainSet::Polyhedron(c.clone())),
            OperatorRep::Sum(a, b) => intersect_domains(a.domain_set()?, b.domain_set()?),
            OperatorRep::Precomp(l, inner) => match inner.domain_set()? {
                DomainSet::Polyhedron(h) => Ok(DomainSet::Polyhedron(h.preimage(l.matrix())?)),
                DomainSet::Points(pts) => {
                    if null_space(l.matrix()).ncols() > 0 {
                        return Err(Error::Unsupported(
                            "preimage of a finite set under a non-injective map".into(),
                        ));
                    }
                    let mut out = Vec::new();
                    for y in pts {
                        let (x, res) = lstsq(l.matrix(), &y)?;
                        if res <= MATCH_TOL * (1.0 + y.amax()) {
                            out.push(x);
                        }
                    }
                    Ok(DomainSet::Points(out))
                }
            },
            OperatorRep::Product(a, b) => match (a.domain_set()?, b.domain_set()?) {
                (DomainSet::Polyhedron(ha), DomainSet::Polyhedron(hb)) => {
                    Ok(DomainSet::Polyhedron(ha.product(&hb)))
                }
                (DomainSet::Points(pa), DomainSet::Points(pb)) => {
                    let mut out = Vec::new();
                    for u in &pa {
                        for v in &pb {
                            out.push(Vector::from_iterator(n, u.iter().chain(v.iter()).copied()));
                        }
                    }
                    Ok(DomainSet::Points(out))
                }
                _ => Err(Error::Unsupported("product of a finite and a polyhedral domain".into())),
            },
        }
    }

    /// `D(A)` in vertex/ray form. Finite domains become their vertex list.
    pub fn domain(&self) -> Result<GenPolytope> {
        match self.domain_set()? {
            DomainSet::Polyhedron(h) => h.to_vrep(),
            DomainSet::Points(pts) => {
                if pts.is_empty() {
                    Ok(GenPolytope::empty(self.dim()))
                } else {
                    GenPolytope::new(self.dim(), pts, Vec::new())
                }
            }
        }
    }

    /// `(M, q)` when the operator is a single-valued affine map on `Rⁿ`.
    pub fn as_affine(&self) -> Option<(Matrix, Vector)> {
        match self {
            OperatorRep::AffineMonotone(a) => Some((a.m.clone(), a.q.clone())),
            OperatorRep::SkewLinear(s) => Some((s.b.clone(), Vector::zeros(s.dim()))),
            OperatorRep::Sum(a, b) => {
                let (ma, qa) = a.as_affine()?;
                let (mb, qb) = b.as_affine()?;
                Some((ma + mb, qa + qb))
            }
            OperatorRep::Precomp(l, inner) => {
                let (m, q) = inner.as_affine()?;
                let lm = l.matrix();
                Some((lm.transpose() * m * lm, lm.transpose() * q))
            }
            OperatorRep::Product(a, b) => {
                let (ma, qa) = a.as_affine()?;
                let (mb, qb) = b.as_affine()?;
                let (na, nb) = (qa.len(), qb.len());
                let mut m = Matrix::zeros(na + nb, na + nb);
                m.view_mut((0, 0), (na, na)).copy_from(&ma);
                m.view_mut((na, na), (nb, nb)).copy_from(&mb);
                let q = Vector::from_iterator(na + nb, qa.iter().chain(qb.iter()).copied());
                Some((m, q))
            }
            _ => None,
        }
    }

    /// The operator as `∂(f + ι_C)` with max-affine `f`, when it has that form.
    pub fn as_polyhedral(&self) -> Option<PolyhedralForm> {
        let n = self.dim();
        match self {
            OperatorRep::SubdiffPL(f) => Some(PolyhedralForm {
                f: f.clone(),
                constraints: Halfspaces::whole_space(n),
            }),
            OperatorRep::NormalCone(c) => Some(PolyhedralForm {
                f: PiecewiseLinear::new(vec![(Vector::zeros(n), 0.0)]).ok()?,
                constraints: c.clone(),
            }),
            OperatorRep::AffineMonotone(a) if a.m.amax() == 0.0 => Some(PolyhedralForm {
                f: PiecewiseLinear::new(vec![(a.q.clone(), 0.0)]).ok()?,
                constraints: Halfspaces::whole_space(n),
            }),
            OperatorRep::SkewLinear(s) if s.b.amax() == 0.0 => Some(PolyhedralForm {
                f: PiecewiseLinear::new(vec![(Vector::zeros(n), 0.0)]).ok()?,
                constraints: Halfspaces::whole_space(n),
            }),
            OperatorRep::Sum(a, b) => {
                let pa = a.as_polyhedral()?;
                let pb = b.as_polyhedral()?;
                let mut pieces = Vec::new();
                for (sa, oa) in pa.f.slopes.iter().zip(&pa.f.offsets) {
                    for (sb, ob) in pb.f.slopes.iter().zip(&pb.f.offsets) {
                        pieces.push((sa + sb, oa + ob));
                    }
                }
                Some(PolyhedralForm {
                    f: PiecewiseLinear::new(pieces).ok()?,
                    constraints: pa.constraints.intersect(&pb.constraints).ok()?,
                })
            }
            OperatorRep::Precomp(l, inner) => {
                let p = inner.as_polyhedral()?;
                let lt = l.matrix().transpose();
                let pieces = p.f.slopes.iter().zip(&p.f.offsets).map(|(a, b)| (&lt * a, *b)).collect();
                Some(PolyhedralForm {
                    f: PiecewiseLinear::new(pieces).ok()?,
                    constraints: p.constraints.preimage(l.matrix()).ok()?,
                })
            }
            OperatorRep::Product(a, b) => {
                let pa = a.as_polyhedral()?;
                let pb = b.as_polyhedral()?;
                let mut pieces = Vec::new();
                for (sa, oa) in pa.f.slopes.iter().zip(&pa.f.offsets) {
                    for (sb, ob) in pb.f.slopes.iter().zip(&pb.f.offsets) {
                        let s = Vector::from_iterator(n, sa.iter().chain(sb.iter()).copied());
                        pieces.push((s, oa + ob));
                    }
                }
                Some(PolyhedralForm {
                    f: PiecewiseLinear::new(pieces).ok()?,
                    constraints: pa.constraints.product(&pb.constraints),
                })
            }
            _ => None,
        }
    }

    /// Whether the representation belongs to a class known to be maximal
    /// monotone (affine monotone maps and subdifferentials of polyhedral
    /// convex functions, and products of those).
    pub fn is_maximal_class(&self) -> bool {
        match self {
            OperatorRep::FiniteGraph(_) => false,
            OperatorRep::Product(a, b) => a.is_maximal_class() && b.is_maximal_class(),
            _ => self.as_affine().is_some() || self.as_polyhedral().is_some(),
        }
    }
}

/// Normal cone of `C` at `x`: apex 0, rays the active normals; empty if
/// `x ∉ C`.
pub(crate) fn normal_cone_at(c: &Halfspaces, x: &Vector) -> GenPolytope {
    let n = c.dim();
    if !c.contains(x, ACTIVE_TOL) {
        return GenPolytope::empty(n);
    }
    let rays = c.active(x, ACTIVE_TOL).into_iter().map(|j| c.normals()[j].clone()).collect();
    GenPolytope::raw(n, vec![Vector::zeros(n)], rays)
}

fn intersect_domains(a: DomainSet, b: DomainSet) -> Result<DomainSet> {
    match (a, b) {
        (DomainSet::Polyhedron(ha), DomainSet::Polyhedron(hb)) => Ok(DomainSet::Polyhedron(ha.intersect(&hb)?)),
        (DomainSet::Points(p), DomainSet::Polyhedron(h)) | (DomainSet::Polyhedron(h), DomainSet::Points(p)) => {
            Ok(DomainSet::Points(p.into_iter().filter(|x| h.contains(x, ACTIVE_TOL)).collect()))
        }
        (DomainSet::Points(p), DomainSet::Points(q)) => Ok(DomainSet::Points(
            p.into_iter()
                .filter(|x| q.iter().any(|y| (x - y).amax() <= MATCH_TOL))
                .collect(),
        )),
    }
}

/// Symmetric part `(M + Mᵀ)/2`.
pub(crate) fn sym_part(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}
