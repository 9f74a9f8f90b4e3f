//! Closed-form and LP-free evaluators of the Fitzpatrick function for the
//! representations where it is exactly computable.

use nalgebra::SymmetricEigen;

use crate::error::Result;
use crate::lpkernel::Matrix;
use crate::pairing::{dual_product_flat, pairing_flat, Vector};

use super::graph::FiniteGraph;
use super::polytope::{GenPolytope, Halfspaces};
use super::rep::{sym_part, OperatorRep, PolyhedralForm, ACTIVE_TOL};

const RANGE_TOL: f64 = 1e-9;

/// `h(x, x*) = ¼ vᵀS⁺v + ⟨x, q⟩` with `v = x* + Mᵀx − q`, finite iff
/// `v ∈ range(S)`.
#[derive(Debug, Clone)]
pub(crate) struct AffineFitz {
    n: usize,
    m: Matrix,
    mt: Matrix,
    q: Vector,
    s_pinv: Matrix,
    /// Orthonormal basis of `ker S`, one row per direction.
    kernel_rows: Matrix,
    /// `(I + MᵀM)⁻¹` for graph distances.
    dist_inv: Matrix,
}

impl AffineFitz {
    pub(crate) fn new(m: &Matrix, q: &Vector) -> Self {
        let n = q.len();
        let s = sym_part(m);
        let eig = SymmetricEigen::new(s);
        let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));
        let cut = 1e-9 * lmax;
        let mut s_pinv = Matrix::zeros(n, n);
        let mut kernel: Vec<Vector> = Vec::new();
        for (i, &l) in eig.eigenvalues.iter().enumerate() {
            let u = eig.eigenvectors.column(i).into_owned();
            if lmax > 0.0 && l.abs() > cut {
                s_pinv += &u * u.transpose() / l;
            } else {
                kernel.push(u);
            }
        }
        let kernel_rows = Matrix::from_fn(kernel.len(), n, |i, j| kernel[i][j]);
        let gram = Matrix::identity(n, n) + m.transpose() * m;
        let dist_inv = gram.try_inverse().expect("I + MᵀM is positive definite");
        AffineFitz { n, m: m.clone(), mt: m.transpose(), q: q.clone(), s_pinv, kernel_rows, dist_inv }
    }

    /// `S⁺` for `S = (M + Mᵀ)/2`.
    pub(crate) fn s_pinv(&self) -> &Matrix {
        &self.s_pinv
    }

    /// Orthonormal rows spanning `ker S`.
    pub(crate) fn kernel_rows(&self) -> &Matrix {
        &self.kernel_rows
    }

    /// `v = x* + Mᵀx − q` for concatenated `z`.
    fn v(&self, z: &[f64]) -> Vector {
        let n = self.n;
        Vector::from_fn(n, |i, _| {
            let mut s = z[n + i] - self.q[i];
            for j in 0..n {
                s += self.mt[(i, j)] * z[j];
            }
            s
        })
    }

    pub(crate) fn value(&self, z: &[f64]) -> f64 {
        let n = self.n;
        let v = self.v(z);
        if self.kernel_rows.nrows() > 0 {
            let off = (&self.kernel_rows * &v).norm();
            if off > RANGE_TOL * (1.0 + v.norm()) {
                return f64::INFINITY;
            }
        }
        let quad = v.dot(&(&self.s_pinv * &v));
        let lin: f64 = (0..n).map(|i| z[i] * self.q[i]).sum();
        0.25 * quad + lin
    }

    /// Euclidean distance from `z` to the graph `{(y, My + q)}`.
    pub(crate) fn graph_distance(&self, z: &[f64]) -> f64 {
        let n = self.n;
        let x = Vector::from_column_slice(&z[..n]);
        let xs = Vector::from_column_slice(&z[n..]);
        let y = &self.dist_inv * (&x + &self.mt * (&xs - &self.q));
        let fy = &self.m * &y + &self.q;
        ((&x - &y).norm_squared() + (&xs - fy).norm_squared()).sqrt()
    }
}

/// Exact Fitzpatrick function of `∂(f + ι_C)` with max-affine `f`:
/// for `x ∈ C`, `h(x, x*) = maxᵢ ⟨aᵢ, x⟩ + σ_{Rᵢ}(x* − aᵢ)` where `Rᵢ` is the
/// part of `C` on which piece `i` is active; `+∞` for `x ∉ C`.
#[derive(Debug, Clone)]
pub(crate) struct PolyFitz {
    n: usize,
    constraints: Halfspaces,
    cells: Vec<(Vector, GenPolytope)>,
}

impl PolyFitz {
    pub(crate) fn new(form: &PolyhedralForm) -> Result<Self> {
        let n = form.constraints.dim();
        // equal slopes: only the largest offset can be active
        let mut pieces: Vec<(Vector, f64)> = Vec::new();
        for (a, b) in form.f.slopes().iter().zip(form.f.offsets()) {
            match pieces.iter_mut().find(|(s, _)| (s - a).amax() <= 1e-15) {
                Some(p) => p.1 = p.1.max(*b),
                None => pieces.push((a.clone(), *b)),
            }
        }
        let mut cells = Vec::new();
        for (i, (ai, bi)) in pieces.iter().enumerate() {
            let mut rows: Vec<(Vector, f64)> = form
                .constraints
                .normals()
                .iter()
                .cloned()
                .zip(form.constraints.bounds().iter().copied())
                .collect();
            for (j, (aj, bj)) in pieces.iter().enumerate() {
                if j != i {
                    rows.push((aj - ai, bi - bj));
                }
            }
            let region = Halfspaces::new(n, rows)?.to_vrep()?;
            if !region.is_empty() {
                cells.push((ai.clone(), region));
            }
        }
        Ok(PolyFitz { n, constraints: form.constraints.clone(), cells })
    }

    pub(crate) fn value(&self, z: &[f64]) -> f64 {
        let n = self.n;
        let x = Vector::from_column_slice(&z[..n]);
        if !self.constraints.contains(&x, ACTIVE_TOL) {
            return f64::INFINITY;
        }
        let xs = Vector::from_column_slice(&z[n..]);
        let mut best = f64::NEG_INFINITY;
        for (a, region) in &self.cells {
            let s = region.support(&(&xs - a));
            if s == f64::INFINITY {
                return f64::INFINITY;
            }
            best = best.max(a.dot(&x) + s);
        }
        best
    }

    /// `y ↦ h(x, y)` as a maximum of affine pieces `⟨s, y⟩ + c` subject to
    /// `⟨g, y⟩ ≤ b`; `None` when `x ∉ C`.
    pub(crate) fn slice(&self, x: &Vector) -> Option<AffineSlice> {
        if !self.constraints.contains(x, ACTIVE_TOL) {
            return None;
        }
        let mut pieces = Vec::new();
        let mut ineqs = Vec::new();
        for (a, region) in &self.cells {
            let base = a.dot(x);
            for v in region.vertices() {
                pieces.push((v.clone(), base - a.dot(v)));
            }
            for r in region.rays() {
                ineqs.push((r.clone(), a.dot(r)));
            }
        }
        Some(AffineSlice { pieces, ineqs })
    }
}

/// Max-affine function of `y` under linear inequalities.
#[derive(Debug, Clone, Default)]
pub(crate) struct AffineSlice {
    pub(crate) pieces: Vec<(Vector, f64)>,
    pub(crate) ineqs: Vec<(Vector, f64)>,
}

/// `h(z) = max_a z·a − p(a)` over a finite graph.
pub(crate) fn finite_fitz(g: &FiniteGraph, z: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..g.len() {
        let a = g.row(i);
        best = best.max(dual_product_flat(z, a) - pairing_flat(a));
    }
    best
}

/// An exact evaluator of `h_A`, when one exists for the representation.
#[derive(Debug, Clone)]
pub(crate) enum ExactFitz {
    Finite(FiniteGraph),
    Affine(AffineFitz),
    Poly(PolyFitz),
}

impl ExactFitz {
    pub(crate) fn for_operator(op: &OperatorRep) -> Result<Option<Self>> {
        if let OperatorRep::FiniteGraph(g) = op {
            return Ok(Some(ExactFitz::Finite(g.clone())));
        }
        if let Some((m, q)) = op.as_affine() {
            return Ok(Some(ExactFitz::Affine(AffineFitz::new(&m, &q))));
        }
        if let Some(form) = op.as_polyhedral() {
            return Ok(Some(ExactFitz::Poly(PolyFitz::new(&form)?)));
        }
        Ok(None)
    }

    pub(crate) fn value(&self, z: &[f64]) -> f64 {
        match self {
            ExactFitz::Finite(g) => finite_fitz(g, z),
            ExactFitz::Affine(a) => a.value(z),
            ExactFitz::Poly(p) => p.value(z),
        }
    }

    /// `inf_a p(z − a)`; may be `−∞`.
    pub(crate) fn related_inf(&self, z: &[f64]) -> f64 {
        match self {
            ExactFitz::Finite(g) => g.min_pairing_diff(z).map_or(f64::INFINITY, |(_, v)| v),
            _ => pairing_flat(z) - self.value(z),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::vector;

    #[test]
    fn identity_closed_form() {
        let f = AffineFitz::new(&Matrix::identity(1, 1), &vector(&[0.0]));
        // (x + x*)²/4
        assert!((f.value(&[1.0, -1.0]) - 0.0).abs() < 1e-15);
        assert!((f.value(&[1.0, 1.0]) - 1.0).abs() < 1e-15);
        assert!((f.value(&[0.5, 1.5]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn skew_is_indicator_of_graph() {
        let b = Matrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let f = AffineFitz::new(&b, &Vector::zeros(2));
        // on the graph x* = Bx
        assert_eq!(f.value(&[1.0, 0.0, 0.0, 1.0]), 0.0);
        assert_eq!(f.value(&[1.0, 0.0, 0.0, 0.0]), f64::INFINITY);
    }

    #[test]
    fn rotated_identity_closed_form() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, -1.0, 1.0, 1.0]);
        let f = AffineFitz::new(&m, &Vector::zeros(2));
        // ¼|x* + Mᵀx|² at x = (1,0), x* = 0: Mᵀx = (1, −1)
        assert!((f.value(&[1.0, 0.0, 0.0, 0.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn graph_distance_of_identity() {
        let f = AffineFitz::new(&Matrix::identity(1, 1), &vector(&[0.0]));
        assert!(f.graph_distance(&[1.0, 1.0]) < 1e-15);
        assert!((f.graph_distance(&[1.0, -1.0]) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn normal_cone_fitzpatrick_is_support_on_domain() {
        let c = Halfspaces::boxed(&[0.0], &[1.0]).unwrap();
        let op = OperatorRep::normal_cone(c).unwrap();
        let f = PolyFitz::new(&op.as_polyhedral().unwrap()).unwrap();
        assert_eq!(f.value(&[0.5, 2.0]), 2.0);
        assert_eq!(f.value(&[0.5, -2.0]), 0.0);
        assert_eq!(f.value(&[1.5, 0.0]), f64::INFINITY);
    }

    #[test]
    fn abs_fitzpatrick() {
        let op = OperatorRep::subdiff_l1(1);
        let f = PolyFitz::new(&op.as_polyhedral().unwrap()).unwrap();
        // |x*| ≤ 1: h = |x|
        assert!((f.value(&[0.7, 0.3]) - 0.7).abs() < 1e-15);
        assert!((f.value(&[-0.7, 1.0]) - 0.7).abs() < 1e-15);
        assert_eq!(f.value(&[0.0, 1.5]), f64::INFINITY);
    }
}
