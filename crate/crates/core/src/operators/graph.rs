//! Finite graphs and linear maps.

use std::cmp::Ordering;

use crate::error::{check_dim, Error, Result};
use crate::lpkernel::Matrix;
use crate::pairing::{pairing_diff_flat, PairedPoint, Vector};

/// A finite subset of `Z`, stored both as points and as one flat
/// `(x, x*)` coordinate buffer for the scanning loops.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGraph {
    dim: usize,
    points: Vec<PairedPoint>,
    flat: Vec<f64>,
}

impl FiniteGraph {
    /// Builds a graph; duplicate points are kept once.
    pub fn new(dim: usize, points: Vec<PairedPoint>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for p in &points {
            check_dim(dim, p.dim())?;
        }
        let mut uniq: Vec<PairedPoint> = Vec::with_capacity(points.len());
        for p in points {
            if !uniq.contains(&p) {
                uniq.push(p);
            }
        }
        Ok(Self::from_unique(dim, uniq))
    }

    pub fn from_points(points: Vec<PairedPoint>) -> Result<Self> {
        let dim = points.first().map(|p| p.dim()).ok_or(Error::EmptyOperator)?;
        Self::new(dim, points)
    }

    pub(crate) fn from_unique(dim: usize, points: Vec<PairedPoint>) -> Self {
        let flat = points.iter().flat_map(|p| p.concat()).collect();
        FiniteGraph { dim, points, flat }
    }

    /// Sorts lexicographically and removes exact duplicates.
    pub(crate) fn from_sorted_dedup(dim: usize, mut points: Vec<PairedPoint>) -> Self {
        points.sort_by(|a, b| a.lex_cmp(b));
        points.dedup_by(|a, b| a.lex_cmp(b) == Ordering::Equal);
        Self::from_unique(dim, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[PairedPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub(crate) fn flat(&self) -> &[f64] {
        &self.flat
    }

    /// Coordinates of point `i` as a `(x, x*)` slice.
    pub(crate) fn row(&self, i: usize) -> &[f64] {
        let w = 2 * self.dim;
        &self.flat[i * w..(i + 1) * w]
    }

    /// Minimum of `p(z − a)` over the graph with its argmin.
    pub(crate) fn min_pairing_diff(&self, z: &[f64]) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.len() {
            let v = pairing_diff_flat(z, self.row(i));
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((i, v));
            }
        }
        best
    }

    /// Euclidean distance from `z` to the nearest graph point.
    pub(crate) fn distance(&self, z: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            let d: f64 = self.row(i).iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
            best = best.min(d);
        }
        best.sqrt()
    }

    /// Points whose coordinates all lie in `[lo − ε, hi + ε]`.
    pub(crate) fn restricted(&self, lo: &[f64], hi: &[f64]) -> FiniteGraph {
        let eps = 1e-12;
        let pts = (0..self.len())
            .filter(|&i| {
                self.row(i)
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .all(|(v, (l, h))| *v >= l - eps && *v <= h + eps)
            })
            .map(|i| self.points[i].clone())
            .collect();
        FiniteGraph::from_unique(self.dim, pts)
    }

    /// Removes the point nearest to `z` (used to build punctured samples).
    pub fn without(&self, z: &PairedPoint) -> FiniteGraph {
        let pts = self.points.iter().filter(|p| p.distance(z) > 1e-12).cloned().collect();
        FiniteGraph::from_unique(self.dim, pts)
    }
}

/// A dense matrix `L : Rⁿ → Rᵐ`; the adjoint is the transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.ncols() == 0 {
            return Err(Error::InvalidInput("linear map needs positive dimensions".into()));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(LinearMap { matrix })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Self::new(Matrix::from_fn(m, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        LinearMap { matrix: Matrix::identity(n, n) }
    }

    /// `x ↦ (x, x)` from `Rⁿ` to `R²ⁿ`.
    pub fn diagonal(n: usize) -> Self {
        let mut m = Matrix::zeros(2 * n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
            m[(n + i, i)] = 1.0;
        }
        LinearMap { matrix: m }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn input_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.input_dim(), x.len())?;
        Ok(&self.matrix * x)
    }

    pub fn adjoint_apply(&self, y: &Vector) -> Result<Vector> {
        check_dim(self.output_dim(), y.len())?;
        Ok(self.matrix.tr_mul(y))
    }

    pub fn adjoint(&self) -> LinearMap {
        LinearMap { matrix: self.matrix.transpose() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::vector;

    #[test]
    fn graph_dedup_and_min() {
        let a = PairedPoint::from_slices(&[0.0], &[0.0]).unwrap();
        let b = PairedPoint::from_slices(&[1.0], &[1.0]).unwrap();
        let g = FiniteGraph::new(1, vec![a.clone(), b, a]).unwrap();
        assert_eq!(g.len(), 2);
        let (i, v) = g.min_pairing_diff(&[0.5, 0.5]).unwrap();
        assert_eq!(i, 0);
        assert_eq!(v, 0.25);
    }

    #[test]
    fn diagonal_adjoint_sums_blocks() {
        let l = LinearMap::diagonal(2);
        assert_eq!(l.apply(&vector(&[1.0, 2.0])).unwrap(), vector(&[1.0, 2.0, 1.0, 2.0]));
        assert_eq!(l.adjoint_apply(&vector(&[1.0, 2.0, 3.0, 4.0])).unwrap(), vector(&[4.0, 6.0]));
    }
}
