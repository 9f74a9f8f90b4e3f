//! Convex polyhedra in vertex/ray form, and halfspace systems with their
//! conversion to vertex/ray form.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lpkernel::{null_space, range_basis, solve_lp, LinearProgram, LpStatus, Matrix};
use crate::pairing::{all_finite, Vector};

const DEDUP_TOL: f64 = 1e-9;

/// `conv(vertices) + cone(rays)`. An empty set is flagged explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct GenPolytope {
    dim: usize,
    vertices: Vec<Vector>,
    rays: Vec<Vector>,
}

impl GenPolytope {
    pub fn new(dim: usize, vertices: Vec<Vector>, rays: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if vertices.is_empty() && !rays.is_empty() {
            return Err(Error::InvalidInput("rays without a vertex".into()));
        }
        for v in vertices.iter().chain(&rays) {
            check_dim(dim, v.len())?;
            if !all_finite(v) {
                return Err(Error::NonFinite);
            }
        }
        Ok(GenPolytope::raw(dim, vertices, rays))
    }

    pub(crate) fn raw(dim: usize, vertices: Vec<Vector>, rays: Vec<Vector>) -> Self {
        let vertices = dedup_points(vertices);
        let rays = dedup_rays(rays);
        GenPolytope { dim, vertices, rays }
    }

    pub fn empty(dim: usize) -> Self {
        GenPolytope { dim, vertices: Vec::new(), rays: Vec::new() }
    }

    pub fn point(v: Vector) -> Self {
        GenPolytope { dim: v.len(), vertices: vec![v], rays: Vec::new() }
    }

    /// Cone with apex at the origin.
    pub fn cone(dim: usize, rays: Vec<Vector>) -> Result<Self> {
        Self::new(dim, vec![Vector::zeros(dim)], rays)
    }

    /// All of `Rⁿ`: apex 0 and rays `±eᵢ`.
    pub fn whole_space(dim: usize) -> Self {
        let mut rays = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut e = Vector::zeros(dim);
            e[i] = 1.0;
            rays.push(e.clone());
            rays.push(-e);
        }
        GenPolytope::raw(dim, vec![Vector::zeros(dim)], rays)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_cone(&self) -> bool {
        self.vertices.len() == 1 && self.vertices[0].amax() <= DEDUP_TOL
    }

    /// `σ(d) = sup ⟨d, s⟩`; `+∞` along an unbounded direction, `−∞` when empty.
    pub fn support(&self, d: &Vector) -> f64 {
        if self.is_empty() {
            return f64::NEG_INFINITY;
        }
        let scale = d.norm();
        if self.rays.iter().any(|r| r.dot(d) > 1e-12 * scale * r.norm()) {
            return f64::INFINITY;
        }
        self.vertices.iter().map(|v| v.dot(d)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Membership by an LP feasibility test with absolute tolerance `tol` per
    /// coordinate.
    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        if self.is_empty() {
            return Ok(false);
        }
        if self.rays.is_empty() && self.vertices.len() == 1 {
            return Ok((&self.vertices[0] - x).amax() <= tol);
        }
        let nv = self.vertices.len();
        let nr = self.rays.len();
        // variables λ (nv), μ (nr), and slack s± per coordinate
        let nvar = nv + nr + 2 * self.dim;
        let mut lp = LinearProgram::new(nvar);
        let mut c = vec![0.0; nvar];
        for ci in c.iter_mut().skip(nv + nr) {
            *ci = 1.0;
        }
        lp.set_objective(c)?;
        for i in 0..self.dim {
            let mut row = vec![0.0; nvar];
            for (j, v) in self.vertices.iter().enumerate() {
                row[j] = v[i];
            }
            for (j, r) in self.rays.iter().enumerate() {
                row[nv + j] = r[i];
            }
            row[nv + nr + 2 * i] = 1.0;
            row[nv + nr + 2 * i + 1] = -1.0;
            lp.add_eq(row, x[i])?;
        }
        let mut row = vec![0.0; nvar];
        for r in row.iter_mut().take(nv) {
            *r = 1.0;
        }
        lp.add_eq(row, 1.0)?;
        let sol = solve_lp(&lp);
        match sol.status {
            LpStatus::Optimal => {
                let worst = (0..self.dim)
                    .map(|i| sol.point[nv + nr + 2 * i] + sol.point[nv + nr + 2 * i + 1])
                    .fold(0.0, f64::max);
                Ok(worst <= tol)
            }
            LpStatus::NumericFailure => Err(Error::NumericFailure),
            _ => Ok(false),
        }
    }

    /// Whether `d` lies in the recession cone `cone(rays)`.
    pub fn recession_contains(&self, d: &Vector, tol: f64) -> Result<bool> {
        GenPolytope::raw(self.dim, vec![Vector::zeros(self.dim)], self.rays.clone()).contains(d, tol)
    }

    pub fn minkowski_sum(&self, other: &GenPolytope) -> Result<GenPolytope> {
        check_dim(self.dim, other.dim)?;
        if self.is_empty() || other.is_empty() {
            return Ok(GenPolytope::empty(self.dim));
        }
        let mut vs = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                vs.push(a + b);
            }
        }
        let rays = self.rays.iter().chain(&other.rays).cloned().collect();
        Ok(GenPolytope::raw(self.dim, vs, rays).pruned()?)
    }

    /// Image under `x ↦ A x`.
    pub fn map(&self, a: &Matrix) -> Result<GenPolytope> {
        check_dim(self.dim, a.ncols())?;
        if a.nrows() == 0 {
            return Err(Error::InvalidInput("map to a zero-dimensional space".into()));
        }
        if self.is_empty() {
            return Ok(GenPolytope::empty(a.nrows()));
        }
        let vs = self.vertices.iter().map(|v| a * v).collect();
        let rays = self
            .rays
            .iter()
            .map(|r| a * r)
            .filter(|r: &Vector| r.amax() > DEDUP_TOL)
            .collect();
        GenPolytope::raw(a.nrows(), vs, rays).pruned()
    }

    pub fn translate(&self, t: &Vector) -> Result<GenPolytope> {
        check_dim(self.dim, t.len())?;
        let vs = self.vertices.iter().map(|v| v + t).collect();
        Ok(GenPolytope { dim: self.dim, vertices: vs, rays: self.rays.clone() })
    }

    /// Cartesian product `self × other`.
    pub fn product(&self, other: &GenPolytope) -> GenPolytope {
        let dim = self.dim + other.dim;
        if self.is_empty() || other.is_empty() {
            return GenPolytope::empty(dim);
        }
        let join = |a: &Vector, b: &Vector| {
            Vector::from_iterator(dim, a.iter().chain(b.iter()).copied())
        };
        let mut vs = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                vs.push(join(a, b));
            }
        }
        let za = Vector::zeros(self.dim);
        let zb = Vector::zeros(other.dim);
        let mut rays: Vec<Vector> = self.rays.iter().map(|r| join(r, &zb)).collect();
        rays.extend(other.rays.iter().map(|r| join(&za, r)));
        GenPolytope::raw(dim, vs, rays)
    }

    /// Drops vertices that are convex combinations of the rest (plus rays).
    pub fn pruned(&self) -> Result<GenPolytope> {
        if self.vertices.len() <= 1 {
            return Ok(self.clone());
        }
        let mut keep: Vec<Vector> = self.vertices.clone();
        let mut i = 0;
        while i < keep.len() && keep.len() > 1 {
            let others: Vec<Vector> = keep
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v.clone())
                .collect();
            let rest = GenPolytope { dim: self.dim, vertices: others, rays: self.rays.clone() };
            if rest.contains(&keep[i], DEDUP_TOL)? {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(GenPolytope { dim: self.dim, vertices: keep, rays: self.rays.clone() })
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        let v0 = &self.vertices[0];
        let cols: Vec<Vector> = self
            .vertices
            .iter()
            .skip(1)
            .map(|v| v - v0)
            .chain(self.rays.iter().cloned())
            .collect();
        if cols.is_empty() {
            return 0;
        }
        crate::lpkernel::rank(&Matrix::from_columns(&cols))
    }
}

fn dedup_points(points: Vec<Vector>) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| (q - &p).amax() <= DEDUP_TOL * (1.0 + p.amax())) {
            out.push(p);
        }
    }
    out
}

fn dedup_rays(rays: Vec<Vector>) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(rays.len());
    for r in rays {
        let n = r.norm();
        if n <= DEDUP_TOL {
            continue;
        }
        let u = &r / n;
        if !out.iter().any(|q| (q / q.norm() - &u).amax() <= DEDUP_TOL) {
            out.push(r);
        }
    }
    out
}

/// One constraint `⟨normal, x⟩ ≤ bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub bound: f64,
}

/// `{x : ⟨gⱼ, x⟩ ≤ cⱼ}`; no constraints means all of `Rⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspaces {
    dim: usize,
    normals: Vec<Vector>,
    bounds: Vec<f64>,
}

impl Halfspaces {
    pub fn new(dim: usize, rows: Vec<(Vector, f64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        let mut normals = Vec::with_capacity(rows.len());
        let mut bounds = Vec::with_capacity(rows.len());
        for (g, c) in rows {
            check_dim(dim, g.len())?;
            if !all_finite(&g) || !c.is_finite() {
                return Err(Error::NonFinite);
            }
            normals.push(g);
            bounds.push(c);
        }
        Ok(Halfspaces { dim, normals, bounds })
    }

    pub fn from_rows(dim: usize, rows: &[Halfspace]) -> Result<Self> {
        Self::new(
            dim,
            rows.iter()
                .map(|h| (Vector::from_column_slice(&h.normal), h.bound))
                .collect(),
        )
    }

    /// Axis-aligned box `lo ≤ x ≤ hi`.
    pub fn boxed(lo: &[f64], hi: &[f64]) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        let n = lo.len();
        let mut rows = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut e = Vector::zeros(n);
            e[i] = 1.0;
            rows.push((e.clone(), hi[i]));
            rows.push((-e, -lo[i]));
        }
        Self::new(n, rows)
    }

    pub fn whole_space(dim: usize) -> Self {
        Halfspaces { dim, normals: Vec::new(), bounds: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    pub fn rows(&self) -> Vec<Halfspace> {
        self.normals
            .iter()
            .zip(&self.bounds)
            .map(|(g, c)| Halfspace { normal: g.iter().copied().collect(), bound: *c })
            .collect()
    }

    fn slack_tol(&self, j: usize, tol: f64) -> f64 {
        tol * (1.0 + self.normals[j].amax())
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.normals
            .iter()
            .zip(&self.bounds)
            .enumerate()
            .all(|(j, (g, c))| g.dot(x) <= c + self.slack_tol(j, tol))
    }

    /// Indices of constraints tight at `x` within `tol`.
    pub fn active(&self, x: &Vector, tol: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| {
                self.normals[j].amax() > 0.0
                    && (self.normals[j].dot(x) - self.bounds[j]).abs() <= self.slack_tol(j, tol)
            })
            .collect()
    }

    pub fn intersect(&self, other: &Halfspaces) -> Result<Halfspaces> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        out.normals.extend(other.normals.iter().cloned());
        out.bounds.extend(other.bounds.iter().copied());
        Ok(out)
    }

    /// Preimage `{x : A x ∈ self}` for `A : Rᵏ → Rⁿ`.
    pub fn preimage(&self, a: &Matrix) -> Result<Halfspaces> {
        check_dim(self.dim, a.nrows())?;
        let at = a.transpose();
        Ok(Halfspaces {
            dim: a.ncols(),
            normals: self.normals.iter().map(|g| &at * g).collect(),
            bounds: self.bounds.clone(),
        })
    }

    /// Product `self × other` in `R^{n+m}`.
    pub fn product(&self, other: &Halfspaces) -> Halfspaces {
        let dim = self.dim + other.dim;
        let mut normals = Vec::with_capacity(self.len() + other.len());
        for g in &self.normals {
            normals.push(Vector::from_iterator(dim, g.iter().copied().chain(std::iter::repeat_n(0.0, other.dim))));
        }
        for g in &other.normals {
            normals.push(Vector::from_iterator(dim, std::iter::repeat_n(0.0, self.dim).chain(g.iter().copied())));
        }
        let mut bounds = self.bounds.clone();
        bounds.extend(other.bounds.iter().copied());
        Halfspaces { dim, normals, bounds }
    }

    /// Feasibility by LP.
    pub fn is_feasible(&self) -> Result<bool> {
        if self.is_empty() {
            return Ok(true);
        }
        let mut lp = LinearProgram::new(self.dim);
        for j in 0..self.dim {
            lp.set_free(j)?;
        }
        for (g, c) in self.normals.iter().zip(&self.bounds) {
            lp.add_le(g.iter().copied().collect(), *c)?;
        }
        match solve_lp(&lp).status {
            LpStatus::Optimal => Ok(true),
            LpStatus::Infeasible => Ok(false),
            _ => Err(Error::NumericFailure),
        }
    }

    /// `sup_{x ∈ C} ⟨d, x⟩`, `+∞` when unbounded, `−∞` when empty.
    pub fn support(&self, d: &Vector) -> Result<f64> {
        check_dim(self.dim, d.len())?;
        let mut lp = LinearProgram::new(self.dim);
        for j in 0..self.dim {
            lp.set_free(j)?;
        }
        lp.set_objective(d.iter().map(|v| -v).collect())?;
        for (g, c) in self.normals.iter().zip(&self.bounds) {
            lp.add_le(g.iter().copied().collect(), *c)?;
        }
        let s = solve_lp(&lp);
        match s.status {
            LpStatus::Optimal => Ok(-s.value),
            LpStatus::Unbounded => Ok(f64::INFINITY),
            LpStatus::Infeasible => Ok(f64::NEG_INFINITY),
            LpStatus::NumericFailure => Err(Error::NumericFailure),
        }
    }

    /// Vertex/ray form. Lineality directions appear as opposite ray pairs.
    pub fn to_vrep(&self) -> Result<GenPolytope> {
        let d = self.dim;
        let k = self.len();
        if k == 0 {
            return Ok(GenPolytope::whole_space(d));
        }
        let g = Matrix::from_fn(k, d, |i, j| self.normals[i][j]);
        let lineality = null_space(&g);
        let q = range_basis(&g.transpose());
        let r = q.ncols();
        let gq = &g * &q;
        let tol = |j: usize| 1e-9 * (1.0 + self.bounds[j].abs() + self.normals[j].amax());

        let mut vertices: Vec<Vector> = Vec::new();
        for subset in combinations(k, r) {
            let a = Matrix::from_fn(r, r, |i, j| gq[(subset[i], j)]);
            let b = Vector::from_iterator(r, subset.iter().map(|&i| self.bounds[i]));
            let Some(t) = a.clone().lu().solve(&b) else { continue };
            if (&a * &t - &b).amax() > 1e-9 * (1.0 + b.amax()) || !all_finite(&t) {
                continue;
            }
            let feasible = (0..k).all(|j| gq.row(j).transpose().dot(&t) <= self.bounds[j] + tol(j));
            if feasible {
                vertices.push(&q * t);
            }
        }
        if vertices.is_empty() {
            return Ok(GenPolytope::empty(d));
        }

        let mut rays: Vec<Vector> = Vec::new();
        if r >= 1 {
            for subset in combinations(k, r - 1) {
                let a = Matrix::from_fn(r - 1, r, |i, j| gq[(subset[i], j)]);
                let ns = if r == 1 { Matrix::identity(1, 1) } else { null_space(&a) };
                if ns.ncols() != 1 {
                    continue;
                }
                let dir = ns.column(0).into_owned();
                for s in [1.0, -1.0] {
                    let cand = &dir * s;
                    let ok = (0..k).all(|j| gq.row(j).transpose().dot(&cand) <= 1e-10);
                    if ok {
                        rays.push(&q * cand);
                    }
                }
            }
        }
        for c in 0..lineality.ncols() {
            let l = lineality.column(c).into_owned();
            rays.push(l.clone());
            rays.push(-l);
        }
        let mut p = GenPolytope::raw(d, vertices, rays);
        // rays from subsets that are not extreme are positive combinations of
        // extreme ones; dropping them keeps the generator list small
        p.rays = prune_rays(&p.rays)?;
        Ok(p)
    }
}

fn prune_rays(rays: &[Vector]) -> Result<Vec<Vector>> {
    let mut keep: Vec<Vector> = rays.to_vec();
    let mut i = 0;
    while i < keep.len() {
        let others: Vec<Vector> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        if others.is_empty() {
            break;
        }
        let dim = keep[i].len();
        let cone = GenPolytope { dim, vertices: vec![Vector::zeros(dim)], rays: others };
        let u = &keep[i] / keep[i].norm();
        // a ray is redundant only if it is a combination of the others and
        // the cone is pointed along it (lineality pairs are kept)
        let neg_in = cone.contains(&(-&u), 1e-9)?;
        if !neg_in && cone.contains(&u, 1e-9)? {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(keep)
}

/// All `r`-element subsets of `0..k` in lexicographic order.
pub(crate) fn combinations(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > k {
        return out;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..r).rev().find(|&i| idx[i] < i + k - r) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::vector;

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(1, 2).is_empty());
    }

    #[test]
    fn interval_to_vrep() {
        let c = Halfspaces::boxed(&[0.0], &[1.0]).unwrap();
        let p = c.to_vrep().unwrap();
        assert_eq!(p.vertices().len(), 2);
        assert!(p.rays().is_empty());
        assert!(p.contains(&vector(&[0.5]), 1e-9).unwrap());
        assert!(!p.contains(&vector(&[1.5]), 1e-9).unwrap());
    }

    #[test]
    fn halfline_and_line() {
        let c = Halfspaces::new(1, vec![(vector(&[-1.0]), 0.0)]).unwrap();
        let p = c.to_vrep().unwrap();
        assert_eq!(p.vertices().len(), 1);
        assert_eq!(p.rays().len(), 1);
        assert!(p.rays()[0][0] > 0.0);

        // a strip in R²: 0 ≤ x₁ ≤ 1, x₂ free
        let s = Halfspaces::new(2, vec![(vector(&[1.0, 0.0]), 1.0), (vector(&[-1.0, 0.0]), 0.0)]).unwrap();
        let p = s.to_vrep().unwrap();
        assert_eq!(p.vertices().len(), 2);
        assert_eq!(p.rays().len(), 2);
        assert_eq!(p.support(&vector(&[0.0, 1.0])), f64::INFINITY);
        assert!((p.support(&vector(&[1.0, 0.0])) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrant_cone_rays_are_extreme() {
        let c = Halfspaces::new(2, vec![(vector(&[-1.0, 0.0]), 0.0), (vector(&[0.0, -1.0]), 0.0)]).unwrap();
        let p = c.to_vrep().unwrap();
        assert_eq!(p.vertices().len(), 1);
        assert_eq!(p.rays().len(), 2);
    }

    #[test]
    fn infeasible_system_is_empty() {
        let c = Halfspaces::new(1, vec![(vector(&[1.0]), 0.0), (vector(&[-1.0]), -1.0)]).unwrap();
        assert!(c.to_vrep().unwrap().is_empty());
        assert!(!c.is_feasible().unwrap());
    }

    #[test]
    fn minkowski_and_support() {
        let a = GenPolytope::new(1, vec![vector(&[-1.0]), vector(&[1.0])], vec![]).unwrap();
        let b = GenPolytope::point(vector(&[2.0]));
        let s = a.minkowski_sum(&b).unwrap();
        assert!((s.support(&vector(&[1.0])) - 3.0).abs() < 1e-12);
        assert!((s.support(&vector(&[-1.0])) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pruning_drops_interior_vertices() {
        let p = GenPolytope::new(
            1,
            vec![vector(&[0.0]), vector(&[0.5]), vector(&[1.0])],
            vec![],
        )
        .unwrap()
        .pruned()
        .unwrap();
        assert_eq!(p.vertices().len(), 2);
    }

    #[test]
    fn square_vrep_has_four_vertices() {
        let c = Halfspaces::boxed(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let p = c.to_vrep().unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.affine_dim(), 2);
    }
}
