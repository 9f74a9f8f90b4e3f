//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen, SVD};

use crate::error::{check_dim, Error, Result};
use crate::pairing::Vector;

pub type Matrix = DMatrix<f64>;

const EIG_CUTOFF: f64 = 1e-9;
const RANGE_TOL: f64 = 1e-8;
const RANK_TOL: f64 = 1e-10;

pub fn asymmetry(s: &Matrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..s.nrows() {
        for j in 0..i {
            worst = worst.max((s[(i, j)] - s[(j, i)]).abs());
        }
    }
    worst
}

/// Applies the Moore–Penrose inverse of a symmetric matrix. Returns whether
/// `v` lies in the range of `s` together with `w = s⁺ v`.
pub fn pseudo_inverse_apply(s: &Matrix, v: &Vector) -> Result<(bool, Vector)> {
    if s.nrows() != s.ncols() {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    check_dim(s.nrows(), v.len())?;
    let asym = asymmetry(s);
    if asym > 1e-12 * s.amax().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    if s.iter().chain(v.iter()).any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let eig = SymmetricEigen::new(s.clone());
    let lmax = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let cutoff = EIG_CUTOFF * lmax;
    let q = &eig.eigenvectors;
    let coeffs = q.transpose() * v;
    let mut scaled = Vector::zeros(v.len());
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if lmax > 0.0 && l.abs() > cutoff {
            scaled[i] = coeffs[i] / l;
        }
    }
    let w = q * scaled;
    let residual = (s * &w - v).norm();
    Ok((residual <= RANGE_TOL * v.norm(), w))
}

/// Singular values and right singular vectors, with `a` padded to at least
/// as many rows as columns so that the full `V` is available.
fn full_svd(a: &Matrix) -> (Vec<f64>, Matrix, Matrix) {
    let (m, n) = a.shape();
    let padded = if m < n {
        let mut p = Matrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = SVD::new(padded, true, true);
    let u = svd.u.expect("requested u");
    let vt = svd.v_t.expect("requested v_t");
    (svd.singular_values.iter().copied().collect(), u, vt.transpose())
}

fn rank_cutoff(sv: &[f64], a: &Matrix) -> f64 {
    let smax = sv.iter().fold(0.0f64, |m, s| m.max(*s));
    RANK_TOL * smax.max(1e-300) * (a.nrows().max(a.ncols()) as f64)
}

/// Orthonormal basis of the null space, one column per direction.
pub fn null_space(a: &Matrix) -> Matrix {
    let n = a.ncols();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    if a.nrows() == 0 || a.amax() == 0.0 {
        return Matrix::identity(n, n);
    }
    let (sv, _, v) = full_svd(a);
    let cut = rank_cutoff(&sv, a);
    let cols: Vec<usize> = (0..n).filter(|&i| sv.get(i).is_none_or(|&s| s <= cut)).collect();
    let mut out = Matrix::zeros(n, cols.len());
    for (k, &i) in cols.iter().enumerate() {
        out.set_column(k, &v.column(i));
    }
    out
}

/// Orthonormal basis of the column space.
pub fn range_basis(a: &Matrix) -> Matrix {
    let m = a.nrows();
    if a.ncols() == 0 || m == 0 || a.amax() == 0.0 {
        return Matrix::zeros(m, 0);
    }
    let svd = SVD::new(a.clone(), true, false);
    let u = svd.u.expect("requested u");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let cut = rank_cutoff(&sv, a);
    let cols: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > cut).collect();
    let mut out = Matrix::zeros(m, cols.len());
    for (k, &i) in cols.iter().enumerate() {
        out.set_column(k, &u.column(i));
    }
    out
}

pub fn rank(a: &Matrix) -> usize {
    range_basis(a).ncols()
}

/// Minimum-norm least-squares solution and its residual norm.
pub fn lstsq(a: &Matrix, b: &Vector) -> Result<(Vector, f64)> {
    check_dim(a.nrows(), b.len())?;
    if a.ncols() == 0 {
        return Ok((Vector::zeros(0), b.norm()));
    }
    if a.nrows() == 0 || a.amax() == 0.0 {
        return Ok((Vector::zeros(a.ncols()), b.norm()));
    }
    let svd = SVD::new(a.clone(), true, true);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let cut = rank_cutoff(&sv, a);
    let x = svd.solve(b, cut).map_err(|_| Error::NumericFailure)?;
    let r = (a * &x - b).norm();
    Ok((x, r))
}

/// Outcome of an equality-constrained convex quadratic program.
#[derive(Debug, Clone, PartialEq)]
pub enum QpOutcome {
    Optimal { point: Vector, value: f64 },
    Infeasible,
    Unbounded,
}

/// `min ½ uᵀHu + gᵀu + c0` subject to `Cu = d`, with `H` symmetric PSD.
pub fn equality_qp(h: &Matrix, g: &Vector, c0: f64, c: &Matrix, d: &Vector) -> Result<QpOutcome> {
    let n = h.nrows();
    check_dim(n, h.ncols())?;
    check_dim(n, g.len())?;
    check_dim(n, c.ncols())?;
    check_dim(c.nrows(), d.len())?;
    let (u0, res) = if c.nrows() == 0 {
        (Vector::zeros(n), 0.0)
    } else {
        lstsq(c, d)?
    };
    let scale = 1.0 + d.amax() + c.amax() * u0.amax();
    if res > 1e-9 * scale {
        return Ok(QpOutcome::Infeasible);
    }
    let basis = if c.nrows() == 0 {
        Matrix::identity(n, n)
    } else {
        null_space(c)
    };
    let mut u = u0;
    if basis.ncols() > 0 {
        let hr = basis.transpose() * h * &basis;
        let hr = (&hr + hr.transpose()) * 0.5;
        let gr = basis.transpose() * (h * &u + g);
        let (ok, w) = pseudo_inverse_apply(&hr, &(-&gr))?;
        if !ok {
            return Ok(QpOutcome::Unbounded);
        }
        u += &basis * w;
    }
    let value = 0.5 * u.dot(&(h * &u)) + g.dot(&u) + c0;
    Ok(QpOutcome::Optimal { point: u, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::vector;

    #[test]
    fn pinv_examples() {
        let (ok, w) = pseudo_inverse_apply(&Matrix::from_element(1, 1, 1.0), &vector(&[2.0])).unwrap();
        assert!(ok);
        assert!((w[0] - 2.0).abs() < 1e-15);

        let (ok, _) = pseudo_inverse_apply(&Matrix::zeros(1, 1), &vector(&[1.0])).unwrap();
        assert!(!ok);

        let s = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let (ok, w) = pseudo_inverse_apply(&s, &vector(&[3.0, 0.0])).unwrap();
        assert!(ok);
        assert!((w[0] - 3.0).abs() < 1e-14 && w[1].abs() < 1e-14);
    }

    #[test]
    fn pinv_rejects_asymmetric() {
        let s = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(pseudo_inverse_apply(&s, &vector(&[1.0, 1.0])), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn null_space_and_range_of_wide_matrix() {
        let a = Matrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let n = null_space(&a);
        assert_eq!(n.ncols(), 2);
        assert!((&a * &n).amax() < 1e-12);
        assert_eq!(rank(&a), 1);
        let r = range_basis(&Matrix::from_row_slice(2, 1, &[1.0, 1.0]));
        assert_eq!(r.ncols(), 1);
        assert!((r[(0, 0)].abs() - r[(1, 0)].abs()).abs() < 1e-12);
    }

    #[test]
    fn qp_on_a_line() {
        // min u1² + u2² s.t. u1 + u2 = 2 → (1, 1), value 2
        let h = Matrix::identity(2, 2) * 2.0;
        let c = Matrix::from_row_slice(1, 2, &[1.0, 1.0]);
        match equality_qp(&h, &Vector::zeros(2), 0.0, &c, &vector(&[2.0])).unwrap() {
            QpOutcome::Optimal { point, value } => {
                assert!((point[0] - 1.0).abs() < 1e-12);
                assert!((value - 2.0).abs() < 1e-12);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn qp_detects_unbounded_and_infeasible() {
        let h = Matrix::zeros(1, 1);
        let c = Matrix::zeros(0, 1);
        assert_eq!(
            equality_qp(&h, &vector(&[1.0]), 0.0, &c, &Vector::zeros(0)).unwrap(),
            QpOutcome::Unbounded
        );
        let c = Matrix::from_row_slice(2, 1, &[1.0, 1.0]);
        assert_eq!(
            equality_qp(&h, &vector(&[0.0]), 0.0, &c, &vector(&[1.0, 2.0])).unwrap(),
            QpOutcome::Infeasible
        );
    }
}
