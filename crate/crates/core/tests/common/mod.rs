//! Random instances shared by the integration tests.
#![allow(dead_code)]

use fitzrep::lpkernel::Matrix;
use fitzrep::operators::{FiniteGraph, OperatorRep};
use fitzrep::qualification::ConvexSetRep;
use fitzrep::{PairedPoint, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vector {
    Vector::from_fn(n, |_, _| rng.random_range(-r..r))
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize, r: f64) -> PairedPoint {
    PairedPoint::new(uniform_vec(rng, n, r), uniform_vec(rng, n, r)).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, r: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-r..r))
}

/// `RᵀR + K` with `K` skew: monotone, generally non-symmetric.
pub fn random_monotone_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let r = random_matrix(rng, n, n, 1.0);
    let k = random_matrix(rng, n, n, 1.0);
    r.transpose() * r + (&k - k.transpose()) * 0.5
}

/// Points `(x, Mx + s(x))` with `M` monotone and `s(x)` the active slope of
/// a random max-affine function, so the graph is monotone by construction.
pub fn random_monotone_graph(rng: &mut ChaCha8Rng, n: usize, m: usize) -> FiniteGraph {
    let mm = random_monotone_matrix(rng, n);
    let pieces: Vec<(Vector, f64)> = (0..3).map(|_| (uniform_vec(rng, n, 1.0), rng.random_range(-0.5..0.5))).collect();
    let points = (0..m)
        .map(|_| {
            let x = uniform_vec(rng, n, 1.0);
            let (s, _) = pieces
                .iter()
                .max_by(|a, b| (a.0.dot(&x) + a.1).total_cmp(&(b.0.dot(&x) + b.1)))
                .unwrap();
            let xs = &mm * &x + s;
            PairedPoint::new(x, xs).unwrap()
        })
        .collect();
    FiniteGraph::new(n, points).unwrap()
}

/// Arbitrary points, usually not monotone.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, m: usize) -> FiniteGraph {
    FiniteGraph::new(n, (0..m).map(|_| random_point(rng, n, 1.0)).collect()).unwrap()
}

/// One-dimensional graph with both coordinates sorted.
pub fn sorted_graph(rng: &mut ChaCha8Rng, m: usize) -> FiniteGraph {
    let mut xs: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut ys: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let pts = xs.iter().zip(&ys).map(|(x, y)| PairedPoint::from_slices(&[*x], &[*y]).unwrap()).collect();
    FiniteGraph::new(1, pts).unwrap()
}

/// A maximal polyhedral operator on `Rⁿ`: subdifferential of a max-affine
/// function, normal cone of a box, or a monotone affine map.
pub fn random_polyhedral(rng: &mut ChaCha8Rng, n: usize) -> OperatorRep {
    match rng.random_range(0..3) {
        0 => {
            let k = rng.random_range(1..4);
            let pieces = (0..k).map(|_| (uniform_vec(rng, n, 1.0), rng.random_range(-0.5..0.5))).collect();
            OperatorRep::subdiff_pl(pieces).unwrap()
        }
        1 => {
            let lo: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..0.0)).collect();
            let hi: Vec<f64> = lo.iter().map(|l| l + rng.random_range(0.2..1.5)).collect();
            OperatorRep::normal_cone_box(&lo, &hi).unwrap()
        }
        _ => {
            let m = random_monotone_matrix(rng, n);
            OperatorRep::affine(m, uniform_vec(rng, n, 0.5)).unwrap()
        }
    }
}

/// Hull of 1 to 5 random points in `[-1, 1]²`.
pub fn random_polygon(rng: &mut ChaCha8Rng) -> ConvexSetRep {
    let k = rng.random_range(1..6);
    ConvexSetRep::hull((0..k).map(|_| uniform_vec(rng, 2, 1.0)).collect()).unwrap()
}

pub fn rel_close(a: f64, b: f64, rel: f64, scale: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + scale)
}
