//! Points of `Z = X × X*` with `X = Rⁿ`, the duality pairing `p` and the
//! symmetric dual product `z·w`.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

pub type Vector = DVector<f64>;

/// Builds a vector from a slice.
pub fn vector(coords: &[f64]) -> Vector {
    DVector::from_column_slice(coords)
}

pub(crate) fn all_finite(v: &Vector) -> bool {
    v.iter().all(|c| c.is_finite())
}

/// A point `z = (x, x*)`; both halves always have the same dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairedPointRepr", into = "PairedPointRepr")]
pub struct PairedPoint {
    x: Vector,
    xstar: Vector,
}

#[derive(Serialize, Deserialize)]
struct PairedPointRepr {
    x: Vec<f64>,
    xstar: Vec<f64>,
}

impl TryFrom<PairedPointRepr> for PairedPoint {
    type Error = Error;

    fn try_from(r: PairedPointRepr) -> Result<Self> {
        PairedPoint::from_slices(&r.x, &r.xstar)
    }
}

impl From<PairedPoint> for PairedPointRepr {
    fn from(z: PairedPoint) -> Self {
        PairedPointRepr {
            x: z.x.iter().copied().collect(),
            xstar: z.xstar.iter().copied().collect(),
        }
    }
}

impl PairedPoint {
    pub fn new(x: Vector, xstar: Vector) -> Result<Self> {
        check_dim(x.len(), xstar.len())?;
        if x.is_empty() {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if !all_finite(&x) || !all_finite(&xstar) {
            return Err(Error::NonFinite);
        }
        Ok(PairedPoint { x, xstar })
    }

    pub fn from_slices(x: &[f64], xstar: &[f64]) -> Result<Self> {
        Self::new(vector(x), vector(xstar))
    }

    /// Splits a concatenated `(x, x*)` coordinate slice of even length.
    pub fn from_concat(z: &[f64]) -> Result<Self> {
        if z.len() % 2 != 0 {
            return Err(Error::InvalidInput("odd-length concatenated point".into()));
        }
        let n = z.len() / 2;
        Self::from_slices(&z[..n], &z[n..])
    }

    /// Unchecked constructor for internally produced points.
    pub(crate) fn raw(x: Vector, xstar: Vector) -> Self {
        debug_assert_eq!(x.len(), xstar.len());
        PairedPoint { x, xstar }
    }

    pub fn zero(n: usize) -> Self {
        PairedPoint::raw(Vector::zeros(n), Vector::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &Vector {
        &self.x
    }

    pub fn xstar(&self) -> &Vector {
        &self.xstar
    }

    /// Coordinates `(x₁..xₙ, x*₁..x*ₙ)`.
    pub fn concat(&self) -> Vec<f64> {
        self.x.iter().chain(self.xstar.iter()).copied().collect()
    }

    pub fn scale(&self, t: f64) -> Self {
        PairedPoint::raw(&self.x * t, &self.xstar * t)
    }

    pub fn add(&self, other: &PairedPoint) -> Self {
        PairedPoint::raw(&self.x + &other.x, &self.xstar + &other.xstar)
    }

    pub fn sub(&self, other: &PairedPoint) -> Self {
        PairedPoint::raw(&self.x - &other.x, &self.xstar - &other.xstar)
    }

    /// Euclidean distance in `Z`.
    pub fn distance(&self, other: &PairedPoint) -> f64 {
        ((&self.x - &other.x).norm_squared() + (&self.xstar - &other.xstar).norm_squared()).sqrt()
    }

    pub fn norm(&self) -> f64 {
        (self.x.norm_squared() + self.xstar.norm_squared()).sqrt()
    }

    pub(crate) fn lex_cmp(&self, other: &PairedPoint) -> Ordering {
        for (a, b) in self.x.iter().chain(self.xstar.iter()).zip(other.x.iter().chain(other.xstar.iter())) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for PairedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_v = |v: &Vector| {
            v.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(", ")
        };
        write!(f, "(({}), ({}))", fmt_v(&self.x), fmt_v(&self.xstar))
    }
}

/// `p(x, x*) = ⟨x, x*⟩`.
pub fn pairing_p(z: &PairedPoint) -> f64 {
    z.x.dot(&z.xstar)
}

/// `(x, x*)·(y, y*) = ⟨x*, y⟩ + ⟨y*, x⟩`.
pub fn dual_product(z: &PairedPoint, w: &PairedPoint) -> Result<f64> {
    check_dim(z.dim(), w.dim())?;
    Ok(z.xstar.dot(&w.x) + w.xstar.dot(&z.x))
}

/// Slice form of `p` for concatenated coordinates.
#[inline]
pub(crate) fn pairing_flat(z: &[f64]) -> f64 {
    let n = z.len() / 2;
    let mut s = 0.0;
    for i in 0..n {
        s += z[i] * z[n + i];
    }
    s
}

/// `p(z − a)` on concatenated coordinates.
#[inline]
pub(crate) fn pairing_diff_flat(z: &[f64], a: &[f64]) -> f64 {
    let n = z.len() / 2;
    let mut s = 0.0;
    for i in 0..n {
        s += (z[i] - a[i]) * (z[n + i] - a[n + i]);
    }
    s
}

/// `z·a` on concatenated coordinates.
#[inline]
pub(crate) fn dual_product_flat(z: &[f64], a: &[f64]) -> f64 {
    let n = z.len() / 2;
    let mut s = 0.0;
    for i in 0..n {
        s += z[n + i] * a[i] + a[n + i] * z[i];
    }
    s
}

/// Extended real in `ℝ ∪ {+∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

impl ExtReal {
    /// Maps `+∞` to `PosInf`; any other non-finite value is a logic error.
    pub fn from_f64(v: f64) -> Self {
        debug_assert!(!v.is_nan() && v != f64::NEG_INFINITY, "ExtReal from {v}");
        if v == f64::INFINITY {
            ExtReal::PosInf
        } else {
            ExtReal::Finite(v)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::PosInf => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    pub fn add(self, other: ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::PosInf,
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a.max(b)),
            _ => ExtReal::PosInf,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => f.write_str("+inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(x: &[f64], xs: &[f64]) -> PairedPoint {
        PairedPoint::from_slices(x, xs).unwrap()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing_p(&pp(&[1.0], &[2.0])), 2.0);
        assert_eq!(pairing_p(&pp(&[0.0, 0.0], &[5.0, 7.0])), 0.0);
        assert_eq!(pairing_p(&pp(&[1.0, 2.0], &[3.0, -1.0])), 1.0);
    }

    #[test]
    fn dual_product_examples() {
        let z = pp(&[1.0], &[2.0]);
        assert_eq!(dual_product(&z, &pp(&[3.0], &[4.0])).unwrap(), 10.0);
        assert_eq!(dual_product(&z, &z).unwrap(), 4.0);
        let a = pp(&[1.0, 0.0], &[0.0, 0.0]);
        let b = pp(&[0.0, 0.0], &[1.0, 0.0]);
        assert_eq!(dual_product(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn dual_product_dimension_mismatch() {
        let z = pp(&[1.0], &[2.0]);
        let w = pp(&[1.0, 2.0], &[0.0, 0.0]);
        assert!(matches!(dual_product(&z, &w), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn construction_rejects_bad_points() {
        assert!(PairedPoint::from_slices(&[1.0], &[1.0, 2.0]).is_err());
        assert!(PairedPoint::from_slices(&[f64::NAN], &[1.0]).is_err());
        assert!(PairedPoint::from_slices(&[], &[]).is_err());
    }

    #[test]
    fn flat_helpers_agree() {
        let z = pp(&[1.0, -2.0], &[0.5, 3.0]);
        let a = pp(&[0.25, 1.0], &[-1.0, 2.0]);
        let zf = z.concat();
        let af = a.concat();
        assert_eq!(pairing_flat(&zf), pairing_p(&z));
        assert_eq!(pairing_diff_flat(&zf, &af), pairing_p(&z.sub(&a)));
        assert_eq!(dual_product_flat(&zf, &af), dual_product(&z, &a).unwrap());
    }

    #[test]
    fn ext_real_ordering() {
        assert!(ExtReal::Finite(1e300) < ExtReal::PosInf);
        assert_eq!(ExtReal::Finite(1.0).add(ExtReal::PosInf), ExtReal::PosInf);
        assert_eq!(ExtReal::from_f64(f64::INFINITY), ExtReal::PosInf);
    }
}
