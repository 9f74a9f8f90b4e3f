//! Axis-aligned sampling windows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_RESOLUTION: f64 = 0.05;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_RADIUS: f64 = 2.0;

/// A box `lo ≤ z ≤ hi` sampled on the lattice `lo + k·resolution`.
///
/// For a probe on `Z = Rⁿ × Rⁿ` the coordinates are `(x₁..xₙ, x*₁..x*ₙ)`.
/// A coordinate with `lo == hi` makes the grid empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxProbe {
    lo: Vec<f64>,
    hi: Vec<f64>,
    resolution: f64,
    tol: f64,
}

impl BoxProbe {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, resolution: f64, tol: f64) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        if lo.is_empty() {
            return Err(Error::InvalidInput("probe box has no coordinates".into()));
        }
        if lo.iter().chain(&hi).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::InvalidInput("probe box has lo > hi".into()));
        }
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(Error::InvalidInput(format!("resolution must be positive, got {resolution}")));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
        }
        Ok(BoxProbe { lo, hi, resolution, tol })
    }

    /// `[-r, r]^k` with the given step.
    pub fn cube(k: usize, radius: f64, resolution: f64, tol: f64) -> Result<Self> {
        Self::new(vec![-radius; k], vec![radius; k], resolution, tol)
    }

    /// Default window on `Z` for operators on `Rⁿ`.
    pub fn default_for(n: usize) -> Self {
        Self::cube(2 * n, DEFAULT_RADIUS, DEFAULT_RESOLUTION, DEFAULT_TOL).expect("valid default")
    }

    /// Box on `Z` from separate primal and dual ranges.
    pub fn paired(x_lo: &[f64], x_hi: &[f64], xs_lo: &[f64], xs_hi: &[f64], resolution: f64, tol: f64) -> Result<Self> {
        if x_lo.len() != xs_lo.len() {
            return Err(Error::DimensionMismatch { expected: x_lo.len(), found: xs_lo.len() });
        }
        let lo = x_lo.iter().chain(xs_lo).copied().collect();
        let hi = x_hi.iter().chain(xs_hi).copied().collect();
        Self::new(lo, hi, resolution, tol)
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_empty()
    }

    /// Dimension `n` of a probe on `Z = Rⁿ × Rⁿ`.
    pub fn z_dim(&self) -> Result<usize> {
        if self.lo.len() % 2 != 0 {
            return Err(Error::InvalidInput("probe on Z needs an even number of coordinates".into()));
        }
        Ok(self.lo.len() / 2)
    }

    pub fn with_resolution(&self, resolution: f64) -> Result<Self> {
        Self::new(self.lo.clone(), self.hi.clone(), resolution, self.tol)
    }

    pub fn with_tol(&self, tol: f64) -> Result<Self> {
        Self::new(self.lo.clone(), self.hi.clone(), self.resolution, tol)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l == h)
    }

    /// Lattice values `lo + k·res ≤ hi + ε` along coordinate `i`.
    pub fn axis(&self, i: usize) -> Vec<f64> {
        axis_values(self.lo[i], self.hi[i], self.resolution)
    }

    /// The primal part `x` of a probe on `Z`, as its own box.
    pub fn x_part(&self) -> Result<BoxProbe> {
        let n = self.z_dim()?;
        Self::new(self.lo[..n].to_vec(), self.hi[..n].to_vec(), self.resolution, self.tol)
    }

    /// Largest coordinate width of the dual part.
    pub(crate) fn dual_width(&self) -> f64 {
        let n = self.lo.len() / 2;
        (n..self.lo.len()).map(|i| self.hi[i] - self.lo[i]).fold(0.0, f64::max)
    }

    /// Largest coordinate width overall.
    pub(crate) fn max_width(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).fold(0.0, f64::max)
    }

    /// Widens every coordinate range by `pad` on both sides, keeping the step
    /// and the lattice offset.
    pub(crate) fn padded(&self, pad: f64) -> BoxProbe {
        let steps = (pad / self.resolution).ceil();
        let p = steps * self.resolution;
        BoxProbe {
            lo: self.lo.iter().map(|l| l - p).collect(),
            hi: self.hi.iter().map(|h| h + p).collect(),
            resolution: self.resolution,
            tol: self.tol,
        }
    }

    pub fn grid_len(&self) -> usize {
        if self.is_degenerate() {
            return 0;
        }
        (0..self.len()).map(|i| self.axis(i).len()).product()
    }

    /// Visits every grid point in lexicographic order (first coordinate
    /// slowest). Stops early when `f` returns `false`.
    pub fn for_each_point(&self, mut f: impl FnMut(&[f64]) -> bool) {
        if self.is_degenerate() {
            return;
        }
        let axes: Vec<Vec<f64>> = (0..self.len()).map(|i| self.axis(i)).collect();
        if axes.iter().any(|a| a.is_empty()) {
            return;
        }
        let k = axes.len();
        let mut idx = vec![0usize; k];
        let mut z: Vec<f64> = axes.iter().map(|a| a[0]).collect();
        loop {
            if !f(&z) {
                return;
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < axes[i].len() {
                    z[i] = axes[i][idx[i]];
                    break;
                }
                idx[i] = 0;
                z[i] = axes[i][0];
            }
        }
    }

    /// Collects all grid points; meant for small boxes.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.grid_len());
        self.for_each_point(|z| {
            out.push(z.to_vec());
            true
        });
        out
    }
}

pub(crate) fn axis_values(lo: f64, hi: f64, res: f64) -> Vec<f64> {
    if lo == hi {
        return vec![lo];
    }
    let count = ((hi - lo) / res + 1e-9).floor() as usize;
    (0..=count).map(|k| lo + k as f64 * res).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_hits_both_ends() {
        let a = axis_values(-1.0, 1.0, 0.05);
        assert_eq!(a.len(), 41);
        assert_eq!(a[0], -1.0);
        assert!((a[40] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lexicographic_order() {
        let p = BoxProbe::cube(2, 1.0, 1.0, 1e-9).unwrap();
        let pts = p.points();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], vec![-1.0, -1.0]);
        assert_eq!(pts[1], vec![-1.0, 0.0]);
        assert_eq!(pts[8], vec![1.0, 1.0]);
    }

    #[test]
    fn degenerate_box_is_empty() {
        let p = BoxProbe::new(vec![0.0, 0.0], vec![0.0, 1.0], 0.5, 1e-9).unwrap();
        assert_eq!(p.grid_len(), 0);
        assert!(p.points().is_empty());
    }

    #[test]
    fn rejects_bad_boxes() {
        assert!(BoxProbe::new(vec![1.0], vec![0.0], 0.1, 1e-9).is_err());
        assert!(BoxProbe::new(vec![0.0], vec![1.0], 0.0, 1e-9).is_err());
        assert!(BoxProbe::new(vec![0.0], vec![1.0], 0.1, -1.0).is_err());
    }

    #[test]
    fn padding_keeps_lattice() {
        let p = BoxProbe::cube(2, 1.0, 0.25, 1e-9).unwrap().padded(0.3);
        assert_eq!(p.lo()[0], -1.5);
        assert_eq!(p.axis(0).len(), 13);
    }
}
