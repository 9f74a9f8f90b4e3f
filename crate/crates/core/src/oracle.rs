//! Brute-force reference computations. Nothing here calls into the LP
//! kernel or the pairing helpers, so the results can be used to cross-check
//! the exact paths.

use crate::operators::BoxProbe;
use crate::pairing::PairedPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sup,
    Inf,
}

/// Extremum of `f` over the probe grid.
///
/// A grid sup is a lower bound for the true sup over the box and a grid inf
/// an upper bound for the true inf. An empty grid gives `−∞` for `Sup` and
/// `+∞` for `Inf`.
pub fn grid_extremum(mut f: impl FnMut(&[f64]) -> f64, probe: &BoxProbe, mode: Mode) -> f64 {
    let mut best = match mode {
        Mode::Sup => f64::NEG_INFINITY,
        Mode::Inf => f64::INFINITY,
    };
    probe.for_each_point(|z| {
        let v = f(z);
        best = match mode {
            Mode::Sup if v > best => v,
            Mode::Inf if v < best => v,
            _ => best,
        };
        true
    });
    best
}

/// `⟨x, x*⟩` of a concatenated point.
pub fn p_of(z: &[f64]) -> f64 {
    let n = z.len() / 2;
    (0..n).map(|i| z[i] * z[n + i]).sum()
}

/// `x*(y) + y*(x)` for concatenated points.
pub fn dot_of(z: &[f64], w: &[f64]) -> f64 {
    let n = z.len() / 2;
    (0..n).map(|i| z[n + i] * w[i] + w[n + i] * z[i]).sum()
}

/// Minimum of `Σλᵢ valueᵢ` over the weights `λ = k/steps` on the simplex
/// whose barycenter lies within `2/steps` of `z`; `+∞` when there is none.
///
/// Weights whose barycenter hits `z` exactly (to `1e-12`) take precedence;
/// the band is only used when no grid weight reaches `z`.
pub fn simplex_grid_convexhull_value(points: &[PairedPoint], values: &[f64], z: &PairedPoint, steps: usize) -> f64 {
    assert!(steps >= 1, "steps must be positive");
    assert_eq!(points.len(), values.len(), "one value per point");
    let m = points.len();
    if m == 0 {
        return f64::INFINITY;
    }
    let coords: Vec<Vec<f64>> = points.iter().map(|a| a.concat()).collect();
    let target = z.concat();
    let radius = 2.0 / steps as f64;
    let mut counts = vec![0usize; m];
    let mut best = f64::INFINITY;
    let mut best_exact = f64::INFINITY;
    let mut visit = |counts: &[usize]| {
        let mut val = 0.0;
        let mut dist2 = 0.0;
        for (k, t) in target.iter().enumerate() {
            let c: f64 = counts.iter().zip(&coords).map(|(&w, a)| w as f64 * a[k]).sum::<f64>() / steps as f64;
            dist2 += (c - t) * (c - t);
        }
        let dist = dist2.sqrt();
        if dist <= radius {
            for (&w, v) in counts.iter().zip(values) {
                if w > 0 {
                    val += w as f64 * v;
                }
            }
            let val = val / steps as f64;
            best = best.min(val);
            if dist <= 1e-12 {
                best_exact = best_exact.min(val);
            }
        }
    };
    compositions(&mut counts, 0, steps, &mut visit);
    if best_exact.is_finite() {
        best_exact
    } else {
        best
    }
}

/// Calls `f` on every way to write `left` as an ordered sum over
/// `counts[i..]`.
fn compositions(counts: &mut [usize], i: usize, left: usize, f: &mut impl FnMut(&[usize])) {
    if i + 1 == counts.len() {
        counts[i] = left;
        f(counts);
        return;
    }
    for k in 0..=left {
        counts[i] = k;
        compositions(counts, i + 1, left - k, f);
    }
}

/// All-pairs monotonicity with a `1e-12` slack.
pub fn pairwise_monotone_bruteforce(points: &[PairedPoint]) -> bool {
    let zs: Vec<Vec<f64>> = points.iter().map(|a| a.concat()).collect();
    for (i, a) in zs.iter().enumerate() {
        for b in &zs[i + 1..] {
            let diff: Vec<f64> = a.iter().zip(b).map(|(s, t)| s - t).collect();
            if p_of(&diff) < -1e-12 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, xs: f64) -> PairedPoint {
        PairedPoint::from_slices(&[x], &[xs]).unwrap()
    }

    #[test]
    fn grid_extremum_examples() {
        let probe = BoxProbe::cube(2, 1.0, 0.5, 1e-9).unwrap();
        assert_eq!(grid_extremum(p_of, &probe, Mode::Sup), 1.0);
        assert_eq!(grid_extremum(|_| 3.0, &probe, Mode::Sup), 3.0);
        assert_eq!(grid_extremum(|_| 3.0, &probe, Mode::Inf), 3.0);
        let unit = BoxProbe::new(vec![0.0, 0.0], vec![1.0, 1.0], 0.5, 1e-9).unwrap();
        let a = [1.0, 1.0];
        let f = |z: &[f64]| dot_of(z, &a) - p_of(&a);
        assert_eq!(grid_extremum(f, &unit, Mode::Sup), 1.0);
    }

    #[test]
    fn convexhull_examples() {
        let pts = [pt(0.0, 0.0), pt(1.0, 1.0)];
        assert_eq!(simplex_grid_convexhull_value(&pts, &[0.0, 1.0], &pt(0.5, 0.5), 2), 0.5);
        assert_eq!(simplex_grid_convexhull_value(&pts, &[0.0, 1.0], &pt(1.0, 1.0), 4), 1.0);
        assert_eq!(simplex_grid_convexhull_value(&pts, &[0.0, 1.0], &pt(5.0, 0.0), 4), f64::INFINITY);
    }

    #[test]
    fn monotone_examples() {
        assert!(pairwise_monotone_bruteforce(&[pt(0.0, 0.0), pt(1.0, 1.0)]));
        assert!(!pairwise_monotone_bruteforce(&[pt(0.0, 1.0), pt(1.0, 0.0)]));
        assert!(pairwise_monotone_bruteforce(&[]));
    }
}
