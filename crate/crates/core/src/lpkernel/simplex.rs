//! Dense two-phase simplex with Bland's rule.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericFailure,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarBound {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl VarBound {
    pub const NONNEG: VarBound = VarBound { lower: Some(0.0), upper: None };
    pub const FREE: VarBound = VarBound { lower: None, upper: None };
}

/// `minimize c·x` subject to equality rows, `≤` rows and per-variable bounds.
/// Variables default to `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<f64>,
    eq_rows: Vec<(Vec<f64>, f64)>,
    ub_rows: Vec<(Vec<f64>, f64)>,
    bounds: Vec<VarBound>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point; empty unless `status == Optimal`.
    pub point: Vec<f64>,
    pub value: f64,
    /// Multipliers of the equality rows (same order as added).
    pub duals_eq: Vec<f64>,
    /// Multipliers of the `≤` rows; non-positive at optimality.
    pub duals_ub: Vec<f64>,
}

impl LpSolution {
    fn status_only(status: LpStatus) -> Self {
        let value = match status {
            LpStatus::Infeasible => f64::INFINITY,
            LpStatus::Unbounded => f64::NEG_INFINITY,
            _ => f64::NAN,
        };
        LpSolution {
            status,
            point: Vec::new(),
            value,
            duals_eq: Vec::new(),
            duals_ub: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![0.0; num_vars],
            eq_rows: Vec::new(),
            ub_rows: Vec::new(),
            bounds: vec![VarBound::NONNEG; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_objective(&mut self, c: Vec<f64>) -> Result<()> {
        self.check_len(c.len())?;
        self.objective = c;
        Ok(())
    }

    pub fn add_eq(&mut self, row: Vec<f64>, rhs: f64) -> Result<()> {
        self.check_len(row.len())?;
        self.eq_rows.push((row, rhs));
        Ok(())
    }

    pub fn add_le(&mut self, row: Vec<f64>, rhs: f64) -> Result<()> {
        self.check_len(row.len())?;
        self.ub_rows.push((row, rhs));
        Ok(())
    }

    pub fn add_ge(&mut self, row: Vec<f64>, rhs: f64) -> Result<()> {
        self.add_le(row.into_iter().map(|v| -v).collect(), -rhs)
    }

    pub fn set_bounds(&mut self, j: usize, bound: VarBound) -> Result<()> {
        if j >= self.num_vars {
            return Err(Error::InvalidInput(format!("variable index {j} out of range")));
        }
        if let (Some(l), Some(u)) = (bound.lower, bound.upper) {
            if l > u {
                return Err(Error::InvalidInput(format!("empty bound [{l}, {u}]")));
            }
        }
        self.bounds[j] = bound;
        Ok(())
    }

    pub fn set_free(&mut self, j: usize) -> Result<()> {
        self.set_bounds(j, VarBound::FREE)
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn eq_rows(&self) -> &[(Vec<f64>, f64)] {
        &self.eq_rows
    }

    pub fn ub_rows(&self) -> &[(Vec<f64>, f64)] {
        &self.ub_rows
    }

    pub fn bounds(&self) -> &[VarBound] {
        &self.bounds
    }

    fn check_len(&self, len: usize) -> Result<()> {
        crate::error::check_dim(self.num_vars, len)
    }

    fn well_formed(&self) -> bool {
        let finite = |v: &[f64]| v.iter().all(|c| c.is_finite());
        finite(&self.objective)
            && self.eq_rows.iter().chain(&self.ub_rows).all(|(r, b)| finite(r) && b.is_finite())
            && self
                .bounds
                .iter()
                .all(|b| b.lower.is_none_or(f64::is_finite) && b.upper.is_none_or(f64::is_finite))
    }
}

/// How an original variable is expressed through standard-form columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// x = offset + u
    Shift { col: usize, offset: f64 },
    /// x = offset − u
    Mirror { col: usize, offset: f64 },
    /// x = u⁺ − u⁻
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: usize,
    /// standard-form columns (without artificials)
    cols: usize,
    /// row-major, `rows × (cols + rows + 1)`; last column is the rhs
    data: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cols + self.rows + 1
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width() + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width() - 1)
    }

    fn pivot(&mut self, r: usize, s: usize) {
        let w = self.width();
        let piv = self.data[r * w + s];
        for j in 0..w {
            self.data[r * w + j] /= piv;
        }
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.data[i * w + s];
            if f != 0.0 {
                for j in 0..w {
                    let v = self.data[r * w + j];
                    if v != 0.0 {
                        self.data[i * w + j] -= f * v;
                    }
                }
                self.data[i * w + s] = 0.0;
            }
        }
        self.basis[r] = s;
    }

    /// Runs simplex iterations for `cost` (length `cols + rows`), entering only
    /// columns `< allowed`. Returns `Some(true)` at optimality, `Some(false)` if
    /// unbounded, `None` on numeric trouble.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Option<bool> {
        let max_iter = 100 * (self.rows + self.cols) + 1000;
        let mut reduced = vec![0.0; allowed];
        for _ in 0..max_iter {
            // reduced costs r_j = c_j − c_B·T_j
            for (j, r) in reduced.iter_mut().enumerate() {
                let mut v = cost[j];
                for i in 0..self.rows {
                    let t = self.at(i, j);
                    if t != 0.0 {
                        v -= cost[self.basis[i]] * t;
                    }
                }
                *r = v;
            }
            // Bland: lowest index with negative reduced cost
            let entering = (0..allowed)
                .find(|&j| reduced[j] < -COST_TOL && !self.basis.contains(&j));
            let Some(s) = entering else {
                return Some(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, s);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                            if ratio < br && !tie
                                || tie && self.basis[i] < self.basis[bi]
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Some(false);
            };
            if !self.at(r, s).is_finite() {
                return None;
            }
            self.pivot(r, s);
        }
        None
    }
}

/// Solves the program. Deterministic: identical inputs give bit-identical output.
pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    if !lp.well_formed() {
        return LpSolution::status_only(LpStatus::NumericFailure);
    }

    // standard form: columns u ≥ 0
    let mut maps = Vec::with_capacity(lp.num_vars);
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, f64)> = Vec::new();
    for b in &lp.bounds {
        match (b.lower, b.upper) {
            (Some(l), up) => {
                maps.push(VarMap::Shift { col: ncols, offset: l });
                if let Some(u) = up {
                    bound_rows.push((ncols, u - l));
                }
                ncols += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Mirror { col: ncols, offset: u });
                ncols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
                ncols += 2;
            }
        }
    }
    let n_eq = lp.eq_rows.len();
    let n_ub = lp.ub_rows.len();
    let n_slack = n_ub + bound_rows.len();
    let cols = ncols + n_slack;
    let rows = n_eq + n_ub + bound_rows.len();

    let expand = |row: &[f64], rhs: f64, out: &mut [f64]| -> f64 {
        let mut b = rhs;
        for (j, &a) in row.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match maps[j] {
                VarMap::Shift { col, offset } => {
                    out[col] += a;
                    b -= a * offset;
                }
                VarMap::Mirror { col, offset } => {
                    out[col] -= a;
                    b -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    out[pos] += a;
                    out[neg] -= a;
                }
            }
        }
        b
    };

    let width = cols + rows + 1;
    let mut data = vec![0.0; rows * width];
    let mut sign = vec![1.0; rows];
    {
        let mut push_row = |i: usize, coeffs: Vec<f64>, rhs: f64| {
            let s = if rhs < 0.0 { -1.0 } else { 1.0 };
            sign[i] = s;
            let base = i * width;
            for (j, v) in coeffs.into_iter().enumerate() {
                data[base + j] = s * v;
            }
            data[base + cols + i] = 1.0;
            data[base + width - 1] = s * rhs;
        };
        let mut i = 0;
        for (row, rhs) in &lp.eq_rows {
            let mut c = vec![0.0; cols];
            let b = expand(row, *rhs, &mut c);
            push_row(i, c, b);
            i += 1;
        }
        for (k, (row, rhs)) in lp.ub_rows.iter().enumerate() {
            let mut c = vec![0.0; cols];
            let b = expand(row, *rhs, &mut c);
            c[ncols + k] = 1.0;
            push_row(i, c, b);
            i += 1;
        }
        for (k, &(col, cap)) in bound_rows.iter().enumerate() {
            let mut c = vec![0.0; cols];
            c[col] = 1.0;
            c[ncols + n_ub + k] = 1.0;
            push_row(i, c, cap);
            i += 1;
        }
    }
    let mut tab = Tableau {
        rows,
        cols,
        data,
        basis: (cols..cols + rows).collect(),
    };

    // phase 1
    let mut cost1 = vec![0.0; cols + rows];
    for c in cost1.iter_mut().skip(cols) {
        *c = 1.0;
    }
    if tab.optimize(&cost1, cols).is_none() {
        return LpSolution::status_only(LpStatus::NumericFailure);
    }
    let scale = 1.0 + (0..rows).map(|i| tab.rhs(i).abs()).fold(0.0, f64::max);
    let infeas: f64 = (0..rows)
        .filter(|&i| tab.basis[i] >= cols)
        .map(|i| tab.rhs(i))
        .sum();
    if infeas > FEAS_TOL * scale {
        return LpSolution::status_only(LpStatus::Infeasible);
    }
    // drive artificials out of the basis where possible
    for i in 0..rows {
        if tab.basis[i] >= cols {
            if let Some(j) = (0..cols).find(|&j| tab.at(i, j).abs() > 1e-9 && !tab.basis.contains(&j)) {
                tab.pivot(i, j);
            }
        }
    }

    // phase 2
    let mut cost2 = vec![0.0; cols + rows];
    for (j, &c) in lp.objective.iter().enumerate() {
        match maps[j] {
            VarMap::Shift { col, .. } => cost2[col] += c,
            VarMap::Mirror { col, .. } => cost2[col] -= c,
            VarMap::Split { pos, neg } => {
                cost2[pos] += c;
                cost2[neg] -= c;
            }
        }
    }
    match tab.optimize(&cost2, cols) {
        None => return LpSolution::status_only(LpStatus::NumericFailure),
        Some(false) => return LpSolution::status_only(LpStatus::Unbounded),
        Some(true) => {}
    }

    let mut u = vec![0.0; cols + rows];
    for i in 0..rows {
        u[tab.basis[i]] = tab.rhs(i);
    }
    let point: Vec<f64> = maps
        .iter()
        .map(|m| match *m {
            VarMap::Shift { col, offset } => offset + u[col],
            VarMap::Mirror { col, offset } => offset - u[col],
            VarMap::Split { pos, neg } => u[pos] - u[neg],
        })
        .collect();

    // duals y = c_B B⁻¹, B⁻¹ read from the artificial columns
    let mut y = vec![0.0; rows];
    for (r, yr) in y.iter_mut().enumerate() {
        let mut v = 0.0;
        for i in 0..rows {
            v += cost2[tab.basis[i]] * tab.at(i, cols + r);
        }
        *yr = v * sign[r];
    }
    let duals_eq = y[..n_eq].to_vec();
    let duals_ub = y[n_eq..n_eq + n_ub].to_vec();

    let value: f64 = lp.objective.iter().zip(&point).map(|(c, x)| c * x).sum();
    if !verify(lp, &point) || !value.is_finite() {
        return LpSolution::status_only(LpStatus::NumericFailure);
    }
    LpSolution {
        status: LpStatus::Optimal,
        point,
        value,
        duals_eq,
        duals_ub,
    }
}

fn verify(lp: &LinearProgram, x: &[f64]) -> bool {
    let xs = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let row_ok = |row: &[f64], rhs: f64, eq: bool| {
        let lhs: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
        let scale = 1.0 + rhs.abs() + row.iter().fold(0.0f64, |m, a| m.max(a.abs())) * xs;
        let tol = FEAS_TOL * scale;
        if eq {
            (lhs - rhs).abs() <= tol
        } else {
            lhs <= rhs + tol
        }
    };
    lp.eq_rows.iter().all(|(r, b)| row_ok(r, *b, true))
        && lp.ub_rows.iter().all(|(r, b)| row_ok(r, *b, false))
        && lp.bounds.iter().zip(x).all(|(b, &v)| {
            let tol = FEAS_TOL * (1.0 + v.abs());
            b.lower.is_none_or(|l| v >= l - tol) && b.upper.is_none_or(|u| v <= u + tol)
        })
}
