//! Small dense two-phase simplex for the rate linear programs.
//!
//! Problems here have four structural variables and at most ~20 rows, so a
//! dense tableau with Bland's rule (guaranteed termination, deterministic
//! pivots) is the right tool; no external solver is used.

use crate::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-9;
/// Reduced-cost window within which an optimum counts as flat along an edge.
pub const FLAT_EPS: f64 = 1e-10;

/// `maximize objective . x  subject to  coeffs . x <= rhs, x >= 0`.
#[derive(Debug, Clone)]
pub struct DenseLp {
    pub objective: Vec<f64>,
    pub constraints: Vec<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone)]
pub struct DenseLpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// One multiplier per constraint row (non-negative at optimum).
    pub duals: Vec<f64>,
    /// Constraint slacks `rhs - coeffs . x`.
    pub slacks: Vec<f64>,
    /// True when a non-basic column with zero reduced cost admits a
    /// non-degenerate pivot, i.e. the optimum is flat along an edge.
    pub flat_optimum: bool,
    pub pivots: usize,
}

impl DenseLpSolution {
    pub fn dual_objective(&self, lp: &DenseLp) -> f64 {
        self.duals
            .iter()
            .zip(lp.constraints.iter())
            .map(|(y, (_, rhs))| y * rhs)
            .sum()
    }
}

struct Tableau {
    /// m rows, each `ncols + 1` wide with the rhs last.
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row `z_j - c_j` plus current objective value.
    obj: Vec<f64>,
    basis: Vec<usize>,
    /// Columns allowed to enter the basis (artificials are locked out in
    /// phase two).
    allowed: Vec<bool>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let factor = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= factor;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i != row {
                let f = r[col];
                if f != 0.0 {
                    for (v, pv) in r.iter_mut().zip(pivot_row.iter()) {
                        *v -= f * pv;
                    }
                }
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(pivot_row.iter()) {
                *v -= f * pv;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering column is the smallest-index allowed column
    /// with negative reduced cost; leaving row minimizes the ratio with the
    /// smallest basis index breaking ties.
    fn run(&mut self, max_pivots: usize) -> Result<usize> {
        let mut pivots = 0;
        loop {
            let entering = (0..self.ncols)
                .find(|&j| self.allowed[j] && self.obj[j] < -PIVOT_EPS && !self.basis.contains(&j));
            let Some(col) = entering else {
                return Ok(pivots);
            };
            let mut best: Option<(usize, f64)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                if r[col] > PIVOT_EPS {
                    let ratio = r[self.ncols] / r[col];
                    let better = match best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < br - PIVOT_EPS
                                || (ratio < br + PIVOT_EPS && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = best else {
                return Err(Error::PivotLimit); // unbounded; never expected here
            };
            self.pivot(row, col);
            pivots += 1;
            if pivots > max_pivots {
                return Err(Error::PivotLimit);
            }
        }
    }
}

/// Two-phase solve. Column layout: `n` structural, `m` slack, then any
/// artificials needed for rows with negative rhs.
pub fn solve(lp: &DenseLp, max_pivots: usize) -> Result<DenseLpSolution> {
    let n = lp.objective.len();
    let m = lp.constraints.len();
    let negated: Vec<bool> = lp.constraints.iter().map(|(_, rhs)| *rhs < 0.0).collect();
    let n_art = negated.iter().filter(|&&x| x).count();
    let ncols = n + m + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art_idx = 0;
    for (i, (coeffs, rhs)) in lp.constraints.iter().enumerate() {
        assert_eq!(coeffs.len(), n, "constraint arity mismatch");
        let sign = if negated[i] { -1.0 } else { 1.0 };
        let mut row = vec![0.0; ncols + 1];
        for (j, &c) in coeffs.iter().enumerate() {
            row[j] = sign * c;
        }
        row[n + i] = sign; // slack
        row[ncols] = sign * rhs;
        if negated[i] {
            let col = n + m + art_idx;
            row[col] = 1.0;
            basis.push(col);
            art_idx += 1;
        } else {
            basis.push(n + i);
        }
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        obj: vec![0.0; ncols + 1],
        basis,
        allowed: vec![true; ncols],
        ncols,
    };

    let mut pivots = 0;
    if n_art > 0 {
        // Phase one: maximize minus the sum of artificials.
        for j in n + m..ncols {
            tab.obj[j] = 1.0;
        }
        // Price out the artificial basis columns.
        for (i, &b) in tab.basis.iter().enumerate() {
            if b >= n + m {
                let row = tab.rows[i].clone();
                for (v, rv) in tab.obj.iter_mut().zip(row.iter()) {
                    *v -= rv;
                }
            }
        }
        pivots += tab.run(max_pivots)?;
        if tab.obj[ncols] < -FEAS_EPS {
            return Err(Error::Infeasible);
        }
        // Lock artificials out of the basis for phase two; drive out any
        // that linger at zero level.
        for j in n + m..ncols {
            tab.allowed[j] = false;
        }
        for i in 0..m {
            if tab.basis[i] >= n + m {
                if let Some(col) = (0..n + m).find(|&j| tab.rows[i][j].abs() > PIVOT_EPS) {
                    tab.pivot(i, col);
                    pivots += 1;
                }
            }
        }
    }

    // Phase two objective row: z_j - c_j with the current basis priced out.
    for j in 0..ncols {
        tab.obj[j] = if j < n { -lp.objective[j] } else { 0.0 };
    }
    tab.obj[ncols] = 0.0;
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            let f = lp.objective[b];
            if f != 0.0 {
                let row = tab.rows[i].clone();
                for (v, rv) in tab.obj.iter_mut().zip(row.iter()) {
                    *v += f * rv;
                }
            }
        }
    }
    pivots += tab.run(max_pivots)?;

    let mut x = vec![0.0; n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rows[i][tab.ncols];
        }
    }
    let objective = lp
        .objective
        .iter()
        .zip(x.iter())
        .map(|(c, v)| c * v)
        .sum::<f64>();
    let duals: Vec<f64> = (0..m)
        .map(|i| {
            let sign = if negated[i] { -1.0 } else { 1.0 };
            sign * tab.obj[n + i]
        })
        .collect();
    let slacks: Vec<f64> = lp
        .constraints
        .iter()
        .map(|(coeffs, rhs)| rhs - coeffs.iter().zip(x.iter()).map(|(c, v)| c * v).sum::<f64>())
        .collect();

    // Flat-optimum scan: a non-basic allowed column with (near) zero reduced
    // cost and a strictly positive ratio step signals an optimal edge.
    let mut flat = false;
    for j in 0..ncols {
        if !tab.allowed[j] || tab.basis.contains(&j) || tab.obj[j].abs() > FLAT_EPS {
            continue;
        }
        let mut min_ratio = f64::INFINITY;
        let mut has_pos = false;
        for r in tab.rows.iter() {
            if r[j] > PIVOT_EPS {
                has_pos = true;
                min_ratio = min_ratio.min(r[ncols] / r[j]);
            }
        }
        if has_pos && min_ratio > 1e-12 {
            flat = true;
            break;
        }
    }

    Ok(DenseLpSolution {
        x,
        objective,
        duals,
        slacks,
        flat_optimum: flat,
        pivots,
    })
}
