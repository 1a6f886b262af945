//! Exact-rational sign feasibility via two-phase simplex with Bland's rule.
//!
//! The primal is `min t` subject to `Q(x) + t ≥ 1` on ones, `-Q(x) + t ≥ 0`
//! on zeros, and `t ≥ 0`, over the monomial coefficients of `Q` and the
//! slack level `t`. It is always feasible and bounded, and `f` is a
//! degree-`k` threshold iff the optimum is `t* = 0`. We solve the dual
//! (`max h·y` over `Ay = b, y ≥ 0`, one variable per primal row), whose
//! tableau has one row per monomial — small — while the exponentially many
//! point constraints become columns. The primal witness is recovered from
//! the optimal basis by solving `A_Bᵀz = h_B` exactly.

use crate::boolfn::BooleanFunction;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

struct Tableau {
    rows: Vec<Vec<BigRational>>, // each row: ncols coefficients then rhs
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &BigRational {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let piv = self.rows[r][j].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &piv;
        }
        for rr in 0..self.rows.len() {
            if rr == r || self.rows[rr][j].is_zero() {
                continue;
            }
            let factor = self.rows[rr][j].clone();
            for c in 0..=self.ncols {
                let delta = &factor * &self.rows[r][c];
                self.rows[rr][c] -= delta;
            }
        }
        self.basis[r] = j;
    }

    /// Minimizes `costs·y` over the allowed columns with Bland's rule.
    fn run(&mut self, costs: &[BigRational], allowed: usize) -> Result<()> {
        loop {
            // reduced costs from the current basis
            let basis_costs: Vec<&BigRational> =
                self.basis.iter().map(|&b| &costs[b]).collect();
            let mut entering = None;
            'cols: for j in 0..allowed {
                let mut rc = costs[j].clone();
                for (r, bc) in basis_costs.iter().enumerate() {
                    if !bc.is_zero() && !self.rows[r][j].is_zero() {
                        rc -= *bc * &self.rows[r][j];
                    }
                }
                if rc.is_negative() {
                    entering = Some(j);
                    break 'cols;
                }
            }
            let j = match entering {
                Some(j) => j,
                None => return Ok(()),
            };
            // ratio test, ties broken by smallest basic index
            let mut leave: Option<(usize, BigRational)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][j].is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / &self.rows[r][j];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let (r, _) = leave.ok_or_else(|| {
                Error::Unsupported("internal: dual unbounded in sign-feasibility LP".into())
            })?;
            self.pivot(r, j);
        }
    }
}

/// Tests whether some polynomial supported on `subsets` separates `f` with
/// `Q(x) ≥ 1` on ones and `Q(x) ≤ 0` on zeros. Returns the coefficient
/// vector (aligned with `subsets`) on success.
pub(super) fn sign_feasibility(
    f: &BooleanFunction,
    subsets: &[u32],
) -> Result<Option<Vec<BigRational>>> {
    let d = subsets.len();
    let npoints = f.points() as usize;
    let nrows = d + 1;
    let nstruct = npoints + 1;
    let ncols = nstruct + nrows;

    // original columns are tiny integers; keep them separately for the
    // final basis solve
    let mut orig_cols: Vec<Vec<i8>> = Vec::with_capacity(nstruct);
    let mut h = vec![BigRational::zero(); ncols];
    for x in 0..npoints as u32 {
        let one = f.eval_u32(x);
        let sign: i8 = if one { 1 } else { -1 };
        let mut col = vec![0i8; nrows];
        for (si, &s) in subsets.iter().enumerate() {
            if s & x == s {
                col[si] = sign;
            }
        }
        col[d] = 1;
        orig_cols.push(col);
        if one {
            h[x as usize] = BigRational::one();
        }
    }
    // the primal `t ≥ 0` row contributes the column (0,…,0,1) with cost 0
    let mut tcol = vec![0i8; nrows];
    tcol[d] = 1;
    orig_cols.push(tcol);

    let mut rows = Vec::with_capacity(nrows);
    for r in 0..nrows {
        let mut row = vec![BigRational::zero(); ncols + 1];
        for (c, col) in orig_cols.iter().enumerate() {
            if col[r] != 0 {
                row[c] = BigRational::from_integer(BigInt::from(col[r]));
            }
        }
        row[nstruct + r] = BigRational::one(); // artificial
        if r == d {
            row[ncols] = BigRational::one(); // b = e_{d+1}
        }
        rows.push(row);
    }
    let basis: Vec<usize> = (nstruct..nstruct + nrows).collect();
    let mut tab = Tableau { rows, basis, ncols };

    // phase 1: drive out the artificials
    let mut phase1 = vec![BigRational::zero(); ncols];
    for c in nstruct..ncols {
        phase1[c] = BigRational::one();
    }
    tab.run(&phase1, ncols)?;
    let infeasibility: BigRational = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= nstruct)
        .map(|(r, _)| tab.rhs(r).clone())
        .sum();
    if !infeasibility.is_zero() {
        return Err(Error::Unsupported("internal: dual phase 1 failed".into()));
    }
    for r in 0..nrows {
        if tab.basis[r] >= nstruct {
            let j = (0..nstruct)
                .find(|&j| !tab.rows[r][j].is_zero())
                .ok_or_else(|| Error::Unsupported("internal: rank-deficient LP".into()))?;
            tab.pivot(r, j);
        }
    }

    // phase 2: maximize h·y as min (-h)·y over structural columns
    let neg_h: Vec<BigRational> = h.iter().map(|c| -c.clone()).collect();
    tab.run(&neg_h, nstruct)?;
    let optimum: BigRational = tab
        .basis
        .iter()
        .enumerate()
        .map(|(r, &b)| &h[b] * tab.rhs(r))
        .sum();
    if optimum.is_positive() {
        return Ok(None);
    }

    // recover the primal point from the optimal basis: A_Bᵀ z = h_B
    let mut system: Vec<Vec<BigRational>> = Vec::with_capacity(nrows);
    for &b in &tab.basis {
        let mut row: Vec<BigRational> = orig_cols[b]
            .iter()
            .map(|&v| BigRational::from_integer(BigInt::from(v)))
            .collect();
        row.push(h[b].clone());
        system.push(row);
    }
    let z = solve_square(&mut system)
        .ok_or_else(|| Error::Unsupported("internal: singular basis system".into()))?;
    Ok(Some(z[..d].to_vec()))
}

/// Gaussian elimination with exact pivoting on an augmented square system.
fn solve_square(m: &mut [Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot_row);
        let piv = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v /= &piv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..=n {
                    let delta = &factor * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some((0..n).map(|r| m[r][n].clone()).collect())
}
