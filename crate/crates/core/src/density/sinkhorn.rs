use super::StepBigraphon;
use crate::error::{Error, Result};

pub const SINKHORN_TOL: f64 = 1e-10;
pub const SINKHORN_MAX_ITER: usize = 100_000;

fn residual(w: &StepBigraphon, target: f64) -> f64 {
    let rows = w.row_marginal().into_iter().map(|r| (r - target).abs());
    let cols = w.col_marginal().into_iter().map(|c| (c - target).abs());
    rows.chain(cols).fold(0.0, f64::max)
}

/// Alternating row and column scaling (rows first) until both marginal
/// functions are within `tol` of the input's edge density.
pub fn sinkhorn_biregularize(w: &StepBigraphon, tol: f64, max_iter: usize) -> Result<StepBigraphon> {
    w.check()?;
    if !w.is_positive() {
        return Err(Error::InvalidBigraphon("Sinkhorn scaling needs strictly positive values".into()));
    }
    let target = w.edge_density();
    let mut cur = w.clone();
    let mut res = residual(&cur, target);
    let mut it = 0;
    while res >= tol {
        if it == max_iter {
            return Err(Error::NoConvergence { iterations: it, residual: res });
        }
        for row in cur.w.iter_mut() {
            let s: f64 = row.iter().zip(&w.nu).map(|(a, b)| a * b).sum();
            for v in row.iter_mut() {
                *v *= target / s;
            }
        }
        let cols = cur.col_marginal();
        for row in cur.w.iter_mut() {
            for (v, c) in row.iter_mut().zip(&cols) {
                *v *= target / c;
            }
        }
        res = residual(&cur, target);
        it += 1;
    }
    Ok(cur)
}
