//! Exact Gaussian elimination over a finite field.

use crate::ff::{CtxOps, FieldElem};

/// Solve A x = b. Returns the particular solution with all free variables set
/// to zero, or None when the system is inconsistent.
pub fn solve(rows: &[Vec<FieldElem>], rhs: &[FieldElem]) -> Option<Vec<FieldElem>> {
    assert_eq!(rows.len(), rhs.len());
    if rows.is_empty() {
        return Some(Vec::new());
    }
    let ctx = rhs[0].ctx().clone();
    let ncols = rows[0].len();
    let mut aug: Vec<Vec<FieldElem>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            debug_assert_eq!(r.len(), ncols);
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();

    let nrows = aug.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(sel) = (pivot_row..nrows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(pivot_row, sel);
        let inv = aug[pivot_row][col].inv().unwrap();
        for j in col..=ncols {
            aug[pivot_row][j] = aug[pivot_row][j].mul(&inv);
        }
        for r in 0..nrows {
            if r != pivot_row && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for j in col..=ncols {
                    let t = aug[pivot_row][j].mul(&factor);
                    aug[r][j] = aug[r][j].sub(&t);
                }
            }
        }
        pivot_of_col[col] = Some(pivot_row);
        pivot_row += 1;
        if pivot_row == nrows {
            break;
        }
    }

    // Inconsistent iff a zero row has nonzero rhs.
    for row in aug.iter().skip(pivot_row) {
        if row[..ncols].iter().all(FieldElem::is_zero) && !row[ncols].is_zero() {
            return None;
        }
    }

    let mut x = vec![ctx.zero(); ncols];
    for (col, pr) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pr {
            x[col] = aug[*r][ncols].clone();
        }
    }
    Some(x)
}
