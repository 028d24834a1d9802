//! Newton lifting of a simple root of f(X,0) to a truncated power-series
//! root of f, and the table of truncated powers of that series.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{CtxOps, FieldCtx, FieldElem};
use crate::poly::{bipoly_eval_series, BiPoly, TruncSeries};

/// A truncated series root of f: alpha = alpha0 + O(Y) with
/// f(alpha, Y) = 0 mod Y^{ell+1}.
#[derive(Debug, Clone)]
pub struct LiftedRoot {
    alpha0: FieldElem,
    series: TruncSeries,
    /// f embedded into the root's field.
    f: BiPoly,
    ell: usize,
}

impl LiftedRoot {
    pub fn alpha0(&self) -> &FieldElem {
        &self.alpha0
    }

    pub fn series(&self) -> &TruncSeries {
        &self.series
    }

    pub fn f(&self) -> &BiPoly {
        &self.f
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// The residual invariant: f(alpha, Y) is the zero series at the lifted
    /// order.
    pub fn residual_is_zero(&self) -> bool {
        bipoly_eval_series(&self.f, &self.series).is_zero()
    }
}

/// Lift the simple root `alpha0` of f(X,0) to the unique series root modulo
/// Y^{ell+1}, by quadratic Newton iteration with precision doubling.
pub fn lift_simple_root(f: &BiPoly, alpha0: &FieldElem, ell: usize) -> Result<LiftedRoot> {
    let ext = Arc::clone(alpha0.ctx());
    let f_ext = f.embed(&ext)?;
    let y0 = ext.zero();
    if !f_ext.eval(alpha0, &y0).is_zero() {
        return Err(Error::NotARoot(alpha0.to_string()));
    }
    let fx_ext = f_ext.partial_x();
    if fx_ext.eval(alpha0, &y0).is_zero() {
        return Err(Error::NotSimple(alpha0.to_string()));
    }

    let target = ell + 1;
    let mut series = TruncSeries::constant(alpha0, 1);
    while series.order() < target {
        let next = (series.order() * 2).min(target);
        let cur = series.extend(next);
        let value = bipoly_eval_series(&f_ext, &cur);
        let slope = bipoly_eval_series(&fx_ext, &cur);
        series = cur.sub(&value.mul(&slope.inverse()));
    }

    let root = LiftedRoot {
        alpha0: alpha0.clone(),
        series,
        f: f_ext,
        ell,
    };
    debug_assert!(root.residual_is_zero());
    Ok(root)
}

/// Coefficients a[mu][r] of alpha^mu mod Y^{ell_max + 1} for 0 <= mu <= D,
/// with ell_max = d * D.
#[derive(Debug, Clone)]
pub struct PowersTable {
    rows: Vec<Vec<FieldElem>>,
    ell_max: usize,
    degree: usize,
    ctx: Arc<FieldCtx>,
}

impl PowersTable {
    pub fn max_power(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn ell_max(&self) -> usize {
        self.ell_max
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// a[mu][r], reading out-of-range indices as zero.
    pub fn a(&self, mu: usize, r: usize) -> FieldElem {
        self.rows[mu]
            .get(r)
            .cloned()
            .unwrap_or_else(|| self.ctx.zero())
    }

    pub fn row(&self, mu: usize) -> &[FieldElem] {
        &self.rows[mu]
    }
}

/// Build the powers table for mu = 0..=D from a lifted root, at order
/// ell_max = d * D.
pub fn powers_table(root: &LiftedRoot, d: usize, max_power: usize) -> Result<PowersTable> {
    assert!(max_power >= 1);
    let ell_max = d * max_power;
    if root.series().order() < ell_max + 1 {
        return Err(Error::OrderTooSmall {
            needed: ell_max,
            have: root.series().order().saturating_sub(1),
        });
    }
    let ctx = Arc::clone(root.series().ctx());
    let base = root.series().truncate(ell_max + 1);
    let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(max_power + 1);
    let one = TruncSeries::constant(&ctx.one(), ell_max + 1);
    rows.push(one.coeffs().to_vec());
    let mut cur = base.clone();
    rows.push(cur.coeffs().to_vec());
    for _ in 2..=max_power {
        cur = cur.mul(&base);
        rows.push(cur.coeffs().to_vec());
    }
    Ok(PowersTable {
        rows,
        ell_max,
        degree: d,
        ctx,
    })
}
