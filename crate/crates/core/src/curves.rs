//! Projective plane curves over F_q: point enumeration, the smooth-point
//! census, and the singular Hasse-Weil bound evaluators.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{CtxOps, FieldCtx, FieldElem};
use crate::poly::MultiPoly;

/// A plane curve: nonzero homogeneous form in x0, x1, x2.
#[derive(Debug, Clone)]
pub struct PlaneCurve {
    f: MultiPoly,
    d: usize,
}

impl PlaneCurve {
    pub fn new(f: MultiPoly) -> Result<PlaneCurve> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if f.nvars() != 3 {
            return Err(Error::ArityMismatch {
                expected: 3,
                got: f.nvars(),
            });
        }
        if !f.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let d = f.total_degree().unwrap() as usize;
        Ok(PlaneCurve { f, d })
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.f.ctx()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCensus {
    pub total: u64,
    pub smooth: u64,
    pub singular: u64,
    /// Normalized representatives (first nonzero coordinate 1) of the
    /// curve's points, in enumeration order.
    pub points: Option<Vec<Vec<FieldElem>>>,
}

/// All points of P^m(F_q), normalized with first nonzero coordinate 1,
/// enumerated stratum by stratum (leading coordinate position ascending).
pub fn projective_points(ctx: &Arc<FieldCtx>, m: usize) -> Vec<Vec<FieldElem>> {
    let q = ctx.q();
    let mut out = Vec::new();
    for lead in 0..=m {
        let free = m - lead;
        for mut idx in 0..q.pow(free as u32) {
            let mut pt = vec![ctx.zero(); m + 1];
            pt[lead] = ctx.one();
            for slot in lead + 1..=m {
                pt[slot] = ctx.element(idx % q);
                idx /= q;
            }
            out.push(pt);
        }
    }
    out
}

/// Count the F_q-points of the curve, split into smooth and singular. A
/// point is singular iff f and all three partials vanish there — f = 0 is
/// checked explicitly because the Euler relation degenerates when the
/// characteristic divides d.
pub fn smooth_point_census(c: &PlaneCurve, budget: u64, with_points: bool) -> Result<PointCensus> {
    let ctx = c.ctx();
    let q = ctx.q();
    if q.saturating_pow(3) > budget {
        return Err(Error::BudgetExceeded {
            candidates: q.saturating_pow(3),
            ceiling: budget,
        });
    }
    let partials: Vec<MultiPoly> = (0..3).map(|i| c.f.derivative(i)).collect();
    let mut total = 0;
    let mut singular = 0;
    let mut points = Vec::new();
    for pt in projective_points(ctx, 2) {
        if !c.f.evaluate(&pt)?.is_zero() {
            continue;
        }
        total += 1;
        if partials
            .iter()
            .map(|g| g.evaluate(&pt))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(FieldElem::is_zero)
        {
            singular += 1;
        }
        if with_points {
            points.push(pt);
        }
    }
    Ok(PointCensus {
        total,
        smooth: total - singular,
        singular,
        points: with_points.then_some(points),
    })
}

/// Bound inputs: ambient degree d, component degree d', geometric genus g'
/// of the component's normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveBoundInputs {
    pub q: u64,
    pub d: u64,
    pub d_comp: u64,
    pub genus: u64,
}

impl CurveBoundInputs {
    pub fn validate(&self) -> Result<()> {
        if self.d_comp < 1 || self.d_comp > self.d {
            return Err(Error::DomainError(format!(
                "component degree {} must satisfy 1 <= d' <= d = {}",
                self.d_comp, self.d
            )));
        }
        let max_genus = (self.d_comp - 1).saturating_mul(self.d_comp.saturating_sub(2)) / 2;
        if self.genus > max_genus {
            return Err(Error::DomainError(format!(
                "genus {} exceeds the arithmetic genus bound {max_genus}",
                self.genus
            )));
        }
        Ok(())
    }
}

/// Exact integer square root by binary search.
pub fn isqrt(n: u64) -> u64 {
    let mut lo = 0u64;
    let mut hi = (n + 1).min(1 << 32);
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if mid * mid <= n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// floor(2 sqrt(q)) = floor(sqrt(4q)), exactly.
pub fn floor_two_sqrt(q: u64) -> u64 {
    isqrt(4 * q)
}

/// Lower bound on smooth F_q-points of a degree-d' component inside a
/// degree-d curve: q + 1 - g' floor(2 sqrt q) - (d'-1)(d'-2) + 2g' - (d-d')d'.
pub fn bound_ns_pt(inputs: &CurveBoundInputs) -> Result<i64> {
    inputs.validate()?;
    let q = inputs.q as i64;
    let d = inputs.d as i64;
    let dc = inputs.d_comp as i64;
    let g = inputs.genus as i64;
    Ok(q + 1 - g * floor_two_sqrt(inputs.q) as i64 - (dc - 1) * (dc - 2) + 2 * g
        - (d - dc) * dc)
}

/// The variant allowing the component itself to be singular:
/// q + 1 - g' floor(2 sqrt q) - (d'-1)(d'-2)/2 + g'.
pub fn bound_allowsing(q: u64, d_comp: u64, genus: u64) -> Result<i64> {
    let inputs = CurveBoundInputs {
        q,
        d: d_comp,
        d_comp,
        genus,
    };
    inputs.validate()?;
    let half = (d_comp as i64 - 1) * (d_comp as i64 - 2);
    if half % 2 != 0 {
        return Err(Error::DomainError(format!(
            "(d'-1)(d'-2) = {half} is odd"
        )));
    }
    Ok(q as i64 + 1 - genus as i64 * floor_two_sqrt(q) as i64 - half / 2 + genus as i64)
}

/// True iff the nonzero homogeneous form vanishes at every point of
/// P^m(F_q).
pub fn check_all_points_vanish(f: &MultiPoly, budget: u64) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let m = f.nvars() - 1;
    let q = f.ctx().q();
    if q.saturating_pow(m as u32) > budget {
        return Err(Error::BudgetExceeded {
            candidates: q.saturating_pow(m as u32),
            ceiling: budget,
        });
    }
    for pt in projective_points(f.ctx(), m) {
        if !f.evaluate(&pt)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
