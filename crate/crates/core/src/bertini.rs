//! The plane-slicing family f_{v,w,z}, the closed-form bound evaluators,
//! and the census engines that sweep the whole tuple space at small q.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::factortest::{
    absolute_irreducibility_at, has_linear_factor_through, no_small_factor_certificate,
    Certificate,
};
use crate::ff::{CtxOps, FieldCtx, FieldElem};
use crate::oracle;
use crate::poly::{simple_roots, BiPoly, MultiPoly};

/// Parameters of one plane slice: translation v (length n), line direction
/// w and transverse direction z (length n-1, for coordinates 2..n).
#[derive(Debug, Clone, PartialEq)]
pub struct SliceParams {
    pub v: Vec<FieldElem>,
    pub w: Vec<FieldElem>,
    pub z: Vec<FieldElem>,
}

impl SliceParams {
    pub fn n(&self) -> usize {
        self.v.len()
    }

    /// The image of (x, y) under the affine substitution.
    pub fn point(&self, x: &FieldElem, y: &FieldElem) -> Vec<FieldElem> {
        let mut out = Vec::with_capacity(self.v.len());
        out.push(x.add(&self.v[0]));
        for i in 0..self.w.len() {
            out.push(self.w[i].mul(x).add(&self.z[i].mul(y)).add(&self.v[i + 1]));
        }
        out
    }
}

/// f_{v,w,z}(X, Y) = f(X + v_1, w_2 X + z_2 Y + v_2, ..., w_n X + z_n Y + v_n).
pub fn slice(f: &MultiPoly, params: &SliceParams) -> Result<BiPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.nvars();
    if params.v.len() != n || params.w.len() + 1 != n || params.z.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: params.v.len(),
        });
    }
    let ctx = f.ctx();
    // Substitution polynomial for each original variable, as a bivariate.
    let mut subs = Vec::with_capacity(n);
    {
        let mut s = MultiPoly::var(ctx, 2, 0);
        s.add_term(vec![0, 0], params.v[0].clone());
        subs.push(s);
    }
    for i in 1..n {
        let mut s = MultiPoly::zero(ctx, 2);
        s.add_term(vec![1, 0], params.w[i - 1].clone());
        s.add_term(vec![0, 1], params.z[i - 1].clone());
        s.add_term(vec![0, 0], params.v[i].clone());
        subs.push(s);
    }
    // Memoize powers of each substitution up to the exponent it needs.
    let mut max_e = vec![0u32; n];
    for (e, _) in f.terms() {
        for i in 0..n {
            max_e[i] = max_e[i].max(e[i]);
        }
    }
    let mut powers: Vec<Vec<MultiPoly>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(max_e[i] as usize + 1);
        row.push(MultiPoly::constant(ctx, 2, ctx.one()));
        for j in 1..=max_e[i] {
            row.push(row[j as usize - 1].mul(&subs[i]));
        }
        powers.push(row);
    }
    let mut out = MultiPoly::zero(ctx, 2);
    for (e, c) in f.terms() {
        let mut term = MultiPoly::constant(ctx, 2, c.clone());
        for i in 0..n {
            if e[i] > 0 {
                term = term.mul(&powers[i][e[i] as usize]);
            }
        }
        out = out.add(&term);
    }
    Ok(BiPoly::from_multi(&out))
}

fn exact_eighth(num: i128, what: &str) -> u64 {
    assert!(num >= 0 && num % 8 == 0, "{what} numerator {num} not divisible by 8");
    (num / 8) as u64
}

/// Coefficient for "not absolutely irreducible": (3d^4 - 2d^3 + 13d^2 + 2d)/8.
#[allow(non_snake_case)]
pub fn bound_thmA_i(d: u64) -> u64 {
    assert!(d >= 1);
    let d = d as i128;
    exact_eighth(3 * d.pow(4) - 2 * d.pow(3) + 13 * d.pow(2) + 2 * d, "bound_thmA_i")
}

/// Degree bound on the per-root discriminating polynomial Psi_D^{(1)}:
/// (1/8)(-D^4 + 4D^3 d - 6D^3 + 12D^2 d - 11D^2 + 8Dd - 6D).
pub fn deg_psi_per_root(d: u64, cap: u64) -> u64 {
    let (d, dd) = (d as i128, cap as i128);
    exact_eighth(
        -dd.pow(4) + 4 * dd.pow(3) * d - 6 * dd.pow(3) + 12 * dd.pow(2) * d
            - 11 * dd.pow(2)
            + 8 * dd * d
            - 6 * dd,
        "deg_psi_per_root",
    )
}

/// Coefficient for "has an irreducible factor of degree <= D":
/// (d/8)(-D^4 + 4D^3 d - 6D^3 + 12D^2 d - 11D^2 + 8Dd - 6D + 16d).
#[allow(non_snake_case)]
pub fn bound_thmA_ii(d: u64, cap: u64) -> Result<u64> {
    if cap < 1 || cap >= d {
        return Err(Error::DomainError(format!(
            "factor degree bound {cap} must satisfy 1 <= D < d = {d}"
        )));
    }
    let (di, dd) = (d as i128, cap as i128);
    Ok(exact_eighth(
        di * (-dd.pow(4) + 4 * dd.pow(3) * di - 6 * dd.pow(3) + 12 * dd.pow(2) * di
            - 11 * dd.pow(2)
            + 8 * dd * di
            - 6 * dd
            + 16 * di),
        "bound_thmA_ii",
    ))
}

/// deg Psi <= 3d - 3 for the no-linear-factor-through-a-point family.
#[allow(non_snake_case)]
pub fn bound_thmB(d: u64) -> u64 {
    assert!(d >= 1);
    3 * d - 3
}

pub fn deg_upsilon(d: u64) -> u64 {
    2 * d * d
}

pub fn ell_max(d: u64, cap: u64) -> u64 {
    d * cap
}

/// All degree bounds for one (d, D), with the decomposition identity
/// bound_i = deg_psi_per_root(d, d-1) + deg_upsilon checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub d: u64,
    pub cap: u64,
    pub ell_max: u64,
    pub deg_upsilon: u64,
    pub deg_psi_per_root: u64,
    pub deg_xi: u64,
    pub bound_i: u64,
    pub bound_thm_b: u64,
}

pub fn bound_report(d: u64, cap: u64) -> Result<BoundReport> {
    let deg_xi = bound_thmA_ii(d, cap)?;
    let bound_i = bound_thmA_i(d);
    assert_eq!(bound_i, deg_psi_per_root(d, d - 1) + deg_upsilon(d));
    Ok(BoundReport {
        d,
        cap,
        ell_max: ell_max(d, cap),
        deg_upsilon: deg_upsilon(d),
        deg_psi_per_root: deg_psi_per_root(d, cap),
        deg_xi,
        bound_i,
        bound_thm_b: bound_thmB(d),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusKind {
    /// Count slices that are not absolutely irreducible (D = d-1 mode).
    FullIrreducibility,
    /// Count slices with an irreducible factor of degree <= D.
    FullSmallFactor,
    /// Count z-tuples whose slice has a linear factor through (alpha0, 0).
    LinearThrough,
}

#[derive(Debug, Clone)]
pub struct CensusReport {
    pub field: Arc<FieldCtx>,
    pub n: usize,
    pub d: usize,
    pub cap: usize,
    pub kind: CensusKind,
    pub total_tuples: u64,
    pub bad_algorithm: u64,
    pub bad_oracle: Option<u64>,
    pub bound_coefficient: u64,
    pub bound_value: u64,
    pub vacuous_bound: bool,
    pub flagged: u64,
    pub per_tuple_bad: Option<Vec<bool>>,
    pub wall_ms: u128,
}

impl CensusReport {
    /// The two report invariants. Oracle disagreement is surfaced as an
    /// error so callers can map it to a distinct exit status.
    pub fn check(&self) -> Result<()> {
        if let Some(orc) = self.bad_oracle {
            if orc != self.bad_algorithm {
                return Err(Error::DomainError(format!(
                    "oracle mismatch: algorithm counted {}, oracle counted {orc}",
                    self.bad_algorithm
                )));
            }
        }
        let cap = self.bound_value.min(self.total_tuples);
        if self.bad_algorithm > cap {
            return Err(Error::DomainError(format!(
                "bad count {} exceeds bound {cap}",
                self.bad_algorithm
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub with_oracle: bool,
    /// Ceiling on the number of tuples enumerated.
    pub budget: u64,
    pub threads: usize,
    /// Keep the per-tuple bad flags (odometer order) in the report.
    pub log_tuples: bool,
    /// Stream progress to stderr every 2^20 tuples.
    pub progress: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            with_oracle: true,
            budget: oracle::DEFAULT_BUDGET,
            threads: 1,
            log_tuples: false,
            progress: false,
        }
    }
}

/// Decode a tuple index into (v, w, z), first coordinate most significant.
fn decode_tuple(ctx: &Arc<FieldCtx>, n: usize, mut idx: u64) -> SliceParams {
    let q = ctx.q();
    let len = 3 * n - 2;
    let mut digits = vec![0u64; len];
    for slot in (0..len).rev() {
        digits[slot] = idx % q;
        idx /= q;
    }
    let v = digits[..n].iter().map(|&i| ctx.element(i)).collect();
    let w = digits[n..2 * n - 1].iter().map(|&i| ctx.element(i)).collect();
    let z = digits[2 * n - 1..].iter().map(|&i| ctx.element(i)).collect();
    SliceParams { v, w, z }
}

/// Extension degree of a root's field over the base.
fn orbit_len(root_ctx: &Arc<FieldCtx>, base: &Arc<FieldCtx>) -> usize {
    root_ctx.k() / base.k()
}

/// Sum of orbit lengths of the simple roots equals the degree exactly when
/// the restriction to Y = 0 is squarefree.
fn restriction_squarefree(
    g: &BiPoly,
    roots: &[(FieldElem, Arc<FieldCtx>)],
    d_s: usize,
) -> bool {
    let base = g.ctx();
    roots.iter().map(|(_, c)| orbit_len(c, base)).sum::<usize>() == d_s
}

/// Ground-truth classification of one slice, used for flagged tuples and
/// for the full cross-check.
fn oracle_bad(g: &BiPoly, kind: CensusKind, cap: usize, budget: u64) -> Result<bool> {
    let gm = g.to_multi();
    if gm.is_zero() {
        // The zero slice: not irreducible, and divisible by everything.
        return Ok(true);
    }
    let d_s = gm.total_degree().unwrap() as usize;
    match kind {
        CensusKind::FullIrreducibility => {
            if d_s == 0 {
                return Ok(true); // a unit is not irreducible
            }
            Ok(!oracle::absolutely_irreducible(&gm, budget)?.absolutely_irreducible())
        }
        CensusKind::FullSmallFactor => {
            if d_s == 0 {
                return Ok(false); // a unit has no irreducible factors
            }
            if d_s <= cap {
                return Ok(true); // the slice's own factors are small enough
            }
            Ok(!oracle::factors_up_to(&gm, cap, budget)?.factors.is_empty())
        }
        CensusKind::LinearThrough => unreachable!("handled by census_z"),
    }
}

/// Classify one slice for census_full. Returns (bad, flagged); flagged
/// slices fall outside the algorithm's preconditions and are settled by
/// the oracle.
fn classify_slice(
    g: &BiPoly,
    kind: CensusKind,
    cap: usize,
    budget: u64,
) -> Result<(bool, bool)> {
    let oracle_route = |_: ()| -> Result<(bool, bool)> {
        Ok((oracle_bad(g, kind, cap, budget)?, true))
    };
    if g.is_zero() {
        return oracle_route(());
    }
    let d_s = g.total_degree().unwrap();
    if d_s == 0 {
        return oracle_route(());
    }
    let u = g.restrict_y0();
    if u.degree() != Some(d_s) {
        return oracle_route(());
    }
    let roots = simple_roots(&u)?;
    match kind {
        CensusKind::FullIrreducibility => {
            // One simple root decides reducibility over the closure.
            let Some((alpha0, _)) = roots.first() else {
                return oracle_route(());
            };
            if d_s == 1 {
                return Ok((false, false));
            }
            let cert = absolute_irreducibility_at(g, alpha0, d_s)?;
            Ok((matches!(cert, Certificate::Reducible { .. }), false))
        }
        CensusKind::FullSmallFactor => {
            if d_s <= cap {
                // Every factor of the slice already has degree <= D.
                return Ok((true, false));
            }
            // Sweeping all branches is exact only when the restriction is
            // squarefree: then every factor owns a simple branch at Y = 0.
            if !restriction_squarefree(g, &roots, d_s) {
                return oracle_route(());
            }
            let m_cap = cap.min(d_s - 1);
            for (alpha0, _) in &roots {
                let cert = no_small_factor_certificate(g, alpha0, m_cap)?;
                if matches!(cert, Certificate::SmallFactorPossible { .. }) {
                    return Ok((true, false));
                }
            }
            Ok((false, false))
        }
        CensusKind::LinearThrough => unreachable!("handled by census_z"),
    }
}

struct ShardOut {
    bad_alg: u64,
    bad_orc: u64,
    flagged: u64,
    log: Vec<bool>,
}

/// Sweep all q^{3n-2} tuples and count bad slices for Theorem CM. D = d-1
/// selects the not-absolutely-irreducible census; smaller D counts slices
/// with an irreducible factor of degree <= D.
pub fn census_full(f: &MultiPoly, cap: usize, opts: &CensusOptions) -> Result<CensusReport> {
    let start = Instant::now();
    let verdict = oracle::absolutely_irreducible(f, opts.budget)?;
    if !verdict.factors.is_empty() {
        return Err(Error::NotAbsolutelyIrreducible(verdict.factors[0].degree));
    }
    let d = verdict.total_degree;
    if cap < 1 || cap >= d {
        return Err(Error::DomainError(format!(
            "factor degree bound {cap} must satisfy 1 <= D < d = {d}"
        )));
    }
    let n = f.nvars();
    let ctx = f.ctx();
    let q = ctx.q();
    let total = q
        .checked_pow(3 * n as u32 - 2)
        .filter(|&t| t <= opts.budget)
        .ok_or(Error::BudgetExceeded {
            candidates: u64::MAX,
            ceiling: opts.budget,
        })?;
    if total > opts.budget {
        return Err(Error::BudgetExceeded {
            candidates: total,
            ceiling: opts.budget,
        });
    }
    let kind = if cap == d - 1 {
        CensusKind::FullIrreducibility
    } else {
        CensusKind::FullSmallFactor
    };
    let coefficient = match kind {
        CensusKind::FullIrreducibility => bound_thmA_i(d as u64),
        CensusKind::FullSmallFactor => bound_thmA_ii(d as u64, cap as u64)?,
        CensusKind::LinearThrough => unreachable!(),
    };
    let bound_value = coefficient.saturating_mul(q.saturating_pow(3 * n as u32 - 3));

    let threads = opts.threads.max(1);
    let progress = AtomicU64::new(0);
    let shard = |lo: u64, hi: u64| -> Result<ShardOut> {
        let mut out = ShardOut {
            bad_alg: 0,
            bad_orc: 0,
            flagged: 0,
            log: Vec::new(),
        };
        for idx in lo..hi {
            let params = decode_tuple(ctx, n, idx);
            let g = slice(f, &params)?;
            let (bad, flagged) = classify_slice(&g, kind, cap, opts.budget)?;
            if bad {
                out.bad_alg += 1;
            }
            if flagged {
                out.flagged += 1;
            }
            if opts.with_oracle {
                let orc = if flagged {
                    bad // flagged tuples are already oracle-classified
                } else {
                    oracle_bad(&g, kind, cap, opts.budget)?
                };
                if orc {
                    out.bad_orc += 1;
                }
            }
            if opts.log_tuples {
                out.log.push(bad);
            }
            if opts.progress {
                let done = progress.fetch_add(1, Ordering::Relaxed) + 1;
                if done % (1 << 20) == 0 {
                    eprintln!("census progress: {done}/{total} tuples");
                }
            }
        }
        Ok(out)
    };

    let shards: Vec<Result<ShardOut>> = if threads == 1 {
        vec![shard(0, total)]
    } else {
        let chunk = total.div_ceil(threads as u64);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads as u64)
                .map(|t| {
                    let lo = (t * chunk).min(total);
                    let hi = ((t + 1) * chunk).min(total);
                    let shard = &shard;
                    scope.spawn(move || shard(lo, hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        })
    };

    let mut bad_algorithm = 0;
    let mut bad_oracle = 0;
    let mut flagged = 0;
    let mut log = Vec::new();
    for s in shards {
        let s = s?;
        bad_algorithm += s.bad_alg;
        bad_oracle += s.bad_orc;
        flagged += s.flagged;
        log.extend(s.log);
    }

    Ok(CensusReport {
        field: Arc::clone(ctx),
        n,
        d,
        cap,
        kind,
        total_tuples: total,
        bad_algorithm,
        bad_oracle: opts.with_oracle.then_some(bad_oracle),
        bound_coefficient: coefficient,
        bound_value,
        vacuous_bound: bound_value >= total,
        flagged,
        per_tuple_bad: opts.log_tuples.then_some(log),
        wall_ms: start.elapsed().as_millis(),
    })
}

/// Sweep z in F_q^{n-1} with (v0, w0) fixed, counting z-tuples whose slice
/// has a linear factor over the closure through (alpha0, 0). Precondition:
/// f itself has no linear factor over the closure, and the restriction to
/// Y = 0 (independent of z) has full degree with alpha0 simple.
pub fn census_z(
    f: &MultiPoly,
    v0: &[FieldElem],
    w0: &[FieldElem],
    alpha0: &FieldElem,
    opts: &CensusOptions,
) -> Result<CensusReport> {
    let start = Instant::now();
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.nvars();
    let ctx = f.ctx();
    let q = ctx.q();
    let d = f.total_degree().unwrap() as usize;
    let verdict = oracle::factors_up_to(f, 1.min(d.saturating_sub(1)), opts.budget)?;
    if d == 1 {
        return Err(Error::HasLinearFactor(f.to_string()));
    }
    if let Some(fac) = verdict.factors.first() {
        return Err(Error::HasLinearFactor(fac.poly.to_string()));
    }
    if v0.len() != n || w0.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v0.len(),
        });
    }
    // The restriction to Y = 0 does not depend on z; validate it once.
    let params0 = SliceParams {
        v: v0.to_vec(),
        w: w0.to_vec(),
        z: vec![ctx.zero(); n - 1],
    };
    let g0 = slice(f, &params0)?;
    let u = g0.restrict_y0();
    let got = u.degree().unwrap_or(0);
    if got != d {
        return Err(Error::DegreeDrop { expected: d, got });
    }
    let ue = u.embed(alpha0.ctx())?;
    if !ue.eval(alpha0).is_zero() {
        return Err(Error::NotARoot(alpha0.to_string()));
    }
    if ue.derivative().eval(alpha0).is_zero() {
        return Err(Error::NotSimple(alpha0.to_string()));
    }

    let total = q
        .checked_pow(n as u32 - 1)
        .filter(|&t| t <= opts.budget)
        .ok_or(Error::BudgetExceeded {
            candidates: u64::MAX,
            ceiling: opts.budget,
        })?;
    let coefficient = bound_thmB(d as u64);
    let bound_value = coefficient.saturating_mul(q.saturating_pow(n as u32 - 2));

    let mut bad_algorithm = 0;
    let mut bad_oracle = 0;
    let mut log = Vec::new();
    for idx in 0..total {
        let mut rem = idx;
        let mut z = vec![ctx.zero(); n - 1];
        for slot in (0..n - 1).rev() {
            z[slot] = ctx.element(rem % q);
            rem /= q;
        }
        let params = SliceParams {
            v: v0.to_vec(),
            w: w0.to_vec(),
            z,
        };
        let g = slice(f, &params)?;
        let cert = has_linear_factor_through(&g, alpha0)?;
        let bad = matches!(cert, Certificate::LinearFactorThrough { .. });
        if bad {
            bad_algorithm += 1;
        }
        if opts.with_oracle && oracle::bi_has_linear_factor_through(&g, alpha0, opts.budget)? {
            bad_oracle += 1;
        }
        if opts.log_tuples {
            log.push(bad);
        }
    }

    Ok(CensusReport {
        field: Arc::clone(ctx),
        n,
        d,
        cap: 1,
        kind: CensusKind::LinearThrough,
        total_tuples: total,
        bad_algorithm,
        bad_oracle: opts.with_oracle.then_some(bad_oracle),
        bound_coefficient: coefficient,
        bound_value,
        vacuous_bound: bound_value >= total,
        flagged: 0,
        per_tuple_bad: opts.log_tuples.then_some(log),
        wall_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_multipoly;

    fn mp(src: &str, ctx: &Arc<FieldCtx>, n: usize) -> MultiPoly {
        parse_multipoly(src, ctx, n).unwrap()
    }

    #[test]
    fn slice_examples() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let f = mp("x0^2 + x1", &ctx, 2);
        let p = SliceParams {
            v: vec![ctx.zero(), ctx.zero()],
            w: vec![ctx.one()],
            z: vec![ctx.one()],
        };
        let g = slice(&f, &p).unwrap();
        assert_eq!(g.to_multi(), mp("X^2 + X + Y", &ctx, 2));

        // Coordinate slice: w = 0, z = standard basis.
        let ctx3 = FieldCtx::new(3, 1).unwrap();
        let h = mp("x0^2 + x1*x2 + x2", &ctx3, 3);
        let p = SliceParams {
            v: vec![ctx3.zero(); 3],
            w: vec![ctx3.zero(); 2],
            z: vec![ctx3.one(), ctx3.zero()],
        };
        let g = slice(&h, &p).unwrap();
        assert_eq!(g.to_multi(), mp("X^2", &ctx3, 2));

        // Translation only.
        let lin = mp("x0", &ctx3, 2);
        let p = SliceParams {
            v: vec![ctx3.from_int(2), ctx3.zero()],
            w: vec![ctx3.zero()],
            z: vec![ctx3.zero()],
        };
        assert_eq!(slice(&lin, &p).unwrap().to_multi(), mp("X + 2", &ctx3, 2));

        let bad = SliceParams {
            v: vec![ctx3.zero(); 2],
            w: vec![],
            z: vec![],
        };
        assert!(matches!(
            slice(&h, &bad),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn mp2(src: &str, ctx: &Arc<FieldCtx>) -> MultiPoly {
        mp(src, ctx, 2)
    }

    #[test]
    fn slice_evaluation_commutes() {
        // slice(f, p)(x, y) = f(p.point(x, y)) exhaustively at small q.
        for (p_char, srcs, n) in [
            (2u64, vec!["x0^2 + x1", "x0^2 + x0*x1 + x1"], 2usize),
            (3, vec!["x0^2 + x0 + 2*x1"], 2),
            (2, vec!["x0^2 + x1*x2"], 3),
        ] {
            let ctx = FieldCtx::new(p_char, 1).unwrap();
            let q = ctx.q();
            for src in srcs {
                let f = mp(src, &ctx, n);
                let tuples = q.pow(3 * n as u32 - 2);
                for idx in 0..tuples {
                    let params = decode_tuple(&ctx, n, idx);
                    let g = slice(&f, &params).unwrap();
                    for xi in 0..q {
                        for yi in 0..q {
                            let (x, y) = (ctx.element(xi), ctx.element(yi));
                            assert_eq!(
                                g.eval(&x, &y),
                                f.evaluate(&params.point(&x, &y)).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(bound_thmA_i(7), 896);
        assert_eq!(bound_thmA_i(1), 2);
        assert_eq!(bound_thmA_i(2), 11);
        assert_eq!(bound_thmA_ii(7, 1).unwrap(), 224);
        assert_eq!(bound_thmA_ii(2, 1).unwrap(), 14);
        assert_eq!(bound_thmA_ii(7, 6).unwrap(), 5684);
        assert!(bound_thmA_ii(7, 7).is_err());
        assert_eq!(bound_thmB(7), 18);
        assert_eq!(bound_thmB(1), 0);
        assert_eq!(bound_thmB(2), 3);
        assert_eq!(deg_upsilon(7), 98);
        assert_eq!(ell_max(7, 1), 7);
    }

    #[test]
    fn decomposition_identity() {
        for d in 2..=12u64 {
            assert_eq!(bound_thmA_i(d), deg_psi_per_root(d, d - 1) + deg_upsilon(d));
            let r = bound_report(d, 1).unwrap();
            assert_eq!(r.bound_i, bound_thmA_i(d));
        }
    }

    #[test]
    fn census_full_f2_parabola() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let f = mp2("x0^2 + x1", &ctx);
        let opts = CensusOptions::default();
        let rep = census_full(&f, 1, &opts).unwrap();
        assert_eq!(rep.total_tuples, 16);
        assert_eq!(rep.bad_oracle, Some(rep.bad_algorithm));
        rep.check().unwrap();
        assert!(rep.vacuous_bound); // 11 * 8 = 88 > 16
        assert_eq!(rep.kind, CensusKind::FullIrreducibility);
    }

    #[test]
    fn census_rejects_reducible_input() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let f = mp2("X^2 + 2*Y^2", &ctx);
        assert!(matches!(
            census_full(&f, 1, &CensusOptions::default()),
            Err(Error::NotAbsolutelyIrreducible(1))
        ));
    }

    #[test]
    fn census_monotone_in_cap() {
        // Bad set at D is contained in the bad set at D+1, per tuple.
        let ctx = FieldCtx::new(2, 1).unwrap();
        let f = mp2("x0^3 + x0 + x1", &ctx);
        let opts = CensusOptions {
            log_tuples: true,
            ..CensusOptions::default()
        };
        let r1 = census_full(&f, 1, &opts).unwrap();
        let r2 = census_full(&f, 2, &opts).unwrap();
        r1.check().unwrap();
        r2.check().unwrap();
        let (a, b) = (r1.per_tuple_bad.unwrap(), r2.per_tuple_bad.unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!(!x || *y);
        }
    }

    #[test]
    fn census_threads_agree() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let f = mp2("x0^2 + x0 + 2*x1", &ctx);
        let one = census_full(&f, 1, &CensusOptions::default()).unwrap();
        let four = census_full(
            &f,
            1,
            &CensusOptions {
                threads: 4,
                ..CensusOptions::default()
            },
        )
        .unwrap();
        assert_eq!(one.bad_algorithm, four.bad_algorithm);
        assert_eq!(one.bad_oracle, four.bad_oracle);
        assert_eq!(one.flagged, four.flagged);
    }

    #[test]
    fn census_z_example() {
        // x0^2 + x1^2 + x0*x1 + x1 over F_2 has no linear factor over the
        // closure.
        let ctx = FieldCtx::new(2, 1).unwrap();
        let f = mp2("x0^2 + x1^2 + x0*x1 + x1", &ctx);
        // Choose (v0, w0) so the restriction has full degree and a simple
        // root at alpha0.
        let q = ctx.q();
        let mut found = None;
        'outer: for vi in 0..q * q {
            for wi in 0..q {
                let v0 = vec![ctx.element(vi % q), ctx.element(vi / q)];
                let w0 = vec![ctx.element(wi)];
                let params = SliceParams {
                    v: v0.clone(),
                    w: w0.clone(),
                    z: vec![ctx.zero()],
                };
                let u = slice(&f, &params).unwrap().restrict_y0();
                if u.degree() == Some(2) {
                    if let Some((alpha0, _)) = simple_roots(&u).unwrap().into_iter().next() {
                        found = Some((v0, w0, alpha0));
                        break 'outer;
                    }
                }
            }
        }
        let (v0, w0, alpha0) = found.expect("some slice admits a simple root");
        let rep = census_z(&f, &v0, &w0, &alpha0, &CensusOptions::default()).unwrap();
        assert_eq!(rep.total_tuples, 2);
        assert_eq!(rep.bad_oracle, Some(rep.bad_algorithm));
        rep.check().unwrap();
        assert!(rep.bad_algorithm <= 3); // (3d-3) q^{n-2} = 3
    }

    #[test]
    fn census_z_rejects_linear_factor() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let f = mp2("X^2 + 2*Y^2", &ctx);
        let v0 = vec![ctx.zero(), ctx.zero()];
        let w0 = vec![ctx.zero()];
        assert!(matches!(
            census_z(&f, &v0, &w0, &ctx.zero(), &CensusOptions::default()),
            Err(Error::HasLinearFactor(_))
        ));
        // d = 1 is excluded: a linear f is its own linear factor.
        let lin = mp2("X + Y", &ctx);
        assert!(matches!(
            census_z(&lin, &v0, &w0, &ctx.zero(), &CensusOptions::default()),
            Err(Error::HasLinearFactor(_))
        ));
    }

    #[test]
    fn census_z_squarefull_restriction() {
        // x0^2 + x1^2 + x1 over F_2: with w0 = 1 the restriction is
        // X^2 + X^2 + X ... pick parameters giving a squarefull restriction.
        let ctx = FieldCtx::new(2, 1).unwrap();
        let f = mp2("x0^2 + x1^2 + x0*x1 + x1", &ctx);
        // Find (v0, w0) with full degree but only multiple roots.
        let q = ctx.q();
        for vi in 0..q * q {
            for wi in 0..q {
                let v0 = vec![ctx.element(vi % q), ctx.element(vi / q)];
                let w0 = vec![ctx.element(wi)];
                let params = SliceParams {
                    v: v0.clone(),
                    w: w0.clone(),
                    z: vec![ctx.zero()],
                };
                let u = slice(&f, &params).unwrap().restrict_y0();
                if u.degree() == Some(2) && simple_roots(&u).unwrap().is_empty() {
                    // Any alpha0 that is a root must be multiple.
                    for ai in 0..q {
                        let a = ctx.element(ai);
                        if u.eval(&a).is_zero() {
                            assert!(matches!(
                                census_z(&f, &v0, &w0, &a, &CensusOptions::default()),
                                Err(Error::NotSimple(_))
                            ));
                            return;
                        }
                    }
                }
            }
        }
    }
}
