//! Brute-force ground truth: exhaustive search over normalized candidate
//! factors. Independent of the linear-system machinery; shares only the
//! field and polynomial arithmetic.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{embed_into, CtxOps, FieldCtx, FieldElem};
use crate::poly::{grlex_cmp, BiPoly, MultiPoly};

/// Default ceiling on the number of candidates a single call may enumerate.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// One factor found by exhaustive search, over its minimal field of
/// definition. Conjugate factors are collapsed to one representative.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleFactor {
    pub degree: usize,
    pub field: Arc<FieldCtx>,
    pub poly: MultiPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleVerdict {
    pub total_degree: usize,
    /// Factor degrees 1..=scanned_up_to were searched exhaustively.
    pub scanned_up_to: usize,
    pub factors: Vec<OracleFactor>,
    pub candidates_tried: u64,
}

impl OracleVerdict {
    /// Valid only when the scan covered every degree below the total degree.
    pub fn absolutely_irreducible(&self) -> bool {
        assert!(self.scanned_up_to + 1 >= self.total_degree);
        self.factors.is_empty()
    }

    pub fn has_factor_up_to(&self, m: usize) -> bool {
        self.factors.iter().any(|f| f.degree <= m)
    }
}

fn check_domain(f: &MultiPoly) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.total_degree().unwrap() as usize;
    let q = f.ctx().q();
    if d > 4 || q > 3 {
        return Err(Error::DomainError(format!(
            "oracle search is restricted to total degree <= 4 over F_2 or F_3 \
             (got d = {d}, q = {q})"
        )));
    }
    Ok(d)
}

/// All exponent vectors of total degree exactly m, graded-lex ascending.
fn monomials_of_degree(nvars: usize, m: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, m: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == nvars {
            cur.push(m);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=m {
            cur.push(e);
            rec(nvars, m - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, m, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| grlex_cmp(a, b));
    out
}

/// All exponent vectors of total degree strictly below m, graded-lex
/// ascending.
fn monomials_below(nvars: usize, m: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for deg in 0..m {
        out.extend(monomials_of_degree(nvars, deg));
    }
    out
}

fn maximal_proper_divisors(e: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for r in 2..=e {
        if e % r == 0 && is_prime_small(r) {
            out.push(e / r);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn is_prime_small(n: usize) -> bool {
    n >= 2 && (2..n).all(|r| n % r != 0)
}

/// f with variable j replaced by `sub` (a polynomial without variable j).
fn substitute_var(f: &MultiPoly, j: usize, sub: &MultiPoly) -> MultiPoly {
    let max_dj = f.terms().map(|(e, _)| e[j]).max().unwrap_or(0);
    let mut powers = Vec::with_capacity(max_dj as usize + 1);
    powers.push(MultiPoly::constant(f.ctx(), f.nvars(), f.ctx().one()));
    for i in 1..=max_dj {
        powers.push(powers[i as usize - 1].mul(sub));
    }
    let mut out = MultiPoly::zero(f.ctx(), f.nvars());
    for (e, c) in f.terms() {
        let mut rest = e.clone();
        rest[j] = 0;
        let mut mono = MultiPoly::zero(f.ctx(), f.nvars());
        mono.add_term(rest, c.clone());
        out = out.add(&mono.mul(&powers[e[j] as usize]));
    }
    out
}

/// Divisibility by a linear candidate via substitution: with leading
/// variable x_j solved out, g | f iff the substituted f vanishes.
fn linear_divides(f: &MultiPoly, g: &MultiPoly) -> bool {
    let (lead, lead_c) = g.leading_term().unwrap();
    debug_assert!(lead.iter().sum::<u32>() == 1 && *lead_c == g.ctx().one());
    let j = lead.iter().position(|&e| e == 1).unwrap();
    let mut xj = MultiPoly::zero(g.ctx(), g.nvars());
    xj.add_term(lead.clone(), g.ctx().one());
    let sub = xj.sub(g);
    substitute_var(f, j, &sub).is_zero()
}

/// Exhaustive factor search for degrees 1..=max_degree (clamped below the
/// total degree). For each degree m, candidates range over extensions
/// F_{q^e} with e <= d/m: a degree-m factor minimally defined over F_{q^e}
/// brings its e conjugates along, and their product of degree e*m divides f.
/// Candidates carry leading coefficient 1 in graded-lex order, one per
/// scalar class; hits are deduplicated by Frobenius orbit.
pub fn factors_up_to(f: &MultiPoly, max_degree: usize, budget: u64) -> Result<OracleVerdict> {
    let d = check_domain(f)?;
    let scan = max_degree.min(d.saturating_sub(1)).max(0);
    let nvars = f.nvars();
    let base = f.ctx();
    let q = base.q();

    // Budget precheck: count candidates exactly before enumerating any.
    let mut total: u64 = 0;
    for m in 1..=scan {
        let degree_m = monomials_of_degree(nvars, m as u32);
        let below = monomials_below(nvars, m as u32).len() as u32;
        for e in 1..=(d / m) {
            let qe = q.saturating_pow(e as u32);
            for li in 0..degree_m.len() {
                let free = below + li as u32;
                let here = qe.checked_pow(free).unwrap_or(u64::MAX);
                total = total.saturating_add(here);
            }
        }
    }
    if total > budget {
        return Err(Error::BudgetExceeded {
            candidates: total,
            ceiling: budget,
        });
    }

    let mut factors = Vec::new();
    let mut tried: u64 = 0;
    for m in 1..=scan {
        let degree_m = monomials_of_degree(nvars, m as u32);
        let below = monomials_below(nvars, m as u32);
        for e in 1..=(d / m) {
            let ext = FieldCtx::new(base.p(), base.k() * e)?;
            let f_ext = f.embed(&ext)?;
            let qe = ext.q();
            let subfield_sizes: Vec<u64> = maximal_proper_divisors(e)
                .into_iter()
                .map(|e1| q.pow(e1 as u32))
                .collect();
            let mut accepted: Vec<MultiPoly> = Vec::new();
            for (li, lead) in degree_m.iter().enumerate() {
                let free: Vec<&Vec<u32>> =
                    below.iter().chain(degree_m[..li].iter()).collect();
                let count = qe.pow(free.len() as u32);
                for mut idx in 0..count {
                    tried += 1;
                    let mut g = MultiPoly::zero(&ext, nvars);
                    g.add_term(lead.clone(), ext.one());
                    for exps in &free {
                        g.add_term((*exps).clone(), ext.element(idx % qe));
                        idx /= qe;
                    }
                    // Keep only candidates minimally defined over F_{q^e}.
                    if subfield_sizes.iter().any(|&s| g.frobenius(s) == g) {
                        continue;
                    }
                    let divides = if m == 1 {
                        linear_divides(&f_ext, &g)
                    } else {
                        f_ext.divisible_by(&g)
                    };
                    if !divides {
                        continue;
                    }
                    // One representative per Frobenius orbit.
                    let mut conj = g.clone();
                    let mut seen = false;
                    for _ in 0..e {
                        if accepted.contains(&conj) {
                            seen = true;
                            break;
                        }
                        conj = conj.frobenius(q);
                    }
                    if !seen {
                        accepted.push(g.clone());
                        factors.push(OracleFactor {
                            degree: m,
                            field: Arc::clone(&ext),
                            poly: g,
                        });
                    }
                }
            }
        }
    }
    Ok(OracleVerdict {
        total_degree: d,
        scanned_up_to: scan,
        factors,
        candidates_tried: tried,
    })
}

/// Ground-truth absolute irreducibility: no factor of any degree below d.
pub fn absolutely_irreducible(f: &MultiPoly, budget: u64) -> Result<OracleVerdict> {
    let d = check_domain(f)?;
    factors_up_to(f, d.saturating_sub(1), budget)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Ground truth for "f has a linear factor over the closure vanishing at
/// `point`": every conjugate of every linear-factor orbit is checked in the
/// compositum of its field with the point's field.
pub fn has_linear_factor_through(
    f: &MultiPoly,
    point: &[FieldElem],
    budget: u64,
) -> Result<bool> {
    let verdict = factors_up_to(f, 1, budget)?;
    point_on_linear_factor(f, &verdict, point)
}

/// The same check against an already-computed linear-factor verdict, for
/// callers probing many points of one polynomial.
pub fn point_on_linear_factor(
    f: &MultiPoly,
    verdict: &OracleVerdict,
    point: &[FieldElem],
) -> Result<bool> {
    if point.len() != f.nvars() {
        return Err(Error::ArityMismatch {
            expected: f.nvars(),
            got: point.len(),
        });
    }
    let q = f.ctx().q();
    for fac in verdict.factors.iter().filter(|fac| fac.degree == 1) {
        let k_comp = lcm(fac.field.k(), point[0].ctx().k());
        let comp = FieldCtx::new(f.ctx().p(), k_comp)?;
        let pt: Vec<FieldElem> = point
            .iter()
            .map(|c| embed_into(c, &comp))
            .collect::<Result<_>>()?;
        let e = fac.field.k() / f.ctx().k();
        let mut conj = fac.poly.clone();
        for _ in 0..e {
            if conj.embed(&comp)?.evaluate(&pt)?.is_zero() {
                return Ok(true);
            }
            conj = conj.frobenius(q);
        }
    }
    Ok(false)
}

/// Bivariate convenience wrapper for the marked point (alpha0, 0).
pub fn bi_has_linear_factor_through(
    f: &BiPoly,
    alpha0: &FieldElem,
    budget: u64,
) -> Result<bool> {
    let point = vec![alpha0.clone(), alpha0.ctx().zero()];
    has_linear_factor_through(&f.to_multi(), &point, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_multipoly;

    fn mp(src: &str, ctx: &Arc<FieldCtx>) -> MultiPoly {
        parse_multipoly(src, ctx, 2).unwrap()
    }

    #[test]
    fn split_conic_over_f3() {
        // X^2 + 2Y^2 = (X + Y)(X + 2Y) over F_3.
        let ctx = FieldCtx::new(3, 1).unwrap();
        let v = factors_up_to(&mp("X^2 + 2*Y^2", &ctx), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.factors.len(), 2);
        assert!(v.factors.iter().all(|f| f.degree == 1 && f.field.q() == 3));
        let found: Vec<String> = v.factors.iter().map(|f| f.poly.to_string()).collect();
        assert_eq!(found, vec!["X + Y", "X + 2*Y"]);
    }

    #[test]
    fn conjugate_factors_over_f9() {
        // X^2 + Y^2 = (X + iY)(X - iY) with i in F_9: one orbit, minimal
        // field F_9.
        let ctx = FieldCtx::new(3, 1).unwrap();
        let v = absolutely_irreducible(&mp("X^2 + Y^2", &ctx), DEFAULT_BUDGET).unwrap();
        assert!(!v.absolutely_irreducible());
        assert_eq!(v.factors.len(), 1);
        let fac = &v.factors[0];
        assert_eq!((fac.degree, fac.field.q()), (1, 9));
        // The conjugate divides too, and differs from the representative.
        let conj = fac.poly.frobenius(3);
        assert_ne!(conj, fac.poly);
        let f9 = Arc::clone(&fac.field);
        let f_ext = mp("X^2 + Y^2", &ctx).embed(&f9).unwrap();
        assert!(f_ext.divisible_by(&conj));
        assert!(f_ext.divisible_by(&fac.poly));
    }

    #[test]
    fn absolutely_irreducible_examples() {
        let ctx2 = FieldCtx::new(2, 1).unwrap();
        assert!(absolutely_irreducible(&mp("X^2 + Y", &ctx2), DEFAULT_BUDGET)
            .unwrap()
            .absolutely_irreducible());
        assert!(absolutely_irreducible(&mp("X^2 + X + Y", &ctx2), DEFAULT_BUDGET)
            .unwrap()
            .absolutely_irreducible());
        // Squares are caught with both factors in one orbit class.
        let v = absolutely_irreducible(&mp("X^2 + Y^2", &ctx2), DEFAULT_BUDGET).unwrap();
        assert!(!v.absolutely_irreducible());
    }

    #[test]
    fn degree_accounting() {
        // (X^2 + Y)(X + 1) over F_2: factors of degree 1 and 2.
        let ctx = FieldCtx::new(2, 1).unwrap();
        let f = mp("X^2 + Y", &ctx).mul(&mp("X + 1", &ctx));
        let v = factors_up_to(&f, 2, DEFAULT_BUDGET).unwrap();
        let degs: Vec<usize> = v.factors.iter().map(|f| f.degree).collect();
        assert_eq!(degs, vec![1, 2]);
        assert!(v.has_factor_up_to(1));
    }

    #[test]
    fn linear_factor_through_examples() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let f = BiPoly::from_multi(&mp("X^2 + X*Y + X + Y", &ctx));
        assert!(bi_has_linear_factor_through(&f, &ctx.zero(), DEFAULT_BUDGET).unwrap());
        assert!(bi_has_linear_factor_through(&f, &ctx.from_int(2), DEFAULT_BUDGET).unwrap());
        // X + 1 passes through (2, y) for every y, X + Y through (alpha, -alpha).
        assert!(!bi_has_linear_factor_through(&f, &ctx.one(), DEFAULT_BUDGET).is_err());

        let ctx2 = FieldCtx::new(2, 1).unwrap();
        let g = BiPoly::from_multi(&mp("X^2 + X + Y", &ctx2));
        assert!(!bi_has_linear_factor_through(&g, &ctx2.zero(), DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn linear_factor_through_extension_point() {
        // X^2 + Y^2 over F_3 has the factor X + iY through (i, -1)?  At the
        // point (alpha0, 0) with alpha0 in F_9 a root of x^2 + 1: the factor
        // X + iY evaluates to alpha0 at Y = 0, nonzero. But (0, 0) lies on
        // both factors.
        let ctx = FieldCtx::new(3, 1).unwrap();
        let f = mp("X^2 + Y^2", &ctx);
        let point = vec![ctx.zero(), ctx.zero()];
        assert!(has_linear_factor_through(&f, &point, DEFAULT_BUDGET).unwrap());
        let f9 = FieldCtx::new(3, 2).unwrap();
        let point9 = vec![f9.generator(), f9.zero()];
        assert!(!has_linear_factor_through(&f, &point9, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn budget_and_domain_guards() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let f = mp("X^3 + X + Y", &ctx);
        assert!(matches!(
            factors_up_to(&f, 2, 10),
            Err(Error::BudgetExceeded { .. })
        ));
        let big = mp("X^4 + X + Y", &ctx).mul(&mp("X + Y", &ctx));
        assert!(matches!(
            factors_up_to(&big, 1, DEFAULT_BUDGET),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn deterministic_output() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let f = mp("X^2 + 2*Y^2", &ctx).mul(&mp("X + Y + 1", &ctx));
        let a = factors_up_to(&f, 2, DEFAULT_BUDGET).unwrap();
        let b = factors_up_to(&f, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trivariate_linear_factors() {
        // x0^2 + x1*x2 is absolutely irreducible; x0*(x1 + x2) splits.
        let ctx = FieldCtx::new(2, 1).unwrap();
        let f = parse_multipoly("x0^2 + x1*x2", &ctx, 3).unwrap();
        assert!(absolutely_irreducible(&f, DEFAULT_BUDGET)
            .unwrap()
            .absolutely_irreducible());
        let g = parse_multipoly("x0*x1 + x0*x2", &ctx, 3).unwrap();
        let v = factors_up_to(&g, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.factors.len(), 2);
    }
}
