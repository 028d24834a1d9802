//! Polynomial arithmetic over finite fields: sparse multivariate, dense
//! bivariate, univariate, and truncated power series.
//!
//! Degrees of the zero polynomial are `None` throughout, never 0.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{embed_into, frobenius_orbit, CtxOps, FieldCtx, FieldElem};

// ---------------------------------------------------------------------------
// Univariate polynomials
// ---------------------------------------------------------------------------

/// Dense univariate polynomial, coefficients constant-term first, trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    ctx: Arc<FieldCtx>,
    c: Vec<FieldElem>,
}

impl UniPoly {
    pub fn new(ctx: &Arc<FieldCtx>, mut coeffs: Vec<FieldElem>) -> UniPoly {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        UniPoly {
            ctx: Arc::clone(ctx),
            c: coeffs,
        }
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> UniPoly {
        UniPoly {
            ctx: Arc::clone(ctx),
            c: Vec::new(),
        }
    }

    pub fn constant(e: FieldElem) -> UniPoly {
        let ctx = Arc::clone(e.ctx());
        UniPoly::new(&ctx, vec![e])
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.c.get(i).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }

    pub fn eval(&self, at: &FieldElem) -> FieldElem {
        let mut acc = at.ctx().zero();
        for coef in self.c.iter().rev() {
            acc = acc.mul(at);
            acc = acc.add(coef);
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, coef)| coef.mul(&self.ctx.from_int(i as i64)))
            .collect();
        UniPoly::new(&self.ctx, c)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        UniPoly::new(&self.ctx, c)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        UniPoly::new(&self.ctx, c)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(&self.ctx, self.c.iter().map(FieldElem::neg).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.ctx);
        }
        let mut c = vec![self.ctx.zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        UniPoly::new(&self.ctx, c)
    }

    pub fn pow(&self, exp: usize) -> UniPoly {
        let mut acc = UniPoly::constant(self.ctx.one());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn embed(&self, target: &Arc<FieldCtx>) -> Result<UniPoly> {
        let c = self
            .c
            .iter()
            .map(|e| embed_into(e, target))
            .collect::<Result<Vec<_>>>()?;
        Ok(UniPoly::new(target, c))
    }
}

// ---------------------------------------------------------------------------
// Sparse multivariate polynomials
// ---------------------------------------------------------------------------

/// Sparse n-variate polynomial; nonzero coefficients keyed by exponent
/// vectors of length nvars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    ctx: Arc<FieldCtx>,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldElem>,
}

/// Graded-lex comparison: total degree first, then the exponent vector with
/// the first variable most significant.
pub(crate) fn grlex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MultiPoly {
    pub fn zero(ctx: &Arc<FieldCtx>, nvars: usize) -> MultiPoly {
        MultiPoly {
            ctx: Arc::clone(ctx),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, nvars: usize, e: FieldElem) -> MultiPoly {
        let mut out = MultiPoly::zero(ctx, nvars);
        out.add_term(vec![0; nvars], e);
        out
    }

    pub fn var(ctx: &Arc<FieldCtx>, nvars: usize, i: usize) -> MultiPoly {
        assert!(i < nvars);
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut out = MultiPoly::zero(ctx, nvars);
        out.add_term(exps, ctx.one());
        out
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> FieldElem {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| self.ctx.zero())
    }

    /// Add `coef` to the term at `exps`, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: Vec<u32>, coef: FieldElem) {
        debug_assert_eq!(exps.len(), self.nvars);
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&coef);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ctx, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ctx, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exps, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, s: &FieldElem) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ctx, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul(s));
        }
        out
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(&self.ctx, self.nvars, self.ctx.one());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate at a point whose coordinates live in the polynomial's field
    /// or a declared extension; coefficients are embedded as needed.
    pub fn evaluate(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let target = if let Some(first) = point.first() {
            Arc::clone(first.ctx())
        } else {
            Arc::clone(&self.ctx)
        };
        let mut acc = target.zero();
        for (exps, coef) in &self.terms {
            let mut t = embed_into(coef, &target)?;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&point[i].pow(e as u64));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ctx, self.nvars);
        for (exps, coef) in &self.terms {
            if exps[var] == 0 {
                continue;
            }
            let mut e = exps.clone();
            e[var] -= 1;
            out.add_term(e, coef.mul(&self.ctx.from_int(exps[var] as i64)));
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Substitute 1 for the variable at `var` and drop it.
    pub fn dehomogenize(&self, var: usize) -> Result<MultiPoly> {
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let mut out = MultiPoly::zero(&self.ctx, self.nvars - 1);
        for (exps, coef) in &self.terms {
            let mut e = exps.clone();
            e.remove(var);
            out.add_term(e, coef.clone());
        }
        Ok(out)
    }

    /// Insert a homogenizing variable at `var` so that every term has total
    /// degree `d`.
    pub fn homogenize(&self, var: usize, d: u32) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ctx, self.nvars + 1);
        for (exps, coef) in &self.terms {
            let t: u32 = exps.iter().sum();
            assert!(t <= d, "target degree below an existing term degree");
            let mut e = exps.clone();
            e.insert(var, d - t);
            out.add_term(e, coef.clone());
        }
        out
    }

    pub fn embed(&self, target: &Arc<FieldCtx>) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(target, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), embed_into(c, target)?);
        }
        Ok(out)
    }

    /// Leading term under graded lex.
    pub fn leading_term(&self) -> Option<(&Vec<u32>, &FieldElem)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    /// Exact divisibility test: single-divisor division with respect to
    /// graded lex; the remainder is zero iff `divisor` divides `self`.
    pub fn divisible_by(&self, divisor: &MultiPoly) -> bool {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let (lt_e, lt_c) = divisor.leading_term().unwrap();
        let lt_c_inv = lt_c.inv().expect("leading coefficient is nonzero");
        let mut rem = self.clone();
        loop {
            // Largest remaining term divisible by the divisor's leading term.
            let target = rem
                .terms
                .iter()
                .filter(|(e, _)| e.iter().zip(lt_e).all(|(a, b)| a >= b))
                .max_by(|a, b| grlex_cmp(a.0, b.0))
                .map(|(e, c)| (e.clone(), c.clone()));
            let Some((e, c)) = target else {
                return rem.is_zero();
            };
            let qe: Vec<u32> = e.iter().zip(lt_e).map(|(a, b)| a - b).collect();
            let qc = c.mul(&lt_c_inv);
            let mut mono = MultiPoly::zero(&rem.ctx, rem.nvars);
            mono.add_term(qe, qc);
            rem = rem.sub(&mono.mul(divisor));
        }
    }

    /// Coefficient-wise Frobenius x -> x^{q0}; maps a polynomial over an
    /// extension to its conjugate over the base of size q0.
    pub fn frobenius(&self, q0: u64) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ctx, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.pow(q0));
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        let var_name = |i: usize| -> String {
            if self.nvars == 2 {
                if i == 0 { "X".into() } else { "Y".into() }
            } else {
                format!("x{i}")
            }
        };
        let parts: Vec<String> = terms
            .iter()
            .map(|(exps, coef)| {
                let mut factors = Vec::new();
                let is_const = exps.iter().all(|&e| e == 0);
                if !coef.is_zero() && (is_const || **coef != coef.ctx().one()) {
                    factors.push(coef.to_string());
                }
                for (i, &e) in exps.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(var_name(i)),
                        _ => factors.push(format!("{}^{}", var_name(i), e)),
                    }
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Dense bivariate polynomials
// ---------------------------------------------------------------------------

/// Dense bivariate polynomial f(X, Y), stored as coefficients of X^i, each a
/// univariate polynomial in Y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    ctx: Arc<FieldCtx>,
    xc: Vec<UniPoly>,
}

impl BiPoly {
    pub fn new(ctx: &Arc<FieldCtx>, mut xc: Vec<UniPoly>) -> BiPoly {
        while xc.last().is_some_and(UniPoly::is_zero) {
            xc.pop();
        }
        BiPoly {
            ctx: Arc::clone(ctx),
            xc,
        }
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> BiPoly {
        BiPoly {
            ctx: Arc::clone(ctx),
            xc: Vec::new(),
        }
    }

    pub fn from_multi(f: &MultiPoly) -> BiPoly {
        assert_eq!(f.nvars(), 2, "BiPoly requires exactly two variables");
        let dx = f
            .terms()
            .map(|(e, _)| e[0])
            .max()
            .map(|d| d as usize + 1)
            .unwrap_or(0);
        let mut cols: Vec<Vec<FieldElem>> = vec![Vec::new(); dx];
        for (e, c) in f.terms() {
            let (i, j) = (e[0] as usize, e[1] as usize);
            if cols[i].len() <= j {
                cols[i].resize(j + 1, f.ctx().zero());
            }
            cols[i][j] = c.clone();
        }
        let xc = cols
            .into_iter()
            .map(|c| UniPoly::new(f.ctx(), c))
            .collect();
        BiPoly::new(f.ctx(), xc)
    }

    pub fn to_multi(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ctx, 2);
        for (i, yp) in self.xc.iter().enumerate() {
            for (j, c) in yp.coeffs().iter().enumerate() {
                out.add_term(vec![i as u32, j as u32], c.clone());
            }
        }
        out
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.xc.is_empty()
    }

    pub fn deg_x(&self) -> Option<usize> {
        if self.xc.is_empty() {
            None
        } else {
            Some(self.xc.len() - 1)
        }
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.xc
            .iter()
            .enumerate()
            .filter_map(|(i, yp)| yp.degree().map(|d| i + d))
            .max()
    }

    /// Coefficient of X^i as a polynomial in Y.
    pub fn x_coeff(&self, i: usize) -> UniPoly {
        self.xc
            .get(i)
            .cloned()
            .unwrap_or_else(|| UniPoly::zero(&self.ctx))
    }

    /// f(X, 0) as a univariate polynomial in X.
    pub fn restrict_y0(&self) -> UniPoly {
        UniPoly::new(&self.ctx, self.xc.iter().map(|yp| yp.coeff(0)).collect())
    }

    pub fn partial_x(&self) -> BiPoly {
        let xc = self
            .xc
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, yp)| {
                let s = self.ctx.from_int(i as i64);
                UniPoly::new(
                    &self.ctx,
                    yp.coeffs().iter().map(|c| c.mul(&s)).collect(),
                )
            })
            .collect();
        BiPoly::new(&self.ctx, xc)
    }

    pub fn eval(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let mut acc = x.ctx().zero();
        for yp in self.xc.iter().rev() {
            acc = acc.mul(x);
            acc = acc.add(&yp.eval(y));
        }
        acc
    }

    pub fn embed(&self, target: &Arc<FieldCtx>) -> Result<BiPoly> {
        let xc = self
            .xc
            .iter()
            .map(|yp| yp.embed(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(BiPoly::new(target, xc))
    }

    /// Divide by a divisor monic in X (leading X-coefficient the constant 1).
    /// Returns (quotient, remainder) with deg_X rem < deg_X divisor.
    pub fn divrem_monic_x(&self, divisor: &BiPoly) -> (BiPoly, BiPoly) {
        let dd = divisor.deg_x().expect("divisor must be nonzero");
        let lead = divisor.x_coeff(dd);
        assert_eq!(
            lead,
            UniPoly::constant(self.ctx.one()),
            "divisor must be monic in X"
        );
        let mut rem = self.xc.clone();
        let mut quo: Vec<UniPoly> = Vec::new();
        while rem.len() > dd {
            let top = rem.last().unwrap().clone();
            let shift = rem.len() - 1 - dd;
            if quo.len() <= shift {
                quo.resize(shift + 1, UniPoly::zero(&self.ctx));
            }
            quo[shift] = quo[shift].add(&top);
            for j in 0..=dd {
                let t = divisor.x_coeff(j).mul(&top);
                rem[shift + j] = rem[shift + j].sub(&t);
            }
            while rem.last().is_some_and(UniPoly::is_zero) {
                rem.pop();
            }
            if rem.len() == shift + dd + 1 {
                // Top failed to cancel; cannot happen with a monic divisor.
                unreachable!("monic division did not reduce the degree");
            }
        }
        (BiPoly::new(&self.ctx, quo), BiPoly::new(&self.ctx, rem))
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_multi())
    }
}

// ---------------------------------------------------------------------------
// Truncated power series
// ---------------------------------------------------------------------------

/// Power series in Y truncated at a fixed order: coefficients for Y^0 ..
/// Y^{order-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    ctx: Arc<FieldCtx>,
    c: Vec<FieldElem>,
}

impl TruncSeries {
    pub fn new(ctx: &Arc<FieldCtx>, mut coeffs: Vec<FieldElem>, order: usize) -> TruncSeries {
        assert!(order >= 1);
        coeffs.resize(order, ctx.zero());
        TruncSeries {
            ctx: Arc::clone(ctx),
            c: coeffs,
        }
    }

    pub fn zero(ctx: &Arc<FieldCtx>, order: usize) -> TruncSeries {
        TruncSeries::new(ctx, Vec::new(), order)
    }

    pub fn constant(e: &FieldElem, order: usize) -> TruncSeries {
        let ctx = Arc::clone(e.ctx());
        TruncSeries::new(&ctx, vec![e.clone()], order)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.c.len()
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.c.get(i).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(FieldElem::is_zero)
    }

    pub fn truncate(&self, order: usize) -> TruncSeries {
        assert!(order >= 1 && order <= self.order());
        TruncSeries::new(&self.ctx, self.c[..order].to_vec(), order)
    }

    pub fn extend(&self, order: usize) -> TruncSeries {
        assert!(order >= self.order());
        TruncSeries::new(&self.ctx, self.c.clone(), order)
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        assert_eq!(self.order(), other.order());
        let c = self.c.iter().zip(&other.c).map(|(a, b)| a.add(b)).collect();
        TruncSeries::new(&self.ctx, c, self.order())
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        assert_eq!(self.order(), other.order());
        let c = self.c.iter().zip(&other.c).map(|(a, b)| a.sub(b)).collect();
        TruncSeries::new(&self.ctx, c, self.order())
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        assert_eq!(self.order(), other.order());
        let n = self.order();
        let mut c = vec![self.ctx.zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().take(n - i).enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        TruncSeries::new(&self.ctx, c, n)
    }

    /// Inverse of a series with unit constant term, by the standard
    /// convolution recurrence.
    pub fn inverse(&self) -> TruncSeries {
        let u0 = self.c[0].inv().expect("constant term must be a unit");
        let n = self.order();
        let mut b = vec![self.ctx.zero(); n];
        b[0] = u0.clone();
        for r in 1..n {
            let mut s = self.ctx.zero();
            for t in 1..=r {
                s = s.add(&self.c[t].mul(&b[r - t]));
            }
            b[r] = u0.mul(&s).neg();
        }
        TruncSeries::new(&self.ctx, b, n)
    }
}

/// Evaluate f(X, Y) at X = `s`, as a series of the same order (Horner in X).
pub fn bipoly_eval_series(f: &BiPoly, s: &TruncSeries) -> TruncSeries {
    let order = s.order();
    let ctx = s.ctx();
    let mut acc = TruncSeries::zero(ctx, order);
    let dx = match f.deg_x() {
        Some(d) => d,
        None => return acc,
    };
    for i in (0..=dx).rev() {
        acc = acc.mul(s);
        let yc = f.x_coeff(i);
        let coeffs = (0..order).map(|j| yc.coeff(j)).collect();
        acc = acc.add(&TruncSeries::new(ctx, coeffs, order));
    }
    acc
}

// ---------------------------------------------------------------------------
// Resultants
// ---------------------------------------------------------------------------

/// Res_X(f, g): the Sylvester determinant with respect to X, a univariate
/// polynomial in Y.
pub fn resultant_x(f: &BiPoly, g: &BiPoly) -> Result<UniPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ctx = f.ctx();
    let df = f.deg_x().unwrap();
    let dg = g.deg_x().unwrap();
    if dg == 0 {
        return Ok(g.x_coeff(0).pow(df));
    }
    if df == 0 {
        return Ok(f.x_coeff(0).pow(dg));
    }
    let n = df + dg;
    // Sylvester matrix: dg rows of f's X-coefficients, then df rows of g's,
    // highest X-power first.
    let mut rows: Vec<Vec<UniPoly>> = Vec::with_capacity(n);
    for r in 0..dg {
        let mut row = vec![UniPoly::zero(ctx); n];
        for j in 0..=df {
            row[r + j] = f.x_coeff(df - j);
        }
        rows.push(row);
    }
    for r in 0..df {
        let mut row = vec![UniPoly::zero(ctx); n];
        for j in 0..=dg {
            row[r + j] = g.x_coeff(dg - j);
        }
        rows.push(row);
    }
    Ok(det_poly(&rows, ctx))
}

/// Determinant of a square matrix of univariate polynomials, by Laplace
/// expansion memoized on the set of free columns.
fn det_poly(rows: &[Vec<UniPoly>], ctx: &Arc<FieldCtx>) -> UniPoly {
    let n = rows.len();
    let mut memo: std::collections::HashMap<u64, UniPoly> = std::collections::HashMap::new();
    fn rec(
        rows: &[Vec<UniPoly>],
        ctx: &Arc<FieldCtx>,
        mask: u64,
        memo: &mut std::collections::HashMap<u64, UniPoly>,
    ) -> UniPoly {
        if mask == 0 {
            return UniPoly::constant(ctx.one());
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let n = rows.len();
        let row = n - (mask.count_ones() as usize);
        let mut acc = UniPoly::zero(ctx);
        let mut sign = false;
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let entry = &rows[row][col];
            if !entry.is_zero() {
                let sub = rec(rows, ctx, mask & !(1 << col), memo);
                let t = entry.mul(&sub);
                acc = if sign { acc.sub(&t) } else { acc.add(&t) };
            }
            sign = !sign;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    rec(rows, ctx, (1u64 << n) - 1, &mut memo)
}

// ---------------------------------------------------------------------------
// Simple roots
// ---------------------------------------------------------------------------

/// All simple roots of `u` across extensions F_{q^e}, e <= deg u, one
/// representative per Frobenius orbit over the base field, ordered by
/// extension degree then lexicographic coefficient vector. An empty result
/// for nonconstant `u` means `u` is squarefull.
pub fn simple_roots(u: &UniPoly) -> Result<Vec<(FieldElem, Arc<FieldCtx>)>> {
    if u.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let base = u.ctx();
    let d = u.degree().unwrap();
    let mut out = Vec::new();
    for e in 1..=d {
        let ext = FieldCtx::new(base.p(), base.k() * e)?;
        let ue = u.embed(&ext)?;
        let due = ue.derivative();
        let mut found_here: Vec<FieldElem> = Vec::new();
        for cand in ext.elements() {
            if !ue.eval(&cand).is_zero() || due.eval(&cand).is_zero() {
                continue;
            }
            let orbit = frobenius_orbit(&cand, base);
            if orbit.len() != e {
                // Lives in a proper subfield; already reported there.
                continue;
            }
            if found_here.iter().any(|r| orbit.contains(r)) {
                continue;
            }
            found_here.push(cand.clone());
            out.push((cand, Arc::clone(&ext)));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parse the ASCII polynomial grammar: variables `x0`..`x9` or `X`, `Y`
/// (aliases for x0, x1), nonnegative integer coefficients, operators
/// `+ - * ^`. No juxtaposition. Errors carry the byte offset.
pub fn parse_multipoly(src: &str, ctx: &Arc<FieldCtx>, nvars: usize) -> Result<MultiPoly> {
    Parser {
        bytes: src.as_bytes(),
        pos: 0,
        ctx: Arc::clone(ctx),
        nvars,
    }
    .parse()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    ctx: Arc<FieldCtx>,
    nvars: usize,
}

impl Parser<'_> {
    fn parse(mut self) -> Result<MultiPoly> {
        let out = self.expr()?;
        self.skip_ws();
        if self.pos < self.bytes.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(out)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()? as u32;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(MultiPoly::constant(
                    &self.ctx,
                    self.nvars,
                    self.ctx.from_int(n as i64),
                ))
            }
            Some(b'X') => {
                self.check_var(0)?;
                self.pos += 1;
                Ok(MultiPoly::var(&self.ctx, self.nvars, 0))
            }
            Some(b'Y') => {
                self.check_var(1)?;
                self.pos += 1;
                Ok(MultiPoly::var(&self.ctx, self.nvars, 1))
            }
            Some(b'x') => {
                let d = self
                    .bytes
                    .get(self.pos + 1)
                    .filter(|b| b.is_ascii_digit())
                    .ok_or_else(|| self.err("expected digit after 'x'"))?;
                let idx = (d - b'0') as usize;
                self.check_var(idx)?;
                self.pos += 2;
                Ok(MultiPoly::var(&self.ctx, self.nvars, idx))
            }
            _ => Err(self.err("expected a coefficient or variable")),
        }
    }

    fn check_var(&self, idx: usize) -> Result<()> {
        if idx >= self.nvars {
            return Err(Error::Parse {
                offset: self.pos,
                msg: format!("variable index {idx} out of range for {} variables", self.nvars),
            });
        }
        Ok(())
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                msg: "integer too large".to_string(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Arc<FieldCtx> {
        FieldCtx::new(3, 1).unwrap()
    }

    fn f2() -> Arc<FieldCtx> {
        FieldCtx::new(2, 1).unwrap()
    }

    fn parse2(src: &str, ctx: &Arc<FieldCtx>) -> MultiPoly {
        parse_multipoly(src, ctx, 2).unwrap()
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let ctx = f3();
        let f = parse2("X^2 + X*Y + X + Y", &ctx);
        assert_eq!(f.total_degree(), Some(2));
        let again = parse_multipoly(&f.to_string(), &ctx, 2).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn parse_error_offsets() {
        let ctx = f3();
        match parse_multipoly("X^2 + @", &ctx, 2) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_multipoly("x5", &ctx, 2).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let ctx = f3();
        let f = parse2("X^2 + X*Y + X + Y", &ctx);
        let at = |a: i64, b: i64| {
            f.evaluate(&[ctx.from_int(a), ctx.from_int(b)]).unwrap()
        };
        assert_eq!(at(0, 0), ctx.zero());
        assert_eq!(at(2, 0), ctx.zero());
        assert_eq!(at(1, 1), ctx.one());
    }

    #[test]
    fn evaluate_arity_mismatch() {
        let ctx = f3();
        let f = parse2("X + Y", &ctx);
        assert!(matches!(
            f.evaluate(&[ctx.one()]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn zero_degree_sentinel() {
        let ctx = f3();
        assert_eq!(MultiPoly::zero(&ctx, 2).total_degree(), None);
        assert_eq!(BiPoly::zero(&ctx).total_degree(), None);
        assert_eq!(UniPoly::zero(&ctx).degree(), None);
    }

    #[test]
    fn resultant_examples() {
        let ctx = f2();
        let f = BiPoly::from_multi(&parse2("X^2 + Y", &ctx));
        let g = BiPoly::from_multi(&parse2("X + Y", &ctx));
        // Res_X(X^2 + Y, X + Y) = Y^2 + Y.
        let r = resultant_x(&f, &g).unwrap();
        assert_eq!(r, UniPoly::new(&ctx, vec![ctx.zero(), ctx.one(), ctx.one()]));

        let r2 = resultant_x(&g, &g).unwrap();
        assert!(r2.is_zero());

        // Resultant with a nonzero constant c is c^{deg_X f}.
        let ctx3 = f3();
        let f = BiPoly::from_multi(&parse2("X^2 + Y", &ctx3));
        let c = BiPoly::from_multi(&parse2("2", &ctx3));
        let r3 = resultant_x(&f, &c).unwrap();
        assert_eq!(r3, UniPoly::constant(ctx3.from_int(4)));

        assert!(matches!(
            resultant_x(&BiPoly::zero(&ctx3), &f),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn resultant_vanishes_iff_common_factor_exhaustive_f2() {
        // All monic-in-X f, g of total degree <= 2 over F_2, against a
        // brute-force common-factor search over F_2 and F_4.
        let ctx = f2();
        let polys = enumerate_monic_x(&ctx, 2);
        for f in &polys {
            for g in &polys {
                let r = resultant_x(f, g).unwrap();
                let common = have_common_factor(f, g);
                assert_eq!(
                    r.is_zero(),
                    common,
                    "f = {}, g = {}",
                    f.to_multi(),
                    g.to_multi()
                );
            }
        }
    }

    /// Monic-in-X bivariate polynomials of total degree exactly d: X^d plus
    /// free lower-order terms.
    fn enumerate_monic_x(ctx: &Arc<FieldCtx>, d: u32) -> Vec<BiPoly> {
        let mut exps = Vec::new();
        for i in 0..=d {
            for j in 0..=(d - i) {
                if (i, j) != (d, 0) {
                    exps.push((i, j));
                }
            }
        }
        let q = ctx.q();
        let count = q.pow(exps.len() as u32);
        (0..count)
            .map(|mut idx| {
                let mut f = MultiPoly::zero(ctx, 2);
                f.add_term(vec![d, 0], ctx.one());
                for &(i, j) in &exps {
                    let c = ctx.element(idx % q);
                    idx /= q;
                    f.add_term(vec![i, j], c);
                }
                BiPoly::from_multi(&f)
            })
            .collect()
    }

    /// Brute force: is there a nonconstant h over F_2 or F_4 dividing both?
    fn have_common_factor(f: &BiPoly, g: &BiPoly) -> bool {
        let base = f.ctx();
        for e in 1..=2usize {
            let ext = FieldCtx::new(base.p(), e).unwrap();
            let fm = f.to_multi().embed(&ext).unwrap();
            let gm = g.to_multi().embed(&ext).unwrap();
            let q = ext.q();
            // Candidates of total degree 1 or 2 with unit-normalized lead.
            for d in 1..=2u32 {
                let mut exps = Vec::new();
                for i in 0..=d {
                    for j in 0..=(d - i) {
                        exps.push((i, j));
                    }
                }
                for lead in 0..exps.len() {
                    let (li, lj) = exps[lead];
                    if li + lj != d {
                        continue;
                    }
                    let free: Vec<(u32, u32)> = exps
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != lead)
                        .map(|(_, &e)| e)
                        .collect();
                    let count = q.pow(free.len() as u32);
                    for mut idx in 0..count {
                        let mut h = MultiPoly::zero(&ext, 2);
                        h.add_term(vec![li, lj], ext.one());
                        for &(i, j) in &free {
                            let c = ext.element(idx % q);
                            idx /= q;
                            h.add_term(vec![i, j], c);
                        }
                        if h.total_degree() != Some(d) {
                            continue;
                        }
                        if fm.divisible_by(&h) && gm.divisible_by(&h) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn simple_roots_examples() {
        let ctx = f3();
        // X(X+1) over F_3: simple roots 0 and 2.
        let u = UniPoly::new(&ctx, vec![ctx.zero(), ctx.one(), ctx.one()]);
        let roots = simple_roots(&u).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].0, ctx.zero());
        assert_eq!(roots[1].0, ctx.from_int(2));
        assert_eq!(roots[0].1.q(), 3);

        // X^2 over F_2: squarefull, no simple roots.
        let ctx2 = f2();
        let u = UniPoly::new(&ctx2, vec![ctx2.zero(), ctx2.zero(), ctx2.one()]);
        assert!(simple_roots(&u).unwrap().is_empty());

        // X^2 + 1 over F_3: one orbit representative in F_9.
        let u = UniPoly::new(&ctx, vec![ctx.one(), ctx.zero(), ctx.one()]);
        let roots = simple_roots(&u).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].1.q(), 9);
        let (r, ext) = &roots[0];
        assert_eq!(r.mul(r).add(&ext.one()), ext.zero());
    }

    #[test]
    fn simple_roots_orbit_sizes_cover_squarefree_degree() {
        // For squarefree u the orbit sizes of the simple roots sum to deg u.
        let ctx = f2();
        for idx in 0..16u64 {
            let coeffs: Vec<FieldElem> = (0..4)
                .map(|j| ctx.element((idx >> j) & 1))
                .chain(std::iter::once(ctx.one()))
                .collect();
            let u = UniPoly::new(&ctx, coeffs);
            let du = u.derivative();
            // Squarefree iff gcd(u, u') constant; detect via shared roots.
            let roots = simple_roots(&u).unwrap();
            let total: usize = roots
                .iter()
                .map(|(r, _)| frobenius_orbit(r, &ctx).len())
                .sum();
            let squarefree = (1..=4usize).all(|e| {
                let ext = FieldCtx::new(2, e).unwrap();
                let ue = u.embed(&ext).unwrap();
                let due = du.embed(&ext).unwrap();
                ext.elements()
                    .all(|a| !(ue.eval(&a).is_zero() && due.eval(&a).is_zero()))
            });
            if squarefree {
                assert_eq!(total, 4, "u = {idx:b}");
            }
        }
    }

    #[test]
    fn dehomogenize_examples() {
        let ctx = f3();
        // x0*x1 - x2^2 at index 0 -> x1 - x2^2 (relabeled x0, x1).
        let f = parse_multipoly("x0*x1 + 2*x2^2", &ctx, 3).unwrap();
        let g = f.dehomogenize(0).unwrap();
        assert_eq!(g, parse_multipoly("x0 + 2*x1^2", &ctx, 2).unwrap());
        // Round trip through homogenize.
        assert_eq!(g.homogenize(0, 2), f);

        let cube = parse_multipoly("x0^3", &ctx, 1).unwrap();
        let one = cube.dehomogenize(0).unwrap();
        assert_eq!(one.total_degree(), Some(0));

        let bad = parse_multipoly("x0^2 + x1", &ctx, 2).unwrap();
        assert!(matches!(bad.dehomogenize(0), Err(Error::NotHomogeneous)));
    }

    #[test]
    fn trunc_series_matches_polynomial_truncation_exhaustive() {
        // Multiplication agrees with polynomial multiplication then
        // truncation, for all series of order <= 4 over F_2.
        let ctx = f2();
        let order = 4;
        for a_idx in 0..16u64 {
            for b_idx in 0..16u64 {
                let a: Vec<FieldElem> =
                    (0..order).map(|j| ctx.element((a_idx >> j) & 1)).collect();
                let b: Vec<FieldElem> =
                    (0..order).map(|j| ctx.element((b_idx >> j) & 1)).collect();
                let sa = TruncSeries::new(&ctx, a.clone(), order);
                let sb = TruncSeries::new(&ctx, b.clone(), order);
                let prod = sa.mul(&sb);
                let pa = UniPoly::new(&ctx, a);
                let pb = UniPoly::new(&ctx, b);
                let pp = pa.mul(&pb);
                for r in 0..order {
                    assert_eq!(prod.coeff(r), pp.coeff(r));
                }
                // Commutativity at the stated order.
                assert_eq!(prod, sb.mul(&sa));
            }
        }
    }

    #[test]
    fn trunc_series_inverse() {
        let ctx = f3();
        let s = TruncSeries::new(
            &ctx,
            vec![ctx.from_int(2), ctx.one(), ctx.from_int(2), ctx.zero()],
            4,
        );
        let inv = s.inverse();
        let mut expected = TruncSeries::zero(&ctx, 4);
        expected = expected.add(&TruncSeries::constant(&ctx.one(), 4));
        assert_eq!(s.mul(&inv), expected);
    }

    #[test]
    fn bipoly_division_monic_x() {
        let ctx = f3();
        let f = BiPoly::from_multi(&parse2("X^2 + X*Y + X + Y", &ctx));
        let g = BiPoly::from_multi(&parse2("X + Y", &ctx));
        let (q, r) = f.divrem_monic_x(&g);
        assert!(r.is_zero());
        assert_eq!(q, BiPoly::from_multi(&parse2("X + 1", &ctx)));
    }

    #[test]
    fn multipoly_ring_laws_exhaustive_tiny() {
        // All polynomials over F_2 in one variable of degree <= 1 and a few
        // bivariate samples over F_3.
        let ctx = f2();
        let polys: Vec<MultiPoly> = (0..16u64)
            .map(|idx| {
                let mut f = MultiPoly::zero(&ctx, 2);
                for (bit, (i, j)) in [(0, (0, 0)), (1, (1, 0)), (2, (0, 1)), (3, (1, 1))] {
                    f.add_term(vec![i, j], ctx.element((idx >> bit) & 1));
                }
                f
            })
            .collect();
        for a in &polys {
            for b in &polys {
                assert_eq!(a.add(b), b.add(a));
                assert_eq!(a.mul(b), b.mul(a));
                for c in &polys {
                    assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
                    assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
                }
            }
        }
    }

    #[test]
    fn bipoly_multi_roundtrip() {
        let ctx = f3();
        let f = parse2("X^2 + 2*X*Y + Y^2 + X + 2", &ctx);
        assert_eq!(BiPoly::from_multi(&f).to_multi(), f);
    }
}
