//! Exact arithmetic in F_p and F_{p^k} at desk scale.
//!
//! A [`FieldCtx`] fixes the characteristic, the extension degree, and a
//! deterministic modulus: the lexicographically smallest monic irreducible of
//! degree k over F_p, comparing coefficient vectors with the constant term
//! most significant. Two contexts built from the same (p, k) are bit-identical.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Trim trailing zero coefficients in place.
fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_deg(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let md = poly_deg(m).expect("modulus must be nonzero");
    debug_assert_eq!(m[md], 1, "modulus must be monic");
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    while let Some(rd) = poly_deg(&r) {
        if rd < md {
            break;
        }
        let lead = r[rd];
        let shift = rd - md;
        for j in 0..=md {
            let sub = (lead * m[j]) % p;
            r[shift + j] = (r[shift + j] + p * p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let bd = poly_deg(b).expect("divisor must be nonzero");
    let blead_inv = mod_inv(b[bd], p);
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    let mut q = vec![0u64; r.len().saturating_sub(bd)];
    while let Some(rd) = poly_deg(&r) {
        if rd < bd {
            break;
        }
        let c = (r[rd] * blead_inv) % p;
        let shift = rd - bd;
        q[shift] = c;
        for j in 0..=bd {
            let sub = (c * b[j]) % p;
            r[shift + j] = (r[shift + j] + p * p - sub) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and small.
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Irreducibility over F_p by trial division against every monic polynomial
/// of degree 1..=k/2.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let k = poly_deg(m).unwrap();
    if k == 0 {
        return false;
    }
    for t in 1..=k / 2 {
        // Monic divisor candidates of degree t, low coefficients free.
        let count = pow_u64(p, t as u32);
        for idx in 0..count {
            let mut cand = vec![0u64; t + 1];
            cand[t] = 1;
            let mut rem = idx;
            for c in cand.iter_mut().take(t) {
                *c = rem % p;
                rem /= p;
            }
            if poly_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn pow_u64(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("field cardinality overflows u64")
}

/// A finite field F_{p^k} with its canonical modulus.
#[derive(Debug, PartialEq, Eq)]
pub struct FieldCtx {
    p: u64,
    k: usize,
    /// Monic irreducible of degree k, constant term first, length k+1.
    modulus: Vec<u64>,
    q: u64,
}

impl FieldCtx {
    /// The canonical context for F_{p^k}. Deterministic: the modulus is the
    /// lexicographically smallest monic irreducible of degree k, comparing
    /// coefficient vectors constant-term first.
    pub fn new(p: u64, k: usize) -> Result<Arc<FieldCtx>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k < 1 {
            return Err(Error::DegreeZero);
        }
        if k == 1 {
            // Degree-1 modulus t.
            return Ok(Arc::new(FieldCtx {
                p,
                k,
                modulus: vec![0, 1],
                q: p,
            }));
        }
        // Enumerate monic candidates in lex order with the constant term as
        // the most significant digit.
        let count = pow_u64(p, k as u32);
        for idx in 0..count {
            let mut cand = vec![0u64; k + 1];
            cand[k] = 1;
            let mut rem = idx;
            for j in (0..k).rev() {
                cand[j] = rem % p;
                rem /= p;
            }
            if is_irreducible(&cand, p) {
                return Ok(Arc::new(FieldCtx {
                    p,
                    k,
                    modulus: cand,
                    q: count,
                }));
            }
        }
        unreachable!("an irreducible of every degree exists over F_p")
    }

    /// Parse a field spec "p", "p^k", or "q=<integer>".
    pub fn from_spec(spec: &str) -> Result<Arc<FieldCtx>> {
        let parse_u64 = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::DomainError(format!("bad field spec '{spec}'")))
        };
        if let Some(rest) = spec.strip_prefix("q=") {
            let q = parse_u64(rest)?;
            let (p, k) = factor_prime_power(q)
                .ok_or_else(|| Error::DomainError(format!("{q} is not a prime power")))?;
            return FieldCtx::new(p, k);
        }
        match spec.split_once('^') {
            Some((pp, kk)) => {
                let k = parse_u64(kk)? as usize;
                FieldCtx::new(parse_u64(pp)?, k)
            }
            None => FieldCtx::new(parse_u64(spec)?, 1),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// "p" or "p^k".
    pub fn spec_string(&self) -> String {
        if self.k == 1 {
            format!("{}", self.p)
        } else {
            format!("{}^{}", self.p, self.k)
        }
    }

    pub fn modulus_string(&self) -> String {
        self.modulus
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn factor_prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut k = 0;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            return (rest == 1).then_some((p, k));
        }
        p += 1;
    }
    Some((q, 1))
}

/// Context-carrying element methods. Elements always hold an Arc to their
/// field; cross-field arithmetic panics rather than coercing.
pub trait CtxOps {
    fn zero(self: &Arc<Self>) -> FieldElem;
    fn one(self: &Arc<Self>) -> FieldElem;
    fn from_int(self: &Arc<Self>, n: i64) -> FieldElem;
    fn element(self: &Arc<Self>, index: u64) -> FieldElem;
    fn elements(self: &Arc<Self>) -> Box<dyn Iterator<Item = FieldElem>>;
    fn generator(self: &Arc<Self>) -> FieldElem;
}

impl CtxOps for FieldCtx {
    fn zero(self: &Arc<Self>) -> FieldElem {
        FieldElem {
            ctx: Arc::clone(self),
            c: vec![0; self.k],
        }
    }

    fn one(self: &Arc<Self>) -> FieldElem {
        self.from_int(1)
    }

    fn from_int(self: &Arc<Self>, n: i64) -> FieldElem {
        let p = self.p as i64;
        let mut c = vec![0; self.k];
        c[0] = n.rem_euclid(p) as u64;
        FieldElem {
            ctx: Arc::clone(self),
            c,
        }
    }

    /// The element at `index` in the deterministic enumeration: the constant
    /// coordinate is the most significant base-p digit, matching the modulus
    /// ordering convention.
    fn element(self: &Arc<Self>, index: u64) -> FieldElem {
        debug_assert!(index < self.q);
        let mut c = vec![0; self.k];
        let mut rem = index;
        for j in 0..self.k {
            c[j] = rem % self.p;
            rem /= self.p;
        }
        c.reverse();
        FieldElem {
            ctx: Arc::clone(self),
            c,
        }
    }

    fn elements(self: &Arc<Self>) -> Box<dyn Iterator<Item = FieldElem>> {
        let ctx = Arc::clone(self);
        Box::new((0..self.q).map(move |i| ctx.element(i)))
    }

    /// The class of t. Zero for k = 1, where the modulus is t itself.
    fn generator(self: &Arc<Self>) -> FieldElem {
        let mut c = vec![0; self.k];
        if self.k > 1 {
            c[1] = 1;
        }
        FieldElem {
            ctx: Arc::clone(self),
            c,
        }
    }
}

/// An element of a [`FieldCtx`], stored as its representative polynomial in
/// the generator, coefficient vector of length k over F_p.
#[derive(Debug, Clone)]
pub struct FieldElem {
    ctx: Arc<FieldCtx>,
    c: Vec<u64>,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.c == other.c
    }
}

impl Eq for FieldElem {}

impl FieldElem {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    fn assert_same_ctx(&self, other: &FieldElem) {
        assert!(
            *self.ctx == *other.ctx,
            "field context mismatch: F_{} vs F_{}",
            self.ctx.spec_string(),
            other.ctx.spec_string()
        );
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        self.assert_same_ctx(other);
        let p = self.ctx.p;
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FieldElem {
            ctx: Arc::clone(&self.ctx),
            c,
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.assert_same_ctx(other);
        let p = self.ctx.p;
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        FieldElem {
            ctx: Arc::clone(&self.ctx),
            c,
        }
    }

    pub fn neg(&self) -> FieldElem {
        let p = self.ctx.p;
        let c = self.c.iter().map(|&a| (p - a) % p).collect();
        FieldElem {
            ctx: Arc::clone(&self.ctx),
            c,
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        self.assert_same_ctx(other);
        let p = self.ctx.p;
        let prod = poly_mul(&self.c, &other.c, p);
        let mut c = poly_rem(&prod, &self.ctx.modulus, p);
        c.resize(self.ctx.k, 0);
        FieldElem {
            ctx: Arc::clone(&self.ctx),
            c,
        }
    }

    /// Multiplicative inverse via extended Euclid on representatives.
    /// None for zero.
    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        let p = self.ctx.p;
        // Extended Euclid on (a, m): maintain r = a*s + m*t, track s only.
        let mut r0: Vec<u64> = self.ctx.modulus.clone();
        let mut r1: Vec<u64> = self.c.clone();
        trim(&mut r1);
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1, p);
            let qs1 = poly_mul(&q, &s1, p);
            let mut s = s0.clone();
            s.resize(s.len().max(qs1.len()), 0);
            for (j, &v) in qs1.iter().enumerate() {
                s[j] = (s[j] + p - v) % p;
            }
            trim(&mut s);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is the gcd, a nonzero constant since the modulus is irreducible.
        let g = r0[0];
        let ginv = mod_inv(g, p);
        let mut c: Vec<u64> = s0.iter().map(|&v| v * ginv % p).collect();
        c.resize(self.ctx.k, 0);
        Some(FieldElem {
            ctx: Arc::clone(&self.ctx),
            c,
        })
    }

    pub fn pow(&self, mut exp: u64) -> FieldElem {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Index in the deterministic element enumeration (inverse of
    /// `FieldCtx::element`).
    pub fn index(&self) -> u64 {
        let mut idx = 0;
        for &d in &self.c {
            idx = idx * self.ctx.p + d;
        }
        idx
    }

    /// Lexicographic comparison with the constant coordinate most
    /// significant; total order on one field's elements.
    pub fn lex_cmp(&self, other: &FieldElem) -> std::cmp::Ordering {
        self.assert_same_ctx(other);
        self.c.cmp(&other.c)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.k == 1 {
            write!(f, "{}", self.c[0])
        } else {
            let parts: Vec<String> = self.c.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

/// An embedding F_{p^a} -> F_{p^b} for a | b, sending the source generator to
/// the lexicographically smallest root of the source modulus in the target.
/// When a = b the image is the generator itself.
#[derive(Debug, Clone)]
pub struct Embedding {
    source: Arc<FieldCtx>,
    target: Arc<FieldCtx>,
    gen_image: FieldElem,
}

impl Embedding {
    pub fn new(source: &Arc<FieldCtx>, target: &Arc<FieldCtx>) -> Result<Embedding> {
        if source.p != target.p || target.k % source.k != 0 {
            return Err(Error::IncompatibleTower {
                p: source.p,
                source_deg: source.k,
                target_deg: target.k,
            });
        }
        if source.k == target.k {
            return Ok(Embedding {
                source: Arc::clone(source),
                target: Arc::clone(target),
                gen_image: target.generator(),
            });
        }
        let gen_image = target
            .elements()
            .find(|cand| eval_fp_poly(&source.modulus, cand).is_zero())
            .expect("source modulus always splits in a compatible extension");
        Ok(Embedding {
            source: Arc::clone(source),
            target: Arc::clone(target),
            gen_image,
        })
    }

    pub fn source(&self) -> &Arc<FieldCtx> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FieldCtx> {
        &self.target
    }

    pub fn gen_image(&self) -> &FieldElem {
        &self.gen_image
    }

    pub fn apply(&self, e: &FieldElem) -> FieldElem {
        assert!(
            *e.ctx == *self.source,
            "element does not belong to the embedding source"
        );
        let mut acc = self.target.zero();
        for &coef in e.c.iter().rev() {
            acc = acc.mul(&self.gen_image);
            acc = acc.add(&self.target.from_int(coef as i64));
        }
        acc
    }
}

/// Evaluate a polynomial with F_p coefficients (constant first) at a point of
/// an arbitrary extension.
fn eval_fp_poly(coeffs: &[u64], at: &FieldElem) -> FieldElem {
    let mut acc = at.ctx().zero();
    for &coef in coeffs.iter().rev() {
        acc = acc.mul(at);
        acc = acc.add(&at.ctx().from_int(coef as i64));
    }
    acc
}

/// Embed `e` into `target`, which must be a compatible extension of its
/// context. Identity when the contexts coincide.
pub fn embed_into(e: &FieldElem, target: &Arc<FieldCtx>) -> Result<FieldElem> {
    if **e.ctx() == **target {
        return Ok(e.clone());
    }
    Ok(Embedding::new(e.ctx(), target)?.apply(e))
}

/// The orbit [e, e^{q0}, e^{q0^2}, ...] under the Frobenius of `base`,
/// stopping before the first repeat.
pub fn frobenius_orbit(e: &FieldElem, base: &Arc<FieldCtx>) -> Vec<FieldElem> {
    let q0 = base.q();
    let mut orbit = vec![e.clone()];
    let mut cur = e.pow(q0);
    while cur != *e {
        orbit.push(cur.clone());
        cur = cur.pow(q0);
    }
    orbit
}
