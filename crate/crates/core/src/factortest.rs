//! The linear-system factor test: build the truncated-series linear system
//! for a candidate factor degree m, decide solvability over k(alpha0), and
//! derive the three certificates (linear factor through a marked point,
//! absolute irreducibility, small-degree-factor exclusion).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{CtxOps, FieldElem};
use crate::lift::{lift_simple_root, powers_table, LiftedRoot, PowersTable};
use crate::linalg;
use crate::poly::{simple_roots, BiPoly, UniPoly};

/// The augmented linear system for candidate factor degree m, over k(alpha0):
/// row r encodes a_{m,r} + sum_{mu < m} sum_{eta <= m-mu} a_{mu,r-eta}
/// u_{mu,eta} = 0 for 0 <= r <= ell = d*m.
#[derive(Debug, Clone)]
pub struct LinSys {
    m: usize,
    ell: usize,
    /// Unknown order: (mu, eta) for mu = 0..m, eta = 0..=m-mu.
    unknowns: Vec<(usize, usize)>,
    rows: Vec<Vec<FieldElem>>,
    rhs: Vec<FieldElem>,
}

impl LinSys {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_unknowns(&self) -> usize {
        self.unknowns.len()
    }

    pub fn unknowns(&self) -> &[(usize, usize)] {
        &self.unknowns
    }

    pub fn rows(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[FieldElem] {
        &self.rhs
    }
}

/// Build the system for degree m from a powers table covering at least
/// degree m at order d*m.
pub fn build_linear_system(table: &PowersTable, m: usize) -> Result<LinSys> {
    let d = table.degree();
    let ell = d * m;
    if m > table.max_power() || ell > table.ell_max() {
        return Err(Error::TableTooSmall {
            need_degree: m,
            need_order: ell,
            have_degree: table.max_power(),
            have_order: table.ell_max(),
        });
    }
    let mut unknowns = Vec::new();
    for mu in 0..m {
        for eta in 0..=(m - mu) {
            unknowns.push((mu, eta));
        }
    }
    debug_assert_eq!(unknowns.len(), m * (m + 3) / 2);
    let ctx = table.ctx();
    let mut rows = Vec::with_capacity(ell + 1);
    let mut rhs = Vec::with_capacity(ell + 1);
    for r in 0..=ell {
        let row = unknowns
            .iter()
            .map(|&(mu, eta)| {
                if eta > r {
                    ctx.zero()
                } else {
                    table.a(mu, r - eta)
                }
            })
            .collect();
        rows.push(row);
        rhs.push(table.a(m, r).neg());
    }
    Ok(LinSys {
        m,
        ell,
        unknowns,
        rows,
        rhs,
    })
}

/// Gaussian elimination over k(alpha0). Consistency over the algebraic
/// closure coincides with consistency here, so one test serves both.
pub fn solvable(sys: &LinSys) -> Option<Vec<FieldElem>> {
    linalg::solve(&sys.rows, &sys.rhs)
}

/// Outcome of a factor-test query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// A verified linear factor of f vanishing at (alpha0, 0).
    LinearFactorThrough {
        witness: BiPoly,
        solution: Vec<FieldElem>,
    },
    NoLinearFactorThrough,
    AbsolutelyIrreducible,
    /// The smallest m < d for which the system is solvable.
    Reducible { m: usize },
    /// No factor of degree <= max_degree through (alpha0, 0), and no factor
    /// of degree <= max_degree - 1 at all.
    NoSmallFactor { max_degree: usize },
    /// One-sided: the system was solvable at m; no factor witness is implied.
    SmallFactorPossible { m: usize },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::LinearFactorThrough { .. } => "LinearFactorThrough",
            Certificate::NoLinearFactorThrough => "NoLinearFactorThrough",
            Certificate::AbsolutelyIrreducible => "AbsolutelyIrreducible",
            Certificate::Reducible { .. } => "Reducible",
            Certificate::NoSmallFactor { .. } => "NoSmallFactor",
            Certificate::SmallFactorPossible { .. } => "SmallFactorPossible",
        }
    }
}

/// Total degree d with the degree-d-in-X hypothesis checked.
fn checked_degree(f: &BiPoly) -> Result<(usize, UniPoly)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.total_degree().unwrap();
    let u = f.restrict_y0();
    let got = u.degree().unwrap_or(0);
    if got != d {
        return Err(Error::DegreeDrop {
            expected: d,
            got,
        });
    }
    Ok((d, u))
}

fn check_simple_root(u: &UniPoly, alpha0: &FieldElem) -> Result<()> {
    let ext = Arc::clone(alpha0.ctx());
    let ue = u.embed(&ext)?;
    if !ue.eval(alpha0).is_zero() {
        return Err(Error::NotARoot(alpha0.to_string()));
    }
    if ue.derivative().eval(alpha0).is_zero() {
        return Err(Error::NotSimple(alpha0.to_string()));
    }
    Ok(())
}

fn lift_and_table(
    f: &BiPoly,
    alpha0: &FieldElem,
    d: usize,
    max_power: usize,
) -> Result<(LiftedRoot, PowersTable)> {
    let root = lift_simple_root(f, alpha0, d * max_power)?;
    let table = powers_table(&root, d, max_power)?;
    Ok((root, table))
}

/// Decide whether f has a linear factor over the closure vanishing at
/// (alpha0, 0). A positive answer carries a division-verified witness.
pub fn has_linear_factor_through(f: &BiPoly, alpha0: &FieldElem) -> Result<Certificate> {
    let (d, u) = checked_degree(f)?;
    check_simple_root(&u, alpha0)?;
    let (root, table) = lift_and_table(f, alpha0, d, 1)?;
    let sys = build_linear_system(&table, 1)?;
    let Some(solution) = solvable(&sys) else {
        return Ok(Certificate::NoLinearFactorThrough);
    };
    // Reassemble g(X, Y) = X + u_{0,1} Y + u_{0,0} over k(alpha0).
    let ext = Arc::clone(alpha0.ctx());
    let h0 = UniPoly::new(&ext, vec![solution[0].clone(), solution[1].clone()]);
    let witness = BiPoly::new(&ext, vec![h0, UniPoly::constant(ext.one())]);
    let f_ext = root.f();
    let (_, rem) = f_ext.divrem_monic_x(&witness);
    assert!(
        rem.is_zero(),
        "solvable m=1 system must yield a true divisor"
    );
    assert!(witness.eval(alpha0, &ext.zero()).is_zero());
    Ok(Certificate::LinearFactorThrough { witness, solution })
}

/// Absolute irreducibility via the relaxed test: insolubility of the system
/// for every m = 1..d-1 at one simple root of f(X, 0). The verdict is
/// independent of the chosen root; we use the deterministically first one.
pub fn absolute_irreducibility(f: &BiPoly) -> Result<Certificate> {
    let (d, u) = checked_degree(f)?;
    if d == 1 {
        return Ok(Certificate::AbsolutelyIrreducible);
    }
    let roots = simple_roots(&u)?;
    let Some((alpha0, _)) = roots.into_iter().next() else {
        return Err(Error::Squarefull);
    };
    absolute_irreducibility_at(f, &alpha0, d)
}

/// The same test pinned to a caller-chosen simple root.
pub fn absolute_irreducibility_at(
    f: &BiPoly,
    alpha0: &FieldElem,
    d: usize,
) -> Result<Certificate> {
    let (_, table) = lift_and_table(f, alpha0, d, d - 1)?;
    for m in 1..d {
        let sys = build_linear_system(&table, m)?;
        if solvable(&sys).is_some() {
            return Ok(Certificate::Reducible { m });
        }
    }
    Ok(Certificate::AbsolutelyIrreducible)
}

/// One-sided exclusion of small factors: NoSmallFactor(D) certifies that f
/// has no factor of degree <= D through (alpha0, 0) and none of degree
/// <= D-1 anywhere. SmallFactorPossible proves nothing.
pub fn no_small_factor_certificate(
    f: &BiPoly,
    alpha0: &FieldElem,
    max_degree: usize,
) -> Result<Certificate> {
    let (d, u) = checked_degree(f)?;
    if max_degree < 1 || max_degree >= d {
        return Err(Error::DomainError(format!(
            "factor degree bound {max_degree} must satisfy 1 <= D < d = {d}"
        )));
    }
    check_simple_root(&u, alpha0)?;
    let (_, table) = lift_and_table(f, alpha0, d, max_degree)?;
    for m in 1..=max_degree {
        let sys = build_linear_system(&table, m)?;
        if solvable(&sys).is_some() {
            return Ok(Certificate::SmallFactorPossible { m });
        }
    }
    Ok(Certificate::NoSmallFactor { max_degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldCtx;
    use crate::poly::parse_multipoly;

    fn bi(src: &str, ctx: &Arc<FieldCtx>) -> BiPoly {
        BiPoly::from_multi(&parse_multipoly(src, ctx, 2).unwrap())
    }

    #[test]
    fn system_dimensions() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let f = bi("X^2 + X + Y", &ctx);
        let root = lift_simple_root(&f, &ctx.zero(), 2).unwrap();
        let table = powers_table(&root, 2, 1).unwrap();
        let sys = build_linear_system(&table, 1).unwrap();
        assert_eq!((sys.num_rows(), sys.num_unknowns()), (3, 2));

        // d = 1, m = 1: 2 rows, 2 unknowns, solvable with h0 = Y.
        let ctx3 = FieldCtx::new(3, 1).unwrap();
        let g = bi("X + Y", &ctx3);
        let root = lift_simple_root(&g, &ctx3.zero(), 1).unwrap();
        let table = powers_table(&root, 1, 1).unwrap();
        let sys = build_linear_system(&table, 1).unwrap();
        assert_eq!((sys.num_rows(), sys.num_unknowns()), (2, 2));
        let sol = solvable(&sys).unwrap();
        assert_eq!(sol, vec![ctx3.zero(), ctx3.one()]);

        // d = 3, m = 2: 7 rows, 5 unknowns.
        let h = bi("X^3 + X + Y", &ctx3);
        let u = h.restrict_y0();
        let (alpha0, _) = simple_roots(&u).unwrap().into_iter().next().unwrap();
        let root = lift_simple_root(&h, &alpha0, 6).unwrap();
        let table = powers_table(&root, 3, 2).unwrap();
        let sys = build_linear_system(&table, 2).unwrap();
        assert_eq!((sys.num_rows(), sys.num_unknowns()), (7, 5));

        assert!(matches!(
            build_linear_system(&table, 3),
            Err(Error::TableTooSmall { .. })
        ));
    }

    #[test]
    fn worked_example_insoluble() {
        // f = X^2 + X + Y over F_2 at alpha0 = 0: a[1] = [0,1,1], and row
        // r = 2 demands a_{1,2} = 0, so the system is inconsistent.
        let ctx = FieldCtx::new(2, 1).unwrap();
        let f = bi("X^2 + X + Y", &ctx);
        let root = lift_simple_root(&f, &ctx.zero(), 2).unwrap();
        let table = powers_table(&root, 2, 1).unwrap();
        assert_eq!(table.row(1), &[ctx.zero(), ctx.one(), ctx.one()]);
        let sys = build_linear_system(&table, 1).unwrap();
        assert!(solvable(&sys).is_none());
    }

    #[test]
    fn zero_augmented_column_solvable() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let zero_rhs_sys = LinSys {
            m: 1,
            ell: 2,
            unknowns: vec![(0, 0), (0, 1)],
            rows: vec![
                vec![ctx.one(), ctx.zero()],
                vec![ctx.zero(), ctx.one()],
                vec![ctx.zero(), ctx.zero()],
            ],
            rhs: vec![ctx.zero(), ctx.zero(), ctx.zero()],
        };
        let sol = solvable(&zero_rhs_sys).unwrap();
        assert!(sol.iter().all(FieldElem::is_zero));
    }

    #[test]
    fn linear_factor_through_examples() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        // f = (X + Y)(X + 1) = X^2 + XY + X + Y.
        let f = bi("X^2 + X*Y + X + Y", &ctx);
        match has_linear_factor_through(&f, &ctx.zero()).unwrap() {
            Certificate::LinearFactorThrough { witness, .. } => {
                assert_eq!(witness, bi("X + Y", &ctx));
            }
            other => panic!("expected LinearFactorThrough, got {other:?}"),
        }
        match has_linear_factor_through(&f, &ctx.from_int(2)).unwrap() {
            Certificate::LinearFactorThrough { witness, .. } => {
                assert_eq!(witness, bi("X + 1", &ctx));
            }
            other => panic!("expected LinearFactorThrough, got {other:?}"),
        }

        let ctx2 = FieldCtx::new(2, 1).unwrap();
        let g = bi("X^2 + X + Y", &ctx2);
        assert_eq!(
            has_linear_factor_through(&g, &ctx2.zero()).unwrap(),
            Certificate::NoLinearFactorThrough
        );
    }

    #[test]
    fn linear_factor_preconditions() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        // deg_X f(X,0) < total degree: X^2*Y ... use X*Y + X: f(X,0) = X of
        // degree 1 but total degree 2.
        let f = bi("X*Y + X", &ctx);
        assert!(matches!(
            has_linear_factor_through(&f, &ctx.zero()),
            Err(Error::DegreeDrop { expected: 2, got: 1 })
        ));
        // Non-simple root.
        let g = bi("X^2 + Y", &ctx);
        assert!(matches!(
            has_linear_factor_through(&g, &ctx.zero()),
            Err(Error::NotSimple(_))
        ));
        // Not a root at all.
        let h = bi("X^2 + X + Y", &ctx);
        assert!(matches!(
            has_linear_factor_through(&h, &ctx.one()),
            Err(Error::NotARoot(_))
        ));
    }

    #[test]
    fn absolute_irreducibility_examples() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        assert_eq!(
            absolute_irreducibility(&bi("X^2 + X + Y", &ctx)).unwrap(),
            Certificate::AbsolutelyIrreducible
        );
        assert_eq!(
            absolute_irreducibility(&bi("X^2 + X*Y + X + Y", &ctx)).unwrap(),
            Certificate::Reducible { m: 1 }
        );
        assert_eq!(
            absolute_irreducibility(&bi("X^2 + Y^2", &ctx)).unwrap_err(),
            Error::Squarefull
        );
        // Linear polynomials are absolutely irreducible outright.
        assert_eq!(
            absolute_irreducibility(&bi("X + 2*Y + 1", &ctx)).unwrap(),
            Certificate::AbsolutelyIrreducible
        );
    }

    #[test]
    fn no_small_factor_examples() {
        let ctx2 = FieldCtx::new(2, 1).unwrap();
        let f = bi("X^2 + X + Y", &ctx2);
        assert_eq!(
            no_small_factor_certificate(&f, &ctx2.zero(), 1).unwrap(),
            Certificate::NoSmallFactor { max_degree: 1 }
        );

        let ctx3 = FieldCtx::new(3, 1).unwrap();
        let g = bi("X^2 + X*Y + X + Y", &ctx3);
        assert_eq!(
            no_small_factor_certificate(&g, &ctx3.zero(), 1).unwrap(),
            Certificate::SmallFactorPossible { m: 1 }
        );

        assert!(no_small_factor_certificate(&g, &ctx3.zero(), 2).is_err());
    }

    #[test]
    fn no_small_factor_consistency_with_irreducibility() {
        // NoSmallFactor at D = d-1 must coincide with AbsolutelyIrreducible,
        // over a small exhaustive family.
        let ctx = FieldCtx::new(2, 1).unwrap();
        let q = ctx.q();
        let d = 3u32;
        let mut exps = Vec::new();
        for i in 0..=d {
            for j in 0..=(d - i) {
                if (i, j) != (d, 0) {
                    exps.push((i, j));
                }
            }
        }
        let count = q.pow(exps.len() as u32);
        for mut idx in 0..count {
            let mut m = crate::poly::MultiPoly::zero(&ctx, 2);
            m.add_term(vec![d, 0], ctx.one());
            for &(i, j) in &exps {
                m.add_term(vec![i, j], ctx.element(idx % q));
                idx /= q;
            }
            let f = BiPoly::from_multi(&m);
            if f.total_degree() != Some(d as usize) {
                continue;
            }
            let u = f.restrict_y0();
            if u.degree() != Some(d as usize) {
                continue;
            }
            let roots = simple_roots(&u).unwrap();
            let Some((alpha0, _)) = roots.into_iter().next() else {
                continue;
            };
            let nsf = no_small_factor_certificate(&f, &alpha0, d as usize - 1).unwrap();
            let irr = absolute_irreducibility(&f).unwrap();
            if nsf == (Certificate::NoSmallFactor { max_degree: 2 }) {
                assert_eq!(irr, Certificate::AbsolutelyIrreducible, "f = {}", f.to_multi());
            } else {
                assert!(matches!(irr, Certificate::Reducible { .. }));
            }
        }
    }

    #[test]
    fn verdict_is_root_independent() {
        // The irreducibility verdict agrees across all simple roots.
        let ctx = FieldCtx::new(3, 1).unwrap();
        for src in [
            "X^3 + X + Y",
            "X^3 + 2*X + Y + Y^2",
            "X^3 + X^2*Y + X + Y",
            "X^2 + X*Y + X + Y",
        ] {
            let f = bi(src, &ctx);
            let d = f.total_degree().unwrap();
            let u = f.restrict_y0();
            let verdicts: Vec<&'static str> = simple_roots(&u)
                .unwrap()
                .into_iter()
                .map(|(alpha0, _)| {
                    absolute_irreducibility_at(&f, &alpha0, d).unwrap().kind()
                })
                .collect();
            assert!(verdicts.windows(2).all(|w| w[0] == w[1]), "f = {src}");
        }
    }
}
