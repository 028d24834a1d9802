use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use bertini::bertini::{
    bound_report, census_full, census_z, slice, CensusOptions, CensusReport, SliceParams,
};
use bertini::curves::{bound_allowsing, bound_ns_pt, smooth_point_census, CurveBoundInputs, PlaneCurve};
use bertini::factortest::{
    absolute_irreducibility, has_linear_factor_through, no_small_factor_certificate, Certificate,
};
use bertini::ff::{CtxOps, FieldCtx, FieldElem};
use bertini::oracle;
use bertini::poly::{parse_multipoly, simple_roots, BiPoly, UniPoly};
use bertini::report::Report;
use bertini::{Error, Result};

const EXIT_MATH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(
    name = "bertini",
    about = "Exact factorization tests, plane-slicing censuses, and curve point counts over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Emit the report as a JSON object instead of key = value lines.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Ceiling on enumerated tuples / candidates.
    #[arg(long, global = true, default_value_t = oracle::DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads for censuses (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args)]
struct PolyArgs {
    /// Field spec: a prime p, p^k, or q=N.
    #[arg(long)]
    field: String,
    /// Polynomial source text (variables X, Y or x0, x1, ...).
    #[arg(long)]
    poly: String,
    /// Number of variables.
    #[arg(long, default_value_t = 2)]
    n: usize,
}

#[derive(Args)]
struct AlphaArgs {
    /// Marked root alpha0 as a base-field integer.
    #[arg(long)]
    alpha: Option<i64>,
    /// Minimal polynomial of alpha0 over the base field, constant
    /// coefficient first (e.g. "1,0,1" for 1 + t^2).
    #[arg(long)]
    alpha_minpoly: Option<String>,
    /// Index of the root under the deterministic root ordering.
    #[arg(long, default_value_t = 0)]
    alpha_index: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print every closed-form bound for a given degree and factor cap.
    Bounds {
        #[arg(long)]
        d: u64,
        #[arg(long = "D", default_value_t = 1)]
        cap: u64,
    },
    /// Absolute-irreducibility certificate for a bivariate polynomial.
    Irr {
        #[command(flatten)]
        poly: PolyArgs,
        /// Cross-check the certificate against the brute-force oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Linear factor through (alpha0, 0) certificate.
    Linfac {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long)]
        oracle: bool,
    },
    /// No-factor-of-degree-at-most-D certificate at a marked root.
    Smallfac {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long = "D")]
        cap: usize,
    },
    /// Print one plane slice f_{v,w,z}.
    Slice {
        #[command(flatten)]
        poly: PolyArgs,
        /// v as comma-separated base-field integers, length n.
        #[arg(long)]
        v: String,
        /// w as comma-separated integers, length n-1.
        #[arg(long)]
        w: String,
        /// z as comma-separated integers, length n-1.
        #[arg(long)]
        z: String,
    },
    /// Full (v, w, z) census for the Theorem CM bad sets.
    Census {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long = "D")]
        cap: usize,
        /// Skip the per-tuple oracle cross-check.
        #[arg(long)]
        no_oracle: bool,
    },
    /// z-only census for the linear-factor-through-a-point corollary.
    CensusZ {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        alpha: AlphaArgs,
        /// v0 as comma-separated integers, length n.
        #[arg(long)]
        v0: String,
        /// w0 as comma-separated integers, length n-1.
        #[arg(long)]
        w0: String,
        #[arg(long)]
        no_oracle: bool,
    },
    /// Smooth-point census of a projective plane curve (3 variables).
    CurveScan {
        #[arg(long)]
        field: String,
        #[arg(long)]
        poly: String,
        /// List the curve's points in the report.
        #[arg(long)]
        points: bool,
        /// Also evaluate the smooth-point lower bounds for d' = d with the
        /// worst-case genus.
        #[arg(long)]
        bounds: bool,
    },
}

fn parse_vec(ctx: &Arc<FieldCtx>, src: &str, expected: usize) -> Result<Vec<FieldElem>> {
    let out: Vec<FieldElem> = src
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map(|n| ctx.from_int(n))
                .map_err(|_| Error::Parse {
                    offset: 0,
                    msg: format!("expected an integer, got {s:?}"),
                })
        })
        .collect::<Result<_>>()?;
    if out.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: out.len(),
        });
    }
    Ok(out)
}

fn resolve_alpha(ctx: &Arc<FieldCtx>, args: &AlphaArgs) -> Result<FieldElem> {
    match (&args.alpha, &args.alpha_minpoly) {
        (Some(n), None) => Ok(ctx.from_int(*n)),
        (None, Some(src)) => {
            let coeffs: Vec<FieldElem> = src
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<i64>()
                        .map(|n| ctx.from_int(n))
                        .map_err(|_| Error::Parse {
                            offset: 0,
                            msg: format!("expected an integer, got {s:?}"),
                        })
                })
                .collect::<Result<_>>()?;
            let u = UniPoly::new(ctx, coeffs);
            let roots = simple_roots(&u)?;
            roots
                .into_iter()
                .nth(args.alpha_index)
                .map(|(r, _)| r)
                .ok_or_else(|| Error::DomainError(format!(
                    "root index {} out of range for the given minimal polynomial",
                    args.alpha_index
                )))
        }
        (Some(_), Some(_)) => Err(Error::DomainError(
            "--alpha and --alpha-minpoly are mutually exclusive".into(),
        )),
        (None, None) => Err(Error::DomainError(
            "one of --alpha or --alpha-minpoly is required".into(),
        )),
    }
}

fn field_lines(r: &mut Report, ctx: &Arc<FieldCtx>) {
    r.push("config.field", ctx.spec_string());
    r.push("config.modulus", ctx.modulus_string());
}

fn parse_bipoly(args: &PolyArgs) -> Result<(Arc<FieldCtx>, BiPoly)> {
    let ctx = FieldCtx::from_spec(&args.field)?;
    let f = parse_multipoly(&args.poly, &ctx, 2)?;
    Ok((ctx.clone(), BiPoly::from_multi(&f)))
}

fn certificate_lines(r: &mut Report, cert: &Certificate) {
    r.push("verdict", cert.kind());
    match cert {
        Certificate::LinearFactorThrough { witness, solution } => {
            r.push("witness", witness.to_multi());
            let sol: Vec<String> = solution.iter().map(|c| c.to_string()).collect();
            r.push("solution", sol.join(", "));
        }
        Certificate::Reducible { m } | Certificate::SmallFactorPossible { m } => {
            r.push("factor_degree", m);
        }
        Certificate::NoSmallFactor { max_degree } => {
            r.push("max_degree_excluded", max_degree);
        }
        _ => {}
    }
}

fn census_lines(r: &mut Report, rep: &CensusReport) {
    r.push("n", rep.n);
    r.push("d", rep.d);
    r.push("D", rep.cap);
    r.push("total_tuples", rep.total_tuples);
    r.push("bad_count_algorithm", rep.bad_algorithm);
    match rep.bad_oracle {
        Some(orc) => r.push("bad_count_oracle", orc),
        None => r.push("bad_count_oracle", "skipped"),
    }
    r.push("bound_coefficient", rep.bound_coefficient);
    r.push("bound_value", rep.bound_value);
    r.push("vacuous_bound", rep.vacuous_bound);
    r.push("flagged_precondition_failures", rep.flagged);
    r.push("exec.wall_ms", rep.wall_ms);
}

struct Run {
    report: Report,
    code: u8,
}

fn execute(cli: &Cli) -> Result<Run> {
    let start = Instant::now();
    let mut r = Report::new();
    let mut code = 0u8;
    match &cli.cmd {
        Cmd::Bounds { d, cap } => {
            r.push("config.subcommand", "bounds");
            r.push("config.d", d);
            r.push("config.D", cap);
            let b = bound_report(*d, *cap)?;
            r.push("bound_i", b.bound_i);
            r.push("bound_ii", b.deg_xi);
            r.push("bound_thmB", b.bound_thm_b);
            r.push("ell_max", b.ell_max);
            r.push("deg_upsilon", b.deg_upsilon);
            r.push("deg_psi_per_root", b.deg_psi_per_root);
        }
        Cmd::Irr { poly, oracle: orc } => {
            r.push("config.subcommand", "irr");
            let (ctx, f) = parse_bipoly(poly)?;
            field_lines(&mut r, &ctx);
            r.push("config.poly", f.to_multi());
            let cert = absolute_irreducibility(&f)?;
            certificate_lines(&mut r, &cert);
            if *orc {
                let v = oracle::absolutely_irreducible(&f.to_multi(), cli.budget)?;
                let orc_irr = v.absolutely_irreducible();
                r.push("oracle.absolutely_irreducible", orc_irr);
                if orc_irr != matches!(cert, Certificate::AbsolutelyIrreducible) {
                    r.push("mismatch", "certificate disagrees with oracle");
                    code = EXIT_MISMATCH;
                }
            }
        }
        Cmd::Linfac {
            poly,
            alpha,
            oracle: orc,
        } => {
            r.push("config.subcommand", "linfac");
            let (ctx, f) = parse_bipoly(poly)?;
            field_lines(&mut r, &ctx);
            r.push("config.poly", f.to_multi());
            let alpha0 = resolve_alpha(&ctx, alpha)?;
            r.push("config.alpha", &alpha0);
            let cert = has_linear_factor_through(&f, &alpha0)?;
            certificate_lines(&mut r, &cert);
            if *orc {
                let truth = oracle::bi_has_linear_factor_through(&f, &alpha0, cli.budget)?;
                r.push("oracle.has_linear_factor_through", truth);
                if truth != matches!(cert, Certificate::LinearFactorThrough { .. }) {
                    r.push("mismatch", "certificate disagrees with oracle");
                    code = EXIT_MISMATCH;
                }
            }
        }
        Cmd::Smallfac { poly, alpha, cap } => {
            r.push("config.subcommand", "smallfac");
            let (ctx, f) = parse_bipoly(poly)?;
            field_lines(&mut r, &ctx);
            r.push("config.poly", f.to_multi());
            r.push("config.D", cap);
            let alpha0 = resolve_alpha(&ctx, alpha)?;
            r.push("config.alpha", &alpha0);
            let cert = no_small_factor_certificate(&f, &alpha0, *cap)?;
            certificate_lines(&mut r, &cert);
        }
        Cmd::Slice { poly, v, w, z } => {
            r.push("config.subcommand", "slice");
            let ctx = FieldCtx::from_spec(&poly.field)?;
            field_lines(&mut r, &ctx);
            let f = parse_multipoly(&poly.poly, &ctx, poly.n)?;
            r.push("config.poly", &f);
            let params = SliceParams {
                v: parse_vec(&ctx, v, poly.n)?,
                w: parse_vec(&ctx, w, poly.n - 1)?,
                z: parse_vec(&ctx, z, poly.n - 1)?,
            };
            let g = slice(&f, &params)?;
            r.push("slice", g.to_multi());
        }
        Cmd::Census {
            poly,
            cap,
            no_oracle,
        } => {
            r.push("config.subcommand", "census");
            let ctx = FieldCtx::from_spec(&poly.field)?;
            field_lines(&mut r, &ctx);
            let f = parse_multipoly(&poly.poly, &ctx, poly.n)?;
            r.push("config.poly", &f);
            r.push("config.budget", cli.budget);
            r.push("config.oracle", !*no_oracle);
            let threads = cli.threads.unwrap_or_else(|| {
                std::thread::available_parallelism().map_or(1, |n| n.get())
            });
            r.push("exec.threads", threads);
            let opts = CensusOptions {
                with_oracle: !*no_oracle,
                budget: cli.budget,
                threads,
                log_tuples: false,
                progress: true,
            };
            let rep = census_full(&f, *cap, &opts)?;
            census_lines(&mut r, &rep);
            if rep.bad_oracle.is_some_and(|orc| orc != rep.bad_algorithm) {
                r.push("mismatch", "algorithm census disagrees with oracle");
                code = EXIT_MISMATCH;
            }
        }
        Cmd::CensusZ {
            poly,
            alpha,
            v0,
            w0,
            no_oracle,
        } => {
            r.push("config.subcommand", "census-z");
            let ctx = FieldCtx::from_spec(&poly.field)?;
            field_lines(&mut r, &ctx);
            let f = parse_multipoly(&poly.poly, &ctx, poly.n)?;
            r.push("config.poly", &f);
            let v0 = parse_vec(&ctx, v0, poly.n)?;
            let w0 = parse_vec(&ctx, w0, poly.n - 1)?;
            let alpha0 = resolve_alpha(&ctx, alpha)?;
            r.push("config.alpha", &alpha0);
            r.push("config.oracle", !*no_oracle);
            let opts = CensusOptions {
                with_oracle: !*no_oracle,
                budget: cli.budget,
                threads: 1,
                log_tuples: false,
                progress: true,
            };
            let rep = census_z(&f, &v0, &w0, &alpha0, &opts)?;
            census_lines(&mut r, &rep);
            if rep.bad_oracle.is_some_and(|orc| orc != rep.bad_algorithm) {
                r.push("mismatch", "algorithm census disagrees with oracle");
                code = EXIT_MISMATCH;
            }
        }
        Cmd::CurveScan {
            field,
            poly,
            points,
            bounds,
        } => {
            r.push("config.subcommand", "curve-scan");
            let ctx = FieldCtx::from_spec(field)?;
            field_lines(&mut r, &ctx);
            let f = parse_multipoly(poly, &ctx, 3)?;
            r.push("config.poly", &f);
            let curve = PlaneCurve::new(f)?;
            let census = smooth_point_census(&curve, cli.budget, *points)?;
            r.push("total", census.total);
            r.push("smooth", census.smooth);
            r.push("singular", census.singular);
            if let Some(pts) = &census.points {
                let rendered: Vec<String> = pts
                    .iter()
                    .map(|pt| {
                        pt.iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(":")
                    })
                    .collect();
                r.push("points", rendered.join("; "));
            }
            if *bounds {
                let d = curve.d() as u64;
                let genus = (d.saturating_sub(1)) * (d.saturating_sub(2)) / 2;
                let inputs = CurveBoundInputs {
                    q: ctx.q(),
                    d,
                    d_comp: d,
                    genus,
                };
                r.push("bound_ns_pt", bound_ns_pt(&inputs)?);
                r.push("bound_allowsing", bound_allowsing(ctx.q(), d, genus)?);
            }
        }
    }
    r.push("exec.total_wall_ms", start.elapsed().as_millis());
    Ok(Run { report: r, code })
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::ArityMismatch { .. }
        | Error::DimensionMismatch { .. }
        | Error::NotPrime(_)
        | Error::DegreeZero
        | Error::IncompatibleTower { .. } => EXIT_USAGE,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_MATH,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(run) => {
            let text = if cli.json {
                let mut s = run.report.render_json();
                s.push('\n');
                s
            } else {
                run.report.render()
            };
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(EXIT_USAGE);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(run.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
