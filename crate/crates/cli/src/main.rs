//! Command-line front end: JSON (or TSV) reports over the exact pipeline.

use clap::{Args, Parser, Subcommand, ValueEnum};
use modvals::acceptance;
use modvals::basis::{BasisFamily, LevelConfig};
use modvals::divisor::{divisor_sums, gtfne_residual, product_exponents, serre_quotient};
use modvals::eisenstein::{eis_basis, solve_ef, solve_ef_constants, EfSolution};
use modvals::exactfield::{parse_rational, CycNumber, Rational};
use modvals::forms::{build_form, parse_cusp_orders, BuiltForm};
use modvals::minpoly::{minimal_polynomial, point_count};
use modvals::modcurve::level_data;
use modvals::numeric::{locate_zeros, verify_minpoly, ZeroSearch};
use modvals::qseries::QSeries;
use modvals::{Error, Result};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "modvals",
    version,
    about = "Exact values of modular functions at divisors of modular forms on Γ₀(N)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args)]
struct LevelArgs {
    /// Shipped level number or path to a level config file.
    #[arg(long)]
    level: String,
    /// Number of q-expansion terms; raised automatically when a command needs more.
    #[arg(long, default_value_t = 60)]
    prec: i64,
}

#[derive(Args)]
struct FormArgs {
    /// Form spec such as "eta:3^3/27^3+const:3", or a named form (example6_1, example6_3).
    #[arg(long)]
    form: String,
    /// Weight; inferred from the form when omitted.
    #[arg(long)]
    weight: Option<i64>,
    /// Orders at finite cusps, e.g. "0=0,1/3=1"; override inferred values.
    #[arg(long)]
    cusp_orders: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Echelon basis 𝔣_{N,m} for g < m ≤ m_max.
    Basis {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long, default_value_t = 10)]
        m_max: u64,
    },
    /// Product exponents c(1..count).
    Exponents {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Serre-derivative quotient f_θ.
    Serre {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        form: FormArgs,
    },
    /// Constant terms of the Eisenstein basis at every cusp.
    EisConst {
        #[command(flatten)]
        level: LevelArgs,
    },
    /// The corrector E_f, from a form or from cusp constants directly.
    Ef {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        weight: Option<i64>,
        #[arg(long)]
        cusp_orders: Option<String>,
        /// Constants c_s at the finite cusps, in canonical order, comma separated.
        #[arg(long, conflicts_with = "form", allow_hyphen_values = true)]
        constants: Option<String>,
    },
    /// Divisor sums Σ e_{N,z}·ord_z(f)·𝔣_{N,n}(z) for g < n ≤ N_MAX, and L1.
    Divsum {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        n: u64,
    },
    /// Minimal polynomial of 𝔣_{N,m₀} over the divisor points, lowest degree first.
    Minpoly {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        generator: u64,
        /// Point count to use when L1 is not a nonnegative integer.
        #[arg(long)]
        degree_override: Option<u64>,
    },
    /// Residual of the generating-function identity for forms with cusp-only divisor.
    CheckGtfne {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        form: FormArgs,
    },
    /// Numerical check of a minimal polynomial at approximate zeros of f.
    Verify {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        generator: u64,
        /// Polynomial to test, lowest degree first; the exact one is computed when omitted.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        /// Lowest Im τ searched.
        #[arg(long, default_value_t = 0.05)]
        floor: f64,
        #[arg(long)]
        degree_override: Option<u64>,
    },
    /// Runs the acceptance criteria.
    Selftest,
}

fn rat_str(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat_str).collect())
}

fn cyc(c: &CycNumber) -> Value {
    let s = c.simplify();
    json!({ "conductor": s.conductor(), "coords": rats(s.coords()) })
}

fn series_json(s: &QSeries) -> Value {
    json!({ "denom": s.denom(), "low": s.low(), "prec": s.prec(), "coeffs": rats(s.coeffs()) })
}

/// Coefficients of q^0..q^{n}.
fn coeff_list(s: &QSeries, n: i64) -> Value {
    let upto = n.min(s.prec() - 1);
    Value::Array((0..=upto).map(|e| rat_str(&s.coeff(e))).collect())
}

fn config(level: &LevelArgs) -> Result<LevelConfig> {
    LevelConfig::resolve(&level.level)
}

fn family(cfg: &LevelConfig, prec: i64, m_max: u64) -> Result<BasisFamily> {
    BasisFamily::from_config(cfg, prec, m_max)
}

fn form(
    cfg: &LevelConfig,
    args: &FormArgs,
    prec: i64,
    fam: Option<&BasisFamily>,
) -> Result<BuiltForm> {
    let overrides = match &args.cusp_orders {
        Some(s) => parse_cusp_orders(s, cfg.level)?,
        None => Default::default(),
    };
    build_form(&args.form, cfg.level, prec, args.weight, &overrides, fam)
}

fn form_meta(b: &BuiltForm) -> Value {
    let orders: Map<String, Value> = b
        .input
        .cusp_orders
        .iter()
        .map(|(c, o)| (c.label(), rat_str(o)))
        .collect();
    json!({
        "form": b.input.note,
        "weight": b.input.weight,
        "h": b.input.h(),
        "cusp_orders": orders,
        "assumptions": b.assumptions,
    })
}

fn ef_json(ef: &EfSolution, prec: i64) -> Result<Value> {
    let basis: Vec<Value> = ef.basis.iter().map(|b| Value::String(b.label())).collect();
    let c: Map<String, Value> = ef
        .cusps
        .iter()
        .zip(&ef.c)
        .map(|(s, x)| (s.label(), rat_str(x)))
        .collect();
    Ok(json!({
        "basis": basis,
        "c": c,
        "alphas": ef.alphas.iter().map(cyc).collect::<Vec<_>>(),
        "Ef": coeff_list(&ef.series(prec)?, prec - 1),
    }))
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

fn run(cli: &Cli) -> Result<(Value, bool)> {
    match &cli.command {
        Command::Basis { level, m_max } => {
            let cfg = config(level)?;
            let fam = family(&cfg, level.prec, *m_max)?;
            let mut els = Map::new();
            for m in fam.orders() {
                els.insert(m.to_string(), series_json(&fam.element(m)?));
            }
            Ok((
                json!({ "level": fam.level(), "genus": fam.genus(), "elements": els }),
                true,
            ))
        }
        Command::Exponents {
            level,
            form: fa,
            count,
        } => {
            let cfg = config(level)?;
            let prec = level.prec.max(*count as i64 + 10);
            let b = form(&cfg, fa, prec, None)?;
            let c = product_exponents(&b.input, *count)?;
            Ok((merge(form_meta(&b), json!({ "c": rats(&c) })), true))
        }
        Command::Serre { level, form: fa } => {
            let cfg = config(level)?;
            let b = form(&cfg, fa, level.prec, None)?;
            let s = serre_quotient(&b.input, b.input.known_terms() + 1)?;
            Ok((
                merge(form_meta(&b), json!({ "ftheta": series_json(&s) })),
                true,
            ))
        }
        Command::EisConst { level } => {
            let n = config(level)?.level;
            let cusps = level_data(n).cusps;
            let mut out = Vec::new();
            for el in eis_basis(n)? {
                let mut row = Map::new();
                for s in &cusps {
                    row.insert(s.label(), cyc(&el.constant_at(s)?));
                }
                out.push(json!({ "element": el.label(), "constants": row }));
            }
            Ok((json!({ "level": n, "basis": out }), true))
        }
        Command::Ef {
            level,
            form: f,
            weight,
            cusp_orders,
            constants,
        } => {
            let cfg = config(level)?;
            let ef = match (f, constants) {
                (_, Some(cs)) => {
                    let c = cs
                        .split(',')
                        .map(|x| parse_rational(x.trim()))
                        .collect::<Result<Vec<_>>>()?;
                    solve_ef_constants(cfg.level, &c)?
                }
                (Some(spec), None) => {
                    let fa = FormArgs {
                        form: spec.clone(),
                        weight: *weight,
                        cusp_orders: cusp_orders.clone(),
                    };
                    let b = form(&cfg, &fa, level.prec, None)?;
                    solve_ef(cfg.level, b.input.weight, &b.input.cusp_orders)?
                }
                (None, None) => {
                    return Err(Error::InvalidArgument("give --form or --constants".into()))
                }
            };
            Ok((ef_json(&ef, level.prec.min(21))?, true))
        }
        Command::Divsum { level, form: fa, n } => {
            let cfg = config(level)?;
            let prec = level.prec.max(2 * *n as i64 + 10);
            let fam = family(&cfg, prec, (*n).max(cfg.genus_hint.unwrap_or(0) + 1))?;
            let b = form(&cfg, fa, prec, Some(&fam))?;
            let r = divisor_sums(&b.input, &fam, *n)?;
            let sums: Map<String, Value> = r
                .sums
                .iter()
                .map(|(k, v)| (k.to_string(), rat_str(v)))
                .collect();
            let upto = *n as i64;
            let body = json!({
                "level": r.level,
                "c": rats(&r.c),
                "ftheta": coeff_list(&r.f_theta, upto),
                "alphas": r.ef.alphas.iter().map(cyc).collect::<Vec<_>>(),
                "Ef": coeff_list(&r.e_f, upto),
                "sums": sums,
                "L1": rat_str(&r.l1),
            });
            Ok((merge(form_meta(&b), body), true))
        }
        Command::Minpoly {
            level,
            form: fa,
            generator,
            degree_override,
        } => {
            let cfg = config(level)?;
            let (b, fam) = minpoly_setup(&cfg, level, fa, *generator, *degree_override)?;
            let r = minimal_polynomial(&b.input, &fam, *generator, *degree_override)?;
            let body = json!({
                "level": cfg.level,
                "generator": generator,
                "L1": rat_str(&r.report.l1),
                "power_sums": rats(&r.power_sums),
                "coefficients": rats(&r.coeffs),
            });
            Ok((merge(form_meta(&b), body), true))
        }
        Command::CheckGtfne { level, form: fa } => {
            let cfg = config(level)?;
            let prec = level.prec;
            let fam = family(
                &cfg,
                10.max(cfg.genus_hint.unwrap_or(0) as i64 + 2),
                (prec - 1) as u64,
            )?;
            let b = form(&cfg, fa, prec + 10, None)?;
            let r = gtfne_residual(&b.input, &fam, prec)?;
            let zero = r.is_zero();
            Ok((
                merge(
                    form_meta(&b),
                    json!({ "prec": prec, "zero": zero, "residual": series_json(&r) }),
                ),
                zero,
            ))
        }
        Command::Verify {
            level,
            form: fa,
            generator,
            poly,
            tol,
            floor,
            degree_override,
        } => {
            let cfg = config(level)?;
            let (b, fam) = minpoly_setup(&cfg, level, fa, *generator, *degree_override)?;
            let p = match poly {
                Some(s) => s
                    .split(',')
                    .map(|x| parse_rational(x.trim()))
                    .collect::<Result<Vec<_>>>()?,
                None => minimal_polynomial(&b.input, &fam, *generator, *degree_override)?.coeffs,
            };
            let count = p.len() - 1;
            let opts = ZeroSearch {
                floor: *floor,
                tol: 1e-8,
                ..Default::default()
            };
            let z = locate_zeros(&b.input.series, cfg.level, count, &opts)?;
            let check = verify_minpoly(&z, &fam.element(*generator)?, &p, *tol)?;
            let pts: Vec<Value> = z.iter().map(|p| json!([p.re, p.im])).collect();
            let vals: Vec<Value> = check.values.iter().map(|v| json!([v.re, v.im])).collect();
            let body = json!({
                "polynomial": rats(&p),
                "zeros": pts,
                "values": vals,
                "residuals": check.residuals,
                "max_residual": check.max_residual,
                "tol": tol,
                "ok": check.ok,
            });
            Ok((merge(form_meta(&b), body), check.ok))
        }
        Command::Selftest => {
            let mut lines = Vec::new();
            let mut ok = true;
            for c in acceptance::run_all() {
                eprintln!("{}", c.report());
                ok &= !c.blocking || c.pass();
                lines.push(json!({ "criterion": c.id, "title": c.title, "pass": c.pass(), "blocking": c.blocking }));
            }
            Ok((json!({ "criteria": lines, "ok": ok }), ok))
        }
    }
}

/// Builds the form and a basis deep enough for power sums up to degree L1.
fn minpoly_setup(
    cfg: &LevelConfig,
    level: &LevelArgs,
    fa: &FormArgs,
    m0: u64,
    degree_override: Option<u64>,
) -> Result<(BuiltForm, BasisFamily)> {
    let g = family(cfg, 10, 1)?.genus();
    let probe_prec = level.prec.max(2 * (g + 1) as i64 + 10);
    let probe_fam = family(cfg, probe_prec, g + 1)?;
    let probe = form(cfg, fa, probe_prec, Some(&probe_fam))?;
    let l = point_count(
        &divisor_sums(&probe.input, &probe_fam, g + 1)?,
        degree_override,
    )?;
    let need = (l * m0).max(g + 1);
    let prec = level.prec.max(2 * need as i64 + 10);
    let fam = family(cfg, prec, need)?;
    let b = form(cfg, fa, prec, Some(&fam))?;
    Ok((b, fam))
}

fn tsv(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                tsv(
                    x,
                    &if path.is_empty() {
                        k.clone()
                    } else {
                        format!("{path}.{k}")
                    },
                    out,
                );
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                tsv(x, &format!("{path}.{i}"), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{path}\t{s}\n")),
        other => out.push_str(&format!("{path}\t{other}\n")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((v, ok)) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
                Format::Tsv => {
                    let mut s = String::new();
                    tsv(&v, "", &mut s);
                    s
                }
            };
            // a closed pipe downstream is not an error
            let _ = std::io::stdout().write_all(text.as_bytes());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
