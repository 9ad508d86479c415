//! Command-line interface.
//!
//! Exit codes: 0 success, 1 failed claims, 2 usage or parameter errors.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{c_uniformity, full_c_sweep, is_permutation, walsh_coefficient,
    write_ddt_csv, CDdtReport, PAryFunction};
use crate::error::{Error, Result};
use crate::families::{instantiate, FamilyId, FamilyInstance};
use crate::gf::{parse_modulus_digits, FieldCtx, FieldElem, FieldSpec};
use crate::harness::{run_suite, SuiteConfig, SuiteId, DEFAULT_SEED, REPORT_SCHEMA};
use crate::solvers::{cubic_roots_char2, linearized_kernel, solve_affine, trinomial_roots,
    LinearizedPoly, TrinomialInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "cdu",
    version,
    about = "Exact c-differential uniformity laboratory over small finite fields"
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Field characteristic (derived from --family when possible).
    #[arg(long, global = true)]
    p: Option<u64>,

    /// Extension degree n (derived from --family and --m when possible).
    #[arg(long, global = true)]
    n: Option<u32>,

    /// Subfield degree m.
    #[arg(long, global = true)]
    m: Option<u32>,

    /// Modulus digits, most significant first ("1011" or "1,0,2,1").
    /// Defaults to the least monic irreducible.
    #[arg(long = "mod", global = true, value_name = "DIGITS")]
    modulus: Option<String>,

    /// Family selector: b1, b2, b3, t4, p5.
    #[arg(long, global = true)]
    family: Option<String>,

    /// Delta, as an element index or as "d:" + digits (most significant
    /// first).
    #[arg(long, global = true)]
    delta: Option<String>,

    /// c, same syntax as --delta.
    #[arg(long, global = true)]
    c: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for sampled grids (reports are reproducible from it).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads; falls back to CDU_WORKERS, then all cores.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Sampling budget for large fields: N deltas and 2N c values per class.
    #[arg(long, global = true, value_name = "N")]
    sample: Option<usize>,

    /// Enforce theorem hypotheses when instantiating families.
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set)]
    strict: bool,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the field context (p, n, q, modulus, generator).
    Field,
    /// Evaluate a family instance at one point.
    Eval {
        /// The point x, element index or "d:" digits.
        x: String,
    },
    /// Dump the family lookup table.
    Lut,
    /// Dump the full c-DDT for one c as CSV (a,b,count).
    Ddt,
    /// Uniformity report for one c.
    Uniformity,
    /// Uniformity reports for every c.
    Sweep,
    /// Walsh spectrum of Tr(F(x)) over all v.
    Walsh,
    /// Run a verification suite ("all" runs every suite). Exits 1 on any
    /// failed claim.
    Verify {
        /// Suite id: T-B1, T-B2, T-B3, T-T4, T-P5, L-WalshVanish,
        /// L-QuadWalsh, L-AtMost4, L-CM04, L-AB, L-Perm, L-CharSum, or all.
        suite: String,
    },
    /// Root-finding helpers.
    Solve {
        #[command(subcommand)]
        what: SolveCmd,
    },
}

#[derive(Subcommand, Debug)]
enum SolveCmd {
    /// Roots of z^{p^k} - a·z - b.
    Trinomial {
        #[arg(long)]
        k: u32,
        #[arg(long = "a")]
        a_t: String,
        #[arg(long = "b")]
        b_t: String,
    },
    /// Roots of u^3 + b1·u + b0 over F_{2^m} (field given by --p 2 --n m).
    Cubic {
        #[arg(long)]
        b1: String,
        #[arg(long)]
        b0: String,
    },
    /// Kernel and image structure of a linearized polynomial
    /// sum c_i X^{p^i}; terms as "i:elem" pairs, comma separated.
    Kernel {
        #[arg(long)]
        coeffs: String,
        /// Optional right-hand side: solve L(x) = rhs.
        #[arg(long)]
        rhs: Option<String>,
    },
}

/// Parses a CLI entry point and runs it, returning the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn parse_elem(ctx: &FieldCtx, s: &str) -> Result<FieldElem> {
    if let Some(d) = s.strip_prefix("d:") {
        let digits = parse_digit_string(ctx.p(), d)?;
        if digits.len() > ctx.n() as usize {
            return Err(Error::Parse(format!("element digits `{d}` exceed degree n")));
        }
        let mut coeffs = digits;
        coeffs.reverse(); // msb-first input to constant-first
        coeffs.resize(ctx.n() as usize, 0);
        return Ok(ctx.from_digits(&coeffs));
    }
    let idx: u64 = s.parse().map_err(|_| Error::Parse(format!("bad element `{s}`")))?;
    ctx.try_elem(idx)
}

fn parse_digit_string(p: u64, s: &str) -> Result<Vec<u64>> {
    let digits: Vec<u64> = if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad digit `{t}`"))))
            .collect::<Result<_>>()?
    } else {
        s.chars()
            .map(|ch| {
                ch.to_digit(10)
                    .map(u64::from)
                    .ok_or_else(|| Error::Parse(format!("bad digit `{ch}`")))
            })
            .collect::<Result<_>>()?
    };
    if digits.iter().any(|&d| d >= p) {
        return Err(Error::Parse("digit not reduced mod p".into()));
    }
    Ok(digits)
}

struct Resolved {
    ctx: Arc<FieldCtx>,
    family: Option<FamilyId>,
    m: Option<u32>,
}

impl Cli {
    /// Derives (p, n) from the family shape when they are not given
    /// explicitly, then builds the field.
    fn resolve_field(&self) -> Result<Resolved> {
        let family = self.family.as_deref().map(FamilyId::parse).transpose()?;
        let (p, n, m) = match family {
            Some(f) => {
                let m = self
                    .m
                    .ok_or_else(|| Error::Parse("--m is required with --family".into()))?;
                let p = match f.fixed_p() {
                    Some(p) => {
                        if self.p.is_some_and(|q| q != p) {
                            return Err(Error::Parse(format!("family {f} requires p = {p}")));
                        }
                        p
                    }
                    None => self.p.ok_or_else(|| Error::Parse("--p is required for p5".into()))?,
                };
                let n = f.degree_multiplier() * m;
                if self.n.is_some_and(|given| given != n) {
                    return Err(Error::Parse(format!("family {f} with m = {m} forces n = {n}")));
                }
                (p, n, Some(m))
            }
            None => {
                let p = self.p.ok_or_else(|| Error::Parse("--p is required".into()))?;
                let n = self.n.ok_or_else(|| Error::Parse("--n is required".into()))?;
                (p, n, self.m)
            }
        };
        let modulus = match &self.modulus {
            Some(s) => parse_modulus_digits(p, n, s)?,
            None => crate::gf::default_modulus(p, n)?,
        };
        let ctx = Arc::new(FieldCtx::new(FieldSpec::new(p, n, modulus))?);
        Ok(Resolved { ctx, family, m })
    }

    fn resolve_instance(&self) -> Result<(Resolved, FamilyInstance)> {
        let resolved = self.resolve_field()?;
        let family = resolved
            .family
            .ok_or_else(|| Error::Parse("--family is required for this command".into()))?;
        let m = resolved.m.expect("family implies m");
        let delta = match &self.delta {
            Some(s) => parse_elem(&resolved.ctx, s)?,
            None => resolved.ctx.zero(),
        };
        let inst = instantiate(family, resolved.ctx.clone(), m, delta, self.strict)?;
        Ok((resolved, inst))
    }

    fn suite_config(&self) -> SuiteConfig {
        let workers = self.workers.or_else(|| {
            std::env::var("CDU_WORKERS").ok().and_then(|v| v.parse().ok())
        });
        SuiteConfig {
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            sample_deltas: self.sample.unwrap_or(20),
            sample_cs: self.sample.map(|s| 2 * s).unwrap_or(40),
            strict: self.strict,
            m_filter: self.m,
            p_filter: self.p,
            workers,
        }
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                let mut f = std::fs::File::create(path)?;
                f.write_all(text.as_bytes())?;
                if !text.ends_with('\n') {
                    f.write_all(b"\n")?;
                }
            }
            None => {
                if text.ends_with('\n') {
                    print!("{text}");
                } else {
                    println!("{text}");
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct UniformityReport {
    schema: &'static str,
    field: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<u64>,
    c: u64,
    max: u64,
    classification: String,
    spectrum: serde_json::Map<String, Value>,
    witnesses: Vec<(u64, u64)>,
}

fn uniformity_json(
    resolved: &Resolved,
    inst: Option<&FamilyInstance>,
    rep: &CDdtReport,
) -> UniformityReport {
    let ctx = &resolved.ctx;
    let mut spectrum = serde_json::Map::new();
    for (entry, count) in &rep.spectrum {
        spectrum.insert(entry.to_string(), json!(count));
    }
    if let Some(row) = &rep.excluded {
        let mut excluded = serde_json::Map::new();
        for (entry, count) in row {
            excluded.insert(entry.to_string(), json!(count));
        }
        spectrum.insert("excluded".into(), Value::Object(excluded));
    }
    UniformityReport {
        schema: REPORT_SCHEMA,
        field: json!({
            "p": ctx.p(),
            "n": ctx.n(),
            "modulus": crate::gf::modulus_string(ctx.p(), &ctx.spec().modulus),
        }),
        family: inst.map(|i| i.id.to_string()),
        m: inst.map(|i| i.m),
        delta: inst.map(|i| i.delta.0),
        c: rep.c.0,
        max: rep.max_entry,
        classification: rep.classification.to_string(),
        spectrum,
        witnesses: rep.witnesses.iter().map(|&(a, b)| (a.0, b.0)).collect(),
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.cmd {
        Cmd::Field => {
            let resolved = cli.resolve_field()?;
            let ctx = &resolved.ctx;
            let text = serde_json::to_string_pretty(&json!({
                "schema": REPORT_SCHEMA,
                "p": ctx.p(),
                "n": ctx.n(),
                "q": ctx.q(),
                "modulus": crate::gf::modulus_string(ctx.p(), &ctx.spec().modulus),
                "spec": ctx.spec().to_flag_string(),
                "generator": ctx.generator().map(|g| g.0),
                "table_backed": ctx.has_tables(),
            }))
            .expect("json");
            cli.emit(&text)?;
            Ok(0)
        }
        Cmd::Eval { x } => {
            let (resolved, inst) = cli.resolve_instance()?;
            let x = parse_elem(&resolved.ctx, x)?;
            let value = inst.evaluate(x);
            let expanded = inst.evaluate_expanded(x).ok().map(|v| v.0);
            let text = serde_json::to_string_pretty(&json!({
                "x": x.0,
                "value": value.0,
                "expanded": expanded,
                "exponent_s": inst.s,
                "outside_hypotheses": inst.outside_hypotheses,
            }))
            .expect("json");
            cli.emit(&text)?;
            Ok(0)
        }
        Cmd::Lut => {
            let (_, inst) = cli.resolve_instance()?;
            let lut = inst.as_lut();
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&json!({
                    "family": inst.id.to_string(),
                    "delta": inst.delta.0,
                    "permutation": is_permutation(&lut),
                    "values": lut.values(),
                }))
                .expect("json"),
                Format::Csv => {
                    let mut s = String::from("x,value\n");
                    for (x, v) in lut.values().iter().enumerate() {
                        s.push_str(&format!("{x},{v}\n"));
                    }
                    s
                }
            };
            cli.emit(&text)?;
            Ok(0)
        }
        Cmd::Ddt => {
            let (resolved, inst) = cli.resolve_instance()?;
            let c = parse_elem(
                &resolved.ctx,
                cli.c.as_deref().ok_or_else(|| Error::Parse("--c is required for ddt".into()))?,
            )?;
            let lut = inst.as_lut();
            let mut buf = Vec::new();
            write_ddt_csv(&lut, c, &mut buf)?;
            cli.emit(std::str::from_utf8(&buf).expect("ascii csv"))?;
            Ok(0)
        }
        Cmd::Uniformity => {
            let (resolved, inst) = cli.resolve_instance()?;
            let c = parse_elem(
                &resolved.ctx,
                cli.c
                    .as_deref()
                    .ok_or_else(|| Error::Parse("--c is required for uniformity".into()))?,
            )?;
            let rep = c_uniformity(&inst.as_lut(), c);
            let report = uniformity_json(&resolved, Some(&inst), &rep);
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("json"),
                Format::Csv => format!(
                    "c,max,classification\n{},{},{}\n",
                    rep.c.0, rep.max_entry, rep.classification
                ),
            };
            cli.emit(&text)?;
            Ok(0)
        }
        Cmd::Sweep => {
            let (resolved, inst) = cli.resolve_instance()?;
            let lut = inst.as_lut();
            let cs: Vec<FieldElem> = resolved.ctx.elements().collect();
            let cfg = cli.suite_config();
            let reps = match cfg.workers {
                Some(w) => rayon::ThreadPoolBuilder::new()
                    .num_threads(w)
                    .build()
                    .map_err(|e| Error::PreconditionViolation(format!("thread pool: {e}")))?
                    .install(|| full_c_sweep(&lut, &cs)),
                None => full_c_sweep(&lut, &cs),
            };
            let text = match cli.format {
                Format::Json => {
                    let rows: Vec<UniformityReport> = reps
                        .iter()
                        .map(|rep| uniformity_json(&resolved, Some(&inst), rep))
                        .collect();
                    serde_json::to_string_pretty(&rows).expect("json")
                }
                Format::Csv => {
                    let mut s = String::from("c,max,classification\n");
                    for rep in &reps {
                        s.push_str(&format!(
                            "{},{},{}\n",
                            rep.c.0, rep.max_entry, rep.classification
                        ));
                    }
                    s
                }
            };
            cli.emit(&text)?;
            Ok(0)
        }
        Cmd::Walsh => {
            let (resolved, inst) = cli.resolve_instance()?;
            let f = PAryFunction::trace_of(&inst.as_lut());
            let rows: Vec<Value> = resolved
                .ctx
                .elements()
                .map(|v| {
                    let w = walsh_coefficient(&f, v);
                    let nsq = w.norm_squared().expect("desk-scale walsh fits i128");
                    json!({
                        "v": v.0,
                        "value": w.to_string(),
                        "norm_squared": nsq.rational_value().map(|x| x.to_string()),
                    })
                })
                .collect();
            cli.emit(&serde_json::to_string_pretty(&rows).expect("json"))?;
            Ok(0)
        }
        Cmd::Verify { suite } => {
            let cfg = cli.suite_config();
            let ids: Vec<SuiteId> = if suite.eq_ignore_ascii_case("all") {
                SuiteId::all().to_vec()
            } else {
                vec![suite.parse()?]
            };
            let mut reports = Vec::new();
            let mut failures = 0usize;
            for id in ids {
                let report = run_suite(id, &cfg)?;
                failures += report.failures;
                eprintln!(
                    "{}: {} claims, {} failures",
                    report.suite, report.total, report.failures
                );
                reports.push(report);
            }
            let text = if reports.len() == 1 {
                reports[0].to_json()
            } else {
                serde_json::to_string_pretty(&reports).expect("json")
            };
            cli.emit(&text)?;
            Ok(if failures > 0 { 1 } else { 0 })
        }
        Cmd::Solve { what } => {
            let resolved = cli.resolve_field()?;
            let ctx = &resolved.ctx;
            let text = match what {
                SolveCmd::Trinomial { k, a_t, b_t } => {
                    let t = TrinomialInstance::new(
                        ctx.clone(),
                        *k,
                        parse_elem(ctx, a_t)?,
                        parse_elem(ctx, b_t)?,
                    );
                    let roots = trinomial_roots(&t);
                    serde_json::to_string_pretty(&json!({
                        "k": k,
                        "g": t.g(),
                        "ell": t.ell(),
                        "roots": roots.iter().map(|r| r.0).collect::<Vec<_>>(),
                    }))
                    .expect("json")
                }
                SolveCmd::Cubic { b1, b0 } => {
                    let sol = cubic_roots_char2(ctx, parse_elem(ctx, b1)?, parse_elem(ctx, b0)?);
                    serde_json::to_string_pretty(&json!({
                        "roots": sol.roots.iter().map(|r| r.0).collect::<Vec<_>>(),
                        "criterion": sol.criterion.map(|c| json!({
                            "trace_condition": c.trace_condition,
                            "cubes_condition": c.cubes_condition,
                            "predicts_three_roots": c.predicts_three_roots,
                        })),
                    }))
                    .expect("json")
                }
                SolveCmd::Kernel { coeffs, rhs } => {
                    let mut terms = Vec::new();
                    for part in coeffs.split(',') {
                        let (i, c) = part
                            .split_once(':')
                            .ok_or_else(|| Error::Parse(format!("bad term `{part}`")))?;
                        let i: u32 =
                            i.parse().map_err(|_| Error::Parse(format!("bad index `{i}`")))?;
                        terms.push((i, parse_elem(ctx, c)?));
                    }
                    let l = LinearizedPoly::new(ctx.clone(), terms);
                    let (basis, dim) = linearized_kernel(&l);
                    let solutions = rhs
                        .as_deref()
                        .map(|r| -> Result<Vec<u64>> {
                            let rhs = parse_elem(ctx, r)?;
                            Ok(solve_affine(&l, rhs).iter().map(|x| x.0).collect())
                        })
                        .transpose()?;
                    serde_json::to_string_pretty(&json!({
                        "kernel_dim": dim,
                        "kernel_basis": basis.iter().map(|b| b.0).collect::<Vec<_>>(),
                        "solutions": solutions,
                    }))
                    .expect("json")
                }
            };
            cli.emit(&text)?;
            Ok(0)
        }
    }
}
