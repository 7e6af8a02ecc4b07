//! `su2mod`: JSON front end for the su2-modular library.
//!
//! Exit codes: 0 on success or a passing verification, 2 when a
//! verification fails, 1 on usage errors.

mod json;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use su2_modular::qseries::{affine_characters, DEFAULT_ORDER};
use su2_modular::superalgebra::level_for;
use su2_modular::{
    ade_classify, affine_character, assemble_super_partition, commutant_basis, conjecture_probe,
    cos_sum, enumerate_invariants, module_inventory, s_commutes, suite, t_commutes,
    verify_prop52, verify_s_transform, verify_t_transform, CosFilter, ModularData,
};

#[derive(Parser, Debug)]
#[command(name = "su2mod", version, about = "Modular data and modular invariants of affine su(2)")]
struct Cli {
    /// Write the JSON document to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Worker threads for the parallel parts of the enumeration.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Run the full verification battery and exit nonzero on any failure.
    #[arg(long)]
    seed_suite: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// S and T data at level k.
    ModularData {
        #[arg(long)]
        level: u32,
    },
    /// Exact cosine sum over labels 1..4rho-1.
    CosSum {
        #[arg(long)]
        rho: i64,
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        #[arg(long, default_value = "all")]
        filter: String,
    },
    /// Rational basis of the S/T commutant.
    Commutant {
        #[arg(long)]
        level: u32,
    },
    /// Enumerate physical modular invariants.
    Invariants {
        #[arg(long)]
        level: u32,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Classify invariant matrices read from --matrix or --input.
    Classify {
        /// Matrix as JSON, e.g. '[[1,0],[0,1]]'.
        #[arg(long)]
        matrix: Option<String>,
        /// JSON file holding a matrix, a list of matrices, or `invariants` output.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// q-expansions of the characters at level k.
    Characters {
        #[arg(long)]
        level: u32,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        /// Only the character of L(k, index).
        #[arg(long)]
        index: Option<u32>,
    },
    /// Exact check of the T-transformation exponents.
    VerifyT {
        #[arg(long)]
        level: u32,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Numeric check of the S-transformation of the characters.
    VerifyS {
        #[arg(long)]
        level: u32,
        /// Point in the upper half-plane as "re,im" (decimals or p/q).
        #[arg(long, default_value = "0,1")]
        tau: String,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Sector inventory and super partition function for k = 4rho-2.
    SuperPartition {
        #[arg(long)]
        rho: usize,
        /// Also evaluate at tau and -1/tau.
        #[arg(long)]
        tau: Option<String>,
        #[arg(long, default_value_t = 300)]
        order: usize,
    },
    /// Exact invariance of I + D, I and D for k = 4rho-2.
    VerifyProp52 {
        #[arg(long)]
        rho: usize,
    },
    /// Numeric S/T action on the span of the sector characters.
    ConjectureProbe {
        #[arg(long)]
        rho: usize,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        /// Stability tolerance is 10^-precision.
        #[arg(long, default_value_t = 10)]
        precision: u32,
    },
}

/// A JSON document and whether the request counts as passing.
struct Outcome {
    doc: Value,
    pass: bool,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, pass: true }
    }

    fn verdict(doc: Value, pass: bool) -> Self {
        Outcome { doc, pass }
    }
}

fn parse_real(s: &str) -> anyhow::Result<f64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().with_context(|| format!("bad numerator in '{s}'"))?;
            let q: f64 = q.trim().parse().with_context(|| format!("bad denominator in '{s}'"))?;
            if q == 0.0 {
                bail!("zero denominator in '{s}'");
            }
            Ok(p / q)
        }
        None => s.parse().with_context(|| format!("bad number '{s}'")),
    }
}

fn parse_tau(s: &str) -> anyhow::Result<Complex64> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("tau must be given as \"re,im\", got '{s}'"))?;
    let tau = Complex64::new(parse_real(re)?, parse_real(im)?);
    if tau.im <= 0.0 {
        bail!("tau must lie in the upper half-plane, got Im(tau) = {}", tau.im);
    }
    Ok(tau)
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    Ok(match command {
        Command::ModularData { level } => {
            let md = ModularData::new(level)?;
            Outcome::ok(json!({
                "level": level,
                "n": md.n(),
                "period": md.period(),
                "labels": md.labels().collect::<Vec<_>>(),
                "tExp": md.t_exponents().iter().map(json::rational).collect::<Vec<_>>(),
                "sHat": md.s_hat_matrix().iter()
                    .map(|row| row.iter().map(json::cyclotomic).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "sNormalizedApprox": md.s_numeric(),
                "sSquaredIsScalar": md.s_squared_is_scalar(),
            }))
        }
        Command::CosSum { rho, delta, filter } => {
            let f: CosFilter = filter.parse()?;
            let value = cos_sum(rho, delta, f)?;
            Outcome::ok(json!({
                "rho": rho,
                "delta": delta,
                "filter": f.as_str(),
                "value": value.to_string(),
            }))
        }
        Command::Commutant { level } => {
            let md = ModularData::new(level)?;
            let basis = commutant_basis(&md);
            Outcome::ok(json!({
                "level": level,
                "n": md.n(),
                "dimension": basis.len(),
                "basis": basis.iter().map(json::matrix).collect::<Vec<_>>(),
            }))
        }
        Command::Invariants { level, bound } => {
            let md = ModularData::new(level)?;
            let e = enumerate_invariants(&md, bound)?;
            let mut pass = true;
            let mut items = Vec::new();
            let mut labels = Vec::new();
            for m in &e.invariants {
                let t = ade_classify(m)?;
                let ti = t_commutes(m, &md)?;
                let si = s_commutes(m, &md)?;
                pass &= ti && si;
                labels.push(t.to_string());
                items.push(json!({
                    "label": t.to_string(),
                    "dynkin": t.dynkin(md.n()),
                    "matrix": json::matrix(m),
                    "T-invariant": ti,
                    "S-invariant": si,
                }));
            }
            Outcome::verdict(
                json!({
                    "level": level,
                    "n": md.n(),
                    "bound": bound,
                    "commutantDimension": e.commutant_dimension,
                    "boundTouched": e.bound_touched,
                    "count": e.invariants.len(),
                    "labels": labels,
                    "invariants": items,
                    "pass": pass,
                }),
                pass,
            )
        }
        Command::Classify { matrix, input } => {
            let text = match (matrix, input) {
                (Some(m), None) => m,
                (None, Some(path)) => fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?,
                _ => bail!("give exactly one of --matrix or --input"),
            };
            let value: Value = serde_json::from_str(&text).context("parsing matrix JSON")?;
            let matrices = json::parse_matrices(&value).map_err(|e| anyhow!(e))?;
            let mut items = Vec::new();
            for m in &matrices {
                let t = ade_classify(m)?;
                items.push(json!({
                    "n": m.n(),
                    "label": t.to_string(),
                    "dynkin": t.dynkin(m.n()),
                    "matrix": json::matrix(m),
                }));
            }
            Outcome::ok(json!({
                "labels": items.iter().map(|i| i["label"].clone()).collect::<Vec<_>>(),
                "classifications": items,
            }))
        }
        Command::Characters { level, order, index } => {
            let chars = match index {
                Some(i) => vec![(i, affine_character(level, i, order)?)],
                None => affine_characters(level, order)?
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| (i as u32, c))
                    .collect(),
            };
            Outcome::ok(json!({
                "level": level,
                "order": order,
                "characters": chars.iter().map(|(i, c)| {
                    let mut v = json::series(c);
                    v["index"] = json!(i);
                    v["label"] = json!(i + 1);
                    v
                }).collect::<Vec<_>>(),
            }))
        }
        Command::VerifyT { level, order } => {
            let r = verify_t_transform(level, order)?;
            Outcome::verdict(
                json!({
                    "level": level,
                    "order": order,
                    "maxResidual": r.max_residual,
                    "labels": r.labels.iter().map(|l| json!({
                        "label": l.label,
                        "h0": json::rational(&l.h0),
                        "tExp": json::rational(&l.t_exp),
                        "pass": l.pass,
                    })).collect::<Vec<_>>(),
                    "pass": r.pass,
                }),
                r.pass,
            )
        }
        Command::VerifyS { level, tau, order, tol } => {
            let tau = parse_tau(&tau)?;
            let r = verify_s_transform(level, tau, order, tol)?;
            Outcome::verdict(
                json!({
                    "level": level,
                    "order": order,
                    "tau": json::complex(r.tau),
                    "tauImage": json::complex(r.tau_image),
                    "tolerance": tol,
                    "residuals": r.residuals,
                    "maxResidual": r.max_residual,
                    "tailBound": r.tail_bound,
                    "pass": r.pass,
                }),
                r.pass,
            )
        }
        Command::SuperPartition { rho, tau, order } => {
            let pf = assemble_super_partition(rho)?;
            let mut doc = json!({
                "rho": rho,
                "level": level_for(rho),
                "n": pf.md.n(),
                "sectors": module_inventory(rho)?.iter().map(json::sector).collect::<Vec<_>>(),
                "matrix": json::matrix(&pf.matrix),
                "T-invariant": pf.t_invariant(),
                "S-invariant": pf.s_invariant(),
            });
            let mut pass = pf.t_invariant() && pf.s_invariant();
            if let Some(tau) = tau {
                let tau = parse_tau(&tau)?;
                let a = pf.evaluate(tau, order)?;
                let b = pf.evaluate(-tau.inv(), order)?;
                doc["evaluation"] = json!({
                    "order": order,
                    "tau": json::complex(tau),
                    "value": json::complex(a),
                    "valueAtImage": json::complex(b),
                    "difference": (a - b).norm(),
                });
                pass &= (a - b).norm() < suite::PARTITION_TOL;
            }
            doc["pass"] = json!(pass);
            Outcome::verdict(doc, pass)
        }
        Command::VerifyProp52 { rho } => {
            let r = verify_prop52(rho)?;
            Outcome::verdict(
                json!({
                    "rho": rho,
                    "level": level_for(rho),
                    "checks": r.checks.iter().map(|c| json!({
                        "name": c.name,
                        "T-invariant": c.t_invariant,
                        "S-invariant": c.s_invariant,
                    })).collect::<Vec<_>>(),
                    "T-invariant": r.t_invariant,
                    "S-invariant": r.s_invariant,
                    "pass": r.pass,
                }),
                r.pass,
            )
        }
        Command::ConjectureProbe { rho, order, precision } => {
            let r = conjecture_probe(rho, order, precision)?;
            let pass = r.stable && r.unitarity_defect < r.tolerance;
            Outcome::verdict(
                json!({
                    "rho": rho,
                    "order": order,
                    "precision": precision,
                    "tolerance": r.tolerance,
                    "basis": r.basis,
                    "spanDimension": r.span_dimension,
                    "stable": r.stable,
                    "stabilityResidual": r.stability_residual,
                    "representationMatrix": json::complex_matrix(&r.representation_matrix),
                    "unitarityDefect": r.unitarity_defect,
                    "tRepresentationMatrix": json::complex_matrix(&r.t_representation_matrix),
                    "tStabilityResidual": r.t_stability_residual,
                    "tUnitarityDefect": r.t_unitarity_defect,
                    "characterResidual": r.character_residual,
                    "pass": pass,
                }),
                pass,
            )
        }
    })
}

fn run_suite() -> Outcome {
    let outcomes = suite::run_all();
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let pass = outcomes.iter().all(|o| o.pass);
    Outcome::verdict(
        json!({
            "criteria": outcomes.iter().map(|o| json!({
                "id": o.id,
                "title": o.title,
                "pass": o.pass,
                "detail": o.detail,
            })).collect::<Vec<_>>(),
            "pass": pass,
        }),
        pass,
    )
}

fn emit(doc: &Value, out: Option<&PathBuf>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(doc)?;
    match out {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let outcome = match (cli.seed_suite, cli.command) {
        (true, None) => Ok(run_suite()),
        (false, Some(command)) => run(command),
        (true, Some(_)) => Err(anyhow!("--seed-suite takes no subcommand")),
        (false, None) => Err(anyhow!("no subcommand given (try --help)")),
    };
    match outcome {
        Ok(o) => {
            if let Err(e) = emit(&o.doc, cli.out.as_ref()) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            ExitCode::from(if o.pass { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
