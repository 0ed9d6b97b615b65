//! `maip`: compute and check multi-variable affine index polynomials of
//! tangle diagrams.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use maip_core::diagram::{parse, TangleDiagram};
use maip_core::homology::maip_via_homology;
use maip_core::invariant::{contributions, index_differences, maip, resolve_singular, vassiliev_eval};
use maip_core::suite::{run_on, run_random, Property, SuiteConfig};
use maip_core::tangle_ops::{compose, predict_composed, predict_tensor, tensor, FactorData, GluePlan};
use maip_core::{fixtures, Poly, SymbolId};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "maip", version, about = "Affine index polynomials of virtual tangles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the polynomial of a classical diagram.
    Compute(ComputeArgs),
    /// Expand double points into signed classical resolutions.
    Resolve {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Place two tangles side by side.
    Tensor {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Stack the first tangle on top of the second.
    Compose {
        upper: PathBuf,
        lower: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run a randomized property check.
    Check(CheckArgs),
    /// Shorthand for `check --what prop2`.
    CheckProp2(CheckArgs),
    /// Shorthand for `check --what corollary`.
    CheckCorollary(CheckArgs),
}

#[derive(Args)]
struct ComputeArgs {
    input: PathBuf,
    #[arg(long)]
    json: bool,
    /// Substitute integers for start symbols, e.g. `c1=0,c2=3`.
    #[arg(long, value_name = "ASSIGNMENTS")]
    numeric: Option<String>,
    /// Rename every variable to t1 (needs --numeric for symbolic exponents).
    #[arg(long)]
    collapse: bool,
    /// Use homological weights instead of labels.
    #[arg(long)]
    homology: bool,
    /// Print each crossing's contribution.
    #[arg(long)]
    weights: bool,
    /// Exit with status 1 unless the result equals this polynomial.
    #[arg(long, value_name = "POLY")]
    expect: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    /// Diagram to start from; random diagrams when omitted.
    input: Option<PathBuf>,
    /// Ignore INPUT and generate random diagrams.
    #[arg(long)]
    random: bool,
    #[arg(long, value_name = "PROPERTY")]
    what: Option<Property>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    walk_length: usize,
    #[arg(long, default_value_t = 4)]
    max_components: usize,
    #[arg(long, default_value_t = 12)]
    max_crossings: usize,
}

/// Outcome of a successful run: `true` when the checked property held.
type Verdict = bool;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Verdict> {
    match command {
        Command::Compute(args) => compute_cmd(args),
        Command::Resolve { input, json } => resolve_cmd(&load(&input)?, json),
        Command::Tensor { left, right, json } => tensor_cmd(&load(&left)?, &load(&right)?, json),
        Command::Compose { upper, lower, json } => compose_cmd(&load(&upper)?, &load(&lower)?, json),
        Command::Check(args) => {
            let what = args.what.ok_or_else(|| anyhow!("--what is required"))?;
            check_cmd(what, args)
        }
        Command::CheckProp2(args) => check_cmd(Property::Prop2, args),
        Command::CheckCorollary(args) => check_cmd(Property::Corollary, args),
    }
}

/// Reads text or JSON diagrams. `fixture:NAME` loads a bundled example.
fn load(path: &Path) -> Result<TangleDiagram> {
    if let Some(name) = path.to_str().and_then(|s| s.strip_prefix("fixture:")) {
        return fixtures::by_name(name).ok_or_else(|| anyhow!("no fixture named `{name}`"));
    }
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let d = if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).with_context(|| format!("{}: invalid JSON", path.display()))?;
        TangleDiagram::from_json(&v)
    } else {
        parse(&text)
    };
    d.with_context(|| format!("{}", path.display()))
}

fn parse_assignments(s: &str) -> Result<BTreeMap<SymbolId, i64>> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part.split_once('=').ok_or_else(|| anyhow!("expected NAME=VALUE, got `{part}`"))?;
        let index: u32 = name
            .trim()
            .strip_prefix('c')
            .and_then(|i| i.parse().ok())
            .filter(|i| *i >= 1)
            .ok_or_else(|| anyhow!("bad symbol `{name}` (expected c1, c2, ...)"))?;
        let value: i64 = value.trim().parse().with_context(|| format!("bad value for {name}"))?;
        out.insert(SymbolId::new(index), value);
    }
    Ok(out)
}

fn compute_cmd(args: ComputeArgs) -> Result<Verdict> {
    let d = load(&args.input)?;
    let mut p: Poly = if args.homology { maip_via_homology(&d)? } else { maip(&d)? };
    if let Some(assign) = &args.numeric {
        p = p.substitute_symbols(&parse_assignments(assign)?)?;
    }
    if args.collapse {
        p = p.collapse_variables()?;
    }
    let expected = match &args.expect {
        Some(s) => Some(s.parse::<Poly>().with_context(|| format!("cannot parse expected polynomial `{s}`"))?),
        None => None,
    };
    let ok = expected.as_ref().is_none_or(|e| *e == p);
    if args.json {
        let mut out = json!({
            "polynomial": p.to_string(),
            "terms": p.to_json(),
            "index_differences": index_differences(&d),
        });
        if args.weights {
            out["crossings"] = contributions(&d)
                .values()
                .map(|c| {
                    json!({
                        "id": c.id,
                        "sign": c.sign.value(),
                        "over_label": c.over_label.to_string(),
                        "under_label": c.under_label.to_string(),
                        "weight": c.weight.to_string(),
                        "delta_under": c.delta_under,
                        "contribution": c.polynomial::<num_bigint::BigInt>().to_string(),
                    })
                })
                .collect();
        }
        if let Some(e) = &expected {
            out["expected"] = json!(e.to_string());
            out["matches"] = json!(ok);
        }
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        if args.weights {
            for c in contributions(&d).values() {
                println!(
                    "crossing {}: sign {:+}, over {}, under {}, weight {}, delta {} -> {}",
                    c.id,
                    c.sign.value(),
                    c.over_label,
                    c.under_label,
                    c.weight,
                    c.delta_under,
                    c.polynomial::<num_bigint::BigInt>()
                );
            }
        }
        println!("{p}");
        if let Some(e) = &expected {
            if ok {
                println!("matches expected");
            } else {
                println!("MISMATCH: expected {e}");
            }
        }
    }
    Ok(ok)
}

fn resolve_cmd(d: &TangleDiagram, json: bool) -> Result<Verdict> {
    let terms = resolve_singular(d)?;
    let value: Poly = vassiliev_eval(d)?;
    if json {
        let list: Vec<Value> = terms
            .iter()
            .map(|t| {
                let p: Poly = maip(&t.diagram).expect("resolutions are classical");
                json!({"coefficient": t.coefficient, "diagram": t.diagram.to_json(), "polynomial": p.to_string()})
            })
            .collect();
        let out = json!({"terms": list, "value": value.to_string(), "value_terms": value.to_json()});
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for t in &terms {
            let p: Poly = maip(&t.diagram)?;
            println!("{:+} * [{p}]", t.coefficient);
            for line in t.diagram.to_string().lines() {
                println!("    {line}");
            }
        }
        println!("{value}");
    }
    Ok(true)
}

fn tensor_cmd(a: &TangleDiagram, b: &TangleDiagram, json: bool) -> Result<Verdict> {
    let d = tensor(a, b);
    let direct: Poly = maip(&d)?;
    let predicted = predict_tensor::<num_bigint::BigInt>(&maip(a)?, &maip(b)?, a.components().len());
    report_glued(&d, None, &direct, &predicted, json)
}

fn compose_cmd(upper: &TangleDiagram, lower: &TangleDiagram, json: bool) -> Result<Verdict> {
    let plan = GluePlan::new(upper, lower)?;
    let d = compose(upper, lower)?;
    let direct: Poly = maip(&d)?;
    let predicted: Poly = predict_composed(&FactorData::of(upper)?, &FactorData::of(lower)?, &plan)?;
    report_glued(&d, Some(&plan), &direct, &predicted, json)
}

fn report_glued(
    d: &TangleDiagram,
    plan: Option<&GluePlan>,
    direct: &Poly,
    predicted: &Poly,
    json: bool,
) -> Result<Verdict> {
    let ok = direct == predicted;
    if json {
        let mut out = json!({
            "diagram": d.to_json(),
            "polynomial": direct.to_string(),
            "predicted": predicted.to_string(),
            "matches": ok,
        });
        if let Some(plan) = plan {
            out["chains"] = json!(plan.to_string().lines().collect::<Vec<_>>());
        }
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        if let Some(plan) = plan {
            print!("{plan}");
        }
        print!("{d}");
        println!("polynomial: {direct}");
        println!("predicted:  {predicted}");
        println!("{}", if ok { "prediction matches" } else { "PREDICTION MISMATCH" });
    }
    Ok(ok)
}

fn check_cmd(what: Property, args: CheckArgs) -> Result<Verdict> {
    let cfg = SuiteConfig {
        trials: args.trials,
        seed: args.seed,
        walk_length: args.walk_length,
        max_components: args.max_components,
        max_crossings: args.max_crossings,
    };
    let report = match (&args.input, args.random) {
        (Some(path), false) => run_on(what, &load(path)?, cfg).map_err(|e| anyhow!(e))?,
        (None, false) | (_, true) => {
            if cfg.trials == 0 {
                bail!("--trials must be positive");
            }
            run_random(what, cfg)
        }
    };
    print!("{report}");
    Ok(report.passed())
}
