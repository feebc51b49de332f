mod parse;

// println! panics on a closed pipe (`setdirect ... | head`)
macro_rules! out {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use setdirect::catalog;
use setdirect::central::{
    enumerate_central_decompositions_with, is_central_product, semi_regular_elements,
    CentralDecomposition,
};
use setdirect::input::resolve_group;
use setdirect::oracle::{
    enumerate_setdirect, property_suite_with, EnumerationOptions, SuiteOptions,
};
use setdirect::setdirect::{
    construct_from_system, cyclic_center_factorization, prime_power_factorization, system_shape,
    transversal_factorization, verify_main_theorem, CyclicOutcome, FactorizationSystem,
    TransversalOutcome,
};
use setdirect::{Error, GroupTable, Limits, Result, SetDirectFactorization, Subset};

#[derive(Parser, Debug)]
#[command(
    name = "setdirect",
    version,
    about = "Set-direct factorizations G = X x Y of finite groups"
)]
struct Cli {
    /// Print JSON instead of text (factorize and verify always print JSON).
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, classes, center, central decompositions, semi-regular elements.
    Info {
        /// Catalog name (e.g. D10, Q8oC4, C3xC3xC2) or path to a JSON group file.
        group: String,
    },
    /// Check G = X x Y; exit 0 if certified, 1 if not.
    Verify {
        group: String,
        /// Comma-separated indices or labels.
        #[arg(
            short = 'x',
            long = "X",
            visible_alias = "x",
            allow_hyphen_values = true
        )]
        x: String,
        #[arg(
            short = 'y',
            long = "Y",
            visible_alias = "y",
            allow_hyphen_values = true
        )]
        y: String,
    },
    /// Produce factorizations with one of the constructions or the oracle.
    Factorize(FactorizeArgs),
    /// Run the property suite on one group or on the catalog.
    Suite {
        group: Option<String>,
        #[arg(long)]
        all_catalog: bool,
        #[arg(long, default_value_t = 24)]
        max_order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples per group.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 60)]
        time_budget_secs: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    System,
    Transversal,
    Cyclic,
    PrimePower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

#[derive(clap::Args, Debug)]
struct FactorizeArgs {
    group: String,
    #[arg(long, value_enum)]
    method: Method,
    /// M of the central product: `all`, `center`, `trivial` or generators.
    #[arg(long = "M", visible_alias = "m")]
    m: Option<String>,
    #[arg(long = "N", visible_alias = "n")]
    n: Option<String>,
    /// Generator of Z for the prime-power construction.
    #[arg(long, allow_hyphen_values = true)]
    element: Option<String>,
    /// X0 for the cyclic construction (default: Z).
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    /// Y0 for the cyclic construction (default: {1}).
    #[arg(long, allow_hyphen_values = true)]
    y0: Option<String>,
    /// Constant system: A_i = A for every i.
    #[arg(long = "A", visible_alias = "a", allow_hyphen_values = true)]
    a: Option<String>,
    /// Constant system: B_j = B for every j.
    #[arg(long = "B", visible_alias = "b", allow_hyphen_values = true)]
    b: Option<String>,
    /// JSON file {"A": [[...], ...], "B": [[...], ...]} in group indices.
    #[arg(long)]
    system: Option<PathBuf>,
    /// Oracle: drop pairs with a central singleton side.
    #[arg(long)]
    nontrivial: bool,
    /// Oracle: list every central shift, not only pairs with 1 in both sides.
    #[arg(long)]
    raw: bool,
    #[arg(long, default_value_t = 60)]
    time_budget_secs: u64,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
}

enum Outcome {
    Positive,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Positive) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let limits = Limits::from_env();
    match &cli.command {
        Command::Info { group } => info(&resolve_group(group, &limits)?, group, &limits, cli.json),
        Command::Verify { group, x, y } => {
            let g = resolve_group(group, &limits)?;
            verify(&g, &parse::subset(&g, x)?, &parse::subset(&g, y)?)
        }
        Command::Factorize(args) => factorize(&resolve_group(&args.group, &limits)?, args),
        Command::Suite {
            group,
            all_catalog,
            max_order,
            seed,
            samples,
            time_budget_secs,
        } => {
            let names: Vec<String> = match (group, all_catalog) {
                (Some(name), false) => vec![name.clone()],
                (None, true) => catalog::entries_up_to(*max_order)
                    .into_iter()
                    .map(|e| e.name)
                    .collect(),
                _ => return Err(Error::Parse("give either a group or --all-catalog".into())),
            };
            let opts = SuiteOptions {
                seed: *seed,
                samples: *samples,
                time_budget: Duration::from_secs(*time_budget_secs),
            };
            suite(&names, &limits, &opts, cli.json)
        }
    }
}

fn print_json(value: &impl Serialize) {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn info(g: &GroupTable, name: &str, limits: &Limits, json: bool) -> Result<Outcome> {
    let center = g.center();
    let sizes = g.classes().sizes();
    let decompositions = enumerate_central_decompositions_with(g, limits)?.len();
    let semi = semi_regular_elements(g);
    let prime_power: Vec<usize> = semi
        .iter()
        .filter(|&z| prime_power_factorization(g, z).is_ok())
        .collect();
    if json {
        print_json(&json!({
            "group": name,
            "order": g.order(),
            "class_count": g.class_count(),
            "abelian": g.is_abelian(),
            "center": center,
            "center_labels": parse::labels(g, center),
            "class_sizes": sizes,
            "central_decompositions": decompositions,
            "semi_regular_elements": semi,
            "semi_regular_labels": parse::labels(g, &semi),
            "prime_power_generators": prime_power,
        }));
        return Ok(Outcome::Positive);
    }
    let list = |s: &Subset| {
        if s.is_empty() {
            "none".to_string()
        } else {
            format!("{{{}}}", parse::labels(g, s).join(", "))
        }
    };
    out!("group:                  {name}");
    out!("order:                  {}", g.order());
    out!("conjugacy classes:      {}", g.class_count());
    out!("abelian:                {}", g.is_abelian());
    out!(
        "center:                 {} (size {})",
        list(center),
        center.len()
    );
    out!("class sizes:            {sizes:?}");
    out!("central decompositions: {decompositions}");
    out!("semi-regular elements:  {}", list(&semi));
    let pp = Subset::from_indices(g.order(), prime_power.iter().copied());
    out!("prime-power generators: {}", list(&pp));
    Ok(Outcome::Positive)
}

fn verify(g: &GroupTable, x: &Subset, y: &Subset) -> Result<Outcome> {
    let report = verify_main_theorem(g, x, y)?;
    let certified = report.verdict;
    print_json(&json!({
        "X": x,
        "Y": y,
        "X_labels": parse::labels(g, x),
        "Y_labels": parse::labels(g, y),
        "certified": certified,
        "report": report,
    }));
    Ok(if certified {
        Outcome::Positive
    } else {
        Outcome::Negative
    })
}

fn factorization_json(g: &GroupTable, f: &SetDirectFactorization, report: Value) -> Value {
    json!({
        "X": f.x,
        "Y": f.y,
        "X_labels": parse::labels(g, &f.x),
        "Y_labels": parse::labels(g, &f.y),
        "certified": f.certified,
        "report": report,
    })
}

fn certified_json(g: &GroupTable, f: &SetDirectFactorization) -> Result<Value> {
    let report = verify_main_theorem(g, &f.x, &f.y)?;
    let f = SetDirectFactorization {
        certified: report.verdict,
        ..f.clone()
    };
    Ok(factorization_json(
        g,
        &f,
        serde_json::to_value(&report).expect("serializable"),
    ))
}

fn decomposition(g: &GroupTable, args: &FactorizeArgs) -> Result<CentralDecomposition> {
    let (Some(m), Some(n)) = (&args.m, &args.n) else {
        return Err(Error::Parse("this method needs --M and --N".into()));
    };
    let m = parse::subgroup(g, m, &args.group)?;
    let n = parse::subgroup(g, n, &args.group)?;
    is_central_product(g, &m, &n).map_err(|e| Error::HypothesisViolated(e.to_string()))
}

fn class_signature(g: &GroupTable, s: &Subset) -> String {
    g.classes()
        .classes_in(s)
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("+")
}

fn factorize(g: &GroupTable, args: &FactorizeArgs) -> Result<Outcome> {
    let mut extra = serde_json::Map::new();
    let mut found: Vec<SetDirectFactorization> = Vec::new();
    match args.method {
        Method::Oracle => {
            let opts = EnumerationOptions {
                normalized_only: !args.raw,
                nontrivial_only: args.nontrivial,
                time_budget: Duration::from_secs(args.time_budget_secs),
            };
            let result = enumerate_setdirect(g, &opts)?;
            extra.insert("counts".into(), json!(result.counts));
            extra.insert("elapsed_secs".into(), json!(result.elapsed_secs));
            found = result.factorizations;
        }
        Method::System => {
            let cp = decomposition(g, args)?;
            let shape = system_shape(g, &cp)?;
            let local = |s: &Subset| {
                shape
                    .z
                    .localize(s)
                    .ok_or_else(|| Error::NotContained("system sets must lie in Z".into()))
            };
            let sys = if let Some(path) = &args.system {
                #[derive(serde::Deserialize)]
                struct SystemFile {
                    #[serde(rename = "A")]
                    a: Vec<Vec<usize>>,
                    #[serde(rename = "B")]
                    b: Vec<Vec<usize>>,
                }
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                let file: SystemFile =
                    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
                let convert = |sets: &[Vec<usize>]| -> Result<Vec<Subset>> {
                    sets.iter()
                        .map(|v| local(&g.subset(v.iter().copied())?))
                        .collect()
                };
                FactorizationSystem::new(
                    shape.z.clone(),
                    shape.m.clone(),
                    shape.n.clone(),
                    convert(&file.a)?,
                    convert(&file.b)?,
                )
            } else {
                let (Some(a), Some(b)) = (&args.a, &args.b) else {
                    return Err(Error::Parse(
                        "system needs --A and --B, or --system FILE".into(),
                    ));
                };
                let a = local(&parse::subset(g, a)?)?;
                let b = local(&parse::subset(g, b)?)?;
                FactorizationSystem::constant(&shape, &a, &b)
            };
            extra.insert("system".into(), json!(sys));
            found.push(construct_from_system(g, &cp, &sys, None)?);
        }
        Method::Transversal => {
            let cp = decomposition(g, args)?;
            match transversal_factorization(g, &cp)? {
                TransversalOutcome::Found {
                    factorization,
                    counts,
                } => {
                    extra.insert("class_counts".into(), json!(counts));
                    found.push(factorization);
                }
                TransversalOutcome::NotSemiRegular { orbit, counts } => {
                    extra.insert(
                        "absence".into(),
                        json!({
                            "reason": format!(
                                "Z does not act semi-regularly on the classes in N: k(N) = {} but k(Z)k(N/Z) = {}",
                                counts.k_g,
                                counts.k_z * counts.k_g_mod_z
                            ),
                            "orbit": orbit,
                            "class_counts": counts,
                        }),
                    );
                }
            }
        }
        Method::Cyclic => {
            let cp = decomposition(g, args)?;
            let x0 = match &args.x0 {
                Some(s) => parse::subset(g, s)?,
                None => cp.z.clone(),
            };
            let y0 = match &args.y0 {
                Some(s) => parse::subset(g, s)?,
                None => g.trivial_subgroup(),
            };
            match cyclic_center_factorization(g, &cp, &x0, &y0)? {
                CyclicOutcome::Found { factorization } => found.push(factorization),
                CyclicOutcome::CommutatorObstruction { witness } => {
                    extra.insert(
                        "absence".into(),
                        json!({
                            "reason": "[M,M] and [N,N] share a non-identity element",
                            "witness": witness,
                            "witness_label": g.label(witness),
                        }),
                    );
                }
            }
        }
        Method::PrimePower => {
            let Some(e) = &args.element else {
                return Err(Error::Parse("prime-power needs --element".into()));
            };
            found.push(prime_power_factorization(g, parse::element(g, e)?)?);
        }
    }

    let outcome = if found.is_empty() {
        Outcome::Negative
    } else {
        Outcome::Positive
    };
    if args.emit == Emit::Csv {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        let _ = writeln!(out, "x_size,y_size,normalized,x_classes,y_classes");
        for f in &found {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                f.x.len(),
                f.y.len(),
                f.is_normalized(),
                class_signature(g, &f.x),
                class_signature(g, &f.y)
            );
        }
        return Ok(outcome);
    }
    let list: Vec<Value> = found
        .iter()
        .map(|f| certified_json(g, f))
        .collect::<Result<_>>()?;
    let mut doc = serde_json::Map::new();
    doc.insert("group".into(), json!(args.group));
    doc.insert(
        "method".into(),
        json!(format!("{:?}", args.method).to_lowercase()),
    );
    doc.insert("factorizations".into(), Value::Array(list));
    doc.extend(extra);
    print_json(&Value::Object(doc));
    Ok(outcome)
}

fn suite(names: &[String], limits: &Limits, opts: &SuiteOptions, json: bool) -> Result<Outcome> {
    let results: Vec<(String, Result<(GroupTable, setdirect::oracle::SuiteReport)>)> = names
        .par_iter()
        .map(|name| {
            let r = resolve_group(name, limits).and_then(|g| {
                let report = property_suite_with(&g, opts)?.named(name);
                Ok((g, report))
            });
            (name.clone(), r)
        })
        .collect();
    let failed = results
        .iter()
        .any(|(_, r)| matches!(r, Ok((_, rep)) if !rep.passed));

    if json {
        let docs: Vec<Value> = results
            .iter()
            .map(|(name, r)| match r {
                Ok((_, rep)) => json!(rep),
                Err(e) => json!({"group": name, "error": e.to_string()}),
            })
            .collect();
        print_json(&docs);
    } else {
        out!("{:<14} {:>6} {:>8}  result", "group", "order", "pairs");
        for (name, r) in &results {
            match r {
                Ok((g, rep)) => {
                    let failing: Vec<&str> = rep
                        .checks
                        .iter()
                        .filter(|c| !c.passed)
                        .map(|c| c.name.as_str())
                        .collect();
                    let verdict = if failing.is_empty() {
                        "pass".to_string()
                    } else {
                        format!("FAIL ({})", failing.join(", "))
                    };
                    out!(
                        "{name:<14} {:>6} {:>8}  {verdict}",
                        rep.order,
                        rep.factorizations
                    );
                    if let Some(cd) = rep.check("class_pairs_non_direct") {
                        if cd.checked > 0 {
                            out!(
                                "    all {} non-trivial class pairs are non-direct",
                                cd.checked
                            );
                        }
                    }
                    for (c, d) in &rep.direct_class_pairs {
                        out!(
                            "    direct class pair: {{{}}} x {{{}}}",
                            parse::labels(g, c).join(", "),
                            parse::labels(g, d).join(", ")
                        );
                    }
                    for c in rep.checks.iter().filter(|c| !c.passed) {
                        out!("    {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
                    }
                }
                Err(e) => out!("{name:<14} {:>6} {:>8}  skipped: {e}", "-", "-"),
            }
        }
    }
    Ok(if failed {
        Outcome::Negative
    } else {
        Outcome::Positive
    })
}
