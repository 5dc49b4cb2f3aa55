//! `pv-lab`: gradings, components, classification and model checks for
//! prehomogeneous spaces of parabolic type.

mod output;

use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pv_lab::classify::{classify, sweep, ClassifyError, Mode};
use pv_lab::diagram::{parse_diagram, render_ascii, subdiagram, DiagramError, WeightedDiagram};
use pv_lab::grading::{components, compute_grading};
use pv_lab::models::{parse_model, verify_model, CATALOG};
use pv_lab::pvcore::{decompose_filtration, parabolic_pv, FiltrationError, FiltrationReport};
use pv_lab::rootsys::{Family, SimpleType};

use output::{classification_table, classification_text, model_markdown, model_text, Format, Outcome};

const SEED_ENV: &str = "PV_LAB_SEED";

#[derive(Debug, Parser)]
#[command(name = "pv-lab", version)]
#[command(about = "Exact computations on prehomogeneous vector spaces of parabolic type")]
struct Cli {
    /// Emit a JSON report document.
    #[arg(long, global = true, conflicts_with = "markdown")]
    json: bool,

    /// Emit markdown tables.
    #[arg(long, global = true)]
    markdown: bool,

    /// Print nothing on success; the exit code still reports the outcome.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SeedArg {
    /// Seed for generic-point sampling (default: $PV_LAB_SEED, else 0).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a diagram and summarize its level-one components.
    Describe { diagram: String },

    /// Grading element and the dimension of every level.
    Grade { diagram: String },

    /// Irreducible components of level one with their highest weights.
    Components { diagram: String },

    /// The subdiagram attached to a subset of circled nodes.
    Subdiagram {
        diagram: String,
        /// Comma-separated circled nodes, e.g. 2,8.
        #[arg(long)]
        gamma: String,
    },

    /// Decide regularity and Q-irreducibility of one diagram.
    Classify {
        diagram: String,
        /// pattern, oracle or both.
        #[arg(long, default_value = "both")]
        mode: String,
        #[command(flatten)]
        seed: SeedArg,
    },

    /// Classify every diagram of the given types with at least two circled nodes.
    Enumerate {
        /// Comma-separated families (A,B,C,D,...) or exact types (E6,...).
        #[arg(long, default_value = "A,B,C,D,E6")]
        types: String,
        /// Largest rank for family entries.
        #[arg(long, default_value_t = 7)]
        max_rank: usize,
        #[arg(long, default_value = "both")]
        mode: String,
        /// Also classify diagrams with a single circled node.
        #[arg(long)]
        include_irreducible: bool,
        #[command(flatten)]
        seed: SeedArg,
    },

    /// Recompute the certificates of a matrix model, e.g. skew_chain:p=4,r=5.
    VerifyModel {
        model: String,
        #[command(flatten)]
        seed: SeedArg,
    },

    /// Filtration by regular, completely Q-reducible stages of a diagram or model.
    Decompose {
        target: String,
        #[command(flatten)]
        seed: SeedArg,
    },
}

enum CliError {
    Usage(String),
    Diagram { input: String, error: DiagramError },
}

impl CliError {
    fn report(&self) -> String {
        match self {
            CliError::Usage(msg) => format!("error: {msg}\n"),
            CliError::Diagram { input, error } => {
                let mut out = format!("error: {error}\n");
                if let DiagramError::Parse { column, .. } = error {
                    out.push_str(&format!("  {input}\n  {}^\n", " ".repeat(column.saturating_sub(1))));
                }
                out
            }
        }
    }
}

fn diagram_arg(s: &str) -> Result<WeightedDiagram, CliError> {
    parse_diagram(s).map_err(|error| CliError::Diagram { input: s.to_string(), error })
}

fn mode_arg(s: &str) -> Result<Mode, CliError> {
    s.parse().map_err(|e: ClassifyError| CliError::Usage(e.to_string()))
}

fn seed_of(arg: &SeedArg) -> Result<u64, CliError> {
    if let Some(s) = arg.seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV}='{v}' is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn parse_types(spec: &str, max_rank: usize) -> Result<Vec<SimpleType>, CliError> {
    let mut out = Vec::new();
    for tok in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let mut chars = tok.chars();
        let letter = chars.next().unwrap();
        let family = Family::from_letter(letter.to_ascii_uppercase())
            .ok_or_else(|| CliError::Usage(format!("unknown type '{tok}'")))?;
        if chars.as_str().is_empty() {
            out.extend(SimpleType::up_to_rank(family, max_rank));
        } else {
            out.push(tok.parse().map_err(|e: String| CliError::Usage(e))?);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage(format!("no types selected by '{spec}'")));
    }
    let mut seen = BTreeSet::new();
    out.retain(|t| seen.insert(t.to_string()));
    Ok(out)
}

fn describe(input: &str) -> Result<Outcome, CliError> {
    let d = diagram_arg(input)?;
    let g = compute_grading(&d);
    let comps = components(&d);
    let mut text = format!("{}  (dim g = {})\n{}\n", d, d.simple_type().dimension(), render_ascii(&d));
    let list = |s: &BTreeSet<usize>| s.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    text.push_str(&format!("circled: {}   uncircled: {}\n", list(d.circled()), list(&d.theta())));
    text.push_str(&format!("dim l = {}, dim d_1 = {}\n", g.level_dim(0), g.level_dim(1)));
    for c in &comps {
        text.push_str(&format!("  V_{}: dim {}, adjacent uncircled {{{}}}\n", c.alpha, c.dim, list(&c.j_alpha)));
    }
    Ok(Outcome {
        command: "describe",
        inputs: json!({ "diagram": d.compact() }),
        results: json!({
            "diagram": d.compact(),
            "picture": render_ascii(&d),
            "dim_g": d.simple_type().dimension(),
            "dim_levi": g.level_dim(0),
            "dim_level_one": g.level_dim(1),
            "components": to_value(&comps),
        }),
        text,
        markdown: None,
        code: 0,
    })
}

fn grade(input: &str) -> Result<Outcome, CliError> {
    let d = diagram_arg(input)?;
    let g = compute_grading(&d);
    let h: Vec<String> = g.h_theta.iter().map(|x| x.to_string()).collect();
    let mut text = format!("{}\nH = ({}) in simple coroots\n", d, h.join(", "));
    for (p, n) in &g.dim_by_level {
        text.push_str(&format!("  d_{p}: {n}\n"));
    }
    text.push_str(&format!("total {} = dim g {}\n", g.total_dim(), d.simple_type().dimension()));
    let mut markdown = format!("## {d}\n\n| level | dim |\n|---|---|\n");
    for (p, n) in &g.dim_by_level {
        markdown.push_str(&format!("| {p} | {n} |\n"));
    }
    let levels: serde_json::Map<String, Value> =
        g.dim_by_level.iter().map(|(p, n)| (p.to_string(), json!(n))).collect();
    Ok(Outcome {
        command: "grade",
        inputs: json!({ "diagram": d.compact() }),
        results: json!({
            "diagram": d.compact(),
            "h_theta": h,
            "dim_by_level": levels,
            "total_dim": g.total_dim(),
        }),
        text,
        markdown: Some(markdown),
        code: 0,
    })
}

fn components_cmd(input: &str) -> Result<Outcome, CliError> {
    let d = diagram_arg(input)?;
    let comps = components(&d);
    let mut text = format!("{d}\n");
    let mut markdown = format!("## {d}\n\n| circled | dim | highest weight |\n|---|---|---|\n");
    for c in &comps {
        let hw: Vec<String> = c.highest_weight.iter().map(|(b, v)| format!("c{b}={v}")).collect();
        let hw = if hw.is_empty() { "trivial".to_string() } else { hw.join(", ") };
        text.push_str(&format!("  V_{}: dim {}, highest weight {}\n", c.alpha, c.dim, hw));
        markdown.push_str(&format!("| {} | {} | {} |\n", c.alpha, c.dim, hw));
    }
    Ok(Outcome {
        command: "components",
        inputs: json!({ "diagram": d.compact() }),
        results: to_value(&comps),
        text,
        markdown: Some(markdown),
        code: 0,
    })
}

fn subdiagram_cmd(input: &str, gamma: &str) -> Result<Outcome, CliError> {
    let d = diagram_arg(input)?;
    let nodes = gamma
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| CliError::Usage(format!("bad node '{t}' in --gamma"))))
        .collect::<Result<BTreeSet<usize>, _>>()?;
    let sub = subdiagram(&d, &nodes).map_err(|e| CliError::Usage(e.to_string()))?;
    let list: Vec<String> = nodes.iter().map(usize::to_string).collect();
    Ok(Outcome {
        command: "subdiagram",
        inputs: json!({ "diagram": d.compact(), "gamma": list.join(",") }),
        results: to_value(&sub),
        text: sub.render(),
        markdown: None,
        code: 0,
    })
}

fn classify_cmd(input: &str, mode: &str, seed: &SeedArg) -> Result<Outcome, CliError> {
    let d = diagram_arg(input)?;
    let mode = mode_arg(mode)?;
    let seed = seed_of(seed)?;
    let inputs = json!({ "diagram": d.compact(), "mode": mode.to_string(), "seed": seed });
    let (report, mismatch) = match classify(&d, mode, seed) {
        Ok(r) => (r, None),
        Err(ClassifyError::Mismatch { pattern, oracle, report, .. }) => (*report, Some((pattern, oracle))),
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let mut text = classification_text(&report);
    let mut results = to_value(&report);
    if let Some((pattern, oracle)) = mismatch {
        text.push_str(&format!("MISMATCH: pattern says {pattern}, oracle says {oracle}\n"));
        results = json!({ "mismatch": { "pattern": pattern, "oracle": oracle }, "report": results });
    }
    let mismatches: Vec<String> = mismatch.iter().map(|_| d.compact()).collect();
    Ok(Outcome {
        command: "classify",
        inputs,
        results,
        text,
        markdown: Some(classification_table(&[&report], &mismatches)),
        code: if mismatch.is_some() { 2 } else { 0 },
    })
}

fn enumerate_cmd(
    types: &str,
    max_rank: usize,
    mode: &str,
    include_irreducible: bool,
    seed: &SeedArg,
) -> Result<Outcome, CliError> {
    let tys = parse_types(types, max_rank)?;
    let mode = mode_arg(mode)?;
    let seed = seed_of(seed)?;
    let s = sweep(&tys, mode, seed, include_irreducible);
    let names: Vec<String> = tys.iter().map(ToString::to_string).collect();
    let hits = s.q_irreducible();
    let mut text = format!(
        "{} diagrams over {} (mode {mode}, seed {seed})\nQ-irreducible ({}): {}\n",
        s.reports.len(),
        names.join(","),
        hits.len(),
        hits.join(" ")
    );
    if s.mismatches.is_empty() {
        text.push_str("pattern and oracle agree\n");
    } else {
        text.push_str(&format!("MISMATCHES ({}): {}\n", s.mismatches.len(), s.mismatches.join(" ")));
    }
    let listed: Vec<_> = s
        .reports
        .iter()
        .filter(|r| r.verdicts.q_irreducible || s.mismatches.contains(&r.diagram.compact()))
        .collect();
    let markdown = format!(
        "## Q-irreducible diagrams ({}, mode {mode}, seed {seed})\n\n{}",
        names.join(","),
        classification_table(&listed, &s.mismatches)
    );
    Ok(Outcome {
        command: "enumerate",
        inputs: json!({
            "types": names,
            "max_rank": max_rank,
            "mode": mode.to_string(),
            "include_irreducible": include_irreducible,
            "seed": seed,
        }),
        results: json!({
            "count": s.reports.len(),
            "q_irreducible": hits,
            "mismatches": s.mismatches,
            "reports": to_value(&s.reports),
        }),
        text,
        markdown: Some(markdown),
        code: if s.mismatches.is_empty() { 0 } else { 2 },
    })
}

fn verify_model_cmd(name: &str, seed: &SeedArg) -> Result<Outcome, CliError> {
    let spec = parse_model(name).map_err(|e| CliError::Usage(e.to_string()))?;
    let seed = seed_of(seed)?;
    let report = verify_model(&spec, seed);
    Ok(Outcome {
        command: "verify-model",
        inputs: json!({ "model": spec.name, "seed": seed }),
        results: to_value(&report),
        text: model_text(&report),
        markdown: Some(model_markdown(&report)),
        code: if report.passed { 0 } else { 3 },
    })
}

fn is_model_name(s: &str) -> bool {
    let family = s.split(':').next().unwrap_or("").trim();
    CATALOG.iter().any(|(f, _)| *f == family)
}

fn filtration_text(f: &FiltrationReport) -> String {
    let mut out = String::new();
    for (k, s) in f.stages.iter().enumerate() {
        out.push_str(&format!(
            "  stage {}: [{}] dim {}, algebra dim {}, isotropy dim {}, reductive {}\n",
            k + 1,
            s.labels.join(", "),
            s.subspace_dim,
            s.algebra_dim,
            s.isotropy_dim,
            output::yes_no(Some(s.reductive)),
        ));
    }
    out
}

fn decompose_cmd(target: &str, seed: &SeedArg) -> Result<Outcome, CliError> {
    let seed = seed_of(seed)?;
    let (name, pv) = if is_model_name(target) {
        let spec = parse_model(target).map_err(|e| CliError::Usage(e.to_string()))?;
        (spec.name.clone(), spec.instance)
    } else {
        let d = diagram_arg(target)?;
        (d.compact(), parabolic_pv(&d))
    };
    let mut text = format!("{name}  (seed {seed})\n");
    let results = match decompose_filtration(&pv, seed) {
        Ok(f) => {
            text.push_str(&filtration_text(&f));
            json!({ "target": name, "filtration": to_value(&f) })
        }
        Err(e) => {
            text.push_str(&format!("  no filtration: {e}\n"));
            if let FiltrationError::PartialFiltration { stages, .. } = &e {
                let partial = FiltrationReport { stages: stages.clone(), search: String::new() };
                text.push_str(&filtration_text(&partial));
            }
            json!({ "target": name, "error": e.to_string() })
        }
    };
    Ok(Outcome { command: "decompose", inputs: json!({ "target": name, "seed": seed }), results, text, markdown: None, code: 0 })
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Describe { diagram } => describe(diagram),
        Command::Grade { diagram } => grade(diagram),
        Command::Components { diagram } => components_cmd(diagram),
        Command::Subdiagram { diagram, gamma } => subdiagram_cmd(diagram, gamma),
        Command::Classify { diagram, mode, seed } => classify_cmd(diagram, mode, seed),
        Command::Enumerate { types, max_rank, mode, include_irreducible, seed } => {
            enumerate_cmd(types, *max_rank, mode, *include_irreducible, seed)
        }
        Command::VerifyModel { model, seed } => verify_model_cmd(model, seed),
        Command::Decompose { target, seed } => decompose_cmd(target, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let format = if cli.json {
        Format::Json
    } else if cli.markdown {
        Format::Markdown
    } else {
        Format::Text
    };
    match run(&cli) {
        Ok(outcome) => {
            if !cli.quiet {
                print!("{}", outcome.render(format));
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprint!("{}", e.report());
            ExitCode::from(1)
        }
    }
}
