use serde::{Deserialize, Serialize};
use serde_json::Value;

use pv_lab::classify::ClassificationReport;
use pv_lab::models::ModelReport;

pub const SCHEMA_VERSION: &str = "1";

/// Envelope of every `--json` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Markdown,
}

/// What a command produced, in every output format.
pub struct Outcome {
    pub command: &'static str,
    pub inputs: Value,
    pub results: Value,
    pub text: String,
    pub markdown: Option<String>,
    pub code: u8,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let doc = ReportDocument {
                    schema_version: SCHEMA_VERSION.to_string(),
                    command: self.command.to_string(),
                    inputs: self.inputs.clone(),
                    results: self.results.clone(),
                };
                let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Markdown => match &self.markdown {
                Some(md) => md.clone(),
                None => format!("## {}\n\n```text\n{}```\n", self.command, self.text),
            },
        }
    }
}

pub fn yes_no(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    }
}

fn opt_num(v: Option<usize>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn family_cell(r: &ClassificationReport) -> (String, String) {
    match &r.family {
        Some(f) => {
            let params: Vec<String> = f.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            (f.family.to_string(), params.join(", "))
        }
        None => ("-".to_string(), String::new()),
    }
}

pub fn classification_text(r: &ClassificationReport) -> String {
    let v = &r.verdicts;
    let mut out = format!("{}  (method {}, seed {})\n", r.diagram, r.method, r.seed);
    out.push_str(&format!("  prehomogeneous      {}\n", yes_no(v.prehomogeneous)));
    out.push_str(&format!("  regular             {}\n", yes_no(v.regular)));
    out.push_str(&format!("  invariants          {}\n", opt_num(v.n_invariants)));
    out.push_str(&format!("  1-irreducible       {}\n", yes_no(v.one_irreducible)));
    out.push_str(&format!("  Q-irreducible       {}\n", yes_no(Some(v.q_irreducible))));
    out.push_str(&format!("  completely Q-red.   {}\n", yes_no(v.completely_q_reducible)));
    let (fam, params) = family_cell(r);
    if r.family.is_some() {
        out.push_str(&format!("  family              {fam} ({params})\n"));
    }
    let w = &r.witnesses;
    if let (Some(rank), Some(iso)) = (w.orbit_rank, w.isotropy_dim) {
        out.push_str(&format!("  orbit rank          {rank}, isotropy dim {iso}\n"));
    }
    if let Some(g) = &w.regular_subspace {
        let g: Vec<String> = g.iter().map(usize::to_string).collect();
        out.push_str(&format!("  regular sub-sum     circled {{{}}}\n", g.join(",")));
    }
    if w.nonreductive_isotropy {
        out.push_str("  generic isotropy    not reductive\n");
    }
    out
}

/// One table row per report.
pub fn classification_table(reports: &[&ClassificationReport], mismatches: &[String]) -> String {
    let mut out = String::from(
        "| diagram | family | parameters | regular | invariants | Q-irreducible |\n|---|---|---|---|---|---|\n",
    );
    for r in reports {
        let (fam, params) = family_cell(r);
        let mark = if mismatches.contains(&r.diagram.compact()) { " (mismatch)" } else { "" };
        out.push_str(&format!(
            "| {}{} | {} | {} | {} | {} | {} |\n",
            r.diagram,
            mark,
            fam,
            params,
            yes_no(r.verdicts.regular),
            opt_num(r.verdicts.n_invariants),
            yes_no(Some(r.verdicts.q_irreducible)),
        ));
    }
    out
}

pub fn model_text(r: &ModelReport) -> String {
    let mut out = format!(
        "{}  (seed {})\n  dim V = {}, dim g = {}, prehomogeneous {}, regular {}, isotropy dim {}, invariants {}\n",
        r.model,
        r.seed,
        r.dim_v,
        r.dim_algebra,
        yes_no(Some(r.prehomogeneous)),
        yes_no(Some(r.regular)),
        r.isotropy_dim,
        opt_num(r.n_fundamental_invariants),
    );
    for c in &r.checks {
        let status = if c.passed { "ok  " } else { "FAIL" };
        out.push_str(&format!("  {status} {}: expected {}, found {}\n", c.name, c.expected, c.found));
    }
    out.push_str(if r.passed { "all checks passed\n" } else { "some checks failed\n" });
    out
}

pub fn model_markdown(r: &ModelReport) -> String {
    let mut out = format!("## {}\n\n| check | expected | found | status |\n|---|---|---|---|\n", r.model);
    for c in &r.checks {
        out.push_str(&format!(
            "| {} | {} | {} | {} |\n",
            c.name,
            c.expected,
            c.found,
            if c.passed { "ok" } else { "FAIL" }
        ));
    }
    out
}
