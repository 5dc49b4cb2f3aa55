//! Explicit matrix-space prehomogeneous spaces with closed-form invariants
//! and the certificate values each one is expected to reproduce.

mod builder;
mod families;
mod pfaffian;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{serde_q, Q};
use crate::pvcore::{
    decompose_filtration, is_regular, isotropy_algebra, orbit_rank, q_irreducible, relative_invariance,
    verify_invariant, Invariant, PvInstance,
};

pub use builder::{Factor, FactorKind, Layout, MatrixModel, Shape, Term};
pub use families::{
    bilinear_pairing, descending_chains, matrix_chain, skew_bordered, skew_chain, square_bordered,
    symmetric_with_vector, torus_chain,
};
pub use pfaffian::{pfaffian, PfaffianError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown model '{0}'")]
    UnknownModel(String),
    #[error("model '{model}' needs parameter '{param}'")]
    MissingParam { model: String, param: String },
    #[error("model '{model}' has no parameter '{param}'")]
    UnexpectedParam { model: String, param: String },
    #[error("bad value '{value}' for parameter '{param}'")]
    BadValue { param: String, value: String },
    #[error("parameters out of range for '{model}': {reason}")]
    OutOfRange { model: String, reason: String },
}

/// A closed-form polynomial on V with a note on whether the Hessian test applies.
#[derive(Clone, Debug)]
pub struct KnownInvariant {
    pub invariant: Invariant,
    pub description: String,
    /// Expected to pass the Hessian and dlog nondegeneracy test.
    pub nondegenerate: bool,
}

/// Certificate values a model is expected to reproduce; `None` means unchecked.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Expected {
    pub prehomogeneous: Option<bool>,
    pub regular: Option<bool>,
    pub n_invariants: Option<usize>,
    /// Isotropy dimension at the special point if there is one, else at a generic point.
    pub isotropy_dim: Option<usize>,
    pub q_irreducible: Option<bool>,
    /// Component labels per filtration stage.
    pub filtration: Option<Vec<Vec<String>>>,
}

/// A distinguished point, checked to lie in the open orbit.
#[derive(Clone, Debug, Serialize)]
pub struct SpecialPoint {
    pub label: String,
    #[serde(serialize_with = "serde_q::vec")]
    pub point: Vec<Q>,
}

#[derive(Clone, Debug)]
pub struct ModelSpec {
    /// Stable identifier, `family:key=value,...`.
    pub name: String,
    pub family: String,
    pub params: BTreeMap<String, i64>,
    pub instance: PvInstance,
    pub layout: Layout,
    pub invariants: Vec<KnownInvariant>,
    pub expected: Expected,
    pub special_point: Option<SpecialPoint>,
}

/// Family names with their parameter keys, in the order they are written.
pub const CATALOG: &[(&str, &[&str])] = &[
    ("bilinear_pairing", &["n"]),
    ("symmetric_with_vector", &["n"]),
    ("descending_chains", &["n"]),
    ("matrix_chain", &["p", "q", "r"]),
    ("skew_chain", &["p", "r"]),
    ("torus_chain", &["p", "q"]),
    ("skew_bordered", &["n"]),
    ("square_bordered", &["n"]),
];

/// Parses `family:key=value,...` and builds the model.
pub fn parse_model(s: &str) -> Result<ModelSpec, ModelError> {
    let (family, rest) = s.split_once(':').unwrap_or((s, ""));
    let family = family.trim();
    let keys = CATALOG
        .iter()
        .find(|(f, _)| *f == family)
        .map(|(_, k)| *k)
        .ok_or_else(|| ModelError::UnknownModel(family.to_string()))?;
    let mut values: BTreeMap<&str, usize> = BTreeMap::new();
    for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| ModelError::BadValue { param: item.to_string(), value: String::new() })?;
        let (k, v) = (k.trim(), v.trim());
        let Some(key) = keys.iter().find(|key| **key == k) else {
            return Err(ModelError::UnexpectedParam { model: family.to_string(), param: k.to_string() });
        };
        let n = v.parse().map_err(|_| ModelError::BadValue { param: k.to_string(), value: v.to_string() })?;
        values.insert(key, n);
    }
    let get = |k: &str| {
        values.get(k).copied().ok_or_else(|| ModelError::MissingParam { model: family.to_string(), param: k.to_string() })
    };
    match family {
        "bilinear_pairing" => bilinear_pairing(get("n")?),
        "symmetric_with_vector" => symmetric_with_vector(get("n")?),
        "descending_chains" => descending_chains(get("n")?),
        "matrix_chain" => matrix_chain(get("p")?, get("q")?, get("r")?),
        "skew_chain" => skew_chain(get("p")?, get("r")?),
        "torus_chain" => torus_chain(get("p")?, get("q")?),
        "skew_bordered" => skew_bordered(get("n")?),
        "square_bordered" => square_bordered(get("n")?),
        _ => unreachable!("catalog covers every family"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub found: String,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, expected: impl ToString, found: impl ToString) -> Check {
        let (expected, found) = (expected.to_string(), found.to_string());
        Check { name: name.into(), passed: expected == found, expected, found }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub model: String,
    pub seed: u64,
    pub dim_v: usize,
    pub dim_algebra: usize,
    pub prehomogeneous: bool,
    pub regular: bool,
    pub isotropy_dim: usize,
    pub n_fundamental_invariants: Option<usize>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Recomputes every certificate of the model and compares with the expected values.
pub fn verify_model(spec: &ModelSpec, seed: u64) -> ModelReport {
    let pv = &spec.instance;
    let mut checks = Vec::new();
    checks.push(Check::new("bracket closure", true, pv.closure_defect().is_none()));
    checks.push(Check::new("components invariant", true, pv.components_invariant()));
    let report = is_regular(pv, seed);
    let ex = &spec.expected;
    if let Some(v) = ex.prehomogeneous {
        checks.push(Check::new("prehomogeneous", v, report.prehomogeneous));
    }
    if let Some(v) = ex.regular {
        checks.push(Check::new("regular", v, report.regular));
    }
    if let Some(v) = ex.n_invariants {
        checks.push(Check::new("fundamental invariants", v, fmt_opt(report.n_fundamental_invariants)));
    }
    let iso_here = match &spec.special_point {
        Some(sp) => {
            checks.push(Check::new(
                format!("orbit rank at {}", sp.label),
                report.orbit_rank,
                orbit_rank(pv, &sp.point),
            ));
            isotropy_algebra(pv, &sp.point).len()
        }
        None => report.isotropy_dim,
    };
    if let Some(v) = ex.isotropy_dim {
        checks.push(Check::new("isotropy dimension", v, iso_here));
    }
    if let Some(v) = ex.q_irreducible {
        checks.push(Check::new("Q-irreducible", v, q_irreducible(pv, seed).q_irreducible));
    }
    if let Some(stages) = &ex.filtration {
        let found = match decompose_filtration(pv, seed) {
            Ok(f) => {
                checks.push(Check::new("final isotropy reductive", true, f.final_reductive()));
                format!("{:?}", f.stage_labels())
            }
            Err(e) => e.to_string(),
        };
        checks.push(Check::new("filtration stages", format!("{stages:?}"), found));
    }
    for k in &spec.invariants {
        let name = format!("invariant {}", k.invariant.name);
        let found = if k.nondegenerate && report.regular {
            match verify_invariant(pv, &k.invariant, seed) {
                Ok(r) if r.dlog_rank == pv.dim_v => "nondegenerate relative invariant".to_string(),
                Ok(r) => format!("dlog rank {} of {}", r.dlog_rank, pv.dim_v),
                Err(e) => e.to_string(),
            }
        } else {
            match relative_invariance(pv, &k.invariant, seed) {
                Ok(_) => "relative invariant".to_string(),
                Err(e) => e.to_string(),
            }
        };
        let expected = if k.nondegenerate && report.regular { "nondegenerate relative invariant" } else { "relative invariant" };
        checks.push(Check::new(name, expected, found));
    }
    let passed = checks.iter().all(|c| c.passed);
    ModelReport {
        model: spec.name.clone(),
        seed,
        dim_v: pv.dim_v,
        dim_algebra: pv.dim_algebra(),
        prehomogeneous: report.prehomogeneous,
        regular: report.regular,
        isotropy_dim: report.isotropy_dim,
        n_fundamental_invariants: report.n_fundamental_invariants,
        checks,
        passed,
    }
}

fn fmt_opt(v: Option<usize>) -> String {
    v.map_or_else(|| "none".to_string(), |v| v.to_string())
}
