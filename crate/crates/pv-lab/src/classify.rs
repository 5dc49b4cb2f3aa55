//! Q-irreducibility of weighted diagrams: pattern matching against the
//! known families, an exact oracle over the component lattice, and drivers
//! that cross-check the two.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{circled_adjacent_pairs, WeightedDiagram};
use crate::linalg::{serde_q, Q};
use crate::pvcore::{parabolic_pv, LatticeScan, PvInstance, RegularityReport};
use crate::rootsys::{automorphisms, Family, RootSystem, SimpleType};

/// Families of Q-irreducible, non-irreducible parabolic spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum QFamily {
    A,
    B,
    C,
    D1,
    D2,
    D3,
    E6,
    E7,
    E8,
}

impl fmt::Display for QFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A family match: the block sizes p1, p2, p3 (as applicable) and the
/// diagram in the family's standard position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyMatch {
    pub family: QFamily,
    pub params: Vec<(String, usize)>,
    pub realized: WeightedDiagram,
}

fn blocks(n: usize, c1: usize, c2: usize) -> (usize, usize, usize) {
    (c1 - 1, c2 - c1 - 1, n - c2)
}

fn with(family: QFamily, names: &[&str], vals: &[usize], d: &WeightedDiagram) -> FamilyMatch {
    FamilyMatch {
        family,
        params: names.iter().zip(vals).map(|(k, v)| (k.to_string(), *v)).collect(),
        realized: d.clone(),
    }
}

/// Match in standard position only.
fn match_standard(d: &WeightedDiagram) -> Option<FamilyMatch> {
    let n = d.rank();
    let c: Vec<usize> = d.circled().iter().copied().collect();
    let ty = d.simple_type();
    let p123 = ["p1", "p2", "p3"];
    match (ty.family, c.as_slice()) {
        (Family::A, &[c1, c2]) => {
            let (p1, p2, p3) = blocks(n, c1, c2);
            (p1 == p3 && p2 > p1).then(|| with(QFamily::A, &p123, &[p1, p2, p3], d))
        }
        (Family::B, &[c1, c2]) => {
            let (p1, p2, p3) = blocks(n, c1, c2);
            (p2 > p1 && 2 * p3 == p1).then(|| with(QFamily::B, &p123, &[p1, p2, p3], d))
        }
        (Family::C, &[c1, c2]) => {
            let (p1, p2, p3) = blocks(n, c1, c2);
            (p2 > p1 && 2 * p3 == p1 + 1 && p3 > 0 && p2 % 2 == 1).then(|| with(QFamily::C, &p123, &[p1, p2, p3], d))
        }
        (Family::D, &[c1, c2]) if c2 <= n - 2 => {
            let (p1, p2, p3) = blocks(n, c1, c2);
            (p2 > p1 && 2 * p3 == p1 + 1 && p3 >= 2 && p2 % 2 == 0).then(|| with(QFamily::D1, &p123, &[p1, p2, p3], d))
        }
        (Family::D, &[c1, c2]) if c1 <= n - 2 && c2 == n => {
            let (p1, p2) = (c1 - 1, n - 1 - c1);
            (p1 + 1 == p2 && p2 >= 2 && p2 % 2 == 0).then(|| with(QFamily::D2, &["p1", "p2"], &[p1, p2], d))
        }
        (Family::D, &[2, a, b]) if a == n - 1 && b == n => {
            let p2 = n - 4;
            (p2 > 1).then(|| with(QFamily::D3, &["p1", "p2"], &[1, p2], d))
        }
        (Family::E, &[1, 2]) if n == 6 => Some(with(QFamily::E6, &[], &[], d)),
        (Family::E, &[2, 5]) if n == 7 => Some(with(QFamily::E7, &[], &[], d)),
        (Family::E, &[1, 2]) if n == 8 => Some(with(QFamily::E8, &[], &[], d)),
        _ => None,
    }
}

/// The family a diagram with at least two circled nodes belongs to, up to
/// diagram automorphisms.
pub fn match_family(d: &WeightedDiagram) -> Option<FamilyMatch> {
    if d.circled().len() < 2 {
        return None;
    }
    automorphisms(d.simple_type()).iter().find_map(|perm| match_standard(&d.permuted(perm)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("no two circled nodes are adjacent in {0}")]
    NoAdjacentCircles(String),
    #[error("pattern and oracle disagree on {diagram}: pattern says {pattern}, oracle says {oracle}")]
    Mismatch { diagram: String, pattern: bool, oracle: bool, report: Box<ClassificationReport> },
    #[error("unknown mode '{0}' (expected pattern, oracle or both)")]
    UnknownMode(String),
}

/// The two sides of an adjacent circled pair (α1, α2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjacentSplit {
    pub pair: (usize, usize),
    /// Component of the diagram minus α2 containing α1.
    pub first: BTreeSet<usize>,
    /// Component of the diagram minus α1 containing α2.
    pub second: BTreeSet<usize>,
}

impl AdjacentSplit {
    /// Indices (into the circled list) of the level-one components on each side.
    pub fn component_indices(&self, d: &WeightedDiagram) -> (Vec<usize>, Vec<usize>) {
        let pick = |side: &BTreeSet<usize>| {
            d.circled().iter().enumerate().filter(|(_, a)| side.contains(a)).map(|(i, _)| i).collect()
        };
        (pick(&self.first), pick(&self.second))
    }

    /// The instances on the two sums of components.
    pub fn instances(&self, d: &WeightedDiagram, pv: &PvInstance) -> (PvInstance, PvInstance) {
        let (a, b) = self.component_indices(d);
        (pv.restrict(&a).expect("α1 side is nonempty"), pv.restrict(&b).expect("α2 side is nonempty"))
    }
}

fn reach(rs: &RootSystem, start: usize, removed: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for w in rs.neighbors(v) {
            if w != removed && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

/// Splits along the first adjacent circled pair.
pub fn adjacent_circle_split(d: &WeightedDiagram) -> Result<AdjacentSplit, ClassifyError> {
    let &(a1, a2) = circled_adjacent_pairs(d).first().ok_or_else(|| ClassifyError::NoAdjacentCircles(d.compact()))?;
    let rs = RootSystem::new(d.simple_type());
    Ok(AdjacentSplit { pair: (a1, a2), first: reach(&rs, a1, a2), second: reach(&rs, a2, a1) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Pattern,
    Oracle,
    Both,
}

impl FromStr for Mode {
    type Err = ClassifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pattern" => Ok(Mode::Pattern),
            "oracle" => Ok(Mode::Oracle),
            "both" => Ok(Mode::Both),
            _ => Err(ClassifyError::UnknownMode(s.to_string())),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Pattern => "pattern",
            Mode::Oracle => "oracle",
            Mode::Both => "both",
        })
    }
}

/// `None` where the method used does not decide the property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub prehomogeneous: Option<bool>,
    pub regular: Option<bool>,
    pub n_invariants: Option<usize>,
    pub one_irreducible: Option<bool>,
    pub q_irreducible: bool,
    pub completely_q_reducible: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    #[serde(serialize_with = "serde_q::opt_vec")]
    pub generic_point: Option<Vec<Q>>,
    pub orbit_rank: Option<usize>,
    pub isotropy_dim: Option<usize>,
    /// Circled nodes of a proper sub-sum with a regular restriction.
    pub regular_subspace: Option<Vec<usize>>,
    /// Zero determinant of the form on the generic isotropy, when prehomogeneous but not regular.
    pub nonreductive_isotropy: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub diagram: WeightedDiagram,
    pub verdicts: Verdicts,
    pub family: Option<FamilyMatch>,
    pub witnesses: Witnesses,
    pub method: Mode,
    pub seed: u64,
}

struct OracleResult {
    report: RegularityReport,
    q_irreducible: bool,
    witness: Option<Vec<usize>>,
    completely_q_reducible: bool,
}

fn oracle(d: &WeightedDiagram, seed: u64) -> OracleResult {
    let pv = parabolic_pv(d);
    let mut scan = LatticeScan::new(&pv, seed);
    let full = scan.full_mask() as usize;
    let report = scan.report(full as u32).clone();
    let mut regular = vec![false; full + 1];
    for (m, r) in regular.iter_mut().enumerate().skip(1) {
        *r = scan.regular(m as u32);
    }
    let mut qirr = vec![false; full + 1];
    let mut witness = None;
    for m in 1..=full {
        if !regular[m] {
            continue;
        }
        let sub = LatticeScan::proper_submasks(m as u32).into_iter().find(|&s| regular[s as usize]);
        qirr[m] = sub.is_none();
        if m == full {
            witness = sub;
        }
    }
    let mut cqr = vec![false; full + 1];
    for m in 1..=full {
        let low = m & m.wrapping_neg();
        let mut s = m;
        while s != 0 {
            if s & low != 0 && qirr[s] && (s == m || cqr[m & !s]) {
                cqr[m] = true;
                break;
            }
            s = (s - 1) & m;
        }
    }
    let circled: Vec<usize> = d.circled().iter().copied().collect();
    OracleResult {
        report,
        q_irreducible: qirr[full],
        witness: witness.map(|s| LatticeScan::members(s).into_iter().map(|i| circled[i]).collect()),
        completely_q_reducible: cqr[full],
    }
}

fn oracle_report(d: &WeightedDiagram, o: OracleResult, family: Option<FamilyMatch>, method: Mode, seed: u64) -> ClassificationReport {
    let r = o.report;
    let one = r.regular && r.n_fundamental_invariants == Some(1);
    ClassificationReport {
        diagram: d.clone(),
        verdicts: Verdicts {
            prehomogeneous: Some(r.prehomogeneous),
            regular: Some(r.regular),
            n_invariants: r.n_fundamental_invariants,
            one_irreducible: Some(one),
            q_irreducible: o.q_irreducible,
            completely_q_reducible: Some(o.completely_q_reducible),
        },
        family,
        witnesses: Witnesses {
            generic_point: Some(r.generic_point.point.clone()),
            orbit_rank: Some(r.orbit_rank),
            isotropy_dim: Some(r.isotropy_dim),
            regular_subspace: o.witness,
            nonreductive_isotropy: r.prehomogeneous && !r.reductive,
        },
        method,
        seed,
    }
}

pub fn classify(d: &WeightedDiagram, mode: Mode, seed: u64) -> Result<ClassificationReport, ClassifyError> {
    let irreducible = d.circled().len() == 1;
    let family = match_family(d);
    if irreducible || mode != Mode::Pattern {
        let o = oracle(d, seed);
        let report = oracle_report(d, o, family.clone(), mode, seed);
        if mode == Mode::Both && !irreducible && family.is_some() != report.verdicts.q_irreducible {
            return Err(ClassifyError::Mismatch {
                diagram: d.compact(),
                pattern: family.is_some(),
                oracle: report.verdicts.q_irreducible,
                report: Box::new(report),
            });
        }
        return Ok(report);
    }
    let hit = family.is_some();
    Ok(ClassificationReport {
        diagram: d.clone(),
        verdicts: Verdicts {
            prehomogeneous: Some(true),
            regular: hit.then_some(true),
            n_invariants: hit.then_some(1),
            one_irreducible: hit.then_some(true),
            q_irreducible: hit,
            completely_q_reducible: hit.then_some(true),
        },
        family,
        witnesses: Witnesses {
            generic_point: None,
            orbit_rank: None,
            isotropy_dim: None,
            regular_subspace: None,
            nonreductive_isotropy: false,
        },
        method: mode,
        seed,
    })
}

/// Every diagram of the given types with at least two circled nodes (or one,
/// with `include_irreducible`), in type order then circled-bitmask order.
pub fn enumerate(
    types: &[SimpleType],
    mode: Mode,
    seed: u64,
    include_irreducible: bool,
) -> Result<Vec<ClassificationReport>, ClassifyError> {
    let min = if include_irreducible { 1 } else { 2 };
    types
        .iter()
        .flat_map(|&ty| WeightedDiagram::all_of_type(ty, min))
        .map(|d| classify(&d, mode, seed))
        .collect()
}

/// Every report of an enumeration, continuing past pattern/oracle disagreements.
#[derive(Clone, Debug, Serialize)]
pub struct Sweep {
    pub reports: Vec<ClassificationReport>,
    /// Diagrams where the pattern and the oracle disagree; their oracle reports are in `reports` too.
    pub mismatches: Vec<String>,
}

impl Sweep {
    pub fn q_irreducible(&self) -> Vec<String> {
        self.reports.iter().filter(|r| r.verdicts.q_irreducible).map(|r| r.diagram.compact()).collect()
    }
}

/// Like [`enumerate`] but records mismatches instead of stopping at the first.
pub fn sweep(types: &[SimpleType], mode: Mode, seed: u64, include_irreducible: bool) -> Sweep {
    let min = if include_irreducible { 1 } else { 2 };
    let mut out = Sweep { reports: Vec::new(), mismatches: Vec::new() };
    for d in types.iter().flat_map(|&ty| WeightedDiagram::all_of_type(ty, min)) {
        match classify(&d, mode, seed) {
            Ok(r) => out.reports.push(r),
            Err(ClassifyError::Mismatch { diagram, report, .. }) => {
                out.mismatches.push(diagram);
                out.reports.push(*report);
            }
            Err(e) => unreachable!("classify only fails with a mismatch: {e}"),
        }
    }
    out
}
