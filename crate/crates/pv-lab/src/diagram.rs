//! Weighted Dynkin diagrams: a simple type with a nonempty set of circled nodes.
//!
//! Textual form: `FAMILY RANK '[' idx (',' idx)* ']'`, e.g. `D9[2,3,5,8]`,
//! with 1-based node indices and optional whitespace between tokens.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::rootsys::{Family, RootSystem, Segment, SimpleType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("parse error at column {column}: expected {expected}, found {found}")]
    Parse { column: usize, expected: String, found: String },
    #[error("inadmissible type {0}")]
    InadmissibleType(String),
    #[error("node index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("node index {0} listed twice")]
    DuplicateIndex(usize),
    #[error("no circled node")]
    EmptyCircledSet,
    #[error("node {0} is not circled")]
    NotCircled(usize),
    #[error("empty node subset")]
    EmptyGamma,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightedDiagram {
    ty: SimpleType,
    circled: BTreeSet<usize>,
}

impl WeightedDiagram {
    pub fn new(ty: SimpleType, circled: impl IntoIterator<Item = usize>) -> Result<Self, DiagramError> {
        let mut set = BTreeSet::new();
        for i in circled {
            if i == 0 || i > ty.rank {
                return Err(DiagramError::IndexOutOfRange { index: i, rank: ty.rank });
            }
            if !set.insert(i) {
                return Err(DiagramError::DuplicateIndex(i));
            }
        }
        if set.is_empty() {
            return Err(DiagramError::EmptyCircledSet);
        }
        Ok(WeightedDiagram { ty, circled: set })
    }

    pub fn simple_type(&self) -> SimpleType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    /// The circled nodes Ψ∖θ.
    pub fn circled(&self) -> &BTreeSet<usize> {
        &self.circled
    }

    /// The uncircled nodes θ.
    pub fn theta(&self) -> BTreeSet<usize> {
        (1..=self.rank()).filter(|i| !self.circled.contains(i)).collect()
    }

    pub fn is_circled(&self, i: usize) -> bool {
        self.circled.contains(&i)
    }

    /// Canonical serialization `D9[2,3,5,8]`.
    pub fn compact(&self) -> String {
        let idx: Vec<String> = self.circled.iter().map(usize::to_string).collect();
        format!("{}[{}]", self.ty, idx.join(","))
    }

    /// Image under a node permutation (`perm[i-1]` is the image of node i).
    pub fn permuted(&self, perm: &[usize]) -> WeightedDiagram {
        WeightedDiagram { ty: self.ty, circled: self.circled.iter().map(|&i| perm[i - 1]).collect() }
    }

    /// All diagrams of a type with at least `min_circled` circled nodes, in
    /// order of the bitmask of circled nodes.
    pub fn all_of_type(ty: SimpleType, min_circled: usize) -> Vec<WeightedDiagram> {
        let n = ty.rank;
        (1u32..(1 << n))
            .filter(|m| m.count_ones() as usize >= min_circled)
            .map(|m| WeightedDiagram { ty, circled: (1..=n).filter(|i| m & (1 << (i - 1)) != 0).collect() })
            .collect()
    }
}

impl fmt::Display for WeightedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.compact())
    }
}

impl Serialize for WeightedDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.compact())
    }
}

impl FromStr for WeightedDiagram {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<Self, DiagramError> {
        parse_diagram(s)
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn error(&self, expected: &str) -> DiagramError {
        let found = match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        DiagramError::Parse { column: self.column(), expected: expected.to_string(), found }
    }

    fn number(&mut self, what: &str) -> Result<usize, DiagramError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(what));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| DiagramError::Parse {
            column: start + 1,
            expected: what.to_string(),
            found: format!("'{text}'"),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), DiagramError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }
}

/// Parses the textual form; errors carry a 1-based column.
pub fn parse_diagram(text: &str) -> Result<WeightedDiagram, DiagramError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    let family = match cur.peek().and_then(Family::from_letter) {
        Some(f) => f,
        None => return Err(cur.error("family letter A-G")),
    };
    cur.pos += 1;
    cur.skip_ws();
    let rank = cur.number("rank")?;
    let ty = SimpleType::new(family, rank).map_err(|_| DiagramError::InadmissibleType(format!("{}{}", family.letter(), rank)))?;
    cur.skip_ws();
    cur.expect('[')?;
    cur.skip_ws();
    let mut idx = Vec::new();
    if cur.peek() != Some(']') {
        loop {
            cur.skip_ws();
            idx.push(cur.number("node index")?);
            cur.skip_ws();
            match cur.peek() {
                Some(',') => cur.pos += 1,
                Some(']') => break,
                _ => return Err(cur.error("',' or ']'")),
            }
        }
    }
    cur.expect(']')?;
    cur.skip_ws();
    if cur.peek().is_some() {
        return Err(cur.error("end of input"));
    }
    WeightedDiagram::new(ty, idx)
}

/// Subdiagram attached to a subset Γ of the circled nodes.
#[derive(Clone, Debug, Serialize)]
pub struct Subdiagram {
    pub gamma: BTreeSet<usize>,
    pub psi_gamma: BTreeSet<usize>,
    pub theta_gamma: BTreeSet<usize>,
    pub pieces: Vec<Piece>,
}

/// A connected piece of Ψ_Γ together with its standalone diagram.
#[derive(Clone, Debug, Serialize)]
pub struct Piece {
    pub segment: Segment,
    pub diagram: WeightedDiagram,
}

impl Subdiagram {
    /// Human-readable listing: one header line and the ASCII picture per piece.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for p in &self.pieces {
            let nodes: Vec<String> = p.segment.standard.iter().map(usize::to_string).collect();
            out.push_str(&format!("{} on ambient nodes [{}]\n", p.diagram.compact(), nodes.join(",")));
            out.push_str(&render_ascii(&p.diagram));
            out.push('\n');
        }
        out
    }
}

/// Ψ_α: the connected component of θ ∪ {α} containing α.
pub fn psi_alpha(rs: &RootSystem, d: &WeightedDiagram, alpha: usize) -> BTreeSet<usize> {
    let mut nodes = d.theta();
    nodes.insert(alpha);
    rs.connected_components(&nodes)
        .into_iter()
        .find(|s| s.nodes.contains(&alpha))
        .map(|s| s.nodes.into_iter().collect())
        .expect("alpha lies in some component")
}

pub fn subdiagram(d: &WeightedDiagram, gamma: &BTreeSet<usize>) -> Result<Subdiagram, DiagramError> {
    if gamma.is_empty() {
        return Err(DiagramError::EmptyGamma);
    }
    if let Some(&bad) = gamma.iter().find(|g| !d.is_circled(**g)) {
        return Err(DiagramError::NotCircled(bad));
    }
    let rs = RootSystem::new(d.simple_type());
    let mut psi = BTreeSet::new();
    for &a in gamma {
        psi.extend(psi_alpha(&rs, d, a));
    }
    let theta_gamma: BTreeSet<usize> = psi.iter().copied().filter(|i| !d.is_circled(*i)).collect();
    let pieces = rs
        .connected_components(&psi)
        .into_iter()
        .map(|segment| {
            let circled = segment
                .standard
                .iter()
                .enumerate()
                .filter(|(_, amb)| gamma.contains(amb))
                .map(|(k, _)| k + 1);
            let diagram = WeightedDiagram::new(segment.ty, circled).expect("each piece carries a circled node");
            Piece { segment, diagram }
        })
        .collect();
    Ok(Subdiagram { gamma: gamma.clone(), psi_gamma: psi, theta_gamma, pieces })
}

/// Pairs of circled nodes joined by an edge.
pub fn circled_adjacent_pairs(d: &WeightedDiagram) -> Vec<(usize, usize)> {
    let rs = RootSystem::new(d.simple_type());
    let mut out = Vec::new();
    for &a in d.circled() {
        for &b in d.circled() {
            if a < b && rs.adjacent(a, b) {
                out.push((a, b));
            }
        }
    }
    out
}

/// ASCII picture. `o` is an uncircled node, `(o)` a circled one; `--` a single
/// bond, `=>`/`<=` a double and `≡>`/`<≡` a triple bond pointing to the short
/// root. The D fork tip n and the E node 2 are drawn on two extra rows below
/// the node they hang from.
pub fn render_ascii(d: &WeightedDiagram) -> String {
    let rs = RootSystem::new(d.simple_type());
    let n = d.rank();
    let (line, hang): (Vec<usize>, Option<(usize, usize)>) = match d.simple_type().family {
        Family::D => ((1..n).collect(), Some((n, n - 2))),
        Family::E => {
            let mut l = vec![1];
            l.extend(3..=n);
            (l, Some((2, 4)))
        }
        _ => ((1..=n).collect(), None),
    };
    let token = |i: usize| if d.is_circled(i) { "(o)" } else { "o" };
    let mut row = String::new();
    let mut centers = vec![0usize; n + 1];
    for (k, &i) in line.iter().enumerate() {
        if k > 0 {
            let prev = line[k - 1];
            let bond = rs.bond(prev, i);
            let longer_left = rs.node_length(prev) > rs.node_length(i);
            let conn = match (bond, longer_left) {
                (1, _) => "--",
                (2, true) => "=>",
                (2, false) => "<=",
                (_, true) => "≡>",
                (_, false) => "<≡",
            };
            row.push_str(conn);
        }
        let t = token(i);
        centers[i] = row.chars().count() + t.len() / 2;
        row.push_str(t);
    }
    let mut out = row;
    if let Some((tip, parent)) = hang {
        let c = centers[parent];
        let t = token(tip);
        out.push('\n');
        out.push_str(&" ".repeat(c));
        out.push('|');
        out.push('\n');
        out.push_str(&" ".repeat(c - t.len() / 2));
        out.push_str(t);
    }
    out
}

pub fn render_compact(d: &WeightedDiagram) -> String {
    d.compact()
}
