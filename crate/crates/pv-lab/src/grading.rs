//! The grading of g defined by a weighted diagram and the level-one components.
//!
//! Highest weights are given relative to the negative Borel subalgebra, so
//! the reported Cartan integers c_i = α(H_{β_i}) are ≤ 0.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::diagram::WeightedDiagram;
use crate::linalg::{q, serde_q, Matrix, Q};
use crate::rootsys::{Root, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("nodes {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("node {0} is not circled")]
    NotCircled(usize),
    #[error("node {0} is circled")]
    NotInTheta(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct Grading {
    pub diagram: WeightedDiagram,
    /// H_θ in the basis of simple coroots.
    #[serde(serialize_with = "serde_q::vec")]
    pub h_theta: Vec<Q>,
    /// Degree of each root, in the order of [`RootSystem::roots`].
    pub degrees: Vec<(Root, i32)>,
    /// Dimension of each nonzero level d_p.
    pub dim_by_level: BTreeMap<i32, usize>,
}

impl Grading {
    pub fn level_dim(&self, p: i32) -> usize {
        self.dim_by_level.get(&p).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dim_by_level.values().sum()
    }
}

/// Degree of a root: the sum of its coefficients on circled nodes.
pub fn degree(d: &WeightedDiagram, root: &[i32]) -> i32 {
    d.circled().iter().map(|&j| root[j - 1]).sum()
}

pub fn compute_grading(d: &WeightedDiagram) -> Grading {
    compute_grading_with(&RootSystem::new(d.simple_type()), d)
}

pub fn compute_grading_with(rs: &RootSystem, d: &WeightedDiagram) -> Grading {
    let n = d.rank();
    let cartan = Matrix::from_rows(
        (1..=n).map(|i| (1..=n).map(|j| q(rs.cartan(i, j) as i64)).collect()).collect(),
    );
    let rhs: Vec<Q> = (1..=n).map(|i| q(if d.is_circled(i) { 2 } else { 0 })).collect();
    let h_theta = cartan.solve(&rhs).expect("Cartan matrix is invertible");
    let degrees: Vec<(Root, i32)> = rs.roots().iter().map(|r| (r.clone(), degree(d, r))).collect();
    let mut dim_by_level = BTreeMap::new();
    *dim_by_level.entry(0).or_insert(0) += n;
    for (_, p) in &degrees {
        *dim_by_level.entry(*p).or_insert(0) += 1;
    }
    Grading { diagram: d.clone(), h_theta, degrees, dim_by_level }
}

/// An irreducible component V_α of d_1.
#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub alpha: usize,
    /// Roots with coefficient 1 on α and 0 on every other circled node.
    pub roots: Vec<Root>,
    pub dim: usize,
    /// J_α: uncircled nodes adjacent to α.
    pub j_alpha: BTreeSet<usize>,
    /// c_i = α(H_{β_i}) for β_i ∈ J_α.
    pub highest_weight: BTreeMap<usize, i32>,
    /// The bond-rule value for each β_i ∈ J_α.
    pub bond_rule: BTreeMap<usize, i32>,
}

pub fn components(d: &WeightedDiagram) -> Vec<Component> {
    components_with(&RootSystem::new(d.simple_type()), d)
}

pub fn components_with(rs: &RootSystem, d: &WeightedDiagram) -> Vec<Component> {
    d.circled()
        .iter()
        .map(|&alpha| {
            let roots: Vec<Root> = rs
                .positive_roots()
                .iter()
                .filter(|r| r[alpha - 1] == 1 && degree(d, r) == 1)
                .cloned()
                .collect();
            let j_alpha: BTreeSet<usize> =
                rs.neighbors(alpha).into_iter().filter(|b| !d.is_circled(*b)).collect();
            let mut simple = vec![0; d.rank()];
            simple[alpha - 1] = 1;
            let highest_weight = j_alpha.iter().map(|&b| (b, rs.pairing(&simple, b))).collect();
            let bond_rule = j_alpha.iter().map(|&b| (b, bond_rule_value(rs, alpha, b))).collect();
            Component { alpha, dim: roots.len(), roots, j_alpha, highest_weight, bond_rule }
        })
        .collect()
}

/// −1 if ‖α‖ ≤ ‖β‖, else minus the number of bonds.
fn bond_rule_value(rs: &RootSystem, alpha: usize, beta: usize) -> i32 {
    if rs.node_length(alpha) <= rs.node_length(beta) {
        -1
    } else {
        -rs.bond(alpha, beta)
    }
}

/// The bond rule for a circled α and an adjacent uncircled β; it must agree
/// with the Cartan integer α(H_β).
pub fn bond_rule(d: &WeightedDiagram, alpha: usize, beta: usize) -> Result<i32, GradingError> {
    let rs = RootSystem::new(d.simple_type());
    if !d.is_circled(alpha) {
        return Err(GradingError::NotCircled(alpha));
    }
    if d.is_circled(beta) {
        return Err(GradingError::NotInTheta(beta));
    }
    if !rs.adjacent(alpha, beta) {
        return Err(GradingError::NotAdjacent(alpha, beta));
    }
    Ok(bond_rule_value(&rs, alpha, beta))
}
