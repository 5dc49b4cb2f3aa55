//! Root systems of the simple types with a fixed node numbering.
//!
//! Classical types use the linear numbering 1..n with the D_n fork at nodes
//! n−1, n. Exceptional types use Bourbaki numbering (E: node 2 hangs off
//! node 4; F4: nodes 1, 2 long; G2: node 1 short).
//!
//! Node indices are 1-based in every public function. Roots are integer
//! coordinate vectors in the simple-root basis, position `k` holding the
//! coefficient of node `k + 1`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Root = Vec<i32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub const ALL: [Family; 7] = [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G];

    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.letter() == c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("inadmissible type {family:?}{rank}")]
    InadmissibleType { family: Family, rank: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(RootSystemError::InadmissibleType { family, rank })
        }
    }

    /// Every admissible type of the given family with rank ≤ `max_rank`.
    pub fn up_to_rank(family: Family, max_rank: usize) -> Vec<SimpleType> {
        (1..=max_rank).filter_map(|n| SimpleType::new(family, n).ok()).collect()
    }

    /// Closed-form number of roots.
    pub fn root_count(self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Family::F => 48,
            Family::G => 12,
        }
    }

    pub fn dimension(self) -> usize {
        self.rank + self.root_count()
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| format!("unknown family in {s:?}"))?;
        let rank: usize = chars.as_str().parse().map_err(|_| format!("bad rank in {s:?}"))?;
        SimpleType::new(fam, rank).map_err(|e| e.to_string())
    }
}

/// Symmetric Gram matrix (α_i, α_j) with short roots of squared length 2.
fn gram_matrix(ty: SimpleType) -> Vec<Vec<i32>> {
    let n = ty.rank;
    let mut g = vec![vec![0i32; n]; n];
    let edge = |g: &mut Vec<Vec<i32>>, i: usize, j: usize, v: i32| {
        g[i - 1][j - 1] = v;
        g[j - 1][i - 1] = v;
    };
    match ty.family {
        Family::A => {
            for i in 1..n {
                edge(&mut g, i, i + 1, -1);
            }
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = 2;
            }
        }
        Family::B => {
            for i in 1..n {
                edge(&mut g, i, i + 1, -2);
            }
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = if i + 1 == n { 2 } else { 4 };
            }
        }
        Family::C => {
            for i in 1..n - 1 {
                edge(&mut g, i, i + 1, -1);
            }
            edge(&mut g, n - 1, n, -2);
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = if i + 1 == n { 4 } else { 2 };
            }
        }
        Family::D => {
            for i in 1..n - 1 {
                edge(&mut g, i, i + 1, -1);
            }
            edge(&mut g, n - 2, n, -1);
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = 2;
            }
        }
        Family::E => {
            edge(&mut g, 1, 3, -1);
            edge(&mut g, 2, 4, -1);
            for i in 3..n {
                edge(&mut g, i, i + 1, -1);
            }
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = 2;
            }
        }
        Family::F => {
            edge(&mut g, 1, 2, -2);
            edge(&mut g, 2, 3, -2);
            edge(&mut g, 3, 4, -1);
            for (i, len) in [4, 4, 2, 2].into_iter().enumerate() {
                g[i][i] = len;
            }
        }
        Family::G => {
            edge(&mut g, 1, 2, -3);
            g[0][0] = 2;
            g[1][1] = 6;
        }
    }
    g
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    ty: SimpleType,
    gram: Vec<Vec<i32>>,
    cartan: Vec<Vec<i32>>,
    positive: Vec<Root>,
    roots: Vec<Root>,
    index: HashMap<Root, usize>,
}

impl RootSystem {
    pub fn new(ty: SimpleType) -> Self {
        let n = ty.rank;
        let gram = gram_matrix(ty);
        let cartan: Vec<Vec<i32>> =
            (0..n).map(|i| (0..n).map(|j| 2 * gram[i][j] / gram[j][j]).collect()).collect();

        let simple = |i: usize| -> Root {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        };
        let mut known: BTreeSet<Root> = (0..n).map(simple).collect();
        let mut level: Vec<Root> = known.iter().cloned().collect();
        while !level.is_empty() {
            let mut next = BTreeSet::new();
            for beta in &level {
                for i in 0..n {
                    let pair: i32 = (0..n).map(|k| beta[k] * cartan[k][i]).sum();
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if known.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    if p - pair > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        next.insert(up);
                    }
                }
            }
            known.extend(next.iter().cloned());
            level = next.into_iter().collect();
        }
        let mut positive: Vec<Root> = known.into_iter().collect();
        positive.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| a.cmp(b)));
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|r| r.iter().map(|x| -x).collect::<Root>()));
        let index = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        RootSystem { ty, gram, cartan, positive, roots, index }
    }

    pub fn build(ty: SimpleType) -> Self {
        RootSystem::new(ty)
    }

    pub fn simple_type(&self) -> SimpleType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    /// Cartan integer C[i][j] = α_i(H_{α_j}) for 1-based nodes.
    pub fn cartan(&self, i: usize, j: usize) -> i32 {
        self.cartan[i - 1][j - 1]
    }

    pub fn cartan_matrix(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    /// Squared length of the simple root at a 1-based node.
    pub fn node_length(&self, i: usize) -> i32 {
        self.gram[i - 1][i - 1]
    }

    /// Positive roots ordered by height then lexicographically.
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// All roots: the positive roots followed by their negatives in the same order.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root_index(&self, r: &[i32]) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn is_root(&self, r: &[i32]) -> bool {
        self.index.contains_key(r)
    }

    /// Index of −roots[i].
    pub fn negative_index(&self, i: usize) -> usize {
        let m = self.positive.len();
        if i < m {
            i + m
        } else {
            i - m
        }
    }

    pub fn is_positive_index(&self, i: usize) -> bool {
        i < self.positive.len()
    }

    /// α(H_{α_j}) = Σ m_i C[i][j] for α = Σ m_i α_i and 1-based node j.
    pub fn pairing(&self, root: &[i32], j: usize) -> i32 {
        root.iter().zip(&self.cartan).map(|(m, row)| m * row[j - 1]).sum()
    }

    /// Invariant inner product (β, γ).
    pub fn inner(&self, a: &[i32], b: &[i32]) -> i32 {
        let mut s = 0;
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                s += x * y * self.gram[i][j];
            }
        }
        s
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.cartan[i - 1][j - 1] != 0
    }

    /// Number of bonds between two adjacent nodes (1, 2 or 3).
    pub fn bond(&self, i: usize, j: usize) -> i32 {
        self.cartan[i - 1][j - 1].abs().max(self.cartan[j - 1][i - 1].abs())
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (1..=self.rank()).filter(|&j| self.adjacent(i, j)).collect()
    }

    /// Partition of `nodes` into connected pieces of the Dynkin graph, each
    /// labelled with its induced simple type.
    pub fn connected_components(&self, nodes: &BTreeSet<usize>) -> Vec<Segment> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in nodes {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                if !comp.insert(u) {
                    continue;
                }
                for v in self.neighbors(u) {
                    if nodes.contains(&v) && !comp.contains(&v) {
                        stack.push(v);
                    }
                }
            }
            seen.extend(comp.iter().copied());
            out.push(self.identify(&comp));
        }
        out
    }

    /// Identifies the simple type of a connected node set and the standard
    /// numbering of its nodes.
    fn identify(&self, comp: &BTreeSet<usize>) -> Segment {
        let nodes: Vec<usize> = comp.iter().copied().collect();
        let k = nodes.len();
        let nbrs = |u: usize| -> Vec<usize> { self.neighbors(u).into_iter().filter(|v| comp.contains(v)).collect() };
        let walk = |from: usize, first: usize| -> Vec<usize> {
            let mut arm = vec![first];
            let mut prev = from;
            let mut cur = first;
            loop {
                let next: Vec<usize> = nbrs(cur).into_iter().filter(|&v| v != prev).collect();
                match next.as_slice() {
                    [v] => {
                        arm.push(*v);
                        prev = cur;
                        cur = *v;
                    }
                    _ => return arm,
                }
            }
        };
        let (family, standard) = if k == 1 {
            (Family::A, nodes.clone())
        } else if let Some(&b) = nodes.iter().find(|&&u| nbrs(u).len() == 3) {
            let mut arms: Vec<Vec<usize>> = nbrs(b).into_iter().map(|w| walk(b, w)).collect();
            arms.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x[0].cmp(&y[0])));
            if arms[1].len() == 1 {
                // D4: the arm with the smallest node plays the chain end.
                let (long, t1, t2) = if arms[2].len() == 1 { (0, 1, 2) } else { (2, 0, 1) };
                let mut order: Vec<usize> = arms[long].iter().rev().copied().collect();
                order.push(b);
                order.push(arms[t1][0]);
                order.push(arms[t2][0]);
                (Family::D, order)
            } else {
                let mut order = vec![arms[1][1], arms[0][0], arms[1][0], b];
                order.extend(arms[2].iter().copied());
                (Family::E, order)
            }
        } else {
            let end = *nodes.iter().find(|&&u| nbrs(u).len() == 1).expect("path has an endpoint");
            let mut path = vec![end];
            path.extend(walk(end, nbrs(end)[0]));
            let bonds: Vec<i32> = path.windows(2).map(|w| self.bond(w[0], w[1])).collect();
            let long = |u: usize| self.node_length(u);
            if bonds.iter().all(|&b| b == 1) {
                (Family::A, path)
            } else if bonds.contains(&3) {
                if long(path[0]) > long(path[1]) {
                    path.reverse();
                }
                (Family::G, path)
            } else if k == 4 && bonds[1] == 2 {
                if long(path[0]) < long(path[3]) {
                    path.reverse();
                }
                (Family::F, path)
            } else {
                if bonds[0] == 2 {
                    path.reverse();
                }
                if k == 2 {
                    if long(path[0]) < long(path[1]) {
                        path.reverse();
                    }
                    (Family::B, path)
                } else if long(path[k - 1]) < long(path[0]) {
                    (Family::B, path)
                } else {
                    (Family::C, path)
                }
            }
        };
        let ty = SimpleType::new(family, k).expect("identified type is admissible");
        let std = RootSystem::new(ty);
        for a in 0..k {
            for b in 0..k {
                assert_eq!(
                    std.cartan[a][b],
                    self.cartan(standard[a], standard[b]),
                    "segment identification failed for {:?} in {}",
                    nodes,
                    self.ty
                );
            }
        }
        Segment { nodes, ty, standard }
    }

    /// Diagram automorphisms as node permutations (`perm[i-1]` is the image
    /// of node i), identity first.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        automorphisms(self.ty)
    }
}

pub fn automorphisms(ty: SimpleType) -> Vec<Vec<usize>> {
    let n = ty.rank;
    let id: Vec<usize> = (1..=n).collect();
    let mut out = vec![id.clone()];
    match ty.family {
        Family::A if n >= 2 => out.push((1..=n).rev().collect()),
        Family::D if n == 4 => {
            for tips in [[1, 4, 3], [3, 1, 4], [3, 4, 1], [4, 1, 3], [4, 3, 1]] {
                out.push(vec![tips[0], 2, tips[1], tips[2]]);
            }
        }
        Family::D => {
            let mut p = id.clone();
            p.swap(n - 2, n - 1);
            out.push(p);
        }
        Family::E if n == 6 => out.push(vec![6, 2, 5, 4, 3, 1]),
        _ => {}
    }
    out
}

/// A connected piece of a node subset with its induced type; `standard[k]`
/// is the ambient node playing the role of node k + 1 of `ty`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub nodes: Vec<usize>,
    pub ty: SimpleType,
    pub standard: Vec<usize>,
}

pub fn height(r: &[i32]) -> i32 {
    r.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(f: Family, n: usize) -> RootSystem {
        RootSystem::new(SimpleType::new(f, n).unwrap())
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn root_counts_match_closed_forms() {
        for f in Family::ALL {
            for ty in SimpleType::up_to_rank(f, 9) {
                let r = RootSystem::new(ty);
                assert_eq!(r.roots().len(), ty.root_count(), "{ty}");
                assert_eq!(r.positive_roots().len() * 2, ty.root_count());
            }
        }
        assert_eq!(rs(Family::A, 2).roots().len(), 6);
    }

    #[test]
    fn inadmissible_types_are_rejected() {
        assert!(SimpleType::new(Family::C, 2).is_err());
        assert!(SimpleType::new(Family::D, 3).is_err());
        assert!(SimpleType::new(Family::E, 9).is_err());
        assert!(SimpleType::new(Family::G, 3).is_err());
        assert!(SimpleType::new(Family::A, 0).is_err());
    }

    #[test]
    fn cartan_shape() {
        for f in Family::ALL {
            for ty in SimpleType::up_to_rank(f, 9) {
                let r = RootSystem::new(ty);
                for i in 1..=ty.rank {
                    assert_eq!(r.cartan(i, i), 2);
                    for j in 1..=ty.rank {
                        if i != j {
                            assert!((-3..=0).contains(&r.cartan(i, j)));
                            assert_eq!(r.cartan(i, j) == 0, r.cartan(j, i) == 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn d4_branch_node_is_2() {
        let r = rs(Family::D, 4);
        assert_eq!(r.roots().len(), 24);
        assert_eq!(r.neighbors(2), vec![1, 3, 4]);
        assert!(!r.adjacent(3, 4));
    }

    #[test]
    fn f4_double_bond_between_2_and_3() {
        let r = rs(Family::F, 4);
        assert_eq!(r.roots().len(), 48);
        assert_eq!(r.bond(2, 3), 2);
        assert_eq!(r.bond(1, 2), 1);
        assert_eq!(r.bond(3, 4), 1);
        assert_eq!(r.node_length(2), 4);
        assert_eq!(r.node_length(3), 2);
    }

    #[test]
    fn exceptional_numbering() {
        let e6 = rs(Family::E, 6);
        assert_eq!(e6.neighbors(4), vec![2, 3, 5]);
        assert_eq!(e6.neighbors(2), vec![4]);
        let g2 = rs(Family::G, 2);
        assert_eq!(g2.cartan(1, 2), -1);
        assert_eq!(g2.cartan(2, 1), -3);
        assert!(g2.node_length(1) < g2.node_length(2));
    }

    #[test]
    fn pairing_examples() {
        let a2 = rs(Family::A, 2);
        assert_eq!(a2.pairing(&[1, 0], 1), 2);
        assert_eq!(a2.pairing(&[1, 1], 1), 1);
        let f4 = rs(Family::F, 4);
        assert_eq!(f4.pairing(&[0, 1, 0, 0], 3), -2);
    }

    #[test]
    fn pairing_is_bounded_and_odd() {
        for f in Family::ALL {
            for ty in SimpleType::up_to_rank(f, 8) {
                let r = RootSystem::new(ty);
                for g in r.roots() {
                    let neg: Root = g.iter().map(|x| -x).collect();
                    for j in 1..=ty.rank {
                        let p = r.pairing(g, j);
                        assert!((-3..=3).contains(&p));
                        assert_eq!(r.pairing(&neg, j), -p);
                    }
                }
            }
        }
    }

    #[test]
    fn positive_roots_reachable_by_simple_steps() {
        for f in Family::ALL {
            for ty in SimpleType::up_to_rank(f, 8) {
                let r = RootSystem::new(ty);
                for g in r.positive_roots() {
                    if height(g) == 1 {
                        continue;
                    }
                    let reachable = (0..ty.rank).any(|i| {
                        let mut d = g.clone();
                        d[i] -= 1;
                        r.is_root(&d) && d.iter().all(|&x| x >= 0)
                    });
                    assert!(reachable, "{ty} {g:?}");
                }
            }
        }
    }

    #[test]
    fn ordering_is_by_height_then_lex() {
        let r = rs(Family::B, 3);
        let p = r.positive_roots();
        for w in p.windows(2) {
            assert!((height(&w[0]), &w[0]) < (height(&w[1]), &w[1]));
        }
        assert_eq!(r.root_index(&p[0]), Some(0));
        let m = p.len();
        assert_eq!(r.negative_index(0), m);
        assert_eq!(r.roots()[m].iter().map(|x| -x).collect::<Root>(), p[0]);
    }

    #[test]
    fn components_examples() {
        let a5 = rs(Family::A, 5);
        let c = a5.connected_components(&set(&[1, 2, 4]));
        let nodes: Vec<Vec<usize>> = c.iter().map(|s| s.nodes.clone()).collect();
        assert_eq!(nodes, vec![vec![1, 2], vec![4]]);

        let d9 = rs(Family::D, 9);
        let c = d9.connected_components(&set(&[1, 4, 6, 7, 9]));
        let nodes: Vec<Vec<usize>> = c.iter().map(|s| s.nodes.clone()).collect();
        assert_eq!(nodes, vec![vec![1], vec![4], vec![6, 7, 9]]);

        let d4 = rs(Family::D, 4);
        let c = d4.connected_components(&set(&[1, 3, 4]));
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|s| s.ty == SimpleType::new(Family::A, 1).unwrap()));
    }

    #[test]
    fn segment_labels() {
        let label = |r: &RootSystem, nodes: &[usize]| r.connected_components(&set(nodes))[0].ty.to_string();
        let d7 = rs(Family::D, 7);
        assert_eq!(label(&d7, &[3, 4, 5, 6, 7]), "D5");
        assert_eq!(label(&d7, &[5, 6, 7]), "A3");
        let b5 = rs(Family::B, 5);
        assert_eq!(label(&b5, &[3, 4, 5]), "B3");
        assert_eq!(label(&b5, &[4, 5]), "B2");
        let c5 = rs(Family::C, 5);
        assert_eq!(label(&c5, &[3, 4, 5]), "C3");
        assert_eq!(label(&c5, &[4, 5]), "B2");
        let f4 = rs(Family::F, 4);
        assert_eq!(label(&f4, &[1, 2, 3]), "B3");
        assert_eq!(label(&f4, &[2, 3, 4]), "C3");
        let e8 = rs(Family::E, 8);
        assert_eq!(label(&e8, &[1, 2, 3, 4, 5, 6, 7]), "E7");
        assert_eq!(label(&e8, &[2, 3, 4, 5, 6]), "D5");
        assert_eq!(label(&e8, &[2, 3, 4, 5]), "D4");
        assert_eq!(label(&e8, &[1, 2, 3, 4, 5, 6]), "E6");
    }

    #[test]
    fn automorphisms_preserve_cartan() {
        for f in Family::ALL {
            for ty in SimpleType::up_to_rank(f, 8) {
                let r = RootSystem::new(ty);
                let autos = r.automorphisms();
                assert_eq!(autos[0], (1..=ty.rank).collect::<Vec<_>>());
                for p in autos {
                    for i in 1..=ty.rank {
                        for j in 1..=ty.rank {
                            assert_eq!(r.cartan(i, j), r.cartan(p[i - 1], p[j - 1]));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn type_round_trips_through_text() {
        for f in Family::ALL {
            for ty in SimpleType::up_to_rank(f, 9) {
                assert_eq!(ty.to_string().parse::<SimpleType>().unwrap(), ty);
            }
        }
    }
}
