//! Chevalley bases with integer structure constants.
//!
//! Basis order: h_1..h_n (simple coroots), then e_γ for every root γ in the
//! order of [`RootSystem::roots`]. Signs are fixed by declaring every
//! extraspecial pair positive with respect to the positive-root order and
//! propagating through the standard quadruple relation. Any other consistent
//! choice yields an isomorphic algebra, and every downstream verdict is a
//! rank or nondegeneracy statement, hence independent of the choice.

use num_traits::Zero;

use crate::linalg::{q, Matrix, Q};
use crate::rootsys::{Root, RootSystem};

/// Sparse integer vector in the algebra basis.
pub type Sparse = Vec<(usize, i64)>;

#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    rs: RootSystem,
    /// N_{a,b} for root indices, 0 when a+b is not a root.
    n_table: Vec<i8>,
    /// Root index of roots[a] + roots[b], or u32::MAX.
    sum_table: Vec<u32>,
    /// Coroot h_γ in the basis h_1..h_n.
    coroots: Vec<Vec<i64>>,
    killing_h: Vec<Vec<i64>>,
    killing_e: Vec<i64>,
}

const NONE: u32 = u32::MAX;

impl ChevalleyAlgebra {
    pub fn new(rs: RootSystem) -> Self {
        let nr = rs.roots().len();
        let n = rs.rank();
        let mut sum_table = vec![NONE; nr * nr];
        for a in 0..nr {
            for b in 0..nr {
                let s: Root = rs.roots()[a].iter().zip(&rs.roots()[b]).map(|(x, y)| x + y).collect();
                if let Some(i) = rs.root_index(&s) {
                    sum_table[a * nr + b] = i as u32;
                }
            }
        }
        let mut alg = ChevalleyAlgebra {
            n_table: vec![0; nr * nr],
            sum_table,
            coroots: Vec::new(),
            killing_h: Vec::new(),
            killing_e: Vec::new(),
            rs,
        };
        alg.coroots = (0..nr).map(|i| alg.coroot_of(i)).collect();
        alg.fill_positive_pairs();
        for a in 0..nr {
            for b in 0..nr {
                if alg.sum_table[a * nr + b] != NONE {
                    let v = alg.structure_general(a, b);
                    alg.n_table[a * nr + b] = v as i8;
                }
            }
        }
        alg.killing_h = (0..n).map(|i| (0..n).map(|j| alg.killing_basis(i, j)).collect()).collect();
        alg.killing_e = (0..nr).map(|r| alg.killing_basis(n + r, n + alg.rs.negative_index(r))).collect();
        alg
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn dim(&self) -> usize {
        self.rs.rank() + self.rs.roots().len()
    }

    /// Basis index of e_γ for a root index.
    pub fn root_basis(&self, r: usize) -> usize {
        self.rank() + r
    }

    /// Basis index of h_i for a 1-based node.
    pub fn h_basis(&self, node: usize) -> usize {
        node - 1
    }

    pub fn basis_label(&self, k: usize) -> String {
        let n = self.rank();
        if k < n {
            format!("h{}", k + 1)
        } else {
            let r = &self.rs.roots()[k - n];
            let coords: Vec<String> = r.iter().map(i32::to_string).collect();
            format!("e[{}]", coords.join(","))
        }
    }

    fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let s = self.sum_table[a * self.rs.roots().len() + b];
        (s != NONE).then_some(s as usize)
    }

    /// Structure constant N_{a,b} for root indices (0 if a+b is not a root).
    pub fn structure_constant(&self, a: usize, b: usize) -> i64 {
        self.n_table[a * self.rs.roots().len() + b] as i64
    }

    fn len2(&self, r: usize) -> i64 {
        let g = &self.rs.roots()[r];
        self.rs.inner(g, g) as i64
    }

    fn coroot_of(&self, r: usize) -> Vec<i64> {
        let g = &self.rs.roots()[r];
        let l = self.len2(r);
        (0..self.rank())
            .map(|i| {
                let c = g[i] as i64 * self.rs.node_length(i + 1) as i64;
                debug_assert_eq!(c % l, 0);
                c / l
            })
            .collect()
    }

    /// Carter's algorithm on positive pairs, processed by the height order of the sum.
    fn fill_positive_pairs(&mut self) {
        let m = self.rs.positive_roots().len();
        let nr = self.rs.roots().len();
        for xi in 0..m {
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for a in 0..m {
                for b in a + 1..m {
                    if self.sum(a, b) == Some(xi) {
                        pairs.push((a, b));
                    }
                }
            }
            let Some(&(a1, b1)) = pairs.first() else { continue };
            let p = self.string_down(b1, a1);
            let n1 = p + 1;
            self.n_table[a1 * nr + b1] = n1 as i8;
            self.n_table[b1 * nr + a1] = -(n1 as i8);
            let xi_len = self.len2(xi);
            for &(a, b) in &pairs[1..] {
                let na1 = self.rs.negative_index(a1);
                let nb1 = self.rs.negative_index(b1);
                let mut acc = num_rational::Ratio::<i64>::zero();
                if let Some(s) = self.sum(b, na1) {
                    let t = self.structure_general(b, na1) * self.structure_general(a, nb1);
                    acc += num_rational::Ratio::new(t, self.len2(s));
                }
                if let Some(s) = self.sum(a, na1) {
                    let t = self.structure_general(na1, a) * self.structure_general(b, nb1);
                    acc += num_rational::Ratio::new(t, self.len2(s));
                }
                let v = acc * xi_len / n1;
                assert!(v.is_integer(), "non-integral structure constant");
                let v = v.to_integer();
                assert!(v != 0, "vanishing structure constant on a root sum");
                self.n_table[a * nr + b] = v as i8;
                self.n_table[b * nr + a] = -(v as i8);
            }
        }
    }

    /// p = max{k : roots[b] − k·roots[a] ∈ Φ}.
    fn string_down(&self, b: usize, a: usize) -> i64 {
        let ra = &self.rs.roots()[a];
        let mut cur = self.rs.roots()[b].clone();
        let mut p = 0;
        loop {
            for (c, x) in cur.iter_mut().zip(ra) {
                *c -= x;
            }
            if self.rs.is_root(&cur) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    /// N_{x,y} for arbitrary roots, reduced to the positive-pair table.
    fn structure_general(&self, x: usize, y: usize) -> i64 {
        let nr = self.rs.roots().len();
        let Some(z) = self.sum(x, y) else { return 0 };
        let px = self.rs.is_positive_index(x);
        let py = self.rs.is_positive_index(y);
        match (px, py) {
            (true, true) => self.n_table[x * nr + y] as i64,
            (false, false) => -self.structure_general(self.rs.negative_index(x), self.rs.negative_index(y)),
            (false, true) => -self.structure_general(y, x),
            (true, false) => {
                if self.rs.is_positive_index(z) {
                    let v = self.structure_general(self.rs.negative_index(y), z);
                    -(self.len2(z) * v) / self.len2(x)
                } else {
                    let v = self.structure_general(self.rs.negative_index(z), x);
                    (self.len2(z) * v) / self.len2(y)
                }
            }
        }
    }

    /// Bracket of two basis elements.
    pub fn bracket_basis(&self, a: usize, b: usize) -> Sparse {
        let n = self.rank();
        match (a < n, b < n) {
            (true, true) => Vec::new(),
            (true, false) => {
                let c = self.rs.pairing(&self.rs.roots()[b - n], a + 1) as i64;
                if c == 0 {
                    Vec::new()
                } else {
                    vec![(b, c)]
                }
            }
            (false, true) => self.bracket_basis(b, a).into_iter().map(|(k, c)| (k, -c)).collect(),
            (false, false) => {
                let (ra, rb) = (a - n, b - n);
                if self.rs.negative_index(ra) == rb {
                    self.coroots[ra].iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c)).collect()
                } else if let Some(s) = self.sum(ra, rb) {
                    vec![(n + s, self.structure_constant(ra, rb))]
                } else {
                    Vec::new()
                }
            }
        }
    }

    /// Bracket of two rational coefficient vectors.
    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let d = self.dim();
        let mut out = vec![Q::zero(); d];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xa * yb;
                for (k, s) in self.bracket_basis(a, b) {
                    out[k] += &c * q(s);
                }
            }
        }
        out
    }

    /// Matrix of ad(x) on the whole algebra.
    pub fn adjoint_matrix(&self, x: &[Q]) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for j in 0..d {
                for (k, s) in self.bracket_basis(a, j) {
                    m[(k, j)] += xa * q(s);
                }
            }
        }
        m
    }

    /// tr(ad b_a ad b_b) computed from sparse brackets.
    fn killing_basis(&self, a: usize, b: usize) -> i64 {
        let mut tr = 0;
        for j in 0..self.dim() {
            for (k, c) in self.bracket_basis(b, j) {
                for (l, c2) in self.bracket_basis(a, k) {
                    if l == j {
                        tr += c * c2;
                    }
                }
            }
        }
        tr
    }

    /// Killing form on basis elements.
    pub fn killing_entry(&self, a: usize, b: usize) -> i64 {
        let n = self.rank();
        match (a < n, b < n) {
            (true, true) => self.killing_h[a][b],
            (false, false) if self.rs.negative_index(a - n) == b - n => self.killing_e[a - n],
            _ => 0,
        }
    }

    /// B(x, y) = tr(ad x ad y).
    pub fn killing_form(&self, x: &[Q], y: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let k = self.killing_entry(a, b);
                if k != 0 {
                    acc += xa * yb * q(k);
                }
            }
        }
        acc
    }

    /// Jacobi sum for three basis elements, as a sparse integer vector (empty when it vanishes).
    pub fn jacobi_defect(&self, a: usize, b: usize, c: usize) -> Sparse {
        let mut acc = vec![0i64; self.dim()];
        let mut add = |x: usize, y: usize, z: usize| {
            for (k, s) in self.bracket_basis(x, y) {
                for (l, t) in self.bracket_basis(k, z) {
                    acc[l] += s * t;
                }
            }
        };
        add(a, b, c);
        add(b, c, a);
        add(c, a, b);
        acc.into_iter().enumerate().filter(|(_, v)| *v != 0).collect()
    }
}

pub fn build_chevalley(rs: RootSystem) -> ChevalleyAlgebra {
    ChevalleyAlgebra::new(rs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{Family, SimpleType};
    use num_traits::Signed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alg(f: Family, n: usize) -> ChevalleyAlgebra {
        ChevalleyAlgebra::new(RootSystem::new(SimpleType::new(f, n).unwrap()))
    }

    fn unit(d: usize, k: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); d];
        v[k] = q(1);
        v
    }

    #[test]
    fn sl2_relations() {
        let a = alg(Family::A, 1);
        assert_eq!(a.dim(), 3);
        // basis h, e, f
        assert_eq!(a.bracket_basis(1, 2), vec![(0, 1)]);
        assert_eq!(a.bracket_basis(0, 1), vec![(1, 2)]);
        assert_eq!(a.bracket_basis(0, 2), vec![(2, -2)]);
        let ad_h = a.adjoint_matrix(&unit(3, 0));
        assert_eq!(ad_h, Matrix::from_i64(&[vec![0, 0, 0], vec![0, 2, 0], vec![0, 0, -2]]));
        assert_eq!(a.killing_form(&unit(3, 0), &unit(3, 0)), q(8));
    }

    #[test]
    fn a2_constants_are_units() {
        let a = alg(Family::A, 2);
        let rs = a.root_system();
        let a1 = rs.root_index(&[1, 0]).unwrap();
        let a2 = rs.root_index(&[0, 1]).unwrap();
        let s = rs.root_index(&[1, 1]).unwrap();
        assert_eq!(a.structure_constant(a1, a2).abs(), 1);
        let img = a.adjoint_matrix(&unit(a.dim(), a.root_basis(a1))).mul_vec(&unit(a.dim(), a.root_basis(a2)));
        for (k, v) in img.iter().enumerate() {
            if k == a.root_basis(s) {
                assert_eq!(v.abs(), q(1));
            } else {
                assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn structure_constants_are_string_lengths() {
        for ty in [
            SimpleType::new(Family::A, 4).unwrap(),
            SimpleType::new(Family::B, 3).unwrap(),
            SimpleType::new(Family::C, 4).unwrap(),
            SimpleType::new(Family::D, 5).unwrap(),
            SimpleType::new(Family::F, 4).unwrap(),
            SimpleType::new(Family::G, 2).unwrap(),
            SimpleType::new(Family::E, 6).unwrap(),
        ] {
            let a = ChevalleyAlgebra::new(RootSystem::new(ty));
            let nr = a.root_system().roots().len();
            let mut max = 0;
            for x in 0..nr {
                for y in 0..nr {
                    let v = a.structure_constant(x, y);
                    if a.sum(x, y).is_some() {
                        assert_eq!(v.abs(), a.string_down(y, x) + 1, "{ty}");
                        assert_eq!(a.structure_constant(y, x), -v);
                        let (nx, ny) = (a.rs.negative_index(x), a.rs.negative_index(y));
                        assert_eq!(a.structure_constant(nx, ny), -v);
                        max = max.max(v.abs());
                    } else {
                        assert_eq!(v, 0);
                    }
                }
            }
            if ty.is_simply_laced() {
                assert_eq!(max, 1);
            }
            if ty.family == Family::G {
                assert_eq!(max, 3);
            }
        }
    }

    #[test]
    fn adjoint_is_linear() {
        let a = alg(Family::B, 2);
        let d = a.dim();
        let x = unit(d, 0);
        let y = unit(d, a.root_basis(0));
        let s: Vec<Q> = x.iter().zip(&y).map(|(p, r)| p + r).collect();
        assert_eq!(a.adjoint_matrix(&s), a.adjoint_matrix(&x).add(&a.adjoint_matrix(&y)));
    }

    #[test]
    fn jacobi_exhaustive_small() {
        for ty in [SimpleType::new(Family::A, 3).unwrap(), SimpleType::new(Family::G, 2).unwrap()] {
            let a = ChevalleyAlgebra::new(RootSystem::new(ty));
            let d = a.dim();
            for x in 0..d {
                for y in 0..d {
                    for z in 0..d {
                        assert!(a.jacobi_defect(x, y, z).is_empty(), "{ty} {x} {y} {z}");
                    }
                }
            }
        }
    }

    #[test]
    fn killing_is_nondegenerate_and_invariant() {
        let a = alg(Family::B, 3);
        let d = a.dim();
        let gram = Matrix::from_rows(
            (0..d).map(|i| (0..d).map(|j| q(a.killing_entry(i, j))).collect()).collect(),
        );
        assert!(!gram.det().is_zero());
        assert!(gram.is_symmetric());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (i, j, k) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
            let (x, y, z) = (unit(d, i), unit(d, j), unit(d, k));
            let lhs = a.killing_form(&a.bracket(&z, &x), &y) + a.killing_form(&x, &a.bracket(&z, &y));
            assert!(lhs.is_zero());
        }
    }

    #[test]
    fn killing_matches_trace_definition() {
        let a = alg(Family::G, 2);
        let d = a.dim();
        for i in 0..d {
            for j in 0..d {
                let tr = a.adjoint_matrix(&unit(d, i)).mul(&a.adjoint_matrix(&unit(d, j))).trace();
                assert_eq!(tr, q(a.killing_entry(i, j)));
            }
        }
    }
}
