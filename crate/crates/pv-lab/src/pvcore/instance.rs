use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{dot, rank_of_vectors, Matrix, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PvError {
    #[error("empty component subset")]
    EmptySubset,
    #[error("component index {0} out of range")]
    BadComponent(usize),
    #[error("the level-one space is zero")]
    EmptyLevelOne,
    #[error("point is not generic: orbit rank {found} below the certified {expected}")]
    NonGenericPoint { found: usize, expected: usize },
}

/// Sparse square operator on V.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Op {
    dim: usize,
    entries: Vec<(usize, usize, Q)>,
}

impl Op {
    pub fn new(dim: usize, entries: impl IntoIterator<Item = (usize, usize, Q)>) -> Op {
        let mut acc: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "operator entry out of range");
            *acc.entry((r, c)).or_insert_with(Q::zero) += v;
        }
        Op { dim, entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((r, c), v)| (r, c, v)).collect() }
    }

    pub fn from_matrix(m: &Matrix) -> Op {
        assert!(m.is_square());
        let n = m.rows();
        let mut entries = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if !m[(r, c)].is_zero() {
                    entries.push((r, c, m[(r, c)].clone()));
                }
            }
        }
        Op { dim: n, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, Q)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (r, c, v) in &self.entries {
            m[(*r, *c)] = v.clone();
        }
        m
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim];
        for (r, c, v) in &self.entries {
            if !x[*c].is_zero() {
                out[*r] += v * &x[*c];
            }
        }
        out
    }

    /// Compression to the coordinates `coords` (given in increasing order).
    pub fn restrict(&self, coords: &[usize]) -> Op {
        let mut map = vec![usize::MAX; self.dim];
        for (k, &c) in coords.iter().enumerate() {
            map[c] = k;
        }
        let entries = self
            .entries
            .iter()
            .filter(|(r, c, _)| map[*r] != usize::MAX && map[*c] != usize::MAX)
            .map(|(r, c, v)| (map[*r], map[*c], v.clone()))
            .collect();
        Op { dim: coords.len(), entries }
    }

    /// Σ coeffs[i] · ops[i].
    pub fn combine(dim: usize, coeffs: &[Q], ops: &[Op]) -> Op {
        let mut acc: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (a, op) in coeffs.iter().zip(ops) {
            if a.is_zero() {
                continue;
            }
            for (r, c, v) in &op.entries {
                *acc.entry((*r, *c)).or_insert_with(Q::zero) += a * v;
            }
        }
        Op { dim, entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((r, c), v)| (r, c, v)).collect() }
    }

    /// Flattened dense entries, used for span computations.
    pub fn flatten(&self) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim * self.dim];
        for (r, c, x) in &self.entries {
            v[r * self.dim + c] = x.clone();
        }
        v
    }
}

/// A level-one component: a labelled set of coordinates of V.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PvComponent {
    pub label: String,
    pub coords: Vec<usize>,
}

/// A Lie algebra of operators on V with an invariant form, a character map
/// and a lattice of invariant coordinate subspaces.
#[derive(Clone, Debug)]
pub struct PvInstance {
    pub name: String,
    pub dim_v: usize,
    /// One operator per basis vector of the abstract algebra.
    pub ops: Vec<Op>,
    pub labels: Vec<String>,
    /// Gram matrix of the ambient invariant form on the algebra basis.
    pub form: Matrix,
    /// Linear map from algebra coordinates to the character space.
    pub abel: Matrix,
    pub components: Vec<PvComponent>,
}

impl PvInstance {
    pub fn new(
        name: impl Into<String>,
        dim_v: usize,
        ops: Vec<Op>,
        labels: Vec<String>,
        form: Matrix,
        abel: Matrix,
        components: Vec<PvComponent>,
    ) -> PvInstance {
        let m = ops.len();
        assert!(ops.iter().all(|o| o.dim() == dim_v), "operator size differs from dim V");
        assert_eq!(labels.len(), m);
        assert_eq!((form.rows(), form.cols()), (m, m), "form size");
        assert_eq!(abel.cols(), m, "character map size");
        PvInstance { name: name.into(), dim_v, ops, labels, form, abel, components }
    }

    pub fn dim_algebra(&self) -> usize {
        self.ops.len()
    }

    /// Number of independent characters.
    pub fn n_characters(&self) -> usize {
        self.abel.rank()
    }

    /// Coordinates of the sum of the given components, in increasing order.
    pub fn coords_of(&self, gamma: &[usize]) -> Result<Vec<usize>, PvError> {
        if gamma.is_empty() {
            return Err(PvError::EmptySubset);
        }
        let mut coords = Vec::new();
        for &g in gamma {
            let c = self.components.get(g).ok_or(PvError::BadComponent(g))?;
            coords.extend(c.coords.iter().copied());
        }
        coords.sort_unstable();
        coords.dedup();
        Ok(coords)
    }

    fn restricted_components(&self, gamma: &[usize], coords: &[usize]) -> Vec<PvComponent> {
        let mut map = vec![usize::MAX; self.dim_v];
        for (k, &c) in coords.iter().enumerate() {
            map[c] = k;
        }
        let mut g = gamma.to_vec();
        g.sort_unstable();
        g.dedup();
        g.iter()
            .map(|&i| {
                let c = &self.components[i];
                PvComponent { label: c.label.clone(), coords: c.coords.iter().map(|&x| map[x]).collect() }
            })
            .collect()
    }

    /// The same algebra acting on the sum of the components in `gamma`.
    pub fn restrict(&self, gamma: &[usize]) -> Result<PvInstance, PvError> {
        let coords = self.coords_of(gamma)?;
        let components = self.restricted_components(gamma, &coords);
        let labels: Vec<&str> = components.iter().map(|c| c.label.as_str()).collect();
        Ok(PvInstance {
            name: format!("{}|{}", self.name, labels.join("+")),
            dim_v: coords.len(),
            ops: self.ops.iter().map(|o| o.restrict(&coords)).collect(),
            labels: self.labels.clone(),
            form: self.form.clone(),
            abel: self.abel.clone(),
            components,
        })
    }

    /// The subalgebra spanned by `basis` (algebra coordinate vectors) acting
    /// on the sum of the components in `gamma`.
    pub fn subalgebra_on(&self, basis: &[Vec<Q>], gamma: &[usize]) -> Result<PvInstance, PvError> {
        let coords = self.coords_of(gamma)?;
        let components = self.restricted_components(gamma, &coords);
        let m = self.dim_algebra();
        let b = Matrix::from_columns(m, basis);
        let ops = basis
            .iter()
            .map(|a| Op::combine(self.dim_v, a, &self.ops).restrict(&coords))
            .collect();
        let labels = (0..basis.len()).map(|k| format!("s{}", k + 1)).collect();
        let form = b.transpose().mul(&self.form).mul(&b);
        let abel = self.abel.mul(&b);
        let names: Vec<&str> = components.iter().map(|c| c.label.as_str()).collect();
        Ok(PvInstance {
            name: format!("{}|isotropy on {}", self.name, names.join("+")),
            dim_v: coords.len(),
            ops,
            labels,
            form,
            abel,
            components,
        })
    }

    /// The operator Σ a_i M_i.
    pub fn operator(&self, a: &[Q]) -> Op {
        Op::combine(self.dim_v, a, &self.ops)
    }

    fn span(&self) -> OpSpan {
        OpSpan::new(self.ops.iter().map(Op::flatten).collect())
    }

    fn bracket_in(&self, span: &OpSpan, i: usize, j: usize) -> Option<Vec<Q>> {
        let c = self.ops[i].to_matrix().commutator(&self.ops[j].to_matrix());
        span.coords(&Op::from_matrix(&c).flatten())
    }

    /// Coordinates of [M_i, M_j] in the operator basis, if it lies in the span.
    pub fn bracket_coords(&self, i: usize, j: usize) -> Option<Vec<Q>> {
        self.bracket_in(&self.span(), i, j)
    }

    /// First pair of basis operators whose commutator leaves the span.
    pub fn closure_defect(&self) -> Option<(usize, usize)> {
        let span = self.span();
        for i in 0..self.dim_algebra() {
            for j in i + 1..self.dim_algebra() {
                if self.bracket_in(&span, i, j).is_none() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Whether the operators are linearly independent (faithful action).
    pub fn is_faithful(&self) -> bool {
        let flat: Vec<Vec<Q>> = self.ops.iter().map(Op::flatten).collect();
        rank_of_vectors(&flat) == self.dim_algebra()
    }

    /// Every component is mapped into itself by every operator.
    pub fn components_invariant(&self) -> bool {
        self.components.iter().all(|comp| {
            let mut inside = vec![false; self.dim_v];
            for &c in &comp.coords {
                inside[c] = true;
            }
            self.ops.iter().all(|o| o.entries().iter().all(|(r, c, _)| !inside[*c] || inside[*r]))
        })
    }

    /// form([z,x],y) + form(x,[z,y]) = 0 for all basis triples.
    pub fn form_invariant(&self) -> bool {
        let m = self.dim_algebra();
        let span = self.span();
        let brackets: Vec<Vec<Option<Vec<Q>>>> =
            (0..m).map(|z| (0..m).map(|x| self.bracket_in(&span, z, x)).collect()).collect();
        for row in &brackets {
            for x in 0..m {
                for y in 0..m {
                    let (Some(zx), Some(zy)) = (&row[x], &row[y]) else {
                        return false;
                    };
                    let a = dot(zx, &self.form.column(y));
                    let b = dot(&self.form.column(x), zy);
                    if !(a + b).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Coordinates in the span of flattened operators, through an invertible
/// square submatrix on independent operators and rows.
struct OpSpan {
    flats: Vec<Vec<Q>>,
    cols: Vec<usize>,
    rows: Vec<usize>,
    inv: Matrix,
}

impl OpSpan {
    fn new(flats: Vec<Vec<Q>>) -> OpSpan {
        let n = flats.first().map_or(0, Vec::len);
        let (_, cols) = Matrix::from_columns(n, &flats).rref();
        let chosen: Vec<Vec<Q>> = cols.iter().map(|&c| flats[c].clone()).collect();
        let (_, rows) = Matrix::from_rows(chosen).rref();
        let r = cols.len();
        let sq = Matrix::from_rows(rows.iter().map(|&row| cols.iter().map(|&c| flats[c][row].clone()).collect()).collect());
        let inv_cols: Vec<Vec<Q>> = (0..r)
            .map(|k| {
                let e: Vec<Q> = (0..r).map(|i| if i == k { Q::one() } else { Q::zero() }).collect();
                sq.solve(&e).expect("independent rows and columns")
            })
            .collect();
        OpSpan { inv: Matrix::from_columns(r, &inv_cols), flats, cols, rows }
    }

    fn coords(&self, target: &[Q]) -> Option<Vec<Q>> {
        let t: Vec<Q> = self.rows.iter().map(|&r| target[r].clone()).collect();
        let c = self.inv.mul_vec(&t);
        let mut recon = vec![Q::zero(); target.len()];
        for (k, &col) in self.cols.iter().enumerate() {
            if c[k].is_zero() {
                continue;
            }
            for (acc, v) in recon.iter_mut().zip(&self.flats[col]) {
                if !v.is_zero() {
                    *acc += &c[k] * v;
                }
            }
        }
        if recon != target {
            return None;
        }
        let mut out = vec![Q::zero(); self.flats.len()];
        for (k, &col) in self.cols.iter().enumerate() {
            out[col] = c[k].clone();
        }
        Some(out)
    }
}
