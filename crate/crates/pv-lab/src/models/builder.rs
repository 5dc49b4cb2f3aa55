//! Matrix-space representations of products of classical groups.
//!
//! Each factor contributes an operator basis of its Lie algebra; each block of
//! V is a matrix space (full, symmetric or skew) acted on by a sum of terms
//! that are derivatives of g·X, ᵗg⁻¹·X, X·g⁻¹, X·ᵗg and scalar multiplication.

use num_traits::Zero;

use crate::linalg::{q, Matrix, Q};
use crate::pvcore::{Op, PvComponent, PvInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Gl,
    Sl,
    So,
    /// Diagonal matrices of the given size.
    Torus,
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub kind: FactorKind,
    pub size: usize,
    pub name: String,
}

impl Factor {
    /// Basis matrices with their labels.
    fn basis(&self) -> Vec<(String, Matrix)> {
        let n = self.size;
        let e = |i: usize, j: usize| {
            let mut m = Matrix::zeros(n, n);
            m[(i, j)] = q(1);
            m
        };
        let mut out = Vec::new();
        match self.kind {
            FactorKind::Gl => {
                for i in 0..n {
                    for j in 0..n {
                        out.push((format!("{}:E{}{}", self.name, i + 1, j + 1), e(i, j)));
                    }
                }
            }
            FactorKind::Sl => {
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            out.push((format!("{}:E{}{}", self.name, i + 1, j + 1), e(i, j)));
                        }
                    }
                }
                for i in 0..n.saturating_sub(1) {
                    out.push((format!("{}:H{}", self.name, i + 1), e(i, i).sub(&e(i + 1, i + 1))));
                }
            }
            FactorKind::So => {
                for i in 0..n {
                    for j in i + 1..n {
                        out.push((format!("{}:A{}{}", self.name, i + 1, j + 1), e(i, j).sub(&e(j, i))));
                    }
                }
            }
            FactorKind::Torus => {
                for i in 0..n {
                    out.push((format!("{}:D{}", self.name, i + 1), e(i, i)));
                }
            }
        }
        out
    }

    /// Linear characters: the trace for GL, each diagonal entry for a torus.
    fn characters(&self, a: &Matrix) -> Vec<Q> {
        match self.kind {
            FactorKind::Gl => vec![a.trace()],
            FactorKind::Torus => (0..self.size).map(|i| a[(i, i)].clone()).collect(),
            FactorKind::Sl | FactorKind::So => Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Full(usize, usize),
    Sym(usize),
    Skew(usize),
}

impl Shape {
    pub fn dim(self) -> usize {
        match self {
            Shape::Full(a, b) => a * b,
            Shape::Sym(n) => n * (n + 1) / 2,
            Shape::Skew(n) => n * n.saturating_sub(1) / 2,
        }
    }

    pub fn size(self) -> (usize, usize) {
        match self {
            Shape::Full(a, b) => (a, b),
            Shape::Sym(n) | Shape::Skew(n) => (n, n),
        }
    }

    /// Matrix positions of the coordinates, in coordinate order.
    fn positions(self) -> Vec<(usize, usize)> {
        match self {
            Shape::Full(a, b) => (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).collect(),
            Shape::Sym(n) => (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect(),
            Shape::Skew(n) => (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
        }
    }

    fn unit(self, k: usize) -> Matrix {
        let (a, b) = self.size();
        let (i, j) = self.positions()[k];
        let mut m = Matrix::zeros(a, b);
        m[(i, j)] = q(1);
        match self {
            Shape::Sym(_) => m[(j, i)] = q(1),
            Shape::Skew(_) => m[(j, i)] = q(-1),
            Shape::Full(..) => {}
        }
        m
    }

    fn coords(self, m: &Matrix) -> Vec<Q> {
        self.positions().into_iter().map(|(i, j)| m[(i, j)].clone()).collect()
    }

    pub fn assemble(self, x: &[Q]) -> Matrix {
        let (a, b) = self.size();
        let mut m = Matrix::zeros(a, b);
        for ((i, j), v) in self.positions().into_iter().zip(x) {
            m[(i, j)] = v.clone();
            match self {
                Shape::Sym(_) => m[(j, i)] = v.clone(),
                Shape::Skew(_) => m[(j, i)] = -v.clone(),
                Shape::Full(..) => {}
            }
        }
        m
    }
}

/// A derivative term of the action on one block; `factor` indexes the factor list.
#[derive(Clone, Copy, Debug)]
pub enum Term {
    /// X ↦ sign · A X (or sign · ᵗA X).
    Left { factor: usize, transpose: bool, sign: i64 },
    /// X ↦ sign · X A (or sign · X ᵗA).
    Right { factor: usize, transpose: bool, sign: i64 },
    /// X ↦ coeff · a X for a one-dimensional factor.
    Scale { factor: usize, coeff: i64 },
}

impl Term {
    /// g X ᵗg.
    pub fn congruence(factor: usize) -> [Term; 2] {
        [
            Term::Left { factor, transpose: false, sign: 1 },
            Term::Right { factor, transpose: true, sign: 1 },
        ]
    }

    fn factor(&self) -> usize {
        match *self {
            Term::Left { factor, .. } | Term::Right { factor, .. } | Term::Scale { factor, .. } => factor,
        }
    }

    fn apply(&self, a: &Matrix, x: &Matrix) -> Matrix {
        match *self {
            Term::Left { transpose, sign, .. } => {
                let a = if transpose { a.transpose() } else { a.clone() };
                a.mul(x).scale(&q(sign))
            }
            Term::Right { transpose, sign, .. } => {
                let a = if transpose { a.transpose() } else { a.clone() };
                x.mul(&a).scale(&q(sign))
            }
            Term::Scale { coeff, .. } => {
                assert_eq!(a.rows(), 1, "scalar term needs a one-dimensional factor");
                x.scale(&(&a[(0, 0)] * q(coeff)))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Block {
    pub label: String,
    pub shape: Shape,
    pub terms: Vec<Term>,
}

/// Coordinate layout of V: block shapes and offsets.
#[derive(Clone, Debug)]
pub struct Layout {
    blocks: Vec<(Shape, usize)>,
}

impl Layout {
    pub fn block(&self, x: &[Q], k: usize) -> Matrix {
        let (shape, off) = self.blocks[k];
        shape.assemble(&x[off..off + shape.dim()])
    }

    pub fn dim(&self) -> usize {
        self.blocks.last().map_or(0, |(s, o)| o + s.dim())
    }

    /// Coordinates of block matrices laid out in order.
    pub fn point(&self, mats: &[Matrix]) -> Vec<Q> {
        self.blocks.iter().zip(mats).flat_map(|((s, _), m)| s.coords(m)).collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct MatrixModel {
    factors: Vec<Factor>,
    blocks: Vec<Block>,
}

impl MatrixModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a factor and returns its index.
    pub fn factor(&mut self, kind: FactorKind, size: usize, name: &str) -> usize {
        self.factors.push(Factor { kind, size, name: name.to_string() });
        self.factors.len() - 1
    }

    pub fn block(&mut self, label: &str, shape: Shape, terms: impl IntoIterator<Item = Term>) {
        let terms: Vec<Term> = terms.into_iter().collect();
        for t in &terms {
            let f = &self.factors[t.factor()];
            let (a, b) = shape.size();
            match *t {
                Term::Left { .. } => assert_eq!(f.size, a, "left factor size"),
                Term::Right { .. } => assert_eq!(f.size, b, "right factor size"),
                Term::Scale { .. } => assert_eq!(f.size, 1, "scalar factor size"),
            }
        }
        self.blocks.push(Block { label: label.to_string(), shape, terms });
    }

    pub fn layout(&self) -> Layout {
        let mut off = 0;
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let o = off;
                off += b.shape.dim();
                (b.shape, o)
            })
            .collect();
        Layout { blocks }
    }

    /// The operator basis, trace form, character map and block lattice.
    pub fn build(&self, name: &str) -> PvInstance {
        let layout = self.layout();
        let dim_v = layout.dim();
        let mut ops = Vec::new();
        let mut labels = Vec::new();
        let mut owner = Vec::new();
        let mut mats = Vec::new();
        for (fi, f) in self.factors.iter().enumerate() {
            for (label, a) in f.basis() {
                let mut entries = Vec::new();
                for (bi, block) in self.blocks.iter().enumerate() {
                    let (shape, off) = layout.blocks[bi];
                    for t in block.terms.iter().filter(|t| t.factor() == fi) {
                        for k in 0..shape.dim() {
                            let img = t.apply(&a, &shape.unit(k));
                            for (r, v) in shape.coords(&img).into_iter().enumerate() {
                                if !v.is_zero() {
                                    entries.push((off + r, off + k, v));
                                }
                            }
                        }
                    }
                }
                ops.push(Op::new(dim_v, entries));
                labels.push(label);
                owner.push(fi);
                mats.push(a);
            }
        }
        let m = ops.len();
        let mut form = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                if owner[i] == owner[j] {
                    form[(i, j)] = mats[i].mul(&mats[j]).trace();
                }
            }
        }
        let n_chars: usize = self.factors.iter().map(|f| f.characters(&Matrix::zeros(f.size, f.size)).len()).sum();
        let mut abel = Matrix::zeros(n_chars, m);
        for col in 0..m {
            let mut row = 0;
            for (fi, f) in self.factors.iter().enumerate() {
                let zero = Matrix::zeros(f.size, f.size);
                let vals = f.characters(if fi == owner[col] { &mats[col] } else { &zero });
                for v in vals {
                    abel[(row, col)] = v;
                    row += 1;
                }
            }
        }
        let components = self
            .blocks
            .iter()
            .zip(&layout.blocks)
            .map(|(b, (s, o))| PvComponent { label: b.label.clone(), coords: (*o..o + s.dim()).collect() })
            .collect();
        PvInstance::new(name, dim_v, ops, labels, form, abel, components)
    }
}
