//! Constructors for the explicit model families.

use std::collections::BTreeMap;

use crate::linalg::{q, Matrix, Q};
use crate::pvcore::Invariant;

use super::builder::{FactorKind, Layout, MatrixModel, Shape, Term};
use super::pfaffian::pfaffian;
use super::{Expected, KnownInvariant, ModelError, ModelSpec, SpecialPoint};

fn left(factor: usize) -> Term {
    Term::Left { factor, transpose: false, sign: 1 }
}

/// Derivative of X ↦ X g⁻¹.
fn right_inverse(factor: usize) -> Term {
    Term::Right { factor, transpose: false, sign: -1 }
}

fn check(ok: bool, model: &str, reason: &str) -> Result<(), ModelError> {
    if ok {
        Ok(())
    } else {
        Err(ModelError::OutOfRange { model: model.to_string(), reason: reason.to_string() })
    }
}

fn params(kv: &[(&str, usize)]) -> BTreeMap<String, i64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v as i64)).collect()
}

fn name(family: &str, kv: &[(&str, usize)]) -> String {
    let p: Vec<String> = kv.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{family}:{}", p.join(","))
}

fn identity_top(rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows.min(cols) {
        m[(i, i)] = q(1);
    }
    m
}

fn invariant(
    layout: &Layout,
    label: &str,
    description: &str,
    degree: usize,
    nondegenerate: bool,
    f: impl Fn(&Layout, &[Q]) -> Q + Send + Sync + 'static,
) -> KnownInvariant {
    let layout = layout.clone();
    KnownInvariant {
        invariant: Invariant::new(label, degree, move |x| f(&layout, x)),
        description: description.to_string(),
        nondegenerate,
    }
}

/// C* × SL(n) × C* on row vectors v and column vectors w:
/// (x, g, y)(v, w) = (x v g⁻¹, y⁻¹ g w), with invariant v·w.
pub fn bilinear_pairing(n: usize) -> Result<ModelSpec, ModelError> {
    check((2..=6).contains(&n), "bilinear_pairing", "need 2 ≤ n ≤ 6")?;
    let mut m = MatrixModel::new();
    let x = m.factor(FactorKind::Torus, 1, "x");
    let g = m.factor(FactorKind::Sl, n, "sl");
    let y = m.factor(FactorKind::Torus, 1, "y");
    m.block("v", Shape::Full(1, n), [Term::Scale { factor: x, coeff: 1 }, right_inverse(g)]);
    m.block("w", Shape::Full(n, 1), [left(g), Term::Scale { factor: y, coeff: -1 }]);
    let kv = [("n", n)];
    let nm = name("bilinear_pairing", &kv);
    let layout = m.layout();
    let pairing = invariant(&layout, "v.w", "scalar product of v and w", 2, true, |l, x| {
        l.block(x, 0).mul(&l.block(x, 1))[(0, 0)].clone()
    });
    let squared = KnownInvariant {
        invariant: pairing.invariant.pow(2),
        description: "square of the scalar product".into(),
        nondegenerate: true,
    };
    Ok(ModelSpec {
        instance: m.build(&nm),
        name: nm,
        family: "bilinear_pairing".into(),
        params: params(&kv),
        layout,
        invariants: vec![pairing, squared],
        expected: Expected {
            prehomogeneous: Some(true),
            regular: Some(true),
            n_invariants: Some(1),
            isotropy_dim: Some((n - 1) * (n - 1)),
            q_irreducible: Some(true),
            ..Expected::default()
        },
        special_point: None,
    })
}

/// GL(n) × C* on S(n) ⊕ Cⁿ: (g, a)(X, v) = (g X ᵗg, a ᵗg⁻¹ v).
pub fn symmetric_with_vector(n: usize) -> Result<ModelSpec, ModelError> {
    check((2..=5).contains(&n), "symmetric_with_vector", "need 2 ≤ n ≤ 5")?;
    let mut m = MatrixModel::new();
    let g = m.factor(FactorKind::Gl, n, "gl");
    let a = m.factor(FactorKind::Torus, 1, "a");
    m.block("S", Shape::Sym(n), Term::congruence(g));
    m.block(
        "v",
        Shape::Full(n, 1),
        [Term::Left { factor: g, transpose: true, sign: -1 }, Term::Scale { factor: a, coeff: 1 }],
    );
    let kv = [("n", n)];
    let nm = name("symmetric_with_vector", &kv);
    let layout = m.layout();
    let det = invariant(&layout, "det(S)", "determinant of the symmetric component", n, false, |l, x| {
        l.block(x, 0).det()
    });
    let form = invariant(&layout, "v^T S v", "the symmetric form evaluated at v", 3, false, |l, x| {
        let v = l.block(x, 1);
        v.transpose().mul(&l.block(x, 0)).mul(&v)[(0, 0)].clone()
    });
    let mut e1 = Matrix::zeros(n, 1);
    e1[(0, 0)] = q(1);
    let point = layout.point(&[Matrix::identity(n), e1]);
    Ok(ModelSpec {
        instance: m.build(&nm),
        name: nm,
        family: "symmetric_with_vector".into(),
        params: params(&kv),
        layout,
        invariants: vec![det, form],
        expected: Expected {
            prehomogeneous: Some(true),
            regular: Some(true),
            isotropy_dim: Some((n - 1) * (n - 2) / 2),
            q_irreducible: Some(false),
            filtration: Some(vec![vec!["S".into()], vec!["v".into()]]),
            ..Expected::default()
        },
        special_point: Some(SpecialPoint { label: "(I_n, e1)".into(), point }),
    })
}

/// SO(n+1) × GL(n) × … × GL(1) on ⊕_m M(m+1, m), x_m ↦ g_{m+1} x_m g_m⁻¹.
pub fn descending_chains(n: usize) -> Result<ModelSpec, ModelError> {
    check((1..=3).contains(&n), "descending_chains", "need 1 ≤ n ≤ 3")?;
    let mut m = MatrixModel::new();
    // factor index for the group acting on C^k, k = n+1 down to 1
    let mut fac = vec![0usize; n + 2];
    fac[n + 1] = m.factor(FactorKind::So, n + 1, &format!("so{}", n + 1));
    for k in (1..=n).rev() {
        fac[k] = m.factor(FactorKind::Gl, k, &format!("gl{k}"));
    }
    for k in (1..=n).rev() {
        m.block(&format!("V{k}"), Shape::Full(k + 1, k), [left(fac[k + 1]), right_inverse(fac[k])]);
    }
    let kv = [("n", n)];
    let nm = name("descending_chains", &kv);
    let layout = m.layout();
    // block index of V_k is n − k
    let chain = move |l: &Layout, x: &[Q], k: usize| -> Matrix {
        let mut acc = l.block(x, 0);
        for j in (k..n).rev() {
            acc = acc.mul(&l.block(x, n - j));
        }
        acc
    };
    let mut invariants = Vec::new();
    for k in 1..=n {
        let deg = 2 * k * (n - k + 1);
        invariants.push(invariant(&layout, &format!("P{k}"), "Gram determinant of x_n ⋯ x_k", deg, false, move |l, x| {
            let c = chain(l, x, k);
            c.transpose().mul(&c).det()
        }));
    }
    let product = invariants.iter().skip(1).fold(invariants[0].invariant.clone(), |acc, f| acc.times(&f.invariant));
    invariants.push(KnownInvariant {
        invariant: product,
        description: "product of all P_k".into(),
        nondegenerate: true,
    });
    Ok(ModelSpec {
        instance: m.build(&nm),
        name: nm,
        family: "descending_chains".into(),
        params: params(&kv),
        layout,
        invariants,
        expected: Expected {
            prehomogeneous: Some(true),
            regular: Some(true),
            n_invariants: Some(n),
            q_irreducible: Some(n == 1),
            filtration: Some((1..=n).rev().map(|k| vec![format!("V{k}")]).collect()),
            ..Expected::default()
        },
        special_point: None,
    })
}

/// GL(p) × GL(q) × GL(r) on M(q,p) ⊕ M(r,q): (X, Y) ↦ (g2 X g1⁻¹, g3 Y g2⁻¹).
/// Regular exactly when p = r, with invariant det(YX).
pub fn matrix_chain(p: usize, qq: usize, r: usize) -> Result<ModelSpec, ModelError> {
    check(p >= 1 && r >= 1 && p < qq && r < qq && qq <= 5, "matrix_chain", "need 1 ≤ p < q, 1 ≤ r < q, q ≤ 5")?;
    let mut m = MatrixModel::new();
    let g1 = m.factor(FactorKind::Gl, p, "g1");
    let g2 = m.factor(FactorKind::Gl, qq, "g2");
    let g3 = m.factor(FactorKind::Gl, r, "g3");
    m.block("X", Shape::Full(qq, p), [left(g2), right_inverse(g1)]);
    m.block("Y", Shape::Full(r, qq), [left(g3), right_inverse(g2)]);
    let kv = [("p", p), ("q", qq), ("r", r)];
    let nm = name("matrix_chain", &kv);
    let layout = m.layout();
    let regular = p == r;
    let mut invariants = Vec::new();
    if regular {
        invariants.push(invariant(&layout, "det(YX)", "determinant of the product", 2 * p, true, |l, x| {
            l.block(x, 1).mul(&l.block(x, 0)).det()
        }));
    }
    let special_point = (p >= r).then(|| SpecialPoint {
        label: "([I;0], [I 0])".into(),
        point: layout.point(&[identity_top(qq, p), identity_top(r, qq)]),
    });
    Ok(ModelSpec {
        instance: m.build(&nm),
        name: nm,
        family: "matrix_chain".into(),
        params: params(&kv),
        layout,
        invariants,
        expected: Expected {
            regular: Some(regular),
            n_invariants: regular.then_some(1),
            q_irreducible: Some(regular),
            ..Expected::default()
        },
        special_point,
    })
}

/// GL(p) × GL(r) on M(r,p) ⊕ Skew(r): (X, Y) ↦ (ᵗg2⁻¹ X g1⁻¹, g2 Y ᵗg2), r odd.
/// Regular exactly when p = r − 1, with invariant Pf(ᵗX Y X).
pub fn skew_chain(p: usize, r: usize) -> Result<ModelSpec, ModelError> {
    check(r % 2 == 1 && (3..=7).contains(&r) && p >= 1 && p < r, "skew_chain", "need r odd, 3 ≤ r ≤ 7, 1 ≤ p ≤ r − 1")?;
    let mut m = MatrixModel::new();
    let g1 = m.factor(FactorKind::Gl, p, "g1");
    let g2 = m.factor(FactorKind::Gl, r, "g2");
    m.block("X", Shape::Full(r, p), [Term::Left { factor: g2, transpose: true, sign: -1 }, right_inverse(g1)]);
    m.block("Y", Shape::Skew(r), Term::congruence(g2));
    let kv = [("p", p), ("r", r)];
    let nm = name("skew_chain", &kv);
    let layout = m.layout();
    let regular = p + 1 == r;
    let mut invariants = Vec::new();
    if p.is_multiple_of(2) {
        invariants.push(invariant(&layout, "Pf(X^T Y X)", "Pfaffian of the compressed skew form", 3 * p / 2, regular, |l, x| {
            let xm = l.block(x, 0);
            let z = xm.transpose().mul(&l.block(x, 1)).mul(&xm);
            pfaffian(&z).expect("congruent skew matrix of even size")
        }));
    }
    Ok(ModelSpec {
        instance: m.build(&nm),
        name: nm,
        family: "skew_chain".into(),
        params: params(&kv),
        layout,
        invariants,
        expected: Expected {
            regular: Some(regular),
            n_invariants: regular.then_some(1),
            q_irreducible: Some(regular),
            ..Expected::default()
        },
        special_point: None,
    })
}

/// GL(p) × SL(q) × (C*)² on M(q,p) ⊕ M(2,q): (X, Y) ↦ (g2 X g1⁻¹, d Y g2⁻¹).
/// Stated regular exactly when p = 2, with invariant det(YX).
pub fn torus_chain(p: usize, qq: usize) -> Result<ModelSpec, ModelError> {
    check(p >= 1 && p < qq && qq <= 5, "torus_chain", "need 1 ≤ p < q ≤ 5")?;
    let mut m = MatrixModel::new();
    let g1 = m.factor(FactorKind::Gl, p, "g1");
    let g2 = m.factor(FactorKind::Sl, qq, "g2");
    let d = m.factor(FactorKind::Torus, 2, "d");
    m.block("X", Shape::Full(qq, p), [left(g2), right_inverse(g1)]);
    m.block("Y", Shape::Full(2, qq), [left(d), right_inverse(g2)]);
    let kv = [("p", p), ("q", qq)];
    let nm = name("torus_chain", &kv);
    let layout = m.layout();
    let regular = p == 2;
    let mut invariants = Vec::new();
    if regular {
        invariants.push(invariant(&layout, "det(YX)", "determinant of the product", 4, true, |l, x| {
            l.block(x, 1).mul(&l.block(x, 0)).det()
        }));
    }
    if p == 1 {
        for i in 0..2 {
            invariants.push(invariant(&layout, &format!("(YX)_{}", i + 1), "coordinate of the product", 2, false, move |l, x| {
                l.block(x, 1).mul(&l.block(x, 0))[(i, 0)].clone()
            }));
        }
    }
    let x0 = if p == 1 {
        let mut v = Matrix::zeros(qq, 1);
        v[(0, 0)] = q(1);
        v[(1, 0)] = q(1);
        v
    } else {
        identity_top(qq, p)
    };
    Ok(ModelSpec {
        instance: m.build(&nm),
        name: nm,
        family: "torus_chain".into(),
        params: params(&kv),
        special_point: Some(SpecialPoint {
            label: "(X0, [I2 0])".into(),
            point: layout.point(&[x0, identity_top(2, qq)]),
        }),
        layout,
        invariants,
        expected: Expected {
            regular: Some(regular),
            n_invariants: regular.then_some(1),
            q_irreducible: Some(regular),
            ..Expected::default()
        },
    })
}

/// GL(n) × C* on Cⁿ ⊕ Skew(n), n odd: (g, a)(X, Y) = (a g X, g Y ᵗg), with
/// the Pfaffian of [[Y, X], [−ᵗX, 0]] as invariant.
pub fn skew_bordered(n: usize) -> Result<ModelSpec, ModelError> {
    check(n % 2 == 1 && (3..=7).contains(&n), "skew_bordered", "need n odd, 3 ≤ n ≤ 7")?;
    let mut m = MatrixModel::new();
    let g = m.factor(FactorKind::Gl, n, "gl");
    let a = m.factor(FactorKind::Torus, 1, "a");
    m.block("X", Shape::Full(n, 1), [left(g), Term::Scale { factor: a, coeff: 1 }]);
    m.block("Y", Shape::Skew(n), Term::congruence(g));
    let kv = [("n", n)];
    let nm = name("skew_bordered", &kv);
    let layout = m.layout();
    let pf = invariant(&layout, "Pf[[Y,X],[-X^T,0]]", "bordered Pfaffian", n.div_ceil(2), true, |l, x| {
        let xm = l.block(x, 0);
        let y = l.block(x, 1);
        let k = y.rows();
        let mut z = Matrix::zeros(k + 1, k + 1);
        for i in 0..k {
            for j in 0..k {
                z[(i, j)] = y[(i, j)].clone();
            }
            z[(i, k)] = xm[(i, 0)].clone();
            z[(k, i)] = -xm[(i, 0)].clone();
        }
        pfaffian(&z).expect("bordered skew matrix of even size")
    });
    Ok(ModelSpec {
        instance: m.build(&nm),
        name: nm,
        family: "skew_bordered".into(),
        params: params(&kv),
        layout,
        invariants: vec![pf],
        expected: Expected {
            prehomogeneous: Some(true),
            regular: Some(true),
            n_invariants: Some(1),
            isotropy_dim: Some(n * n + 1 - n - n * (n - 1) / 2),
            q_irreducible: Some(true),
            ..Expected::default()
        },
        special_point: None,
    })
}

/// GL(n) × GL(n−1) on M(n,n−1) ⊕ Cⁿ: (X, Y) ↦ (g1 X g2⁻¹, g1 Y), with invariant det[X|Y].
pub fn square_bordered(n: usize) -> Result<ModelSpec, ModelError> {
    check((2..=5).contains(&n), "square_bordered", "need 2 ≤ n ≤ 5")?;
    let mut m = MatrixModel::new();
    let g1 = m.factor(FactorKind::Gl, n, "g1");
    let g2 = m.factor(FactorKind::Gl, n - 1, "g2");
    m.block("X", Shape::Full(n, n - 1), [left(g1), right_inverse(g2)]);
    m.block("Y", Shape::Full(n, 1), [left(g1)]);
    let kv = [("n", n)];
    let nm = name("square_bordered", &kv);
    let layout = m.layout();
    let det = invariant(&layout, "det[X|Y]", "determinant of the assembled square matrix", n, true, |l, x| {
        let xm = l.block(x, 0);
        let y = l.block(x, 1);
        let k = y.rows();
        let mut z = Matrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k - 1 {
                z[(i, j)] = xm[(i, j)].clone();
            }
            z[(i, k - 1)] = y[(i, 0)].clone();
        }
        z.det()
    });
    Ok(ModelSpec {
        instance: m.build(&nm),
        name: nm,
        family: "square_bordered".into(),
        params: params(&kv),
        layout,
        invariants: vec![det],
        expected: Expected {
            prehomogeneous: Some(true),
            regular: Some(true),
            n_invariants: Some(1),
            q_irreducible: Some(true),
            ..Expected::default()
        },
        special_point: None,
    })
}
