//! Exact checks on black-box polynomial invariants.
//!
//! Derivatives come from exact interpolation of t ↦ f(x + t·u) at the nodes
//! t = 0..=deg f. Group elements are products of at most three one-parameter
//! factors: exp(tM) for nilpotent basis operators (finite series) and
//! diag(λ^{m_j}) for diagonal basis operators with integer entries.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{frac, q, serde_q, Matrix, Q};

use super::instance::PvInstance;

type Evaluator = Arc<dyn Fn(&[Q]) -> Q + Send + Sync>;

/// A homogeneous polynomial given by an exact evaluator and its degree.
#[derive(Clone)]
pub struct Invariant {
    pub name: String,
    pub degree: usize,
    eval: Evaluator,
}

impl fmt::Debug for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Invariant({}, degree {})", self.name, self.degree)
    }
}

impl Invariant {
    pub fn new(name: impl Into<String>, degree: usize, eval: impl Fn(&[Q]) -> Q + Send + Sync + 'static) -> Self {
        Invariant { name: name.into(), degree, eval: Arc::new(eval) }
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        (self.eval)(x)
    }

    /// f·g on the same space.
    pub fn times(&self, other: &Invariant) -> Invariant {
        let (a, b) = (self.clone(), other.clone());
        Invariant::new(format!("({})*({})", self.name, other.name), self.degree + other.degree, move |x| {
            a.eval(x) * b.eval(x)
        })
    }

    pub fn pow(&self, k: usize) -> Invariant {
        let a = self.clone();
        Invariant::new(format!("({})^{}", self.name, k), self.degree * k, move |x| {
            let v = a.eval(x);
            (0..k).fold(Q::one(), |acc, _| acc * &v)
        })
    }

    /// Extension to a larger space through the coordinates `coords`.
    pub fn through(&self, coords: Vec<usize>) -> Invariant {
        let a = self.clone();
        Invariant::new(self.name.clone(), self.degree, move |x| {
            let sub: Vec<Q> = coords.iter().map(|&c| x[c].clone()).collect();
            a.eval(&sub)
        })
    }

    /// Π f_i(x_i) on the direct sum of spaces of dimensions `dims`.
    pub fn product_on_sum(parts: &[(Invariant, usize)]) -> Invariant {
        let parts = parts.to_vec();
        let names: Vec<String> = parts.iter().map(|(f, _)| f.name.clone()).collect();
        let degree = parts.iter().map(|(f, _)| f.degree).sum();
        Invariant::new(names.join(" ⊗ "), degree, move |x| {
            let mut off = 0;
            let mut acc = Q::one();
            for (f, d) in &parts {
                acc *= f.eval(&x[off..off + d]);
                off += d;
            }
            acc
        })
    }
}

#[derive(Debug, Clone, Error)]
pub enum InvariantError {
    #[error("not a relative invariant along basis operator {direction} ({label})")]
    NotRelativeInvariant { direction: usize, label: String },
    #[error("group check failed for the element built from operators {factors:?}")]
    GroupCheckFailed { factors: Vec<usize> },
    #[error("Hessian determinant vanishes at every sample point")]
    DegenerateInvariant,
    #[error("the polynomial vanishes at every sample point")]
    ZeroInvariant,
    #[error("identity violated: lhs {lhs}, rhs {rhs}")]
    IdentityViolation { lhs: String, rhs: String },
}

/// Weights turning samples f(x + k u), k = 0..=d, into the first and second
/// Taylor coefficients at t = 0.
struct Taylor {
    w1: Vec<Q>,
    w2: Vec<Q>,
}

impl Taylor {
    fn new(d: usize) -> Taylor {
        let n = d.max(2) + 1;
        let vander = Matrix::from_rows(
            (0..n).map(|k| (0..n).map(|j| q(k as i64).pow(j as i32)).collect()).collect(),
        );
        let unit = |j: usize| -> Vec<Q> { (0..n).map(|i| q((i == j) as i64)).collect() };
        // rows of the inverse: coefficient j = Σ_k inv[j][k] f(k)
        let inv_t = vander.transpose();
        let w1 = inv_t.solve(&unit(1)).expect("Vandermonde is invertible");
        let w2 = inv_t.solve(&unit(2)).expect("Vandermonde is invertible");
        Taylor { w1, w2 }
    }

    fn coeffs(&self, f: &Invariant, x: &[Q], u: &[Q]) -> (Q, Q) {
        let mut c1 = Q::zero();
        let mut c2 = Q::zero();
        for k in 0..self.w1.len() {
            let val = if k == 0 {
                f.eval(x)
            } else {
                let kk = q(k as i64);
                let p: Vec<Q> = x.iter().zip(u).map(|(a, b)| a + &kk * b).collect();
                f.eval(&p)
            };
            c1 += &self.w1[k] * &val;
            c2 += &self.w2[k] * &val;
        }
        (c1, c2)
    }
}

fn gradient(t: &Taylor, f: &Invariant, x: &[Q]) -> Vec<Q> {
    (0..x.len()).map(|i| t.coeffs(f, x, &unit_vec(x.len(), i)).0).collect()
}

fn hessian(t: &Taylor, f: &Invariant, x: &[Q]) -> Matrix {
    let n = x.len();
    let diag: Vec<Q> = (0..n).map(|i| t.coeffs(f, x, &unit_vec(n, i)).1).collect();
    let mut h = Matrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = &diag[i] * q(2);
        for j in 0..i {
            let mut u = unit_vec(n, i);
            u[j] = q(1);
            let v = t.coeffs(f, x, &u).1 - &diag[i] - &diag[j];
            h[(i, j)] = v.clone();
            h[(j, i)] = v;
        }
    }
    h
}

/// f·H − ∇f ∇fᵀ, i.e. f² times the differential of grad log f.
fn dlog_matrix(fx: &Q, h: &Matrix, g: &[Q]) -> Matrix {
    let n = g.len();
    let mut m = h.scale(fx);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] -= &g[i] * &g[j];
        }
    }
    m
}

fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = q(1);
    v
}

fn sample_points(f: &Invariant, dim: usize, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<Q>>, InvariantError> {
    let mut pts = Vec::new();
    let mut tries = 0;
    while pts.len() < count {
        tries += 1;
        if tries > 50 * count {
            return Err(InvariantError::ZeroInvariant);
        }
        let x: Vec<Q> = (0..dim).map(|_| q(rng.gen_range(-9..=9))).collect();
        if !f.eval(&x).is_zero() {
            pts.push(x);
        }
    }
    Ok(pts)
}

#[derive(Clone, Debug, Serialize)]
pub struct RelativeInvarianceReport {
    pub invariant: String,
    pub degree: usize,
    pub points: usize,
    /// Infinitesimal character dχ(M_i) for each basis operator.
    #[serde(serialize_with = "serde_q::vec")]
    pub characters: Vec<Q>,
    pub group_samples: usize,
    /// Basis operators usable as one-parameter group factors.
    pub group_factors: usize,
}

#[derive(Clone, Debug)]
enum Factor {
    Nilpotent(Vec<Matrix>),
    Diagonal(Vec<i64>),
}

fn classify_factor(m: &Matrix) -> Option<Factor> {
    if m.is_zero() {
        return None;
    }
    if m.is_diagonal() {
        let d: Option<Vec<i64>> = (0..m.rows())
            .map(|i| {
                let v = &m[(i, i)];
                v.is_integer().then(|| i64::try_from(v.to_integer()).ok()).flatten()
            })
            .collect();
        return d.map(Factor::Diagonal);
    }
    let mut powers = vec![m.clone()];
    for _ in 0..m.rows() {
        let next = powers.last().unwrap().mul(m);
        if next.is_zero() {
            return Some(Factor::Nilpotent(powers));
        }
        powers.push(next);
    }
    None
}

/// Group element for a factor and a parameter, with its predicted character.
fn factor_element(f: &Factor, c: &Q, param: &Q, n: usize) -> Option<(Matrix, Q)> {
    match f {
        Factor::Nilpotent(powers) => {
            if !c.is_zero() {
                return None;
            }
            let mut g = Matrix::identity(n);
            let mut coef = Q::one();
            for (k, p) in powers.iter().enumerate() {
                coef = coef * param / q(k as i64 + 1);
                g.add_scaled(&coef, p);
            }
            Some((g, Q::one()))
        }
        Factor::Diagonal(d) => {
            if !c.is_integer() {
                return None;
            }
            let e = i32::try_from(c.to_integer()).ok()?;
            let mut g = Matrix::zeros(n, n);
            for (i, &m) in d.iter().enumerate() {
                g[(i, i)] = param.pow(m as i32);
            }
            Some((g, param.pow(e)))
        }
    }
}

/// Infinitesimal relative invariance at 20 seeded points plus a group-level
/// check f(g·x) = χ(g) f(x) for products of one-parameter factors.
pub fn relative_invariance(pv: &PvInstance, f: &Invariant, seed: u64) -> Result<RelativeInvarianceReport, InvariantError> {
    const POINTS: usize = 20;
    const GROUP_SAMPLES: usize = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_points(f, pv.dim_v, POINTS, &mut rng)?;
    let taylor = Taylor::new(f.degree);
    let mut chars: Vec<Option<Q>> = vec![None; pv.dim_algebra()];
    for x in &pts {
        let fx = f.eval(x);
        for (i, op) in pv.ops.iter().enumerate() {
            let u = op.apply(x);
            let c = taylor.coeffs(f, x, &u).0 / &fx;
            match &chars[i] {
                None => chars[i] = Some(c),
                Some(prev) if *prev == c => {}
                Some(_) => {
                    return Err(InvariantError::NotRelativeInvariant { direction: i, label: pv.labels[i].clone() })
                }
            }
        }
    }
    let characters: Vec<Q> = chars.into_iter().map(|c| c.expect("at least one point")).collect();

    let factors: Vec<(usize, Factor)> = pv
        .ops
        .iter()
        .enumerate()
        .filter_map(|(i, op)| classify_factor(&op.to_matrix()).map(|f| (i, f)))
        .collect();
    let params = [q(1), q(-1), q(2), frac(1, 2), frac(-2, 3), q(3)];
    let mut done = 0;
    if !factors.is_empty() {
        for _ in 0..GROUP_SAMPLES {
            let len = rng.gen_range(1..=3);
            let mut g = Matrix::identity(pv.dim_v);
            let mut chi = Q::one();
            let mut used = Vec::new();
            for _ in 0..len {
                let (i, fac) = factors.choose(&mut rng).expect("nonempty");
                let t = params.choose(&mut rng).expect("nonempty");
                let Some((h, c)) = factor_element(fac, &characters[*i], t, pv.dim_v) else {
                    return Err(InvariantError::NotRelativeInvariant { direction: *i, label: pv.labels[*i].clone() });
                };
                g = g.mul(&h);
                chi *= c;
                used.push(*i);
            }
            for x in &pts {
                if f.eval(&g.mul_vec(x)) != &chi * f.eval(x) {
                    return Err(InvariantError::GroupCheckFailed { factors: used });
                }
            }
            done += 1;
        }
    }
    Ok(RelativeInvarianceReport {
        invariant: f.name.clone(),
        degree: f.degree,
        points: pts.len(),
        characters,
        group_samples: done,
        group_factors: factors.len(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub relative: RelativeInvarianceReport,
    #[serde(serialize_with = "serde_q::one")]
    pub hessian_det: Q,
    pub hessian_nonzero: bool,
    pub dlog_rank: usize,
    pub dim_v: usize,
}

/// Relative invariance, nonvanishing Hessian and generic surjectivity of the
/// logarithmic gradient.
pub fn verify_invariant(pv: &PvInstance, f: &Invariant, seed: u64) -> Result<InvariantReport, InvariantError> {
    let relative = relative_invariance(pv, f, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9));
    let pts = sample_points(f, pv.dim_v, 5, &mut rng)?;
    let taylor = Taylor::new(f.degree);
    let mut best: Option<(Q, usize)> = None;
    for x in &pts {
        let h = hessian(&taylor, f, x);
        let det = h.det();
        let g = gradient(&taylor, f, x);
        let rank = dlog_matrix(&f.eval(x), &h, &g).rank();
        let better = best.as_ref().is_none_or(|(d, r)| (d.is_zero() && !det.is_zero()) || rank > *r);
        if better {
            best = Some((det, rank));
        }
        if best.as_ref().is_some_and(|(d, r)| !d.is_zero() && *r == pv.dim_v) {
            break;
        }
    }
    let (hessian_det, dlog_rank) = best.expect("five points");
    if hessian_det.is_zero() {
        return Err(InvariantError::DegenerateInvariant);
    }
    Ok(InvariantReport { relative, hessian_nonzero: true, hessian_det, dlog_rank, dim_v: pv.dim_v })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityPoint {
    #[serde(serialize_with = "serde_q::one")]
    pub hessian_det: Q,
    #[serde(serialize_with = "serde_q::one")]
    pub rhs: Q,
    #[serde(serialize_with = "serde_q::one")]
    pub det_dphi: Q,
    #[serde(serialize_with = "serde_q::one")]
    pub block_det_dphi: Q,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub invariant: String,
    pub degree: usize,
    pub dim: usize,
    pub points: Vec<IdentityPoint>,
}

/// det H_f(x) = (1 − r)·det dφ(x)·f(x)^k for f = Π f_i on a direct sum,
/// r = deg f, k = dim, φ = grad log f; also det dφ = Π det dφ_i.
pub fn hessian_product_identity_check(parts: &[(Invariant, usize)], seed: u64) -> Result<IdentityReport, InvariantError> {
    const POINTS: usize = 5;
    let f = Invariant::product_on_sum(parts);
    let k: usize = parts.iter().map(|p| p.1).sum();
    let r = f.degree as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_points(&f, k, POINTS, &mut rng)?;
    let taylor = Taylor::new(f.degree);
    let mut out = Vec::new();
    for x in &pts {
        let fx = f.eval(x);
        let h = hessian(&taylor, &f, x);
        let g = gradient(&taylor, &f, x);
        let f2 = &fx * &fx;
        let det_dphi = dlog_matrix(&fx, &h, &g).scale(&f2.recip()).det();
        let lhs = h.det();
        let rhs = q(1 - r) * &det_dphi * fx.pow(k as i32);
        let mut block = Q::one();
        let mut off = 0;
        for (fi, d) in parts {
            let xi = &x[off..off + d];
            let ti = Taylor::new(fi.degree);
            let fxi = fi.eval(xi);
            let hi = hessian(&ti, fi, xi);
            let gi = gradient(&ti, fi, xi);
            block *= dlog_matrix(&fxi, &hi, &gi).scale(&(&fxi * &fxi).recip()).det();
            off += d;
        }
        if lhs != rhs || block != det_dphi {
            return Err(InvariantError::IdentityViolation {
                lhs: crate::linalg::fmt_q(&lhs),
                rhs: crate::linalg::fmt_q(&rhs),
            });
        }
        out.push(IdentityPoint { hessian_det: lhs, rhs, det_dphi, block_det_dphi: block });
    }
    Ok(IdentityReport { invariant: f.name.clone(), degree: f.degree, dim: k, points: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> Invariant {
        // x0*x2 + x1*x3 on C^4
        Invariant::new("Q", 2, |x| &x[0] * &x[2] + &x[1] * &x[3])
    }

    #[test]
    fn taylor_coefficients_are_exact() {
        let f = Invariant::new("cubic", 3, |x| &x[0] * &x[0] * &x[1]);
        let t = Taylor::new(3);
        let x = vec![q(2), q(3)];
        let u = vec![q(1), q(-1)];
        // (2+t)^2 (3-t) = 12 + 8t - t^2 - t^3 (after expansion: 12 + 12t +3t^2 -4t -4t^2 - t^3)
        let (c1, c2) = t.coeffs(&f, &x, &u);
        assert_eq!(c1, q(8));
        assert_eq!(c2, q(-1));
    }

    #[test]
    fn hessian_of_quadratic_form() {
        let t = Taylor::new(2);
        let h = hessian(&t, &quad(), &[q(1), q(2), q(3), q(4)]);
        let expect = Matrix::from_i64(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert_eq!(h, expect);
        assert_eq!(gradient(&t, &quad(), &[q(1), q(2), q(3), q(4)]), vec![q(3), q(4), q(1), q(2)]);
    }

    #[test]
    fn product_identity_single_factor() {
        let rep = hessian_product_identity_check(&[(quad().pow(2), 4)], 0).unwrap();
        assert_eq!(rep.points.len(), 5);
        assert_eq!(rep.degree, 4);
    }

    #[test]
    fn product_identity_two_factors() {
        let lin = Invariant::new("x^3", 3, |x| &x[0] * &x[0] * &x[0]);
        let rep = hessian_product_identity_check(&[(quad(), 4), (lin, 1)], 1).unwrap();
        assert_eq!(rep.dim, 5);
    }

    #[test]
    fn zero_polynomial_is_reported() {
        let z = Invariant::new("0", 1, |_| q(0));
        assert!(matches!(hessian_product_identity_check(&[(z, 2)], 0), Err(InvariantError::ZeroInvariant)));
    }
}
