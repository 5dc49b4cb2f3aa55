use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::linalg::{q, rank_of_vectors, serde_q, Matrix, Q};

use super::instance::{PvError, PvInstance};

/// Number of pseudorandom candidates tried by [`generic_point`].
pub const GENERIC_CANDIDATES: usize = 8;
/// Candidate coordinates are drawn uniformly from −BOUND..=BOUND.
const COORD_BOUND: i64 = 9;

#[derive(Clone, Debug, Serialize)]
pub struct GenericPoint {
    #[serde(serialize_with = "serde_q::vec")]
    pub point: Vec<Q>,
    pub seed: u64,
    pub orbit_rank: usize,
    /// Candidates drawn before the rank bound was met (at most K).
    pub candidates: usize,
}

/// The vectors M_i x.
pub fn orbit_vectors(pv: &PvInstance, x: &[Q]) -> Vec<Vec<Q>> {
    pv.ops.iter().map(|o| o.apply(x)).collect()
}

/// dim of the tangent space g·x.
pub fn orbit_rank(pv: &PvInstance, x: &[Q]) -> usize {
    rank_of_vectors(&orbit_vectors(pv, x))
}

/// Draws up to K seeded integer points and keeps the first one of maximal
/// orbit rank; stops early once the rank reaches min(dim V, dim g).
pub fn generic_point(pv: &PvInstance, seed: u64) -> GenericPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = pv.dim_v.min(pv.dim_algebra());
    let mut best: Option<(Vec<Q>, usize)> = None;
    let mut tried = 0;
    for _ in 0..GENERIC_CANDIDATES {
        let x: Vec<Q> = (0..pv.dim_v).map(|_| q(rng.gen_range(-COORD_BOUND..=COORD_BOUND))).collect();
        tried += 1;
        let r = orbit_rank(pv, &x);
        if best.as_ref().is_none_or(|(_, b)| r > *b) {
            best = Some((x, r));
        }
        if r == bound {
            break;
        }
    }
    let (point, orbit_rank) = best.expect("at least one candidate");
    GenericPoint { point, seed, orbit_rank, candidates: tried }
}

/// Exact basis of {a : (Σ a_i M_i) x = 0}.
pub fn isotropy_algebra(pv: &PvInstance, x: &[Q]) -> Vec<Vec<Q>> {
    let cols = orbit_vectors(pv, x);
    Matrix::from_columns(pv.dim_v, &cols).kernel()
}

#[derive(Clone, Debug, Serialize)]
pub struct Reductivity {
    pub reductive: bool,
    /// Determinant of the ambient form restricted to the subalgebra.
    #[serde(serialize_with = "serde_q::one")]
    pub form_det: Q,
}

/// Nondegeneracy of the ambient form on the span of `basis`.
pub fn is_reductive(pv: &PvInstance, basis: &[Vec<Q>]) -> Reductivity {
    if basis.is_empty() {
        return Reductivity { reductive: true, form_det: q(1) };
    }
    let b = Matrix::from_columns(pv.dim_algebra(), basis);
    let gram = b.transpose().mul(&pv.form).mul(&b);
    let det = gram.det();
    Reductivity { reductive: !det.is_zero(), form_det: det }
}

fn invariant_count(pv: &PvInstance, isotropy: &[Vec<Q>]) -> usize {
    let images: Vec<Vec<Q>> = isotropy.iter().map(|a| pv.abel.mul_vec(a)).collect();
    pv.n_characters() - rank_of_vectors(&images)
}

/// dim X(G) minus the rank of the character map on the isotropy at `x`.
pub fn count_fundamental_invariants(pv: &PvInstance, x: &[Q], seed: u64) -> Result<usize, PvError> {
    let certified = generic_point(pv, seed).orbit_rank;
    let found = orbit_rank(pv, x);
    if found < certified {
        return Err(PvError::NonGenericPoint { found, expected: certified });
    }
    Ok(invariant_count(pv, &isotropy_algebra(pv, x)))
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub dim_v: usize,
    pub dim_algebra: usize,
    pub prehomogeneous: bool,
    pub generic_point: GenericPoint,
    pub orbit_rank: usize,
    pub isotropy_dim: usize,
    #[serde(serialize_with = "serde_q::vecs")]
    pub isotropy_basis: Vec<Vec<Q>>,
    pub reductive: bool,
    #[serde(serialize_with = "serde_q::one")]
    pub form_det: Q,
    pub regular: bool,
    /// Present when the space is prehomogeneous.
    pub n_fundamental_invariants: Option<usize>,
}

pub fn is_regular(pv: &PvInstance, seed: u64) -> RegularityReport {
    let gp = generic_point(pv, seed);
    let iso = isotropy_algebra(pv, &gp.point);
    let orbit_rank = pv.dim_algebra() - iso.len();
    debug_assert_eq!(orbit_rank, gp.orbit_rank);
    let prehomogeneous = orbit_rank == pv.dim_v;
    let red = is_reductive(pv, &iso);
    let count = prehomogeneous.then(|| invariant_count(pv, &iso));
    RegularityReport {
        dim_v: pv.dim_v,
        dim_algebra: pv.dim_algebra(),
        prehomogeneous,
        generic_point: gp,
        orbit_rank,
        isotropy_dim: iso.len(),
        isotropy_basis: iso,
        reductive: red.reductive,
        form_det: red.form_det,
        regular: prehomogeneous && red.reductive,
        n_fundamental_invariants: count,
    }
}

/// Regularity of sub-sums of components, memoized by bitmask.
pub struct LatticeScan<'a> {
    pv: &'a PvInstance,
    seed: u64,
    cache: HashMap<u32, RegularityReport>,
}

impl<'a> LatticeScan<'a> {
    pub fn new(pv: &'a PvInstance, seed: u64) -> Self {
        assert!(pv.components.len() < 32, "too many components");
        LatticeScan { pv, seed, cache: HashMap::new() }
    }

    pub fn full_mask(&self) -> u32 {
        (1u32 << self.pv.components.len()) - 1
    }

    pub fn members(mask: u32) -> Vec<usize> {
        (0..32).filter(|i| mask & (1 << i) != 0).collect()
    }

    pub fn report(&mut self, mask: u32) -> &RegularityReport {
        let (pv, seed) = (self.pv, self.seed);
        self.cache.entry(mask).or_insert_with(|| {
            let sub = pv.restrict(&Self::members(mask)).expect("nonempty mask");
            is_regular(&sub, seed)
        })
    }

    pub fn regular(&mut self, mask: u32) -> bool {
        self.report(mask).regular
    }

    /// Proper nonempty submasks of `mask`, by size then lexicographically on index sets.
    pub fn proper_submasks(mask: u32) -> Vec<u32> {
        let mut subs: Vec<u32> = Vec::new();
        let mut s = (mask.wrapping_sub(1)) & mask;
        while s != 0 {
            subs.push(s);
            s = (s - 1) & mask;
        }
        subs.sort_by_key(|&s| (s.count_ones(), Self::members(s)));
        subs
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QIrreducibility {
    pub q_irreducible: bool,
    pub report: RegularityReport,
    /// A proper sub-sum (component indices) with a regular restriction.
    pub witness: Option<Vec<usize>>,
}

/// Regular, and no proper nonempty sub-sum of components is regular.
pub fn q_irreducible(pv: &PvInstance, seed: u64) -> QIrreducibility {
    let mut scan = LatticeScan::new(pv, seed);
    q_irreducible_in(&mut scan)
}

pub(crate) fn q_irreducible_in(scan: &mut LatticeScan<'_>) -> QIrreducibility {
    let full = scan.full_mask();
    let report = scan.report(full).clone();
    if !report.regular {
        return QIrreducibility { q_irreducible: false, report, witness: None };
    }
    for s in LatticeScan::proper_submasks(full) {
        if scan.regular(s) {
            return QIrreducibility { q_irreducible: false, report, witness: Some(LatticeScan::members(s)) };
        }
    }
    QIrreducibility { q_irreducible: true, report, witness: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;
    use crate::pvcore::parabolic_pv;

    fn pv(s: &str) -> PvInstance {
        parabolic_pv(&parse_diagram(s).unwrap())
    }

    #[test]
    fn a3_bilinear_pairing() {
        let p = pv("A3[1,3]");
        assert_eq!(p.dim_v, 4);
        assert_eq!(p.dim_algebra(), 5);
        assert!(p.components_invariant());
        let r = is_regular(&p, 0);
        assert!(r.prehomogeneous && r.regular);
        assert_eq!(r.orbit_rank, 4);
        assert_eq!(r.isotropy_dim, 1);
        assert_eq!(r.n_fundamental_invariants, Some(1));
        assert!(q_irreducible(&p, 0).q_irreducible);
    }

    #[test]
    fn zero_point_has_full_isotropy() {
        let p = pv("A3[1,3]");
        let zero = vec![q(0); p.dim_v];
        assert_eq!(orbit_rank(&p, &zero), 0);
        assert_eq!(isotropy_algebra(&p, &zero).len(), p.dim_algebra());
        assert!(generic_point(&p, 0).orbit_rank > 0);
    }

    #[test]
    fn levi_is_reductive_root_line_is_not() {
        let p = pv("B3[1,3]");
        let m = p.dim_algebra();
        let full: Vec<Vec<Q>> = (0..m).map(|i| (0..m).map(|j| q((i == j) as i64)).collect()).collect();
        assert!(is_reductive(&p, &full).reductive);
        let root = p.labels.iter().position(|l| l.starts_with("e[")).unwrap();
        assert!(!is_reductive(&p, &[full[root].clone()]).reductive);
    }

    #[test]
    fn e6_first_case() {
        let p = pv("E6[1,2]");
        assert_eq!(p.dim_v, 15);
        let r = is_regular(&p, 0);
        assert!(r.regular);
        assert_eq!(r.n_fundamental_invariants, Some(1));
        let skew = p.components.iter().position(|c| c.coords.len() == 10).unwrap();
        assert!(is_regular(&p.restrict(&[skew]).unwrap(), 0).prehomogeneous);
    }

    #[test]
    fn f4_example_sizes() {
        let p = pv("F4[1,2]");
        assert_eq!(p.dim_v, 7);
        assert_eq!(p.dim_algebra(), 10);
    }

    #[test]
    fn non_generic_point_is_rejected() {
        let p = pv("A3[1,3]");
        let zero = vec![q(0); p.dim_v];
        assert!(matches!(count_fundamental_invariants(&p, &zero, 0), Err(PvError::NonGenericPoint { .. })));
        let g = generic_point(&p, 0);
        assert_eq!(count_fundamental_invariants(&p, &g.point, 0), Ok(1));
    }

    #[test]
    fn restriction_errors() {
        let p = pv("A3[1,3]");
        assert_eq!(p.restrict(&[]).unwrap_err(), PvError::EmptySubset);
        assert_eq!(p.restrict(&[5]).unwrap_err(), PvError::BadComponent(5));
        let same = p.restrict(&[0, 1]).unwrap();
        assert_eq!(same.dim_v, p.dim_v);
        assert_eq!(same.ops, p.ops);
    }

    #[test]
    fn a5_cases() {
        let asym = q_irreducible(&pv("A5[1,3]"), 0);
        assert!(!asym.q_irreducible);
        let sym = q_irreducible(&pv("A5[2,4]"), 0);
        assert!(!sym.q_irreducible);
        assert!(sym.witness.is_some());
    }

    #[test]
    fn submask_order() {
        assert_eq!(LatticeScan::proper_submasks(0b111), vec![0b001, 0b010, 0b100, 0b011, 0b101, 0b110]);
    }
}
