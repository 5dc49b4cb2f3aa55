use std::collections::HashMap;

use crate::chevalley::ChevalleyAlgebra;
use crate::diagram::WeightedDiagram;
use crate::grading::{components_with, degree};
use crate::linalg::{q, Matrix};
use crate::rootsys::RootSystem;

use super::instance::{Op, PvComponent, PvError, PvInstance};

/// The Levi subalgebra l_θ acting on d_1 by the adjoint action, with the
/// Killing form of g and the character map reading off the coroot
/// coefficients at circled nodes.
pub fn build_parabolic_pv(d: &WeightedDiagram, alg: &ChevalleyAlgebra) -> Result<PvInstance, PvError> {
    let rs = alg.root_system();
    assert_eq!(rs.simple_type(), d.simple_type(), "algebra built from a different root system");
    let n = d.rank();
    let theta = d.theta();

    let mut levi: Vec<usize> = (0..n).collect();
    for (i, r) in rs.roots().iter().enumerate() {
        if degree(d, r) == 0 && r.iter().enumerate().all(|(k, &m)| m == 0 || theta.contains(&(k + 1))) {
            levi.push(alg.root_basis(i));
        }
    }

    let comps = components_with(rs, d);
    let mut v_basis = Vec::new();
    let mut components = Vec::new();
    for c in &comps {
        let start = v_basis.len();
        for r in &c.roots {
            v_basis.push(alg.root_basis(rs.root_index(r).expect("component root")));
        }
        components.push(PvComponent { label: format!("V{}", c.alpha), coords: (start..v_basis.len()).collect() });
    }
    if v_basis.is_empty() {
        return Err(PvError::EmptyLevelOne);
    }
    let position: HashMap<usize, usize> = v_basis.iter().enumerate().map(|(k, &b)| (b, k)).collect();
    let dim_v = v_basis.len();

    let ops: Vec<Op> = levi
        .iter()
        .map(|&b| {
            let mut entries = Vec::new();
            for (col, &e) in v_basis.iter().enumerate() {
                for (k, c) in alg.bracket_basis(b, e) {
                    let row = *position.get(&k).expect("l_θ preserves d_1");
                    entries.push((row, col, q(c)));
                }
            }
            Op::new(dim_v, entries)
        })
        .collect();
    let labels = levi.iter().map(|&b| alg.basis_label(b)).collect();
    let m = levi.len();
    let mut form = Matrix::zeros(m, m);
    for (i, &a) in levi.iter().enumerate() {
        for (j, &b) in levi.iter().enumerate() {
            form[(i, j)] = q(alg.killing_entry(a, b));
        }
    }
    let mut abel = Matrix::zeros(d.circled().len(), m);
    for (row, &node) in d.circled().iter().enumerate() {
        abel[(row, alg.h_basis(node))] = q(1);
    }
    Ok(PvInstance::new(d.compact(), dim_v, ops, labels, form, abel, components))
}

/// Builds the root system and Chevalley algebra, then the parabolic instance.
pub fn parabolic_pv(d: &WeightedDiagram) -> PvInstance {
    let alg = ChevalleyAlgebra::new(RootSystem::new(d.simple_type()));
    build_parabolic_pv(d, &alg).expect("a circled node gives a nonzero level one")
}
