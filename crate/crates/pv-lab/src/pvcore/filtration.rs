//! A chain of reductive isotropy subalgebras, each acting regularly and
//! completely Q-reducibly on a further sum of components.
//!
//! The search is restricted to the component lattice: at each stage the
//! candidate subspaces are sums of the remaining components.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{serde_q, Q};

use super::instance::PvInstance;
use super::regularity::{generic_point, is_reductive, is_regular, isotropy_algebra, LatticeScan, RegularityReport};

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationStage {
    /// Indices of the original components making up this stage.
    pub components: Vec<usize>,
    pub labels: Vec<String>,
    pub algebra_dim: usize,
    pub subspace_dim: usize,
    pub isotropy_dim: usize,
    pub reductive: bool,
    #[serde(serialize_with = "serde_q::one")]
    pub form_det: Q,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationReport {
    pub stages: Vec<FiltrationStage>,
    pub search: String,
}

impl FiltrationReport {
    pub fn stage_labels(&self) -> Vec<Vec<String>> {
        self.stages.iter().map(|s| s.labels.clone()).collect()
    }

    /// The last stage's isotropy is the generic isotropy of the whole space.
    pub fn final_reductive(&self) -> bool {
        self.stages.last().is_some_and(|s| s.reductive)
    }
}

#[derive(Debug, Clone, Error)]
pub enum FiltrationError {
    #[error("the space is not regular")]
    NotRegular(Box<RegularityReport>),
    #[error("no regular sum of the remaining components {remaining:?} after {} stage(s)", stages.len())]
    PartialFiltration { stages: Vec<FiltrationStage>, remaining: Vec<usize> },
}

/// Per-mask lattice data for one stage.
struct StageLattice {
    regular: Vec<bool>,
    cqr: Vec<bool>,
}

fn stage_lattice(scan: &mut LatticeScan<'_>) -> StageLattice {
    let full = scan.full_mask() as usize;
    let mut regular = vec![false; full + 1];
    for (mask, r) in regular.iter_mut().enumerate().skip(1) {
        *r = scan.regular(mask as u32);
    }
    let mut qirr = vec![false; full + 1];
    for mask in 1..=full {
        qirr[mask] = regular[mask]
            && LatticeScan::proper_submasks(mask as u32).into_iter().all(|s| !regular[s as usize]);
    }
    let mut cqr = vec![false; full + 1];
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let mut sub = mask;
        while sub != 0 {
            if sub & low != 0 && qirr[sub] {
                let rest = mask & !sub;
                if rest == 0 || cqr[rest] {
                    cqr[mask] = true;
                    break;
                }
            }
            sub = (sub - 1) & mask;
        }
    }
    StageLattice { regular, cqr }
}

pub fn decompose_filtration(pv: &PvInstance, seed: u64) -> Result<FiltrationReport, FiltrationError> {
    let top = is_regular(pv, seed);
    if !top.regular {
        return Err(FiltrationError::NotRegular(Box::new(top)));
    }
    let mut stages = Vec::new();
    let mut remaining: Vec<usize> = (0..pv.components.len()).collect();
    let mut current = pv.clone();
    loop {
        let mut scan = LatticeScan::new(&current, seed);
        let lat = stage_lattice(&mut scan);
        let dim_of = |mask: usize| -> usize {
            LatticeScan::members(mask as u32).iter().map(|&i| current.components[i].coords.len()).sum()
        };
        let best = (1..lat.regular.len())
            .filter(|&m| lat.regular[m] && lat.cqr[m])
            .max_by(|&a, &b| {
                dim_of(a).cmp(&dim_of(b)).then_with(|| {
                    LatticeScan::members(b as u32).cmp(&LatticeScan::members(a as u32))
                })
            });
        let Some(mask) = best else {
            return Err(FiltrationError::PartialFiltration { stages, remaining });
        };
        let chosen = LatticeScan::members(mask as u32);
        let sub = current.restrict(&chosen).expect("nonempty");
        let x = generic_point(&sub, seed).point;
        let iso = isotropy_algebra(&sub, &x);
        let red = is_reductive(&current, &iso);
        stages.push(FiltrationStage {
            components: chosen.iter().map(|&i| remaining[i]).collect(),
            labels: chosen.iter().map(|&i| current.components[i].label.clone()).collect(),
            algebra_dim: current.dim_algebra(),
            subspace_dim: sub.dim_v,
            isotropy_dim: iso.len(),
            reductive: red.reductive,
            form_det: red.form_det,
        });
        let rest: Vec<usize> = (0..current.components.len()).filter(|i| !chosen.contains(i)).collect();
        if rest.is_empty() {
            return Ok(FiltrationReport { stages, search: "component lattice".to_string() });
        }
        current = current.subalgebra_on(&iso, &rest).expect("nonempty");
        remaining = rest.iter().map(|&i| remaining[i]).collect();
    }
}
