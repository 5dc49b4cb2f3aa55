use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{Matrix, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PfaffianError {
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("matrix has odd size {0}")]
    OddSize(usize),
}

/// Pf(Z) by expansion along the first row:
/// Pf(Z) = Σ_{j>1} (−1)^j z_{1j} Pf(Z with rows and columns 1, j removed).
pub fn pfaffian(z: &Matrix) -> Result<Q, PfaffianError> {
    if !z.is_square() || !z.is_skew() {
        return Err(PfaffianError::NotSkew);
    }
    if z.rows() % 2 == 1 {
        return Err(PfaffianError::OddSize(z.rows()));
    }
    let idx: Vec<usize> = (0..z.rows()).collect();
    Ok(expand(z, &idx))
}

fn expand(z: &Matrix, idx: &[usize]) -> Q {
    if idx.is_empty() {
        return Q::one();
    }
    let first = idx[0];
    let mut acc = Q::zero();
    for k in 1..idx.len() {
        let a = &z[(first, idx[k])];
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|(i, _)| i + 1 != k).map(|(_, &v)| v).collect();
        let term = a * expand(z, &rest);
        // k is the 0-based position, so the 1-based sign (−1)^{k+1+1} is (−1)^k.
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}
