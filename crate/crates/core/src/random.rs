//! Seeded sampling of brackets and matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{HermitianMap, LinearMap};
use crate::tensor::Bracket;
use crate::{CMatrix, C64};

/// Deterministic generator used throughout the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real and imaginary parts uniform in `[-1, 1)`.
pub fn complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex(rng))
}

pub fn linear_map(rng: &mut impl Rng, n: usize) -> LinearMap {
    LinearMap::new(matrix(rng, n)).expect("finite")
}

pub fn hermitian(rng: &mut impl Rng, n: usize) -> HermitianMap {
    HermitianMap::from_matrix_unchecked(matrix(rng, n))
}

/// Unitary factor of a random matrix, with the phases of `R`'s diagonal absorbed.
pub fn unitary(rng: &mut impl Rng, n: usize) -> LinearMap {
    let qr = matrix(rng, n).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    LinearMap::new(q).expect("finite")
}

/// Bracket with every coefficient sampled by [`complex`].
pub fn bracket(rng: &mut impl Rng, n: usize) -> Bracket {
    Bracket::from_fn(n, |_, _, _| complex(rng)).expect("finite")
}

/// Unit vector in the span of the orthonormal columns of `basis`.
pub fn unit_in_span(rng: &mut impl Rng, basis: &CMatrix) -> crate::CVector {
    let coeffs = crate::CVector::from_fn(basis.ncols(), |_, _| complex(rng));
    let v = basis * coeffs;
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}
