//! Seeded random streams. Every random object is drawn from a ChaCha stream
//! whose id encodes what the draw is for, so unrelated draws never share state.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{c, orthonormalize_columns, ComplexMatrix};

const TAG_CHANNEL: u64 = 1;
const TAG_DESIGN: u64 = 2;
const TAG_CODEBOOK: u64 = 3;
const TAG_TRIAL: u64 = 4;

const FIELD: u64 = (1 << 20) - 1;

fn stream_id(tag: u64, a: usize, b: usize, c: usize) -> u64 {
    debug_assert!(a as u64 <= FIELD && b as u64 <= FIELD && c as u64 <= FIELD);
    (tag << 60) | ((a as u64 & FIELD) << 40) | ((b as u64 & FIELD) << 20) | (c as u64 & FIELD)
}

/// Generator for an arbitrary stream id under a seed.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream for the channel from BS `tx` to user `user` of cell `rx`.
pub fn link_rng(seed: u64, tx: usize, rx: usize, user: usize) -> ChaCha20Rng {
    rng_for(seed, stream_id(TAG_CHANNEL, tx, rx, user))
}

/// Stream for the random intermediates of one design run.
pub fn design_rng(seed: u64) -> ChaCha20Rng {
    rng_for(seed, stream_id(TAG_DESIGN, 0, 0, 0))
}

/// Stream for candidate `index` of the codebook owned by `cell`.
pub fn codebook_rng(seed: u64, cell: usize, index: usize) -> ChaCha20Rng {
    rng_for(seed, stream_id(TAG_CODEBOOK, cell, index, 0))
}

/// Independent seed for trial `trial` and purpose `purpose`.
pub fn derive_seed(seed: u64, trial: usize, purpose: usize) -> u64 {
    rng_for(seed, stream_id(TAG_TRIAL, trial, purpose, 0)).next_u64()
}

/// Matrix of i.i.d. circularly symmetric complex Gaussians with unit variance.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        data.push(c(s * re, s * im));
    }
    ComplexMatrix::from_vec(rows, cols, data)
}

/// Orthonormalized Gaussian matrix.
pub fn random_orthonormal<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if cols == 0 {
        return Ok(ComplexMatrix::zeros(rows, 0));
    }
    orthonormalize_columns(&gaussian_matrix(rng, rows, cols))
}
