//! Coder constructions.

pub mod advanced;
mod basic;
pub mod model1;
pub mod model2;
pub mod model3;

use rand::Rng;

use crate::approach::Approach;
use crate::coders::CoderSet;
use crate::error::{IaError, Result};
use crate::linalg::{null_space_basis, numerical_rank, ComplexMatrix, DEFAULT_TOL};
use crate::network::{ChannelSet, Topology};
use crate::random::random_orthonormal;

pub use advanced::{
    design_model2_advanced, design_model3_advanced, generate_codebook, generate_codebooks, ChainReport, ChainStep,
    Codebook,
};
pub use model1::design_full_connected;
pub use model2::design_cyclic_two_side;
pub use model3::design_cyclic_one_side;

fn singular(what: impl Into<String>) -> IaError {
    IaError::SingularConstruction(what.into())
}

fn ensure_topology(ch: &ChannelSet, expected: Topology) -> Result<()> {
    if ch.config.topology == expected {
        Ok(())
    } else {
        Err(IaError::InvalidConfig(vec![format!(
            "design for {expected} called on a {} channel set",
            ch.config.topology
        )]))
    }
}

/// `width` orthonormal directions x with `constraint · x = 0`, mixed at
/// random when the null space is wider than needed. A constraint without
/// rows leaves the whole space free.
fn pick_null<R: Rng>(
    rng: &mut R,
    constraint: &ComplexMatrix,
    width: usize,
    what: &str,
) -> Result<ComplexMatrix> {
    let dim = constraint.ncols();
    if constraint.nrows() == 0 {
        return random_orthonormal(rng, dim, width);
    }
    let basis = null_space_basis(constraint, DEFAULT_TOL);
    let n = basis.ncols();
    if n < width {
        return Err(singular(format!("{what}: null space has dimension {n}, {width} required")));
    }
    if n == width {
        return Ok(basis);
    }
    Ok(&basis * random_orthonormal(rng, n, width)?)
}

/// `width` orthonormal directions u with `u† · interference = 0`.
fn pick_left_null<R: Rng>(
    rng: &mut R,
    interference: &ComplexMatrix,
    width: usize,
    what: &str,
) -> Result<ComplexMatrix> {
    pick_null(rng, &interference.adjoint(), width, what)
}

/// Inverse of a square matrix, rejecting numerically singular input.
fn checked_inverse(a: &ComplexMatrix, what: &str) -> Result<ComplexMatrix> {
    if numerical_rank(a, DEFAULT_TOL) < a.nrows() {
        return Err(singular(format!("{what} is rank deficient")));
    }
    a.clone().try_inverse().ok_or_else(|| singular(format!("{what} is not invertible")))
}

/// Requires full row rank, the condition for `a · pinv(a) = I`.
fn ensure_full_row_rank(a: &ComplexMatrix, what: &str) -> Result<()> {
    let rank = numerical_rank(a, DEFAULT_TOL);
    if rank < a.nrows() {
        return Err(singular(format!("{what} has rank {rank}, {} required", a.nrows())));
    }
    Ok(())
}

fn map_normalization(e: IaError) -> IaError {
    match e {
        IaError::ZeroMatrix => singular("a coder column vanished"),
        other => other,
    }
}

/// Runs the construction named by `approach` on `ch`.
///
/// `codebooks` is only read by option d.
pub fn design(
    ch: &ChannelSet,
    approach: Approach,
    seed: u64,
    codebooks: Option<&[Codebook]>,
) -> Result<(CoderSet, Option<ChainReport>)> {
    approach.ensure_valid(ch.config.topology)?;
    match (ch.config.topology, approach) {
        (_, Approach::F) => Ok((design_model3_advanced(ch, seed)?, None)),
        (_, a) if a.is_chain() => {
            let (set, report) = design_model2_advanced(ch, a, seed, codebooks)?;
            Ok((set, Some(report)))
        }
        (Topology::FullConnected, a) => Ok((design_full_connected(ch, a, seed)?, None)),
        (Topology::CyclicTwoSide, a) => Ok((design_cyclic_two_side(ch, a, seed)?, None)),
        (Topology::CyclicOneSideEdge, a) => Ok((design_cyclic_one_side(ch, a, seed)?, None)),
    }
}
