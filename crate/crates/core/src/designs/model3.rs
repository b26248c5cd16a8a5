//! One-side cyclic network: only the edge users of cell k hear BS k+1.

use super::basic::design_basic;
use super::ensure_topology;
use crate::approach::Approach;
use crate::coders::CoderSet;
use crate::error::{IaError, Result};
use crate::network::{ChannelSet, Topology};

/// Zero-forcing coders for the one-side edge network.
///
/// Interior users receive no cross-cell interference, so wherever a receive
/// filter only has to pass through the BS construction it is drawn at random.
/// Approach `E` aligns nothing here: the joint system leaves the precoders
/// free and the receivers null the resulting references.
pub fn design_cyclic_one_side(ch: &ChannelSet, approach: Approach, seed: u64) -> Result<CoderSet> {
    ensure_topology(ch, Topology::CyclicOneSideEdge)?;
    if !approach.is_basic() {
        return Err(IaError::UnknownApproach {
            topology: Topology::CyclicOneSideEdge.to_string(),
            approach: approach.id().into(),
        });
    }
    design_basic(ch, approach, seed)
}
