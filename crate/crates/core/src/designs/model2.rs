//! Two-side cyclic network: cell k hears BSs k-1 and k+1.

use super::basic::design_basic;
use super::ensure_topology;
use crate::approach::Approach;
use crate::coders::CoderSet;
use crate::error::{IaError, Result};
use crate::network::{ChannelSet, Topology};

/// Zero-forcing coders for the two-side cyclic network. The approaches are
/// those of [`design_full_connected`](super::design_full_connected) with the
/// interference restricted to the two neighbouring cells.
pub fn design_cyclic_two_side(ch: &ChannelSet, approach: Approach, seed: u64) -> Result<CoderSet> {
    ensure_topology(ch, Topology::CyclicTwoSide)?;
    if !approach.is_basic() {
        return Err(IaError::UnknownApproach {
            topology: Topology::CyclicTwoSide.to_string(),
            approach: approach.id().into(),
        });
    }
    design_basic(ch, approach, seed)
}
