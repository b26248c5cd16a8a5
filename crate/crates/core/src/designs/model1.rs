//! Fully connected network: every BS reaches every user.

use super::basic::design_basic;
use super::ensure_topology;
use crate::approach::Approach;
use crate::coders::CoderSet;
use crate::error::Result;
use crate::network::{ChannelSet, Topology};

/// Zero-forcing coders for a fully connected network.
///
/// * `A` cascades a random intermediate precoder with an inverse of the
///   filtered own-cell channel; receivers null all interfering spans.
/// * `B` cascades a random intermediate receive filter; each BS nulls the
///   filtered cross-cell channels.
/// * `C` equalizes every interfering channel at the receiver and aligns it to
///   a reference shared by user index.
/// * `D` aligns the filtered interfering channels to a common receive
///   reference per cell.
/// * `E` aligns the effective interfering channels at each receiver to a
///   common transmit reference.
pub fn design_full_connected(ch: &ChannelSet, approach: Approach, seed: u64) -> Result<CoderSet> {
    ensure_topology(ch, Topology::FullConnected)?;
    approach.ensure_valid(Topology::FullConnected)?;
    design_basic(ch, approach, seed)
}
