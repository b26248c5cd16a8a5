use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{IaError, Result};
use crate::network::Topology;

/// A coder construction.
///
/// `A`..`E` are the basic designs available on every topology, `F` is the
/// direct-inverse design for the one-side edge topology and `OptA`..`OptE`
/// are the chain-alignment options for the two-side cyclic topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Approach {
    #[serde(rename = "A")]
    A,
    #[serde(rename = "B")]
    B,
    #[serde(rename = "C")]
    C,
    #[serde(rename = "D")]
    D,
    #[serde(rename = "E")]
    E,
    #[serde(rename = "F")]
    F,
    #[serde(rename = "a")]
    OptA,
    #[serde(rename = "b")]
    OptB,
    #[serde(rename = "c")]
    OptC,
    #[serde(rename = "d")]
    OptD,
    #[serde(rename = "e")]
    OptE,
}

impl Approach {
    pub const BASIC: [Approach; 5] = [Approach::A, Approach::B, Approach::C, Approach::D, Approach::E];
    pub const CHAIN: [Approach; 5] = [Approach::OptA, Approach::OptB, Approach::OptC, Approach::OptD, Approach::OptE];

    pub fn id(self) -> &'static str {
        match self {
            Approach::A => "A",
            Approach::B => "B",
            Approach::C => "C",
            Approach::D => "D",
            Approach::E => "E",
            Approach::F => "F",
            Approach::OptA => "a",
            Approach::OptB => "b",
            Approach::OptC => "c",
            Approach::OptD => "d",
            Approach::OptE => "e",
        }
    }

    pub fn is_basic(self) -> bool {
        Self::BASIC.contains(&self)
    }

    pub fn is_chain(self) -> bool {
        Self::CHAIN.contains(&self)
    }

    /// Every approach defined for `topology`, basic ones first.
    pub fn for_topology(topology: Topology) -> Vec<Approach> {
        let mut out = Self::BASIC.to_vec();
        match topology {
            Topology::FullConnected => {}
            Topology::CyclicTwoSide => out.extend(Self::CHAIN),
            Topology::CyclicOneSideEdge => out.push(Approach::F),
        }
        out
    }

    pub fn ensure_valid(self, topology: Topology) -> Result<()> {
        if Self::for_topology(topology).contains(&self) {
            Ok(())
        } else {
            Err(IaError::UnknownApproach { topology: topology.to_string(), approach: self.id().to_string() })
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Approach {
    type Err = IaError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let found = [Self::BASIC.as_slice(), &[Approach::F], Self::CHAIN.as_slice()]
            .concat()
            .into_iter()
            .find(|a| a.id() == s);
        found.ok_or_else(|| IaError::UnknownApproach { topology: "any".into(), approach: s.to_string() })
    }
}
