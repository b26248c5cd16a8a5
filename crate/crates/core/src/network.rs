//! Network configurations, link topology and seeded channel generation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{IaError, Result};
use crate::linalg::ComplexMatrix;
use crate::random::{gaussian_matrix, link_rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Every BS reaches every user.
    FullConnected,
    /// Cells on a ring; each cell hears both neighbours.
    CyclicTwoSide,
    /// Cells on a ring; only edge users of cell k hear BS k+1.
    CyclicOneSideEdge,
}

impl Topology {
    pub const ALL: [Topology; 3] = [Topology::FullConnected, Topology::CyclicTwoSide, Topology::CyclicOneSideEdge];

    pub fn as_str(self) -> &'static str {
        match self {
            Topology::FullConnected => "full_connected",
            Topology::CyclicTwoSide => "cyclic_two_side",
            Topology::CyclicOneSideEdge => "cyclic_one_side_edge",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Topology {
    type Err = IaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "full_connected" | "full" | "model1" | "1" => Ok(Topology::FullConnected),
            "cyclic_two_side" | "two_side" | "model2" | "2" => Ok(Topology::CyclicTwoSide),
            "cyclic_one_side_edge" | "one_side" | "model3" | "3" => Ok(Topology::CyclicOneSideEdge),
            other => Err(IaError::InvalidConfig(vec![format!("unknown topology `{other}`")])),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UserClass {
    Interior,
    Edge,
}

/// Counts and antenna numbers of one network.
///
/// Uniform topologies use `n_r`. The one-side edge topology splits each
/// cell into `m_star` interior users followed by `m_edge` edge users, with
/// antenna counts `n_r_star` and `n_r_edge`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub topology: Topology,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "M_star", default, skip_serializing_if = "Option::is_none")]
    pub m_star: Option<usize>,
    #[serde(rename = "M_edge", default, skip_serializing_if = "Option::is_none")]
    pub m_edge: Option<usize>,
    pub d: usize,
    #[serde(rename = "N_t")]
    pub n_t: usize,
    #[serde(rename = "N_r", default, skip_serializing_if = "Option::is_none")]
    pub n_r: Option<usize>,
    #[serde(rename = "N_r_star", default, skip_serializing_if = "Option::is_none")]
    pub n_r_star: Option<usize>,
    #[serde(rename = "N_r_edge", default, skip_serializing_if = "Option::is_none")]
    pub n_r_edge: Option<usize>,
}

impl NetworkConfig {
    pub fn full_connected(k: usize, m: usize, d: usize, n_t: usize, n_r: usize) -> Self {
        Self::uniform(Topology::FullConnected, k, m, d, n_t, n_r)
    }

    pub fn cyclic_two_side(k: usize, m: usize, d: usize, n_t: usize, n_r: usize) -> Self {
        Self::uniform(Topology::CyclicTwoSide, k, m, d, n_t, n_r)
    }

    fn uniform(topology: Topology, k: usize, m: usize, d: usize, n_t: usize, n_r: usize) -> Self {
        NetworkConfig {
            topology,
            k,
            m,
            m_star: None,
            m_edge: None,
            d,
            n_t,
            n_r: Some(n_r),
            n_r_star: None,
            n_r_edge: None,
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn cyclic_one_side(
        k: usize,
        m_star: usize,
        m_edge: usize,
        d: usize,
        n_t: usize,
        n_r_star: usize,
        n_r_edge: usize,
    ) -> Self {
        NetworkConfig {
            topology: Topology::CyclicOneSideEdge,
            k,
            m: m_star + m_edge,
            m_star: Some(m_star),
            m_edge: Some(m_edge),
            d,
            n_t,
            n_r: None,
            n_r_star: Some(n_r_star),
            n_r_edge: Some(n_r_edge),
        }
    }

    fn split(&self) -> bool {
        self.topology == Topology::CyclicOneSideEdge
    }

    /// Interior users per cell (all users in uniform topologies).
    pub fn interior_users(&self) -> usize {
        if self.split() {
            self.m_star.unwrap_or(0)
        } else {
            self.m
        }
    }

    /// Edge users per cell (zero in uniform topologies).
    pub fn edge_users(&self) -> usize {
        if self.split() {
            self.m_edge.unwrap_or(0)
        } else {
            0
        }
    }

    pub fn class_of(&self, user: usize) -> UserClass {
        if self.split() && user >= self.interior_users() {
            UserClass::Edge
        } else {
            UserClass::Interior
        }
    }

    /// Receive antennas of user `user` (the same in every cell).
    pub fn rx_antennas(&self, user: usize) -> usize {
        if !self.split() {
            return self.n_r.unwrap_or(0);
        }
        match self.class_of(user) {
            UserClass::Interior => self.n_r_star.unwrap_or(0),
            UserClass::Edge => self.n_r_edge.unwrap_or(0),
        }
    }

    /// Streams per BS.
    pub fn streams_per_cell(&self) -> usize {
        self.m * self.d
    }

    pub fn total_streams(&self) -> usize {
        self.k * self.m * self.d
    }

    pub fn users(&self) -> Vec<(usize, usize)> {
        (0..self.k).flat_map(|k| (0..self.m).map(move |m| (k, m))).collect()
    }

    /// Cells whose BS interferes with user `user` of cell `cell`.
    pub fn interferers(&self, cell: usize, user: usize) -> Vec<usize> {
        let k = self.k;
        match self.topology {
            Topology::FullConnected => (0..k).filter(|&j| j != cell).collect(),
            Topology::CyclicTwoSide => vec![(cell + k - 1) % k, (cell + 1) % k],
            Topology::CyclicOneSideEdge => match self.class_of(user) {
                UserClass::Edge if k > 1 => vec![(cell + 1) % k],
                _ => Vec::new(),
            },
        }
    }

    /// Whether a channel from BS `tx` to user (`cell`, `user`) exists.
    pub fn has_link(&self, tx: usize, cell: usize, user: usize) -> bool {
        tx == cell || self.interferers(cell, user).contains(&tx)
    }

    /// Out-of-cell users that BS `tx` interferes with, ordered by cell then user.
    pub fn victims(&self, tx: usize) -> Vec<(usize, usize)> {
        self.users()
            .into_iter()
            .filter(|&(k, m)| k != tx && self.interferers(k, m).contains(&tx))
            .collect()
    }

    /// Every invariant violation, empty when the configuration is usable.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let min_k = match self.topology {
            Topology::FullConnected => 1,
            Topology::CyclicTwoSide => 3,
            Topology::CyclicOneSideEdge => 2,
        };
        if self.k < min_k {
            out.push(format!("K >= {min_k} required for {} (K = {})", self.topology, self.k));
        }
        if self.m == 0 {
            out.push("M >= 1 required".into());
        }
        if self.d == 0 {
            out.push("d >= 1 required".into());
        }
        if self.n_t == 0 {
            out.push("N_t >= 1 required".into());
        }
        if self.split() {
            match (self.m_star, self.m_edge) {
                (Some(s), Some(e)) if s + e != self.m => {
                    out.push(format!("M_star + M_edge = M required ({s} + {e} != {})", self.m))
                }
                (Some(_), Some(_)) => {}
                _ => out.push("M_star and M_edge are required for cyclic_one_side_edge".into()),
            }
            if self.n_r.is_some() {
                out.push("N_r is not used by cyclic_one_side_edge; give N_r_star and N_r_edge".into());
            }
            if self.interior_users() > 0 {
                match self.n_r_star {
                    None => out.push("N_r_star is required when M_star > 0".into()),
                    Some(n) if n < self.d => out.push(format!("d <= N_r_star required ({} > {n})", self.d)),
                    _ => {}
                }
            }
            if self.edge_users() > 0 {
                match self.n_r_edge {
                    None => out.push("N_r_edge is required when M_edge > 0".into()),
                    Some(n) if n < self.d => out.push(format!("d <= N_r_edge required ({} > {n})", self.d)),
                    _ => {}
                }
            }
        } else {
            for (name, present) in [
                ("M_star", self.m_star.is_some()),
                ("M_edge", self.m_edge.is_some()),
                ("N_r_star", self.n_r_star.is_some()),
                ("N_r_edge", self.n_r_edge.is_some()),
            ] {
                if present {
                    out.push(format!("{name} is only used by cyclic_one_side_edge"));
                }
            }
            match self.n_r {
                None => out.push(format!("N_r is required for {}", self.topology)),
                Some(n) if n < self.d => out.push(format!("d <= N_r required ({} > {n})", self.d)),
                _ => {}
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(IaError::InvalidConfig(v))
        }
    }
}

/// All invariant violations of `cfg`.
pub fn validate_config(cfg: &NetworkConfig) -> Vec<String> {
    cfg.violations()
}

impl fmt::Display for NetworkConfig {
    /// Plain `key=value` lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "topology={}", self.topology)?;
        writeln!(f, "K={}", self.k)?;
        writeln!(f, "M={}", self.m)?;
        if let Some(v) = self.m_star {
            writeln!(f, "M_star={v}")?;
        }
        if let Some(v) = self.m_edge {
            writeln!(f, "M_edge={v}")?;
        }
        writeln!(f, "d={}", self.d)?;
        writeln!(f, "N_t={}", self.n_t)?;
        for (key, v) in [("N_r", self.n_r), ("N_r_star", self.n_r_star), ("N_r_edge", self.n_r_edge)] {
            if let Some(v) = v {
                writeln!(f, "{key}={v}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for NetworkConfig {
    type Err = IaError;

    fn from_str(s: &str) -> Result<Self> {
        let mut topology = None;
        let mut fields: BTreeMap<String, usize> = BTreeMap::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| IaError::InvalidConfig(vec![format!("expected key=value, got `{line}`")]))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "topology" {
                topology = Some(value.parse::<Topology>()?);
                continue;
            }
            let n = value
                .parse::<usize>()
                .map_err(|_| IaError::InvalidConfig(vec![format!("`{key}` must be a nonnegative integer")]))?;
            fields.insert(key.to_string(), n);
        }
        let topology = topology.ok_or_else(|| IaError::InvalidConfig(vec!["missing `topology`".into()]))?;
        let mut take = |key: &str| fields.remove(key);
        let need = |v: Option<usize>, key: &str| v.ok_or_else(|| IaError::InvalidConfig(vec![format!("missing `{key}`")]));
        let cfg = NetworkConfig {
            topology,
            k: need(take("K"), "K")?,
            m: need(take("M"), "M")?,
            m_star: take("M_star"),
            m_edge: take("M_edge"),
            d: need(take("d"), "d")?,
            n_t: need(take("N_t"), "N_t")?,
            n_r: take("N_r"),
            n_r_star: take("N_r_star"),
            n_r_edge: take("N_r_edge"),
        };
        if let Some(extra) = fields.keys().next() {
            return Err(IaError::InvalidConfig(vec![format!("unknown key `{extra}`")]));
        }
        Ok(cfg)
    }
}

/// Key of one channel: (transmitting BS, receiving cell, user in that cell).
pub type LinkKey = (usize, usize, usize);

/// The channel of every link present in the topology.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub config: NetworkConfig,
    pub seed: u64,
    pub links: BTreeMap<LinkKey, ComplexMatrix>,
}

impl ChannelSet {
    /// Channel from BS `tx` to user `user` of cell `cell`.
    ///
    /// Panics when the topology has no such link.
    pub fn h(&self, tx: usize, cell: usize, user: usize) -> &ComplexMatrix {
        self.links
            .get(&(tx, cell, user))
            .unwrap_or_else(|| panic!("no link from BS {tx} to user ({cell}, {user})"))
    }

    pub fn get(&self, tx: usize, cell: usize, user: usize) -> Option<&ComplexMatrix> {
        self.links.get(&(tx, cell, user))
    }
}

/// Draws i.i.d. CN(0,1) channels for every link of the topology.
pub fn generate_channels(cfg: &NetworkConfig, seed: u64) -> Result<ChannelSet> {
    cfg.validate()?;
    let mut links = BTreeMap::new();
    for (cell, user) in cfg.users() {
        let n_r = cfg.rx_antennas(user);
        let mut txs = vec![cell];
        txs.extend(cfg.interferers(cell, user));
        for tx in txs {
            let mut rng = link_rng(seed, tx, cell, user);
            links.insert((tx, cell, user), gaussian_matrix(&mut rng, n_r, cfg.n_t));
        }
    }
    Ok(ChannelSet { config: cfg.clone(), seed, links })
}
