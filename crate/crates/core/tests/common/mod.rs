#![allow(dead_code)]

pub mod reference;

use cellular_ia::feasibility::minimal_config;
use cellular_ia::linalg::singular_values;
use cellular_ia::{Approach, ChannelSet, CoderSet, ComplexMatrix, NetworkConfig, Topology};
use num_complex::Complex64;

/// `‖U† H V‖²_F` by explicit summation.
pub fn filtered_power(u: &ComplexMatrix, h: &ComplexMatrix, v: &ComplexMatrix) -> f64 {
    let mut total = 0.0;
    for a in 0..u.ncols() {
        for b in 0..v.ncols() {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..h.nrows() {
                for s in 0..h.ncols() {
                    acc += u[(r, a)].conj() * h[(r, s)] * v[(s, b)];
                }
            }
            total += acc.norm_sqr();
        }
    }
    total
}

/// Per-user interference over desired power, summed over every transmitter
/// that has a link to the user.
pub fn brute_residuals(ch: &ChannelSet, coders: &CoderSet) -> Vec<((usize, usize), f64)> {
    let cfg = &ch.config;
    let mut out = Vec::new();
    for k in 0..cfg.k {
        for m in 0..cfg.m {
            let u = coders.u(k, m);
            let desired = filtered_power(u, ch.h(k, k, m), coders.v(k, m));
            let mut interference = 0.0;
            for j in 0..cfg.k {
                let Some(h) = ch.get(j, k, m) else { continue };
                for n in 0..cfg.m {
                    if (j, n) != (k, m) {
                        interference += filtered_power(u, h, coders.v(j, n));
                    }
                }
            }
            out.push(((k, m), interference / desired.max(1e-30)));
        }
    }
    out
}

pub fn max_brute_residual(ch: &ChannelSet, coders: &CoderSet) -> f64 {
    brute_residuals(ch, coders).into_iter().map(|(_, r)| r).fold(0.0, f64::max)
}

pub fn min_desired_singular(ch: &ChannelSet, coders: &CoderSet) -> f64 {
    let cfg = &ch.config;
    let mut low = f64::INFINITY;
    for (k, m) in cfg.users() {
        let a = coders.u(k, m).adjoint() * ch.h(k, k, m) * coders.v(k, m);
        low = low.min(*singular_values(&a).last().unwrap());
    }
    low
}

pub fn template(topology: Topology, k: usize, m: usize, m_edge: usize, d: usize) -> NetworkConfig {
    match topology {
        Topology::FullConnected => NetworkConfig::full_connected(k, m, d, 1, d),
        Topology::CyclicTwoSide => NetworkConfig::cyclic_two_side(k, m, d, 1, d),
        Topology::CyclicOneSideEdge => NetworkConfig::cyclic_one_side(k, m - m_edge, m_edge, d, 1, d, d),
    }
}

/// Step-level minimum configuration for `approach`.
pub fn minimal(topology: Topology, approach: Approach, k: usize, m: usize, m_edge: usize, d: usize) -> NetworkConfig {
    let limit = if topology == Topology::CyclicOneSideEdge { 48 } else { 512 };
    minimal_config(&template(topology, k, m, m_edge, d), approach, limit)
        .unwrap_or_else(|| panic!("no feasible configuration for {topology} {approach}"))
}

/// Dimension sets (K, M, M°, d) used per topology.
pub fn dims(topology: Topology) -> Vec<(usize, usize, usize, usize)> {
    match topology {
        Topology::FullConnected => vec![(3, 2, 0, 1), (2, 3, 0, 2), (3, 1, 0, 2)],
        Topology::CyclicTwoSide => vec![(6, 3, 0, 2), (3, 2, 0, 1), (5, 2, 0, 1)],
        Topology::CyclicOneSideEdge => vec![(6, 3, 2, 2), (4, 2, 1, 1), (3, 3, 3, 1)],
    }
}

pub const TOPOLOGIES: [Topology; 3] =
    [Topology::FullConnected, Topology::CyclicTwoSide, Topology::CyclicOneSideEdge];
