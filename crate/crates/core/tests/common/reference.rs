use cellular_ia::{Approach, NetworkConfig, Topology};

/// Reference minimum (BS, MS) formulas, evaluated in floating point and
/// rounded up to whole antennas.
pub fn reference_minimum(topology: Topology, approach: Approach, k: f64, m: f64, me: f64, d: f64, nr: f64) -> (f64, MsF) {
    use Approach::*;
    use Topology::*;
    let up = f64::ceil;
    match (topology, approach) {
        (FullConnected, A) => (m * d, MsF::U((k - 1.0) * m * d + d)),
        (FullConnected, B) => ((k - 1.0) * m * m * d + m * d, MsF::U(m * d)),
        (FullConnected, C) => (2.0 * m * d, MsF::U((k - 1.0) * 2.0 * m * d)),
        (FullConnected, D) => {
            ((m + k - 1.0) * d, MsF::U(up((k - 1.0) * (m - 1.0) / m * (m + k - 1.0) * d + d / m - 1e-9)))
        }
        (FullConnected, E) => ((k * m - 2.0 * m) * 2.0 * m * d + up(m / k * d - 1e-9), MsF::U(2.0 * m * d)),
        (CyclicTwoSide, A) => (m * d, MsF::U(2.0 * m * d + d)),
        (CyclicTwoSide, B) => (2.0 * m * m * d + m * d, MsF::U(m * d)),
        (CyclicTwoSide, C) => (2.0 * m * d, MsF::U(4.0 * m * d)),
        (CyclicTwoSide, D) => ((m + 2.0) * d, MsF::U(up(2.0 * (m - 1.0) / m * (m + 2.0) * d + d / m - 1e-9))),
        (CyclicTwoSide, E) => (2.0 * m * m * d + up(m / k * d - 1e-9), MsF::U(2.0 * m * d)),
        (CyclicTwoSide, OptA) => (m * nr + up(2.0 * m * d / k - 1e-9), MsF::U(m * d + d)),
        (CyclicTwoSide, OptB) => (m * nr, MsF::U(m * d + d)),
        (CyclicTwoSide, OptC) => (2.0 * m * d, MsF::U(m * d + d)),
        (CyclicTwoSide, OptD) | (CyclicTwoSide, OptE) => (m * d, MsF::U(m * d + d)),
        (CyclicOneSideEdge, A) => (m * d, MsF::S(d, m * d + d)),
        (CyclicOneSideEdge, B) => ((me + 1.0) * m * d, MsF::S(m * d, m * d)),
        (CyclicOneSideEdge, C) => (m * d + me * d, MsF::S(d, m * d + me * d)),
        (CyclicOneSideEdge, D) => ((m + 1.0) * d, MsF::S(d, up(m * m / me * d - 1e-9))),
        (CyclicOneSideEdge, E) => (m * d, MsF::S(m * d, 2.0 * m * d)),
        (CyclicOneSideEdge, F) => (me * d + m * d, MsF::S(d, d)),
        _ => unreachable!(),
    }
}

#[derive(Debug)]
pub enum MsF {
    U(f64),
    S(f64, f64),
}

pub fn symbolic(topology: Topology, approach: Approach) -> (&'static str, &'static str) {
    use Approach::*;
    use Topology::*;
    match (topology, approach) {
        (FullConnected, A) => ("Md", "(K-1)Md+d"),
        (FullConnected, B) => ("(K-1)M²d+Md", "Md"),
        (FullConnected, C) => ("2Md", "(K-1)2Md"),
        (FullConnected, D) => ("(M+K-1)d", "(K-1)(M-1)/M·(M+K-1)d+d/M"),
        (FullConnected, E) => ("(KM-2M)2Md+(M/K)d", "2Md"),
        (CyclicTwoSide, A) => ("Md", "2Md+d"),
        (CyclicTwoSide, B) => ("2M²d+Md", "Md"),
        (CyclicTwoSide, C) => ("2Md", "4Md"),
        (CyclicTwoSide, D) => ("(M+2)d", "2(M-1)/M·(M+2)d+d/M"),
        (CyclicTwoSide, E) => ("2M²d+(M/K)d", "2Md"),
        (CyclicTwoSide, OptA) => ("MN_r+2Md/K", "Md+d"),
        (CyclicTwoSide, OptB) => ("MN_r", "Md+d"),
        (CyclicTwoSide, OptC) => ("2Md", "Md+d"),
        (CyclicTwoSide, OptD) | (CyclicTwoSide, OptE) => ("Md", "Md+d"),
        (CyclicOneSideEdge, A) => ("Md", "(d,Md+d)"),
        (CyclicOneSideEdge, B) => ("(M°+1)Md", "(Md,Md)"),
        (CyclicOneSideEdge, C) => ("Md+M°d", "(d,Md+M°d)"),
        (CyclicOneSideEdge, D) => ("(M+1)d", "(d,(M²/M°)d)"),
        (CyclicOneSideEdge, E) => ("Md", "(Md,2Md)"),
        (CyclicOneSideEdge, F) => ("M°d+Md", "(d,d)"),
        _ => unreachable!(),
    }
}

/// One configuration per topology with the given dimensions.
pub fn configs(k: usize, m: usize, me: usize, d: usize) -> Vec<NetworkConfig> {
    let nr = m * d + d;
    vec![
        NetworkConfig::full_connected(k, m, d, m * d, nr),
        NetworkConfig::cyclic_two_side(k.max(3), m, d, m * d, nr),
        NetworkConfig::cyclic_one_side(k, m - me, me, d, m * d, d, d),
    ]
}
