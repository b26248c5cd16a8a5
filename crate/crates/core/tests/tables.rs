use cellular_ia::tables::{min_antennas, resource_report, MsMinimum};
use cellular_ia::{Approach, NetworkConfig, Topology};
use proptest::prelude::*;

mod common;

use common::reference::{configs, reference_minimum, symbolic, MsF};

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn minimum_antennas_match_reference_formulas(k in 2usize..9, m in 1usize..6, me_frac in 0.0f64..1.0, d in 1usize..4) {
        let me = 1 + ((m as f64 - 1.0) * me_frac).round() as usize;
        for cfg in configs(k, m, me, d) {
            for approach in Approach::for_topology(cfg.topology) {
                let got = min_antennas(cfg.topology, approach, &cfg).unwrap();
                let (bs, ms) = reference_minimum(
                    cfg.topology, approach, cfg.k as f64, m as f64, me as f64, d as f64, (m * d + d) as f64,
                );
                prop_assert_eq!(got.bs as f64, bs.max(0.0), "{} {} BS", cfg.topology, approach);
                match (got.ms, ms) {
                    (MsMinimum::Uniform(n), MsF::U(x)) => prop_assert_eq!(n as f64, x),
                    (MsMinimum::Split { interior, edge }, MsF::S(i, e)) => {
                        prop_assert_eq!((interior as f64, edge as f64), (i, e))
                    }
                    (got, want) => prop_assert!(false, "shape mismatch {:?} vs {:?}", got, want),
                }
                let (bf, mf) = symbolic(cfg.topology, approach);
                prop_assert_eq!((got.bs_formula, got.ms_formula), (bf, mf));
                let row = resource_report(cfg.topology, approach, &cfg, Some(20)).unwrap();
                prop_assert_eq!(row.bs_min_antennas, got.bs);
                prop_assert!(!row.csi_entries.is_empty() && !row.complexity_entries.is_empty());
            }
        }
    }
}

#[test]
fn option_e_cost_row_is_flagged_not_matched() {
    let cfg = NetworkConfig::cyclic_two_side(6, 3, 2, 12, 8);
    let row = resource_report(Topology::CyclicTwoSide, Approach::OptE, &cfg, Some(20)).unwrap();
    assert!(row.notes.iter().any(|n| n.starts_with("inconsistent row")));
    for approach in [Approach::OptA, Approach::OptB, Approach::OptC] {
        let row = resource_report(Topology::CyclicTwoSide, approach, &cfg, None).unwrap();
        assert!(!row.notes.iter().any(|n| n.starts_with("inconsistent row")));
    }
}

#[test]
fn csi_and_cost_examples() {
    let cfg = NetworkConfig::cyclic_two_side(6, 3, 2, 10, 14);
    let b = resource_report(Topology::CyclicTwoSide, Approach::B, &cfg, None).unwrap();
    let adjacent: u64 = b.csi_entries.iter().filter(|e| e.source == "adjacent inter-cell MSs").map(|e| e.quantity).sum();
    assert_eq!(adjacent, 6);
    let dr = resource_report(Topology::CyclicTwoSide, Approach::D, &cfg, None).unwrap();
    assert!(dr.complexity_entries.iter().any(|e| e.operation == "matrix inverse" && e.scale == vec![10, 10]));
}

#[test]
fn wrong_approach_for_topology_is_an_error() {
    let cfg = NetworkConfig::full_connected(3, 2, 1, 2, 5);
    assert!(min_antennas(Topology::FullConnected, Approach::F, &cfg).is_err());
    assert!(min_antennas(Topology::FullConnected, Approach::OptC, &cfg).is_err());
}

fn with_counts(cfg: &NetworkConfig, n_t: u64, ms: MsMinimum) -> NetworkConfig {
    let mut out = cfg.clone();
    out.n_t = n_t as usize;
    match ms {
        MsMinimum::Uniform(n) => out.n_r = Some(n as usize),
        MsMinimum::Split { interior, edge } => {
            out.n_r_star = Some(interior as usize);
            out.n_r_edge = Some(edge as usize);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, failure_persistence: None, ..ProptestConfig::default() })]

    /// Table minima satisfy the step inequalities, and one antenna fewer on
    /// either side does not.
    #[test]
    fn table_minima_agree_with_step_inequalities(k in 3usize..8, m in 2usize..5, me in 1usize..3, d in 1usize..3) {
        let me = me.min(m);
        for cfg in configs(k, m, me, d) {
            for approach in Approach::for_topology(cfg.topology) {
                if cfg.topology == Topology::CyclicTwoSide && approach == Approach::E && k % 2 == 0 {
                    continue;
                }
                let min = min_antennas(cfg.topology, approach, &cfg).unwrap();
                let at = with_counts(&cfg, min.bs, min.ms);
                prop_assert!(cellular_ia::feasibility::require(&at, approach).is_ok(), "{} {} {:?}", cfg.topology, approach, at);
                let fewer_bs = with_counts(&cfg, min.bs - 1, min.ms);
                prop_assert!(cellular_ia::feasibility::require(&fewer_bs, approach).is_err(), "{} {} BS-1", cfg.topology, approach);
                let lowered: Vec<MsMinimum> = match min.ms {
                    MsMinimum::Uniform(n) => vec![MsMinimum::Uniform(n - 1)],
                    MsMinimum::Split { interior, edge } => {
                        let mut v = Vec::new();
                        if cfg.interior_users() > 0 {
                            v.push(MsMinimum::Split { interior: interior - 1, edge });
                        }
                        if cfg.edge_users() > 0 {
                            v.push(MsMinimum::Split { interior, edge: edge - 1 });
                        }
                        v
                    }
                };
                for ms in lowered {
                    if approach == Approach::OptA || approach == Approach::OptB {
                        // The BS minimum is written in terms of N_r; keep it consistent.
                        continue;
                    }
                    let fewer_ms = with_counts(&cfg, min.bs, ms);
                    prop_assert!(cellular_ia::feasibility::require(&fewer_ms, approach).is_err(), "{} {} {:?}", cfg.topology, approach, fewer_ms);
                }
            }
        }
    }
}
