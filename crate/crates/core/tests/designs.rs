mod common;

use cellular_ia::designs::{design_model2_advanced, design_model3_advanced, generate_codebook, generate_codebooks};
use cellular_ia::linalg::{hermitian_eigen, rank_above, singular_values};
use cellular_ia::random::{random_orthonormal, rng_for};
use cellular_ia::{
    chordal_distance_sq, design, generate_channels, leakage_report, Approach, ChannelSet, CoderSet, ComplexMatrix,
    IaError, NetworkConfig, Topology,
};
use common::*;

/// Rank threshold scaled to the magnitude of the checked matrix family.
fn cert_rank(a: &ComplexMatrix, scale: f64) -> usize {
    rank_above(a, 1e-8 * scale.max(1.0))
}

fn frob(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn run(cfg: &NetworkConfig, approach: Approach, seed: u64) -> (ChannelSet, CoderSet) {
    let ch = generate_channels(cfg, seed).unwrap();
    let (coders, _) = design(&ch, approach, seed ^ 0x5eed, None).unwrap();
    (ch, coders)
}

fn vcat(mats: &[ComplexMatrix]) -> ComplexMatrix {
    let rows: usize = mats.iter().map(|m| m.nrows()).sum();
    let mut out = ComplexMatrix::zeros(rows, mats[0].ncols());
    let mut r = 0;
    for m in mats {
        out.view_mut((r, 0), m.shape()).copy_from(m);
        r += m.nrows();
    }
    out
}

fn hcat(mats: &[ComplexMatrix]) -> ComplexMatrix {
    vcat(&mats.iter().map(|m| m.adjoint()).collect::<Vec<_>>()).adjoint()
}

#[test]
fn basic_designs_zero_force_at_minimum_antennas() {
    for topology in TOPOLOGIES {
        for (k, m, me, d) in dims(topology) {
            for approach in Approach::BASIC {
                let cfg = minimal(topology, approach, k, m, me, d);
                for seed in 0..10 {
                    let (ch, coders) = run(&cfg, approach, seed);
                    let r = max_brute_residual(&ch, &coders);
                    let s = min_desired_singular(&ch, &coders);
                    assert!(r <= 1e-8 && s >= 1e-4, "{topology} {approach} {cfg:?} seed {seed}: {r:e} {s:e}");
                }
            }
        }
    }
}

#[test]
fn library_report_matches_brute_force() {
    let cfg = NetworkConfig::cyclic_two_side(4, 2, 1, 4, 8);
    let ch = generate_channels(&cfg, 3).unwrap();
    let mut rng = rng_for(9, 0);
    let mut coders = design(&ch, Approach::C, 3, None).unwrap().0;
    for v in coders.precoders.values_mut() {
        *v = random_orthonormal(&mut rng, 4, 1).unwrap();
    }
    let report = leakage_report(&ch, &coders).unwrap();
    for ((key, brute), lib) in brute_residuals(&ch, &coders).iter().zip(&report.per_user) {
        assert_eq!(*key, (lib.cell, lib.user));
        assert!((brute - lib.normalized_residual).abs() <= 1e-10 * brute.max(1.0));
    }
}

#[test]
fn coder_shapes_and_normalization() {
    let cfg = minimal(Topology::CyclicOneSideEdge, Approach::B, 4, 3, 1, 1);
    let (_, coders) = run(&cfg, Approach::B, 1);
    for ((_, m), u) in &coders.receive_filters {
        assert_eq!(u.shape(), (cfg.rx_antennas(*m), 1));
        let g = u.adjoint() * u;
        assert!((g[(0, 0)].re - 1.0).abs() < 1e-12);
    }
    for v in coders.precoders.values() {
        assert!((frob(v) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn full_connected_small_example() {
    let cfg = NetworkConfig::full_connected(3, 3, 1, 3, 7);
    let (ch, coders) = run(&cfg, Approach::A, 11);
    assert!(max_brute_residual(&ch, &coders) <= 1e-8);
}

#[test]
fn single_cell_reduces_to_zero_forcing() {
    let cfg = NetworkConfig::full_connected(1, 2, 1, 2, 2);
    let (ch, coders) = run(&cfg, Approach::A, 5);
    assert!(cfg.interferers(0, 0).is_empty());
    assert!(max_brute_residual(&ch, &coders) <= 1e-10);
}

#[test]
fn receive_reference_is_shared_within_a_cell() {
    let cfg = NetworkConfig::full_connected(3, 2, 1, 4, 5);
    for seed in 0..5 {
        let (ch, coders) = run(&cfg, Approach::D, seed);
        assert!(max_brute_residual(&ch, &coders) <= 1e-8);
        for j in 0..3 {
            for k in (0..3).filter(|&k| k != j) {
                let a = (coders.u(j, 0).adjoint() * ch.h(k, j, 0)).adjoint();
                let b = (coders.u(j, 1).adjoint() * ch.h(k, j, 1)).adjoint();
                assert!(chordal_distance_sq(&a, &b).unwrap() <= 1e-6);
            }
        }
    }
}

#[test]
fn too_few_transmit_antennas_rejected() {
    let cfg = NetworkConfig::full_connected(3, 3, 1, 2, 7);
    let ch = generate_channels(&cfg, 1).unwrap();
    match design(&ch, Approach::A, 1, None) {
        Err(IaError::InfeasibleAntennas(msg)) => assert!(msg.contains("N_t ≥ Md"), "{msg}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn cascaded_precoder_identity() {
    for (topology, approach) in [(Topology::FullConnected, Approach::A), (Topology::CyclicTwoSide, Approach::A)] {
        let cfg = minimal(topology, approach, 3, 2, 0, 1);
        let (_, coders) = run(&cfg, approach, 2);
        for ((k, m), v) in &coders.precoders {
            let raw = &coders.intermediates.phi[k] * &coders.intermediates.v_tilde[&(*k, *m)];
            assert!(chordal_distance_sq(v, &raw).unwrap() <= 1e-8);
        }
    }
    let cfg = minimal(Topology::FullConnected, Approach::B, 3, 2, 0, 1);
    let (_, coders) = run(&cfg, Approach::B, 2);
    for ((k, m), u) in &coders.receive_filters {
        let raw = &coders.intermediates.psi[&(*k, *m)] * &coders.intermediates.u_tilde[&(*k, *m)];
        assert!(chordal_distance_sq(u, &raw).unwrap() <= 1e-8);
    }
}

/// Approach A: the filtered channels of all victims of BS k span at most
/// N_t - Md dimensions.
#[test]
fn implicit_alignment_rank_certificate() {
    for topology in [Topology::FullConnected, Topology::CyclicTwoSide] {
        for extra in [0, 1, 2] {
            let mut cfg = minimal(topology, Approach::A, 3, 2, 0, 1);
            cfg.n_t += extra;
            cfg.n_r = Some(cfg.n_r.unwrap() + extra);
            for seed in 0..50 {
                let (ch, coders) = run(&cfg, Approach::A, seed);
                for k in 0..cfg.k {
                    let blocks: Vec<ComplexMatrix> =
                        cfg.victims(k).iter().map(|&(j, m)| coders.u(j, m).adjoint() * ch.h(k, j, m)).collect();
                    let stack = vcat(&blocks);
                    let scale = frob(&stack);
                    assert!(cert_rank(&stack, scale) <= cfg.n_t - cfg.streams_per_cell());
                    let annihilated = &stack * &coders.intermediates.phi[&k];
                    assert!(frob(&annihilated) <= 1e-8 * scale.max(1.0));
                }
            }
        }
    }
}

/// Approach B: interference columns at every receiver span at most N_r - Md
/// dimensions.
#[test]
fn receive_side_rank_certificate() {
    for topology in TOPOLOGIES {
        let (k, m, me, d) = dims(topology)[1];
        let cfg = minimal(topology, Approach::B, k, m, me, d);
        for seed in 0..50 {
            let (ch, coders) = run(&cfg, Approach::B, seed);
            for (cell, user) in cfg.users() {
                let sources = cfg.interferers(cell, user);
                if sources.is_empty() {
                    continue;
                }
                let cols: Vec<ComplexMatrix> = sources
                    .iter()
                    .flat_map(|&j| (0..cfg.m).map(move |n| (j, n)))
                    .map(|(j, n)| ch.h(j, cell, user) * coders.v(j, n))
                    .collect();
                let stack = hcat(&cols);
                let bound = cfg.rx_antennas(user) - cfg.streams_per_cell();
                assert!(cert_rank(&stack, frob(&stack)) <= bound, "{topology} seed {seed}");
            }
        }
    }
}

#[test]
fn equalizer_inverts_interfering_channels() {
    let configs = [
        NetworkConfig::cyclic_two_side(6, 3, 2, 12, 24),
        minimal(Topology::FullConnected, Approach::C, 3, 2, 0, 1),
        minimal(Topology::CyclicOneSideEdge, Approach::C, 4, 3, 1, 1),
    ];
    for cfg in configs {
        let (ch, coders) = run(&cfg, Approach::C, 4);
        assert!(max_brute_residual(&ch, &coders) <= 1e-8);
        for (k, m) in cfg.users() {
            for j in cfg.interferers(k, m) {
                let product = &coders.intermediates.g[&(k, m)] * ch.h(j, k, m);
                let err = frob(&(product - ComplexMatrix::identity(cfg.n_t, cfg.n_t)));
                assert!(err <= 1e-8, "{cfg:?}: {err:e}");
            }
        }
    }
}

#[test]
fn transmit_references_coincide() {
    for topology in [Topology::FullConnected, Topology::CyclicTwoSide] {
        let (k, m, me, d) = dims(topology)[1];
        let cfg = minimal(topology, Approach::E, k, m, me, d);
        for seed in 0..10 {
            let (ch, coders) = run(&cfg, Approach::E, seed);
            for (cell, user) in cfg.users() {
                let theta = &coders.intermediates.theta[&(cell, user)];
                for j in cfg.interferers(cell, user) {
                    let vj = hcat(&(0..cfg.m).map(|n| coders.v(j, n).clone()).collect::<Vec<_>>());
                    let arrived = ch.h(j, cell, user) * vj;
                    // Columns agree up to the per-column precoder scaling.
                    for c in 0..theta.ncols() {
                        let a = arrived.columns(c, 1).into_owned();
                        let t = theta.columns(c, 1).into_owned();
                        assert!(chordal_distance_sq(&a, &t).unwrap() <= 1e-8, "{topology} seed {seed}");
                    }
                }
            }
        }
    }
}

#[test]
fn one_side_examples() {
    let cfg = NetworkConfig::cyclic_one_side(6, 3, 2, 2, 10, 2, 12);
    let (ch, coders) = run(&cfg, Approach::A, 3);
    assert!(max_brute_residual(&ch, &coders) <= 1e-8);

    for approach in Approach::BASIC {
        let no_edge = minimal(Topology::CyclicOneSideEdge, approach, 4, 2, 0, 1);
        let (ch, coders) = run(&no_edge, approach, 3);
        assert_eq!(ch.links.len(), 4 * 2);
        assert!(max_brute_residual(&ch, &coders) <= 1e-8, "{approach}");
    }
}

#[test]
fn interior_filters_may_be_random() {
    for approach in [Approach::A, Approach::C, Approach::D] {
        let cfg = minimal(Topology::CyclicOneSideEdge, approach, 6, 3, 2, 2);
        assert_eq!(cfg.n_r_star, Some(2));
        for seed in 0..10 {
            let (ch, mut coders) = run(&cfg, approach, seed);
            let mut rng = rng_for(seed, 77);
            for m in 0..cfg.interior_users() {
                for k in 0..cfg.k {
                    coders.receive_filters.insert((k, m), random_orthonormal(&mut rng, 2, 2).unwrap());
                }
            }
            assert!(max_brute_residual(&ch, &coders) <= 1e-8, "{approach} seed {seed}");
        }
    }
}

#[test]
fn edge_receive_rank_certificate() {
    let cfg = minimal(Topology::CyclicOneSideEdge, Approach::B, 6, 3, 2, 2);
    for seed in 0..50 {
        let (ch, coders) = run(&cfg, Approach::B, seed);
        for k in 0..cfg.k {
            for m in cfg.interior_users()..cfg.m {
                let next = (k + 1) % cfg.k;
                let cols: Vec<ComplexMatrix> = (0..cfg.m).map(|n| ch.h(next, k, m) * coders.v(next, n)).collect();
                let stack = hcat(&cols);
                assert!(cert_rank(&stack, frob(&stack)) <= cfg.n_r_edge.unwrap() - cfg.streams_per_cell());
            }
        }
    }
}

#[test]
fn direct_inverse_one_side() {
    let cfg = NetworkConfig::cyclic_one_side(6, 3, 2, 2, 14, 2, 2);
    for seed in 0..10 {
        let ch = generate_channels(&cfg, seed).unwrap();
        let coders = design_model3_advanced(&ch, seed).unwrap();
        assert!(max_brute_residual(&ch, &coders) <= 1e-8);
        assert!(min_desired_singular(&ch, &coders) >= 1e-4);
    }
    let no_edge = NetworkConfig::cyclic_one_side(3, 2, 0, 1, 2, 1, 1);
    let ch = generate_channels(&no_edge, 2).unwrap();
    assert!(max_brute_residual(&ch, &design_model3_advanced(&ch, 2).unwrap()) <= 1e-8);

    let short = NetworkConfig::cyclic_one_side(6, 3, 2, 2, 13, 2, 2);
    let ch = generate_channels(&short, 1).unwrap();
    assert_eq!(design_model3_advanced(&ch, 1).unwrap_err().kind(), "InfeasibleAntennas");
}

#[test]
fn wrong_topology_or_approach_rejected() {
    let ch = generate_channels(&NetworkConfig::full_connected(3, 1, 1, 1, 3), 1).unwrap();
    assert_eq!(design(&ch, Approach::F, 1, None).unwrap_err().kind(), "UnknownApproach");
    assert_eq!(design(&ch, Approach::OptB, 1, None).unwrap_err().kind(), "UnknownApproach");
    assert!(design_model3_advanced(&ch, 1).is_err());
}

#[test]
fn designs_are_deterministic() {
    for (cfg, approach) in [
        (NetworkConfig::cyclic_two_side(6, 3, 2, 6, 14), Approach::A),
        (NetworkConfig::cyclic_two_side(6, 3, 2, 12, 8), Approach::OptE),
        (minimal(Topology::FullConnected, Approach::D, 3, 2, 0, 1), Approach::D),
    ] {
        let ch = generate_channels(&cfg, 8).unwrap();
        let a = design(&ch, approach, 21, None).unwrap();
        let b = design(&ch, approach, 21, None).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }
}

fn two_side(n_t: usize, n_r: usize) -> NetworkConfig {
    NetworkConfig::cyclic_two_side(6, 3, 2, n_t, n_r)
}

#[test]
fn successive_mapping_leaves_only_boundary_cells() {
    let cfg = two_side(24, 8);
    for seed in 0..10 {
        let ch = generate_channels(&cfg, seed).unwrap();
        let (coders, report) = design_model2_advanced(&ch, Approach::OptB, seed, None).unwrap();
        assert!(!report.boundary_cells.is_empty() && report.boundary_cells.len() <= 2);
        for (key, r) in brute_residuals(&ch, &coders) {
            if !report.boundary_cells.contains(&key.0) {
                assert!(r <= 1e-8, "user {key:?}: {r:e}");
            }
        }
    }
}

#[test]
fn alternating_null_space_aligns_both_sides() {
    for k in [5, 6] {
        let cfg = NetworkConfig::cyclic_two_side(k, 3, 2, 12, 8);
        for seed in 0..10 {
            let ch = generate_channels(&cfg, seed).unwrap();
            let (coders, report) = design_model2_advanced(&ch, Approach::OptC, seed, None).unwrap();
            let phi = &coders.intermediates.phi;
            for c in (0..k).filter(|c| !report.boundary_cells.contains(c)) {
                let (prev, next) = ((c + k - 1) % k, (c + 1) % k);
                for m in 0..3 {
                    let uh = coders.u(c, m).adjoint();
                    assert!(frob(&(&uh * ch.h(prev, c, m) * &phi[&prev])) <= 1e-8);
                    assert!(frob(&(&uh * ch.h(next, c, m) * &phi[&next])) <= 1e-8);
                }
            }
            let report_lib = leakage_report(&ch, &coders).unwrap();
            assert!(report_lib.max_residual_excluding(&report.boundary_cells) <= 1e-8);
        }
    }
}

#[test]
fn joint_alignment_closes_the_ring() {
    for k in [5, 6] {
        let cfg = NetworkConfig::cyclic_two_side(k, 3, 2, 27, 8);
        for seed in 0..5 {
            let ch = generate_channels(&cfg, seed).unwrap();
            let (coders, report) = design_model2_advanced(&ch, Approach::OptA, seed, None).unwrap();
            assert!(report.boundary_cells.is_empty());
            assert!(max_brute_residual(&ch, &coders) <= 1e-8);
            let phi = &coders.intermediates.phi;
            for c in 0..k {
                let (prev, next) = ((c + k - 1) % k, (c + 1) % k);
                for m in 0..3 {
                    let a = ch.h(prev, c, m) * &phi[&prev];
                    let b = ch.h(next, c, m) * &phi[&next];
                    assert!(chordal_distance_sq(&a, &b).unwrap() <= 1e-6);
                }
            }
        }
    }
}

#[test]
fn chains_split_by_parity() {
    for k in [3, 4, 5, 6, 7] {
        let cfg = NetworkConfig::cyclic_two_side(k, 1, 1, 4, 2);
        let ch = generate_channels(&cfg, 1).unwrap();
        let (_, report) = design_model2_advanced(&ch, Approach::OptC, 1, None).unwrap();
        let [odd, even] = &report.parity_chains;
        assert!(odd.iter().all(|c| c % 2 == 1) && even.iter().all(|c| c % 2 == 0));
        assert_eq!(odd.len() + even.len(), k);
        let mut seen: Vec<usize> = report.traversal.concat();
        assert_eq!(seen.len(), k);
        seen.sort_unstable();
        assert_eq!(seen, (0..k).collect::<Vec<_>>());
        assert_eq!(report.traversal.len(), if k % 2 == 0 { 2 } else { 1 });
        for step in &report.steps {
            assert_eq!(step.to_cell, (step.from_cell + 2) % k);
            assert_eq!(step.via_cell, (step.from_cell + 1) % k);
        }
    }
}

#[test]
fn leakage_minimizer_is_exact_off_the_boundary() {
    let cfg = two_side(12, 8);
    for seed in 0..10 {
        let ch = generate_channels(&cfg, seed).unwrap();
        let (coders, report) = design_model2_advanced(&ch, Approach::OptE, seed, None).unwrap();
        assert_eq!(report.boundary_cells.len(), 2);
        for (key, r) in brute_residuals(&ch, &coders) {
            if !report.boundary_cells.contains(&key.0) {
                assert!(r <= 1e-8, "user {key:?}: {r:e}");
            }
        }
        assert!(report.steps.iter().all(|s| s.objective.unwrap() <= 1e-8));
    }
}

#[test]
fn leakage_minimizer_optimality() {
    let cfg = two_side(9, 8);
    for seed in 0..5 {
        let ch = generate_channels(&cfg, seed).unwrap();
        let (coders, report) = design_model2_advanced(&ch, Approach::OptE, seed, None).unwrap();
        let mut rng = rng_for(seed, 99);
        for step in &report.steps {
            let fs: Vec<ComplexMatrix> =
                (0..3).map(|m| coders.u(step.via_cell, m).adjoint() * ch.h(step.to_cell, step.via_cell, m)).collect();
            let leak = |phi: &ComplexMatrix| fs.iter().map(|f| frob(&(f * phi)).powi(2)).sum::<f64>();
            let mut gram = ComplexMatrix::zeros(9, 9);
            for f in &fs {
                gram += f.adjoint() * f;
            }
            let (values, _) = hermitian_eigen(&gram).unwrap();
            let smallest: f64 = values[..6].iter().sum();
            let achieved = leak(&coders.intermediates.phi[&step.to_cell]);
            assert!((achieved - smallest).abs() <= 1e-8 * smallest.max(1.0));
            assert!((step.leakage - achieved).abs() <= 1e-8 * achieved.max(1.0));
            for _ in 0..100 {
                let rival = random_orthonormal(&mut rng, 9, 6).unwrap();
                assert!(leak(&rival) >= achieved - 1e-9);
            }
        }
    }
}

fn chordal_brute(p: &ComplexMatrix, q: &ComplexMatrix) -> f64 {
    let sp = singular_values(&(cellular_ia::linalg::orthonormal_basis(p).unwrap().adjoint()
        * cellular_ia::linalg::orthonormal_basis(q).unwrap()));
    let w = p.ncols().min(q.ncols()) as f64;
    w - sp.iter().map(|s| s * s).sum::<f64>()
}

#[test]
fn codebook_selection_matches_exhaustive_scan() {
    let cfg = two_side(12, 8);
    for seed in 0..3 {
        let ch = generate_channels(&cfg, seed).unwrap();
        let books = generate_codebooks(&cfg, 25, seed + 100).unwrap();
        let (coders, report) = design_model2_advanced(&ch, Approach::OptD, seed, Some(&books)).unwrap();
        for step in &report.steps {
            let from_phi = &coders.intermediates.phi[&step.from_cell];
            let scores: Vec<f64> = books[step.to_cell]
                .candidates
                .iter()
                .map(|cand| {
                    (0..3)
                        .map(|m| {
                            chordal_brute(
                                &(ch.h(step.from_cell, step.via_cell, m) * from_phi),
                                &(ch.h(step.to_cell, step.via_cell, m) * cand),
                            )
                        })
                        .sum()
                })
                .collect();
            let best = scores.iter().cloned().fold(f64::INFINITY, f64::min);
            let chosen = step.selected.unwrap();
            assert!(scores[chosen] <= best + 1e-10);
            assert_eq!(coders.intermediates.phi[&step.to_cell], books[step.to_cell].candidates[chosen]);
        }
    }
}

#[test]
fn codebook_is_required_for_selection() {
    let cfg = two_side(6, 8);
    let ch = generate_channels(&cfg, 1).unwrap();
    assert_eq!(design_model2_advanced(&ch, Approach::OptD, 1, None).unwrap_err(), IaError::MissingCodebook);
}

#[test]
fn codebooks_are_seeded_and_nested() {
    let cfg = two_side(6, 8);
    let a = generate_codebook(&cfg, 2, 200, 5).unwrap();
    assert_eq!(a, generate_codebook(&cfg, 2, 200, 5).unwrap());
    let small = generate_codebook(&cfg, 2, 20, 5).unwrap();
    assert_eq!(&a.candidates[..20], &small.candidates[..]);
    let n_t12 = two_side(12, 8);
    let book = generate_codebook(&n_t12, 0, 20, 1).unwrap();
    for i in 0..20 {
        for j in i + 1..20 {
            assert!(chordal_distance_sq(&book.candidates[i], &book.candidates[j]).unwrap() > 1e-6);
        }
    }
    assert_eq!(generate_codebook(&cfg, 0, 1, 3).unwrap().candidates.len(), 1);
    assert!(generate_codebook(&NetworkConfig::cyclic_two_side(6, 3, 2, 5, 8), 0, 4, 1).is_err());
}

#[test]
fn single_entry_codebook_fixes_the_precoder() {
    let cfg = two_side(6, 8);
    let ch = generate_channels(&cfg, 4).unwrap();
    let books = generate_codebooks(&cfg, 1, 9).unwrap();
    let (coders, report) = design_model2_advanced(&ch, Approach::OptD, 4, Some(&books)).unwrap();
    for (c, book) in books.iter().enumerate() {
        assert_eq!(coders.intermediates.phi[&c], book.candidates[0]);
    }
    assert!(report.steps.iter().all(|s| s.selected == Some(0)));
}
