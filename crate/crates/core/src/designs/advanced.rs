//! Alignment of inter-cell interference with inter-cell interference on the
//! two-side ring, and the direct-inverse design for the one-side ring.
//!
//! On the two-side ring, cell c hears BSs c-1 and c+1. Choosing the
//! intermediate precoder of c+1 so that its channel into cell c spans the same
//! space as that of c-1 lets one receive filter null both. The choice is made
//! either jointly (option a) or one cell at a time along chains that step two
//! cells at a time (options b to e); a chain leaves its last pair unaligned.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::{
    checked_inverse, ensure_full_row_rank, ensure_topology, map_normalization, pick_left_null, pick_null,
    singular,
};
use crate::approach::Approach;
use crate::coders::{CoderSet, Intermediates, UserKey};
use crate::error::{IaError, Result};
use crate::evaluation::{chordal_distance_sq, interference_leakage};
use crate::feasibility;
use crate::linalg::{
    hermitian_eigen, orthonormalize_columns, pseudo_inverse, vstack, ComplexMatrix,
};
use crate::network::{ChannelSet, NetworkConfig, Topology};
use crate::random::{codebook_rng, design_rng, gaussian_matrix, random_orthonormal};

/// Finite set of orthonormal intermediate precoders owned by one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub owner_cell: usize,
    pub candidates: Vec<ComplexMatrix>,
    pub seed: u64,
}

/// Draws `size` independent orthonormal N_t × Md candidates for `owner_cell`.
///
/// Candidate i depends only on (seed, owner_cell, i), so a smaller codebook
/// is always a prefix of a larger one with the same seed. Draws are
/// antenna-major: before orthonormalization, a candidate for fewer antennas
/// is the leading rows of the one for more.
pub fn generate_codebook(cfg: &NetworkConfig, owner_cell: usize, size: usize, seed: u64) -> Result<Codebook> {
    if size == 0 {
        return Err(IaError::InvalidConfig(vec!["codebook size must be at least 1".into()]));
    }
    let md = cfg.streams_per_cell();
    if cfg.n_t < md {
        return Err(IaError::InfeasibleAntennas(format!(
            "codebook: N_t ≥ Md violated ({} vs {md})",
            cfg.n_t
        )));
    }
    let candidates = (0..size)
        .map(|i| orthonormalize_columns(&gaussian_matrix(&mut codebook_rng(seed, owner_cell, i), md, cfg.n_t).transpose()))
        .collect::<Result<_>>()?;
    Ok(Codebook { owner_cell, candidates, seed })
}

/// One codebook per cell.
pub fn generate_codebooks(cfg: &NetworkConfig, size: usize, seed: u64) -> Result<Vec<Codebook>> {
    (0..cfg.k).map(|k| generate_codebook(cfg, k, size, seed)).collect()
}

/// One chain step: the precoder of `to_cell` chosen from that of `from_cell`
/// through their common neighbour `via_cell`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStep {
    pub from_cell: usize,
    pub via_cell: usize,
    pub to_cell: usize,
    /// Interference power left at `via_cell` after filtering.
    pub leakage: f64,
    /// Codebook objective (option d) or the smallest-eigenvalue sum (option e).
    pub objective: Option<f64>,
    pub selected: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    /// Odd-indexed cells then even-indexed cells.
    pub parity_chains: [Vec<usize>; 2],
    /// Cells in the order their precoders were fixed, one list per chain run.
    pub traversal: Vec<Vec<usize>>,
    /// Cells whose two interferers were left unaligned.
    pub boundary_cells: Vec<usize>,
    /// Mean chordal distance between the two incoming interference spans.
    pub per_cell_alignment_error: BTreeMap<usize, f64>,
    pub steps: Vec<ChainStep>,
}

fn stack_over_users(cfg: &NetworkConfig, f: impl Fn(usize) -> ComplexMatrix, cols: usize) -> ComplexMatrix {
    let blocks: Vec<ComplexMatrix> = (0..cfg.m).map(f).collect();
    let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
    vstack(&refs, cols)
}

/// Chain-aligned coders for the two-side ring.
///
/// Option d needs one codebook per cell; the other options ignore `codebooks`.
pub fn design_model2_advanced(
    ch: &ChannelSet,
    option: Approach,
    seed: u64,
    codebooks: Option<&[Codebook]>,
) -> Result<(CoderSet, ChainReport)> {
    ensure_topology(ch, Topology::CyclicTwoSide)?;
    if !option.is_chain() {
        return Err(IaError::UnknownApproach {
            topology: Topology::CyclicTwoSide.to_string(),
            approach: option.id().into(),
        });
    }
    let cfg = &ch.config;
    feasibility::require(cfg, option)?;
    let books = if option == Approach::OptD { Some(codebooks_by_cell(cfg, codebooks)?) } else { None };
    let mut rng = design_rng(seed);
    let k = cfg.k;
    let odd: Vec<usize> = (1..k).step_by(2).collect();
    let even: Vec<usize> = (0..k).step_by(2).collect();

    let mut inter = Intermediates::default();
    let mut u: BTreeMap<UserKey, ComplexMatrix> = BTreeMap::new();
    let mut steps = Vec::new();
    let mut boundary_cells = Vec::new();
    let mut traversal = Vec::new();

    if option == Approach::OptA {
        joint_alignment(ch, &mut rng, &mut inter.phi)?;
        for c in 0..k {
            filter_against_previous(ch, &mut rng, &inter.phi, c, &mut u)?;
        }
    } else {
        let runs = if k.is_multiple_of(2) { vec![odd.clone(), even.clone()] } else { vec![[odd.clone(), even.clone()].concat()] };
        for run in &runs {
            let start = run[0];
            let phi = match &books {
                Some(b) => b[start].candidates[0].clone(),
                None => random_orthonormal(&mut rng, cfg.n_t, cfg.streams_per_cell())?,
            };
            inter.phi.insert(start, phi);
            for pair in run.windows(2) {
                let (from, to) = (pair[0], pair[1]);
                let via = (from + 1) % k;
                filter_against_previous(ch, &mut rng, &inter.phi, via, &mut u)?;
                let (phi, step) = next_precoder(ch, &mut rng, option, books.as_deref(), &inter.phi[&from], &u, from, via, to)?;
                inter.phi.insert(to, phi);
                steps.push(step);
            }
            let last = *run.last().expect("chains are nonempty");
            let via = (last + 1) % k;
            filter_against_previous(ch, &mut rng, &inter.phi, via, &mut u)?;
            boundary_cells.push(via);
        }
        traversal = runs;
    }
    boundary_cells.sort_unstable();

    let mut v = BTreeMap::new();
    let (d, md) = (cfg.d, cfg.streams_per_cell());
    for c in 0..k {
        let phi = &inter.phi[&c];
        let stacked = stack_over_users(cfg, |m| u[&(c, m)].adjoint() * ch.h(c, c, m) * phi, md);
        let v_tilde = checked_inverse(&stacked, &format!("filtered channel of cell {c}"))?;
        for m in 0..cfg.m {
            let block = v_tilde.columns(m * d, d).into_owned();
            v.insert((c, m), phi * &block);
            inter.v_tilde.insert((c, m), block);
        }
        inter.stacked.insert(c, stacked);
    }

    let mut per_cell_alignment_error = BTreeMap::new();
    for c in 0..k {
        let (prev, next) = ((c + k - 1) % k, (c + 1) % k);
        let mut total = 0.0;
        for m in 0..cfg.m {
            let a = ch.h(prev, c, m) * &inter.phi[&prev];
            let b = ch.h(next, c, m) * &inter.phi[&next];
            total += chordal_distance_sq(&a, &b)?.max(0.0).sqrt();
        }
        per_cell_alignment_error.insert(c, total / cfg.m as f64);
    }

    let report = ChainReport {
        parity_chains: [odd, even],
        traversal,
        boundary_cells,
        per_cell_alignment_error,
        steps,
    };
    let set = CoderSet::normalized(option, v, u, inter).map_err(map_normalization)?;
    Ok((set, report))
}

fn codebooks_by_cell<'a>(cfg: &NetworkConfig, codebooks: Option<&'a [Codebook]>) -> Result<Vec<&'a Codebook>> {
    let books = codebooks.ok_or(IaError::MissingCodebook)?;
    let md = cfg.streams_per_cell();
    (0..cfg.k)
        .map(|c| {
            let book = books.iter().find(|b| b.owner_cell == c).ok_or(IaError::MissingCodebook)?;
            if book.candidates.is_empty() {
                return Err(IaError::MissingCodebook);
            }
            if book.candidates.iter().any(|p| p.shape() != (cfg.n_t, md)) {
                return Err(IaError::DimensionMismatch(format!(
                    "codebook of cell {c} must hold {}x{md} candidates",
                    cfg.n_t
                )));
            }
            Ok(book)
        })
        .collect()
}

/// Receive filters of cell `c` nulling the span arriving from BS c-1.
fn filter_against_previous<R: Rng>(
    ch: &ChannelSet,
    rng: &mut R,
    phi: &BTreeMap<usize, ComplexMatrix>,
    c: usize,
    u: &mut BTreeMap<UserKey, ComplexMatrix>,
) -> Result<()> {
    let cfg = &ch.config;
    let prev = (c + cfg.k - 1) % cfg.k;
    for m in 0..cfg.m {
        let incoming = ch.h(prev, c, m) * &phi[&prev];
        u.insert((c, m), pick_left_null(rng, &incoming, cfg.d, "receive filter")?);
    }
    Ok(())
}

/// Filtered interference BS `to` would cause at cell `via` with precoder `phi`.
fn residual(ch: &ChannelSet, u: &BTreeMap<UserKey, ComplexMatrix>, phi: &ComplexMatrix, via: usize, to: usize) -> f64 {
    (0..ch.config.m).map(|m| interference_leakage(&u[&(via, m)], &(ch.h(to, via, m) * phi)).unwrap_or(0.0)).sum()
}

#[allow(clippy::too_many_arguments)]
fn next_precoder<R: Rng>(
    ch: &ChannelSet,
    rng: &mut R,
    option: Approach,
    books: Option<&[&Codebook]>,
    phi_from: &ComplexMatrix,
    u: &BTreeMap<UserKey, ComplexMatrix>,
    from: usize,
    via: usize,
    to: usize,
) -> Result<(ComplexMatrix, ChainStep)> {
    let cfg = &ch.config;
    let (nt, md) = (cfg.n_t, cfg.streams_per_cell());
    let mut objective = None;
    let mut selected = None;
    let phi = match option {
        Approach::OptB => {
            let target = stack_over_users(cfg, |m| ch.h(to, via, m).clone(), nt);
            let source = stack_over_users(cfg, |m| ch.h(from, via, m).clone(), nt);
            let mapped = pseudo_inverse(&target) * source * phi_from;
            orthonormalize_columns(&mapped)
                .map_err(|_| singular(format!("mapped precoder of cell {to} lost rank")))?
        }
        Approach::OptC => {
            let filtered = stack_over_users(cfg, |m| u[&(via, m)].adjoint() * ch.h(to, via, m), nt);
            pick_null(rng, &filtered, md, &format!("precoder of cell {to}"))?
        }
        Approach::OptD => {
            let book = books.expect("codebooks checked")[to];
            let arrivals: Vec<ComplexMatrix> = (0..cfg.m).map(|m| ch.h(from, via, m) * phi_from).collect();
            let mut best: Option<(usize, f64)> = None;
            for (i, cand) in book.candidates.iter().enumerate() {
                let mut score = 0.0;
                for (m, arrival) in arrivals.iter().enumerate() {
                    score += chordal_distance_sq(arrival, &(ch.h(to, via, m) * cand))?;
                }
                if best.is_none_or(|(_, s)| score < s) {
                    best = Some((i, score));
                }
            }
            let (i, score) = best.expect("codebook nonempty");
            objective = Some(score);
            selected = Some(i);
            book.candidates[i].clone()
        }
        Approach::OptE => {
            let mut gram = ComplexMatrix::zeros(nt, nt);
            for m in 0..cfg.m {
                let f = u[&(via, m)].adjoint() * ch.h(to, via, m);
                gram += f.adjoint() * f;
            }
            let (values, vectors) = hermitian_eigen(&gram)?;
            objective = Some(values[..md].iter().sum());
            vectors.columns(0, md).into_owned()
        }
        _ => unreachable!("option a is solved jointly"),
    };
    let leakage = residual(ch, u, &phi, via, to);
    Ok((phi, ChainStep { from_cell: from, via_cell: via, to_cell: to, leakage, objective, selected }))
}

/// Solves every alignment equality of the ring at once, one null-space
/// problem per group of coupled cells.
fn joint_alignment<R: Rng>(ch: &ChannelSet, rng: &mut R, phi: &mut BTreeMap<usize, ComplexMatrix>) -> Result<()> {
    let cfg = &ch.config;
    let (k, nt, md) = (cfg.k, cfg.n_t, cfg.streams_per_cell());
    // Cell c couples c-1 and c+1; the groups are the cycles of the step-2 map.
    let mut group = vec![usize::MAX; k];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for s in 0..k {
        if group[s] != usize::MAX {
            continue;
        }
        let mut members = Vec::new();
        let mut c = s;
        while group[c] == usize::MAX {
            group[c] = groups.len();
            members.push(c);
            c = (c + 2) % k;
        }
        members.sort_unstable();
        groups.push(members);
    }
    for members in &groups {
        let slot = |c: usize| members.iter().position(|&x| x == c).expect("member of group") * nt;
        let receivers: Vec<usize> = (0..k).filter(|&c| members.contains(&((c + k - 1) % k))).collect();
        let per_cell: usize = (0..cfg.m).map(|m| cfg.rx_antennas(m)).sum();
        let total_rows = receivers.len() * per_cell;
        let mut system = ComplexMatrix::zeros(total_rows, members.len() * nt);
        let mut row = 0;
        for &c in &receivers {
            let (prev, next) = ((c + k - 1) % k, (c + 1) % k);
            for m in 0..cfg.m {
                let n_r = cfg.rx_antennas(m);
                let mut view = system.view_mut((row, slot(prev)), (n_r, nt));
                view += ch.h(prev, c, m);
                let mut view = system.view_mut((row, slot(next)), (n_r, nt));
                view -= ch.h(next, c, m);
                row += n_r;
            }
        }
        let solution = pick_null(rng, &system, md, "joint alignment system")?;
        for &c in members {
            let block = solution.rows(slot(c), nt).into_owned();
            ensure_full_row_rank(&block.adjoint(), &format!("aligned precoder of cell {c}"))?;
            phi.insert(c, block);
        }
    }
    Ok(())
}

/// Direct-inverse coders for the one-side edge ring: receive filters are
/// drawn at random and every BS zero-forces both its own users and the edge
/// users of the previous cell.
pub fn design_model3_advanced(ch: &ChannelSet, seed: u64) -> Result<CoderSet> {
    ensure_topology(ch, Topology::CyclicOneSideEdge)?;
    let cfg = &ch.config;
    feasibility::require(cfg, Approach::F)?;
    let mut rng = design_rng(seed);
    let (d, nt) = (cfg.d, cfg.n_t);
    let mut u = BTreeMap::new();
    for (k, m) in cfg.users() {
        u.insert((k, m), random_orthonormal(&mut rng, cfg.rx_antennas(m), d)?);
    }
    let mut inter = Intermediates::default();
    let mut v = BTreeMap::new();
    for k in 0..cfg.k {
        let mut blocks: Vec<ComplexMatrix> =
            cfg.victims(k).iter().map(|&(j, n)| u[&(j, n)].adjoint() * ch.h(k, j, n)).collect();
        let avoided = blocks.len() * d;
        blocks.extend((0..cfg.m).map(|m| u[&(k, m)].adjoint() * ch.h(k, k, m)));
        let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
        let stacked = vstack(&refs, nt);
        ensure_full_row_rank(&stacked, &format!("stacked design matrix of cell {k}"))?;
        let inverse = pseudo_inverse(&stacked);
        for m in 0..cfg.m {
            v.insert((k, m), inverse.columns(avoided + m * d, d).into_owned());
        }
        inter.stacked.insert(k, stacked);
    }
    CoderSet::normalized(Approach::F, v, u, inter).map_err(map_normalization)
}
