//! Approaches A to E written once against the link structure of the
//! channel set, so they apply to every topology.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use super::{checked_inverse, ensure_full_row_rank, map_normalization, pick_left_null, pick_null};
use crate::approach::Approach;
use crate::coders::{CoderSet, Intermediates, UserKey};
use crate::error::Result;
use crate::feasibility;
use crate::linalg::{c, hstack, orthonormalize_columns, pseudo_inverse, vstack, ComplexMatrix};
use crate::network::ChannelSet;
use crate::random::{design_rng, random_orthonormal};

type Coders = BTreeMap<UserKey, ComplexMatrix>;

pub(crate) fn design_basic(ch: &ChannelSet, approach: Approach, seed: u64) -> Result<CoderSet> {
    feasibility::require(&ch.config, approach)?;
    let mut rng = design_rng(seed);
    let mut inter = Intermediates::default();
    let (v, u) = match approach {
        Approach::A => cascaded_precoders(ch, &mut rng, &mut inter)?,
        Approach::B => cascaded_filters(ch, &mut rng, &mut inter)?,
        Approach::C => equalized_references(ch, &mut rng, &mut inter)?,
        Approach::D => receive_references(ch, &mut rng, &mut inter)?,
        Approach::E => transmit_references(ch, &mut rng, &mut inter)?,
        other => unreachable!("{other} is not a basic approach"),
    };
    CoderSet::normalized(approach, v, u, inter).map_err(map_normalization)
}

/// Splits an N_t × Md cell precoder into per-user N_t × d blocks.
fn split_cell(v: &ComplexMatrix, cell: usize, users: usize, d: usize, out: &mut Coders) {
    for m in 0..users {
        out.insert((cell, m), v.columns(m * d, d).into_owned());
    }
}

/// Interference a user sees from its own BS: H_k V_{k:n} for n ≠ m.
fn iui_columns(ch: &ChannelSet, v: &Coders, cell: usize, user: usize) -> Vec<ComplexMatrix> {
    (0..ch.config.m)
        .filter(|&n| n != user)
        .map(|n| ch.h(cell, cell, user) * &v[&(cell, n)])
        .collect()
}

fn hcat(blocks: &[ComplexMatrix], rows: usize) -> ComplexMatrix {
    let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
    hstack(&refs, rows)
}

fn vcat(blocks: &[ComplexMatrix], cols: usize) -> ComplexMatrix {
    let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
    vstack(&refs, cols)
}

/// Random intermediate precoders; each receiver nulls the interfering
/// intermediate spans; the second stage inverts the filtered own channel.
fn cascaded_precoders<R: Rng>(ch: &ChannelSet, rng: &mut R, inter: &mut Intermediates) -> Result<(Coders, Coders)> {
    let cfg = &ch.config;
    let (d, md) = (cfg.d, cfg.streams_per_cell());
    for k in 0..cfg.k {
        inter.phi.insert(k, random_orthonormal(rng, cfg.n_t, md)?);
    }
    let mut u = Coders::new();
    for (k, m) in cfg.users() {
        let blocks: Vec<ComplexMatrix> =
            cfg.interferers(k, m).iter().map(|&j| ch.h(j, k, m) * &inter.phi[&j]).collect();
        let ici = hcat(&blocks, cfg.rx_antennas(m));
        u.insert((k, m), pick_left_null(rng, &ici, d, "receive filter")?);
    }
    let mut v = Coders::new();
    for k in 0..cfg.k {
        let phi = &inter.phi[&k];
        let rows: Vec<ComplexMatrix> = (0..cfg.m).map(|m| u[&(k, m)].adjoint() * ch.h(k, k, m) * phi).collect();
        let stacked = vcat(&rows, md);
        let v_tilde = checked_inverse(&stacked, &format!("filtered channel of cell {k}"))?;
        for m in 0..cfg.m {
            let block = v_tilde.columns(m * d, d).into_owned();
            v.insert((k, m), phi * &block);
            inter.v_tilde.insert((k, m), block);
        }
        inter.stacked.insert(k, stacked);
    }
    Ok((v, u))
}

/// Random intermediate receive filters; each BS nulls its filtered
/// cross-cell channels; receivers then null the remaining intra-cell streams.
fn cascaded_filters<R: Rng>(ch: &ChannelSet, rng: &mut R, inter: &mut Intermediates) -> Result<(Coders, Coders)> {
    let cfg = &ch.config;
    let (d, md) = (cfg.d, cfg.streams_per_cell());
    for (k, m) in cfg.users() {
        if !cfg.interferers(k, m).is_empty() {
            inter.psi.insert((k, m), random_orthonormal(rng, cfg.rx_antennas(m), md)?);
        }
    }
    let mut v = Coders::new();
    for k in 0..cfg.k {
        let rows: Vec<ComplexMatrix> =
            cfg.victims(k).iter().map(|&(j, n)| inter.psi[&(j, n)].adjoint() * ch.h(k, j, n)).collect();
        let constraint = vcat(&rows, cfg.n_t);
        let vk = pick_null(rng, &constraint, md, &format!("precoder of cell {k}"))?;
        split_cell(&vk, k, cfg.m, d, &mut v);
    }
    let mut u = Coders::new();
    for (k, m) in cfg.users() {
        let iui = hcat(&iui_columns(ch, &v, k, m), cfg.rx_antennas(m));
        let filter = match inter.psi.get(&(k, m)) {
            Some(psi) => {
                let reduced = psi.adjoint() * &iui;
                let u_tilde = pick_left_null(rng, &reduced, d, "second-stage receive filter")?;
                let filter = psi * &u_tilde;
                inter.u_tilde.insert((k, m), u_tilde);
                filter
            }
            None => pick_left_null(rng, &iui, d, "receive filter")?,
        };
        u.insert((k, m), filter);
    }
    Ok((v, u))
}

/// Receivers with cross-cell interference equalize every interfering channel
/// to the identity and project onto a reference shared by user index; each BS
/// inverts its stacked filtered channels plus the references it must avoid.
fn equalized_references<R: Rng>(
    ch: &ChannelSet,
    rng: &mut R,
    inter: &mut Intermediates,
) -> Result<(Coders, Coders)> {
    let cfg = &ch.config;
    let (d, md) = (cfg.d, cfg.streams_per_cell());
    let mut u = Coders::new();
    for (k, m) in cfg.users() {
        let interferers = cfg.interferers(k, m);
        if interferers.is_empty() {
            u.insert((k, m), random_orthonormal(rng, cfg.rx_antennas(m), d)?);
            continue;
        }
        if let Entry::Vacant(slot) = inter.lambda.entry(m) {
            slot.insert(random_orthonormal(rng, cfg.n_t, d)?);
        }
        let blocks: Vec<ComplexMatrix> = interferers.iter().map(|&j| ch.h(j, k, m).clone()).collect();
        let pinv = pseudo_inverse(&hcat(&blocks, cfg.rx_antennas(m)));
        let mut g = ComplexMatrix::zeros(cfg.n_t, cfg.rx_antennas(m));
        for b in 0..interferers.len() {
            g += pinv.rows(b * cfg.n_t, cfg.n_t);
        }
        u.insert((k, m), g.adjoint() * &inter.lambda[&m]);
        inter.g.insert((k, m), g);
    }
    let mut v = Coders::new();
    for k in 0..cfg.k {
        let mut rows: Vec<ComplexMatrix> = (0..cfg.m).map(|m| u[&(k, m)].adjoint() * ch.h(k, k, m)).collect();
        let avoided: BTreeSet<usize> = cfg.victims(k).into_iter().map(|(_, n)| n).collect();
        rows.extend(avoided.iter().map(|n| inter.lambda[n].adjoint()));
        let stacked = vcat(&rows, cfg.n_t);
        ensure_full_row_rank(&stacked, &format!("stacked design matrix of cell {k}"))?;
        let vk = pseudo_inverse(&stacked).columns(0, md).into_owned();
        split_cell(&vk, k, cfg.m, d, &mut v);
        inter.stacked.insert(k, stacked);
    }
    Ok((v, u))
}

/// In every cell the receivers with cross-cell interference jointly solve for
/// filters under which each interfering channel collapses onto one common
/// reference per interfering BS; each BS then avoids those references.
fn receive_references<R: Rng>(
    ch: &ChannelSet,
    rng: &mut R,
    inter: &mut Intermediates,
) -> Result<(Coders, Coders)> {
    let cfg = &ch.config;
    let (d, md, nt) = (cfg.d, cfg.streams_per_cell(), cfg.n_t);
    let mut u = Coders::new();
    for j in 0..cfg.k {
        let hit: Vec<usize> = (0..cfg.m).filter(|&m| !cfg.interferers(j, m).is_empty()).collect();
        for m in (0..cfg.m).filter(|m| !hit.contains(m)) {
            u.insert((j, m), random_orthonormal(rng, cfg.rx_antennas(m), d)?);
        }
        if hit.is_empty() {
            continue;
        }
        let sources: Vec<usize> = hit
            .iter()
            .flat_map(|&m| cfg.interferers(j, m))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        // Unknown column layout: one N_t block per interfering BS, then one
        // N_r block per participating receiver.
        let mut offset = sources.len() * nt;
        let mut filter_at = BTreeMap::new();
        for &m in &hit {
            filter_at.insert(m, offset);
            offset += cfg.rx_antennas(m);
        }
        let equations: usize = hit.iter().map(|&m| cfg.interferers(j, m).len() * nt).sum();
        let mut system = ComplexMatrix::zeros(equations, offset);
        let mut row = 0;
        for &m in &hit {
            for b in cfg.interferers(j, m) {
                let col = sources.iter().position(|&s| s == b).expect("source listed") * nt;
                for i in 0..nt {
                    system[(row + i, col + i)] = c(1.0, 0.0);
                }
                let block = -ch.h(b, j, m).adjoint();
                system.view_mut((row, filter_at[&m]), (nt, cfg.rx_antennas(m))).copy_from(&block);
                row += nt;
            }
        }
        let solution = pick_null(rng, &system, d, &format!("reference system of cell {j}"))?;
        for (i, &b) in sources.iter().enumerate() {
            inter.omega.insert((b, j), solution.rows(i * nt, nt).adjoint());
        }
        for &m in &hit {
            let raw = solution.rows(filter_at[&m], cfg.rx_antennas(m)).into_owned();
            u.insert((j, m), orthonormalize_columns(&raw)?);
        }
    }
    let mut v = Coders::new();
    for k in 0..cfg.k {
        let mut rows: Vec<ComplexMatrix> = (0..cfg.m).map(|m| u[&(k, m)].adjoint() * ch.h(k, k, m)).collect();
        rows.extend(inter.omega.iter().filter(|((b, _), _)| *b == k).map(|(_, w)| w.clone()));
        let stacked = vcat(&rows, nt);
        ensure_full_row_rank(&stacked, &format!("stacked design matrix of cell {k}"))?;
        let vk = pseudo_inverse(&stacked).columns(0, md).into_owned();
        split_cell(&vk, k, cfg.m, d, &mut v);
        inter.stacked.insert(k, stacked);
    }
    Ok((v, u))
}

/// All precoders are solved jointly so that, at every receiver with
/// cross-cell interference, each interfering BS produces the same effective
/// channel; receivers null that common reference and their own-cell streams.
fn transmit_references<R: Rng>(
    ch: &ChannelSet,
    rng: &mut R,
    inter: &mut Intermediates,
) -> Result<(Coders, Coders)> {
    let cfg = &ch.config;
    let (d, md, nt) = (cfg.d, cfg.streams_per_cell(), cfg.n_t);
    // Every interferer of a user must produce the same filtered block, the
    // user's reference. With the reference eliminated, each constraint ties
    // the first interferer's precoder to another's.
    let mut links: Vec<(UserKey, usize, usize)> = Vec::new();
    let mut group: Vec<usize> = (0..cfg.k).collect();
    let root = |group: &Vec<usize>, mut x: usize| {
        while group[x] != x {
            x = group[x];
        }
        x
    };
    for (k, m) in cfg.users() {
        let sources = cfg.interferers(k, m);
        for &j in sources.iter().skip(1) {
            links.push(((k, m), sources[0], j));
            let (a, b) = (root(&group, sources[0]), root(&group, j));
            group[a.max(b)] = a.min(b);
        }
    }
    let mut v = Coders::new();
    let mut cells_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for cell in 0..cfg.k {
        cells_of.entry(root(&group, cell)).or_default().push(cell);
    }
    for cells in cells_of.values() {
        let at = |cell: usize| cells.iter().position(|&x| x == cell).expect("cell in group") * nt;
        let own: Vec<&(UserKey, usize, usize)> = links.iter().filter(|l| cells.contains(&l.1)).collect();
        let rows: usize = own.iter().map(|l| cfg.rx_antennas(l.0 .1)).sum();
        let mut system = ComplexMatrix::zeros(rows, cells.len() * nt);
        let mut row = 0;
        for &&((k, m), first, other) in &own {
            let n_r = cfg.rx_antennas(m);
            system.view_mut((row, at(first)), (n_r, nt)).copy_from(ch.h(first, k, m));
            let negated = -ch.h(other, k, m);
            system.view_mut((row, at(other)), (n_r, nt)).copy_from(&negated);
            row += n_r;
        }
        let solution = pick_null(rng, &system, md, "joint precoder system")?;
        for &k in cells {
            let vk = solution.rows(at(k), nt).into_owned();
            ensure_full_row_rank(&vk.adjoint(), &format!("precoder of cell {k}"))?;
            split_cell(&vk, k, cfg.m, d, &mut v);
        }
    }
    for (k, m) in cfg.users() {
        if let Some(&first) = cfg.interferers(k, m).first() {
            let vj = hcat(&(0..cfg.m).map(|n| v[&(first, n)].clone()).collect::<Vec<_>>(), nt);
            inter.theta.insert((k, m), ch.h(first, k, m) * vj);
        }
    }
    let mut u = Coders::new();
    for (k, m) in cfg.users() {
        let mut blocks = iui_columns(ch, &v, k, m);
        if let Some(theta) = inter.theta.get(&(k, m)) {
            blocks.push(theta.clone());
        }
        let interference = hcat(&blocks, cfg.rx_antennas(m));
        u.insert((k, m), pick_left_null(rng, &interference, d, "receive filter")?);
    }
    Ok((v, u))
}
