//! Minimum antenna counts, CSI requirements and computational cost of every
//! approach, evaluated for a concrete configuration.

use std::fmt;

use serde::Serialize;

use crate::approach::Approach;
use crate::error::Result;
use crate::network::{NetworkConfig, Topology};

/// Dimensions a table formula may read.
#[derive(Debug, Clone, Copy)]
struct Dims {
    k: i64,
    m: i64,
    ms: i64,
    me: i64,
    d: i64,
    nt: i64,
    nr: i64,
    nrs: i64,
    nre: i64,
    book: Option<i64>,
}

impl Dims {
    fn of(cfg: &NetworkConfig, codebook_size: Option<usize>) -> Self {
        Dims {
            k: cfg.k as i64,
            m: cfg.m as i64,
            ms: cfg.interior_users() as i64,
            me: cfg.edge_users() as i64,
            d: cfg.d as i64,
            nt: cfg.n_t as i64,
            nr: cfg.n_r.unwrap_or(0) as i64,
            nrs: cfg.n_r_star.unwrap_or(0) as i64,
            nre: cfg.n_r_edge.unwrap_or(0) as i64,
            book: codebook_size.map(|b| b as i64),
        }
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    if b <= 0 {
        return 0;
    }
    (a + b - 1).div_euclid(b)
}

fn count(v: i64) -> u64 {
    v.max(0) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum MsMinimum {
    Uniform(u64),
    Split { interior: u64, edge: u64 },
}

impl fmt::Display for MsMinimum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MsMinimum::Uniform(n) => write!(f, "{n}"),
            MsMinimum::Split { interior, edge } => write!(f, "({interior},{edge})"),
        }
    }
}

/// Evaluated minimum antenna counts with the formulas they came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AntennaMinimum {
    pub bs: u64,
    pub ms: MsMinimum,
    pub bs_formula: &'static str,
    pub ms_formula: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Bs,
    Ms,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CsiEntry {
    pub side: Side,
    pub source: String,
    pub content: String,
    pub quantity: u64,
    pub quantity_formula: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityEntry {
    pub side: Side,
    pub target: String,
    pub operation: String,
    pub scale: Vec<u64>,
    pub scale_formula: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourceRow {
    pub topology: Topology,
    pub approach: Approach,
    pub bs_min_antennas: u64,
    pub ms_min_antennas: MsMinimum,
    pub bs_formula: &'static str,
    pub ms_formula: &'static str,
    pub csi_entries: Vec<CsiEntry>,
    pub complexity_entries: Vec<ComplexityEntry>,
    /// Known inconsistencies or implicit assumptions of the tabulated row.
    pub notes: Vec<String>,
}

/// Evaluated antenna minima of `approach` on `topology`.
pub fn min_antennas(topology: Topology, approach: Approach, cfg: &NetworkConfig) -> Result<AntennaMinimum> {
    approach.ensure_valid(topology)?;
    let x = Dims::of(cfg, None);
    let (k, m, me, d) = (x.k, x.m, x.me, x.d);
    let md = m * d;
    let uniform = |bs: i64, ms: i64, bf, mf| AntennaMinimum {
        bs: count(bs),
        ms: MsMinimum::Uniform(count(ms)),
        bs_formula: bf,
        ms_formula: mf,
    };
    let split = |bs: i64, int: i64, edge: i64, bf, mf| AntennaMinimum {
        bs: count(bs),
        ms: MsMinimum::Split { interior: count(int), edge: count(edge) },
        bs_formula: bf,
        ms_formula: mf,
    };
    use Approach::*;
    use Topology::*;
    Ok(match (topology, approach) {
        (FullConnected, A) => uniform(md, (k - 1) * md + d, "Md", "(K-1)Md+d"),
        (FullConnected, B) => uniform((k - 1) * m * md + md, md, "(K-1)M²d+Md", "Md"),
        (FullConnected, C) => uniform(2 * md, (k - 1) * 2 * md, "2Md", "(K-1)2Md"),
        (FullConnected, D) => uniform(
            (m + k - 1) * d,
            ceil_div((k - 1) * (m - 1) * (m + k - 1) * d + d, m),
            "(M+K-1)d",
            "(K-1)(M-1)/M·(M+K-1)d+d/M",
        ),
        (FullConnected, E) => {
            uniform((k * m - 2 * m) * 2 * md + ceil_div(md, k), 2 * md, "(KM-2M)2Md+(M/K)d", "2Md")
        }
        (CyclicTwoSide, A) => uniform(md, 2 * md + d, "Md", "2Md+d"),
        (CyclicTwoSide, B) => uniform(2 * m * md + md, md, "2M²d+Md", "Md"),
        (CyclicTwoSide, C) => uniform(2 * md, 4 * md, "2Md", "4Md"),
        (CyclicTwoSide, D) => uniform(
            (m + 2) * d,
            ceil_div(2 * (m - 1) * (m + 2) * d + d, m),
            "(M+2)d",
            "2(M-1)/M·(M+2)d+d/M",
        ),
        (CyclicTwoSide, E) => uniform(2 * m * md + ceil_div(md, k), 2 * md, "2M²d+(M/K)d", "2Md"),
        (CyclicTwoSide, OptA) => uniform(m * x.nr + ceil_div(2 * md, k), md + d, "MN_r+2Md/K", "Md+d"),
        (CyclicTwoSide, OptB) => uniform(m * x.nr, md + d, "MN_r", "Md+d"),
        (CyclicTwoSide, OptC) => uniform(2 * md, md + d, "2Md", "Md+d"),
        (CyclicTwoSide, OptD) => uniform(md, md + d, "Md", "Md+d"),
        (CyclicTwoSide, OptE) => uniform(md, md + d, "Md", "Md+d"),
        (CyclicOneSideEdge, A) => split(md, d, md + d, "Md", "(d,Md+d)"),
        (CyclicOneSideEdge, B) => split((me + 1) * md, md, md, "(M°+1)Md", "(Md,Md)"),
        (CyclicOneSideEdge, C) => split(md + me * d, d, md + me * d, "Md+M°d", "(d,Md+M°d)"),
        (CyclicOneSideEdge, D) => split((m + 1) * d, d, ceil_div(m * m * d, me), "(M+1)d", "(d,(M²/M°)d)"),
        (CyclicOneSideEdge, E) => split(md, md, 2 * md, "Md", "(Md,2Md)"),
        (CyclicOneSideEdge, F) => split(me * d + md, d, d, "M°d+Md", "(d,d)"),
        _ => unreachable!("approach validity checked above"),
    })
}

fn csi(side: Side, source: &str, content: &str, quantity: i64, formula: &str) -> CsiEntry {
    CsiEntry {
        side,
        source: source.into(),
        content: content.into(),
        quantity: count(quantity),
        quantity_formula: formula.into(),
    }
}

fn cost(side: Side, target: &str, operation: &str, scale: &[i64], formula: &str) -> ComplexityEntry {
    ComplexityEntry {
        side,
        target: target.into(),
        operation: operation.into(),
        scale: scale.iter().map(|&v| count(v)).collect(),
        scale_formula: formula.into(),
    }
}

/// Full resource row of `approach` on `topology`. The codebook size only
/// enters the cost of option d and e rows; without it that factor is omitted
/// from the numeric scale.
pub fn resource_report(
    topology: Topology,
    approach: Approach,
    cfg: &NetworkConfig,
    codebook_size: Option<usize>,
) -> Result<ResourceRow> {
    let minimum = min_antennas(topology, approach, cfg)?;
    let x = Dims::of(cfg, codebook_size);
    let (k, m, ms, me, d, nt, nr) = (x.k, x.m, x.ms, x.me, x.d, x.nt, x.nr);
    let md = m * d;
    let (bs, ms_side) = (Side::Bs, Side::Ms);
    let mut csi_entries = Vec::new();
    let mut complexity_entries = Vec::new();
    let mut notes = Vec::new();
    use Approach::*;
    use Topology::*;

    let full = topology == FullConnected;
    let n_int = if full { k - 1 } else { 2 };
    let inter_ms = if full { "all inter-cell MSs" } else { "adjacent inter-cell MSs" };
    let inter_bs = if full { "all inter-cell BSs" } else { "adjacent inter-cell BSs" };
    let n_int_text = if full { "K-1" } else { "2" };

    match (topology, approach) {
        (FullConnected | CyclicTwoSide, A) => {
            csi_entries.push(csi(bs, "all intra-cell MSs", "U_{k:m}† H_k^{k:m}", m, "M"));
            csi_entries.push(csi(ms_side, inter_bs, "H_j^{k:m} Φ_j", n_int, n_int_text));
            complexity_entries.push(cost(bs, "Ṽ_{k:m}", "matrix inverse", &[md, md], "Md×Md"));
            complexity_entries.push(cost(ms_side, "U_{k:m}", "null space", &[nr, d], "N_r×d"));
        }
        (FullConnected | CyclicTwoSide, B) => {
            let f = if full { "(K-1)M" } else { "2M" };
            csi_entries.push(csi(bs, inter_ms, "Ψ_{j:n}† H_k^{j:n}", n_int * m, f));
            csi_entries.push(csi(ms_side, "intra-cell BS", "H_k^{k:m} V_{k:n}", m - 1, "M-1"));
            complexity_entries.push(cost(bs, "V_{k:m}", "null space", &[nt, md], "N_t×Md"));
            complexity_entries.push(cost(ms_side, "Ũ_{k:m}", "null space", &[md, d], "Md×d"));
        }
        (FullConnected | CyclicTwoSide, C) => {
            csi_entries.push(csi(bs, "all intra-cell MSs", "G_{k:m} H_k^{k:m}", m, "M"));
            csi_entries.push(csi(ms_side, inter_bs, "H_j^{k:m}", n_int, n_int_text));
            complexity_entries.push(cost(bs, "V_{k:m}", "matrix inverse", &[2 * md, nt], "2Md×N_t"));
            let f = if full { "N_r×(K-1)N_t" } else { "N_r×2N_t" };
            complexity_entries.push(cost(ms_side, "G_{k:m}", "matrix inverse", &[nr, n_int * nt], f));
        }
        (FullConnected | CyclicTwoSide, D) => {
            csi_entries.push(csi(bs, "all intra-cell MSs", "U_{k:m}† H_k^{k:m}", m, "M"));
            let src = if full { "other inter-cell MSs" } else { "adjacent inter-cell MSs" };
            csi_entries.push(csi(bs, src, "Ω_k^j", n_int, n_int_text));
            csi_entries.push(csi(ms_side, &format!("{inter_bs} (excl. conferencing)"), "H_j^{k:m}", n_int, n_int_text));
            let (rows, f) = if full {
                ((m + k - 1) * d, "(M+K-1)d×N_t")
            } else {
                ((m + 2) * d, "(M+2)d×N_t")
            };
            complexity_entries.push(cost(bs, "V_{k:m}", "matrix inverse", &[rows, nt], f));
            let f = if full { "[(K-1)N_t+MN_r]×d" } else { "(2N_t+MN_r)×d" };
            complexity_entries.push(cost(ms_side, "U_{k:m}, Ω_j^k", "null space", &[n_int * nt + m * nr, d], f));
        }
        (FullConnected | CyclicTwoSide, E) => {
            let f = if full { "(K-1)M" } else { "2M" };
            csi_entries.push(csi(bs, &format!("{inter_ms} (excl. backhaul)"), "H_k^{j:m}", n_int * m, f));
            csi_entries.push(csi(ms_side, "intra-cell BS", "H_k^{k:m} V_{k:n}", m - 1, "M-1"));
            csi_entries.push(csi(ms_side, "intra-cell BS", "Θ^{k:m}", 1, "1"));
            complexity_entries.push(cost(bs, "V_{k:m}, Θ^{k:m}", "null space", &[k * m * nr + k * nt, md], "(KMN_r+KN_t)×Md"));
            complexity_entries.push(cost(ms_side, "U_{k:m}", "null space", &[nr, d], "N_r×d"));
            if full {
                notes.push("BS minimum (KM-2M)2Md+(M/K)d presumes N_r = 2Md substituted into KMN_r+KN_t ≥ K(K-1)MN_r+Md".into());
            }
        }
        (CyclicTwoSide, OptA | OptB | OptC | OptD | OptE) => {
            csi_entries.push(csi(bs, "all intra-cell MSs", "U_{k:m}† H_k^{k:m}", m, "M"));
            match approach {
                OptA => {
                    csi_entries.push(csi(bs, "adjacent inter-cell MSs (excl. backhaul)", "H_k^{k-1:m}", m, "M"));
                    csi_entries.push(csi(bs, "adjacent inter-cell MSs (excl. backhaul)", "H_k^{k+1:m}", m, "M"));
                }
                OptB | OptD => {
                    csi_entries.push(csi(bs, "adjacent inter-cell MSs", "H_{k-2}^{k-1:m} Φ_{k-2}", m, "M"));
                    csi_entries.push(csi(bs, "preceding-adjacent inter-cell MSs", "H_k^{k-1:m}", m, "M"));
                }
                _ => csi_entries.push(csi(bs, "adjacent inter-cell MSs", "U_{k-1:m}† H_k^{k-1:m}", m, "M")),
            }
            csi_entries.push(csi(ms_side, "adjacent inter-cell BS", "H_{k-1}^{k:m} Φ_{k-1}", 1, "1"));
            complexity_entries.push(cost(bs, "Ṽ_{k:m}", "matrix inverse", &[md, md], "Md×Md"));
            match approach {
                OptA => complexity_entries.push(cost(bs, "Φ_k", "null space", &[nt * k / 2, md], "N_tK/2×Md")),
                OptB => complexity_entries.push(cost(bs, "Φ_k", "matrix inverse", &[nt, m * nr], "N_t×MN_r")),
                OptC => complexity_entries.push(cost(bs, "Φ_k", "null space", &[nt, md], "N_t×Md")),
                OptD => {
                    let mut scale = vec![nr, md];
                    scale.extend(x.book);
                    scale.push(m);
                    complexity_entries.push(cost(bs, "Φ_k", "chordal distance", &scale, "N_r×Md×|B_k|×M"));
                    notes.push("codebook entries are shared by neighbouring cells; only the selected index is exchanged".into());
                }
                _ => {
                    let mut scale = vec![d, md];
                    scale.extend(x.book);
                    scale.push(m);
                    complexity_entries.push(cost(bs, "Φ_k", "trace", &scale, "d×Md×|B_k|×M"));
                    notes.push(
                        "inconsistent row: the tabulated cost assumes a codebook search, but the construction is a codebook-free eigen-solution (smallest Md eigenvectors of an N_t×N_t matrix); row kept as tabulated".into(),
                    );
                }
            }
            if x.book.is_none() && matches!(approach, OptD | OptE) {
                notes.push("codebook size not given; |B_k| omitted from the numeric scale".into());
            }
            complexity_entries.push(cost(ms_side, "U_{k:m}", "null space", &[nr, d], "N_r×d"));
        }
        (CyclicOneSideEdge, A) => {
            csi_entries.push(csi(bs, "all intra-cell MSs", "U_{k:m}† H_k^{k:m}", m, "M"));
            csi_entries.push(csi(ms_side, "adjacent inter-cell BS (edge users)", "H_{k+1}^{k:m°} Φ_{k+1}", 1, "1"));
            complexity_entries.push(cost(bs, "Ṽ_{k:m}", "matrix inverse", &[md, md], "Md×Md"));
            complexity_entries.push(cost(ms_side, "U_{k:m°}", "null space", &[x.nre, d], "N_r°×d"));
            notes.push("tabulated MS content reads H_{K+1}; the interfering BS is k+1".into());
        }
        (CyclicOneSideEdge, B) => {
            csi_entries.push(csi(bs, "adjacent inter-cell MSs (edge users)", "Ψ_{k-1:n}† H_k^{k-1:n}", me, "M°"));
            csi_entries.push(csi(ms_side, "intra-cell BS (interior users)", "H_k^{k:m*} V_{k:n}", m - 1, "M-1"));
            csi_entries.push(csi(ms_side, "intra-cell BS (edge users)", "Ψ_{k:m°}† H_k^{k:m°} V_{k:n}", m - 1, "M-1"));
            complexity_entries.push(cost(bs, "V_{k:m}", "null space", &[nt, md], "N_t×Md"));
            complexity_entries.push(cost(ms_side, "U_{k:m*}", "null space", &[x.nrs, d], "N_r*×d"));
            complexity_entries.push(cost(ms_side, "Ũ_{k:m°}", "null space", &[x.nre, d], "N_r°×d"));
        }
        (CyclicOneSideEdge, C) => {
            csi_entries.push(csi(bs, "all intra-cell MSs (interior users)", "U_{k:m*}† H_k^{k:m*}", ms, "M*"));
            csi_entries.push(csi(bs, "all intra-cell MSs (edge users)", "G_{k:m°} H_k^{k:m°}", me, "M°"));
            csi_entries.push(csi(ms_side, "adjacent inter-cell BS (edge users)", "H_{k+1}^{k:m°}", 1, "1"));
            complexity_entries.push(cost(bs, "V_{k:m}", "matrix inverse", &[md + me * d, nt], "(M+M°)d×N_t"));
            complexity_entries.push(cost(ms_side, "G_{k:m°}", "matrix inverse", &[x.nre, nt], "N_r°×N_t"));
        }
        (CyclicOneSideEdge, D) => {
            csi_entries.push(csi(bs, "all intra-cell MSs (interior users)", "U_{k:m*}† H_k^{k:m*}", ms, "M*"));
            csi_entries.push(csi(bs, "all intra-cell MSs (edge users)", "U_{k:m°}† H_k^{k:m°}", me, "M°"));
            csi_entries.push(csi(bs, "adjacent inter-cell MSs", "Ω_k^{k-1}", 1, "1"));
            csi_entries.push(csi(ms_side, "adjacent inter-cell BS (excl. conferencing)", "H_{k+1}^{k:m°}", 1, "1"));
            complexity_entries.push(cost(bs, "V_{k:m}", "matrix inverse", &[(m + 1) * d, nt], "(M+1)d×N_t"));
            complexity_entries.push(cost(ms_side, "U_{k:m°}, Ω_j^k", "null space", &[nt + me * x.nre, d], "(N_t+M°N_r°)×d"));
        }
        (CyclicOneSideEdge, E) => {
            csi_entries.push(csi(bs, "adjacent inter-cell MSs (edge users, excl. backhaul)", "H_k^{k-1:m°}", me, "M°"));
            csi_entries.push(csi(ms_side, "intra-cell BS (interior users)", "H_k^{k:m*} V_{k:n}", m - 1, "M-1"));
            csi_entries.push(csi(ms_side, "intra-cell BS (edge users)", "H_k^{k:m°} V_{k:n}", m - 1, "M-1"));
            csi_entries.push(csi(ms_side, "intra-cell BS (edge users)", "Θ^{k:m°}", 1, "1"));
            complexity_entries.push(cost(bs, "V_{k:m}, Θ^{k:m°}", "null space", &[k * me * x.nre + k * nt, md], "(KM°N_r°+KN_t)×Md"));
            complexity_entries.push(cost(ms_side, "U_{k:m*}", "null space", &[x.nrs, d], "N_r*×d"));
            complexity_entries.push(cost(ms_side, "U_{k:m°}", "null space", &[x.nre, d], "N_r°×d"));
        }
        (CyclicOneSideEdge, F) => {
            csi_entries.push(csi(bs, "all intra-cell MSs (interior users)", "U_{k:m*}† H_k^{k:m*}", ms, "M*"));
            csi_entries.push(csi(bs, "all intra-cell MSs (edge users)", "U_{k:m°}† H_k^{k:m°}", me, "M°"));
            csi_entries.push(csi(bs, "adjacent inter-cell MSs (edge users)", "U_{k-1:m°}† H_k^{k-1:m°}", me, "M°"));
            complexity_entries.push(cost(bs, "V_{k:m}", "matrix inverse", &[me * d + md, nt], "(M°d+Md)×N_t"));
        }
        _ => unreachable!("approach validity checked by min_antennas"),
    }

    Ok(ResourceRow {
        topology,
        approach,
        bs_min_antennas: minimum.bs,
        ms_min_antennas: minimum.ms,
        bs_formula: minimum.bs_formula,
        ms_formula: minimum.ms_formula,
        csi_entries,
        complexity_entries,
        notes,
    })
}

/// Text rendering of every row for `cfg.topology`.
pub fn print_tables(cfg: &NetworkConfig) -> Result<String> {
    cfg.validate()?;
    let mut out = String::new();
    out.push_str(&format!("minimum antennas ({})\n", cfg.topology));
    let rows: Vec<ResourceRow> = Approach::for_topology(cfg.topology)
        .into_iter()
        .map(|a| resource_report(cfg.topology, a, cfg, None))
        .collect::<Result<_>>()?;
    for row in &rows {
        out.push_str(&format!(
            "{}: BS {}={}, MS {}={}\n",
            row.approach, row.bs_formula, row.bs_min_antennas, row.ms_formula, row.ms_min_antennas
        ));
    }
    for (title, side) in [("CSI at BS", Side::Bs), ("CSI at MS", Side::Ms)] {
        out.push_str(&format!("\n{title}\n"));
        for row in &rows {
            for e in row.csi_entries.iter().filter(|e| e.side == side) {
                out.push_str(&format!(
                    "{}: {} | {} | {}={}\n",
                    row.approach, e.source, e.content, e.quantity_formula, e.quantity
                ));
            }
        }
    }
    for (title, side) in [("complexity at BS", Side::Bs), ("complexity at MS", Side::Ms)] {
        out.push_str(&format!("\n{title}\n"));
        for row in &rows {
            for e in row.complexity_entries.iter().filter(|e| e.side == side) {
                let scale: Vec<String> = e.scale.iter().map(u64::to_string).collect();
                out.push_str(&format!(
                    "{}: {} | {} | {}={}\n",
                    row.approach,
                    e.target,
                    e.operation,
                    e.scale_formula,
                    scale.join("×")
                ));
            }
        }
    }
    let noted: Vec<&ResourceRow> = rows.iter().filter(|r| !r.notes.is_empty()).collect();
    if !noted.is_empty() {
        out.push_str("\nnotes\n");
        for row in noted {
            for n in &row.notes {
                out.push_str(&format!("{}: {n}\n", row.approach));
            }
        }
    }
    Ok(out)
}
