//! Antenna inequalities that each construction step needs.

use std::fmt;

use crate::approach::Approach;
use crate::error::{IaError, Result};
use crate::network::{NetworkConfig, Topology};

/// One inequality `lhs ≥ rhs`, stored scaled by `scale` when the printed
/// form has a fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub expr: String,
    pub lhs: i64,
    pub rhs: i64,
    pub scale: i64,
    /// Set for requirements beyond the quoted step inequalities.
    pub structural: bool,
}

impl Condition {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }

    fn shown(&self, v: i64) -> String {
        if v % self.scale == 0 {
            (v / self.scale).to_string()
        } else {
            format!("{:.2}", v as f64 / self.scale as f64)
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} vs {})", self.expr, self.shown(self.lhs), self.shown(self.rhs))
    }
}

fn step(expr: &str, lhs: i64, rhs: i64) -> Condition {
    Condition { expr: expr.to_string(), lhs, rhs, scale: 1, structural: false }
}

fn scaled(expr: &str, lhs: i64, rhs: i64, scale: i64) -> Condition {
    Condition { expr: expr.to_string(), lhs, rhs, scale, structural: false }
}

fn structural(expr: &str, lhs: i64, rhs: i64) -> Condition {
    Condition { expr: expr.to_string(), lhs, rhs, scale: 1, structural: true }
}

/// Every inequality that `approach` needs on `cfg`.
pub fn conditions(cfg: &NetworkConfig, approach: Approach) -> Result<Vec<Condition>> {
    approach.ensure_valid(cfg.topology)?;
    let k = cfg.k as i64;
    let m = cfg.m as i64;
    let d = cfg.d as i64;
    let nt = cfg.n_t as i64;
    let md = m * d;
    let mut out = Vec::new();

    if cfg.topology != Topology::CyclicOneSideEdge {
        let nr = cfg.n_r.unwrap_or(0) as i64;
        out.push(structural("N_r ≥ d", nr, d));
        out.push(structural("N_t ≥ Md", nt, md));
        let two_side = cfg.topology == Topology::CyclicTwoSide;
        match (two_side, approach) {
            (false, Approach::A) => out.push(step("N_r ≥ (K-1)Md+d", nr, (k - 1) * md + d)),
            (false, Approach::B) => {
                out.push(step("N_t ≥ (K-1)M²d+Md", nt, (k - 1) * m * md + md));
                out.push(step("N_r ≥ Md", nr, md));
            }
            (false, Approach::C) => {
                out.push(step("N_t ≥ 2Md", nt, 2 * md));
                out.push(step("N_r ≥ (K-1)N_t", nr, (k - 1) * nt));
            }
            (false, Approach::D) => {
                out.push(step("(K-1)N_t+MN_r ≥ (K-1)MN_t+d", (k - 1) * nt + m * nr, (k - 1) * m * nt + d));
                out.push(step("N_t ≥ Md+(K-1)d", nt, md + (k - 1) * d));
            }
            (false, Approach::E) => {
                out.push(step("KMN_r+KN_t ≥ K(K-1)MN_r+Md", k * m * nr + k * nt, k * (k - 1) * m * nr + md));
                out.push(step("N_r ≥ 2Md", nr, 2 * md));
            }
            (true, Approach::A) => out.push(step("N_r ≥ 2Md+d", nr, 2 * md + d)),
            (true, Approach::B) => {
                out.push(step("N_t ≥ 2M²d+Md", nt, 2 * m * md + md));
                out.push(step("N_r ≥ Md", nr, md));
            }
            (true, Approach::C) => {
                out.push(step("N_t ≥ 2Md", nt, 2 * md));
                out.push(step("N_r ≥ 2N_t", nr, 2 * nt));
            }
            (true, Approach::D) => {
                out.push(step("2N_t+MN_r ≥ 2MN_t+d", 2 * nt + m * nr, 2 * m * nt + d));
                out.push(step("N_t ≥ Md+2d", nt, md + 2 * d));
            }
            (true, Approach::E) => {
                out.push(step("KMN_r+KN_t ≥ 2KMN_r+Md", k * m * nr + k * nt, 2 * k * m * nr + md));
                out.push(step("N_r ≥ 2Md", nr, 2 * md));
                if k % 2 == 0 {
                    // With an even ring the constraints split into two independent halves.
                    out.push(structural("(K/2)(N_t-MN_r) ≥ Md", (k / 2) * (nt - m * nr), md));
                }
            }
            (true, Approach::OptA) => {
                out.push(scaled("N_t ≥ MN_r+2Md/K", k * nt, k * m * nr + 2 * md, k));
                out.push(step("N_r ≥ Md+d", nr, md + d));
            }
            (true, Approach::OptB) => {
                out.push(step("N_t ≥ MN_r", nt, m * nr));
                out.push(step("N_r ≥ Md+d", nr, md + d));
            }
            (true, Approach::OptC) => {
                out.push(step("N_t ≥ 2Md", nt, 2 * md));
                out.push(step("N_r ≥ Md+d", nr, md + d));
            }
            (true, Approach::OptD) | (true, Approach::OptE) => out.push(step("N_r ≥ Md+d", nr, md + d)),
            _ => unreachable!("approach validity checked above"),
        }
        return Ok(out);
    }

    let ms = cfg.interior_users() as i64;
    let me = cfg.edge_users() as i64;
    let nrs = cfg.n_r_star.unwrap_or(0) as i64;
    let nre = cfg.n_r_edge.unwrap_or(0) as i64;
    let interior = ms > 0;
    let edge = me > 0;
    out.push(structural("N_t ≥ Md", nt, md));
    if interior {
        out.push(structural("N_r* ≥ d", nrs, d));
    }
    if edge {
        out.push(structural("N_r° ≥ d", nre, d));
    }
    match approach {
        Approach::A => {
            if edge {
                out.push(step("N_r° ≥ Md+d", nre, md + d));
            }
        }
        Approach::B => {
            out.push(step("N_t ≥ M°Md+Md", nt, me * md + md));
            if interior {
                out.push(step("N_r* ≥ Md", nrs, md));
            }
            if edge {
                out.push(step("N_r° ≥ Md", nre, md));
            }
        }
        Approach::C => {
            out.push(step("N_t ≥ Md+M°d", nt, md + me * d));
            if edge {
                out.push(step("N_r° ≥ N_t", nre, nt));
            }
        }
        Approach::D => {
            if edge {
                out.push(step("N_t+M°N_r° ≥ MN_t+d", nt + me * nre, m * nt + d));
                out.push(step("N_t ≥ Md+d", nt, md + d));
            }
        }
        Approach::E => {
            out.push(step("KN_t ≥ Md", k * nt, md));
            if interior {
                out.push(step("N_r* ≥ Md", nrs, md));
            }
            if edge {
                out.push(step("N_r° ≥ 2Md", nre, 2 * md));
            }
        }
        Approach::F => out.push(step("N_t ≥ M°d+Md", nt, me * d + md)),
        _ => unreachable!("approach validity checked above"),
    }
    Ok(out)
}

/// Fails with `InfeasibleAntennas` naming every violated inequality.
pub fn require(cfg: &NetworkConfig, approach: Approach) -> Result<()> {
    let failed: Vec<String> = conditions(cfg, approach)?
        .iter()
        .filter(|c| !c.holds())
        .map(|c| format!("{} violated ({} vs {})", c.expr, c.shown(c.lhs), c.shown(c.rhs)))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(IaError::InfeasibleAntennas(format!("approach {approach}: {}", failed.join("; "))))
    }
}

fn feasible(cfg: &NetworkConfig, approach: Approach) -> bool {
    cfg.violations().is_empty() && conditions(cfg, approach).is_ok_and(|list| list.iter().all(Condition::holds))
}

/// Smallest antenna counts for which every condition of `approach` holds,
/// keeping the counts of `template`: N_t is minimized first, then the
/// receive antennas (edge before interior in the one-side model).
/// `None` when nothing up to `limit` antennas works.
pub fn minimal_config(template: &NetworkConfig, approach: Approach, limit: usize) -> Option<NetworkConfig> {
    let mut cfg = template.clone();
    let d = cfg.d;
    for nt in 1..=limit {
        cfg.n_t = nt;
        match cfg.topology {
            Topology::CyclicOneSideEdge => {
                for edge in d..=limit {
                    cfg.n_r_edge = Some(edge);
                    for star in d..=limit {
                        cfg.n_r_star = Some(star);
                        if feasible(&cfg, approach) {
                            return Some(cfg);
                        }
                    }
                }
            }
            _ => {
                for nr in d..=limit {
                    cfg.n_r = Some(nr);
                    if feasible(&cfg, approach) {
                        return Some(cfg);
                    }
                }
            }
        }
    }
    None
}

/// PASS/FAIL line per inequality followed by an overall verdict line.
pub fn verdict(cfg: &NetworkConfig, approach: Approach) -> String {
    let mut text = String::new();
    let problems = cfg.violations();
    for p in &problems {
        text.push_str(&format!("FAIL config: {p}\n"));
    }
    match conditions(cfg, approach) {
        Ok(list) => {
            let ok = problems.is_empty() && list.iter().all(Condition::holds);
            for c in &list {
                text.push_str(&format!("{c}\n"));
            }
            text.push_str(if ok { "PASS\n" } else { "FAIL\n" });
        }
        Err(e) => text.push_str(&format!("FAIL {e}\n")),
    }
    text
}
