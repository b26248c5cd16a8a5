use std::collections::BTreeMap;

use crate::approach::Approach;
use crate::error::Result;
use crate::linalg::{normalize_columns, orthonormalize_columns, ComplexMatrix};

/// User key: (cell, user index within the cell).
pub type UserKey = (usize, usize);

/// Intermediate matrices of a construction. Only the maps the approach uses
/// are populated.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Intermediates {
    /// Per-cell intermediate precoder, N_t × Md.
    pub phi: BTreeMap<usize, ComplexMatrix>,
    /// Per-user second-stage precoder, Md × d.
    pub v_tilde: BTreeMap<UserKey, ComplexMatrix>,
    /// Per-user intermediate receive filter, N_r × Md.
    pub psi: BTreeMap<UserKey, ComplexMatrix>,
    /// Per-user second-stage receive filter, Md × d.
    pub u_tilde: BTreeMap<UserKey, ComplexMatrix>,
    /// Per-user channel equalizer, N_t × N_r.
    pub g: BTreeMap<UserKey, ComplexMatrix>,
    /// Per user index, shared by all cells, N_t × d.
    pub lambda: BTreeMap<usize, ComplexMatrix>,
    /// Receive reference keyed by (transmitting BS, receiving cell), stored
    /// as the d × N_t row block every filtered channel in that cell equals.
    pub omega: BTreeMap<(usize, usize), ComplexMatrix>,
    /// Per-user transmit reference, N_r × Md.
    pub theta: BTreeMap<UserKey, ComplexMatrix>,
    /// Per-cell stacked design matrix whose inverse yields the precoders.
    pub stacked: BTreeMap<usize, ComplexMatrix>,
}

/// Precoders and receive filters of every user.
#[derive(Debug, Clone, PartialEq)]
pub struct CoderSet {
    pub approach: Approach,
    pub precoders: BTreeMap<UserKey, ComplexMatrix>,
    pub receive_filters: BTreeMap<UserKey, ComplexMatrix>,
    pub intermediates: Intermediates,
}

impl CoderSet {
    /// Wraps raw coders, orthonormalizing every receive filter and scaling
    /// every precoder column to unit norm.
    pub fn normalized(
        approach: Approach,
        precoders: BTreeMap<UserKey, ComplexMatrix>,
        receive_filters: BTreeMap<UserKey, ComplexMatrix>,
        intermediates: Intermediates,
    ) -> Result<Self> {
        let precoders = precoders
            .into_iter()
            .map(|(key, v)| Ok((key, normalize_columns(&v)?)))
            .collect::<Result<_>>()?;
        let receive_filters = receive_filters
            .into_iter()
            .map(|(key, u)| Ok((key, orthonormalize_columns(&u)?)))
            .collect::<Result<_>>()?;
        Ok(CoderSet { approach, precoders, receive_filters, intermediates })
    }

    pub fn v(&self, cell: usize, user: usize) -> &ComplexMatrix {
        &self.precoders[&(cell, user)]
    }

    pub fn u(&self, cell: usize, user: usize) -> &ComplexMatrix {
        &self.receive_filters[&(cell, user)]
    }
}
