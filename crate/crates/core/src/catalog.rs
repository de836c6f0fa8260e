//! Published discrete-velocity models, identified by their lattice speeds and
//! base speed to six decimals.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{solve_model, RatioTuple, VelocityModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub q: usize,
    /// Integer lattice speeds `p₂, p₄, …`.
    pub speeds: &'static [u64],
    /// Base speed `v₂` as published.
    pub v2: f64,
    pub note: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { id: "q3", q: 3, speeds: &[1], v2: 1.224745, note: "standard three-velocity model" },
    CatalogEntry { id: "q5", q: 5, speeds: &[1, 3], v2: 0.553432, note: "ghost-free branch at r = 1/3" },
    CatalogEntry {
        id: "q5-ghost",
        q: 5,
        speeds: &[1, 3],
        v2: 1.166353,
        note: "ghost-bearing branch at r = 1/3; tends to q3 as r → 0",
    },
    CatalogEntry { id: "q7", q: 7, speeds: &[1, 2, 3], v2: 0.846393, note: "" },
    CatalogEntry { id: "q11", q: 11, speeds: &[1, 2, 3, 4, 5], v2: 0.685900, note: "" },
    CatalogEntry {
        id: "q21",
        q: 21,
        speeds: &[1, 2, 3, 4, 5, 6, 7, 8, 9, 11],
        v2: 0.372889,
        note: "stable with TE5 at density ratio 11",
    },
];

impl CatalogEntry {
    pub fn ratios(&self) -> RatioTuple {
        RatioTuple::new(self.q, self.speeds.to_vec()).expect("catalog ratios are valid")
    }

    /// Regenerates the model, picking the branch closest to the published
    /// base speed.
    pub fn derive(&self) -> Result<VelocityModel> {
        nearest_branch(solve_model(&self.ratios())?, self.v2)
            .ok_or_else(|| Error::NoRealSolution(format!("catalog entry {} has no branch", self.id)))
    }
}

pub fn lookup(id: &str) -> Result<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.id.eq_ignore_ascii_case(id)).ok_or_else(|| {
        let ids: Vec<_> = CATALOG.iter().map(|e| e.id).collect();
        Error::InvalidArgument(format!("unknown catalog model {id:?}; known: {}", ids.join(", ")))
    })
}

/// The branch whose `v₂` is closest to `v2`.
pub fn nearest_branch(models: Vec<VelocityModel>, v2: f64) -> Option<VelocityModel> {
    models.into_iter().min_by(|a, b| (a.v2() - v2).abs().total_cmp(&(b.v2() - v2).abs()))
}
