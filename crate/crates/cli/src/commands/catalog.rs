use std::io::Write;

use serde::Serialize;
use tlbm_core::catalog::{CatalogEntry, CATALOG};

use super::{emit, to_json};
use crate::args::CatalogArgs;
use crate::error::CliResult;

#[derive(Serialize)]
struct Row {
    #[serde(flatten)]
    entry: CatalogEntry,
    regenerated_v2: f64,
    weights_normalized: Vec<f64>,
    ghosts: Vec<bool>,
}

pub fn run(args: CatalogArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let rows = CATALOG
        .iter()
        .map(|e| {
            let m = e.derive()?;
            Ok(Row {
                entry: *e,
                regenerated_v2: m.v2(),
                weights_normalized: m.normalized_weights().to_vec(),
                ghosts: m.ghost_flags().to_vec(),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    emit(args.out.as_deref(), &to_json(&rows)?, stdout)
}
