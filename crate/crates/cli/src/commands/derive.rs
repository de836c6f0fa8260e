use std::io::Write;

use serde::Serialize;
use tlbm_core::model::{build_polynomial, ModelRecord};

use super::{emit, to_json};
use crate::args::DeriveArgs;
use crate::error::{CliError, CliResult};
use crate::select::{parse_list, parse_rational, ratio_tuple};

#[derive(Serialize)]
struct ExactBranch {
    s: String,
    weights_normalized: Vec<String>,
}

#[derive(Serialize)]
struct Branch {
    #[serde(flatten)]
    model: ModelRecord,
    /// Present when `v₂²` is rational.
    exact: Option<ExactBranch>,
}

#[derive(Serialize)]
struct DeriveOutput {
    q: usize,
    p: Vec<u64>,
    /// Integer coefficients in `s = v₂²`, constant term first.
    polynomial: Vec<String>,
    branches: Vec<Branch>,
}

pub fn run(args: DeriveArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let ratios = parse_list(&args.ratios, parse_rational)?;
    let tuple = ratio_tuple(args.q, &ratios)?;
    let system = build_polynomial(&tuple)?;
    let branches = system
        .root_brackets()
        .iter()
        .map(|b| {
            let model = system.model_at(b)?.with_ghost_threshold(args.ghost_threshold);
            let exact = system.exact_branch(b).map(|(s, w)| ExactBranch {
                s: s.to_string(),
                weights_normalized: w.iter().map(ToString::to_string).collect(),
            });
            Ok(Branch { model: model.to_record(), exact })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let output = DeriveOutput {
        q: tuple.q(),
        p: tuple.lattice_speeds().to_vec(),
        polynomial: system.polynomial().integer_coefficients().iter().map(ToString::to_string).collect(),
        branches,
    };
    emit(args.out.as_deref(), &to_json(&output)?, stdout)?;
    if output.branches.is_empty() {
        return Err(CliError::Numerical(format!("q = {}, p = {:?}: no positive root", output.q, output.p)));
    }
    Ok(())
}
