//! Parsing of numeric lists and choice of the velocity model a command runs on.

use std::path::PathBuf;

use clap::Args;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use tlbm_core::catalog::{self, nearest_branch};
use tlbm_core::model::{solve_model, ModelRecord, RatioTuple, VelocityModel};

use crate::error::{CliError, CliResult};

/// `"3"`, `"5/2"`, `"0.37"` or `"-1.5e-2"` as an exact rational.
pub fn parse_rational(text: &str) -> CliResult<BigRational> {
    let bad = || CliError::Usage(format!("not a number: {text:?}"));
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.trim_start_matches(['-', '+']).is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let ten = BigRational::from_integer(10.into());
    let scale = exponent - frac.len() as i32;
    let mut value = BigRational::from_integer(digits);
    let factor = (0..scale.unsigned_abs()).fold(BigRational::one(), |acc, _| acc * &ten);
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Ok(value)
}

pub fn parse_list<T>(text: &str, item: impl Fn(&str) -> CliResult<T>) -> CliResult<Vec<T>> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(|s| item(s.trim())).collect()
}

pub fn parse_f64(text: &str) -> CliResult<f64> {
    text.trim().parse().map_err(|_| CliError::Usage(format!("not a number: {text:?}")))
}

/// Ratio tuple from `q` and the ratios `p̄₄, p̄₆, …` (the leading 1 implied).
pub fn ratio_tuple(q: usize, ratios: &[BigRational]) -> CliResult<RatioTuple> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(CliError::Usage(format!("q must be odd and at least 3, got {q}")));
    }
    if ratios.len() + 1 != q / 2 {
        return Err(CliError::Usage(format!("q = {q} needs {} ratios, got {}", q / 2 - 1, ratios.len())));
    }
    Ok(RatioTuple::from_normalized(q, ratios)?)
}

/// Where a command's velocity model comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelSource {
    /// A built-in published model.
    Catalog(String),
    /// Solve for the branch of `q`, `p` nearest `v2` (the slowest if absent).
    Lattice { q: usize, p: Vec<u64>, v2: Option<f64> },
    /// A model record (or list of records) written by `derive`.
    File { path: PathBuf, v2: Option<f64> },
}

impl ModelSource {
    pub fn resolve(&self) -> CliResult<VelocityModel> {
        match self {
            ModelSource::Catalog(id) => Ok(catalog::lookup(id)?.derive()?),
            ModelSource::Lattice { q, p, v2 } => {
                let ratios = RatioTuple::new(*q, p.clone())?;
                let models = solve_model(&ratios)?;
                pick(models, *v2).ok_or_else(|| CliError::Numerical(format!("q = {q}, p = {p:?} admits no model")))
            }
            ModelSource::File { path, v2 } => {
                let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
                let records: Vec<ModelRecord> = match serde_json::from_str::<ModelRecord>(&text) {
                    Ok(r) => vec![r],
                    Err(_) => serde_json::from_str(&text)
                        .map_err(|e| CliError::Usage(format!("{}: not a model record: {e}", path.display())))?,
                };
                let models = records.into_iter().map(VelocityModel::try_from).collect::<Result<Vec<_>, _>>()?;
                pick(models, *v2).ok_or_else(|| CliError::Usage(format!("{}: no model records", path.display())))
            }
        }
    }
}

fn pick(models: Vec<VelocityModel>, v2: Option<f64>) -> Option<VelocityModel> {
    match v2 {
        Some(v2) => nearest_branch(models, v2),
        None => models.into_iter().next(),
    }
}

/// Flags shared by every command that runs on one model.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Built-in model id (see `catalog`).
    #[arg(long, conflicts_with_all = ["q", "model_file"])]
    pub model: Option<String>,
    /// Velocity count, used with --ratios.
    #[arg(long, requires = "ratios")]
    pub q: Option<usize>,
    /// Ratios p̄₄, p̄₆, … to p̄₂ = 1, comma separated; rationals allowed.
    #[arg(long, allow_hyphen_values = true)]
    pub ratios: Option<String>,
    /// Model record JSON written by `derive`.
    #[arg(long, conflicts_with = "q")]
    pub model_file: Option<PathBuf>,
    /// Pick the branch with base speed nearest to this value.
    #[arg(long)]
    pub v2: Option<f64>,
}

impl ModelArgs {
    pub fn is_set(&self) -> bool {
        self.model.is_some() || self.q.is_some() || self.model_file.is_some()
    }

    pub fn source(&self) -> CliResult<ModelSource> {
        if let Some(id) = &self.model {
            return Ok(ModelSource::Catalog(id.clone()));
        }
        if let Some(path) = &self.model_file {
            return Ok(ModelSource::File { path: path.clone(), v2: self.v2 });
        }
        if let Some(q) = self.q {
            let ratios = parse_list(self.ratios.as_deref().unwrap_or(""), parse_rational)?;
            let tuple = ratio_tuple(q, &ratios)?;
            return Ok(ModelSource::Lattice { q, p: tuple.lattice_speeds().to_vec(), v2: self.v2 });
        }
        Err(CliError::Usage("choose a model with --model, --q/--ratios or --model-file".into()))
    }
}
