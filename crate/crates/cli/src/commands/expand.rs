use std::fmt::Write as _;
use std::io::Write;

use tlbm_core::equilibrium::{expand, ExpansionSpec};

use super::emit;
use crate::args::ExpandArgs;
use crate::error::{CliError, CliResult};
use crate::select::parse_rational;

pub fn run(args: ExpandArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let mut spec: ExpansionSpec = args.spec.parse().map_err(|e: tlbm_core::Error| CliError::Usage(e.to_string()))?;
    spec.theta0 = parse_rational(&args.theta0)?;
    let poly = expand(&spec)?;
    let mut csv = String::from("v_power,u_power,t_power,numerator,denominator,kind,N\n");
    for (&(v, u, t), c) in poly.terms() {
        let _ = writeln!(csv, "{v},{u},{t},{},{},{},{}", c.numer(), c.denom(), spec.kind.label(), spec.order);
    }
    emit(args.out.as_deref(), &csv, stdout)
}
