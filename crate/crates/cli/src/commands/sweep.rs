use std::fmt::Write as _;
use std::io::Write;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use tlbm_core::model::{build_polynomial, solve_model};
use tlbm_core::simulator::format_value;

use super::emit;
use crate::args::SweepArgs;
use crate::error::{CliError, CliResult};
use crate::select::{parse_rational, ratio_tuple};

enum Slot {
    Fixed(BigRational),
    Free,
}

fn parse_slots(text: &str) -> CliResult<Vec<Slot>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| match s.trim() {
            "x" | "X" => Ok(Slot::Free),
            other => parse_rational(other).map(Slot::Fixed),
        })
        .collect()
}

fn parameter_values(args: &SweepArgs) -> CliResult<Vec<BigRational>> {
    let need = |o: &Option<String>, name: &str| {
        o.as_deref().ok_or_else(|| CliError::Usage(format!("a swept ratio needs --{name}"))).and_then(parse_rational)
    };
    let (from, to, step) = (need(&args.from, "from")?, need(&args.to, "to")?, need(&args.step, "step")?);
    if step <= BigRational::zero() || to < from {
        return Err(CliError::Usage("sweep needs from ≤ to and a positive step".into()));
    }
    let count = ((&to - &from) / &step).floor().to_integer().to_usize().unwrap_or(0) + 1;
    Ok((0..count).map(|i| &from + &step * BigRational::from_integer(i.into())).collect())
}

fn v2_grid(text: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("expected lo:hi:n, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, n] = parts[..] else { return Err(bad()) };
    let (lo, hi): (f64, f64) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
    let n: usize = n.parse().map_err(|_| bad())?;
    if n < 2 || !(lo > 0.0 && hi > lo) {
        return Err(bad());
    }
    Ok((0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect())
}

pub fn run(args: SweepArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let slots = parse_slots(&args.ratios)?;
    let free = slots.iter().filter(|s| matches!(s, Slot::Free)).count();
    if free > 1 {
        return Err(CliError::Usage("mark at most one ratio as the free parameter x".into()));
    }
    if free == 0 && args.v2_grid.is_none() {
        return Err(CliError::Usage("nothing to sweep: mark a ratio as x or give --v2-grid".into()));
    }
    let xs: Vec<Option<BigRational>> =
        if free == 1 { parameter_values(&args)?.into_iter().map(Some).collect() } else { vec![None] };
    let ratios_at = |x: &Option<BigRational>| -> CliResult<Vec<BigRational>> {
        slots
            .iter()
            .map(|s| match (s, x) {
                (Slot::Fixed(r), _) => Ok(r.clone()),
                (Slot::Free, Some(x)) if args.reciprocal => {
                    if x.is_zero() {
                        Err(CliError::Usage("r = 0 has no ratio".into()))
                    } else {
                        Ok(x.recip())
                    }
                }
                (Slot::Free, Some(x)) => Ok(x.clone()),
                (Slot::Free, None) => unreachable!(),
            })
            .collect()
    };
    let x_cell = |x: &Option<BigRational>| x.as_ref().map(|x| format!("{},", format_value(x.to_f64().unwrap())));

    let k = args.q / 2;
    let mut csv = String::new();
    if let Some(grid) = &args.v2_grid {
        let grid = v2_grid(grid)?;
        csv.push_str(if free == 1 { "x,v2,residual\n" } else { "v2,residual\n" });
        for x in &xs {
            let poly = ratio_tuple(args.q, &ratios_at(x)?).and_then(|t| Ok(build_polynomial(&t)?));
            for &v2 in &grid {
                let residual = match &poly {
                    Ok(sys) => {
                        let p = sys.polynomial();
                        format_value(p.eval_f64(v2 * v2) / p.leading().unwrap().to_f64().unwrap())
                    }
                    Err(_) => String::new(),
                };
                let _ = writeln!(csv, "{}{},{residual}", x_cell(x).unwrap_or_default(), format_value(v2));
            }
        }
    } else {
        let weight_names: Vec<String> =
            std::iter::once(1).chain((1..=k).map(|j| 2 * j)).map(|i| format!("w{i}")).collect();
        csv.push('x');
        for b in 1..=k {
            let _ = write!(csv, ",v2_b{b}");
            for w in &weight_names {
                let _ = write!(csv, ",{w}_b{b}");
            }
        }
        csv.push('\n');
        for x in &xs {
            let models = match ratio_tuple(args.q, &ratios_at(x)?) {
                Ok(t) => solve_model(&t)?,
                Err(_) => Vec::new(),
            };
            csv.push_str(x_cell(x).unwrap().trim_end_matches(','));
            for b in 0..k {
                match models.get(b) {
                    Some(m) => {
                        let _ = write!(csv, ",{}", format_value(m.v2()));
                        for w in m.normalized_weights() {
                            let _ = write!(csv, ",{}", format_value(*w));
                        }
                    }
                    None => csv.push_str(&",".repeat(k + 2)),
                }
            }
            csv.push('\n');
        }
    }
    emit(args.out.as_deref(), &csv, stdout)
}
