use std::fmt::Write;

use super::Snapshot;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "X,rho,u,theta,p";

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per node: `X, rho, u, theta, p` with `p = ρθ`.
pub fn snapshot_csv(snap: &Snapshot) -> String {
    let mut out = String::with_capacity(snap.len() * 120);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for x in 1..=snap.len() {
        let f = snap.at(x);
        let _ = writeln!(
            out,
            "{x},{},{},{},{}",
            format_value(f.rho),
            format_value(f.u),
            format_value(f.theta),
            format_value(f.p)
        );
    }
    out
}

/// Reads a snapshot written by [`snapshot_csv`]. Nodes must be listed in
/// order starting at 1; the step is not stored and comes back as 0.
pub fn parse_snapshot_csv(text: &str) -> Result<Snapshot> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => return Err(Error::InvalidArgument(format!("expected header {CSV_HEADER:?}, got {other:?}"))),
    }
    let mut snap = Snapshot { step: 0, rho: Vec::new(), u: Vec::new(), theta: Vec::new() };
    for (row, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
        let bad = || Error::InvalidArgument(format!("malformed CSV row {}: {line:?}", row + 2));
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 5 || cols[0].parse::<usize>().map_err(|_| bad())? != row + 1 {
            return Err(bad());
        }
        let num = |i: usize| cols[i].parse::<f64>().map_err(|_| bad());
        snap.rho.push(num(1)?);
        snap.u.push(num(2)?);
        snap.theta.push(num(3)?);
    }
    Ok(snap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_bits() {
        let snap = Snapshot { step: 3, rho: vec![1.0 / 3.0, 2.5], u: vec![-1e-300, 0.1], theta: vec![0.7, 1.4] };
        let text = snapshot_csv(&snap);
        assert!(text.starts_with("X,rho,u,theta,p\n1,3.3333333333333331e-1,"));
        let back = parse_snapshot_csv(&text).unwrap();
        assert_eq!(back.rho, snap.rho);
        assert_eq!(back.u, snap.u);
        assert_eq!(back.theta, snap.theta);
    }

    #[test]
    fn bad_csv_is_rejected() {
        assert!(parse_snapshot_csv("a,b\n").is_err());
        assert!(parse_snapshot_csv("X,rho,u,theta,p\n2,1,0,1,1\n").is_err());
        assert!(parse_snapshot_csv("X,rho,u,theta,p\n1,x,0,1,1\n").is_err());
    }
}
