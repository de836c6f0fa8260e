use serde::{Deserialize, Serialize};

use super::Snapshot;
use crate::error::{Error, Result};

/// Nodes on each side of a probe included in its median window.
pub const PLATEAU_HALF_WINDOW: usize = 10;
/// Relative spread above which a probe window is flagged as not flat.
pub const FLATNESS_LIMIT: f64 = 0.02;

/// Macroscopic fields at one node, with `p = ρθ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fields {
    pub rho: f64,
    pub u: f64,
    pub theta: f64,
    pub p: f64,
}

impl Fields {
    pub fn new(rho: f64, u: f64, theta: f64) -> Self {
        Self { rho, u, theta, p: rho * theta }
    }

    pub fn max_abs_diff(&self, other: &Fields) -> f64 {
        [self.rho - other.rho, self.u - other.u, self.theta - other.theta, self.p - other.p]
            .iter()
            .fold(0.0, |m, d| m.max(d.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauSample {
    pub node: usize,
    pub value: Fields,
    /// Component-wise median over the probe window.
    pub median: Fields,
    /// Largest `(max − min)/median` of `ρ`, `θ` and `p` over the window.
    pub spread: f64,
    pub flat: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauReport {
    pub first: PlateauSample,
    pub second: PlateauSample,
    pub warnings: Vec<String>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn sample(snap: &Snapshot, node: usize) -> Result<PlateauSample> {
    if node == 0 || node > snap.len() {
        return Err(Error::InvalidArgument(format!("probe node {node} outside 1..={}", snap.len())));
    }
    let lo = node.saturating_sub(PLATEAU_HALF_WINDOW).max(1);
    let hi = (node + PLATEAU_HALF_WINDOW).min(snap.len());
    let window: Vec<Fields> = (lo..=hi).map(|x| snap.at(x)).collect();
    let column = |get: fn(&Fields) -> f64| window.iter().map(get).collect::<Vec<_>>();
    let rel_spread = |xs: Vec<f64>| {
        let (min, max) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        (max - min) / median(xs).abs()
    };
    let median_fields = Fields {
        rho: median(column(|f| f.rho)),
        u: median(column(|f| f.u)),
        theta: median(column(|f| f.theta)),
        p: median(column(|f| f.p)),
    };
    let spread =
        [column(|f| f.rho), column(|f| f.theta), column(|f| f.p)].into_iter().map(rel_spread).fold(0.0, f64::max);
    Ok(PlateauSample { node, value: snap.at(node), median: median_fields, spread, flat: spread <= FLATNESS_LIMIT })
}

/// Values and window medians at two probe nodes (1-based).
pub fn extract_plateaus(snap: &Snapshot, first: usize, second: usize) -> Result<PlateauReport> {
    let first = sample(snap, first)?;
    let second = sample(snap, second)?;
    let warnings = [&first, &second]
        .iter()
        .filter(|s| !s.flat)
        .map(|s| {
            format!(
                "window around node {} spreads {:.1}% (limit {:.0}%)",
                s.node,
                100.0 * s.spread,
                100.0 * FLATNESS_LIMIT
            )
        })
        .collect();
    Ok(PlateauReport { first, second, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snap(rho: Vec<f64>) -> Snapshot {
        Snapshot { step: 0, u: vec![0.1; rho.len()], theta: vec![1.0; rho.len()], rho }
    }

    #[test]
    fn uniform_state_is_flat() {
        let r = extract_plateaus(&snap(vec![2.0; 50]), 5, 45).unwrap();
        assert_eq!(r.first.median, Fields::new(2.0, 0.1, 1.0));
        assert_eq!(r.first.value, r.second.value);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn step_inside_window_warns() {
        let rho: Vec<f64> = (0..50).map(|i| if i < 25 { 2.0 } else { 1.0 }).collect();
        let r = extract_plateaus(&snap(rho), 25, 45).unwrap();
        assert!(!r.first.flat && r.second.flat);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn median_ignores_one_outlier() {
        let mut rho = vec![1.0; 50];
        rho[20] = 9.0;
        let r = extract_plateaus(&snap(rho), 20, 40).unwrap();
        assert_eq!(r.first.median.rho, 1.0);
        assert!(extract_plateaus(&snap(vec![1.0; 5]), 0, 3).is_err());
    }
}
