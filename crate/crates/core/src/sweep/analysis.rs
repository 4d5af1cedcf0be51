use serde::{Deserialize, Serialize};

use super::run::DistanceRecord;
use crate::error::{Error, Result};
use crate::numerics::linear_fit;

/// Step tolerance for the monotonicity check.
pub const MONOTONIC_TOLERANCE: f64 = 1e-9;
pub const INITIAL_POINTS: usize = 5;
/// Upper end of the near-linearity window as a fraction of `sqrt(2N)`.
pub const LINEAR_WINDOW: f64 = 0.8;
pub const MIN_RECORDS: usize = 6;

/// Shape of one `D_rho(D_psi)` curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub records: usize,
    /// Least-squares slope over the first five records, normalized axes.
    pub initial_slope: f64,
    /// R² of a linear fit over records with `D_psi <= 0.8 sqrt(2N)`; absent
    /// when fewer than two distinct abscissae fall in that window.
    pub linear_r2: Option<f64>,
    pub monotonic: bool,
    /// Largest decrease of `D_rho` between consecutive records (zero when
    /// monotonic in the strict sense).
    pub worst_step: f64,
    /// Secant slope over the last decile divided by the overall secant slope.
    pub tail_slope_ratio: f64,
    pub max_d_psi: f64,
    pub max_d_rho: f64,
    /// `max_d_psi / sqrt(2N)`
    pub reach: f64,
}

/// Records ordered by `D_psi`, ties by `D_rho`.
pub fn sorted_by_d_psi(records: &[DistanceRecord]) -> Vec<DistanceRecord> {
    let mut out = records.to_vec();
    out.sort_by(|a, b| a.d_psi.total_cmp(&b.d_psi).then(a.d_rho.total_cmp(&b.d_rho)));
    out
}

fn secant(points: &[(f64, f64)]) -> f64 {
    let (first, last) = (points[0], points[points.len() - 1]);
    (last.1 - first.1) / (last.0 - first.0)
}

pub fn analyze(records: &[DistanceRecord], n: usize) -> Result<AnalysisReport> {
    if records.len() < MIN_RECORDS {
        return Err(Error::invalid(format!(
            "curve analysis needs at least {MIN_RECORDS} records, got {}",
            records.len()
        )));
    }
    if n == 0 {
        return Err(Error::invalid("particle number must be positive"));
    }
    let sorted = sorted_by_d_psi(records);
    let psi_scale = (2.0 * n as f64).sqrt();
    let rho_scale = 2.0 * n as f64;
    let norm: Vec<(f64, f64)> = sorted.iter().map(|r| (r.d_psi / psi_scale, r.d_rho / rho_scale)).collect();

    let initial_slope = linear_fit(&norm[..INITIAL_POINTS])?.slope;
    let window: Vec<(f64, f64)> = sorted
        .iter()
        .zip(&norm)
        .filter(|(r, _)| r.d_psi <= LINEAR_WINDOW * psi_scale)
        .map(|(_, p)| *p)
        .collect();
    let linear_r2 = linear_fit(&window).ok().map(|f| f.r_squared);

    let worst_step = sorted.windows(2).map(|w| w[0].d_rho - w[1].d_rho).fold(0.0_f64, f64::max);
    let tail = (sorted.len().div_ceil(10)).max(2);
    let tail_slope_ratio = secant(&norm[norm.len() - tail..]) / secant(&norm);

    Ok(AnalysisReport {
        records: sorted.len(),
        initial_slope,
        linear_r2,
        monotonic: worst_step <= MONOTONIC_TOLERANCE,
        worst_step,
        tail_slope_ratio,
        max_d_psi: sorted.iter().map(|r| r.d_psi).fold(0.0, f64::max),
        max_d_rho: sorted.iter().map(|r| r.d_rho).fold(0.0, f64::max),
        reach: sorted[sorted.len() - 1].d_psi / psi_scale,
    })
}

/// Largest vertical gap between two curves in normalized axes: curve `b` is
/// interpolated linearly at the abscissae of `a` that fall in the common
/// `D_psi` range.
pub fn superposition_check(a: &[DistanceRecord], b: &[DistanceRecord]) -> Result<f64> {
    let pts = |r: &[DistanceRecord]| -> Vec<(f64, f64)> {
        sorted_by_d_psi(r).iter().map(|r| (r.d_psi_norm, r.d_rho_norm)).collect()
    };
    let (pa, pb) = (pts(a), pts(b));
    if pa.is_empty() || pb.is_empty() {
        return Err(Error::invalid("superposition check needs two non-empty curves"));
    }
    let lo = pa[0].0.max(pb[0].0);
    let hi = pa[pa.len() - 1].0.min(pb[pb.len() - 1].0);
    if !(hi > lo) {
        return Err(Error::invalid(format!(
            "curves share no D_psi range (common interval [{lo}, {hi}])"
        )));
    }
    let mut worst = 0.0_f64;
    for &(x, y) in pa.iter().filter(|(x, _)| *x >= lo && *x <= hi) {
        worst = worst.max((y - interpolate(&pb, x)).abs());
    }
    Ok(worst)
}

fn interpolate(points: &[(f64, f64)], x: f64) -> f64 {
    let k = points.partition_point(|p| p.0 < x);
    if k == 0 {
        return points[0].1;
    }
    if k == points.len() {
        return points[k - 1].1;
    }
    let (x0, y0) = points[k - 1];
    let (x1, y1) = points[k];
    if x1 == x0 {
        return y1;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(d_psi_norm: f64, d_rho_norm: f64, n: usize) -> DistanceRecord {
        let nf = n as f64;
        DistanceRecord {
            param: String::new(),
            d_psi: d_psi_norm * (2.0 * nf).sqrt(),
            d_rho: d_rho_norm * 2.0 * nf,
            d_psi_norm,
            d_rho_norm,
            overlap: 1.0,
            energy_ref: 0.0,
            energy_var: 0.0,
            flags: vec![],
        }
    }

    fn line(slope: f64, n: usize) -> Vec<DistanceRecord> {
        (0..12).map(|i| record(i as f64 / 12.0, slope * i as f64 / 12.0, n)).collect()
    }

    #[test]
    fn linear_curve() {
        let r = analyze(&line(0.9, 2), 2).unwrap();
        assert!((r.initial_slope - 0.9).abs() < 1e-12);
        assert!((r.linear_r2.unwrap() - 1.0).abs() < 1e-12);
        assert!(r.monotonic);
        assert!((r.tail_slope_ratio - 1.0).abs() < 1e-12);
        assert!((r.max_d_rho - 0.9 * 11.0 / 12.0 * 4.0).abs() < 1e-12);
    }

    #[test]
    fn order_of_records_does_not_matter() {
        let mut recs = line(0.7, 4);
        recs.reverse();
        recs.swap(3, 7);
        assert_eq!(analyze(&recs, 4).unwrap(), analyze(&line(0.7, 4), 4).unwrap());
    }

    #[test]
    fn monotonic_tolerance() {
        let mut recs = line(0.9, 2);
        recs[6].d_rho = recs[5].d_rho - 1e-12;
        assert!(analyze(&recs, 2).unwrap().monotonic);
        recs[6].d_rho = recs[5].d_rho - 0.1;
        let r = analyze(&recs, 2).unwrap();
        assert!(!r.monotonic);
        assert!((r.worst_step - 0.1).abs() < 1e-12);
    }

    #[test]
    fn steep_tail() {
        // slope 0.5 then 3 over the last two points
        let mut recs: Vec<DistanceRecord> = (0..10).map(|i| record(0.1 * i as f64, 0.05 * i as f64, 2)).collect();
        recs.push(record(1.0, 0.45 + 0.3, 2));
        let r = analyze(&recs, 2).unwrap();
        assert!(r.tail_slope_ratio > 1.0);
        // secant over the last two: 3.0; overall: 0.75
        assert!((r.tail_slope_ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_records() {
        assert!(analyze(&line(1.0, 2)[..5], 2).is_err());
    }

    #[test]
    fn superposition() {
        let a = line(0.9, 2);
        assert_eq!(superposition_check(&a, &a).unwrap(), 0.0);
        let b: Vec<DistanceRecord> = (0..5).map(|i| record(0.05 + 0.2 * i as f64, 0.9 * (0.05 + 0.2 * i as f64) + 0.02, 2)).collect();
        assert!((superposition_check(&a, &b).unwrap() - 0.02).abs() < 1e-12);
        let far: Vec<DistanceRecord> = (0..3).map(|i| record(2.0 + i as f64, 1.0, 2)).collect();
        assert!(superposition_check(&a, &far).is_err());
    }
}
