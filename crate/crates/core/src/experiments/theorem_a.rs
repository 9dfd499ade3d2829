//! The log-ratio series of the main convergence statement: for checkpoints N,
//! the ratio log(hit count) / log(measure sum) along the orbit of sampled
//! points.

use num::{BigInt, BigRational, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::alpha::Alpha;
use crate::circle::CirclePoint;
use crate::error::Result;
use crate::sampling::substream;
use crate::targets::{counts_at, measure_sums_at};

#[derive(Debug, Clone, Serialize)]
pub struct RatioPoint {
    pub n: u64,
    pub count: u64,
    /// log count / log measure_sum; None when count <= 1 or the measure sum
    /// is <= 1 (the ratio is reported as undefined, never fabricated)
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ThmASample {
    pub x: BigRational,
    pub points: Vec<RatioPoint>,
}

#[derive(Debug, Clone)]
pub struct ThmAReport {
    pub checkpoints: Vec<u64>,
    /// exact measure sums at each checkpoint (shared by all samples)
    pub measure_sums: Vec<BigRational>,
    pub samples: Vec<ThmASample>,
}

fn ratio(count: u64, measure_sum: &BigRational) -> Option<f64> {
    if count <= 1 {
        return None;
    }
    let ms = measure_sum.to_f64()?;
    if ms <= 1.0 {
        return None;
    }
    Some((count as f64).ln() / ms.ln())
}

/// Ratio series for explicit points.
pub fn theorem_a_series(
    alpha: &Alpha,
    xs: &[CirclePoint],
    checkpoints: &[u64],
) -> Result<ThmAReport> {
    let measure_sums = measure_sums_at(alpha, checkpoints)?;
    let samples: Result<Vec<ThmASample>> = xs
        .par_iter()
        .map(|x| {
            let counts = counts_at(alpha, x, checkpoints)?;
            let points = checkpoints
                .iter()
                .zip(&counts)
                .zip(&measure_sums)
                .map(|((&n, &count), ms)| RatioPoint {
                    n,
                    count,
                    ratio: ratio(count, ms),
                })
                .collect();
            Ok(ThmASample {
                x: x.value().clone(),
                points,
            })
        })
        .collect();
    Ok(ThmAReport {
        checkpoints: checkpoints.to_vec(),
        measure_sums,
        samples: samples?,
    })
}

/// Ratio series for `n_samples` seeded uniform points (64-bit dyadics).
pub fn theorem_a_experiment(
    alpha: &Alpha,
    n_samples: usize,
    seed: u64,
    checkpoints: &[u64],
) -> Result<ThmAReport> {
    let xs: Vec<CirclePoint> = (0..n_samples)
        .map(|idx| {
            let mut rng = substream(seed, idx as u64);
            CirclePoint::new(BigRational::new(
                BigInt::from(rng.gen::<u64>()),
                BigInt::from(1u128 << 64),
            ))
        })
        .collect();
    theorem_a_series(alpha, &xs, checkpoints)
}

/// Median of |ratio - 1| over the samples at one checkpoint index; undefined
/// ratios are skipped.
pub fn median_abs_ratio_gap(report: &ThmAReport, checkpoint_idx: usize) -> Option<f64> {
    let mut gaps: Vec<f64> = report
        .samples
        .iter()
        .filter_map(|s| s.points[checkpoint_idx].ratio)
        .map(|r| (r - 1.0).abs())
        .collect();
    if gaps.is_empty() {
        return None;
    }
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Some(gaps[gaps.len() / 2])
}
