//! The non-convergence gap construction: the sets W_b, X_m, Y_m and the
//! normalized hit ratio f_m whose values separate by a fixed gap D on pairs
//! drawn from X_m x Y_m whenever a_m dominates the earlier elements.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::alpha::Alpha;
use crate::circle::{CircleArc, CirclePoint, IntervalSet};
use crate::error::{Error, Result};
use crate::sampling::substream;
use crate::targets::{counts_at, j_block_raw, measure_sum, v_interval, JIndex};

/// Parameters of the gap construction at the index m of a dominant element.
#[derive(Debug, Clone)]
pub struct ThmBConfig {
    /// index of the large element a_m (1-based)
    pub m: usize,
    pub rho: BigRational,
    pub sigma: BigRational,
    pub c: BigRational,
}

impl ThmBConfig {
    /// rho in (1/8, 1/4), sigma in (1/16, 1/8), rho a_m and sigma a_m
    /// integers, sigma a_m >= 2, and the witness condition
    /// a_m > C * sum of the earlier elements.
    pub fn validate(&self, alpha: &Alpha) -> Result<(u64, u64)> {
        let a_m = alpha
            .element(self.m)
            .ok_or_else(|| Error::Precondition(format!("no element a_{}", self.m)))?;
        let rat = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
        if !(self.rho > rat(1, 8) && self.rho < rat(1, 4)) {
            return Err(Error::Precondition("rho must lie in (1/8, 1/4)".into()));
        }
        if !(self.sigma > rat(1, 16) && self.sigma < rat(1, 8)) {
            return Err(Error::Precondition("sigma must lie in (1/16, 1/8)".into()));
        }
        if self.sigma >= self.rho {
            return Err(Error::Precondition("need sigma < rho".into()));
        }
        let a_m_rat = BigRational::from_integer(BigInt::from(a_m));
        let b_rho = &self.rho * &a_m_rat;
        let b_sigma = &self.sigma * &a_m_rat;
        if !b_rho.is_integer() || !b_sigma.is_integer() {
            return Err(Error::Precondition(
                "rho a_m and sigma a_m must be integers".into(),
            ));
        }
        let b_sigma_int = b_sigma.to_integer().to_u64().unwrap();
        if b_sigma_int < 2 {
            return Err(Error::Precondition("sigma a_m must be >= 2".into()));
        }
        let sum_prior: u64 = (1..self.m).map(|i| alpha.element(i).unwrap()).sum();
        let witness = a_m_rat > &self.c * BigRational::from_integer(BigInt::from(sum_prior));
        if !witness {
            return Err(Error::Precondition(format!(
                "witness condition fails: a_m = {a_m} vs C * {sum_prior}"
            )));
        }
        Ok((b_rho.to_integer().to_u64().unwrap(), b_sigma_int))
    }

    /// The guaranteed gap D = (rho - sigma - 1/C) / (1 + 1/C).
    pub fn gap(&self) -> BigRational {
        let inv_c = self.c.recip();
        (&self.rho - &self.sigma - &inv_c) / (BigRational::one() + inv_c)
    }
}

/// Closed form lambda(W_b) = q_(m-1) [theta_(m-2) - (b-2) theta_(m-1)],
/// valid for 2 <= b <= a_m.
pub fn w_measure_closed_form(alpha: &Alpha, m: usize, b: u64) -> Result<BigRational> {
    let q_prev = BigRational::from_integer(BigInt::from(alpha.q(m as i64 - 1)));
    let th2 = alpha.theta(m as i64 - 2)?;
    let th1 = alpha.theta(m as i64 - 1)?;
    Ok(q_prev * (th2 - BigRational::from_integer(BigInt::from(b as i64 - 2)) * th1))
}

/// W_b = union of V_j over j in J^(m-1)_b, as an explicit set.
pub fn w_set(alpha: &Alpha, m: usize, b: u64) -> Result<(JIndex, IntervalSet)> {
    let block = j_block_raw(alpha, m as u64 - 1, b);
    if block.hi > alpha.horizon_j() {
        return Err(Error::Horizon {
            requested: block.hi,
            horizon: alpha.horizon_j(),
        });
    }
    let arcs: Result<Vec<CircleArc>> = block.range().map(|j| v_interval(alpha, j)).collect();
    let arcs = arcs?;
    Ok((block, IntervalSet::from_arcs(arcs.iter())))
}

#[derive(Debug, Clone)]
pub struct SampledPair {
    pub x: BigRational,
    pub y: BigRational,
    pub f_x: BigRational,
    pub f_y: BigRational,
    /// f_m(x) - f_m(y)
    pub gap: BigRational,
    /// hits of x in the block [q_(m-1), q_m), must be >= rho a_m
    pub x_block_count: u64,
    /// hits of y in the same block, must be <= sigma a_m - 1
    pub y_block_count: u64,
}

#[derive(Debug, Clone)]
pub struct ThmBReport {
    pub m: usize,
    pub b_rho: u64,
    pub b_sigma: u64,
    /// (b, exact set measure, closed form) for the checked branches
    pub w_measures: Vec<(u64, BigRational, BigRational)>,
    pub lambda_x: BigRational,
    pub lambda_y: BigRational,
    pub gap_lower: BigRational,
    pub pairs: Vec<SampledPair>,
    pub min_gap: BigRational,
    pub all_pairs_pass: bool,
}

/// Draw a point of the set, component chosen proportionally to length, then
/// uniformly inside at 128-bit resolution; membership re-verified exactly.
fn sample_point(set: &IntervalSet, rng: &mut impl Rng) -> BigRational {
    let u = BigRational::new(BigInt::from(rng.gen::<u128>()), BigInt::one() << 128);
    let x = set
        .point_at(&u)
        .expect("sampling from a set of positive measure");
    assert!(set.contains(&x), "sampled point must lie in the set");
    x
}

/// Run the full gap experiment: construct X_m and Y_m, verify the measure
/// bounds and the closed form for lambda(W_b), then check the per-pair gap
/// f_m(x) - f_m(y) >= D on `samples` sampled pairs.
pub fn theorem_b_experiment(
    alpha: &Alpha,
    cfg: &ThmBConfig,
    samples: usize,
    seed: u64,
) -> Result<ThmBReport> {
    let (b_rho, b_sigma) = cfg.validate(alpha)?;
    let m = cfg.m;
    let a_m = alpha.element(m).unwrap();
    let n_count = alpha.q(m as i64) - 1;
    if n_count + 1 > alpha.horizon_j() {
        return Err(Error::Horizon {
            requested: n_count + 1,
            horizon: alpha.horizon_j(),
        });
    }

    // lambda(W_b) against the closed form on a spread of branches
    let mut w_measures = Vec::new();
    let mut checked_bs: Vec<u64> = vec![2, 3, b_sigma, b_rho, a_m];
    let step = (a_m / 7).max(1);
    let mut b = 2 + step;
    while b < a_m && checked_bs.len() < 12 {
        checked_bs.push(b);
        b += step;
    }
    checked_bs.sort_unstable();
    checked_bs.dedup();
    for &b in checked_bs.iter().filter(|&&b| (2..=a_m).contains(&b)) {
        let (_, set) = w_set(alpha, m, b)?;
        let closed = w_measure_closed_form(alpha, m, b)?;
        w_measures.push((b, set.measure(), closed));
    }

    // nesting of the branches: W_(b+1) strictly inside W_b for b >= 2
    for &b in &[2u64, b_sigma, b_rho - 1] {
        if b < a_m {
            let (_, wb) = w_set(alpha, m, b)?;
            let (_, wb1) = w_set(alpha, m, b + 1)?;
            if !wb1.subtract(&wb).is_empty() {
                return Err(Error::Precondition(format!("W_{} not inside W_{b}", b + 1)));
            }
        }
    }

    let (_, x_set) = w_set(alpha, m, b_rho)?;
    let (_, w1) = w_set(alpha, m, 1)?;
    let (_, w_sigma) = w_set(alpha, m, b_sigma)?;
    let y_set = w1.subtract(&w_sigma);
    let lambda_x = x_set.measure();
    let lambda_y = y_set.measure();
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    let delta = BigRational::new(BigInt::from(1), BigInt::from(128));
    if lambda_x < quarter {
        return Err(Error::Precondition(format!(
            "lambda(X_m) = {lambda_x} < 1/4"
        )));
    }
    if lambda_y < delta {
        return Err(Error::Precondition(format!(
            "lambda(Y_m) = {lambda_y} < 1/128"
        )));
    }

    let d = cfg.gap();
    if !d.is_positive() {
        return Err(Error::Precondition(
            "gap D must be positive; raise C".into(),
        ));
    }

    // sample pairs and evaluate f_m exactly
    let msum = measure_sum(alpha, n_count)?;
    let block_lo = alpha.q(m as i64 - 1);
    let points: Vec<(BigRational, BigRational)> = (0..samples)
        .map(|idx| {
            let mut rng = substream(seed, idx as u64);
            (
                sample_point(&x_set, &mut rng),
                sample_point(&y_set, &mut rng),
            )
        })
        .collect();
    let pairs: Result<Vec<SampledPair>> = points
        .into_par_iter()
        .map(|(x, y)| {
            let cps = [block_lo - 1, n_count];
            let cx = counts_at(alpha, &CirclePoint::new(x.clone()), &cps)?;
            let cy = counts_at(alpha, &CirclePoint::new(y.clone()), &cps)?;
            let f_x = BigRational::from_integer(BigInt::from(cx[1])) / &msum;
            let f_y = BigRational::from_integer(BigInt::from(cy[1])) / &msum;
            let gap = &f_x - &f_y;
            Ok(SampledPair {
                x,
                y,
                f_x,
                f_y,
                gap,
                x_block_count: cx[1] - cx[0],
                y_block_count: cy[1] - cy[0],
            })
        })
        .collect();
    let pairs = pairs?;
    for pair in &pairs {
        if pair.x_block_count < b_rho {
            return Err(Error::Precondition(format!(
                "x in W_rho must hit >= {b_rho} targets in the block, got {}",
                pair.x_block_count
            )));
        }
        if pair.y_block_count + 1 > b_sigma {
            return Err(Error::Precondition(format!(
                "y in Y_m must hit <= {} targets in the block, got {}",
                b_sigma - 1,
                pair.y_block_count
            )));
        }
    }
    let min_gap = pairs
        .iter()
        .map(|p| p.gap.clone())
        .min()
        .unwrap_or_else(BigRational::zero);
    let all_pairs_pass = pairs.iter().all(|p| p.gap >= d);
    Ok(ThmBReport {
        m,
        b_rho,
        b_sigma,
        w_measures,
        lambda_x,
        lambda_y,
        gap_lower: d,
        pairs,
        min_gap,
        all_pairs_pass,
    })
}

/// Prefix builder for the gap experiment: k ones, the dominant element A at
/// position m = k + 1, then one more element so counting up to q_m stays
/// inside the horizon.
pub fn gap_prefix(k: usize, a_big: u64) -> Vec<u64> {
    let mut v = vec![1; k];
    v.push(a_big);
    v.push(1);
    v
}

/// Oscillation of f at the checkpoints of two engineered dominant elements:
/// a point of X_(m1) ∩ Y_(m2) sees f high at q_(m1) and low at q_(m2).
#[derive(Debug, Clone)]
pub struct OscillationReport {
    pub m1: usize,
    pub m2: usize,
    pub x: BigRational,
    pub f_m1: BigRational,
    pub f_m2: BigRational,
    pub swing: BigRational,
}

pub fn theorem_b_oscillation(
    alpha: &Alpha,
    cfg1: &ThmBConfig,
    cfg2: &ThmBConfig,
    seed: u64,
) -> Result<OscillationReport> {
    let (b_rho1, _) = cfg1.validate(alpha)?;
    let (_, b_sigma2) = cfg2.validate(alpha)?;
    let (m1, m2) = (cfg1.m, cfg2.m);
    if m1 >= m2 {
        return Err(Error::Precondition("need m1 < m2".into()));
    }
    let (_, x_set) = w_set(alpha, m1, b_rho1)?;
    let (_, w1) = w_set(alpha, m2, 1)?;
    let (_, w_sigma) = w_set(alpha, m2, b_sigma2)?;
    let y_set = w1.subtract(&w_sigma);
    let both = x_set.intersect(&y_set);
    if both.is_empty() {
        return Err(Error::Precondition("X_(m1) ∩ Y_(m2) is empty".into()));
    }
    let mut rng = substream(seed, 0);
    let x = sample_point(&both, &mut rng);
    let n1 = alpha.q(m1 as i64) - 1;
    let n2 = alpha.q(m2 as i64) - 1;
    let counts = counts_at(alpha, &CirclePoint::new(x.clone()), &[n1, n2])?;
    let sums = crate::targets::measure_sums_at(alpha, &[n1, n2])?;
    let f_m1 = BigRational::from_integer(BigInt::from(counts[0])) / &sums[0];
    let f_m2 = BigRational::from_integer(BigInt::from(counts[1])) / &sums[1];
    let swing = &f_m1 - &f_m2;
    Ok(OscillationReport {
        m1,
        m2,
        x,
        f_m1,
        f_m2,
        swing,
    })
}
