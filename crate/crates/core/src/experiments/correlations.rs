//! Exact correlation machinery: the block indicator sums h_i, orbit hit
//! counts, and quasi-independence measures.
//!
//! Intersections of a fixed arc with a whole translate family are computed on
//! the residue grid. The family's left endpoints form an orbit; full overlaps
//! are counted with one floor sum, and the two partial-overlap fringe zones
//! are narrower than the family's minimal gap, so each holds at most one
//! orbit point, located in O(log) by `min_multiple_in_window`. Costs are
//! independent of the family size.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::alpha::Alpha;
use crate::circle::{ceil_scaled, CircleArc, IntervalSet};
use crate::error::{Error, Result};
use crate::targets::{j_block_raw, v_interval, JIndex};
use crate::zsweep::{count_in_window, hits_in_window};

/// A translate family { V_l : l in block } in residue-grid coordinates.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GridFamily {
    /// left endpoint of V_{lo} times den
    pub z0: u128,
    /// left endpoints step backwards by alpha: +(q - p) mod q per unit l
    pub step: u128,
    pub n: u64,
    /// common length times den
    pub lam: u128,
}

/// Exact coordinate r*q of a grid rational (panics if r is not on the grid).
pub(crate) fn scaled_coord(r: &BigRational, q: u128) -> u128 {
    let num = r.numer() * BigInt::from(q);
    let (quot, rem) = num::Integer::div_rem(&num, r.denom());
    assert!(rem.is_zero(), "coordinate lies on the 1/den grid");
    quot.to_u128().expect("grid coordinate in range")
}

pub(crate) fn grid_family(alpha: &Alpha, blk: &JIndex) -> Result<GridFamily> {
    let (p, q) = alpha.num_den();
    let first = v_interval(alpha, blk.lo)?;
    let z0 = scaled_coord(first.start(), q);
    let lam = scaled_coord(first.measure(), q);
    Ok(GridFamily {
        z0,
        step: q - p,
        n: blk.len(),
        lam,
    })
}

/// Total overlap length (times den) of the cyclic arc [az, az+lam_a) with the
/// disjoint family of arcs [z_l, z_l+lam_b). Exact for any sizes.
pub(crate) fn family_arc_overlap(fam: &GridFamily, az: u128, lam_a: u128, q: u128) -> u128 {
    if fam.n == 0 || lam_a == 0 {
        return 0;
    }
    if lam_a >= q {
        return fam.n as u128 * fam.lam;
    }
    if fam.lam >= q {
        debug_assert_eq!(fam.n, 1);
        return fam.n as u128 * lam_a;
    }
    let (la, lb) = (lam_a, fam.lam);
    let small = la.min(lb);
    let mut total: u128 = 0;
    // off = (z - az) mod q; overlap(off) is piecewise linear:
    //   part 1 (start of B inside A):   off in [0, la):        min(la - off, lb)
    //   part 2 (B wraps back into A):   off in [q - lb, q):    min(off + lb - q, la)
    // Constant plateaus are counted wholesale; the two width-(small-1) ramps
    // are narrower than the family's minimal gap and hold at most one point.
    if la >= lb {
        // plateau of part 1: off in [0, la - lb], value lb
        let cnt = count_in_window(fam.z0, fam.step, q, fam.n, az, la - lb + 1);
        total += cnt as u128 * lb;
    }
    if lb >= la {
        // plateau of part 2: off in [q - lb + la - 1 + 1, q) i.e. width lb - la, value la
        let base = (az + q - (lb - la)) % q;
        let cnt = count_in_window(fam.z0, fam.step, q, fam.n, base, lb - la);
        total += cnt as u128 * la;
    }
    if small >= 2 {
        // descending ramp of part 1: off in [la - small + 1, la - 1], value la - off
        let base = (az + la - small + 1) % q;
        let hits = hits_in_window(fam.z0, fam.step, q, fam.n, base, small - 1, 8);
        assert!(
            hits.len() < 8,
            "fringe zone holds at most a couple of points"
        );
        for (_, z) in &hits {
            let off = (z + q - az % q) % q;
            total += la - off;
        }
        // ascending ramp of part 2: off in [q - lb + 1, q - lb + small - 1], value off + lb - q
        let base = (az + q - lb + 1) % q;
        let hits = hits_in_window(fam.z0, fam.step, q, fam.n, base, small - 1, 8);
        assert!(hits.len() < 8);
        for (_, z) in &hits {
            let off = (z + q - az % q) % q;
            total += off + lb - q;
        }
    }
    total
}

/// lambda(arc ∩ union of the block's targets), exact.
pub fn arc_block_intersection(alpha: &Alpha, arc: &CircleArc, blk: &JIndex) -> Result<BigRational> {
    let (_, q) = alpha.num_den();
    let fam = grid_family(alpha, blk)?;
    let az = scaled_coord(arc.start(), q);
    let lam_a = scaled_coord(arc.measure(), q);
    let total = family_arc_overlap(&fam, az, lam_a, q);
    Ok(BigRational::new(BigInt::from(total), BigInt::from(q)))
}

/// lambda(union over blk_a ∩ union over blk_b), exact; cost is proportional
/// to the smaller family size times log(den).
pub fn block_intersection(alpha: &Alpha, blk_a: &JIndex, blk_b: &JIndex) -> Result<BigRational> {
    let (small, big) = if blk_a.len() <= blk_b.len() {
        (blk_a, blk_b)
    } else {
        (blk_b, blk_a)
    };
    let (_, q) = alpha.num_den();
    let fam_small = grid_family(alpha, small)?;
    let fam_big = grid_family(alpha, big)?;
    let mut total: u128 = 0;
    let mut az = fam_small.z0;
    for _ in 0..fam_small.n {
        total += family_arc_overlap(&fam_big, az, fam_small.lam, q);
        az += fam_small.step;
        if az >= q {
            az -= q;
        }
    }
    Ok(BigRational::new(BigInt::from(total), BigInt::from(q)))
}

/// The indicator sum h_i over the always-defined block J^i_2.
#[derive(Debug, Clone)]
pub struct HStat {
    pub i: u64,
    pub block: JIndex,
    /// exact integral q_i * theta_(i-1)
    pub integral: BigRational,
}

/// Exact integral of h_i = sum over J^i_2 of the target indicators; the block
/// has q_i members, each of measure theta_(i-1).
pub fn h_integral(alpha: &Alpha, i: u64) -> Result<HStat> {
    if i < 1 || i as usize > alpha.horizon_k() {
        return Err(Error::Precondition(format!(
            "h_i needs 1 <= i <= {}",
            alpha.horizon_k()
        )));
    }
    let block = j_block_raw(alpha, i, 2);
    if block.hi > alpha.horizon_j() {
        return Err(Error::Horizon {
            requested: block.hi,
            horizon: alpha.horizon_j(),
        });
    }
    let qi = BigRational::from_integer(BigInt::from(alpha.q(i as i64)));
    let integral = qi * alpha.theta(i as i64 - 1)?;
    Ok(HStat { i, block, integral })
}

/// The support of h_i as an explicit set: q_i disjoint intervals of equal
/// length. Intended for moderate q_i.
pub fn h_support(alpha: &Alpha, i: u64) -> Result<IntervalSet> {
    let stat = h_integral(alpha, i)?;
    let arcs: Result<Vec<CircleArc>> = stat.block.range().map(|j| v_interval(alpha, j)).collect();
    let arcs = arcs?;
    Ok(IntervalSet::from_arcs(arcs.iter()))
}

/// Exact pair integral of h_i h_j with the multiplicative near-independence
/// bounds it must satisfy.
#[derive(Debug, Clone)]
pub struct HPairReport {
    pub i: u64,
    pub j: u64,
    pub value: BigRational,
    pub integral_i: BigRational,
    pub integral_j: BigRational,
    /// (1 - 3 q_(i+1)/q_j) * Ii * Ij; negative means the bound is vacuous
    pub lower: BigRational,
    pub upper: BigRational,
    pub vacuous: bool,
    pub within_bounds: bool,
}

pub fn h_pair_integral(alpha: &Alpha, i: u64, j: u64) -> Result<HPairReport> {
    if i >= j {
        return Err(Error::Precondition("pair integral needs i < j".into()));
    }
    let hi = h_integral(alpha, i)?;
    let hj = h_integral(alpha, j)?;
    let value = block_intersection(alpha, &hi.block, &hj.block)?;
    let ratio = BigRational::new(
        BigInt::from(3u32) * BigInt::from(alpha.q(i as i64 + 1)),
        BigInt::from(alpha.q(j as i64)),
    );
    let prod = &hi.integral * &hj.integral;
    let lower = (BigRational::one() - &ratio) * &prod;
    let upper = (BigRational::one() + &ratio) * &prod;
    let vacuous = ratio >= BigRational::one();
    let within_bounds = lower <= value && value <= upper;
    Ok(HPairReport {
        i,
        j,
        value,
        integral_i: hi.integral,
        integral_j: hj.integral,
        lower,
        upper,
        vacuous,
        within_bounds,
    })
}

/// Count of orbit preimages of 0 landing in an interval, with the
/// three-distance bound |count - lambda * |J|| <= 2.
#[derive(Debug, Clone)]
pub struct KestenReport {
    pub block: JIndex,
    pub count: u64,
    pub expected: BigRational,
    pub bound_ok: bool,
}

/// Exact count of { {-l alpha} : l in J^i_b } inside the arc.
pub fn kesten_count(alpha: &Alpha, arc: &CircleArc, i: u64, b: u64) -> Result<KestenReport> {
    let block = j_block_raw(alpha, i, b);
    if block.hi > alpha.horizon_j() + 1 {
        return Err(Error::Horizon {
            requested: block.hi,
            horizon: alpha.horizon_j(),
        });
    }
    let (p, q) = alpha.num_den();
    let count = if arc.measure().is_one() {
        block.len()
    } else if arc.is_empty() {
        0
    } else {
        let zlo = ceil_scaled(&crate::circle::fract(arc.start()), q) % q;
        let zhi = ceil_scaled(&crate::circle::fract(&(arc.start() + arc.measure())), q) % q;
        let width = (zhi + q - zlo) % q;
        let z0 = alpha.orbit_z(-(block.lo as i64));
        count_in_window(z0, q - p, q, block.len(), zlo, width)
    };
    let expected = arc.measure() * BigRational::from_integer(BigInt::from(block.len()));
    let two = BigRational::from_integer(BigInt::from(2));
    let count_rat = BigRational::from_integer(BigInt::from(count));
    let bound_ok = &expected - &two <= count_rat && count_rat <= &expected + &two;
    Ok(KestenReport {
        block,
        count,
        expected,
        bound_ok,
    })
}

/// lambda(V_k ∩ union over J^i_b) against the multiplicative bounds
/// (lambda(V_k)|J| ± 3) / (lambda(V_k)|J|).
#[derive(Debug, Clone)]
pub struct QuasiIndependenceReport {
    pub k: u64,
    pub block: JIndex,
    pub lambda_vk: BigRational,
    pub lambda_union: BigRational,
    pub intersection: BigRational,
    pub lower: BigRational,
    pub upper: BigRational,
    pub vacuous: bool,
    pub within_bounds: bool,
}

pub fn quasi_independence_check(
    alpha: &Alpha,
    k: u64,
    i: u64,
    b: u64,
) -> Result<QuasiIndependenceReport> {
    if alpha.q(i as i64) <= k {
        return Err(Error::Precondition(format!(
            "need q_i > k (q_{i} = {} <= {k})",
            alpha.q(i as i64)
        )));
    }
    let block = j_block_raw(alpha, i, b);
    if block.hi > alpha.horizon_j() {
        return Err(Error::Horizon {
            requested: block.hi,
            horizon: alpha.horizon_j(),
        });
    }
    let vk = v_interval(alpha, k)?;
    let lambda_vk = vk.measure().clone();
    let intersection = arc_block_intersection(alpha, &vk, &block)?;
    let fam_len = BigRational::from_integer(BigInt::from(block.len()));
    let lambda_union = crate::targets::measure_v(alpha, block.lo)? * &fam_len;
    let scale = &lambda_vk * &fam_len;
    let three = BigRational::from_integer(BigInt::from(3));
    let prod = &lambda_vk * &lambda_union;
    let lower = (&scale - &three) / &scale * &prod;
    let upper = (&scale + &three) / &scale * &prod;
    let vacuous = scale <= three;
    let within_bounds = lower <= intersection && intersection <= upper;
    debug_assert!(intersection <= lambda_vk.clone().min(lambda_union.clone()));
    Ok(QuasiIndependenceReport {
        k,
        block,
        lambda_vk,
        lambda_union,
        intersection,
        lower,
        upper,
        vacuous,
        within_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::CirclePoint;
    use num::FromPrimitive;

    fn golden() -> Alpha {
        Alpha::preset("golden-40").unwrap()
    }

    #[test]
    fn h_integral_examples() {
        let a = golden();
        let h4 = h_integral(&a, 4).unwrap();
        // q_4 * theta_3 = 5 |3 alpha - 2|
        assert_eq!(
            h4.integral,
            BigRational::from_u64(5).unwrap() * a.theta(3).unwrap()
        );
        assert!((h4.integral.to_f64().unwrap() - 0.7294901687).abs() < 1e-9);
        // strict window (1/2, 1) for every valid i
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        for i in 1..=30u64 {
            let h = h_integral(&a, i).unwrap();
            assert!(
                half < h.integral && h.integral < BigRational::one(),
                "i={i}"
            );
            // lower bound route: q_i/(q_i + q_(i-1)) > 1/2
            let qi = a.q(i as i64);
            let lo = BigRational::new(BigInt::from(qi), BigInt::from(qi + a.q(i as i64 - 1)));
            assert!(h.integral > lo);
        }
    }

    #[test]
    fn h_support_structure() {
        let a = golden();
        for i in [1u64, 3, 5, 8] {
            let stat = h_integral(&a, i).unwrap();
            let sup = h_support(&a, i).unwrap();
            // disjoint union of q_i intervals of equal length theta_(i-1):
            // exact measure equality certifies pairwise disjointness
            assert_eq!(sup.measure(), stat.integral, "i={i}");
            // the normalized set may merge exactly-touching members (all-ones
            // blocks touch: theta_(i-2) = theta_i + theta_(i-1)) and the wrap
            // across 0 can split one; count stays in [1, q_i + 1]
            let n = a.q(i as i64) as usize;
            assert!(!sup.components().is_empty() && sup.components().len() <= n + 1);
        }
    }

    #[test]
    fn block_intersection_matches_set_algebra() {
        let a = golden();
        for (i, j) in [(1u64, 5u64), (2, 6), (3, 7), (2, 9), (4, 10)] {
            let hi = h_integral(&a, i).unwrap();
            let hj = h_integral(&a, j).unwrap();
            let fast = block_intersection(&a, &hi.block, &hj.block).unwrap();
            let si = h_support(&a, i).unwrap();
            let sj = h_support(&a, j).unwrap();
            assert_eq!(fast, si.intersect(&sj).measure(), "i={i} j={j}");
        }
    }

    #[test]
    fn arc_block_intersection_matches_set_algebra() {
        let a = golden();
        for k in [1u64, 2, 3, 5, 8, 13] {
            let vk = v_interval(&a, k).unwrap();
            for (i, b) in [(5u64, 1u64), (6, 1), (7, 2), (9, 1)] {
                let blk = j_block_raw(&a, i, b);
                let fast = arc_block_intersection(&a, &vk, &blk).unwrap();
                let arcs: Vec<CircleArc> =
                    blk.range().map(|j| v_interval(&a, j).unwrap()).collect();
                let set = IntervalSet::from_arcs(arcs.iter());
                assert_eq!(
                    fast,
                    vk.to_set().intersect(&set).measure(),
                    "k={k} i={i} b={b}"
                );
            }
        }
    }

    #[test]
    fn h_pair_examples() {
        let a = golden();
        let rep = h_pair_integral(&a, 3, 10).unwrap();
        assert!(!rep.vacuous);
        assert!(
            rep.within_bounds,
            "exact value within multiplicative bounds"
        );
        // value in [0, min(Ii, Ij)]
        assert!(rep.value >= BigRational::zero());
        assert!(rep.value <= rep.integral_i.clone().min(rep.integral_j.clone()));
        // adjacent pair: bound vacuous, flagged
        let adj = h_pair_integral(&a, 5, 6).unwrap();
        assert!(adj.vacuous);
    }

    #[test]
    fn pair_covariance_decays_exponentially() {
        // |int h_i h_j - int h_i int h_j| <= 3 exp(-(j-i) ln sqrt(2)) checked
        // via squares to stay in exact arithmetic: delta^2 <= 9 / 2^(j-i)
        let a = golden();
        for (i, j) in [(1u64, 5u64), (2, 7), (3, 9), (4, 12), (2, 11)] {
            let rep = h_pair_integral(&a, i, j).unwrap();
            let delta = rep.value - &rep.integral_i * &rep.integral_j;
            let bound_sq = BigRational::new(BigInt::from(9), BigInt::from(1u128 << (j - i)));
            assert!(&delta * &delta <= bound_sq, "({i},{j}): delta {delta}");
        }
    }

    #[test]
    fn kesten_example_golden() {
        let a = golden();
        // [0, 1/2), i=4, b=1: the three points {-5a}, {-6a}, {-7a}
        let arc = CircleArc::from_endpoints(
            &BigRational::zero(),
            &BigRational::new(BigInt::from(1), BigInt::from(2)),
        );
        let rep = kesten_count(&a, &arc, 4, 1).unwrap();
        assert_eq!(rep.count, 1);
        assert!(rep.bound_ok);
        // full circle: count = |J|
        let full = kesten_count(&a, &CircleArc::full(), 4, 1).unwrap();
        assert_eq!(full.count, full.block.len());
        // empty interval
        let empty = kesten_count(
            &a,
            &CircleArc::new(BigRational::zero(), BigRational::zero()),
            4,
            1,
        )
        .unwrap();
        assert_eq!(empty.count, 0);
    }

    #[test]
    fn kesten_matches_brute_force() {
        let a = Alpha::from_prefix(vec![3, 1, 4, 1, 5, 9, 2, 6], 1000).unwrap();
        let arc = CircleArc::from_endpoints(
            &BigRational::new(BigInt::from(3), BigInt::from(17)),
            &BigRational::new(BigInt::from(11), BigInt::from(13)),
        );
        for (i, b) in [(2u64, 1u64), (3, 1), (3, 2), (4, 1), (5, 3)] {
            let rep = kesten_count(&a, &arc, i, b).unwrap();
            let mut brute = 0;
            for l in rep.block.range() {
                let p =
                    crate::circle::rotate(&a, &CirclePoint::new(BigRational::zero()), -(l as i64))
                        .unwrap();
                if arc.contains(&p) {
                    brute += 1;
                }
            }
            assert_eq!(rep.count, brute, "i={i} b={b}");
            assert!(rep.bound_ok);
        }
    }

    #[test]
    fn quasi_independence_example() {
        let a = golden();
        let rep = quasi_independence_check(&a, 3, 8, 1).unwrap();
        assert!(rep.within_bounds || rep.vacuous);
        assert!(rep.intersection <= rep.lambda_vk.clone().min(rep.lambda_union.clone()));
        // precondition: q_i > k
        assert!(quasi_independence_check(&a, 10, 3, 1).is_err());
    }
}
