//! Exact points, arcs and interval sets on the circle [0,1).

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::alpha::Alpha;
use crate::error::{Error, Result};

/// x - floor(x), exact, in [0,1).
pub fn fract(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// ceil(r * q) for r in [0, 1]; used to translate exact circle coordinates
/// into windows on the 1/q residue grid.
pub(crate) fn ceil_scaled(r: &BigRational, q: u128) -> u128 {
    use num::ToPrimitive;
    debug_assert!(!r.is_negative() && r <= &BigRational::one());
    let num = r.numer() * BigInt::from(q);
    let den = r.denom();
    ((&num + den - BigInt::one()) / den)
        .to_u128()
        .expect("scaled ceiling fits the grid")
}

/// The grid point z/q as an exact rational.
pub(crate) fn grid_point(z: u128, q: u128) -> BigRational {
    BigRational::new(BigInt::from(z), BigInt::from(q))
}

/// A point of [0,1) with an exact rational coordinate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CirclePoint(BigRational);

impl CirclePoint {
    /// Reduce any rational to its representative in [0,1).
    pub fn new(value: BigRational) -> Self {
        CirclePoint(fract(&value))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_value(self) -> BigRational {
        self.0
    }
}

/// R_alpha^k(x) = {x + k alpha}, exact; |k| may exceed the horizon by one
/// (the coding of step `horizon` needs the point at `horizon + 1`).
pub fn rotate(alpha: &Alpha, x: &CirclePoint, k: i64) -> Result<CirclePoint> {
    let mag = k.unsigned_abs();
    if mag > alpha.horizon_j() + 1 {
        return Err(Error::Horizon {
            requested: mag,
            horizon: alpha.horizon_j(),
        });
    }
    let shift = BigRational::from_integer(BigInt::from(k)) * alpha.value();
    Ok(CirclePoint::new(x.value() + shift))
}

/// A half-open arc [start, start+len) on the circle, allowed to wrap through
/// 0. Normal forms: the empty arc is (0, 0) and the full circle is (0, 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleArc {
    start: BigRational,
    len: BigRational,
}

impl CircleArc {
    pub fn new(start: BigRational, len: BigRational) -> Self {
        assert!(
            !len.is_negative() && len <= BigRational::one(),
            "arc length in [0,1]"
        );
        if len.is_zero() || len.is_one() {
            return CircleArc {
                start: BigRational::zero(),
                len,
            };
        }
        CircleArc {
            start: fract(&start),
            len,
        }
    }

    pub fn full() -> Self {
        CircleArc {
            start: BigRational::zero(),
            len: BigRational::one(),
        }
    }

    /// Arc running from `a` counterclockwise to `b` (half-open at b).
    pub fn from_endpoints(a: &BigRational, b: &BigRational) -> Self {
        let a = fract(a);
        let b = fract(b);
        let len = if b > a {
            &b - &a
        } else {
            BigRational::one() - &a + &b
        };
        CircleArc::new(a, len)
    }

    pub fn start(&self) -> &BigRational {
        &self.start
    }

    /// End coordinate in [0,1); equals start for empty and full arcs.
    pub fn end(&self) -> BigRational {
        fract(&(&self.start + &self.len))
    }

    pub fn measure(&self) -> &BigRational {
        &self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len.is_zero()
    }

    pub fn wraps(&self) -> bool {
        &self.start + &self.len > BigRational::one()
    }

    pub fn contains(&self, x: &CirclePoint) -> bool {
        if self.len.is_one() {
            return true;
        }
        let off = fract(&(x.value() - &self.start));
        off < self.len
    }

    /// The arc translated by delta (mod 1).
    pub fn rotated(&self, delta: &BigRational) -> Self {
        if self.len.is_zero() || self.len.is_one() {
            return self.clone();
        }
        CircleArc {
            start: fract(&(&self.start + delta)),
            len: self.len.clone(),
        }
    }

    /// Is `other` a subset of `self` (as subsets of the circle)?
    pub fn contains_arc(&self, other: &CircleArc) -> bool {
        if other.is_empty() || self.len.is_one() {
            return true;
        }
        if other.len > self.len {
            return false;
        }
        let off = fract(&(&other.start - &self.start));
        off + &other.len <= self.len
    }

    /// Split into 1 or 2 linear intervals within [0,1).
    pub fn to_intervals(&self) -> Vec<(BigRational, BigRational)> {
        if self.is_empty() {
            return vec![];
        }
        let end = &self.start + &self.len;
        if end <= BigRational::one() {
            vec![(self.start.clone(), end)]
        } else {
            vec![
                (self.start.clone(), BigRational::one()),
                (BigRational::zero(), fract(&end)),
            ]
        }
    }

    pub fn to_set(&self) -> IntervalSet {
        IntervalSet::from_intervals(self.to_intervals())
    }
}

/// A finite union of disjoint half-open intervals [a,b) with 0 <= a < b <= 1,
/// sorted by left endpoint, adjacent pieces merged.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalSet {
    ivs: Vec<(BigRational, BigRational)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn from_intervals(mut ivs: Vec<(BigRational, BigRational)>) -> Self {
        ivs.retain(|(a, b)| a < b);
        ivs.sort();
        let mut out: Vec<(BigRational, BigRational)> = Vec::with_capacity(ivs.len());
        for (a, b) in ivs {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        IntervalSet { ivs: out }
    }

    pub fn from_arcs<'a>(arcs: impl IntoIterator<Item = &'a CircleArc>) -> Self {
        let mut ivs = Vec::new();
        for arc in arcs {
            ivs.extend(arc.to_intervals());
        }
        IntervalSet::from_intervals(ivs)
    }

    pub fn components(&self) -> &[(BigRational, BigRational)] {
        &self.ivs
    }

    pub fn is_empty(&self) -> bool {
        self.ivs.is_empty()
    }

    pub fn measure(&self) -> BigRational {
        self.ivs.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        // binary search on left endpoints
        let idx = self.ivs.partition_point(|(a, _)| a <= x);
        idx > 0 && x < &self.ivs[idx - 1].1
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut ivs = self.ivs.clone();
        ivs.extend(other.ivs.iter().cloned());
        IntervalSet::from_intervals(ivs)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.ivs.len() && j < other.ivs.len() {
            let (a1, b1) = &self.ivs[i];
            let (a2, b2) = &other.ivs[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if b1 <= b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { ivs: out }
    }

    pub fn subtract(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let mut j = 0;
        for (a, b) in &self.ivs {
            let mut cur = a.clone();
            while j < other.ivs.len() && other.ivs[j].1 <= cur {
                j += 1;
            }
            let mut jj = j;
            while jj < other.ivs.len() && &other.ivs[jj].0 < b {
                let (c, d) = &other.ivs[jj];
                if &cur < c {
                    out.push((cur.clone(), c.min(b).clone()));
                }
                if d >= b {
                    cur = b.clone();
                    break;
                }
                cur = cur.max(d.clone());
                jj += 1;
            }
            if &cur < b {
                out.push((cur, b.clone()));
            }
        }
        IntervalSet { ivs: out }
    }

    /// Map a parameter u in [0,1) to a point of the set, length-uniformly.
    /// Returns None for the empty set.
    pub fn point_at(&self, u: &BigRational) -> Option<BigRational> {
        if self.ivs.is_empty() {
            return None;
        }
        let mut target = u * self.measure();
        for (a, b) in &self.ivs {
            let w = b - a;
            if target < w {
                return Some(a + target);
            }
            target -= w;
        }
        // u == 1 exactly; clamp just inside the last component
        Some(self.ivs.last().unwrap().0.clone())
    }
}
