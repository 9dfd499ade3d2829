//! Continued fractions and their convergents.
//!
//! Everything here works on the canonical expansion `[0; a_1, a_2, ...]` of a
//! number in (0,1): all elements are >= 1 and, for rationals, the last element
//! is >= 2 (except for the one-element expansion `[0; 1]` of... nothing: 1 is
//! excluded, so the canonical form is always reachable).

use num::{BigInt, BigRational, Integer, One, Zero};

use crate::error::{Error, Result};

/// Partial quotients `a_1..a_n` of a number in (0,1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    elements: Vec<u64>,
}

impl ContinuedFraction {
    pub fn new(elements: Vec<u64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyPrefix);
        }
        if let Some(&bad) = elements.iter().find(|&&a| a == 0) {
            return Err(Error::BadElement(bad));
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Exact value of the finite expansion.
    pub fn value(&self) -> BigRational {
        value_with_tail(&self.elements, None)
    }
}

/// One row of the convergent table: `p_k / q_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub k: usize,
    pub p: BigInt,
    pub q: BigInt,
}

/// Euclidean expansion of a reduced rational p/q in (0,1), canonical form
/// (last element >= 2 when the expansion has length >= 2; `[0;1]` cannot occur
/// because p/q < 1).
pub fn cf_of_rational(p: &BigInt, q: &BigInt) -> Result<ContinuedFraction> {
    if p <= &BigInt::zero() || p >= q {
        return Err(Error::BadRational(format!("{p}/{q}")));
    }
    if p.gcd(q) != BigInt::one() {
        return Err(Error::BadRational(format!("{p}/{q} is not reduced")));
    }
    let mut elements = Vec::new();
    // Expand 1/(p/q) = q/p by the division algorithm.
    let mut a = q.clone();
    let mut b = p.clone();
    while !b.is_zero() {
        let (d, r) = a.div_rem(&b);
        let d: u64 = d
            .to_biguint()
            .and_then(|d| u64::try_from(&d).ok())
            .ok_or(Error::ProxyTooLarge)?;
        elements.push(d);
        a = b;
        b = r;
    }
    // Euclid can end with a trailing 1; fold it into the previous element.
    if elements.len() >= 2 && *elements.last().unwrap() == 1 {
        elements.pop();
        *elements.last_mut().unwrap() += 1;
    }
    ContinuedFraction::new(elements)
}

/// Exact value of `[0; a_1..a_n(, tail)]`.
pub fn value_with_tail(elements: &[u64], tail: Option<u64>) -> BigRational {
    let mut v = BigRational::zero();
    let chain = tail.iter().copied().chain(elements.iter().rev().copied());
    for a in chain {
        v = BigRational::from_integer(BigInt::from(a)) + v;
        v = v.recip();
    }
    v
}

/// Full convergent table `k = 0..n` for the prefix, via the standard
/// recurrence `q_{k+1} = a_{k+1} q_k + q_{k-1}` (and the same for p).
pub fn convergents(cf: &ContinuedFraction) -> Vec<Convergent> {
    convergents_of(cf.elements())
}

pub fn convergents_of(elements: &[u64]) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(elements.len() + 1);
    // (p_{-1}, q_{-1}) = (1, 0), (p_0, q_0) = (0, 1)
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    out.push(Convergent {
        k: 0,
        p: p.clone(),
        q: q.clone(),
    });
    for (idx, &a) in elements.iter().enumerate() {
        let a = BigInt::from(a);
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Convergent {
            k: idx + 1,
            p: p.clone(),
            q: q.clone(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::traits::FromPrimitive;

    fn cf(p: i64, q: i64) -> Vec<u64> {
        cf_of_rational(&BigInt::from(p), &BigInt::from(q))
            .unwrap()
            .elements()
            .to_vec()
    }

    #[test]
    fn euclid_examples() {
        assert_eq!(cf(3, 7), vec![2, 3]);
        assert_eq!(cf(1, 2), vec![2]);
        assert_eq!(cf(55, 89), vec![1, 1, 1, 1, 1, 1, 1, 1, 2]);
        assert_eq!(cf(2, 5), vec![2, 2]);
    }

    #[test]
    fn euclid_rejects_bad_input() {
        assert!(cf_of_rational(&BigInt::from(0), &BigInt::from(5)).is_err());
        assert!(cf_of_rational(&BigInt::from(7), &BigInt::from(5)).is_err());
        assert!(cf_of_rational(&BigInt::from(2), &BigInt::from(4)).is_err());
    }

    #[test]
    fn convergent_table() {
        let cf = ContinuedFraction::new(vec![2, 3]).unwrap();
        let conv = convergents(&cf);
        let rows: Vec<(i64, i64)> = conv
            .iter()
            .map(|c| (i64::try_from(&c.p).unwrap(), i64::try_from(&c.q).unwrap()))
            .collect();
        assert_eq!(rows, vec![(0, 1), (1, 2), (3, 7)]);
    }

    #[test]
    fn fibonacci_denominators() {
        let ones = ContinuedFraction::new(vec![1; 10]).unwrap();
        let conv = convergents(&ones);
        let qs: Vec<i64> = conv.iter().map(|c| i64::try_from(&c.q).unwrap()).collect();
        assert_eq!(qs[..6], [1, 1, 2, 3, 5, 8]);
        assert_eq!(qs[10], 89);
        // cross-check against the Euclidean direction: [0; 1 x 10] = 55/89,
        // whose canonical expansion folds the trailing 1
        assert_eq!(cf(55, 89), vec![1, 1, 1, 1, 1, 1, 1, 1, 2]);
        let ones = ContinuedFraction::new(vec![1; 10]).unwrap();
        assert_eq!(
            ones.value(),
            BigRational::new(BigInt::from(55), BigInt::from(89))
        );
    }

    #[test]
    fn value_round_trip_exhaustive() {
        // value_of_cf(cf_of_rational(p,q)) == p/q for all reduced p/q, q <= 1000
        for q in 2i64..=1000 {
            for p in 1..q {
                if num::integer::gcd(p, q) != 1 {
                    continue;
                }
                let cf = cf_of_rational(&BigInt::from(p), &BigInt::from(q)).unwrap();
                let v = cf.value();
                assert_eq!(
                    v,
                    BigRational::from_i64(p).unwrap() / BigRational::from_i64(q).unwrap()
                );
                // canonical: last element >= 2 when length >= 2
                if cf.len() >= 2 {
                    assert!(*cf.elements().last().unwrap() >= 2);
                }
            }
        }
    }

    #[test]
    fn q_growth_invariants() {
        let cf = ContinuedFraction::new(vec![1, 2, 1, 1, 3, 1, 5, 1, 1, 2]).unwrap();
        let conv = convergents(&cf);
        for k in 2..conv.len() {
            assert!(conv[k].q > conv[k - 1].q, "q strictly increasing from k=2");
        }
        for k in 1..conv.len().saturating_sub(2) {
            assert!(
                conv[k + 2].q > (BigInt::from(2) * &conv[k].q),
                "q_(k+2) > 2 q_k for k >= 1"
            );
        }
    }
}
