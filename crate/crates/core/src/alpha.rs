//! The rotation number and its validity horizon.
//!
//! An [`Alpha`] is an exactly represented rational proxy `[0; a_1..a_n, M]`
//! for any irrational whose expansion starts with `a_1..a_n`. Every quantity
//! the library computes for orbit times `j <= horizon_j` depends only on the
//! shared prefix, so the proxy reproduces it exactly. Requests past the
//! horizon are errors, never approximations.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::cf::{cf_of_rational, convergents_of, value_with_tail, ContinuedFraction, Convergent};
use crate::error::{Error, Result};

/// Default appended tail element: large enough that the proxy's own
/// periodicity stays far beyond the horizon.
pub const DEFAULT_TAIL: u64 = 1_000_000;

/// How an alpha is requested; round-trips through its canonical string form
/// `cf:1,1,2` | `rat:3/7` | `preset:golden-40`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaSpec {
    Cf(Vec<u64>),
    Rational(BigInt, BigInt),
    Preset(String),
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSpec::Cf(elems) => {
                let parts: Vec<String> = elems.iter().map(|a| a.to_string()).collect();
                write!(f, "cf:{}", parts.join(","))
            }
            AlphaSpec::Rational(p, q) => write!(f, "rat:{p}/{q}"),
            AlphaSpec::Preset(name) => write!(f, "preset:{name}"),
        }
    }
}

impl FromStr for AlphaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::BadSpec(format!("expected kind:payload, got `{s}`")))?;
        match kind {
            "cf" => {
                let elems: std::result::Result<Vec<u64>, _> =
                    rest.split(',').map(|t| t.trim().parse::<u64>()).collect();
                let elems = elems.map_err(|_| Error::BadSpec(format!("bad cf list `{rest}`")))?;
                Ok(AlphaSpec::Cf(elems))
            }
            "rat" => {
                let (p, q) = rest
                    .split_once('/')
                    .ok_or_else(|| Error::BadSpec(format!("bad rational `{rest}`")))?;
                let p = BigInt::from_str(p.trim())
                    .map_err(|_| Error::BadSpec(format!("bad numerator `{p}`")))?;
                let q = BigInt::from_str(q.trim())
                    .map_err(|_| Error::BadSpec(format!("bad denominator `{q}`")))?;
                Ok(AlphaSpec::Rational(p, q))
            }
            "preset" => Ok(AlphaSpec::Preset(rest.to_string())),
            other => Err(Error::BadSpec(format!("unknown alpha kind `{other}`"))),
        }
    }
}

/// An exactly represented rotation number with a validity horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alpha {
    value: BigRational,
    cf: ContinuedFraction,
    tail: Option<u64>,
    convergents: Vec<Convergent>,
    /// theta_k = |q_k alpha - p_k| for k = 0..n (theta_{-1} = 1 is implicit).
    thetas: Vec<BigRational>,
    /// q_k as machine integers (guaranteed to fit by construction).
    q_small: Vec<u64>,
    horizon_j: u64,
    /// numerator / denominator of the proxy value as machine integers
    num: u128,
    den: u128,
    /// theta_k * den, an exact integer
    theta_scaled: Vec<u128>,
}

impl Alpha {
    /// Build from a CF prefix plus an explicit tail element.
    pub fn from_prefix(elements: Vec<u64>, tail: u64) -> Result<Self> {
        if tail < 2 {
            return Err(Error::BadTail(tail));
        }
        let cf = ContinuedFraction::new(elements)?;
        let value = value_with_tail(cf.elements(), Some(tail));
        Self::assemble(value, cf, Some(tail))
    }

    /// Build from an exact rational in (0,1); the expansion itself is the prefix.
    pub fn from_rational(p: BigInt, q: BigInt) -> Result<Self> {
        let cf = cf_of_rational(&p, &q)?;
        let value = BigRational::new(p, q);
        Self::assemble(value, cf, None)
    }

    /// Named presets; `golden-<n>` is n ones.
    pub fn preset(name: &str) -> Result<Self> {
        if let Some(n) = name.strip_prefix("golden-") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::BadSpec(format!("bad preset `{name}`")))?;
            if n == 0 {
                return Err(Error::EmptyPrefix);
            }
            return Self::from_prefix(vec![1; n], DEFAULT_TAIL);
        }
        Err(Error::BadSpec(format!("unknown preset `{name}`")))
    }

    pub fn from_spec(spec: &AlphaSpec) -> Result<Self> {
        Self::from_spec_with_tail(spec, DEFAULT_TAIL)
    }

    pub fn from_spec_with_tail(spec: &AlphaSpec, tail: u64) -> Result<Self> {
        match spec {
            AlphaSpec::Cf(elems) => Self::from_prefix(elems.clone(), tail),
            AlphaSpec::Rational(p, q) => Self::from_rational(p.clone(), q.clone()),
            AlphaSpec::Preset(name) => Self::preset(name),
        }
    }

    fn assemble(value: BigRational, cf: ContinuedFraction, tail: Option<u64>) -> Result<Self> {
        let convergents = convergents_of(cf.elements());
        let n = cf.len();
        let den_big = value.denom().clone();
        // The sweep engine works on integers mod den via i128 floor sums;
        // den < 2^63 keeps every intermediate product in range.
        let den = den_big
            .to_u128()
            .filter(|&d| d < (1u128 << 63))
            .ok_or(Error::ProxyTooLarge)?;
        let num = value.numer().to_u128().ok_or(Error::ProxyTooLarge)?;
        let horizon_j = (&convergents[n].q - BigInt::one())
            .to_u64()
            .ok_or(Error::ProxyTooLarge)?;
        let q_small: Vec<u64> = convergents
            .iter()
            .map(|c| c.q.to_u64().ok_or(Error::ProxyTooLarge))
            .collect::<Result<_>>()?;
        let mut thetas = Vec::with_capacity(n + 1);
        let mut theta_scaled = Vec::with_capacity(n + 1);
        for (k, c) in convergents.iter().enumerate() {
            let signed = BigRational::from_integer(c.q.clone()) * &value
                - BigRational::from_integer(c.p.clone());
            let err = signed.abs();
            // sign pattern: q_k alpha - p_k has sign (-1)^k while theta_k > 0
            debug_assert!(err.is_zero() || (signed.is_positive() == (k % 2 == 0)));
            let scaled = (err.numer() * &den_big / err.denom())
                .to_u128()
                .ok_or(Error::ProxyTooLarge)?;
            debug_assert_eq!(&(err.numer() * &den_big) % err.denom(), BigInt::zero());
            thetas.push(err);
            theta_scaled.push(scaled);
        }
        Ok(Self {
            value,
            cf,
            tail,
            convergents,
            thetas,
            q_small,
            horizon_j,
            num,
            den,
            theta_scaled,
        })
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn cf(&self) -> &ContinuedFraction {
        &self.cf
    }

    pub fn tail(&self) -> Option<u64> {
        self.tail
    }

    pub fn convergents(&self) -> &[Convergent] {
        &self.convergents
    }

    /// Largest usable orbit time (`q_n - 1`).
    pub fn horizon_j(&self) -> u64 {
        self.horizon_j
    }

    /// Largest usable convergent index (the prefix length n).
    pub fn horizon_k(&self) -> usize {
        self.cf.len()
    }

    /// `a_{k}` for 1 <= k <= n.
    pub fn element(&self, k: usize) -> Option<u64> {
        (k >= 1)
            .then(|| self.cf.elements().get(k - 1).copied())
            .flatten()
    }

    /// `q_k` as a machine integer; `q_{-1} = 0` by convention (k as i64).
    pub fn q(&self, k: i64) -> u64 {
        if k < 0 {
            0
        } else {
            self.q_small[k as usize]
        }
    }

    /// theta_k = |q_k alpha - p_k| exactly; theta_{-1} = 1 by convention.
    ///
    /// Note theta_0 = alpha (the convergent p_0 = 0 is not the nearest integer
    /// when alpha > 1/2); for k >= 1 this equals the nearest-integer distance
    /// of q_k alpha.
    pub fn theta(&self, k: i64) -> Result<BigRational> {
        if k == -1 {
            return Ok(BigRational::one());
        }
        let k = k as usize;
        if k > self.horizon_k() {
            return Err(Error::ConvergentHorizon {
                requested: k,
                horizon: self.horizon_k(),
            });
        }
        Ok(self.thetas[k].clone())
    }

    /// theta_k * den as an exact integer; theta_{-1} * den = den.
    pub(crate) fn theta_scaled(&self, k: i64) -> u128 {
        if k == -1 {
            self.den
        } else {
            self.theta_scaled[k as usize]
        }
    }

    pub(crate) fn num_den(&self) -> (u128, u128) {
        (self.num, self.den)
    }

    /// The orbit point {t alpha} on the 1/den grid: (t * num) mod den.
    pub(crate) fn orbit_z(&self, t: i64) -> u128 {
        let q = self.den as i128;
        let t = (t as i128).rem_euclid(q) as u128;
        t * self.num % self.den
    }

    /// Distance from t*alpha to the nearest integer, exactly.
    pub fn nearest_distance(&self, t: u64) -> Result<BigRational> {
        if t > self.horizon_j + 1 {
            return Err(Error::Horizon {
                requested: t,
                horizon: self.horizon_j,
            });
        }
        let x = crate::circle::fract(&(BigRational::from_integer(BigInt::from(t)) * &self.value));
        let one_minus = BigRational::one() - &x;
        Ok(x.min(one_minus))
    }

    /// First index with the full (r, s, t) decomposition available: q_1 = a_1.
    pub fn first_target_index(&self) -> u64 {
        self.q(1)
    }
}
