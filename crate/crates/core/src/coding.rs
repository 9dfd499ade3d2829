//! Orbits of the rotation, Sturmian codings, and the brute-force partition
//! oracle.
//!
//! The oracle side of the library: everything here is computed by direct
//! enumeration of orbit points and atom boundaries, independently of the
//! closed-form target machinery in [`crate::targets`], so the two routes can
//! be checked against each other exactly.

use num::{BigInt, BigRational, One};

use crate::alpha::Alpha;
use crate::circle::{ceil_scaled, fract, grid_point, CircleArc, CirclePoint};
use crate::error::{Error, Result};

/// A finite 0/1 itinerary relative to the partition {[0, alpha), [alpha, 1)}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coding {
    bits: Vec<u8>,
}

impl Coding {
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// ASCII 0/1 rendering, the wire format for codings.
    pub fn as_string(&self) -> String {
        self.bits
            .iter()
            .map(|b| if *b == 0 { '0' } else { '1' })
            .collect()
    }
}

impl std::fmt::Display for Coding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.as_string())
    }
}

/// The coding c_0..c_(len-1) of x: bit i is 0 iff {x + i alpha} lies in
/// [0, alpha). Boundary points go to the interval on their right.
pub fn code(alpha: &Alpha, x: &CirclePoint, len: u64) -> Result<Coding> {
    if len > alpha.horizon_j() + 1 {
        return Err(Error::Horizon {
            requested: len,
            horizon: alpha.horizon_j(),
        });
    }
    let (p, q) = alpha.num_den();
    // {x + i alpha} in [0, alpha)  <=>  {i alpha} in [-x, alpha - x) (mod 1),
    // and {i alpha} = z_i / q exactly.
    let lo = ceil_scaled(&fract(&(-x.value())), q) % q;
    let hi = ceil_scaled(&fract(&(alpha.value() - x.value())), q) % q;
    let width = (hi + q - lo) % q;
    debug_assert!(width > 0);
    let mut bits = Vec::with_capacity(len as usize);
    let mut z: u128 = 0;
    for _ in 0..len {
        let inside = (z + q - lo) % q < width;
        bits.push(if inside { 0 } else { 1 });
        z += p;
        if z >= q {
            z -= q;
        }
    }
    Ok(Coding { bits })
}

/// The partition of [0,1) whose atoms are the nonempty cylinder sets of
/// length j+1: boundaries { {-k alpha} : -1 <= k <= j }, hence j+2 atoms.
#[derive(Debug, Clone)]
pub struct AtomPartition {
    pub j: u64,
    pub boundaries: Vec<BigRational>,
    pub atoms: Vec<CircleArc>,
}

impl AtomPartition {
    /// Coding of each atom, computed at its midpoint.
    pub fn codings(&self, alpha: &Alpha) -> Result<Vec<Coding>> {
        self.atoms
            .iter()
            .map(|a| {
                let mid = CirclePoint::new(
                    a.start() + a.measure() / BigRational::from_integer(BigInt::from(2)),
                );
                code(alpha, &mid, self.j + 1)
            })
            .collect()
    }
}

fn boundary_zs(alpha: &Alpha, j: i64) -> Vec<u128> {
    let mut zs: Vec<u128> = (-1..=j).map(|k| alpha.orbit_z(-k)).collect();
    zs.sort_unstable();
    zs.dedup();
    zs
}

pub fn atoms(alpha: &Alpha, j: u64) -> Result<AtomPartition> {
    if j + 1 > alpha.horizon_j() {
        return Err(Error::Horizon {
            requested: j + 1,
            horizon: alpha.horizon_j(),
        });
    }
    let (_, q) = alpha.num_den();
    let zs = boundary_zs(alpha, j as i64);
    debug_assert_eq!(
        zs.len() as u64,
        j + 2,
        "boundaries are distinct below the horizon"
    );
    let boundaries: Vec<BigRational> = zs.iter().map(|&z| grid_point(z, q)).collect();
    let mut atoms = Vec::with_capacity(zs.len());
    for w in zs.windows(2) {
        atoms.push(CircleArc::from_endpoints(
            &grid_point(w[0], q),
            &grid_point(w[1], q),
        ));
    }
    // 0 is always a boundary (k = 0), so the final atom never wraps
    atoms.push(CircleArc::from_endpoints(
        &grid_point(*zs.last().unwrap(), q),
        &BigRational::one(),
    ));
    Ok(AtomPartition {
        j,
        boundaries,
        atoms,
    })
}

/// The unique atom of `atoms(alpha, j)` containing the new boundary point
/// {-(j+1) alpha}: the points whose coding c_0..c_j is right special.
pub fn undetermined_atom(alpha: &Alpha, j: u64) -> Result<CircleArc> {
    if j + 1 > alpha.horizon_j() {
        return Err(Error::Horizon {
            requested: j + 1,
            horizon: alpha.horizon_j(),
        });
    }
    let (_, q) = alpha.num_den();
    let zs = boundary_zs(alpha, j as i64);
    let w = alpha.orbit_z(-(j as i64) - 1);
    atom_around(&zs, w, q)
}

fn atom_around(sorted_zs: &[u128], w: u128, q: u128) -> Result<CircleArc> {
    match sorted_zs.binary_search(&w) {
        Ok(_) => Err(Error::Precondition(
            "orbit closes up: the new boundary point already exists (rational alpha at its horizon)"
                .into(),
        )),
        Err(idx) => {
            let lo = if idx == 0 { *sorted_zs.last().unwrap() } else { sorted_zs[idx - 1] };
            let hi = if idx == sorted_zs.len() { sorted_zs[0] } else { sorted_zs[idx] };
            Ok(CircleArc::from_endpoints(&grid_point(lo, q), &grid_point(hi, q)))
        }
    }
}

/// Brute-force route to the target set V_j: the undetermined atom two coding
/// steps earlier, carried back two rotation steps. V_1 is the full circle.
pub fn oracle_v(alpha: &Alpha, j: u64) -> Result<CircleArc> {
    if j == 0 {
        return Err(Error::BelowFirstIndex { j: 0, first: 1 });
    }
    if j + 1 > alpha.horizon_j() {
        return Err(Error::Horizon {
            requested: j + 1,
            horizon: alpha.horizon_j(),
        });
    }
    if j == 1 {
        return Ok(CircleArc::full());
    }
    let (_, q) = alpha.num_den();
    let zs = boundary_zs(alpha, j as i64 - 2);
    let w = alpha.orbit_z(-(j as i64) + 1);
    let atom = atom_around(&zs, w, q)?;
    let back_two = fract(&(-BigRational::from_integer(BigInt::from(2)) * alpha.value()));
    Ok(atom.rotated(&back_two))
}

/// The right special word of length j+1: the coding of the undetermined atom.
pub fn right_special_word(alpha: &Alpha, j: u64) -> Result<Coding> {
    let atom = undetermined_atom(alpha, j)?;
    let mid = CirclePoint::new(
        atom.start() + atom.measure() / BigRational::from_integer(BigInt::from(2)),
    );
    code(alpha, &mid, j + 1)
}

/// Incremental oracle: walks j upward keeping the sorted boundary set, so a
/// whole range of undetermined atoms costs O(j) inserts instead of O(j^2)
/// rebuilds.
pub struct OracleSweep<'a> {
    alpha: &'a Alpha,
    q: u128,
    sorted_zs: Vec<u128>,
    /// step of the atom partition currently represented
    jj: i64,
}

impl<'a> OracleSweep<'a> {
    pub fn new(alpha: &'a Alpha) -> Self {
        let (_, q) = alpha.num_den();
        // step -1: the single boundary {alpha}
        let sorted_zs = vec![alpha.orbit_z(1)];
        OracleSweep {
            alpha,
            q,
            sorted_zs,
            jj: -1,
        }
    }

    fn advance_to(&mut self, jj: i64) -> Result<()> {
        while self.jj < jj {
            let next = self.jj + 1;
            let z = self.alpha.orbit_z(-next);
            match self.sorted_zs.binary_search(&z) {
                Ok(_) => {
                    return Err(Error::Precondition(
                        "orbit closes up while advancing the oracle".into(),
                    ))
                }
                Err(idx) => self.sorted_zs.insert(idx, z),
            }
            self.jj = next;
        }
        Ok(())
    }

    /// The paper-indexed target V_j by pure enumeration; j may be queried in
    /// any nondecreasing order.
    pub fn v(&mut self, j: u64) -> Result<CircleArc> {
        if j == 0 {
            return Err(Error::BelowFirstIndex { j: 0, first: 1 });
        }
        if j + 1 > self.alpha.horizon_j() {
            return Err(Error::Horizon {
                requested: j + 1,
                horizon: self.alpha.horizon_j(),
            });
        }
        if j == 1 {
            return Ok(CircleArc::full());
        }
        self.advance_to(j as i64 - 2)?;
        let w = self.alpha.orbit_z(-(j as i64) + 1);
        let atom = atom_around(&self.sorted_zs, w, self.q)?;
        let back_two = fract(&(-BigRational::from_integer(BigInt::from(2)) * self.alpha.value()));
        Ok(atom.rotated(&back_two))
    }
}
