//! Python bindings: the main types and operations of the exact target-set
//! library. Rationals cross the boundary as (numerator, denominator) tuples
//! of Python ints, ready for `fractions.Fraction`.

use num::{BigInt, BigRational};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sturmtargets::alpha::{Alpha, AlphaSpec, DEFAULT_TAIL};
use sturmtargets::circle::{CircleArc, CirclePoint};
use sturmtargets::error::Error;
use sturmtargets::{coding, experiments, targets};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type Rat = (BigInt, BigInt);

fn rat_out(r: &BigRational) -> Rat {
    (r.numer().clone(), r.denom().clone())
}

fn rat_in(pair: Rat) -> PyResult<BigRational> {
    use num::Zero;
    if pair.1.is_zero() {
        return Err(PyValueError::new_err("zero denominator"));
    }
    Ok(BigRational::new(pair.0, pair.1))
}

fn arc_out(a: &CircleArc) -> (Rat, Rat) {
    (rat_out(a.start()), rat_out(a.measure()))
}

/// An exactly represented rotation number with a validity horizon.
#[pyclass(name = "Alpha", module = "sturmtargets_py", frozen)]
struct PyAlpha {
    inner: Alpha,
}

#[pymethods]
impl PyAlpha {
    /// Build from a spec string: "cf:1,1,2" | "rat:3/7" | "preset:golden-40".
    #[new]
    #[pyo3(signature = (spec, tail = DEFAULT_TAIL))]
    fn new(spec: &str, tail: u64) -> PyResult<Self> {
        let spec: AlphaSpec = spec.parse().map_err(err)?;
        Ok(PyAlpha {
            inner: Alpha::from_spec_with_tail(&spec, tail).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (elements, tail = DEFAULT_TAIL))]
    fn from_prefix(elements: Vec<u64>, tail: u64) -> PyResult<Self> {
        Ok(PyAlpha {
            inner: Alpha::from_prefix(elements, tail).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_rational(p: BigInt, q: BigInt) -> PyResult<Self> {
        Ok(PyAlpha {
            inner: Alpha::from_rational(p, q).map_err(err)?,
        })
    }

    /// Deterministic random alpha with n prefix elements.
    #[staticmethod]
    #[pyo3(signature = (seed, n_elements, index = 0))]
    fn sample(seed: u64, n_elements: usize, index: u64) -> PyResult<Self> {
        Ok(PyAlpha {
            inner: sturmtargets::sampling::sample_alpha_indexed(seed, index, n_elements)
                .map_err(err)?,
        })
    }

    #[getter]
    fn elements(&self) -> Vec<u64> {
        self.inner.cf().elements().to_vec()
    }

    #[getter]
    fn tail(&self) -> Option<u64> {
        self.inner.tail()
    }

    #[getter]
    fn horizon_j(&self) -> u64 {
        self.inner.horizon_j()
    }

    #[getter]
    fn horizon_k(&self) -> usize {
        self.inner.horizon_k()
    }

    /// Exact value of the proxy as (num, den).
    fn value(&self) -> Rat {
        rat_out(self.inner.value())
    }

    /// Denominator q_k of the k-th convergent (q_{-1} = 0).
    fn q(&self, k: i64) -> PyResult<u64> {
        if k > self.inner.horizon_k() as i64 {
            return Err(PyValueError::new_err("k beyond horizon"));
        }
        Ok(self.inner.q(k))
    }

    /// theta_k = |q_k alpha - p_k| as (num, den); theta_{-1} = 1.
    fn theta(&self, k: i64) -> PyResult<Rat> {
        Ok(rat_out(&self.inner.theta(k).map_err(err)?))
    }

    /// Distance of t*alpha to the nearest integer as (num, den).
    fn nearest_distance(&self, t: u64) -> PyResult<Rat> {
        Ok(rat_out(&self.inner.nearest_distance(t).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "Alpha(elements={:?}, tail={:?}, horizon_j={})",
            self.inner.cf().elements(),
            self.inner.tail(),
            self.inner.horizon_j()
        )
    }
}

/// {x + k alpha} as (num, den).
#[pyfunction]
fn rotate(alpha: &PyAlpha, x: Rat, k: i64) -> PyResult<Rat> {
    let p = CirclePoint::new(rat_in(x)?);
    Ok(rat_out(
        sturmtargets::circle::rotate(&alpha.inner, &p, k)
            .map_err(err)?
            .value(),
    ))
}

/// The 0/1 coding of x up to length `len`, as a string.
#[pyfunction]
fn code(alpha: &PyAlpha, x: Rat, len: u64) -> PyResult<String> {
    let p = CirclePoint::new(rat_in(x)?);
    Ok(coding::code(&alpha.inner, &p, len)
        .map_err(err)?
        .as_string())
}

/// The coding partition at step j: list of (start, length) arc pairs.
#[pyfunction]
fn atoms(alpha: &PyAlpha, j: u64) -> PyResult<Vec<(Rat, Rat)>> {
    Ok(coding::atoms(&alpha.inner, j)
        .map_err(err)?
        .atoms
        .iter()
        .map(arc_out)
        .collect())
}

/// The atom whose coding stays undetermined one more step.
#[pyfunction]
fn undetermined_atom(alpha: &PyAlpha, j: u64) -> PyResult<(Rat, Rat)> {
    Ok(arc_out(
        &coding::undetermined_atom(&alpha.inner, j).map_err(err)?,
    ))
}

/// The right special word of length j+1.
#[pyfunction]
fn right_special_word(alpha: &PyAlpha, j: u64) -> PyResult<String> {
    Ok(coding::right_special_word(&alpha.inner, j)
        .map_err(err)?
        .as_string())
}

/// Brute-force route to the target V_j as a (start, length) arc.
#[pyfunction]
fn oracle_v(alpha: &PyAlpha, j: u64) -> PyResult<(Rat, Rat)> {
    Ok(arc_out(&coding::oracle_v(&alpha.inner, j).map_err(err)?))
}

/// Closed-form V_j as a (start, length) arc.
#[pyfunction]
fn v_interval(alpha: &PyAlpha, j: u64) -> PyResult<(Rat, Rat)> {
    Ok(arc_out(&targets::v_interval(&alpha.inner, j).map_err(err)?))
}

/// The (r, s, t) decomposition of a time index.
#[pyfunction]
fn rst(alpha: &PyAlpha, j: u64) -> PyResult<(u64, u64, u64)> {
    let d = targets::rst(&alpha.inner, j).map_err(err)?;
    Ok((d.r, d.s, d.t))
}

/// lambda(V_j) as (num, den).
#[pyfunction]
fn measure_v(alpha: &PyAlpha, j: u64) -> PyResult<Rat> {
    Ok(rat_out(&targets::measure_v(&alpha.inner, j).map_err(err)?))
}

/// Exact sum of lambda(V_j) for 1 <= j <= n.
#[pyfunction]
fn measure_sum(alpha: &PyAlpha, n: u64) -> PyResult<Rat> {
    Ok(rat_out(
        &targets::measure_sum(&alpha.inner, n).map_err(err)?,
    ))
}

/// (count, measure_sum) of the first n targets for the point x.
#[pyfunction]
fn count_undetermined(alpha: &PyAlpha, x: Rat, n: u64) -> PyResult<(u64, Rat)> {
    let p = CirclePoint::new(rat_in(x)?);
    let rep = targets::count_undetermined(&alpha.inner, &p, n).map_err(err)?;
    Ok((rep.count, rat_out(&rep.measure_sum)))
}

/// The canonical time blocks J^i_b inside [1, up_to] as (i, b, lo, hi).
#[pyfunction]
fn j_intervals(alpha: &PyAlpha, up_to: u64) -> PyResult<Vec<(u64, u64, u64, u64)>> {
    Ok(targets::j_intervals(&alpha.inner, up_to)
        .map_err(err)?
        .into_iter()
        .map(|b| (b.i, b.b, b.lo, b.hi))
        .collect())
}

/// Exact integral of the block indicator sum h_i.
#[pyfunction]
fn h_integral(alpha: &PyAlpha, i: u64) -> PyResult<Rat> {
    Ok(rat_out(
        &experiments::h_integral(&alpha.inner, i)
            .map_err(err)?
            .integral,
    ))
}

/// Exact integral of h_i h_j with its bound check:
/// (value, lower, upper, vacuous, within_bounds).
#[pyfunction]
fn h_pair_integral(alpha: &PyAlpha, i: u64, j: u64) -> PyResult<(Rat, Rat, Rat, bool, bool)> {
    let rep = experiments::h_pair_integral(&alpha.inner, i, j).map_err(err)?;
    Ok((
        rat_out(&rep.value),
        rat_out(&rep.lower),
        rat_out(&rep.upper),
        rep.vacuous,
        rep.within_bounds,
    ))
}

/// Count of orbit preimages of 0 in [c, d) over J^i_b:
/// (count, expected, bound_ok).
#[pyfunction]
fn kesten_count(alpha: &PyAlpha, c: Rat, d: Rat, i: u64, b: u64) -> PyResult<(u64, Rat, bool)> {
    let arc = CircleArc::from_endpoints(&rat_in(c)?, &rat_in(d)?);
    let rep = experiments::kesten_count(&alpha.inner, &arc, i, b).map_err(err)?;
    Ok((rep.count, rat_out(&rep.expected), rep.bound_ok))
}

/// lambda(V_k ∩ union over J^i_b) with its multiplicative bounds:
/// (intersection, lower, upper, vacuous, within_bounds).
#[pyfunction]
fn quasi_independence(
    alpha: &PyAlpha,
    k: u64,
    i: u64,
    b: u64,
) -> PyResult<(Rat, Rat, Rat, bool, bool)> {
    let rep = experiments::quasi_independence_check(&alpha.inner, k, i, b).map_err(err)?;
    Ok((
        rat_out(&rep.intersection),
        rat_out(&rep.lower),
        rat_out(&rep.upper),
        rep.vacuous,
        rep.within_bounds,
    ))
}

/// Monte Carlo estimate of lambda(W_n): (estimate, hits, skipped, ci99).
#[pyfunction]
fn monte_carlo_wn(n: usize, samples: u64, seed: u64) -> PyResult<(f64, u64, u64, f64)> {
    let est = experiments::monte_carlo_wn(n, samples, seed)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok((est.estimate, est.hits, est.skipped, est.ci99_half_width))
}

/// Fraction of sampled alphas with a dominant element a_m > C * prior sum.
#[pyfunction]
fn find_large_element(seed: u64, c: f64, n_max: usize, samples: u64) -> PyResult<f64> {
    Ok(experiments::find_large_element(seed, c, n_max, samples)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?
        .fraction)
}

/// Theorem A log-ratio series for one point: list of (n, count, ratio|None).
#[pyfunction]
fn theorem_a_ratios(
    alpha: &PyAlpha,
    x: Rat,
    checkpoints: Vec<u64>,
) -> PyResult<Vec<(u64, u64, Option<f64>)>> {
    let p = CirclePoint::new(rat_in(x)?);
    let rep = experiments::theorem_a_series(&alpha.inner, &[p], &checkpoints).map_err(err)?;
    Ok(rep.samples[0]
        .points
        .iter()
        .map(|pt| (pt.n, pt.count, pt.ratio))
        .collect())
}

/// Theorem B gap experiment summary:
/// (lambda_x, lambda_y, d, min_gap, all_pairs_pass).
#[pyfunction]
#[pyo3(signature = (alpha, m, rho, sigma, c, samples = 10, seed = 1))]
fn theorem_b_gap(
    alpha: &PyAlpha,
    m: usize,
    rho: Rat,
    sigma: Rat,
    c: Rat,
    samples: usize,
    seed: u64,
) -> PyResult<(Rat, Rat, Rat, Rat, bool)> {
    let cfg = experiments::ThmBConfig {
        m,
        rho: rat_in(rho)?,
        sigma: rat_in(sigma)?,
        c: rat_in(c)?,
    };
    let rep = experiments::theorem_b_experiment(&alpha.inner, &cfg, samples, seed)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok((
        rat_out(&rep.lambda_x),
        rat_out(&rep.lambda_y),
        rat_out(&rep.gap_lower),
        rat_out(&rep.min_gap),
        rep.all_pairs_pass,
    ))
}

/// The engineered prefix for the gap experiment: k ones, then the dominant
/// element, then a closing one.
#[pyfunction]
fn gap_prefix(k: usize, a_big: u64) -> Vec<u64> {
    experiments::gap_prefix(k, a_big)
}

#[pymodule]
fn sturmtargets_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlpha>()?;
    m.add_function(wrap_pyfunction!(rotate, m)?)?;
    m.add_function(wrap_pyfunction!(code, m)?)?;
    m.add_function(wrap_pyfunction!(atoms, m)?)?;
    m.add_function(wrap_pyfunction!(undetermined_atom, m)?)?;
    m.add_function(wrap_pyfunction!(right_special_word, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_v, m)?)?;
    m.add_function(wrap_pyfunction!(v_interval, m)?)?;
    m.add_function(wrap_pyfunction!(rst, m)?)?;
    m.add_function(wrap_pyfunction!(measure_v, m)?)?;
    m.add_function(wrap_pyfunction!(measure_sum, m)?)?;
    m.add_function(wrap_pyfunction!(count_undetermined, m)?)?;
    m.add_function(wrap_pyfunction!(j_intervals, m)?)?;
    m.add_function(wrap_pyfunction!(h_integral, m)?)?;
    m.add_function(wrap_pyfunction!(h_pair_integral, m)?)?;
    m.add_function(wrap_pyfunction!(kesten_count, m)?)?;
    m.add_function(wrap_pyfunction!(quasi_independence, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo_wn, m)?)?;
    m.add_function(wrap_pyfunction!(find_large_element, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_a_ratios, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_b_gap, m)?)?;
    m.add_function(wrap_pyfunction!(gap_prefix, m)?)?;
    Ok(())
}
