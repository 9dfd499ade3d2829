//! Acceptance suite: the exact-equivalence and reproduction criteria, one
//! test per criterion, each printing a pass/fail line. Criterion 8
//! (byte determinism of the CLI payloads) lives with the CLI crate.

use num::{BigInt, BigRational, One, ToPrimitive};

use sturmtargets::alpha::Alpha;
use sturmtargets::circle::CirclePoint;
use sturmtargets::coding::OracleSweep;
use sturmtargets::experiments::{
    self, median_abs_ratio_gap, theorem_a_experiment, theorem_b_experiment, ThmBConfig,
    VerifyConfig,
};
use sturmtargets::sampling::sample_alpha_indexed;
use sturmtargets::targets::{measure_sums_at, v_interval};
use sturmtargets::DEFAULT_TAIL;

const ACCEPTANCE_SEED: u64 = 1;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// The alpha set shared by criteria 1-4: golden-40, thirty 2s, thirty of the
/// 1,2,3 cycle, and twenty sampled prefixes.
fn alpha_set() -> Vec<(String, Alpha)> {
    let mut set = vec![
        (
            "preset:golden-40".to_string(),
            Alpha::preset("golden-40").unwrap(),
        ),
        (
            "cf:2x30".to_string(),
            Alpha::from_prefix(vec![2; 30], DEFAULT_TAIL).unwrap(),
        ),
        (
            "cf:123x10".to_string(),
            Alpha::from_prefix([1u64, 2, 3].repeat(10), DEFAULT_TAIL).unwrap(),
        ),
    ];
    let mut idx = 0u64;
    while set.iter().filter(|(n, _)| n.starts_with("random")).count() < 20 {
        if let Ok(a) = sample_alpha_indexed(ACCEPTANCE_SEED, idx, 10) {
            set.push((format!("random-{idx}"), a));
        }
        idx += 1;
        assert!(idx < 100, "sampler cannot stall");
    }
    set
}

fn verdict(criterion: &str, pass: bool) {
    println!(
        "acceptance {criterion}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance {criterion} failed");
}

#[test]
fn criterion_1_oracle_equivalence() {
    for (name, alpha) in alpha_set() {
        let top = 2000u64.min(alpha.horizon_j() - 1);
        let mut sweep = OracleSweep::new(&alpha);
        for j in 1..=top {
            let closed = v_interval(&alpha, j).unwrap();
            let brute = sweep.v(j).unwrap();
            assert_eq!(
                closed, brute,
                "{name}: V_{j} closed form vs enumeration oracle"
            );
        }
    }
    verdict("criterion 1 (oracle equivalence, j <= 2000, exact)", true);
}

#[test]
fn criterion_2_lemma_suite() {
    let cfg = VerifyConfig::default();
    for (name, alpha) in alpha_set() {
        let disjoint = experiments::verify::disjointness(&alpha, &cfg).unwrap();
        assert!(
            disjoint.ok(),
            "{name} disjointness: {:?}",
            disjoint.failures
        );

        let sums = experiments::verify::sum_bounds(&alpha).unwrap();
        assert!(sums.ok(), "{name} sum bounds: {:?}", sums.failures);

        let h = experiments::verify::h_integrals(&alpha).unwrap();
        assert!(h.ok(), "{name} h integrals: {:?}", h.failures);
        // the closed form itself: integral = q_i * theta_(i-1)
        for i in 1..=3u64 {
            if let Ok(stat) = experiments::h_integral(&alpha, i) {
                let direct = BigRational::from_integer(BigInt::from(alpha.q(i as i64)))
                    * alpha.theta(i as i64 - 1).unwrap();
                assert_eq!(stat.integral, direct, "{name} h_{i}");
            }
        }

        let nest = experiments::verify::nesting(&alpha).unwrap();
        assert!(nest.ok(), "{name} nesting: {:?}", nest.failures);

        let atoms = experiments::verify::atom_counts(&alpha, 300).unwrap();
        assert!(atoms.ok(), "{name} atom counts: {:?}", atoms.failures);
    }
    verdict(
        "criterion 2 (disjointness, sum bounds, h integrals, nesting, atom counts; exact)",
        true,
    );
}

#[test]
fn criterion_3_kesten_counting() {
    let cfg = VerifyConfig {
        kesten_trials: 1000,
        ..VerifyConfig::default()
    };
    for (name, alpha) in alpha_set() {
        let suite = experiments::verify::kesten(&alpha, &cfg).unwrap();
        assert_eq!(suite.failed, 0, "{name} kesten: {:?}", suite.failures);
        assert_eq!(
            suite.passed, suite.checked,
            "{name}: every triple must pass exactly"
        );
    }
    verdict(
        "criterion 3 (Kesten counting, 1000 triples per alpha, |err| <= 2)",
        true,
    );
}

#[test]
fn criterion_4_quasi_independence() {
    let cfg = VerifyConfig {
        quasi_draws: 200,
        pair_component_cap: 200_000,
        ..Default::default()
    };
    for (name, alpha) in alpha_set() {
        let quasi = experiments::verify::quasi_independence(&alpha, &cfg).unwrap();
        assert_eq!(
            quasi.failed, 0,
            "{name} quasi-independence: {:?}",
            quasi.failures
        );
        assert!(
            quasi.vacuous * 10 <= quasi.checked * 3,
            "{name}: vacuous draws {} exceed 30% of {}",
            quasi.vacuous,
            quasi.checked
        );

        let pairs = experiments::verify::pair_integrals(&alpha, &cfg).unwrap();
        assert_eq!(
            pairs.failed, 0,
            "{name} pair integrals: {:?}",
            pairs.failures
        );
        assert_eq!(pairs.vacuous, 0, "{name}: no pair with j >= i+4 is vacuous");
    }
    verdict(
        "criterion 4 (quasi-independence and pair integrals, exact bounds)",
        true,
    );
}

#[test]
fn criterion_5_theorem_a_desk_scale() {
    let alpha = Alpha::preset("golden-40").unwrap();
    let ns = [15usize, 20, 25, 30];
    let cps: Vec<u64> = ns.iter().map(|&k| alpha.q(k as i64) - 1).collect();

    // (a) setwise bounds, exact and x-independent
    let sums = measure_sums_at(&alpha, &cps).unwrap();
    for (idx, &n) in ns.iter().enumerate() {
        let lower = rat(n as i64 - 2, 2);
        let upper = BigRational::from_integer(BigInt::from(n as u64)); // sum a_i = n
        assert!(
            lower < sums[idx] && sums[idx] < upper,
            "measure sum bounds at q_{n}"
        );
    }

    let report = theorem_a_experiment(&alpha, 100, ACCEPTANCE_SEED, &cps).unwrap();
    // (a) pointwise bounds for at least 95 of 100 samples at every checkpoint
    let mut ok_samples = 0;
    for s in &report.samples {
        let all_cps_ok = ns.iter().enumerate().all(|(idx, &n)| {
            let count = s.points[idx].count;
            let lower = rat(n as i64 - 2, 4);
            BigRational::from_integer(BigInt::from(count)) > lower && count <= n as u64
        });
        if all_cps_ok {
            ok_samples += 1;
        }
    }
    assert!(
        ok_samples >= 95,
        "pointwise bounds hold for {ok_samples}/100 samples"
    );

    // (b) the log-ratio tightens: median |ratio-1| at q_30 below q_15 and 0.25
    let gap_15 = median_abs_ratio_gap(&report, 0).unwrap();
    let gap_30 = median_abs_ratio_gap(&report, 3).unwrap();
    assert!(
        gap_30 < gap_15,
        "median gap at q_30 ({gap_30}) vs q_15 ({gap_15})"
    );
    assert!(gap_30 <= 0.25, "median gap at q_30 is {gap_30}");
    verdict(
        &format!(
            "criterion 5 (theorem A desk scale: {ok_samples}/100 in bounds, median gap {gap_30:.4} < {gap_15:.4})"
        ),
        true,
    );
}

#[test]
fn criterion_6_theorem_b_desk_scale() {
    let alpha = Alpha::from_prefix(experiments::gap_prefix(10, 100_000), DEFAULT_TAIL).unwrap();
    let cfg = ThmBConfig {
        m: 11,
        rho: rat(1, 5),
        sigma: rat(1, 10),
        c: rat(1000, 1),
    };
    let rep = theorem_b_experiment(&alpha, &cfg, 50, ACCEPTANCE_SEED).unwrap();
    assert!(
        rep.lambda_x >= rat(1, 4),
        "lambda(X_m) = {} >= 1/4",
        rep.lambda_x
    );
    assert!(
        rep.lambda_y >= rat(1, 128),
        "lambda(Y_m) = {} >= 1/128",
        rep.lambda_y
    );
    assert!(rep.w_measures.len() >= 10, "at least 10 branches checked");
    for (b, measured, closed) in &rep.w_measures {
        assert_eq!(measured, closed, "lambda(W_{b}) exact closed form");
    }
    assert_eq!(rep.pairs.len(), 50);
    assert!(rep.gap_lower > BigRational::from_integer(BigInt::from(0)));
    assert!(
        rep.all_pairs_pass,
        "min sampled gap {} vs guaranteed D {}",
        rep.min_gap, rep.gap_lower
    );
    verdict(
        &format!(
            "criterion 6 (theorem B gap: lambda_X {:.4}, lambda_Y {:.4}, min gap {:.4} >= D {:.4})",
            rep.lambda_x.to_f64().unwrap(),
            rep.lambda_y.to_f64().unwrap(),
            rep.min_gap.to_f64().unwrap(),
            rep.gap_lower.to_f64().unwrap()
        ),
        true,
    );
}

#[test]
fn criterion_7_monte_carlo_wn() {
    for n in [10usize, 100] {
        let est = experiments::monte_carlo_wn(n, 10_000, ACCEPTANCE_SEED).unwrap();
        assert!(
            est.lower_3_sigma > 0.1,
            "n={n}: estimate {} - 3 sigma must clear 1/10",
            est.estimate
        );
    }
    verdict(
        "criterion 7 (Monte Carlo lambda(W_n) > 1/10 at n = 10, 100)",
        true,
    );
}

/// The nesting relation quoted with criterion 2(d), checked literally on a
/// dense range as a complement to the block-representative argument.
#[test]
fn criterion_2d_nesting_direct_scan() {
    let alpha = Alpha::from_prefix(vec![2; 30], DEFAULT_TAIL).unwrap();
    for k in 0..8i64 {
        let qk = alpha.q(k);
        let hi = (alpha.q(k + 1) - qk).min(1200);
        for j in qk.max(1)..=hi {
            let outer = v_interval(&alpha, j).unwrap();
            let inner = v_interval(&alpha, j + qk).unwrap();
            assert!(outer.contains_arc(&inner), "k={k} j={j}");
        }
    }
    println!("acceptance criterion 2d (nesting, literal scan): PASS");
}

#[test]
fn criterion_1_below_first_index_fallback() {
    // below q_1 the closed form still matches the enumeration oracle exactly
    // (the k = 0 extension of the decomposition)
    for (name, alpha) in alpha_set() {
        let q1 = alpha.q(1);
        if q1 <= 1 {
            continue;
        }
        let mut sweep = OracleSweep::new(&alpha);
        for j in 1..q1.min(alpha.horizon_j() - 1) {
            assert_eq!(
                v_interval(&alpha, j).unwrap(),
                sweep.v(j).unwrap(),
                "{name}: fallback V_{j}"
            );
            assert!(sturmtargets::targets::rst(&alpha, j).is_err());
        }
    }
    println!("acceptance criterion 1 (pre-window fallback): PASS");
}

#[test]
fn one_half_identity_on_j2_blocks() {
    // lambda(V_j) = theta_(i-1) on J^i_2, the identity behind the h bounds
    for (name, alpha) in alpha_set() {
        for blk in
            sturmtargets::targets::j2_family(&alpha, 2000.min(alpha.horizon_j() - 1)).unwrap()
        {
            let lam = sturmtargets::targets::measure_v(&alpha, blk.lo).unwrap();
            assert_eq!(
                lam,
                alpha.theta(blk.i as i64 - 1).unwrap(),
                "{name} i={}",
                blk.i
            );
            for j in blk.range() {
                assert_eq!(
                    sturmtargets::targets::measure_v(&alpha, j).unwrap(),
                    lam,
                    "{name}: constant on the block"
                );
            }
        }
    }
    println!("acceptance (J^i_2 measure identity): PASS");
}

#[test]
fn criterion_5_counts_cross_checked_against_oracle() {
    // the sweep counter feeding criterion 5 agrees with per-j oracle
    // membership on a dense prefix
    let alpha = Alpha::preset("golden-40").unwrap();
    let x = CirclePoint::new(rat(1, 3));
    let n = 80u64;
    let report = sturmtargets::targets::count_undetermined(&alpha, &x, n).unwrap();
    let mut sweep = OracleSweep::new(&alpha);
    let mut oracle_count = 0;
    let mut oracle_sum = BigRational::from_integer(BigInt::from(0));
    for j in 1..=n {
        let v = sweep.v(j).unwrap();
        if v.contains(&x) {
            oracle_count += 1;
        }
        oracle_sum += v.measure();
    }
    assert_eq!(report.count, oracle_count);
    assert_eq!(report.measure_sum, oracle_sum);
    assert!(report.measure_sum > BigRational::one());
    println!("acceptance (count vs oracle membership): PASS");
}
