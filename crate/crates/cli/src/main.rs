//! Command-line surface: every kernel and experiment behind reproducible,
//! machine-readable runs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error.
//! Primary output (stdout or --output) is byte-deterministic given the same
//! arguments and seed; diagnostics go to stderr.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num::{BigInt, BigRational, ToPrimitive};
use serde::Serialize;

use sturmtargets::alpha::{Alpha, AlphaSpec, DEFAULT_TAIL};
use sturmtargets::circle::CirclePoint;
use sturmtargets::experiments::{self, ThmBConfig, VerifyConfig};
use sturmtargets::report::{csv_document, float15, AlphaJson, RationalRepr};
use sturmtargets::targets;

#[derive(Parser, Debug)]
#[command(
    name = "sturmtargets",
    version,
    about = "exact target-set kernels for rotation codings"
)]
struct Cli {
    /// worker threads; results are identical for any value
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// output format for tabular payloads
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
    /// output path; relative paths resolve against $STURMTARGETS_OUT_DIR
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct AlphaArg {
    /// rotation number: cf:1,1,2 | rat:3/7 | preset:golden-40
    #[arg(long)]
    alpha: String,
    /// tail element appended to cf prefixes
    #[arg(long, default_value_t = DEFAULT_TAIL)]
    tail: u64,
}

impl AlphaArg {
    fn build(&self) -> Result<Alpha, String> {
        let spec = AlphaSpec::from_str(&self.alpha).map_err(|e| e.to_string())?;
        Alpha::from_spec_with_tail(&spec, self.tail).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convergent and theta table
    Cf {
        #[command(flatten)]
        alpha: AlphaArg,
    },
    /// Per-block or per-j dump of the target decomposition
    Targets {
        #[command(flatten)]
        alpha: AlphaArg,
        /// largest time index
        #[arg(long, default_value_t = 100)]
        up_to: u64,
        /// emit one row per j instead of one per block
        #[arg(long)]
        dump_per_j: bool,
        /// point whose membership column chi to include (rat:p/q)
        #[arg(long)]
        x: Option<String>,
        /// dump the coding partition at this step instead
        #[arg(long)]
        dump_atoms: Option<u64>,
    },
    /// Hit count and measure sum for one point
    Count {
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        n: u64,
    },
    /// Run the exact invariant suites; nonzero exit on any failure
    Verify {
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long, default_value_t = 2000)]
        oracle_max: u64,
        #[arg(long, default_value_t = 1000)]
        kesten_trials: u64,
        #[arg(long, default_value_t = 200)]
        quasi_draws: u64,
        #[arg(long, default_value_t = 200_000)]
        pair_cap: u64,
        #[arg(long, default_value_t = 20_240_601)]
        seed: u64,
    },
    /// Log-ratio convergence series at checkpoints
    #[command(name = "thmA")]
    ThmA {
        #[command(flatten)]
        alpha: AlphaArg,
        /// explicit point (rat:p/q); omit to sample
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// comma list; qK tokens resolve to q_K - 1
        #[arg(long, default_value = "q15,q20,q25,q30")]
        checkpoints: String,
        /// emit two whitespace-separated columns (N, median ratio) for plotting
        #[arg(long)]
        plot_data: bool,
    },
    /// Non-convergence gap experiment
    #[command(name = "thmB")]
    ThmB {
        /// explicit alpha; omit to engineer one from --ones/--a-big
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TAIL)]
        tail: u64,
        /// leading ones of the engineered prefix
        #[arg(long, default_value_t = 10)]
        ones: usize,
        /// the dominant element
        #[arg(long, default_value_t = 100_000)]
        a_big: u64,
        /// index m of the dominant element; defaults to ones + 1
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value = "1/5")]
        rho: String,
        #[arg(long, default_value = "1/10")]
        sigma: String,
        #[arg(long, default_value = "1000")]
        c: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Monte Carlo estimate of lambda(W_n)
    #[command(name = "mc-wn")]
    McWn {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Frequency of dominant continued fraction elements
    #[command(name = "mc-bigtime")]
    McBigtime {
        #[arg(long, default_value = "1")]
        c: String,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// instead report element-sum growth against n (log n)^3 at these n
        #[arg(long)]
        growth_checkpoints: Option<String>,
        /// emit two whitespace-separated columns for plotting
        #[arg(long)]
        plot_data: bool,
    },
}

fn parse_point(s: &str) -> Result<CirclePoint, String> {
    let spec = AlphaSpec::from_str(s).map_err(|e| e.to_string())?;
    match spec {
        AlphaSpec::Rational(p, q) => Ok(CirclePoint::new(BigRational::new(p, q))),
        _ => Err(format!("point must be rat:p/q, got `{s}`")),
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| e.to_string())?;
        let q = BigInt::from_str(q.trim()).map_err(|e| e.to_string())?;
        Ok(BigRational::new(p, q))
    } else {
        let p = BigInt::from_str(s.trim()).map_err(|e| e.to_string())?;
        Ok(BigRational::from_integer(p))
    }
}

/// qK tokens resolve against the alpha's convergents to q_K - 1 (sums in the
/// quantitative statements run to just below a denominator).
fn parse_checkpoints(s: &str, alpha: &Alpha) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        if let Some(k) = tok.strip_prefix('q') {
            let k: usize = k.parse().map_err(|_| format!("bad checkpoint `{tok}`"))?;
            if k > alpha.horizon_k() {
                return Err(format!(
                    "checkpoint {tok} beyond horizon k={}",
                    alpha.horizon_k()
                ));
            }
            out.push(alpha.q(k as i64) - 1);
        } else {
            out.push(
                tok.parse::<u64>()
                    .map_err(|_| format!("bad checkpoint `{tok}`"))?,
            );
        }
    }
    if out.is_empty() {
        return Err("no checkpoints".into());
    }
    Ok(out)
}

struct Output {
    path: Option<PathBuf>,
}

impl Output {
    fn resolve(path: Option<PathBuf>) -> Self {
        let path = path.map(|p| {
            if p.is_relative() {
                if let Ok(dir) = std::env::var("STURMTARGETS_OUT_DIR") {
                    return PathBuf::from(dir).join(p);
                }
            }
            p
        });
        Output { path }
    }

    fn write(&self, payload: &str) -> Result<(), String> {
        match &self.path {
            None => {
                print!("{payload}");
                std::io::stdout().flush().map_err(|e| e.to_string())
            }
            Some(p) => std::fs::write(p, payload).map_err(|e| format!("{}: {e}", p.display())),
        }
    }
}

fn rat_str(r: &BigRational) -> (String, String, String) {
    let repr = RationalRepr::from(r);
    (repr.num, repr.den, repr.float)
}

#[derive(Serialize)]
struct WithConfig<'a, T: Serialize> {
    config: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

fn json_payload<T: Serialize>(config: &str, value: &T) -> String {
    let mut s = serde_json::to_string_pretty(&WithConfig {
        config,
        body: value,
    })
    .expect("serializable");
    s.push('\n');
    s
}

/// Canonical argv rendering of the parsed configuration: flags in a fixed
/// order with defaults made explicit; reparsing it yields the same string.
/// The output sink and worker count are execution details, not
/// configuration, and stay out (payloads must not depend on them).
fn push_flag(parts: &mut Vec<String>, name: &str, value: String) {
    parts.push(format!("--{name}"));
    parts.push(value);
}

fn canonical(cli: &Cli) -> String {
    let mut parts: Vec<String> = Vec::new();
    match &cli.command {
        Command::Cf { alpha } => {
            parts.push("cf".into());
            push_flag(&mut parts, "alpha", alpha.alpha.clone());
            push_flag(&mut parts, "tail", alpha.tail.to_string());
        }
        Command::Targets {
            alpha,
            up_to,
            dump_per_j,
            x,
            dump_atoms,
        } => {
            parts.push("targets".into());
            push_flag(&mut parts, "alpha", alpha.alpha.clone());
            push_flag(&mut parts, "tail", alpha.tail.to_string());
            push_flag(&mut parts, "up-to", up_to.to_string());
            if *dump_per_j {
                parts.push("--dump-per-j".into());
            }
            if let Some(x) = x {
                push_flag(&mut parts, "x", x.clone());
            }
            if let Some(j) = dump_atoms {
                push_flag(&mut parts, "dump-atoms", j.to_string());
            }
        }
        Command::Count { alpha, x, n } => {
            parts.push("count".into());
            push_flag(&mut parts, "alpha", alpha.alpha.clone());
            push_flag(&mut parts, "tail", alpha.tail.to_string());
            push_flag(&mut parts, "x", x.clone());
            push_flag(&mut parts, "n", n.to_string());
        }
        Command::Verify {
            alpha,
            oracle_max,
            kesten_trials,
            quasi_draws,
            pair_cap,
            seed,
        } => {
            parts.push("verify".into());
            push_flag(&mut parts, "alpha", alpha.alpha.clone());
            push_flag(&mut parts, "tail", alpha.tail.to_string());
            push_flag(&mut parts, "oracle-max", oracle_max.to_string());
            push_flag(&mut parts, "kesten-trials", kesten_trials.to_string());
            push_flag(&mut parts, "quasi-draws", quasi_draws.to_string());
            push_flag(&mut parts, "pair-cap", pair_cap.to_string());
            push_flag(&mut parts, "seed", seed.to_string());
        }
        Command::ThmA {
            alpha,
            x,
            samples,
            seed,
            checkpoints,
            plot_data,
        } => {
            parts.push("thmA".into());
            push_flag(&mut parts, "alpha", alpha.alpha.clone());
            push_flag(&mut parts, "tail", alpha.tail.to_string());
            if let Some(x) = x {
                push_flag(&mut parts, "x", x.clone());
            }
            push_flag(&mut parts, "samples", samples.to_string());
            push_flag(&mut parts, "seed", seed.to_string());
            push_flag(&mut parts, "checkpoints", checkpoints.clone());
            if *plot_data {
                parts.push("--plot-data".into());
            }
        }
        Command::ThmB {
            alpha,
            tail,
            ones,
            a_big,
            m,
            rho,
            sigma,
            c,
            samples,
            seed,
        } => {
            parts.push("thmB".into());
            if let Some(a) = alpha {
                push_flag(&mut parts, "alpha", a.clone());
            }
            push_flag(&mut parts, "tail", tail.to_string());
            push_flag(&mut parts, "ones", ones.to_string());
            push_flag(&mut parts, "a-big", a_big.to_string());
            if let Some(m) = m {
                push_flag(&mut parts, "m", m.to_string());
            }
            push_flag(&mut parts, "rho", rho.clone());
            push_flag(&mut parts, "sigma", sigma.clone());
            push_flag(&mut parts, "c", c.clone());
            push_flag(&mut parts, "samples", samples.to_string());
            push_flag(&mut parts, "seed", seed.to_string());
        }
        Command::McWn { n, samples, seed } => {
            parts.push("mc-wn".into());
            push_flag(&mut parts, "n", n.to_string());
            push_flag(&mut parts, "samples", samples.to_string());
            push_flag(&mut parts, "seed", seed.to_string());
        }
        Command::McBigtime {
            c,
            n_max,
            samples,
            seed,
            growth_checkpoints,
            plot_data,
        } => {
            parts.push("mc-bigtime".into());
            push_flag(&mut parts, "c", c.clone());
            push_flag(&mut parts, "n-max", n_max.to_string());
            push_flag(&mut parts, "samples", samples.to_string());
            push_flag(&mut parts, "seed", seed.to_string());
            if let Some(g) = growth_checkpoints {
                push_flag(&mut parts, "growth-checkpoints", g.clone());
            }
            if *plot_data {
                parts.push("--plot-data".into());
            }
        }
    }
    push_flag(
        &mut parts,
        "format",
        match cli.format {
            Format::Csv => "csv".into(),
            Format::Json => "json".into(),
        },
    );
    parts.join(" ")
}

fn run() -> Result<i32, String> {
    let cli = Cli::parse();
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build_global()
        .map_err(|e| e.to_string())?;
    let out = Output::resolve(cli.output.clone());
    let canon = canonical(&cli);
    let config = vec![("config".to_string(), canon.clone())];
    match &cli.command {
        Command::Cf { alpha } => {
            let a = alpha.build()?;
            let mut rows = Vec::new();
            for conv in a.convergents() {
                let th = a.theta(conv.k as i64).map_err(|e| e.to_string())?;
                let (tn, td, tf) = rat_str(&th);
                rows.push(vec![
                    conv.k.to_string(),
                    conv.p.to_string(),
                    conv.q.to_string(),
                    tn,
                    td,
                    tf,
                ]);
            }
            match cli.format {
                Format::Csv => out.write(&csv_document(
                    &config,
                    &["k", "p", "q", "theta_num", "theta_den", "theta_float"],
                    &rows,
                ))?,
                Format::Json => {
                    #[derive(Serialize)]
                    struct CfOut {
                        alpha: AlphaJson,
                        rows: Vec<Vec<String>>,
                    }
                    out.write(&json_payload(
                        &canon,
                        &CfOut {
                            alpha: AlphaJson::from(&a),
                            rows,
                        },
                    ))?;
                }
            }
            Ok(0)
        }
        Command::Targets {
            alpha,
            up_to,
            dump_per_j,
            x,
            dump_atoms,
        } => {
            let a = alpha.build()?;
            if let Some(j) = dump_atoms {
                let part = sturmtargets::coding::atoms(&a, *j).map_err(|e| e.to_string())?;
                let doc = sturmtargets::report::atom_partition_csv(&a, &part)
                    .map_err(|e| e.to_string())?;
                out.write(&format!("# config={canon}\n{doc}"))?;
                return Ok(0);
            }
            let x_point = x.as_deref().map(parse_point).transpose()?;
            let blocks = targets::sweep_blocks(&a, (*up_to).min(a.horizon_j() - 1))
                .map_err(|e| e.to_string())?;
            let mut rows = Vec::new();
            if *dump_per_j {
                for blk in &blocks {
                    for j in blk.range() {
                        let d = targets::rst(&a, j)
                            .or_else(|_| {
                                // below q_1 the (r,s,t) maxima are the total
                                // closed form's k = 0 extension
                                targets::v_interval(&a, j).map(|arc| targets::TargetDecomposition {
                                    j,
                                    k: 0,
                                    r: 1,
                                    s: 0,
                                    t: j,
                                    case: targets::CaseTag::FracRBelowHalf,
                                    measure: arc.measure().clone(),
                                    ru: arc,
                                })
                            })
                            .map_err(|e| e.to_string())?;
                        let (ln, ld, _) = rat_str(&d.measure);
                        let mut row = vec![
                            j.to_string(),
                            blk.i.to_string(),
                            blk.b.to_string(),
                            d.r.to_string(),
                            d.s.to_string(),
                            d.t.to_string(),
                            ln,
                            ld,
                        ];
                        if let Some(p) = &x_point {
                            let arc = targets::v_interval(&a, j).map_err(|e| e.to_string())?;
                            row.push(if arc.contains(p) {
                                "1".into()
                            } else {
                                "0".into()
                            });
                        }
                        rows.push(row);
                    }
                }
                let header: Vec<&str> = if x_point.is_some() {
                    vec![
                        "j",
                        "i",
                        "b",
                        "r",
                        "s",
                        "t",
                        "lambda_num",
                        "lambda_den",
                        "chi",
                    ]
                } else {
                    vec!["j", "i", "b", "r", "s", "t", "lambda_num", "lambda_den"]
                };
                match cli.format {
                    Format::Csv => out.write(&csv_document(&config, &header, &rows))?,
                    Format::Json => {
                        #[derive(Serialize)]
                        struct Rows {
                            rows: Vec<Vec<String>>,
                        }
                        out.write(&json_payload(&canon, &Rows { rows }))?;
                    }
                }
            } else {
                for blk in &blocks {
                    let lam = targets::measure_v(&a, blk.lo).map_err(|e| e.to_string())?;
                    let (ln, ld, lf) = rat_str(&lam);
                    rows.push(vec![
                        blk.i.to_string(),
                        blk.b.to_string(),
                        blk.lo.to_string(),
                        blk.hi.to_string(),
                        ln,
                        ld,
                        lf,
                    ]);
                }
                match cli.format {
                    Format::Csv => out.write(&csv_document(
                        &config,
                        &[
                            "i",
                            "b",
                            "lo",
                            "hi",
                            "lambda_num",
                            "lambda_den",
                            "lambda_float",
                        ],
                        &rows,
                    ))?,
                    Format::Json => {
                        #[derive(Serialize)]
                        struct Rows {
                            rows: Vec<Vec<String>>,
                        }
                        out.write(&json_payload(&canon, &Rows { rows }))?;
                    }
                }
            }
            Ok(0)
        }
        Command::Count { alpha, x, n } => {
            let a = alpha.build()?;
            let p = parse_point(x)?;
            let rep = targets::count_undetermined(&a, &p, *n).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct CountOut {
                alpha: AlphaJson,
                x: RationalRepr,
                n: u64,
                count: u64,
                measure_sum: RationalRepr,
            }
            out.write(&json_payload(
                &canon,
                &CountOut {
                    alpha: AlphaJson::from(&a),
                    x: RationalRepr::from(rep.x.value()),
                    n: rep.n,
                    count: rep.count,
                    measure_sum: RationalRepr::from(&rep.measure_sum),
                },
            ))?;
            Ok(0)
        }
        Command::Verify {
            alpha,
            oracle_max,
            kesten_trials,
            quasi_draws,
            pair_cap,
            seed,
        } => {
            let a = alpha.build()?;
            let cfg = VerifyConfig {
                oracle_max: *oracle_max,
                kesten_trials: *kesten_trials,
                quasi_draws: *quasi_draws,
                pair_component_cap: *pair_cap,
                seed: *seed,
                ..VerifyConfig::default()
            };
            let suites = experiments::run_all(&a, &cfg).map_err(|e| e.to_string())?;
            let all_ok = suites.iter().all(|s| s.ok());
            match cli.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct VerifyOut {
                        alpha: AlphaJson,
                        config: VerifyConfig,
                        suites: Vec<experiments::SuiteResult>,
                        pass: bool,
                    }
                    out.write(&json_payload(
                        &canon,
                        &VerifyOut {
                            alpha: AlphaJson::from(&a),
                            config: cfg,
                            suites,
                            pass: all_ok,
                        },
                    ))?;
                }
                Format::Csv => {
                    let mut text = String::new();
                    for s in &suites {
                        text.push_str(&format!(
                            "{}: {} checked, {} passed, {} vacuous, {} failed -> {}\n",
                            s.name,
                            s.checked,
                            s.passed,
                            s.vacuous,
                            s.failed,
                            if s.ok() { "PASS" } else { "FAIL" }
                        ));
                        for f in &s.failures {
                            text.push_str(&format!("    {f}\n"));
                        }
                    }
                    text.push_str(if all_ok {
                        "verify: PASS\n"
                    } else {
                        "verify: FAIL\n"
                    });
                    out.write(&text)?;
                }
            }
            Ok(if all_ok { 0 } else { 1 })
        }
        Command::ThmA {
            alpha,
            x,
            samples,
            seed,
            checkpoints,
            plot_data,
        } => {
            let a = alpha.build()?;
            let cps = parse_checkpoints(checkpoints, &a)?;
            let report = match x {
                Some(xs) => {
                    let p = parse_point(xs)?;
                    experiments::theorem_a_series(&a, &[p], &cps).map_err(|e| e.to_string())?
                }
                None => experiments::theorem_a_experiment(&a, *samples, *seed, &cps)
                    .map_err(|e| e.to_string())?,
            };
            let mut rows = Vec::new();
            for (sample_idx, s) in report.samples.iter().enumerate() {
                let x_repr = RationalRepr::from(&s.x);
                for (cp_idx, pt) in s.points.iter().enumerate() {
                    let ms = RationalRepr::from(&report.measure_sums[cp_idx]);
                    rows.push(vec![
                        sample_idx.to_string(),
                        x_repr.num.clone(),
                        x_repr.den.clone(),
                        pt.n.to_string(),
                        pt.count.to_string(),
                        ms.num.clone(),
                        ms.den.clone(),
                        pt.ratio.map(float15).unwrap_or_default(),
                    ]);
                }
            }
            if *plot_data {
                let mut text = String::new();
                for (cp_idx, &n) in cps.iter().enumerate() {
                    let mut ratios: Vec<f64> = report
                        .samples
                        .iter()
                        .filter_map(|s| s.points[cp_idx].ratio)
                        .collect();
                    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    if let Some(&median) = ratios.get(ratios.len() / 2) {
                        text.push_str(&format!("{n} {}\n", float15(median)));
                    }
                }
                out.write(&text)?;
            } else {
                match cli.format {
                    Format::Csv => out.write(&csv_document(
                        &config,
                        &[
                            "sample", "x_num", "x_den", "n", "count", "msum_num", "msum_den",
                            "ratio",
                        ],
                        &rows,
                    ))?,
                    Format::Json => {
                        #[derive(Serialize)]
                        struct Rows {
                            rows: Vec<Vec<String>>,
                        }
                        out.write(&json_payload(&canon, &Rows { rows }))?;
                    }
                }
            }
            Ok(0)
        }
        Command::ThmB {
            alpha,
            tail,
            ones,
            a_big,
            m,
            rho,
            sigma,
            c,
            samples,
            seed,
        } => {
            let a = match alpha {
                Some(spec) => {
                    let spec = AlphaSpec::from_str(spec).map_err(|e| e.to_string())?;
                    Alpha::from_spec_with_tail(&spec, *tail).map_err(|e| e.to_string())?
                }
                None => Alpha::from_prefix(experiments::gap_prefix(*ones, *a_big), *tail)
                    .map_err(|e| e.to_string())?,
            };
            let cfg = ThmBConfig {
                m: m.unwrap_or(*ones + 1),
                rho: parse_rational(rho)?,
                sigma: parse_rational(sigma)?,
                c: parse_rational(c)?,
            };
            let rep = experiments::theorem_b_experiment(&a, &cfg, *samples, *seed)
                .map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct PairOut {
                x: RationalRepr,
                y: RationalRepr,
                f_x: RationalRepr,
                f_y: RationalRepr,
                gap: RationalRepr,
                x_block_count: u64,
                y_block_count: u64,
            }
            #[derive(Serialize)]
            struct ThmBOut {
                alpha: AlphaJson,
                m: usize,
                b_rho: u64,
                b_sigma: u64,
                lambda_x: RationalRepr,
                lambda_y: RationalRepr,
                gap_lower: RationalRepr,
                min_gap: RationalRepr,
                all_pairs_pass: bool,
                w_measures: Vec<(u64, RationalRepr, RationalRepr)>,
                pairs: Vec<PairOut>,
            }
            let payload = ThmBOut {
                alpha: AlphaJson::from(&a),
                m: rep.m,
                b_rho: rep.b_rho,
                b_sigma: rep.b_sigma,
                lambda_x: RationalRepr::from(&rep.lambda_x),
                lambda_y: RationalRepr::from(&rep.lambda_y),
                gap_lower: RationalRepr::from(&rep.gap_lower),
                min_gap: RationalRepr::from(&rep.min_gap),
                all_pairs_pass: rep.all_pairs_pass,
                w_measures: rep
                    .w_measures
                    .iter()
                    .map(|(b, got, want)| (*b, RationalRepr::from(got), RationalRepr::from(want)))
                    .collect(),
                pairs: rep
                    .pairs
                    .iter()
                    .map(|p| PairOut {
                        x: RationalRepr::from(&p.x),
                        y: RationalRepr::from(&p.y),
                        f_x: RationalRepr::from(&p.f_x),
                        f_y: RationalRepr::from(&p.f_y),
                        gap: RationalRepr::from(&p.gap),
                        x_block_count: p.x_block_count,
                        y_block_count: p.y_block_count,
                    })
                    .collect(),
            };
            out.write(&json_payload(&canon, &payload))?;
            Ok(if rep.all_pairs_pass { 0 } else { 1 })
        }
        Command::McWn { n, samples, seed } => {
            let est =
                experiments::monte_carlo_wn(*n, *samples, *seed).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Json => out.write(&json_payload(&canon, &est))?,
                Format::Csv => out.write(&csv_document(
                    &config,
                    &[
                        "n",
                        "samples",
                        "hits",
                        "skipped",
                        "estimate",
                        "ci99_half_width",
                    ],
                    &[vec![
                        est.n.to_string(),
                        est.samples.to_string(),
                        est.hits.to_string(),
                        est.skipped.to_string(),
                        float15(est.estimate),
                        float15(est.ci99_half_width),
                    ]],
                ))?,
            }
            Ok(0)
        }
        Command::McBigtime {
            c,
            n_max,
            samples,
            seed,
            growth_checkpoints,
            plot_data,
        } => {
            if let Some(cps) = growth_checkpoints {
                let checkpoints: Result<Vec<usize>, _> =
                    cps.split(',').map(|t| t.trim().parse::<usize>()).collect();
                let checkpoints = checkpoints.map_err(|e| e.to_string())?;
                let rows = experiments::sum_ai_growth(*seed, &checkpoints, *samples)
                    .map_err(|e| e.to_string())?;
                if *plot_data {
                    let mut text = String::new();
                    for r in &rows {
                        text.push_str(&format!("{} {}\n", r.n, float15(r.fraction_exceeding)));
                    }
                    out.write(&text)?;
                } else {
                    match cli.format {
                        Format::Json => {
                            #[derive(Serialize)]
                            struct Rows {
                                rows: Vec<experiments::GrowthRow>,
                            }
                            out.write(&json_payload(&canon, &Rows { rows }))?;
                        }
                        Format::Csv => out.write(&csv_document(
                            &config,
                            &[
                                "n",
                                "samples",
                                "skipped",
                                "exceeding",
                                "fraction_exceeding",
                                "median_sum",
                            ],
                            &rows
                                .iter()
                                .map(|r| {
                                    vec![
                                        r.n.to_string(),
                                        r.samples.to_string(),
                                        r.skipped.to_string(),
                                        r.exceeding.to_string(),
                                        float15(r.fraction_exceeding),
                                        r.median_sum.to_string(),
                                    ]
                                })
                                .collect::<Vec<_>>(),
                        ))?,
                    }
                }
                return Ok(0);
            }
            let c_val = parse_rational(c)?.to_f64().ok_or("bad C")?;
            let rep = experiments::find_large_element(*seed, c_val, *n_max, *samples)
                .map_err(|e| e.to_string())?;
            if *plot_data {
                let mut text = String::new();
                for (idx, cnt) in rep.first_m_histogram.iter().enumerate() {
                    text.push_str(&format!("{} {cnt}\n", idx + 2));
                }
                out.write(&text)?;
                return Ok(0);
            }
            match cli.format {
                Format::Json => out.write(&json_payload(&canon, &rep))?,
                Format::Csv => {
                    let rows: Vec<Vec<String>> = rep
                        .first_m_histogram
                        .iter()
                        .enumerate()
                        .map(|(idx, cnt)| vec![(idx + 2).to_string(), cnt.to_string()])
                        .collect();
                    let mut cfg_rows = config.clone();
                    cfg_rows.push(("fraction".to_string(), float15(rep.fraction)));
                    out.write(&csv_document(&cfg_rows, &["first_m", "count"], &rows))?;
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error[config]: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reparse(canon: &str) -> String {
        let argv: Vec<&str> = std::iter::once("sturmtargets")
            .chain(canon.split(' '))
            .collect();
        canonical(&Cli::try_parse_from(argv).expect("canonical string parses"))
    }

    #[test]
    fn canonical_round_trips() {
        for argv in [
            vec!["sturmtargets", "cf", "--alpha", "rat:3/7"],
            vec![
                "sturmtargets",
                "targets",
                "--alpha",
                "cf:2,2",
                "--up-to",
                "9",
                "--dump-per-j",
                "--x",
                "rat:1/3",
            ],
            vec![
                "sturmtargets",
                "count",
                "--alpha",
                "preset:golden-40",
                "--x",
                "rat:1/3",
                "--n",
                "88",
            ],
            vec![
                "sturmtargets",
                "verify",
                "--alpha",
                "preset:golden-12",
                "--oracle-max",
                "100",
            ],
            vec![
                "sturmtargets",
                "thmA",
                "--alpha",
                "preset:golden-20",
                "--checkpoints",
                "q8,q12",
                "--format",
                "json",
            ],
            vec![
                "sturmtargets",
                "thmB",
                "--ones",
                "8",
                "--a-big",
                "2000",
                "--c",
                "100",
            ],
            vec!["sturmtargets", "mc-wn", "--n", "10", "--jobs", "4"],
            vec![
                "sturmtargets",
                "mc-bigtime",
                "--growth-checkpoints",
                "10,100",
            ],
        ] {
            let canon = canonical(&Cli::try_parse_from(argv).unwrap());
            assert_eq!(reparse(&canon), canon, "canonical form is a fixed point");
        }
    }
}
