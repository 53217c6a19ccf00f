//! Subcommand implementations.  Report files contain only deterministic
//! payload (config echo, versions, data); wall-clock and worker count go
//! to stderr so identical runs produce identical bytes at any parallelism.

use crate::cache::{LCache, WEIGHTS_VERSION};
use crate::config::{OutputFormat, RunConfig};
use crate::CliError;
use lchi_core::arith::{
    divisor_dhalf, n_y, r_y, vaughan_decompose, von_mangoldt, PrimeTable,
};
use lchi_core::gauss::{tau, tau_bruteforce};
use lchi_core::lcentral::{l_half_oracle, primes_1_mod_8};
use lchi_core::mollify::{rho, theta0, HSpec, MollifierSpec};
use lchi_core::moments::{compute_report, constant_c, MomentSettings};
use lchi_core::sieve::{build_lambda, sieve_sum, SelbergG, SieveParams};
use lchi_core::special::bump::BumpPhi;
use lchi_core::special::omega::OmegaTable;
use lchi_core::{Rational, Real};
use serde::Serialize;
use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Instant;

/// 17 significant digits, '.' decimal, positional where readable.
pub fn fmt17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..16).contains(&exp) {
        format!("{:.*}", (16 - exp).max(0) as usize, v)
    } else {
        format!("{:.16e}", v)
    }
}

fn write_out(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Resource(format!("cannot write {}: {e}", path.display())))
}

/// Prime table wide enough for the j = 1 series at conductors up to `x`
/// (ν ranges to 14 √(x/π)).
fn census_table(x: u64) -> Result<PrimeTable, CliError> {
    let nu_max = (14.0 * (x as Real / std::f64::consts::PI).sqrt()).ceil() as u64 + 16;
    Ok(PrimeTable::new(x.max(nu_max))?)
}

fn open_cache(cfg: &RunConfig) -> Result<LCache, CliError> {
    match &cfg.cache_path {
        Some(p) => LCache::open(p),
        None => Ok(LCache::ephemeral()),
    }
}

#[derive(Serialize)]
struct CensusSummary<'a> {
    config: &'a RunConfig,
    weights_version: &'static str,
    package_version: &'static str,
    count_total: u64,
    count_nonvanishing: u64,
    proportion: f64,
    proven_floor: f64,
    meets_proven_floor: bool,
    min_value: f64,
    min_p: u64,
    near_threshold_count: u64,
}

pub fn cmd_census(cfg: &RunConfig) -> Result<(), CliError> {
    let start = Instant::now();
    let table = census_table(cfg.x)?;
    let omega1 = OmegaTable::build(1)?;
    let primes = primes_1_mod_8(cfg.x, &table);
    let mut cache = open_cache(cfg)?;
    let values = cache.fill(&primes, &omega1, &table, cfg.workers)?;
    cache.flush()?;

    let mut csv = String::from("p,L,nonzero_flag\n");
    let mut nonvanishing = 0u64;
    let mut near = 0u64;
    let mut min_value = f64::INFINITY;
    let mut min_p = 0u64;
    for (&p, &l) in primes.iter().zip(values.iter()) {
        let nonzero = l.abs() > cfg.tol;
        if nonzero {
            nonvanishing += 1;
        }
        if l.abs() > cfg.tol && l.abs() <= 100.0 * cfg.tol {
            near += 1;
        }
        if l < min_value {
            min_value = l;
            min_p = p;
        }
        csv.push_str(&format!("{p},{},{}\n", fmt17(l), u8::from(nonzero)));
    }
    let total = primes.len() as u64;
    let proportion = if total == 0 {
        0.0
    } else {
        nonvanishing as f64 / total as f64
    };
    let summary = CensusSummary {
        config: cfg,
        weights_version: WEIGHTS_VERSION,
        package_version: env!("CARGO_PKG_VERSION"),
        count_total: total,
        count_nonvanishing: nonvanishing,
        proportion,
        proven_floor: 0.0964,
        meets_proven_floor: proportion >= 0.0964,
        min_value: if total == 0 { 0.0 } else { min_value },
        min_p,
        near_threshold_count: near,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";

    let stem = cfg
        .output_path
        .clone()
        .unwrap_or_else(|| PathBuf::from("census"));
    let csv_path = stem.with_extension("csv");
    let json_path = stem.with_extension("json");
    write_out(&csv_path, &csv)?;
    write_out(&json_path, &json)?;
    eprintln!(
        "census: {} conductors, proportion {:.6}, {} workers, {:.2}s -> {}, {}",
        total,
        proportion,
        cfg.workers,
        start.elapsed().as_secs_f64(),
        csv_path.display(),
        json_path.display()
    );
    Ok(())
}

pub fn cmd_moments(cfg: &RunConfig, alpha: Option<(f64, f64)>) -> Result<(), CliError> {
    cfg.validate_moment_regime()?;
    let start = Instant::now();
    let table = census_table(cfg.x)?;
    let omega1 = OmegaTable::build(1)?;
    let phi = BumpPhi::for_scale(cfg.x as Real);
    let spec = MollifierSpec::new(
        cfg.theta,
        cfg.mollifier_len_value(),
        HSpec::HStar { theta: cfg.theta },
    )?;

    let primes: Vec<u64> = primes_1_mod_8(cfg.x, &table)
        .into_iter()
        .filter(|&p| phi.value(p as Real / cfg.x as Real) > 0.0)
        .collect();
    let mut cache = open_cache(cfg)?;
    let values = cache.fill(&primes, &omega1, &table, cfg.workers)?;
    cache.flush()?;
    let lmap: HashMap<u64, f64> = primes.iter().copied().zip(values).collect();

    let settings = MomentSettings {
        x: cfg.x,
        theta: cfg.theta,
        vartheta: cfg.vartheta,
        delta: cfg.s2_delta,
        tol: cfg.tol,
        alpha,
        workers: cfg.workers,
    };
    let report = compute_report(&settings, &spec, &phi, &omega1, &table, |p| {
        lmap.get(&p)
            .copied()
            .ok_or_else(|| lchi_core::Error::Numerical(format!("uncached conductor {p}")))
    })?;

    let text = match cfg.output_format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Wrapper<'a> {
                config: &'a RunConfig,
                weights_version: &'static str,
                package_version: &'static str,
                report: &'a lchi_core::moments::MomentReport,
            }
            serde_json::to_string_pretty(&Wrapper {
                config: cfg,
                weights_version: WEIGHTS_VERSION,
                package_version: env!("CARGO_PKG_VERSION"),
                report: &report,
            })
            .expect("report serializes")
                + "\n"
        }
        OutputFormat::Csv => {
            let (a1, a2) = alpha.map_or((String::new(), String::new()), |(a, b)| {
                (fmt17(a), fmt17(b))
            });
            let (ma, mas) = (
                report.malpha.map_or(String::new(), fmt17),
                report.malpha_scale.map_or(String::new(), fmt17),
            );
            format!(
                "x,theta,vartheta,mollifier_len,bump_delta,s1,s1_pred,s2,s2_bound,\
                 m2,m2_pred,m3,m3_scale,alpha1,alpha2,malpha,malpha_scale,\
                 cs_lhs,cs_rhs,census_total,census_nonvanishing,proportion,min_l,\
                 s2_bound_is_asymptotic\n\
                 {},{},{},{},{},{},{},{},{},{},{},{},{},{a1},{a2},{ma},{mas},{},{},{},{},{},{},{}\n",
                report.x,
                fmt17(report.theta),
                fmt17(report.vartheta),
                fmt17(report.mollifier_len),
                fmt17(report.bump_delta),
                fmt17(report.s1),
                fmt17(report.s1_pred),
                fmt17(report.s2),
                fmt17(report.s2_bound),
                fmt17(report.m2),
                fmt17(report.m2_pred),
                fmt17(report.m3),
                fmt17(report.m3_scale),
                fmt17(report.cs_lhs),
                fmt17(report.cs_rhs),
                report.census_total,
                report.census_nonvanishing,
                fmt17(report.proportion),
                fmt17(report.min_l),
                report.s2_bound_is_asymptotic,
            )
        }
    };
    match &cfg.output_path {
        Some(p) => write_out(p, &text)?,
        None => print!("{text}"),
    }
    eprintln!(
        "moments: X={} done in {:.2}s on {} workers (s1/s1_pred={:.4}, m2/m2_pred={:.4})",
        cfg.x,
        start.elapsed().as_secs_f64(),
        cfg.workers,
        report.s1 / report.s1_pred,
        report.m2 / report.m2_pred
    );
    Ok(())
}

type SuiteResult = Result<(), String>;

fn suite_gauss(table: &PrimeTable) -> SuiteResult {
    for n in (1..=301u64).step_by(2) {
        for k in -12..=12i64 {
            let closed = tau(k, n, table).map_err(|e| e.to_string())?;
            let brute = tau_bruteforce(k, n).map_err(|e| e.to_string())?;
            let err = (closed - brute).norm();
            let tol = 1e-8 * (n as f64).sqrt().max(1.0);
            if err > tol {
                return Err(format!("tau({k}, {n}): |closed - brute| = {err:.3e}"));
            }
        }
    }
    Ok(())
}

fn suite_afe_oracle(table: &PrimeTable) -> SuiteResult {
    let omega1 = OmegaTable::build(1).map_err(|e| e.to_string())?;
    let picks: Vec<u64> = primes_1_mod_8(30_000, table)
        .into_iter()
        .filter(|&p| p > 10_000)
        .step_by(37)
        .take(12)
        .collect();
    for p in [17, 41, 73, 89, 97].into_iter().chain(picks) {
        let fast =
            lchi_core::lcentral::afe_value(p, &omega1, table).map_err(|e| e.to_string())?;
        let slow = l_half_oracle(p, table).map_err(|e| e.to_string())?;
        if (fast - slow).abs() > 1e-6 {
            return Err(format!("L(1/2, chi_{p}): afe {fast} vs oracle {slow}"));
        }
    }
    Ok(())
}

fn suite_vaughan(table: &PrimeTable) -> SuiteResult {
    for v in [3.0, 10.0, 50.0] {
        for n in 2..=2000u64 {
            let (t1, t2, t3, t4) = vaughan_decompose(n, v, table).map_err(|e| e.to_string())?;
            let lam = von_mangoldt(n, table).map_err(|e| e.to_string())?;
            let err = (t1 + t2 + t3 + t4 - lam).abs();
            if err > 1e-9 * (1.0 + (n as f64).ln()) {
                return Err(format!("Vaughan at n={n}, V={v}: residual {err:.3e}"));
            }
        }
    }
    Ok(())
}

fn suite_mu_split(table: &PrimeTable, y: f64) -> SuiteResult {
    for n in 1..=20_000u64 {
        let f = table.factorize(n).map_err(|e| e.to_string())?;
        let mu2 = i64::from(f.is_squarefree());
        let split = n_y(n, y, table).map_err(|e| e.to_string())?
            + r_y(n, y, table).map_err(|e| e.to_string())?;
        if split != mu2 {
            return Err(format!("mu^2 split at n={n}, Y={y}: {split} vs {mu2}"));
        }
    }
    Ok(())
}

fn suite_dhalf(table: &PrimeTable) -> SuiteResult {
    let one = Rational::from_integer(1);
    for n in 1..=2000u64 {
        let mut acc = Rational::from_integer(0);
        for d in table.factorize(n).map_err(|e| e.to_string())?.divisors() {
            acc += divisor_dhalf(d, table).map_err(|e| e.to_string())?
                * divisor_dhalf(n / d, table).map_err(|e| e.to_string())?;
        }
        if acc != one {
            return Err(format!("(d_half * d_half)({n}) = {acc}, expected 1"));
        }
    }
    Ok(())
}

fn suite_sieve(table: &PrimeTable, x: u64, vartheta: f64) -> SuiteResult {
    let x = x.clamp(1000, 1_000_000);
    let params =
        SieveParams::new(x, vartheta, SelbergG::for_scale(x as Real)).map_err(|e| e.to_string())?;
    let lambda = build_lambda(params, table).map_err(|e| e.to_string())?;
    if (lambda.get(1) - 1.0).abs() > 1e-12 {
        return Err(format!("lambda_1 = {}, expected 1", lambda.get(1)));
    }
    let primes: Vec<u64> = table
        .primes()
        .iter()
        .copied()
        .filter(|&p| p > x / 2 && p <= x)
        .step_by(101)
        .collect();
    for p in primes {
        let s = sieve_sum(p, &lambda, table).map_err(|e| e.to_string())?;
        if s < 1.0 - 1e-9 {
            return Err(format!("sieve_sum({p}) = {s}, expected >= 1 at a prime"));
        }
    }
    Ok(())
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<(), CliError> {
    let table = PrimeTable::new(1_000_000.max(cfg.x.min(10_000_000)))?;
    let y = cfg.y_value();
    let suites: Vec<(&str, SuiteResult)> = vec![
        ("gauss-closed-form", suite_gauss(&table)),
        ("afe-vs-hurwitz-oracle", suite_afe_oracle(&table)),
        ("vaughan-identity", suite_vaughan(&table)),
        ("mu-square-split", suite_mu_split(&table, y)),
        ("dhalf-convolution", suite_dhalf(&table)),
        ("sieve-pointwise", suite_sieve(&table, cfg.x, cfg.vartheta)),
    ];
    let mut failures = Vec::new();
    for (name, result) in suites {
        match result {
            Ok(()) => println!("ok {name}"),
            Err(msg) => {
                println!("FAIL {name}: {msg}");
                failures.push(name);
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Suite(format!(
            "{} suite(s) failed: {}",
            failures.len(),
            failures.join(", ")
        )))
    }
}

pub fn cmd_optimize(cfg: &RunConfig) -> Result<(), CliError> {
    let t0 = theta0();
    let mut text = String::from("name,theta,value\n");
    text.push_str(&format!("theta0,{},{}\n", fmt17(t0), fmt17(rho(t0))));
    text.push_str(&format!("frak_c,,{}\n", fmt17(constant_c())));
    for i in 1..100 {
        let theta = i as f64 * 0.005;
        text.push_str(&format!("rho,{},{}\n", fmt17(theta), fmt17(rho(theta))));
    }
    match &cfg.output_path {
        Some(p) => write_out(p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn cmd_lvalue(cfg: &RunConfig, p: u64) -> Result<(), CliError> {
    let table = census_table(p.max(100))?;
    if !table.is_prime(p) || p % 8 != 1 {
        return Err(CliError::Config(format!(
            "conductor must be a prime congruent to 1 mod 8, got {p}"
        )));
    }
    let omega1 = OmegaTable::build(1)?;
    let mut cache = open_cache(cfg)?;
    let value = cache.get_or_compute(p, &omega1, &table)?;
    cache.flush()?;
    let text = match cfg.output_format {
        OutputFormat::Csv => format!("p,L\n{p},{}\n", fmt17(value)),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Out {
                p: u64,
                value: f64,
                weights_version: &'static str,
            }
            serde_json::to_string_pretty(&Out {
                p,
                value,
                weights_version: WEIGHTS_VERSION,
            })
            .expect("serializes")
                + "\n"
        }
    };
    match &cfg.output_path {
        Some(path) => write_out(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}
