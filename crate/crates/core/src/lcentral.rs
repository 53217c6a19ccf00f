//! Central values L(1/2, χ_n) for real quadratic characters χ_n = (n/·):
//! the weighted-Dirichlet-series evaluation 𝒟_j(n) of L(1/2,χ_n)^j, its
//! generalization A_α(p), a slow Hurwitz-zeta oracle, the resonator
//! polynomial, and a parallel census over prime conductors.

use crate::arith::{divisor_dk, kronecker, PrimeTable};
use crate::error::{Error, Result};
use crate::special::hurwitz::hurwitz_zeta_depth;
use crate::special::omega::{support_cutoff, OmegaTable};
use crate::sum::CompensatedSum;
use crate::Real;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Hard ceiling on summed terms per evaluation; hitting it flags the
/// record as truncated (tail no longer certified by the decay bound).
pub const TERM_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Afe,
    Oracle,
}

/// One evaluated central value (or power thereof).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LValueRecord {
    pub n: u64,
    pub value: Real,
    pub j: u8,
    pub method: Method,
    pub terms_used: u64,
    /// true when the term cap cut the sum before the certified tail
    pub truncated: bool,
}

/// `2 / (1 − 1/√2)^{2j}`, the prefactor of the series for L^j.
pub fn afe_prefactor(j: u8) -> Real {
    2.0 / (1.0 - 0.5f64.sqrt()).powi(2 * j as i32)
}

fn check_conductor(n: u64, table: &PrimeTable, modulus: u64) -> Result<()> {
    if n <= 1 || n % modulus != 1 {
        return Err(Error::Domain(format!(
            "conductor {n} must be > 1 and ≡ 1 (mod {modulus})"
        )));
    }
    if !table.factorize(n)?.is_squarefree() {
        return Err(Error::Domain(format!("conductor {n} must be squarefree")));
    }
    Ok(())
}

/// Slow independent oracle:
/// `L(1/2, χ_n) = n^{−1/2} Σ_{a=1}^{n} χ_n(a) ζ(1/2, a/n)`.
pub fn l_half_oracle(n: u64, table: &PrimeTable) -> Result<Real> {
    l_half_oracle_depth(n, table, 28)
}

/// Oracle with an explicit Euler–Maclaurin depth, for self-consistency checks.
pub fn l_half_oracle_depth(n: u64, table: &PrimeTable, depth: usize) -> Result<Real> {
    check_conductor(n, table, 4)?;
    if n > 100_000 {
        return Err(Error::Range(format!(
            "oracle capped at n = 10^5 (O(n) Hurwitz evaluations), got {n}"
        )));
    }
    let mut acc = CompensatedSum::new();
    for a in 1..n {
        let chi = kronecker(n as i64, a as i64);
        if chi == 0 {
            continue;
        }
        let z = hurwitz_zeta_depth(0.5, a as Real / n as Real, depth)?;
        acc.add(chi as Real * z);
    }
    Ok(acc.value() / (n as Real).sqrt())
}

/// `𝒟_j(n) = [2/(1−1/√2)^{2j}] Σ_{ν odd} χ_n(ν) d_j(ν) ν^{−1/2} ω_j(ν (π/n)^{j/2})`,
/// which equals `L(1/2, χ_n)^j` for squarefree n ≡ 1 (mod 8).
pub fn afe(n: u64, omega: &OmegaTable<Real>, table: &PrimeTable) -> Result<LValueRecord> {
    check_conductor(n, table, 8)?;
    let j = omega.j();
    let ratio = (std::f64::consts::PI / n as Real).powf(j as Real / 2.0);
    let nu_max = support_cutoff(j) / ratio;
    let mut acc = CompensatedSum::new();
    let mut terms = 0u64;
    let mut truncated = false;
    let mut nu = 1u64;
    while (nu as Real) < nu_max {
        if terms == TERM_CAP {
            truncated = true;
            break;
        }
        let chi = kronecker(n as i64, nu as i64);
        if chi != 0 {
            let d = if j == 1 {
                1.0
            } else {
                divisor_dk(j as u32, nu, table)? as Real
            };
            acc.add(chi as Real * d / (nu as Real).sqrt() * omega.eval(nu as Real * ratio));
        }
        terms += 1;
        nu += 2;
    }
    Ok(LValueRecord {
        n,
        value: afe_prefactor(j) * acc.value(),
        j,
        method: Method::Afe,
        terms_used: terms.max(1),
        truncated,
    })
}

/// The value of [`afe`] alone.
pub fn afe_value(n: u64, omega: &OmegaTable<Real>, table: &PrimeTable) -> Result<Real> {
    Ok(afe(n, omega, table)?.value)
}

/// `A_α(p) = [2/(1−1/√2)²] Σ_{ν odd} χ_p(ν) ν^{−1/2} ω_1(ν √(π/p^α))`;
/// A_1(p) = L(1/2, χ_p).
pub fn a_alpha(
    p: u64,
    alpha: Real,
    omega: &OmegaTable<Real>,
    table: &PrimeTable,
) -> Result<Real> {
    if alpha <= 0.0 || alpha > 1.0 {
        return Err(Error::Domain(format!("a_alpha requires α in (0, 1], got {alpha}")));
    }
    if omega.j() != 1 {
        return Err(Error::Config("a_alpha uses the j = 1 weight".into()));
    }
    check_conductor(p, table, 8)?;
    if !table.is_prime(p) {
        return Err(Error::Domain(format!("a_alpha requires prime conductor, got {p}")));
    }
    let ratio = (std::f64::consts::PI / (p as Real).powf(alpha)).sqrt();
    let nu_max = support_cutoff(1) / ratio;
    let mut acc = CompensatedSum::new();
    let mut terms = 0u64;
    let mut nu = 1u64;
    while (nu as Real) < nu_max && terms < TERM_CAP {
        let chi = kronecker(p as i64, nu as i64);
        if chi != 0 {
            acc.add(chi as Real / (nu as Real).sqrt() * omega.eval(nu as Real * ratio));
        }
        terms += 1;
        nu += 2;
    }
    Ok(afe_prefactor(1) * acc.value())
}

/// Resonator polynomial `R(p) = Σ_{n ≤ cutoff} d_{1/2}(n) χ_p(n) / √n`.
pub fn resonator(p: u64, cutoff: u64, table: &PrimeTable) -> Result<Real> {
    if cutoff < 1 {
        return Err(Error::Domain("resonator cutoff must be ≥ 1".into()));
    }
    let mut acc = CompensatedSum::new();
    for n in 1..=cutoff {
        let chi = kronecker(p as i64, n as i64);
        if chi == 0 {
            continue;
        }
        let d = crate::arith::divisor_dhalf(n, table)?;
        let d = *d.numer() as Real / *d.denom() as Real;
        acc.add(d * chi as Real / (n as Real).sqrt());
    }
    Ok(acc.value())
}

/// Primes p ≤ x with p ≡ 1 (mod 8), ascending.
pub fn primes_1_mod_8(x: u64, table: &PrimeTable) -> Vec<u64> {
    table
        .primes()
        .iter()
        .copied()
        .take_while(|&p| p <= x)
        .filter(|&p| p % 8 == 1)
        .collect()
}

/// Histogram layout for census values: bins of width 1/4 on [−1, 9);
/// out-of-range values land in the nearest edge bin.
pub const HIST_BINS: usize = 40;
pub const HIST_MIN: Real = -1.0;
pub const HIST_WIDTH: Real = 0.25;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusRecord {
    pub x: u64,
    pub tol: Real,
    pub count_total: u64,
    pub count_nonvanishing: u64,
    pub proportion: Real,
    pub min_value: Real,
    pub min_p: u64,
    pub histogram: Vec<u64>,
    /// conductors with |L| in (tol, 100·tol]: reported, not asserted
    pub near_threshold: Vec<u64>,
    /// (p, L(1/2, χ_p)) in ascending p
    pub values: Vec<(u64, Real)>,
}

/// Central values over all primes p ≡ 1 (mod 8), p ≤ x.  Work is split
/// across `workers` threads; per-prime sums are independent and the
/// merge runs in ascending prime order, so the result is bit-identical
/// for any worker count.
pub fn census(
    x: u64,
    tol: Real,
    omega: &OmegaTable<Real>,
    table: &PrimeTable,
    workers: usize,
) -> Result<CensusRecord> {
    if x > table.limit() {
        return Err(Error::Range(format!(
            "census bound {x} exceeds sieve limit {}",
            table.limit()
        )));
    }
    let primes = primes_1_mod_8(x, table);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    let values: Vec<(u64, Real)> = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| afe_value(p, omega, table).map(|v| (p, v)))
            .collect::<Result<_>>()
    })?;

    let mut histogram = vec![0u64; HIST_BINS];
    let mut nonvanishing = 0u64;
    let mut min_value = Real::INFINITY;
    let mut min_p = 0u64;
    let mut near_threshold = Vec::new();
    for &(p, v) in &values {
        let bin = (((v - HIST_MIN) / HIST_WIDTH).floor() as i64).clamp(0, HIST_BINS as i64 - 1);
        histogram[bin as usize] += 1;
        if v.abs() > tol {
            nonvanishing += 1;
        }
        if v.abs() > tol && v.abs() <= 100.0 * tol {
            near_threshold.push(p);
        }
        if v < min_value {
            min_value = v;
            min_p = p;
        }
    }
    let count_total = values.len() as u64;
    Ok(CensusRecord {
        x,
        tol,
        count_total,
        count_nonvanishing: nonvanishing,
        proportion: if count_total == 0 {
            0.0
        } else {
            nonvanishing as Real / count_total as Real
        },
        min_value,
        min_p,
        histogram,
        near_threshold,
        values,
    })
}
