//! Empirical moment sums over primes p ≡ 1 (mod 8) weighted by
//! (log p)Φ(p/X), paired with their predicted main terms: the mollified
//! first and second moments S₁/S₂, the plain moments M₂/M₃, the shifted
//! estimator M_{α₁,α₂}, and the sieve-weighted majorant S⁺.

use crate::arith::PrimeTable;
use crate::error::{Error, Result};
use crate::lcentral::{a_alpha, afe_value, primes_1_mod_8};
use crate::mollify::{frak_i_closed, h_deriv, h_value, mollifier_m, MollifierSpec};
use crate::sieve::{sieve_sum, LambdaTable};
use crate::special::bump::BumpPhi;
use crate::special::omega::OmegaTable;
use crate::sum::CompensatedSum;
use crate::Real;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Resource(format!("thread pool: {e}")))
}

/// `Σ_{p ≡ 1 (8), p ≤ x} (log p) Φ(p/x) f(p)`, parallel over primes with
/// a fixed-order compensated merge (bit-identical for any worker count).
/// `f` is only invoked where the window weight is nonzero.
pub fn phi_prime_sum<F>(
    x: u64,
    phi: &BumpPhi<Real>,
    table: &PrimeTable,
    workers: usize,
    f: F,
) -> Result<Real>
where
    F: Fn(u64) -> Result<Real> + Sync,
{
    let terms = phi_prime_terms(x, phi, table, workers, f)?;
    let mut acc = CompensatedSum::new();
    for (_, w, v) in &terms {
        acc.add(w * v);
    }
    Ok(acc.value())
}

/// The per-prime triples (p, (log p)Φ(p/x), f(p)) for primes with
/// nonzero window weight, ascending in p.
pub fn phi_prime_terms<F>(
    x: u64,
    phi: &BumpPhi<Real>,
    table: &PrimeTable,
    workers: usize,
    f: F,
) -> Result<Vec<(u64, Real, Real)>>
where
    F: Fn(u64) -> Result<Real> + Sync,
{
    if x > table.limit() {
        return Err(Error::Range(format!(
            "moment bound {x} exceeds sieve limit {}",
            table.limit()
        )));
    }
    let primes: Vec<u64> = primes_1_mod_8(x, table)
        .into_iter()
        .filter(|&p| phi.value(p as Real / x as Real) > 0.0)
        .collect();
    pool(workers)?.install(|| {
        primes
            .par_iter()
            .map(|&p| {
                let w = (p as Real).ln() * phi.value(p as Real / x as Real);
                Ok((p, w, f(p)?))
            })
            .collect()
    })
}

/// Mollified first moment `S₁ = Σ (log p) Φ(p/X) L(1/2,χ_p) M(p)`.
pub fn s1<F>(
    x: u64,
    spec: &MollifierSpec,
    phi: &BumpPhi<Real>,
    table: &PrimeTable,
    workers: usize,
    lvalue: F,
) -> Result<Real>
where
    F: Fn(u64) -> Result<Real> + Sync,
{
    phi_prime_sum(x, phi, table, workers, |p| {
        Ok(lvalue(p)? * mollifier_m(p, spec, table)?)
    })
}

/// Predicted main term of S₁ in un-simplified form,
/// `[1/(1−1/√2)] (H(0) − (log X / 2 log M) H′(0)) (X/4) ∫Φ`.
pub fn s1_pred(x: u64, spec: &MollifierSpec, phi: &BumpPhi<Real>) -> Result<Real> {
    let h0 = h_value(&spec.h, 0.0);
    let h0p = h_deriv(&spec.h, 0.0, 1)?;
    let log_ratio = (x as Real).ln() / (2.0 * spec.m_len.ln());
    Ok((h0 - log_ratio * h0p) / (1.0 - 0.5f64.sqrt()) * (x as Real / 4.0) * phi.mass())
}

/// Mollified second moment `S₂ = Σ (log p) Φ(p/X) L² M²`.
pub fn s2<F>(
    x: u64,
    spec: &MollifierSpec,
    phi: &BumpPhi<Real>,
    table: &PrimeTable,
    workers: usize,
    lvalue: F,
) -> Result<Real>
where
    F: Fn(u64) -> Result<Real> + Sync,
{
    phi_prime_sum(x, phi, table, workers, |p| {
        let l = lvalue(p)?;
        let m = mollifier_m(p, spec, table)?;
        Ok(l * l * m * m)
    })
}

/// Asymptotic upper bound `(1+δ)/(2(1−1/√2)²) · 𝔍/ϑ · X/4`, valid in the
/// regime θ + 2ϑ < 1/2.  Desk-scale violations are observations, not
/// failures; the configuration constraint is enforced here.
pub fn s2_bound(x: u64, spec: &MollifierSpec, vartheta: Real, delta: Real) -> Result<Real> {
    if spec.theta + 2.0 * vartheta >= 0.5 {
        return Err(Error::Config(format!(
            "need theta + 2*vartheta < 1/2, got {} + 2*{}",
            spec.theta, vartheta
        )));
    }
    if vartheta <= 0.0 || delta < 0.0 {
        return Err(Error::Config("vartheta must be positive, delta nonnegative".into()));
    }
    let base = 1.0 - 0.5f64.sqrt();
    Ok((1.0 + delta) / (2.0 * base * base) * frak_i_closed(spec) / vartheta * x as Real / 4.0)
}

/// `𝔠 = (144 ζ(2) (1 − 1/√2)²)^{−1} = 0.0492…`.
pub fn constant_c() -> Real {
    let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
    let base = 1.0 - 0.5f64.sqrt();
    1.0 / (144.0 * zeta2 * base * base)
}

/// Second moment `M₂ = Σ (log p) Φ(p/X) L²`.
pub fn m2<F>(
    x: u64,
    phi: &BumpPhi<Real>,
    table: &PrimeTable,
    workers: usize,
    lvalue: F,
) -> Result<Real>
where
    F: Fn(u64) -> Result<Real> + Sync,
{
    phi_prime_sum(x, phi, table, workers, |p| {
        let l = lvalue(p)?;
        Ok(l * l)
    })
}

/// Window-corrected prediction `𝔠 (X/4) (log X)³ ∫Φ`.
pub fn m2_pred(x: u64, phi: &BumpPhi<Real>) -> Real {
    constant_c() * x as Real / 4.0 * (x as Real).ln().powi(3) * phi.mass()
}

/// Third moment via L³ from the j = 1 evaluation.
pub fn m3_via_cube<F>(
    x: u64,
    phi: &BumpPhi<Real>,
    table: &PrimeTable,
    workers: usize,
    lvalue: F,
) -> Result<Real>
where
    F: Fn(u64) -> Result<Real> + Sync,
{
    phi_prime_sum(x, phi, table, workers, |p| {
        let l = lvalue(p)?;
        Ok(l * l * l)
    })
}

/// Third moment via the direct j = 3 series 𝒟₃.
pub fn m3_via_triple(
    x: u64,
    phi: &BumpPhi<Real>,
    omega3: &OmegaTable<Real>,
    table: &PrimeTable,
    workers: usize,
) -> Result<Real> {
    if omega3.j() != 3 {
        return Err(Error::Config("m3_via_triple needs the j = 3 weight".into()));
    }
    phi_prime_sum(x, phi, table, workers, |p| afe_value(p, omega3, table))
}

/// Shifted-moment estimator `M_{α₁,α₂} = Σ (log p) Φ(p/X) A_{α₁}(p) A_{α₂}(p)`.
pub fn m_alpha(
    x: u64,
    alpha1: Real,
    alpha2: Real,
    phi: &BumpPhi<Real>,
    omega1: &OmegaTable<Real>,
    table: &PrimeTable,
    workers: usize,
) -> Result<Real> {
    if alpha1 > alpha2 {
        return Err(Error::Config(format!("need α1 ≤ α2, got {alpha1} > {alpha2}")));
    }
    phi_prime_sum(x, phi, table, workers, |p| {
        Ok(a_alpha(p, alpha1, omega1, table)? * a_alpha(p, alpha2, omega1, table)?)
    })
}

/// Sieve-weighted majorant
/// `S⁺ = Σ_{n ≡ 1 (8)} μ²(n) Φ(n/X) (Σ_{d|n} λ_d) L(1/2,χ_n)² M(n)²`,
/// with `S₂ ≤ (log X) S⁺` pointwise by positivity.
pub fn s_plus(
    x: u64,
    spec: &MollifierSpec,
    lambda: &LambdaTable,
    phi: &BumpPhi<Real>,
    omega1: &OmegaTable<Real>,
    table: &PrimeTable,
    workers: usize,
) -> Result<Real> {
    if x > table.limit() {
        return Err(Error::Range(format!("bound {x} exceeds sieve limit")));
    }
    let ns: Vec<u64> = (1..=x)
        .filter(|&n| n % 8 == 1 && n > 1)
        .filter(|&n| phi.value(n as Real / x as Real) > 0.0)
        .collect();
    let terms: Vec<Real> = pool(workers)?.install(|| {
        ns.par_iter()
            .map(|&n| {
                if !table.factorize(n)?.is_squarefree() {
                    return Ok(0.0);
                }
                let l = afe_value(n, omega1, table)?;
                let m = mollifier_m(n, spec, table)?;
                let s = sieve_sum(n, lambda, table)?;
                Ok(phi.value(n as Real / x as Real) * s * l * l * m * m)
            })
            .collect::<Result<_>>()
    })?;
    let mut acc = CompensatedSum::new();
    for t in &terms {
        acc.add(*t);
    }
    Ok(acc.value())
}

/// One full empirical run paired with its predictions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentReport {
    pub x: u64,
    pub theta: Real,
    pub vartheta: Real,
    pub mollifier_len: Real,
    pub bump_delta: Real,
    pub s1: Real,
    pub s1_pred: Real,
    pub s2: Real,
    pub s2_bound: Real,
    pub m2: Real,
    pub m2_pred: Real,
    pub m3: Real,
    pub m3_scale: Real,
    pub alpha: Option<(Real, Real)>,
    pub malpha: Option<Real>,
    pub malpha_scale: Option<Real>,
    pub cs_lhs: Real,
    pub cs_rhs: Real,
    pub census_total: u64,
    pub census_nonvanishing: u64,
    pub proportion: Real,
    pub min_l: Real,
    /// the asymptotic bound S₂ ≤ s2_bound is not enforced at desk scale
    pub s2_bound_is_asymptotic: bool,
}

pub struct MomentSettings {
    pub x: u64,
    pub theta: Real,
    pub vartheta: Real,
    pub delta: Real,
    pub tol: Real,
    pub alpha: Option<(Real, Real)>,
    pub workers: usize,
}

/// Computes every estimator from a single parallel pass of per-prime
/// values (L, M), so the report is deterministic and cheap to assemble.
pub fn compute_report<F>(
    settings: &MomentSettings,
    spec: &MollifierSpec,
    phi: &BumpPhi<Real>,
    omega1: &OmegaTable<Real>,
    table: &PrimeTable,
    lvalue: F,
) -> Result<MomentReport>
where
    F: Fn(u64) -> Result<Real> + Sync,
{
    let x = settings.x;
    let terms = phi_prime_terms(x, phi, table, settings.workers, &lvalue)?;
    let pairs: Vec<(u64, Real, Real, Real)> = pool(settings.workers)?.install(|| {
        terms
            .par_iter()
            .map(|&(p, w, l)| Ok((p, w, l, mollifier_m(p, spec, table)?)))
            .collect::<Result<_>>()
    })?;

    let mut s1_acc = CompensatedSum::new();
    let mut s2_acc = CompensatedSum::new();
    let mut m2_acc = CompensatedSum::new();
    let mut m3_acc = CompensatedSum::new();
    let mut mass_nonzero = CompensatedSum::new();
    let mut nonvanishing = 0u64;
    let mut min_l = Real::INFINITY;
    for &(_, w, l, m) in &pairs {
        s1_acc.add(w * l * m);
        s2_acc.add(w * l * l * m * m);
        m2_acc.add(w * l * l);
        m3_acc.add(w * l * l * l);
        if l.abs() > settings.tol {
            nonvanishing += 1;
            mass_nonzero.add(w);
        }
        min_l = min_l.min(l);
    }

    let malpha = match settings.alpha {
        Some((a1, a2)) => Some(m_alpha(x, a1, a2, phi, omega1, table, settings.workers)?),
        None => None,
    };
    let log_x = (x as Real).ln();
    let s1_val = s1_acc.value();
    let s2_val = s2_acc.value();
    Ok(MomentReport {
        x,
        theta: settings.theta,
        vartheta: settings.vartheta,
        mollifier_len: spec.m_len,
        bump_delta: phi.delta(),
        s1: s1_val,
        s1_pred: s1_pred(x, spec, phi)?,
        s2: s2_val,
        s2_bound: s2_bound(x, spec, settings.vartheta, settings.delta)?,
        m2: m2_acc.value(),
        m2_pred: m2_pred(x, phi),
        m3: m3_acc.value(),
        m3_scale: m3_acc.value() / (x as Real * log_x.powi(6)),
        alpha: settings.alpha,
        malpha,
        malpha_scale: malpha
            .map(|v| v / (0.5 * constant_c() * x as Real / 4.0 * log_x.powi(3))),
        cs_lhs: s1_val * s1_val,
        cs_rhs: mass_nonzero.value() * s2_val,
        census_total: pairs.len() as u64,
        census_nonvanishing: nonvanishing,
        proportion: if pairs.is_empty() {
            0.0
        } else {
            nonvanishing as Real / pairs.len() as Real
        },
        min_l,
        s2_bound_is_asymptotic: true,
    })
}
