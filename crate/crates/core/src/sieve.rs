//! Combined Brun/Selberg upper-bound sieve: a Brun preliminary factor
//! clears primes below z₀ and an analytic Selberg square handles the
//! range (z₀, R], giving coefficients λ_d with
//! `1_{prime}(n) ≤ Σ_{d|n} λ_d` and λ_d supported on squarefree d ≤ D.

use crate::arith::{moebius, PrimeTable};
use crate::error::{Error, Result};
use crate::special::quad::adaptive_simpson;
use crate::Real;
use std::collections::BTreeMap;
use std::io::Write;

/// Smoothing weight for the Selberg square: `G(t) = 1 − t` up to
/// `1 − δ_G`, then a C^∞ taper to zero at 1; supported in [−1, 1]
/// (mirrored; only t ≥ 0 is ever evaluated by the sieve).
#[derive(Clone, Copy, Debug)]
pub enum SelbergG {
    Smooth { delta: Real },
    /// the plain `max(1 − t, 0)` cross-check mode
    Classical,
}

fn smoothstep(u: Real) -> Real {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let f = (-1.0 / u).exp();
    let g = (-1.0 / (1.0 - u)).exp();
    f / (f + g)
}

impl SelbergG {
    /// Default width 1/log log X, clamped so desk scales stay smooth.
    pub fn for_scale(x: Real) -> Self {
        let delta = (1.0 / x.ln().ln()).clamp(0.05, 0.5);
        SelbergG::Smooth { delta }
    }

    pub fn delta(&self) -> Real {
        match *self {
            SelbergG::Smooth { delta } => delta,
            SelbergG::Classical => 0.0,
        }
    }

    pub fn value(&self, t: Real) -> Real {
        let t = t.abs();
        if t >= 1.0 {
            return 0.0;
        }
        match *self {
            SelbergG::Classical => 1.0 - t,
            SelbergG::Smooth { delta } => (1.0 - t) * smoothstep((1.0 - t) / delta),
        }
    }

    /// ∫₀^∞ G′(t)² dt by quadrature on a central-difference derivative.
    pub fn deriv_sq_integral(&self) -> Real {
        let h = 1e-6;
        adaptive_simpson(
            |t: Real| {
                let d = (self.value(t + h) - self.value(t - h)) / (2.0 * h);
                d * d
            },
            0.0,
            1.0,
            1e-10,
        )
    }
}

/// Sieve geometry: z₀ = exp((log X)^{1/3}), r₀ = ⌊(log X)^{1/3}⌋,
/// R = X^ϑ, D = R² exp(2 (log X)^{2/3}).
#[derive(Clone, Copy, Debug)]
pub struct SieveParams {
    pub x: u64,
    pub vartheta: Real,
    pub z0: Real,
    pub r0: u32,
    pub r: Real,
    pub d: Real,
    pub g: SelbergG,
}

impl SieveParams {
    pub fn new(x: u64, vartheta: Real, g: SelbergG) -> Result<Self> {
        if x < 3 {
            return Err(Error::Config(format!("sieve scale X = {x} too small")));
        }
        if !(0.0..0.5).contains(&vartheta) || vartheta <= 0.0 {
            return Err(Error::Config(format!(
                "vartheta must lie in (0, 1/2), got {vartheta}"
            )));
        }
        let log_x = (x as Real).ln();
        let cbrt = log_x.powf(1.0 / 3.0);
        let z0 = cbrt.exp();
        let r0 = cbrt.floor() as u32;
        let r = (x as Real).powf(vartheta);
        let d = r * r * (2.0 * log_x.powf(2.0 / 3.0)).exp();
        Ok(Self {
            x,
            vartheta,
            z0,
            r0,
            r,
            d,
            g,
        })
    }
}

/// Sparse λ_d table; entries only for squarefree d ≤ D.
pub struct LambdaTable {
    pub params: SieveParams,
    entries: BTreeMap<u64, Real>,
}

/// Squarefree integers ≤ bound composed only of primes > z0.
fn rough_squarefree(bound: Real, z0: Real, table: &PrimeTable) -> Vec<u64> {
    let mut out = vec![1u64];
    let primes: Vec<u64> = table
        .primes()
        .iter()
        .copied()
        .skip_while(|&p| (p as Real) <= z0)
        .take_while(|&p| (p as Real) <= bound)
        .collect();
    let mut frontier = vec![(1u64, 0usize)];
    while let Some((m, i)) = frontier.pop() {
        for (k, &p) in primes.iter().enumerate().skip(i) {
            let next = m * p;
            if (next as Real) > bound {
                break;
            }
            out.push(next);
            frontier.push((next, k + 1));
        }
    }
    out.sort_unstable();
    out
}

/// Divisors of P(z0) with at most `max_omega` prime factors, paired with μ.
fn brun_factors(z0: Real, max_omega: u32, table: &PrimeTable) -> Vec<(u64, i64)> {
    let primes: Vec<u64> = table
        .primes()
        .iter()
        .copied()
        .take_while(|&p| (p as Real) <= z0)
        .collect();
    let mut out = vec![(1u64, 1i64)];
    let mut frontier = vec![(1u64, 1i64, 0usize, 0u32)];
    while let Some((b, mu, i, k)) = frontier.pop() {
        if k == max_omega {
            continue;
        }
        for (idx, &p) in primes.iter().enumerate().skip(i) {
            let next = b.checked_mul(p).expect("Brun factor overflow");
            out.push((next, -mu));
            frontier.push((next, -mu, idx + 1, k + 1));
        }
    }
    out
}

/// The defining triple sum: for every b | P(z₀) with ω(b) ≤ 2r₀ and
/// squarefree m, n ≤ R coprime to P(z₀),
/// `λ_{b·[m,n]} += μ(b) μ(m) μ(n) G(log m/log R) G(log n/log R)`.
pub fn build_lambda(params: SieveParams, table: &PrimeTable) -> Result<LambdaTable> {
    build_lambda_with_budget(params, table, 100_000_000)
}

pub fn build_lambda_with_budget(
    params: SieveParams,
    table: &PrimeTable,
    max_entries: usize,
) -> Result<LambdaTable> {
    let ms = rough_squarefree(params.r, params.z0, table);
    let brun = brun_factors(params.z0, 2 * params.r0, table);
    let log_r = params.r.ln();
    let mut entries: BTreeMap<u64, Real> = BTreeMap::new();
    for &(b, mu_b) in &brun {
        for &m in &ms {
            let mu_m = moebius(m, table)?;
            let gm = params.g.value((m as Real).ln() / log_r);
            if gm == 0.0 && m > 1 {
                continue;
            }
            for &n in &ms {
                let mu_n = moebius(n, table)?;
                let gn = params.g.value((n as Real).ln() / log_r);
                if gn == 0.0 && n > 1 {
                    continue;
                }
                let lcm = m / num_integer::gcd(m, n) * n;
                let d = b * lcm;
                *entries.entry(d).or_insert(0.0) += (mu_b * mu_m * mu_n) as Real * gm * gn;
                if entries.len() > max_entries {
                    return Err(Error::Resource(format!(
                        "lambda table exceeds entry budget {max_entries}"
                    )));
                }
            }
        }
    }
    entries.retain(|_, v| *v != 0.0);
    Ok(LambdaTable { params, entries })
}

impl LambdaTable {
    pub fn get(&self, d: u64) -> Real {
        self.entries.get(&d).copied().unwrap_or(0.0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, Real)> + '_ {
        self.entries.iter().map(|(&d, &v)| (d, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_abs(&self) -> Real {
        self.entries.values().fold(0.0, |a, &v| a.max(v.abs()))
    }

    /// Audit export: `d,lambda_d` rows, 17 significant digits.
    pub fn write_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "d,lambda_d")?;
        for (d, v) in self.entries() {
            writeln!(w, "{d},{:.16e}", v)?;
        }
        Ok(())
    }
}

/// `Σ_{d|n} λ_d` by divisor enumeration against the sparse table.
pub fn sieve_sum(n: u64, lambda: &LambdaTable, table: &PrimeTable) -> Result<Real> {
    let mut acc = 0.0;
    for d in table.factorize(n)?.divisors() {
        acc += lambda.get(d);
    }
    Ok(acc)
}

/// Diagnostic pair for the fundamental lemma: the truncated Möbius sum
/// over b | P(z₀) with ω(b) ≤ r and (b, ℓ) = 1 against the full Euler
/// product. Returned, not asserted — the truncation error constant is
/// not explicit.
pub fn fundamental_lemma_check(
    g_on_prime: impl Fn(u64) -> Real,
    r: u32,
    z0: Real,
    ell: u64,
    table: &PrimeTable,
) -> (Real, Real) {
    let primes: Vec<u64> = table
        .primes()
        .iter()
        .copied()
        .take_while(|&p| (p as Real) <= z0)
        .collect();
    let mut lhs = 0.0;
    // depth-first over squarefree b with ω(b) ≤ r, tracking μ(b)g(b)/b
    let mut stack = vec![(1.0f64, 0usize, 0u32)];
    while let Some((weight, i, k)) = stack.pop() {
        if k == 0 && i == 0 {
            lhs += weight; // b = 1 term
        }
        if k == r {
            continue;
        }
        for (idx, &p) in primes.iter().enumerate().skip(i) {
            if ell % p == 0 {
                continue;
            }
            let w = -weight * g_on_prime(p) / p as Real;
            lhs += w;
            stack.push((w, idx + 1, k + 1));
        }
    }
    let rhs = primes
        .iter()
        .filter(|&&p| ell % p != 0)
        .map(|&p| 1.0 - g_on_prime(p) / p as Real)
        .product();
    (lhs, rhs)
}
