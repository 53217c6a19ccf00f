//! Quadratic Gauss sums for odd moduli: the defining sums `tau_k(n)`,
//! the normalized `G_k(n)` with its multiplicative closed form, and the
//! prefactor relating the two.

use crate::arith::{euler_phi, kronecker, PrimeTable};
use crate::error::{Error, Result};
use crate::{Complex, Real};

/// p-adic valuation of k, with `None` standing for the infinite valuation
/// at k = 0 (every power of p divides 0).
fn valuation(k: i64, p: u64) -> Option<u32> {
    if k == 0 {
        return None;
    }
    let mut k = k.unsigned_abs();
    let mut a = 0;
    while k % p == 0 {
        k /= p;
        a += 1;
    }
    Some(a)
}

fn check_odd(n: u64) -> Result<()> {
    if n % 2 == 0 {
        return Err(Error::Domain(format!("Gauss sum modulus {n} must be odd")));
    }
    Ok(())
}

/// `tau_k(n) = sum_{a mod n} (a/n) e(ak/n)` by direct summation; O(n).
pub fn tau_bruteforce(k: i64, n: u64) -> Result<Complex> {
    check_odd(n)?;
    if n > 100_000 {
        return Err(Error::Range(format!(
            "brute-force Gauss sum capped at n = 10^5, got {n}"
        )));
    }
    let mut acc = Complex::new(0.0, 0.0);
    for a in 1..n {
        let chi = kronecker(a as i64, n as i64);
        if chi == 0 {
            continue;
        }
        // e(ak/n) with the phase reduced mod n before the division
        let r = ((a as i64 * k).rem_euclid(n as i64)) as Real / n as Real;
        let phase = 2.0 * std::f64::consts::PI * r;
        acc += Complex::new(phase.cos(), phase.sin()).scale(chi as Real);
    }
    if n == 1 {
        acc = Complex::new(1.0, 0.0);
    }
    Ok(acc)
}

/// `G_k(p^beta)` from the five-case prime-power evaluation.
fn gauss_prime_power(k: i64, p: u64, beta: u32, table: &PrimeTable) -> Result<Complex> {
    let alpha = valuation(k, p);
    let q = p.pow(beta);
    // alpha = None means "infinite": beta <= alpha always holds,
    // beta >= alpha + 2 and beta = alpha + 1 never do.
    let le_alpha = alpha.map_or(true, |a| beta <= a);
    let value = if le_alpha {
        if beta % 2 == 1 {
            Complex::new(0.0, 0.0)
        } else {
            Complex::new(euler_phi(q, table)? as Real, 0.0)
        }
    } else {
        let a = alpha.unwrap();
        if beta == a + 1 {
            let pa = p.pow(a);
            if beta % 2 == 0 {
                Complex::new(-(pa as Real), 0.0)
            } else {
                let chi = kronecker(k / pa as i64, p as i64);
                Complex::new(chi as Real * pa as Real * (p as Real).sqrt(), 0.0)
            }
        } else {
            Complex::new(0.0, 0.0)
        }
    };
    Ok(value)
}

/// `G_k(n)` via multiplicativity over the factorization of odd `n`.
pub fn gauss_g(k: i64, n: u64, table: &PrimeTable) -> Result<Complex> {
    check_odd(n)?;
    let f = table.factorize(n)?;
    let mut acc = Complex::new(1.0, 0.0);
    for &(p, e) in &f.factors {
        acc *= gauss_prime_power(k, p, e, table)?;
    }
    Ok(acc)
}

/// Prefactor `(1+i)/2 + (-1/n)(1-i)/2` relating `tau_k` to `G_k`.
pub fn tau_prefactor(n: u64) -> Complex {
    let eps = kronecker(-1, n as i64) as Real;
    Complex::new((1.0 + eps) / 2.0, (1.0 - eps) / 2.0)
}

/// Closed-form `tau_k(n) = prefactor(n) * G_k(n)` for odd `n`.
pub fn tau(k: i64, n: u64, table: &PrimeTable) -> Result<Complex> {
    Ok(tau_prefactor(n) * gauss_g(k, n, table)?)
}
