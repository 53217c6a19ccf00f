//! Integer arithmetic: prime sieving, factorization, multiplicative
//! functions, the Kronecker symbol, and the exact combinatorial identities
//! (Vaughan decomposition, the squared-Moebius split).

use crate::error::{Error, Result};
use crate::Rational;

/// Smallest-prime-factor sieve up to a fixed limit.
///
/// Immutable after construction; shareable across workers.
pub struct PrimeTable {
    limit: u64,
    /// `spf[i]` is the smallest prime factor of `i` for `i >= 2`.
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Result<Self> {
        if !(2..=1_000_000_000).contains(&limit) {
            return Err(Error::Config(format!(
                "sieve limit {limit} outside [2, 10^9]"
            )));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        // linear sieve: each composite is crossed exactly once
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            for &p in &primes {
                let p = p as usize;
                if p > spf[i] as usize || i * p > n {
                    break;
                }
                spf[i * p] = p as u32;
            }
        }
        Ok(Self { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Result<u64> {
        self.check_range(n)?;
        Ok(self.spf[n as usize] as u64)
    }

    fn check_range(&self, n: u64) -> Result<()> {
        if n < 2 || n > self.limit {
            return Err(Error::Range(format!(
                "{n} outside sieve range [2, {}]",
                self.limit
            )));
        }
        Ok(())
    }

    /// Factorization of `n >= 1` with primes in ascending order.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::Domain("cannot factorize 0".into()));
        }
        let mut factors = Vec::new();
        if n > 1 {
            self.check_range(n)?;
            let mut m = n as usize;
            while m > 1 {
                let p = self.spf[m] as u64;
                let mut e = 0u32;
                while m as u64 % p == 0 {
                    m /= p as usize;
                    e += 1;
                }
                factors.push((p, e));
            }
        }
        Ok(Factorization { value: n, factors })
    }
}

/// Prime factorization `value = prod p^e` with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn distinct_prime_count(&self) -> u32 {
        self.factors.len() as u32
    }

    /// All divisors of `value`, unsorted.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs
    }
}

/// Moebius function via the smallest-prime-factor table.
pub fn moebius(n: u64, table: &PrimeTable) -> Result<i64> {
    let f = table.factorize(n)?;
    if !f.is_squarefree() {
        return Ok(0);
    }
    Ok(if f.factors.len() % 2 == 0 { 1 } else { -1 })
}

/// Euler phi function.
pub fn euler_phi(n: u64, table: &PrimeTable) -> Result<u64> {
    let f = table.factorize(n)?;
    let mut out = 1u64;
    for &(p, e) in &f.factors {
        out *= (p - 1) * p.pow(e - 1);
    }
    Ok(out)
}

/// k-fold divisor function `d_k(n)`; `d_1 = 1`, `d_2` is the divisor count.
pub fn divisor_dk(k: u32, n: u64, table: &PrimeTable) -> Result<u64> {
    if k == 0 {
        return Err(Error::Domain("d_k requires k >= 1".into()));
    }
    let f = table.factorize(n)?;
    let mut out = 1u64;
    for &(_, e) in &f.factors {
        // d_k(p^e) = C(e + k - 1, k - 1)
        out *= binomial(e as u64 + k as u64 - 1, k as u64 - 1);
    }
    Ok(out)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut out = 1u64;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// The multiplicative square root of the constant function 1 under
/// Dirichlet convolution: `(d_half * d_half)(n) = 1` for all `n`.
///
/// Exact rational arithmetic; prime-power values depend only on the
/// exponent and satisfy `sum_{i=0}^{e} c_i c_{e-i} = 1` with `c_0 = 1`.
pub fn divisor_dhalf(n: u64, table: &PrimeTable) -> Result<Rational> {
    let f = table.factorize(n)?;
    let mut out = Rational::new(1, 1);
    for &(_, e) in &f.factors {
        out *= dhalf_prime_power(e);
    }
    Ok(out)
}

/// `d_half(p^e)`, solved from the defining convolution recurrence.
pub fn dhalf_prime_power(e: u32) -> Rational {
    let e = e as usize;
    let mut c = vec![Rational::new(1, 1)];
    for m in 1..=e {
        // 2 c_m + sum_{i=1}^{m-1} c_i c_{m-i} = 1
        let mut inner = Rational::new(0, 1);
        for i in 1..m {
            inner += c[i] * c[m - i];
        }
        c.push((Rational::new(1, 1) - inner) / Rational::new(2, 1));
    }
    c[e]
}

/// Kronecker symbol `(a/m)` for nonzero `a` and arbitrary `m`.
///
/// Agrees with the Jacobi symbol for odd positive `m` and with the
/// Legendre symbol for odd prime `m` not dividing `a`. Conventions for
/// `m = 0`, negative `m`, and even `m` follow the standard completion.
pub fn kronecker(a: i64, m: i64) -> i64 {
    debug_assert!(a != 0, "Kronecker symbol defined for nonzero top entry");
    if m == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut sign = 1i64;
    let mut m = m;
    if m < 0 {
        m = -m;
        if a < 0 {
            sign = -sign;
        }
    }
    let tz = m.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a/2) = +1 iff a ≡ ±1 (mod 8)
        let a8 = a.rem_euclid(8);
        if tz % 2 == 1 && (a8 == 3 || a8 == 5) {
            sign = -sign;
        }
        m >>= tz;
    }
    sign * jacobi_odd(a.rem_euclid(m), m)
}

/// Jacobi symbol `(a/m)` for odd positive `m` and `0 <= a < m`.
fn jacobi_odd(mut a: i64, mut m: i64) -> i64 {
    debug_assert!(m > 0 && m % 2 == 1 && (0..m).contains(&a));
    let mut result = 1i64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let m8 = m % 8;
            if m8 == 3 || m8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

/// Unique decomposition `n = s * t^2` with `s` square-free.
pub fn squarefree_decompose(n: u64, table: &PrimeTable) -> Result<(u64, u64)> {
    let f = table.factorize(n)?;
    let mut s = 1u64;
    let mut t = 1u64;
    for &(p, e) in &f.factors {
        if e % 2 == 1 {
            s *= p;
        }
        t *= p.pow(e / 2);
    }
    Ok((s, t))
}

/// Writes `4m = m1 * m2^2` with `m1` a fundamental discriminant (or 1)
/// and `m2` positive.
pub fn fundamental_discriminant_decompose(m: i64, table: &PrimeTable) -> Result<(i64, u64)> {
    if m == 0 {
        return Err(Error::Domain("4m = m1*m2^2 requires m != 0".into()));
    }
    let (s_abs, t) = squarefree_decompose(m.unsigned_abs(), table)?;
    let s = if m < 0 { -(s_abs as i64) } else { s_abs as i64 };
    if s.rem_euclid(4) == 1 {
        Ok((s, 2 * t))
    } else {
        Ok((4 * s, t))
    }
}

/// Von Mangoldt function.
pub fn von_mangoldt(n: u64, table: &PrimeTable) -> Result<f64> {
    if n == 1 {
        return Ok(0.0);
    }
    let f = table.factorize(n)?;
    if f.factors.len() == 1 {
        Ok((f.factors[0].0 as f64).ln())
    } else {
        Ok(0.0)
    }
}

/// The four terms of Vaughan's identity at cutoff `V`:
/// `Lambda(n) = t1 + t2 + t3 + t4` with
/// `t1 = Lambda_{<=V}(n)`, `t2 = (mu_{<=V} * log)(n)`,
/// `t3 = -(mu_{<=V} * Lambda_{<=V} * 1)(n)`,
/// `t4 = (mu_{>V} * Lambda_{>V} * 1)(n)`.
pub fn vaughan_decompose(n: u64, v: f64, table: &PrimeTable) -> Result<(f64, f64, f64, f64)> {
    if v <= 1.0 {
        return Err(Error::Domain("Vaughan cutoff must satisfy V > 1".into()));
    }
    if n == 1 {
        return Ok((0.0, 0.0, 0.0, 0.0));
    }
    let f = table.factorize(n)?;
    let divs = f.divisors();

    let t1 = if n as f64 <= v {
        von_mangoldt(n, table)?
    } else {
        0.0
    };

    // t2 = sum_{d | n, d <= V} mu(d) log(n/d)
    let mut t2 = 0.0;
    for &d in &divs {
        if d as f64 <= v {
            let mu = moebius(d, table)?;
            if mu != 0 {
                t2 += mu as f64 * ((n / d) as f64).ln();
            }
        }
    }

    // triple convolutions over a*b*c = n
    let mut t3 = 0.0;
    let mut t4 = 0.0;
    for &a in &divs {
        let mu = moebius(a, table)?;
        if mu == 0 {
            continue;
        }
        let rest = n / a;
        for &b in &table.factorize(rest)?.divisors() {
            let lam = von_mangoldt(b, table)?;
            if lam == 0.0 {
                continue;
            }
            if a as f64 <= v && b as f64 <= v {
                t3 -= mu as f64 * lam;
            }
            if a as f64 > v && b as f64 > v {
                t4 += mu as f64 * lam;
            }
        }
    }
    Ok((t1, t2, t3, t4))
}

/// `N_Y(n) = sum_{l^2 | n, l <= Y} mu(l)`.
pub fn n_y(n: u64, y: f64, table: &PrimeTable) -> Result<i64> {
    mu_square_split(n, y, table).map(|(a, _)| a)
}

/// `R_Y(n) = sum_{l^2 | n, l > Y} mu(l)`; `N_Y + R_Y = mu^2(n)`.
pub fn r_y(n: u64, y: f64, table: &PrimeTable) -> Result<i64> {
    mu_square_split(n, y, table).map(|(_, b)| b)
}

fn mu_square_split(n: u64, y: f64, table: &PrimeTable) -> Result<(i64, i64)> {
    // l^2 | n  iff  l | t  where n = s t^2
    let (_, t) = squarefree_decompose(n, table)?;
    let mut below = 0i64;
    let mut above = 0i64;
    for &l in &table.factorize(t)?.divisors() {
        let mu = moebius(l, table)?;
        if l as f64 <= y {
            below += mu;
        } else {
            above += mu;
        }
    }
    Ok((below, above))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        PrimeTable::new(200_000).unwrap()
    }

    #[test]
    fn sieve_small() {
        let t = PrimeTable::new(10).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
        let t2 = PrimeTable::new(2).unwrap();
        assert_eq!(t2.primes(), &[2]);
    }

    #[test]
    fn sieve_limit_validation() {
        assert!(PrimeTable::new(1).is_err());
        assert!(PrimeTable::new(1_000_000_001).is_err());
    }

    #[test]
    fn prime_count_to_a_million() {
        // independent oracle: trial division count
        let t = PrimeTable::new(1_000_000).unwrap();
        assert_eq!(t.primes().len(), 78_498);
        let trial = |n: u64| -> bool {
            if n < 2 {
                return false;
            }
            let mut d = 2;
            while d * d <= n {
                if n % d == 0 {
                    return false;
                }
                d += 1;
            }
            true
        };
        // spot-check the sieve against trial division on a stride
        for n in (2..1_000_000).step_by(9973) {
            assert_eq!(t.is_prime(n), trial(n), "disagree at {n}");
        }
    }

    #[test]
    fn spf_invariant() {
        let t = table();
        for n in 2..5000u64 {
            let p = t.smallest_prime_factor(n).unwrap();
            assert_eq!(n % p, 0);
            assert!(t.is_prime(p));
            for q in 2..p {
                assert!(n % q != 0 || !t.is_prime(q));
            }
        }
    }

    #[test]
    fn moebius_values() {
        let t = table();
        assert_eq!(moebius(1, &t).unwrap(), 1);
        assert_eq!(moebius(12, &t).unwrap(), 0);
        assert_eq!(moebius(30, &t).unwrap(), -1);
        assert!(moebius(300_000, &t).is_err());
    }

    #[test]
    fn moebius_bruteforce_oracle() {
        // mu(n) from distinct-prime-divisor enumeration, independent of spf
        let t = table();
        for n in 1..500u64 {
            let mut m = n;
            let mut k = 0;
            let mut square = false;
            let mut d = 2;
            while d * d <= m {
                if m % d == 0 {
                    k += 1;
                    m /= d;
                    if m % d == 0 {
                        square = true;
                        break;
                    }
                }
                d += 1;
            }
            if m > 1 {
                k += 1;
            }
            let expect = if square { 0 } else if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(moebius(n, &t).unwrap(), expect, "n = {n}");
        }
    }

    #[test]
    fn phi_and_dk() {
        let t = table();
        assert_eq!(euler_phi(9, &t).unwrap(), 6);
        assert_eq!(divisor_dk(2, 12, &t).unwrap(), 6);
        assert_eq!(divisor_dk(1, 720, &t).unwrap(), 1);
        // d_3(p) = 3 against the triple-convolution oracle
        for p in [2u64, 3, 5, 101, 997] {
            let mut conv = 0u64;
            for a in 1..=p {
                if p % a == 0 {
                    let rest = p / a;
                    for b in 1..=rest {
                        if rest % b == 0 {
                            conv += 1;
                        }
                    }
                }
            }
            assert_eq!(divisor_dk(3, p, &t).unwrap(), conv);
            assert_eq!(conv, 3);
        }
    }

    #[test]
    fn dhalf_prime_powers() {
        assert_eq!(dhalf_prime_power(0), Rational::new(1, 1));
        assert_eq!(dhalf_prime_power(1), Rational::new(1, 2));
        assert_eq!(dhalf_prime_power(2), Rational::new(3, 8));
    }

    #[test]
    fn dhalf_convolution_identity() {
        let t = table();
        for n in 1..=2000u64 {
            let mut acc = Rational::new(0, 1);
            for d in 1..=n {
                if n % d == 0 {
                    acc += divisor_dhalf(d, &t).unwrap() * divisor_dhalf(n / d, &t).unwrap();
                }
            }
            assert_eq!(acc, Rational::new(1, 1), "n = {n}");
        }
    }

    #[test]
    fn kronecker_basics() {
        assert_eq!(kronecker(5, 3), -1);
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(3, 2), -1);
        for n in [-7i64, -1, 1, 2, 9, 15] {
            assert_eq!(kronecker(n, 1), 1);
        }
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(-1, 0), 1);
        assert_eq!(kronecker(5, 0), 0);
        assert_eq!(kronecker(4, 2), 0);
    }

    #[test]
    fn kronecker_euler_criterion() {
        // (n/p) for odd prime p against n^((p-1)/2) mod p
        let t = PrimeTable::new(1000).unwrap();
        for &p in t.primes().iter().filter(|&&p| p > 2 && p <= 997) {
            for n in -100i64..=100 {
                if n == 0 {
                    continue;
                }
                let r = n.rem_euclid(p as i64) as u64;
                let expect = if r == 0 {
                    0
                } else {
                    let mut acc = 1u64;
                    let mut base = r;
                    let mut e = (p - 1) / 2;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = acc * base % p;
                        }
                        base = base * base % p;
                        e >>= 1;
                    }
                    if acc == 1 {
                        1
                    } else {
                        -1
                    }
                };
                assert_eq!(kronecker(n, p as i64), expect, "({n}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_bottom_multiplicativity() {
        for a in [-9i64, -2, 3, 5, 7, 10] {
            for m1 in [-6i64, -3, 2, 5, 9] {
                for m2 in [3i64, 4, 7, -5] {
                    assert_eq!(
                        kronecker(a, m1 * m2),
                        kronecker(a, m1) * kronecker(a, m2),
                        "a={a} m1={m1} m2={m2}"
                    );
                }
            }
        }
    }

    #[test]
    fn squarefree_decomposition() {
        let t = table();
        assert_eq!(squarefree_decompose(1, &t).unwrap(), (1, 1));
        assert_eq!(squarefree_decompose(18, &t).unwrap(), (2, 3));
        assert_eq!(squarefree_decompose(360, &t).unwrap(), (10, 6));
    }

    #[test]
    fn fundamental_discriminants() {
        let t = table();
        assert_eq!(fundamental_discriminant_decompose(1, &t).unwrap(), (1, 2));
        assert_eq!(fundamental_discriminant_decompose(5, &t).unwrap(), (5, 2));
        assert_eq!(fundamental_discriminant_decompose(2, &t).unwrap(), (8, 1));
        assert_eq!(fundamental_discriminant_decompose(-1, &t).unwrap(), (-4, 1));
        assert_eq!(fundamental_discriminant_decompose(-3, &t).unwrap(), (-3, 2));
        assert!(fundamental_discriminant_decompose(0, &t).is_err());
        // check the product identity on a range
        for m in (-200i64..=200).filter(|&m| m != 0) {
            let (m1, m2) = fundamental_discriminant_decompose(m, &t).unwrap();
            assert_eq!(4 * m, m1 * (m2 as i64) * (m2 as i64), "m = {m}");
        }
    }

    #[test]
    fn vaughan_identity() {
        let t = table();
        for &v in &[3.0, 10.0, 50.0] {
            for n in 1..=2000u64 {
                let (t1, t2, t3, t4) = vaughan_decompose(n, v, &t).unwrap();
                let lam = von_mangoldt(n, &t).unwrap();
                let tol = 1e-9 * (1.0 + (n as f64).ln());
                assert!(
                    (t1 + t2 + t3 + t4 - lam).abs() <= tol,
                    "n={n} V={v}: {} vs {lam}",
                    t1 + t2 + t3 + t4
                );
            }
        }
        // n = 2^6, V = 10: direct convolution value is log 2
        let (t1, t2, t3, t4) = vaughan_decompose(64, 10.0, &t).unwrap();
        assert!((t1 + t2 + t3 + t4 - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn mu_square_split_identity() {
        let t = table();
        for &y in &[1.0, 10.0, 316.0] {
            for n in 1..=3000u64 {
                let a = n_y(n, y, &t).unwrap();
                let b = r_y(n, y, &t).unwrap();
                let mu2 = moebius(n, &t).unwrap().pow(2);
                assert_eq!(a + b, mu2, "n={n} Y={y}");
            }
        }
        assert_eq!(n_y(12, 2.0, &t).unwrap(), 0);
        assert_eq!(r_y(12, 2.0, &t).unwrap(), 0);
        assert_eq!(n_y(36, 1.0, &t).unwrap(), 1);
        assert_eq!(r_y(36, 1.0, &t).unwrap(), -1);
    }

    #[test]
    fn multiplicativity() {
        let t = table();
        let pairs = [(3u64, 4u64), (5, 9), (7, 8), (25, 27), (11, 35), (13, 99)];
        for &(a, b) in &pairs {
            assert_eq!(
                moebius(a * b, &t).unwrap(),
                moebius(a, &t).unwrap() * moebius(b, &t).unwrap()
            );
            assert_eq!(
                euler_phi(a * b, &t).unwrap(),
                euler_phi(a, &t).unwrap() * euler_phi(b, &t).unwrap()
            );
            for k in 1..=4 {
                assert_eq!(
                    divisor_dk(k, a * b, &t).unwrap(),
                    divisor_dk(k, a, &t).unwrap() * divisor_dk(k, b, &t).unwrap()
                );
            }
            assert_eq!(
                divisor_dhalf(a * b, &t).unwrap(),
                divisor_dhalf(a, &t).unwrap() * divisor_dhalf(b, &t).unwrap()
            );
            for m in [3i64, 15, 35] {
                assert_eq!(
                    kronecker((a * b) as i64, m),
                    kronecker(a as i64, m) * kronecker(b as i64, m)
                );
            }
        }
    }
}
