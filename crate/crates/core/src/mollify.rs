//! Mollifier construction and its optimization: the weight polynomials
//! H on [0,1] with H(1) = H′(1) = 0, the smoothed-Möbius coefficients
//! b_m, the Dirichlet polynomial M(n), the quadratic functional 𝔍, and
//! the closed-form optimum (a_opt, ρ(θ), θ₀).

use crate::arith::{kronecker, moebius, PrimeTable};
use crate::error::{Error, Result};
use crate::special::quad::adaptive_simpson;
use crate::sum::CompensatedSum;
use crate::Real;
use serde::{Deserialize, Serialize};

/// Weight function on [0,1], always a polynomial vanishing to second
/// order at 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum HSpec {
    /// The two-parameter cubic family with H(0) = A, H′(0) = −B:
    /// `(2A−B)x³ + (2B−3A)x² − Bx + A`.
    Cubic { a: Real, b: Real },
    /// The optimizer `(1−x)² (2 + 3/(2θ) + x)`.
    HStar { theta: Real },
    /// Explicit coefficients, ascending powers; must satisfy the
    /// boundary conditions (use [`HSpec::poly`]).
    Poly(Vec<Real>),
}

fn poly_eval(c: &[Real], x: Real) -> Real {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn poly_deriv(c: &[Real]) -> Vec<Real> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ci)| ci * i as Real)
        .collect()
}

fn poly_square(c: &[Real]) -> Vec<Real> {
    let mut out = vec![0.0; 2 * c.len().saturating_sub(1) + 1];
    for (i, &a) in c.iter().enumerate() {
        for (k, &b) in c.iter().enumerate() {
            out[i + k] += a * b;
        }
    }
    out
}

fn poly_integral_01(c: &[Real]) -> Real {
    c.iter()
        .enumerate()
        .map(|(i, &ci)| ci / (i + 1) as Real)
        .sum()
}

impl HSpec {
    /// Validated explicit polynomial: H(1) = H′(1) = 0 to 1e-12.
    pub fn poly(coeffs: Vec<Real>) -> Result<Self> {
        let at_one = poly_eval(&coeffs, 1.0);
        let d_at_one = poly_eval(&poly_deriv(&coeffs), 1.0);
        if at_one.abs() > 1e-12 || d_at_one.abs() > 1e-12 {
            return Err(Error::Config(format!(
                "H must vanish to second order at 1: H(1) = {at_one}, H'(1) = {d_at_one}"
            )));
        }
        Ok(HSpec::Poly(coeffs))
    }

    /// Coefficients in ascending powers.
    pub fn coefficients(&self) -> Vec<Real> {
        match self {
            HSpec::Cubic { a, b } => vec![*a, -b, 2.0 * b - 3.0 * a, 2.0 * a - b],
            HSpec::HStar { theta } => {
                // (1−x)²(c+x) with c = 2 + 3/(2θ)
                let c = 2.0 + 3.0 / (2.0 * theta);
                vec![c, 1.0 - 2.0 * c, c - 2.0, 1.0]
            }
            HSpec::Poly(c) => c.clone(),
        }
    }
}

pub fn h_value(spec: &HSpec, x: Real) -> Real {
    poly_eval(&spec.coefficients(), x)
}

/// Exact derivative of order 0, 1, or 2.
pub fn h_deriv(spec: &HSpec, x: Real, order: u32) -> Result<Real> {
    if order > 2 {
        return Err(Error::Config(format!(
            "h_deriv supports orders 0..=2, got {order}"
        )));
    }
    let mut c = spec.coefficients();
    for _ in 0..order {
        c = poly_deriv(&c);
    }
    Ok(poly_eval(&c, x))
}

/// Mollifier parameters: length M (typically X^θ) and the weight H.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MollifierSpec {
    pub theta: Real,
    pub m_len: Real,
    pub h: HSpec,
}

impl MollifierSpec {
    pub fn new(theta: Real, m_len: Real, h: HSpec) -> Result<Self> {
        if !(theta > 0.0 && theta < 0.5) {
            return Err(Error::Config(format!("theta must lie in (0, 1/2), got {theta}")));
        }
        if m_len < 1.0 {
            return Err(Error::Config(format!("mollifier length {m_len} < 1")));
        }
        Ok(Self { theta, m_len, h })
    }

    /// Length M = X^θ.
    pub fn for_scale(x: u64, theta: Real, h: HSpec) -> Result<Self> {
        let m_len = (x as Real).powf(theta);
        Self::new(theta, m_len, h)
    }
}

/// Smoothed Möbius coefficient `b_m = μ(m) H(log m / log M)` for odd
/// squarefree m ≤ M, zero otherwise.
pub fn b_m(m: u64, spec: &MollifierSpec, table: &PrimeTable) -> Result<Real> {
    if m % 2 == 0 {
        return Err(Error::Domain(format!("b_m defined for odd m, got {m}")));
    }
    if (m as Real) > spec.m_len {
        return Ok(0.0);
    }
    let mu = moebius(m, table)?;
    if mu == 0 {
        return Ok(0.0);
    }
    let x = if m == 1 {
        0.0
    } else {
        (m as Real).ln() / spec.m_len.ln()
    };
    Ok(mu as Real * h_value(&spec.h, x))
}

/// `M(n) = Σ_{m ≤ M, m odd} b_m χ_n(m) / √m`.
pub fn mollifier_m(n: u64, spec: &MollifierSpec, table: &PrimeTable) -> Result<Real> {
    if n % 2 == 0 {
        return Err(Error::Domain(format!("mollifier argument must be odd, got {n}")));
    }
    let mut acc = CompensatedSum::new();
    let mut m = 1u64;
    while (m as Real) <= spec.m_len {
        let b = b_m(m, spec, table)?;
        if b != 0.0 {
            let chi = kronecker(n as i64, m as i64);
            if chi != 0 {
                acc.add(b * chi as Real / (m as Real).sqrt());
            }
        }
        m += 2;
    }
    Ok(acc.value())
}

/// The quadratic form controlling the mollified second moment:
///
/// ```text
/// 𝔍 = −2∫HH′ + (1/θ)∫HH″ + (1/θ)∫H′² − (1/2θ²)∫H′H″ + (1/24θ³)∫H″²
/// ```
///
/// over [0,1], evaluated by adaptive quadrature.
pub fn frak_i(spec: &MollifierSpec) -> Real {
    let t = spec.theta;
    let h = |x| h_value(&spec.h, x);
    let h1 = |x| h_deriv(&spec.h, x, 1).expect("order 1");
    let h2 = |x| h_deriv(&spec.h, x, 2).expect("order 2");
    let tol = 1e-12;
    -2.0 * adaptive_simpson(|x| h(x) * h1(x), 0.0, 1.0, tol)
        + adaptive_simpson(|x| h(x) * h2(x), 0.0, 1.0, tol) / t
        + adaptive_simpson(|x| h1(x) * h1(x), 0.0, 1.0, tol) / t
        - adaptive_simpson(|x| h1(x) * h2(x), 0.0, 1.0, tol) / (2.0 * t * t)
        + adaptive_simpson(|x| h2(x) * h2(x), 0.0, 1.0, tol) / (24.0 * t * t * t)
}

/// Closed form `𝔍 = (A + B/2θ)² + (1/24θ³) ∫H″²` with A = H(0),
/// B = −H′(0); the reduction uses only H(1) = H′(1) = 0, so it is exact
/// for every constructible spec (∫H″² integrated exactly).
pub fn frak_i_closed(spec: &MollifierSpec) -> Real {
    let t = spec.theta;
    let c = spec.h.coefficients();
    let a = poly_eval(&c, 0.0);
    let b = -poly_eval(&poly_deriv(&c), 0.0);
    let h2_sq = poly_square(&poly_deriv(&poly_deriv(&c)));
    let first = a + b / (2.0 * t);
    first * first + poly_integral_01(&h2_sq) / (24.0 * t * t * t)
}

/// `∫₀¹ H″(x)² dx`, exactly.
pub fn h2_sq_integral(spec: &HSpec) -> Real {
    let h2 = poly_deriv(&poly_deriv(&spec.coefficients()));
    poly_integral_01(&poly_square(&h2))
}

/// The optimal H(0) given B = −H′(0): `A = B(4θ+3) / (6(θ+1))`.
pub fn a_opt(b: Real, theta: Real) -> Real {
    b * (4.0 * theta + 3.0) / (6.0 * (theta + 1.0))
}

/// Nonvanishing-proportion rate `ρ(θ) = ½(½−θ)(1 − (1+2θ)^{−3})`.
pub fn rho(theta: Real) -> Real {
    0.5 * (0.5 - theta) * (1.0 - (1.0 + 2.0 * theta).powi(-3))
}

/// Unique positive root of `16θ⁴ + 32θ³ + 24θ² + 12θ − 3` in (0, 1/2),
/// where ρ is maximized; bisection to 1e-12.
pub fn theta0() -> Real {
    let quartic = |t: Real| 16.0 * t.powi(4) + 32.0 * t.powi(3) + 24.0 * t * t + 12.0 * t - 3.0;
    let mut lo = 0.0f64;
    let mut hi = 0.5f64;
    debug_assert!(quartic(lo) < 0.0 && quartic(hi) > 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if quartic(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use std::sync::OnceLock;

    fn table() -> &'static PrimeTable {
        static T: OnceLock<PrimeTable> = OnceLock::new();
        T.get_or_init(|| PrimeTable::new(100_000).unwrap())
    }

    #[test]
    fn cubic_boundary_data() {
        let h = HSpec::Cubic { a: 1.3, b: -0.4 };
        assert!((h_value(&h, 0.0) - 1.3).abs() < 1e-15);
        assert!((h_deriv(&h, 0.0, 1).unwrap() - 0.4).abs() < 1e-15);
        assert!(h_value(&h, 1.0).abs() < 1e-15);
        assert!(h_deriv(&h, 1.0, 1).unwrap().abs() < 1e-14);
        assert!(h_deriv(&h, 0.5, 3).is_err());
    }

    #[test]
    fn hstar_is_the_matching_cubic() {
        for &theta in &[0.1f64, 0.17409, 0.3] {
            let star = HSpec::HStar { theta };
            let a = 2.0 + 3.0 / (2.0 * theta);
            let b = 3.0 + 3.0 / theta;
            let cubic = HSpec::Cubic { a, b };
            for i in 0..=10 {
                let x = i as Real / 10.0;
                assert!((h_value(&star, x) - h_value(&cubic, x)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn hstar_at_zero() {
        let h = HSpec::HStar { theta: 0.25 };
        assert!((h_value(&h, 0.0) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn poly_validation() {
        assert!(HSpec::poly(vec![1.0]).is_err()); // constant: H(1) ≠ 0
        assert!(HSpec::poly(vec![1.0, -2.0, 1.0]).is_ok()); // (1−x)²
        assert!(HSpec::poly(vec![1.0, -1.0]).is_err()); // H'(1) ≠ 0
    }

    #[test]
    fn b_m_values() {
        let t = table();
        let spec = MollifierSpec::new(0.2, 100.0, HSpec::HStar { theta: 0.2 }).unwrap();
        assert!((b_m(1, &spec, t).unwrap() - h_value(&spec.h, 0.0)).abs() < 1e-15);
        assert_eq!(b_m(9, &spec, t).unwrap(), 0.0);
        assert_eq!(b_m(101, &spec, t).unwrap(), 0.0); // beyond M
        assert!(b_m(4, &spec, t).is_err());
        let want = moebius(15, t).unwrap() as Real
            * h_value(&spec.h, 15f64.ln() / 100f64.ln());
        assert!((b_m(15, &spec, t).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn mollifier_trivial_and_bruteforce() {
        let t = table();
        let spec = MollifierSpec::new(0.2, 2.5, HSpec::HStar { theta: 0.2 }).unwrap();
        // M < 3: only m = 1 survives
        let v = mollifier_m(17, &spec, t).unwrap();
        assert!((v - h_value(&spec.h, 0.0)).abs() < 1e-15);
        assert!(mollifier_m(10, &spec, t).is_err());

        // literal re-summation oracle at a longer length
        let spec = MollifierSpec::new(0.2, 500.0, HSpec::HStar { theta: 0.2 }).unwrap();
        let n = 1009u64;
        let fast = mollifier_m(n, &spec, t).unwrap();
        let mut slow = 0.0;
        for m in (1..=499u64).step_by(2) {
            let mu = moebius(m, t).unwrap();
            if mu == 0 {
                continue;
            }
            let x = if m == 1 { 0.0 } else { (m as Real).ln() / 500f64.ln() };
            slow += mu as Real * h_value(&spec.h, x) * kronecker(n as i64, m as i64) as Real
                / (m as Real).sqrt();
        }
        assert!((fast - slow).abs() < 1e-10, "{fast} vs {slow}");
    }

    #[test]
    fn frak_i_quadrature_vs_closed() {
        let spec = MollifierSpec::new(0.2, 10.0, HSpec::Cubic { a: 1.0, b: 1.0 }).unwrap();
        let q = frak_i(&spec);
        let c = frak_i_closed(&spec);
        assert!((q - c).abs() < 1e-9, "{q} vs {c}");

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a: Real = rng.gen_range(-3.0..3.0);
            let b: Real = rng.gen_range(-3.0..3.0);
            let theta: Real = rng.gen_range(0.05..0.45);
            let spec = MollifierSpec::new(theta, 10.0, HSpec::Cubic { a, b }).unwrap();
            let q = frak_i(&spec);
            let c = frak_i_closed(&spec);
            assert!(
                (q - c).abs() <= 1e-9 * (1.0 + c.abs()),
                "A={a} B={b} θ={theta}: {q} vs {c}"
            );
        }
    }

    #[test]
    fn hstar_second_derivative_energy() {
        for &theta in &[0.1f64, 0.17409, 0.3] {
            let h = HSpec::HStar { theta };
            let a = h_value(&h, 0.0);
            let b = -h_deriv(&h, 0.0, 1).unwrap();
            let want = 3.0 * a * a + (2.0 * b - 3.0 * a).powi(2);
            assert!(
                (h2_sq_integral(&h) - want).abs() < 1e-9 * want,
                "theta = {theta}"
            );
        }
    }

    #[test]
    fn a_opt_reproduces_hstar() {
        for &theta in &[0.1f64, 0.17409, 0.3] {
            let h = HSpec::HStar { theta };
            let a = h_value(&h, 0.0);
            let b = -h_deriv(&h, 0.0, 1).unwrap();
            assert!((a - a_opt(b, theta)).abs() < 1e-12, "theta = {theta}");
        }
    }

    #[test]
    fn optimum_constants() {
        let t0 = theta0();
        assert!((t0 - 0.17409).abs() < 2e-5, "theta0 = {t0}");
        assert!((t0 - 0.174_090_385_173_497).abs() < 1e-11);
        let r = rho(t0);
        assert!((r - 0.09645).abs() < 2e-5, "rho = {r}");
        assert!((r - 0.096_454_631_774_693_9).abs() < 1e-12);
        assert!(rho(1e-12).abs() < 1e-11);
        assert!(rho(0.5).abs() < 1e-15);
    }

    #[test]
    fn rho_scale_invariance() {
        // (H(0) − H′(0)/(2θ))² / 𝔍 unchanged under H → cH
        let theta = 0.2;
        for &c in &[0.5f64, 2.0, -3.0] {
            let base = MollifierSpec::new(theta, 10.0, HSpec::Cubic { a: 1.7, b: 0.9 }).unwrap();
            let scaled =
                MollifierSpec::new(theta, 10.0, HSpec::Cubic { a: 1.7 * c, b: 0.9 * c }).unwrap();
            let ratio = |s: &MollifierSpec| {
                let a = h_value(&s.h, 0.0);
                let b = -h_deriv(&s.h, 0.0, 1).unwrap();
                (a + b / (2.0 * theta)).powi(2) / frak_i_closed(s)
            };
            let r1 = ratio(&base);
            let r2 = ratio(&scaled);
            assert!((r1 - r2).abs() < 1e-9 * r1.abs(), "c = {c}");
        }
    }

    #[test]
    fn quartic_bracket_unique() {
        // the quartic changes sign exactly once on (0, 1/2)
        let quartic =
            |t: Real| 16.0 * t.powi(4) + 32.0 * t.powi(3) + 24.0 * t * t + 12.0 * t - 3.0;
        let mut changes = 0;
        let mut prev = quartic(1e-9);
        for i in 1..=1000 {
            let t = i as Real * 0.0005;
            let v = quartic(t);
            if prev.signum() != v.signum() {
                changes += 1;
            }
            prev = v;
        }
        assert_eq!(changes, 1);
    }
}
