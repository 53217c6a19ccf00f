//! The smooth cutoff weights ω_j, j ∈ {1,2,3}, defined by the
//! Mellin–Barnes integral
//!
//! ```text
//! ω_j(ξ) = (1/2πi) ∫_(c) [Γ(s/2+1/4)/Γ(1/4)]^j (1 − 2^{s−1/2})^j ξ^{−s} ds/s
//! ```
//!
//! for c > 0.  ω_j is real and smooth, tends to (1 − 1/√2)^j as ξ → 0⁺,
//! and decays like exp(−ξ^{2/j}/4), which is what makes the weighted
//! Dirichlet series for L(1/2, χ_n)^j effectively finite.
//!
//! Three evaluation routes, in increasing speed and decreasing
//! independence:
//! * [`OmegaWeight::omega`] — direct contour quadrature (the defining
//!   formula; used as the reference),
//! * [`omega_series1`] — residue series over the Γ poles, j = 1 only
//!   (an oracle derived independently of the quadrature),
//! * [`OmegaTable`] — a precomputed table of the exact decomposition
//!   ω_j(ξ) = (1−1/√2)^j + ξ^{1/4}·ψ_j(ln ξ), cheap enough for the
//!   hundred-million-term batch sums.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::gamma::ln_gamma;
use num_complex::Complex;

/// ξ beyond which |ω_j(ξ)| < 10⁻¹³ (certified by the decay bound with
/// margin measured at build time), so the weight is treated as zero.
pub fn support_cutoff(j: u8) -> f64 {
    match j {
        1 => 14.0,
        2 => 64.0,
        3 => 260.0,
        _ => panic!("omega weight defined for j in {{1,2,3}}"),
    }
}

/// `(1 − 1/√2)^j`, the ξ → 0⁺ limit of ω_j.
pub fn omega_limit<F: Scalar>(j: u8) -> F {
    let base = F::one() - F::of(0.5).sqrt();
    let mut out = F::one();
    for _ in 0..j {
        out *= base;
    }
    out
}

fn check_j(j: u8) -> Result<()> {
    if !(1..=3).contains(&j) {
        return Err(Error::Config(format!("omega weight index j = {j} not in {{1,2,3}}")));
    }
    Ok(())
}

/// The integrand numerator `[Γ(s/2+1/4)/Γ(1/4)]^j (1 − 2^{s−1/2})^j / s`.
fn mellin_factor<F: Scalar>(j: u8, s: Complex<F>, ln_gamma_quarter: Complex<F>) -> Complex<F> {
    let quarter = F::of(0.25);
    let lg = ln_gamma(s * Complex::new(F::of(0.5), F::zero()) + Complex::new(quarter, F::zero()));
    let gamma_ratio = ((lg - ln_gamma_quarter) * Complex::new(F::of_usize(j as usize), F::zero())).exp();
    let two_pow = ((s - Complex::new(F::of(0.5), F::zero())) * Complex::new(F::of(2.0).ln(), F::zero())).exp();
    let mut euler = Complex::new(F::one(), F::zero());
    let base = Complex::new(F::one(), F::zero()) - two_pow;
    for _ in 0..j {
        euler = euler * base;
    }
    gamma_ratio * euler / s
}

/// Quadrature settings for direct evaluation on the vertical line Re s = c.
#[derive(Clone, Copy, Debug)]
pub struct OmegaWeight<F> {
    pub j: u8,
    pub contour_abscissa: F,
    pub truncation_height: F,
    pub quadrature_step: F,
}

impl<F: Scalar> OmegaWeight<F> {
    /// Defaults: c = 3/2, T = 200, h = 0.01.  The Γ factor decays like
    /// exp(−jπ|t|/4), so T = 200 is far past the useful tail.
    pub fn new(j: u8) -> Result<Self> {
        Self::with_settings(j, F::of(1.5), F::of(200.0), F::of(0.01))
    }

    pub fn with_settings(j: u8, c: F, t: F, h: F) -> Result<Self> {
        check_j(j)?;
        if c <= F::zero() {
            return Err(Error::Config("contour abscissa must be positive".into()));
        }
        if t < F::of(50.0) {
            return Err(Error::Config("truncation height must be at least 50".into()));
        }
        if h > F::of(0.05) || h <= F::zero() {
            return Err(Error::Config("quadrature step must lie in (0, 0.05]".into()));
        }
        Ok(Self {
            j,
            contour_abscissa: c,
            truncation_height: t,
            quadrature_step: h,
        })
    }

    /// Trapezoid sum over the full contour segment with step `h`.
    fn contour_sum(&self, xi: F, h: F) -> Complex<F> {
        let c = self.contour_abscissa;
        let t_max = self.truncation_height;
        let steps = (t_max / h).to_usize().expect("step count");
        let ln_xi = xi.ln();
        let lg_quarter = ln_gamma(Complex::new(F::of(0.25), F::zero()));
        let mut acc = Complex::new(F::zero(), F::zero());
        for k in -(steps as i64)..=(steps as i64) {
            let t = F::of(k as f64) * h;
            let s = Complex::new(c, t);
            // ξ^{−s} = exp(−s ln ξ)
            let xi_pow = (-s * Complex::new(ln_xi, F::zero())).exp();
            let mut f = mellin_factor(self.j, s, lg_quarter) * xi_pow;
            if k.unsigned_abs() as usize == steps {
                f = f * Complex::new(F::of(0.5), F::zero());
            }
            acc += f;
        }
        // (1/2πi) ∫ f ds with ds = i dt
        acc * Complex::new(h / (F::of(2.0) * F::PI()), F::zero())
    }

    /// ω_j(ξ) by contour quadrature with a step-halving consistency check.
    pub fn omega(&self, xi: F) -> Result<F> {
        if xi <= F::zero() {
            return Err(Error::Domain(format!("omega requires xi > 0, got {xi}")));
        }
        if xi >= F::of(support_cutoff(self.j)) {
            return Ok(F::zero());
        }
        let coarse = self.contour_sum(xi, self.quadrature_step);
        let fine = self.contour_sum(xi, self.quadrature_step / F::of(2.0));
        // roundoff floor scales with the ξ^{−c} amplitude of the integrand
        let floor = F::of(1e-12) * xi.powf(-self.contour_abscissa) + F::of(1e-10);
        let tol = floor + F::of(1e-9) * fine.re.abs();
        if (coarse.re - fine.re).abs() > tol {
            return Err(Error::Numerical(format!(
                "omega quadrature not converged at xi = {xi}: {} vs {}",
                coarse.re, fine.re
            )));
        }
        if fine.im.abs() > tol {
            return Err(Error::Numerical(format!(
                "omega quadrature returned imaginary residue {} at xi = {xi}",
                fine.im
            )));
        }
        Ok(fine.re)
    }
}

/// Residue-series evaluation of ω_1 for 0 < ξ ≤ 30: pushing the contour
/// to −∞ collects the pole of 1/s at 0 and the simple poles of
/// Γ(s/2 + 1/4) at s_k = −1/2 − 2k, giving
///
/// ```text
/// ω_1(ξ) = (1 − 1/√2)
///        + Σ_{k≥0} [2(−1)^k / (k! Γ(1/4))] (1 − 2^{s_k − 1/2}) ξ^{−s_k} / s_k .
/// ```
///
/// Convergent for every ξ, but with f64 cancellation only trustworthy
/// where the largest term is moderate (ξ of order a few).
pub fn omega_series1<F: Scalar>(xi: F) -> Result<F> {
    if xi <= F::zero() || xi > F::of(30.0) {
        return Err(Error::Domain(format!(
            "omega_series1 requires 0 < xi <= 30, got {xi}"
        )));
    }
    let gamma_quarter = F::of(3.625_609_908_221_908_311_9);
    let ln2 = F::of(2.0).ln();
    let mut total = omega_limit::<F>(1);
    let mut factorial = F::one();
    let mut sign = F::one();
    let mut prev_mag = F::infinity();
    let mut decreasing = false;
    for k in 0..400usize {
        if k > 0 {
            factorial *= F::of_usize(k);
            sign = -sign;
        }
        let s_k = -(F::of(0.5) + F::of_usize(2 * k));
        let euler = F::one() - ((s_k - F::of(0.5)) * ln2).exp();
        let term = F::of(2.0) * sign / (factorial * gamma_quarter) * euler
            * xi.powf(-s_k)
            / s_k;
        total += term;
        let mag = term.abs();
        if mag < prev_mag {
            decreasing = true;
        }
        if decreasing && mag < F::of(1e-18) * (F::one() + total.abs()) {
            return Ok(total);
        }
        if k == 199 && !decreasing {
            return Err(Error::Numerical(format!(
                "residue series terms still growing after 200 terms at xi = {xi}"
            )));
        }
        prev_mag = mag;
    }
    Ok(total)
}

/// Fast evaluator built on the exact decomposition
/// `ω_j(ξ) = (1−1/√2)^j + ξ^{1/4} ψ_j(ln ξ)`, obtained by shifting the
/// contour to Re s = −1/4 (between the pole at 0 and the Γ poles at
/// −1/2 − 2k).  ψ_j is an analytic Fourier-type integral tabulated on a
/// uniform grid in λ = ln ξ and read back with cubic interpolation.
pub struct OmegaTable<F> {
    j: u8,
    lambda_min: F,
    step: F,
    limit: F,
    cutoff: F,
    psi: Vec<F>,
}

impl<F: Scalar> OmegaTable<F> {
    pub fn build(j: u8) -> Result<Self> {
        check_j(j)?;
        let cutoff = F::of(support_cutoff(j));
        let step = F::of(0.0025);
        // one pad node left, two right, so cubic stencils never clip
        let lambda_lo = F::of(1e-9f64.ln());
        let lambda_min = lambda_lo - step;
        let lambda_max = cutoff.ln() + F::of(2.0) * step;
        let nodes = ((lambda_max - lambda_min) / step)
            .ceil()
            .to_usize()
            .expect("node count")
            + 1;

        // the Fourier factor A_j(t) on the shifted line s = −1/4 + it,
        // sampled once; Γ decay exp(−jπt/4) makes t_max = 64/j ample
        let dt = 0.04f64;
        let t_max = 64.0 / j as f64;
        let n_t = (t_max / dt).round() as usize;
        let lg_quarter = ln_gamma(Complex::new(F::of(0.25), F::zero()));
        let a: Vec<Complex<F>> = (0..=n_t)
            .map(|k| {
                let s = Complex::new(F::of(-0.25), F::of(k as f64 * dt));
                mellin_factor(j, s, lg_quarter)
            })
            .collect();

        // ψ(λ) = (1/2π) ∫_{−T}^{T} A(t) e^{−iλt} dt
        //      = (1/π) Re ∫_0^T A(t) e^{−iλt} dt   (A(−t) = conj A(t))
        let dt_f = F::of(dt);
        let psi = (0..nodes)
            .map(|m| {
                let lambda = lambda_min + F::of_usize(m) * step;
                let rot = Complex::new(F::zero(), -lambda * dt_f).exp();
                let mut phase = Complex::new(F::one(), F::zero());
                let mut acc = a[0].re * F::of(0.5);
                for (k, &ak) in a.iter().enumerate().skip(1) {
                    phase = phase * rot;
                    let w = if k == n_t { F::of(0.5) } else { F::one() };
                    acc += (ak * phase).re * w;
                }
                acc * dt_f / F::PI()
            })
            .collect();

        Ok(Self {
            j,
            lambda_min,
            step,
            limit: omega_limit(j),
            cutoff,
            psi,
        })
    }

    pub fn j(&self) -> u8 {
        self.j
    }

    /// ω_j(ξ); exact zero past the certified cutoff, the ξ → 0 limit
    /// below the tabulated range.
    pub fn eval(&self, xi: F) -> F {
        if xi >= self.cutoff {
            return F::zero();
        }
        if xi <= F::zero() {
            return self.limit;
        }
        let lambda = xi.ln();
        let quarter_root = xi.sqrt().sqrt();
        let pos = (lambda - self.lambda_min) / self.step;
        let i = pos
            .floor()
            .to_isize()
            .unwrap_or(0)
            .clamp(1, self.psi.len() as isize - 3) as usize;
        let u = pos - F::of_usize(i);
        // 4-point Lagrange weights on nodes i−1 … i+2
        let one = F::one();
        let two = F::of(2.0);
        let six = F::of(6.0);
        let w_m1 = -u * (u - one) * (u - two) / six;
        let w_0 = (u + one) * (u - one) * (u - two) / two;
        let w_1 = -(u + one) * u * (u - two) / two;
        let w_2 = (u + one) * u * (u - one) / six;
        let psi = w_m1 * self.psi[i - 1] + w_0 * self.psi[i] + w_1 * self.psi[i + 1]
            + w_2 * self.psi[i + 2];
        self.limit + quarter_root * psi
    }
}
