//! Log-gamma for complex arguments in the right half-plane.

use crate::scalar::Scalar;
use num_complex::Complex;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal-branch `log Γ(z)` for `Re z > -6` away from the poles.
///
/// Lanczos approximation (g = 7, 9 terms), with the recurrence
/// `log Γ(z) = log Γ(z+1) − log z` pushing small real parts into the
/// region where the approximation holds. The callers only ever
/// exponentiate integer multiples of the result, so branch jumps from
/// the recurrence are harmless there.
pub fn ln_gamma<F: Scalar>(mut z: Complex<F>) -> Complex<F> {
    let half = F::of(0.5);
    let one = Complex::new(F::one(), F::zero());
    let mut shift = Complex::new(F::zero(), F::zero());
    while z.re < half {
        shift -= z.ln();
        z += one;
    }
    let z = z - one;
    let mut x = Complex::new(F::of(LANCZOS[0]), F::zero());
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += Complex::new(F::of(c), F::zero()) / (z + Complex::new(F::of_usize(i), F::zero()));
    }
    let t = z + Complex::new(F::of(LANCZOS_G + 0.5), F::zero());
    // ln(2π)/2
    let half_ln_two_pi = Complex::new(F::of(0.918_938_533_204_672_741_8), F::zero());
    shift + half_ln_two_pi + (z + Complex::new(half, F::zero())) * t.ln() - t + x.ln()
}

/// `Γ(x)` for real `x > 0`.
pub fn gamma_real<F: Scalar>(x: F) -> F {
    ln_gamma(Complex::new(x, F::zero())).re.exp()
}
