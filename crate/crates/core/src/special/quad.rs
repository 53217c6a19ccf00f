//! Adaptive Simpson quadrature for smooth integrands.

use crate::scalar::Scalar;

fn simpson<F: Scalar>(fa: F, fm: F, fb: F, h: F) -> F {
    h * (fa + F::of(4.0) * fm + fb) / F::of(6.0)
}

fn recurse<F: Scalar>(
    f: &impl Fn(F) -> F,
    a: F,
    b: F,
    fa: F,
    fm: F,
    fb: F,
    whole: F,
    tol: F,
    depth: u32,
) -> F {
    let m = (a + b) / F::of(2.0);
    let lm = (a + m) / F::of(2.0);
    let rm = (m + b) / F::of(2.0);
    let flm = f(lm);
    let frm = f(rm);
    let h = b - a;
    let left = simpson(fa, flm, fm, h / F::of(2.0));
    let right = simpson(fm, frm, fb, h / F::of(2.0));
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= F::of(15.0) * tol {
        left + right + delta / F::of(15.0)
    } else {
        let half_tol = tol / F::of(2.0);
        recurse(f, a, m, fa, flm, fm, left, half_tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, half_tol, depth - 1)
    }
}

/// ∫_a^b f, adaptive Simpson with Richardson correction.
pub fn adaptive_simpson<F: Scalar>(f: impl Fn(F) -> F, a: F, b: F, tol: F) -> F {
    let m = (a + b) / F::of(2.0);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    recurse(&f, a, b, fa, fm, fb, whole, tol, 40)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = adaptive_simpson(|x: f64| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-12);
        assert!((v - 2.0).abs() < 1e-11); // x^4/4 - x^2 + x at 2
    }

    #[test]
    fn oscillatory() {
        let v = adaptive_simpson(|x: f64| (10.0 * x).sin(), 0.0, 1.0, 1e-12);
        let exact = (1.0 - 10f64.cos()) / 10.0;
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn sharp_peak() {
        let v = adaptive_simpson(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10);
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((v - exact).abs() < 1e-6 * exact);
    }
}
