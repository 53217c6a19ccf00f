//! The smooth window Φ: supported in [1/2, 1], identically 1 on the
//! inner plateau, with C^∞ exponential transitions of width `delta`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::quad::adaptive_simpson;

#[derive(Clone, Copy, Debug)]
pub struct BumpPhi<F> {
    delta: F,
}

/// C^∞ step: 0 for u ≤ 0, 1 for u ≥ 1, strictly increasing between.
fn smoothstep<F: Scalar>(u: F) -> F {
    if u <= F::zero() {
        return F::zero();
    }
    if u >= F::one() {
        return F::one();
    }
    let f = (-u.recip()).exp();
    let g = (-(F::one() - u).recip()).exp();
    f / (f + g)
}

impl<F: Scalar> BumpPhi<F> {
    pub fn new(delta: F) -> Result<Self> {
        if delta <= F::zero() || delta >= F::of(0.25) {
            return Err(Error::Config(format!(
                "bump transition width must lie in (0, 1/4), got {delta}"
            )));
        }
        Ok(Self { delta })
    }

    /// Width tied to the experiment scale as 1/log X, floored and capped
    /// so desk-scale windows stay smooth.
    pub fn for_scale(x: F) -> Self {
        let raw = x.ln().recip();
        let delta = raw.max(F::of(0.01)).min(F::of(0.2));
        Self { delta }
    }

    pub fn delta(&self) -> F {
        self.delta
    }

    pub fn value(&self, x: F) -> F {
        let half = F::of(0.5);
        if x <= half || x >= F::one() {
            return F::zero();
        }
        let left = smoothstep((x - half) / self.delta);
        let right = smoothstep((F::one() - x) / self.delta);
        left * right
    }

    /// ∫Φ by adaptive quadrature; equals 1/2 − delta by the symmetry of
    /// the transition profile, which the tests confirm.
    pub fn mass(&self) -> F {
        adaptive_simpson(|x| self.value(x), F::of(0.5), F::one(), F::of(1e-12))
    }
}
