use std::f64::consts::LN_2;

/// Rescaling threshold for recurrence mantissas.
pub(crate) const BIG: f64 = f64::from_bits((1023 + 600) << 52);
pub(crate) const SMALL: f64 = f64::from_bits((1023 - 600) << 52);
pub(crate) const STEP: i32 = 600;

/// Multiplies a recurrence mantissa `m·2^exp` by `exp(ln_w)` without
/// overflowing intermediate factors. The combined factor is cached per
/// exponent so the common path is a single multiplication.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Weight {
    ln_w: f64,
    exp: i32,
    ln_f: f64,
    f: f64,
    fast: bool,
}

impl Weight {
    pub(crate) fn new(ln_w: f64) -> Self {
        let mut w = Self {
            ln_w,
            exp: 0,
            ln_f: ln_w,
            f: 0.0,
            fast: false,
        };
        w.set_exp(0);
        w
    }

    #[inline]
    pub(crate) fn set_exp(&mut self, exp: i32) {
        self.exp = exp;
        self.ln_f = self.ln_w + f64::from(exp) * LN_2;
        self.fast = self.ln_f > -700.0 && self.ln_f < 700.0;
        self.f = if self.fast { self.ln_f.exp() } else { 0.0 };
    }

    #[inline]
    pub(crate) fn exp(&self) -> i32 {
        self.exp
    }

    #[inline]
    pub(crate) fn apply(&self, mant: f64) -> f64 {
        if self.fast {
            return mant * self.f;
        }
        if mant == 0.0 {
            return 0.0;
        }
        if self.ln_w == f64::INFINITY {
            return mant.signum() * f64::INFINITY;
        }
        if self.ln_w == f64::NEG_INFINITY {
            return 0.0;
        }
        mant.signum() * (mant.abs().ln() + self.ln_f).exp()
    }
}
