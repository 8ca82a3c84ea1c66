use std::f64::consts::LN_2;

use statrs::function::gamma::ln_gamma;

use super::scaled::{Weight, BIG, SMALL, STEP};
use crate::error::{domain, Result};

/// Sign and natural-log magnitude of a real number, with an explicit zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLog {
    /// −1, 0 or +1; zero means the value is exactly 0.
    pub sign: i8,
    /// ln|value|; −∞ when `sign == 0`.
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The represented value; may overflow to ±∞.
    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_abs.exp()
        }
    }

    /// value · e^{−shift}, for combining several large magnitudes.
    pub fn scaled(&self, shift: f64) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * (self.ln_abs - shift).exp()
        }
    }
}

/// Normalized Laguerre functions 𝓛ₙ^{(α)}(r) = √(n!/Γ(n+α+1)) Lₙ^{(α)}(r) e^{−r/2} r^{α/2}
/// together with the polynomial values Lₙ^{(α)}(r) in sign/log form.
#[derive(Clone, Debug)]
pub struct LaguerreBatch {
    pub alpha: f64,
    pub r: f64,
    pub n_max: usize,
    pub fn_values: Vec<f64>,
    pub log_poly: Vec<SignedLog>,
}

impl LaguerreBatch {
    /// ν = 4n + 2α + 2.
    pub fn nu(&self, n: usize) -> f64 {
        4.0 * n as f64 + 2.0 * self.alpha + 2.0
    }
}

/// Coefficients of the normalized recurrence
/// √((n+1)(n+α+1)) p_{n+1} = (2n+1+α−r) p_n − √(n(n+α)) p_{n−1},
/// run on qₙ = √Γ(α+1)·pₙ so that q₀ = 1.
#[derive(Clone, Debug)]
pub struct LaguerreTable {
    alpha: f64,
    inv_lead: Vec<f64>,
    back: Vec<f64>,
    half_ln_gamma: f64,
}

impl LaguerreTable {
    pub fn new(alpha: f64, n_max: usize) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return domain(format!("Laguerre parameter must exceed -1, got {alpha}"));
        }
        let inv_lead = (0..n_max)
            .map(|n| {
                let n = n as f64;
                1.0 / ((n + 1.0) * (n + alpha + 1.0)).sqrt()
            })
            .collect();
        let back = (0..n_max)
            .map(|n| {
                let n = n as f64;
                (n * (n + alpha)).sqrt()
            })
            .collect();
        Ok(Self {
            alpha,
            inv_lead,
            back,
            half_ln_gamma: 0.5 * ln_gamma(alpha + 1.0),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_max(&self) -> usize {
        self.inv_lead.len()
    }

    /// ½ lnΓ(α+1), the normalization of p₀.
    pub fn half_ln_gamma(&self) -> f64 {
        self.half_ln_gamma
    }

    /// Runs the scaled recurrence at `r` (any real) and calls
    /// `visit(n, mantissa, binary_exponent)` for n < `count`, where
    /// √Γ(α+1)·pₙ(r) = mantissa·2^exponent.
    #[inline]
    pub(crate) fn recur<F: FnMut(usize, f64, i32)>(&self, r: f64, count: usize, mut visit: F) {
        if count == 0 {
            return;
        }
        assert!(count <= self.n_max() + 1, "table too short for requested order");
        let a1 = 1.0 + self.alpha - r;
        let mut exp = 0;
        let mut prev = 0.0;
        let mut cur = 1.0;
        visit(0, cur, exp);
        for n in 0..count - 1 {
            let next = ((2.0 * n as f64 + a1) * cur - self.back[n] * prev) * self.inv_lead[n];
            prev = cur;
            cur = next;
            if cur.abs() > BIG {
                cur *= SMALL;
                prev *= SMALL;
                exp += STEP;
            }
            visit(n + 1, cur, exp);
        }
    }

    /// ln of the weight e^{−r/2} r^{α/2}/√Γ(α+1) multiplying qₙ.
    pub fn ln_weight(&self, r: f64) -> f64 {
        let power = if self.alpha == 0.0 {
            0.0
        } else if r == 0.0 {
            if self.alpha > 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        } else {
            0.5 * self.alpha * r.ln()
        };
        -0.5 * r + power - self.half_ln_gamma
    }

    /// Fills `out[n] = 𝓛ₙ^{(α)}(r)` for n < `out.len()`.
    pub fn functions_into(&self, r: f64, out: &mut [f64]) {
        let mut w = Weight::new(self.ln_weight(r));
        self.recur(r, out.len(), |n, m, e| {
            if e != w.exp() {
                w.set_exp(e);
            }
            out[n] = w.apply(m);
        });
    }

    /// Fills `out[n] = Lₙ^{(α)}(r)` in sign/log form for n < `out.len()`.
    pub fn log_poly_into(&self, r: f64, out: &mut [SignedLog]) {
        let mut ln_norm = 0.0;
        self.recur(r, out.len(), |n, m, e| {
            if n > 0 {
                ln_norm += 0.5 * (self.alpha / n as f64).ln_1p();
            }
            out[n] = if m == 0.0 {
                SignedLog::ZERO
            } else {
                SignedLog {
                    sign: if m > 0.0 { 1 } else { -1 },
                    ln_abs: m.abs().ln() + f64::from(e) * LN_2 + ln_norm,
                }
            };
        });
    }
}

pub fn laguerre_batch(alpha: f64, r: f64, n_max: usize) -> Result<LaguerreBatch> {
    if !(r >= 0.0) || !r.is_finite() {
        return domain(format!("Laguerre argument must be finite and non-negative, got {r}"));
    }
    let table = LaguerreTable::new(alpha, n_max)?;
    let mut fn_values = vec![0.0; n_max + 1];
    table.functions_into(r, &mut fn_values);
    let mut log_poly = vec![SignedLog::ZERO; n_max + 1];
    table.log_poly_into(r, &mut log_poly);
    Ok(LaguerreBatch {
        alpha,
        r,
        n_max,
        fn_values,
        log_poly,
    })
}

/// Lₙ^{(α)}(r) in sign/log form for any real `r`.
pub fn laguerre_poly(alpha: f64, r: f64, n: usize) -> Result<SignedLog> {
    let table = LaguerreTable::new(alpha, n)?;
    let mut out = vec![SignedLog::ZERO; n + 1];
    table.log_poly_into(r, &mut out);
    Ok(out[n])
}

/// Relative residual of r·L″ + (α+1−r)·L′ + n·L = 0 with L′ = −L_{n−1}^{(α+1)}
/// and L″ = L_{n−2}^{(α+2)}, normalized by the sum of the term magnitudes.
pub fn laguerre_ode_residual(alpha: f64, n: usize, r: f64) -> Result<f64> {
    let l0 = laguerre_poly(alpha, r, n)?;
    let l1 = if n >= 1 {
        let v = laguerre_poly(alpha + 1.0, r, n - 1)?;
        SignedLog { sign: -v.sign, ..v }
    } else {
        SignedLog::ZERO
    };
    let l2 = if n >= 2 {
        laguerre_poly(alpha + 2.0, r, n - 2)?
    } else {
        SignedLog::ZERO
    };
    let shift = l0.ln_abs.max(l1.ln_abs).max(l2.ln_abs);
    if shift == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let terms = [
        r * l2.scaled(shift),
        (alpha + 1.0 - r) * l1.scaled(shift),
        n as f64 * l0.scaled(shift),
    ];
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(terms.iter().sum::<f64>().abs() / scale)
}

/// |D_h Lₙ^{(α)}(r) + L_{n−1}^{(α+1)}(r)| with D_h the central difference of
/// step 10⁻⁶. Absolute; divide by |L_{n−1}^{(α+1)}(r)| for a relative figure.
pub fn laguerre_derivative_identity_check(alpha: f64, n: usize, r: f64) -> Result<f64> {
    if n == 0 {
        return domain("derivative identity needs n >= 1");
    }
    const H: f64 = 1e-6;
    let plus = laguerre_poly(alpha, r + H, n)?.value();
    let minus = laguerre_poly(alpha, r - H, n)?.value();
    let fd = (plus - minus) / (2.0 * H);
    let lower = laguerre_poly(alpha + 1.0, r, n - 1)?.value();
    Ok((fd + lower).abs())
}
