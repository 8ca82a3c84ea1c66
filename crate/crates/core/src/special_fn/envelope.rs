use crate::error::{Error, Result};

use super::laguerre::LaguerreTable;
use super::SignedLog;

/// Default decay rate of the exponential tail regime.
pub const DEFAULT_TAIL_GAMMA: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// r ≤ 1/ν: (rν)^{α/2}.
    Origin,
    /// 1/ν ≤ r ≤ ν/2: (rν)^{−1/4}.
    Oscillatory,
    /// ν/2 ≤ r ≤ 3ν/2: ν^{−1/4}(ν^{1/3} + |ν − r|)^{−1/4}.
    Airy,
    /// r > 3ν/2: e^{−γr}.
    Tail,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub value: f64,
    pub regime: Regime,
}

/// Erdélyi bound for |𝓛ₙ^{(α)}(r)| without its constant, with ν = 4n+2α+2.
pub fn erdelyi_envelope(n: usize, alpha: f64, r: f64) -> Envelope {
    erdelyi_envelope_with(n, alpha, r, DEFAULT_TAIL_GAMMA)
}

pub fn erdelyi_envelope_with(n: usize, alpha: f64, r: f64, gamma: f64) -> Envelope {
    let nu = 4.0 * n as f64 + 2.0 * alpha + 2.0;
    if r <= 1.0 / nu {
        Envelope {
            value: (r * nu).powf(alpha / 2.0),
            regime: Regime::Origin,
        }
    } else if r <= nu / 2.0 {
        Envelope {
            value: (r * nu).powf(-0.25),
            regime: Regime::Oscillatory,
        }
    } else if r <= 1.5 * nu {
        Envelope {
            value: nu.powf(-0.25) * (nu.cbrt() + (nu - r).abs()).powf(-0.25),
            regime: Regime::Airy,
        }
    } else {
        Envelope {
            value: (-gamma * r).exp(),
            regime: Regime::Tail,
        }
    }
}

/// Searches the largest ε ≤ 1 with |Lₙ^{(α)}(r)|/n^α ≥ c on (0, ε²/n], for
/// c = ½·Lₙ^{(α)}(0)/n^α. Returns (ε, c).
pub fn szeg_lower_region(n: usize, alpha: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Domain("szeg_lower_region needs n >= 1".into()));
    }
    const GRID: usize = 256;
    let table = LaguerreTable::new(alpha, n)?;
    let nf = n as f64;
    let scale = alpha * nf.ln();
    let mut buf = vec![SignedLog::ZERO; n + 1];
    table.log_poly_into(0.0, &mut buf);
    let c = 0.5 * (buf[n].ln_abs - scale).exp();

    let mut grid_min = |eps: f64| -> f64 {
        let top = eps * eps / nf;
        (1..=GRID)
            .map(|i| {
                table.log_poly_into(top * i as f64 / GRID as f64, &mut buf);
                buf[n].scaled(scale).abs()
            })
            .fold(f64::INFINITY, f64::min)
    };
    if grid_min(1.0) >= c {
        return Ok((1.0, c));
    }
    let (mut lo, mut hi) = (1e-3, 1.0);
    if grid_min(lo) < c {
        return Err(Error::SearchFailed(format!(
            "no epsilon >= 1e-3 keeps |L_{n}^({alpha})| above half its value at 0"
        )));
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if grid_min(mid) >= c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, c))
}
