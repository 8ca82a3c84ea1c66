use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random_series::{RandomLaw, DEFAULT_MODE_BUDGET};
use crate::spectral::{BucketLaw, CoefficientRule};

/// The experiments the driver knows how to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SpectralBound,
    LpRates,
    AlphaStar,
    SquareFunction,
    SalemZygmund,
    Continuity,
    Modulus,
    BernsteinProbe,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::SpectralBound,
        ExperimentKind::LpRates,
        ExperimentKind::AlphaStar,
        ExperimentKind::SquareFunction,
        ExperimentKind::SalemZygmund,
        ExperimentKind::Continuity,
        ExperimentKind::Modulus,
        ExperimentKind::BernsteinProbe,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::SpectralBound => "spectral-bound",
            ExperimentKind::LpRates => "lp-rates",
            ExperimentKind::AlphaStar => "alpha-star",
            ExperimentKind::SquareFunction => "square-function",
            ExperimentKind::SalemZygmund => "salem-zygmund",
            ExperimentKind::Continuity => "continuity",
            ExperimentKind::Modulus => "modulus",
            ExperimentKind::BernsteinProbe => "bernstein-probe",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment '{s}'")))
    }
}

fn one() -> f64 {
    1.0
}

/// Coefficient rule as written in a config file (`[rule]` with a `kind` key).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RuleSpec {
    /// cₙ = n^{−κ}, c₀ = `c0` (default 1).
    PowerLaw {
        kappa: f64,
        #[serde(default = "one")]
        c0: f64,
    },
    /// |cₙ|² = scale·j^{j_power}·ln(j + log_shift)^{log_power} on bucket j.
    BucketPower {
        #[serde(default = "one")]
        scale: f64,
        j_power: f64,
        #[serde(default)]
        log_power: f64,
        #[serde(default)]
        log_shift: f64,
    },
    /// |cₙ|² = scale·2^{block_power·J}·max(J,1)^{block_log_power}, J = ⌊log₂ j⌋.
    BucketDyadic {
        #[serde(default = "one")]
        scale: f64,
        block_power: f64,
        #[serde(default)]
        block_log_power: f64,
    },
    /// cₙ = values[n], zero past the end.
    Explicit { values: Vec<f64> },
}

impl RuleSpec {
    pub fn to_rule(&self) -> CoefficientRule {
        match *self {
            RuleSpec::PowerLaw { kappa, c0 } => CoefficientRule::PowerLaw { kappa, c0 },
            RuleSpec::BucketPower {
                scale,
                j_power,
                log_power,
                log_shift,
            } => CoefficientRule::BucketConstant(BucketLaw::Power {
                scale,
                j_power,
                log_power,
                log_shift,
            }),
            RuleSpec::BucketDyadic {
                scale,
                block_power,
                block_log_power,
            } => CoefficientRule::BucketConstant(BucketLaw::Dyadic {
                scale,
                block_power,
                block_log_power,
            }),
            RuleSpec::Explicit { ref values } => CoefficientRule::Explicit(values.clone()),
        }
    }
}

/// Noise law (`[law]` with a `kind` key).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LawSpec {
    #[default]
    Rademacher,
    Gaussian,
    Uniform { a: f64 },
}

impl LawSpec {
    pub fn to_law(self) -> RandomLaw {
        match self {
            LawSpec::Rademacher => RandomLaw::Rademacher,
            LawSpec::Gaussian => RandomLaw::Gaussian,
            LawSpec::Uniform { a } => RandomLaw::BoundedUniform { a },
        }
    }
}

/// Parameter ranges (`[sweep]`). Every field is optional; see
/// [`ExperimentConfig`] for the defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<[u64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<[u64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    /// [h_min, h_max]; the sweep uses the powers of two between them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<[f64; 2]>,
}

/// Pass thresholds (`[tolerance]`).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// Two-sided band ratio limit (lp-rates).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<f64>,
}

/// Output location and mode budget (`[output]`).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_modes: Option<u64>,
}

/// One experiment invocation.
///
/// Written as TOML with top-level keys `experiment`, `seed`, `d`, `trials`
/// and the sections `[rule]`, `[law]`, `[sweep]`, `[tolerance]`, `[output]`.
/// Missing fields take these defaults:
///
/// | experiment | d | sweep | trials | tolerance |
/// |---|---|---|---|---|
/// | spectral-bound | 1 | j = [100, 2000] (d = 1) or [5, 40], 12 points | | max/min ratio 5 |
/// | lp-rates | 3 | p = [∞], n = [200, 2000], 8 points | | slope 0.03 above p₁, 0.05 at or below; band 3 |
/// | alpha-star | 4 | κ = [0.5], n_max = 10⁶ | | relative 0.1 |
/// | square-function | 4 | κ = [0.5], λ = 64·2^k (k ≤ 6), p = d/α⋆ − 1 and d/α⋆ + 2 | | slope 0.05 |
/// | salem-zygmund | 1 | λ = 2⁵…2¹⁰ | 512 | spread factor 4 |
/// | continuity | 1 | λ = [4096], α = 2 | 16 | final fraction 0.01 |
/// | modulus | 1 | λ = [4096], μ = 0.5, ν = 0, h = [2⁻¹², 2⁻⁴] | 16 | slope 0.1 |
/// | bernstein-probe | 1 | λ = [16, 32, 64, 128, 256] | 8 | slope 0.15 |
///
/// The law defaults to Rademacher, the seed to 0, the output directory to
/// the working directory and the mode budget to 10⁶. Experiments that take a
/// rule build one when `[rule]` is absent: salem-zygmund uses
/// |c|² = j^{−γ(d)−3/2} per bucket, continuity |c|² = j^{−1−γ(d)}·ln(j+1)^{−α−2}
/// and modulus the dyadic law meeting the Hölder block condition with
/// equality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleSpec>,
    #[serde(default)]
    pub law: LawSpec,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default)]
    pub tolerance: Tolerance,
    #[serde(default)]
    pub output: Output,
}

impl ExperimentConfig {
    /// A config with every optional field left at its default.
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            seed: 0,
            d: None,
            trials: None,
            rule: None,
            law: LawSpec::default(),
            sweep: Sweep::default(),
            tolerance: Tolerance::default(),
            output: Output::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn dimension(&self) -> usize {
        self.d.unwrap_or(match self.experiment {
            ExperimentKind::LpRates => 3,
            ExperimentKind::AlphaStar | ExperimentKind::SquareFunction => 4,
            _ => 1,
        })
    }

    pub fn trial_count(&self) -> usize {
        self.trials.unwrap_or(match self.experiment {
            ExperimentKind::SalemZygmund => 512,
            ExperimentKind::BernsteinProbe => 8,
            _ => 16,
        })
    }

    pub fn budget(&self) -> u64 {
        self.output.budget_modes.unwrap_or(DEFAULT_MODE_BUDGET)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    /// Rejects ranges the experiments cannot use.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let d = self.dimension();
        if d == 0 {
            return bad("d must be at least 1".into());
        }
        if self.trial_count() == 0 {
            return bad("trials must be at least 1".into());
        }
        match self.experiment {
            ExperimentKind::LpRates | ExperimentKind::AlphaStar | ExperimentKind::SquareFunction if d < 2 => {
                return bad(format!("{} needs d >= 2", self.experiment));
            }
            ExperimentKind::Continuity | ExperimentKind::Modulus if d != 1 => {
                return bad(format!("{} runs in d = 1", self.experiment));
            }
            _ => {}
        }
        let s = &self.sweep;
        for (name, r) in [("n", s.n), ("j", s.j)] {
            if let Some([lo, hi]) = r {
                if lo == 0 || lo > hi {
                    return bad(format!("sweep.{name} = [{lo}, {hi}] is not a valid range"));
                }
            }
        }
        if let Some(points) = s.points {
            if points < 5 {
                return bad(format!("sweep.points = {points}, rate fits need at least 5"));
            }
        }
        if let Some(l) = &s.lambda {
            if l.is_empty() || l.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return bad("sweep.lambda must be a non-empty list of positive numbers".into());
            }
        }
        if self.experiment == ExperimentKind::BernsteinProbe && s.lambda.as_ref().is_some_and(|l| l.len() < 5) {
            return bad("sweep.lambda needs at least 5 values for the gradient fit".into());
        }
        if let Some(p) = &s.p {
            if p.is_empty() || p.iter().any(|v| !(*v >= 2.0)) {
                return bad("sweep.p must be a non-empty list of exponents >= 2".into());
            }
        }
        if let Some(k) = &s.kappa {
            if k.is_empty() || k.iter().any(|v| !(*v >= 0.0)) {
                return bad("sweep.kappa must be a non-empty list of non-negative numbers".into());
            }
        }
        if let Some(n_max) = s.n_max {
            if n_max < 1000 {
                return bad(format!("sweep.n_max = {n_max}, needs at least 1000"));
            }
        }
        if let Some(mu) = s.mu {
            if !(0.0..=1.0).contains(&mu) {
                return bad(format!("sweep.mu = {mu} is outside [0, 1]"));
            }
        }
        if let Some([lo, hi]) = s.h {
            if !(lo > 0.0 && lo < hi) {
                return bad(format!("sweep.h = [{lo}, {hi}] is not a valid range"));
            }
        }
        if let Some(a) = s.alpha {
            if !(a > 1.0) {
                return bad(format!("sweep.alpha = {a}, needs alpha > 1"));
            }
        }
        if let LawSpec::Uniform { a } = self.law {
            if !(a > 0.0) {
                return bad(format!("law.a = {a} must be positive"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let c = ExperimentConfig::from_toml("experiment = \"modulus\"").unwrap();
        assert_eq!(c, ExperimentConfig::new(ExperimentKind::Modulus));
        assert_eq!(c.trial_count(), 16);
        assert_eq!(c.dimension(), 1);
    }

    #[test]
    fn round_trip() {
        let text = r#"
experiment = "lp-rates"
seed = 7
d = 3

[rule]
kind = "bucket-power"
j_power = -1.5

[law]
kind = "uniform"
a = 2.0

[sweep]
p = [inf, 4.0]
n = [200, 2000]

[tolerance]
value = 0.03
"#;
        let c = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(c.sweep.p.as_ref().unwrap()[0], f64::INFINITY);
        let back = ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_experiment_is_config_error() {
        assert!(matches!(
            ExperimentConfig::from_toml("experiment = \"nope\""),
            Err(Error::Config(_))
        ));
        assert!(matches!("nope".parse::<ExperimentKind>(), Err(Error::Config(_))));
    }

    #[test]
    fn invalid_ranges() {
        let mut c = ExperimentConfig::new(ExperimentKind::LpRates);
        c.sweep.n = Some([2000, 200]);
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new(ExperimentKind::Modulus);
        c.sweep.mu = Some(1.5);
        assert!(c.validate().is_err());
    }
}
