//! Run configurations: TOML schema, validation and sweep-parameter paths.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::ModelConfig;
use crate::probes::ProbeSpec;

/// Which correlator realization a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlavorChoice {
    Mode,
    Filtered,
    ProbeLevel,
}

impl FlavorChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Mode => "mode",
            Self::Filtered => "filtered",
            Self::ProbeLevel => "probe_level",
        }
    }
}

/// Linear sweep of one numeric parameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Dotted path of the swept field, e.g. `probes.1.energy`.
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: PathBuf,
    pub format: OutputFormat,
}

/// Solver knobs exposed to run configurations.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// Fixed particle number for number-conserving models; the default
    /// fills every mode below the chemical potential.
    pub sector: Option<u32>,
    pub dense_cap: usize,
    pub degeneracy_tol: f64,
    pub allow_tie_break: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            sector: None,
            dense_cap: 4096,
            degeneracy_tol: 1e-9,
            allow_tie_break: false,
        }
    }
}

impl SolverConfig {
    pub fn to_options(&self) -> crate::solver::SolverOptions {
        crate::solver::SolverOptions {
            dense_cap: self.dense_cap,
            degeneracy_tol: self.degeneracy_tol,
            allow_tie_break: self.allow_tie_break,
            ..crate::solver::SolverOptions::default()
        }
    }
}

/// Numeric tolerances a run may override.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunTolerances {
    /// Window for resolving probe energies to eigenmodes; defaults to the
    /// probe width.
    pub mode_select: Option<f64>,
}

/// A complete run: model, two probes, flavor, optional sweep and output.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub probes: Vec<ProbeSpec>,
    pub flavor: FlavorChoice,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub tolerances: RunTolerances,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.probes.len() != 2 {
            return Err(Error::Config(format!(
                "exactly two probes required, got {}",
                self.probes.len()
            )));
        }
        for p in &self.probes {
            p.validate()?;
        }
        if let Some(sweep) = &self.sweep {
            if sweep.steps < 2 {
                return Err(Error::Config(format!(
                    "sweep needs at least 2 steps, got {}",
                    sweep.steps
                )));
            }
            // The path must resolve on a scratch copy.
            let mut probe = self.clone();
            probe.sweep = None;
            set_sweep_parameter(&mut probe, &sweep.parameter, sweep.from)?;
        }
        Ok(())
    }

    /// The n-th sweep value, linearly spaced inclusive of both ends.
    pub fn sweep_value(sweep: &SweepSpec, index: usize) -> f64 {
        let t = index as f64 / (sweep.steps - 1) as f64;
        sweep.from + (sweep.to - sweep.from) * t
    }
}

/// Assign `value` to the numeric field named by a dotted `path`.
///
/// Supported paths: `probes.<i>.{energy|width|coupling}` and the model's
/// own numeric fields (`model.hopping`, `model.interaction`,
/// `model.pairing_gap`, `model.tunneling`, `model.pairs.<k>.{xi|delta}`,
/// plus `model.inner.*` and `model.probes.<k>.{energy|coupling}` for the
/// probe-coupled preset). Unknown paths are hard errors.
pub fn set_sweep_parameter(config: &mut RunConfig, path: &str, value: f64) -> Result<()> {
    let segments: Vec<&str> = path.split('.').collect();
    let unknown = || Error::Config(format!("unknown sweep parameter `{path}`"));
    match segments.as_slice() {
        ["probes", index, field] => {
            let i: usize = index.parse().map_err(|_| unknown())?;
            let probe = config.probes.get_mut(i).ok_or_else(unknown)?;
            match *field {
                "energy" => probe.energy = value,
                "width" => probe.width = value,
                "coupling" => probe.coupling = value,
                _ => return Err(unknown()),
            }
            Ok(())
        }
        ["model", rest @ ..] => set_model_parameter(&mut config.model, rest, value, path),
        _ => Err(unknown()),
    }
}

fn set_model_parameter(
    model: &mut ModelConfig,
    segments: &[&str],
    value: f64,
    full_path: &str,
) -> Result<()> {
    let unknown = || Error::Config(format!("unknown sweep parameter `{full_path}`"));
    match (model, segments) {
        (ModelConfig::FreeChain { hopping, .. }, ["hopping"]) => {
            *hopping = value;
            Ok(())
        }
        (ModelConfig::InteractingChain { hopping, .. }, ["hopping"]) => {
            *hopping = value;
            Ok(())
        }
        (ModelConfig::InteractingChain { interaction, .. }, ["interaction"]) => {
            *interaction = value;
            Ok(())
        }
        (ModelConfig::PairingToy { pairs }, ["pairs", index, field]) => {
            let i: usize = index.parse().map_err(|_| unknown())?;
            let pair = pairs.get_mut(i).ok_or_else(unknown)?;
            match *field {
                "xi" => pair.xi = value,
                "delta" => pair.delta = value,
                _ => return Err(unknown()),
            }
            Ok(())
        }
        (ModelConfig::ProximityChain { hopping, .. }, ["hopping"]) => {
            *hopping = value;
            Ok(())
        }
        (ModelConfig::ProximityChain { pairing_gap, .. }, ["pairing_gap"]) => {
            *pairing_gap = value;
            Ok(())
        }
        (ModelConfig::ProximityChain { tunneling, .. }, ["tunneling"]) => {
            *tunneling = value;
            Ok(())
        }
        (ModelConfig::ProbeCoupled { probes, .. }, ["probes", index, field]) => {
            let i: usize = index.parse().map_err(|_| unknown())?;
            let probe = probes.get_mut(i).ok_or_else(unknown)?;
            match *field {
                "energy" => probe.energy = value,
                "coupling" => probe.coupling = value,
                _ => return Err(unknown()),
            }
            Ok(())
        }
        (ModelConfig::ProbeCoupled { inner, .. }, ["inner", rest @ ..]) => {
            set_model_parameter(inner, rest, value, full_path)
        }
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAIRING_RUN: &str = r#"
flavor = "mode"

[model]
preset = "pairing_toy"
pairs = [{ xi = 0.0, delta = 1.0 }]

[[probes]]
energy = 0.0
character = "particle"
width = 1e-6
site = 0

[[probes]]
energy = 0.0
character = "particle"
width = 1e-6
site = 1
"#;

    #[test]
    fn parses_minimal_config() {
        let config = RunConfig::parse(PAIRING_RUN).unwrap();
        assert_eq!(config.flavor, FlavorChoice::Mode);
        assert_eq!(config.probes.len(), 2);
        assert_eq!(config.solver.dense_cap, 4096);
    }

    #[test]
    fn unknown_keys_are_hard_errors() {
        let bad = PAIRING_RUN.replace("width = 1e-6", "width = 1e-6\ntypo_key = 3");
        let err = RunConfig::parse(&bad);
        assert!(matches!(err, Err(Error::Config(_))), "{err:?}");
    }

    #[test]
    fn sweep_paths_resolve() {
        let mut config = RunConfig::parse(PAIRING_RUN).unwrap();
        set_sweep_parameter(&mut config, "probes.1.energy", 0.7).unwrap();
        assert_eq!(config.probes[1].energy, 0.7);
        set_sweep_parameter(&mut config, "model.pairs.0.delta", 2.0).unwrap();
        match &config.model {
            ModelConfig::PairingToy { pairs } => assert_eq!(pairs[0].delta, 2.0),
            _ => unreachable!(),
        }
        assert!(set_sweep_parameter(&mut config, "model.nope", 1.0).is_err());
        assert!(set_sweep_parameter(&mut config, "probes.7.energy", 1.0).is_err());
    }

    #[test]
    fn sweep_validation_checks_path_and_steps() {
        let with_sweep = format!(
            "{PAIRING_RUN}\n[sweep]\nparameter = \"probes.1.energy\"\nfrom = 0.0\nto = 1.0\nsteps = 5\n"
        );
        assert!(RunConfig::parse(&with_sweep).is_ok());
        let bad_steps = with_sweep.replace("steps = 5", "steps = 1");
        assert!(RunConfig::parse(&bad_steps).is_err());
        let bad_path = with_sweep.replace("probes.1.energy", "probes.1.nonsense");
        assert!(RunConfig::parse(&bad_path).is_err());
    }

    #[test]
    fn nested_probe_coupled_config_parses() {
        let text = r#"
flavor = "probe_level"

[model]
preset = "probe_coupled"
probes = [
  { energy = -1.0, coupling = 0.02, site = 0 },
  { energy = 1.0, coupling = 0.02, site = 1 },
]

[model.inner]
preset = "pairing_toy"
pairs = [{ xi = 0.0, delta = 1.0 }]

[[probes]]
energy = -1.0
character = "hole"
width = 0.05
site = 0
coupling = 0.02

[[probes]]
energy = 1.0
character = "particle"
width = 0.05
site = 1
coupling = 0.02
"#;
        let mut config = RunConfig::parse(text).unwrap();
        set_sweep_parameter(&mut config, "model.inner.pairs.0.xi", 0.3).unwrap();
        set_sweep_parameter(&mut config, "model.probes.0.coupling", 0.01).unwrap();
    }

    #[test]
    fn sweep_values_are_inclusive_linear() {
        let sweep = SweepSpec {
            parameter: "probes.1.energy".into(),
            from: 1.0,
            to: 2.0,
            steps: 5,
        };
        assert_eq!(RunConfig::sweep_value(&sweep, 0), 1.0);
        assert_eq!(RunConfig::sweep_value(&sweep, 4), 2.0);
        assert!((RunConfig::sweep_value(&sweep, 2) - 1.5).abs() < 1e-15);
    }
}
