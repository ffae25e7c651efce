//! TOML system configuration.
//!
//! All quantities are SI: radii and separations in m, frequencies in rad/s,
//! number densities in m⁻³, polarisabilities in C·m²/V. Sections that are
//! omitted default to vacuum. A minimal file:
//!
//! ```toml
//! separation = 1e-8
//!
//! [sphere1]
//! radius = 1e-9
//! epsilon = { kind = "oscillators", oscillators = [{ plasma = 1e16, resonance = 1e16 }] }
//!
//! [sphere2]
//! radius = 1e-9
//! epsilon = { kind = "constant", value = 3.0 }
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::dispersion::TwoSphereSystem;
use crate::error::Result;
use crate::materials::{
    Extrapolation, LorentzTerm, MolecularSpecies, Oscillator, Polarisability, ResponseFunction,
};
use crate::oracles::quadrature::FALLBACK_SCALE;
use crate::oracles::{MonteCarloSpec, QuadratureSpec};
use crate::polarisability::{MediumSpec, SphereSpec};

use super::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub separation: Option<f64>,
    #[serde(default)]
    pub medium: MaterialSection,
    pub sphere1: SphereSection,
    pub sphere2: SphereSection,
    pub species: Option<SpeciesSection>,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default)]
    pub mc: McSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSection {
    pub epsilon: Option<ResponseSource>,
    pub mu: Option<ResponseSource>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereSection {
    pub radius: f64,
    pub epsilon: Option<ResponseSource>,
    pub mu: Option<ResponseSource>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ResponseSource {
    Constant {
        value: f64,
    },
    Oscillators {
        oscillators: Vec<OscillatorSource>,
    },
    Table {
        xi: Vec<f64>,
        value: Vec<f64>,
        #[serde(default)]
        extrapolation: ExtrapolationSource,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSource {
    pub plasma: f64,
    pub resonance: f64,
    #[serde(default)]
    pub damping: f64,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtrapolationSource {
    #[default]
    ClampToUnity,
    Reject,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesSection {
    pub sphere1: Option<SpeciesSource>,
    pub sphere2: Option<SpeciesSource>,
    pub medium: Option<SpeciesSource>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesSource {
    pub density: f64,
    pub polarisability: PolarisabilitySource,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PolarisabilitySource {
    Constant { value: f64 },
    Lorentz { terms: Vec<LorentzSource> },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LorentzSource {
    pub static_alpha: f64,
    pub resonance: f64,
    #[serde(default)]
    pub damping: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    /// Mapping scale; defaults to the dominant resonance of the system.
    pub scale: Option<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_doublings")]
    pub max_doublings: u32,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        Self {
            scale: None,
            tolerance: default_tolerance(),
            max_doublings: default_doublings(),
        }
    }
}

fn default_tolerance() -> f64 {
    QuadratureSpec::default().tolerance()
}

fn default_doublings() -> u32 {
    QuadratureSpec::default().max_doublings()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_chunks")]
    pub chunks: u32,
}

impl Default for McSection {
    fn default() -> Self {
        Self {
            samples: default_samples(),
            seed: default_seed(),
            chunks: default_chunks(),
        }
    }
}

fn default_samples() -> u64 {
    MonteCarloSpec::default().samples()
}

fn default_seed() -> u64 {
    MonteCarloSpec::default().seed()
}

fn default_chunks() -> u32 {
    MonteCarloSpec::default().chunks()
}

/// Molecular species attached to the three regions.
#[derive(Debug, Clone, Default)]
pub struct Species {
    pub sphere1: Option<MolecularSpecies>,
    pub sphere2: Option<MolecularSpecies>,
    pub medium: Option<MolecularSpecies>,
}

/// A fully resolved configuration.
#[derive(Debug, Clone)]
pub struct SystemConfig {
    pub sphere1: SphereSpec,
    pub sphere2: SphereSpec,
    pub medium: MediumSpec,
    pub separation: Option<f64>,
    pub species: Species,
    quad_scale: Option<f64>,
    quad_tolerance: f64,
    quad_doublings: u32,
    pub mc: MonteCarloSpec,
}

impl SystemConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        file.resolve().map_err(|e| CliError::Config(e.to_string()))
    }

    /// Two-sphere system at `separation`, or at the configured one.
    pub fn system(&self, separation: Option<f64>) -> Result<TwoSphereSystem, CliError> {
        let r = separation.or(self.separation).ok_or_else(|| {
            CliError::Config("no separation given in the config or on the command line".into())
        })?;
        TwoSphereSystem::new(
            self.sphere1.clone(),
            self.sphere2.clone(),
            self.medium.clone(),
            r,
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }

    /// Quadrature centred on `dominant` unless the config fixes the scale.
    pub fn quadrature_for(
        &self,
        dominant: Option<f64>,
        tolerance: Option<f64>,
    ) -> Result<QuadratureSpec, CliError> {
        let scale = self.quad_scale.or(dominant).unwrap_or(FALLBACK_SCALE);
        QuadratureSpec::new(
            scale,
            tolerance.unwrap_or(self.quad_tolerance),
            self.quad_doublings,
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }

    /// Configured quadrature scale, if any.
    pub fn quad_scale(&self) -> Option<f64> {
        self.quad_scale
    }
}

impl ConfigFile {
    fn resolve(self) -> Result<SystemConfig> {
        let medium = MediumSpec::new(response(self.medium.epsilon)?, response(self.medium.mu)?);
        let sphere = |s: SphereSection| -> Result<SphereSpec> {
            SphereSpec::new(s.radius, response(s.epsilon)?, response(s.mu)?)
        };
        let sphere1 = sphere(self.sphere1)?;
        let sphere2 = sphere(self.sphere2)?;
        if let Some(r) = self.separation {
            if !(r > 0.0 && r.is_finite()) {
                return Err(crate::Error::InvalidParameter(format!(
                    "separation must be > 0, got {r}"
                )));
            }
        }
        let species = match self.species {
            None => Species::default(),
            Some(s) => Species {
                sphere1: s.sphere1.map(species).transpose()?,
                sphere2: s.sphere2.map(species).transpose()?,
                medium: s.medium.map(species).transpose()?,
            },
        };
        let q = self.quadrature;
        // Validate now so that errors surface as configuration errors.
        QuadratureSpec::new(
            q.scale.unwrap_or(FALLBACK_SCALE),
            q.tolerance,
            q.max_doublings,
        )?;
        let mc = MonteCarloSpec::new(self.mc.samples, self.mc.seed, self.mc.chunks)?;
        Ok(SystemConfig {
            sphere1,
            sphere2,
            medium,
            separation: self.separation,
            species,
            quad_scale: q.scale,
            quad_tolerance: q.tolerance,
            quad_doublings: q.max_doublings,
            mc,
        })
    }
}

fn response(src: Option<ResponseSource>) -> Result<ResponseFunction> {
    match src {
        None => Ok(ResponseFunction::vacuum()),
        Some(ResponseSource::Constant { value }) => ResponseFunction::constant(value),
        Some(ResponseSource::Oscillators { oscillators }) => {
            let terms = oscillators
                .into_iter()
                .map(|o| Oscillator::new(o.plasma, o.resonance, o.damping))
                .collect::<Result<Vec<_>>>()?;
            Ok(ResponseFunction::oscillators(terms))
        }
        Some(ResponseSource::Table {
            xi,
            value,
            extrapolation,
        }) => {
            let rule = match extrapolation {
                ExtrapolationSource::ClampToUnity => Extrapolation::ClampToUnity,
                ExtrapolationSource::Reject => Extrapolation::Reject,
            };
            ResponseFunction::tabulated(xi, value, rule)
        }
    }
}

fn species(src: SpeciesSource) -> Result<MolecularSpecies> {
    let pol = match src.polarisability {
        PolarisabilitySource::Constant { value } => Polarisability::constant(value)?,
        PolarisabilitySource::Lorentz { terms } => Polarisability::lorentz(
            terms
                .into_iter()
                .map(|t| LorentzTerm {
                    static_alpha: t.static_alpha,
                    resonance: t.resonance,
                    damping: t.damping,
                })
                .collect(),
        )?,
    };
    MolecularSpecies::new(src.density, pol)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
separation = 1e-8

[medium]
epsilon = { kind = "oscillators", oscillators = [{ plasma = 5e15, resonance = 2e16, damping = 1e14 }] }
mu = { kind = "constant", value = 1.0 }

[sphere1]
radius = 1e-9
epsilon = { kind = "table", xi = [1e14, 1e15, 1e16, 1e17], value = [3.0, 2.5, 1.5, 1.01] }

[sphere2]
radius = 2e-9

[species.sphere1]
density = 1e28
polarisability = { kind = "lorentz", terms = [{ static_alpha = 8.85e-42, resonance = 1e16 }] }

[quadrature]
tolerance = 1e-11

[mc]
samples = 1000
seed = 9
chunks = 4
"#;

    #[test]
    fn parses_full_file() {
        let c = SystemConfig::parse(FULL).unwrap();
        assert_eq!(c.separation, Some(1e-8));
        assert_eq!(c.sphere2.radius(), 2e-9);
        assert!(c.sphere2.epsilon().is_vacuum());
        assert!(!c.medium.is_vacuum());
        assert!(c.species.sphere1.is_some() && c.species.medium.is_none());
        assert_eq!(c.mc.samples(), 1000);
        let q = c.quadrature_for(Some(3e16), None).unwrap();
        assert_eq!(q.scale(), 3e16);
        assert_eq!(q.tolerance(), 1e-11);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "[sphere1]\nradius = 1e-9\n",
            "[sphere1]\nradius = -1\n[sphere2]\nradius = 1\n",
            "[sphere1]\nradius = 1\ncolour = 2\n[sphere2]\nradius = 1\n",
            "[sphere1]\nradius = 1\nepsilon = { kind = \"constant\", value = 0.5 }\n[sphere2]\nradius = 1\n",
            "separation = 0\n[sphere1]\nradius = 1\n[sphere2]\nradius = 1\n",
        ] {
            assert!(matches!(SystemConfig::parse(bad), Err(CliError::Config(_))), "{bad}");
        }
    }

    #[test]
    fn overlapping_spheres_are_a_config_error() {
        let c =
            SystemConfig::parse("separation = 1.5\n[sphere1]\nradius = 1\n[sphere2]\nradius = 1\n")
                .unwrap();
        assert!(matches!(c.system(None), Err(CliError::Config(_))));
        assert!(c.system(Some(3.0)).is_ok());
    }
}
