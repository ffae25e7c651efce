//! Non-retarded dispersion coefficients between small spheres in a medium.
//!
//! Two spheres interact through `U(r₁₂) = C6/r₁₂⁶` and a sphere in front of a
//! perfect mirror through `C3/z³`. The Abraham and Maxwell stress tensors give
//! the same structure and differ only in the power of the medium response:
//!
//! ```text
//! C6 = −(3ℏ/16π³) ∫ dξ [ α₁*α₂* / (ε0² ε^p) + μ0² μ^p β₁*β₂* ]   p = 2 | 3
//! C3 = −(ℏ/16π²)  ∫ dξ [ α*/(ε0 ε^q) − μ0 μ^q β* ]               q = 1 | 2
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::constants::{EPSILON_0, HBAR, MU_0};
use crate::error::{Error, Result};
use crate::materials::ResponseFunction;
use crate::oracles::quadrature::{
    integrate_semiinfinite, Integral, QuadratureSpec, FALLBACK_SCALE,
};
use crate::polarisability::{
    excess_alpha_from_values, excess_beta_from_values, MediumSpec, SphereSpec,
};

/// Decay probes sit this many characteristic frequencies out on the axis.
pub const DECAY_PROBE_FACTOR: f64 = 1e3;

/// Which stress tensor defines the force on a body in the medium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StressChoice {
    Abraham,
    Maxwell,
}

impl StressChoice {
    pub const ALL: [StressChoice; 2] = [StressChoice::Abraham, StressChoice::Maxwell];

    /// Power of the medium response in the two-sphere coefficient.
    pub fn c6_exponent(self) -> i32 {
        match self {
            StressChoice::Abraham => 2,
            StressChoice::Maxwell => 3,
        }
    }

    /// Power of the medium response in the sphere–mirror coefficient.
    pub fn c3_exponent(self) -> i32 {
        match self {
            StressChoice::Abraham => 1,
            StressChoice::Maxwell => 2,
        }
    }
}

impl fmt::Display for StressChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StressChoice::Abraham => "Abraham",
            StressChoice::Maxwell => "Maxwell",
        })
    }
}

impl FromStr for StressChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "abraham" | "a" => Ok(StressChoice::Abraham),
            "maxwell" | "m" => Ok(StressChoice::Maxwell),
            other => Err(Error::invalid(format!("unknown stress choice '{other}'"))),
        }
    }
}

/// Relative permittivity and permeability of one constituent at a fixed `ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseValues {
    pub epsilon: f64,
    pub mu: f64,
}

impl ResponseValues {
    pub fn new(epsilon: f64, mu: f64) -> Self {
        Self { epsilon, mu }
    }

    pub const VACUUM: ResponseValues = ResponseValues {
        epsilon: 1.0,
        mu: 1.0,
    };
}

/// Electric and magnetic parts of a spectral density at one `ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandParts {
    pub electric: f64,
    pub magnetic: f64,
}

impl IntegrandParts {
    pub fn total(&self) -> f64 {
        self.electric + self.magnetic
    }
}

const C6_PREFACTOR: f64 = -3.0 * HBAR / (16.0 * PI * PI * PI);
const C3_PREFACTOR: f64 = -HBAR / (16.0 * PI * PI);

/// Two-sphere spectral density from polarisabilities and the medium response.
/// Substituting molecular for excess polarisabilities gives the molecular
/// pair density.
pub fn c6_integrand_from_polarisabilities(
    alpha1: f64,
    alpha2: f64,
    beta1: f64,
    beta2: f64,
    medium: ResponseValues,
    choice: StressChoice,
) -> IntegrandParts {
    let p = choice.c6_exponent();
    IntegrandParts {
        electric: C6_PREFACTOR * alpha1 * alpha2 / (EPSILON_0 * EPSILON_0 * medium.epsilon.powi(p)),
        magnetic: C6_PREFACTOR * MU_0 * MU_0 * medium.mu.powi(p) * beta1 * beta2,
    }
}

/// Two-sphere spectral density from plain response values. Values are not
/// range checked, which lets series expansions step to negative susceptibility.
pub fn c6_integrand_from_values(
    radius1: f64,
    sphere1: ResponseValues,
    radius2: f64,
    sphere2: ResponseValues,
    medium: ResponseValues,
    choice: StressChoice,
) -> IntegrandParts {
    c6_integrand_from_polarisabilities(
        excess_alpha_from_values(radius1, sphere1.epsilon, medium.epsilon),
        excess_alpha_from_values(radius2, sphere2.epsilon, medium.epsilon),
        excess_beta_from_values(radius1, sphere1.mu, medium.mu),
        excess_beta_from_values(radius2, sphere2.mu, medium.mu),
        medium,
        choice,
    )
}

/// Sphere–mirror spectral density from plain response values.
pub fn c3_integrand_from_values(
    radius: f64,
    sphere: ResponseValues,
    medium: ResponseValues,
    choice: StressChoice,
) -> IntegrandParts {
    let q = choice.c3_exponent();
    let alpha = excess_alpha_from_values(radius, sphere.epsilon, medium.epsilon);
    let beta = excess_beta_from_values(radius, sphere.mu, medium.mu);
    IntegrandParts {
        electric: C3_PREFACTOR * alpha / (EPSILON_0 * medium.epsilon.powi(q)),
        magnetic: -C3_PREFACTOR * MU_0 * medium.mu.powi(q) * beta,
    }
}

fn sphere_values(s: &SphereSpec, xi: f64) -> Result<ResponseValues> {
    Ok(ResponseValues::new(s.epsilon().eval(xi)?, s.mu().eval(xi)?))
}

fn medium_values(m: &MediumSpec, xi: f64) -> Result<ResponseValues> {
    Ok(ResponseValues::new(m.epsilon().eval(xi)?, m.mu().eval(xi)?))
}

/// Electric and magnetic parts of the two-sphere spectral density at `iξ`.
pub fn c6_integrand_parts(
    s1: &SphereSpec,
    s2: &SphereSpec,
    m: &MediumSpec,
    choice: StressChoice,
    xi: f64,
) -> Result<IntegrandParts> {
    Ok(c6_integrand_from_values(
        s1.radius(),
        sphere_values(s1, xi)?,
        s2.radius(),
        sphere_values(s2, xi)?,
        medium_values(m, xi)?,
        choice,
    ))
}

/// Two-sphere spectral density (J·m⁶·s/rad) at `iξ`.
pub fn c6_integrand(
    s1: &SphereSpec,
    s2: &SphereSpec,
    m: &MediumSpec,
    choice: StressChoice,
    xi: f64,
) -> Result<f64> {
    Ok(c6_integrand_parts(s1, s2, m, choice, xi)?.total())
}

pub fn c3_integrand_parts(
    s: &SphereSpec,
    m: &MediumSpec,
    choice: StressChoice,
    xi: f64,
) -> Result<IntegrandParts> {
    Ok(c3_integrand_from_values(
        s.radius(),
        sphere_values(s, xi)?,
        medium_values(m, xi)?,
        choice,
    ))
}

/// Sphere–mirror spectral density (J·m³·s/rad) at `iξ`.
pub fn c3_integrand(s: &SphereSpec, m: &MediumSpec, choice: StressChoice, xi: f64) -> Result<f64> {
    Ok(c3_integrand_parts(s, m, choice, xi)?.total())
}

/// Two small spheres in a homogeneous medium.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSphereSystem {
    sphere1: SphereSpec,
    sphere2: SphereSpec,
    medium: MediumSpec,
    separation: f64,
}

impl TwoSphereSystem {
    pub fn new(
        sphere1: SphereSpec,
        sphere2: SphereSpec,
        medium: MediumSpec,
        separation: f64,
    ) -> Result<Self> {
        let contact = sphere1.radius() + sphere2.radius();
        if !(separation > contact && separation.is_finite()) {
            return Err(Error::invalid(format!(
                "centre separation {separation:e} m must exceed R1 + R2 = {contact:e} m"
            )));
        }
        Ok(Self {
            sphere1,
            sphere2,
            medium,
            separation,
        })
    }

    pub fn sphere1(&self) -> &SphereSpec {
        &self.sphere1
    }

    pub fn sphere2(&self) -> &SphereSpec {
        &self.sphere2
    }

    pub fn medium(&self) -> &MediumSpec {
        &self.medium
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn with_separation(&self, separation: f64) -> Result<Self> {
        Self::new(
            self.sphere1.clone(),
            self.sphere2.clone(),
            self.medium.clone(),
            separation,
        )
    }

    pub fn swapped(&self) -> Self {
        Self {
            sphere1: self.sphere2.clone(),
            sphere2: self.sphere1.clone(),
            ..self.clone()
        }
    }

    /// The six response functions of the system.
    pub fn responses(&self) -> [&ResponseFunction; 6] {
        [
            self.sphere1.epsilon(),
            self.sphere1.mu(),
            self.sphere2.epsilon(),
            self.sphere2.mu(),
            self.medium.epsilon(),
            self.medium.mu(),
        ]
    }

    /// Strongest resonance among the constituents, for the quadrature scale.
    pub fn dominant_frequency(&self) -> Option<f64> {
        self.responses()
            .iter()
            .filter_map(|r| r.dominant_frequency())
            .fold(None, |acc, w| Some(acc.map_or(w, |a: f64| a.max(w))))
    }

    /// Quadrature parameters centred on this system.
    pub fn quadrature(&self, tolerance: f64, max_doublings: u32) -> Result<QuadratureSpec> {
        QuadratureSpec::new(
            self.dominant_frequency().unwrap_or(FALLBACK_SCALE),
            tolerance,
            max_doublings,
        )
    }

    /// True when the spheres are closer than five radii, where the small-sphere
    /// closed forms lose accuracy.
    pub fn violates_small_sphere_regime(&self) -> bool {
        self.separation < 5.0 * self.sphere1.radius().max(self.sphere2.radius())
    }
}

/// Exchange `ε ↔ μ` for the medium and both spheres.
pub fn duality_transform(sys: &TwoSphereSystem) -> TwoSphereSystem {
    TwoSphereSystem {
        sphere1: sys.sphere1.dual(),
        sphere2: sys.sphere2.dual(),
        medium: sys.medium.dual(),
        separation: sys.separation,
    }
}

/// C6 split into electric and magnetic contributions, in J·m⁶.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C6Breakdown {
    pub electric_term: f64,
    pub magnetic_term: f64,
    pub total: f64,
    pub quadrature_error_estimate: f64,
}

/// C3 split into electric and magnetic contributions, in J·m³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C3Breakdown {
    pub electric_term: f64,
    pub magnetic_term: f64,
    pub total: f64,
    pub quadrature_error_estimate: f64,
}

fn require_decay<'a>(
    responses: impl IntoIterator<Item = &'a ResponseFunction>,
    quad: &QuadratureSpec,
) -> Result<()> {
    for r in responses {
        let probe = DECAY_PROBE_FACTOR * r.max_frequency().unwrap_or(0.0).max(quad.scale());
        if let Err(e @ Error::OutOfRange { .. }) = r.susceptibility(probe) {
            return Err(e);
        }
        if !r.validate_decay(probe) {
            return Err(Error::Divergent(format!(
                "response function does not decay on the imaginary axis \
                 (χ at {probe:e} rad/s is not below {} of its static value)",
                crate::materials::DECAY_RATIO
            )));
        }
    }
    Ok(())
}

fn integrate_parts<F>(f: F, quad: &QuadratureSpec) -> Result<(Integral, Integral)>
where
    F: Fn(f64) -> Result<IntegrandParts>,
{
    let electric = integrate_semiinfinite(|xi| Ok(f(xi)?.electric), quad)?;
    let magnetic = integrate_semiinfinite(|xi| Ok(f(xi)?.magnetic), quad)?;
    Ok((electric, magnetic))
}

/// Two-sphere coefficient `C6` for one stress choice.
pub fn c6(
    sys: &TwoSphereSystem,
    choice: StressChoice,
    quad: &QuadratureSpec,
) -> Result<C6Breakdown> {
    require_decay(sys.responses(), quad)?;
    let (e, m) = integrate_parts(
        |xi| c6_integrand_parts(&sys.sphere1, &sys.sphere2, &sys.medium, choice, xi),
        quad,
    )?;
    Ok(C6Breakdown {
        electric_term: e.value,
        magnetic_term: m.value,
        total: e.value + m.value,
        quadrature_error_estimate: e.error + m.error,
    })
}

/// Sphere–perfect-mirror coefficient `C3` for one stress choice.
pub fn c3(
    sphere: &SphereSpec,
    medium: &MediumSpec,
    choice: StressChoice,
    quad: &QuadratureSpec,
) -> Result<C3Breakdown> {
    require_decay(
        [sphere.epsilon(), sphere.mu(), medium.epsilon(), medium.mu()],
        quad,
    )?;
    let (e, m) = integrate_parts(|xi| c3_integrand_parts(sphere, medium, choice, xi), quad)?;
    Ok(C3Breakdown {
        electric_term: e.value,
        magnetic_term: m.value,
        total: e.value + m.value,
        quadrature_error_estimate: e.error + m.error,
    })
}

fn check_separation(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("separation must be > 0, got {r}")))
    }
}

/// `U = C6/r⁶` in J.
pub fn potential(c6_total: f64, separation: f64) -> Result<f64> {
    check_separation(separation)?;
    Ok(c6_total / separation.powi(6))
}

/// Radial force `−dU/dr = 6·C6/r⁷` in N; negative values attract.
pub fn force_magnitude(c6_total: f64, separation: f64) -> Result<f64> {
    check_separation(separation)?;
    Ok(6.0 * c6_total / separation.powi(7))
}
