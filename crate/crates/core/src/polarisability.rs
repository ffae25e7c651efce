//! Excess dipole polarisabilities of a small sphere embedded in a medium.

use std::f64::consts::PI;

use crate::constants::{EPSILON_0, MU_0};
use crate::error::{Error, Result};
use crate::materials::ResponseFunction;

/// A small magneto-dielectric sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSpec {
    radius: f64,
    epsilon: ResponseFunction,
    mu: ResponseFunction,
}

impl SphereSpec {
    pub fn new(radius: f64, epsilon: ResponseFunction, mu: ResponseFunction) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid(format!(
                "sphere radius must be > 0, got {radius}"
            )));
        }
        Ok(Self {
            radius,
            epsilon,
            mu,
        })
    }

    /// Non-magnetic sphere.
    pub fn dielectric(radius: f64, epsilon: ResponseFunction) -> Result<Self> {
        Self::new(radius, epsilon, ResponseFunction::vacuum())
    }

    /// A ball of the surrounding medium itself, which carries no excess.
    pub fn of_medium(radius: f64, medium: &MediumSpec) -> Result<Self> {
        Self::new(radius, medium.epsilon.clone(), medium.mu.clone())
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn epsilon(&self) -> &ResponseFunction {
        &self.epsilon
    }

    pub fn mu(&self) -> &ResponseFunction {
        &self.mu
    }

    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::new(radius, self.epsilon.clone(), self.mu.clone())
    }

    /// Exchange permittivity and permeability.
    pub fn dual(&self) -> Self {
        Self {
            radius: self.radius,
            epsilon: self.mu.clone(),
            mu: self.epsilon.clone(),
        }
    }
}

/// The homogeneous background medium.
#[derive(Debug, Clone, PartialEq)]
pub struct MediumSpec {
    epsilon: ResponseFunction,
    mu: ResponseFunction,
}

impl MediumSpec {
    pub fn new(epsilon: ResponseFunction, mu: ResponseFunction) -> Self {
        Self { epsilon, mu }
    }

    pub fn vacuum() -> Self {
        Self::new(ResponseFunction::vacuum(), ResponseFunction::vacuum())
    }

    pub fn epsilon(&self) -> &ResponseFunction {
        &self.epsilon
    }

    pub fn mu(&self) -> &ResponseFunction {
        &self.mu
    }

    pub fn is_vacuum(&self) -> bool {
        self.epsilon.is_vacuum() && self.mu.is_vacuum()
    }

    pub fn dual(&self) -> Self {
        Self::new(self.mu.clone(), self.epsilon.clone())
    }
}

/// Contrast factor `(inner − outer)/(inner + 2·outer)`.
#[inline]
pub fn contrast(inner: f64, outer: f64) -> f64 {
    (inner - outer) / (inner + 2.0 * outer)
}

/// `α* = 4π ε0 ε R³ (ε1 − ε)/(ε1 + 2ε)` from plain values.
#[inline]
pub fn excess_alpha_from_values(radius: f64, eps_sphere: f64, eps_medium: f64) -> f64 {
    4.0 * PI * EPSILON_0 * eps_medium * radius.powi(3) * contrast(eps_sphere, eps_medium)
}

/// `β* = 4π R³/(μ0 μ) · (μ1 − μ)/(μ1 + 2μ)` from plain values.
#[inline]
pub fn excess_beta_from_values(radius: f64, mu_sphere: f64, mu_medium: f64) -> f64 {
    4.0 * PI * radius.powi(3) / (MU_0 * mu_medium) * contrast(mu_sphere, mu_medium)
}

/// Electric excess polarisability (C·m²/V) at `iξ`.
pub fn excess_alpha(sphere: &SphereSpec, medium: &MediumSpec, xi: f64) -> Result<f64> {
    Ok(excess_alpha_from_values(
        sphere.radius,
        sphere.epsilon.eval(xi)?,
        medium.epsilon.eval(xi)?,
    ))
}

/// Magnetic excess polarisability (A·m²/T) at `iξ`.
pub fn excess_beta(sphere: &SphereSpec, medium: &MediumSpec, xi: f64) -> Result<f64> {
    Ok(excess_beta_from_values(
        sphere.radius,
        sphere.mu.eval(xi)?,
        medium.mu.eval(xi)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn constant(v: f64) -> ResponseFunction {
        ResponseFunction::constant(v).unwrap()
    }

    #[test]
    fn matched_sphere_has_no_excess() {
        let medium = MediumSpec::new(
            ResponseFunction::single_oscillator(2e16, 1e16, 1e14).unwrap(),
            ResponseFunction::single_oscillator(1e15, 3e15, 0.0).unwrap(),
        );
        let ball = SphereSpec::of_medium(1e-9, &medium).unwrap();
        for xi in [0.0, 1e14, 1e16, 1e18] {
            assert_eq!(excess_alpha(&ball, &medium, xi).unwrap(), 0.0);
            assert_eq!(excess_beta(&ball, &medium, xi).unwrap(), 0.0);
        }
    }

    #[test]
    fn electric_hand_value() {
        let sphere = SphereSpec::dielectric(1e-9, constant(3.0)).unwrap();
        let medium = MediumSpec::new(constant(2.0), ResponseFunction::vacuum());
        let expected = 4.0 * PI * EPSILON_0 * 2.0 * 1e-27 / 7.0;
        assert_relative_eq!(
            excess_alpha(&sphere, &medium, 0.0).unwrap(),
            expected,
            max_relative = 1e-14
        );
        assert_relative_eq!(expected, 3.179e-38, max_relative = 1e-3);
    }

    #[test]
    fn conductor_limit() {
        let sphere = SphereSpec::dielectric(1e-9, constant(1e12)).unwrap();
        let alpha = excess_alpha(&sphere, &MediumSpec::vacuum(), 0.0).unwrap();
        let limit = 4.0 * PI * EPSILON_0 * 1e-27;
        assert!((alpha / limit - 1.0).abs() < 1e-10);
    }

    #[test]
    fn magnetic_hand_value() {
        let sphere = SphereSpec::new(1e-9, ResponseFunction::vacuum(), constant(2.0)).unwrap();
        let beta = excess_beta(&sphere, &MediumSpec::vacuum(), 0.0).unwrap();
        assert_relative_eq!(beta, 4.0 * PI * 1e-27 / MU_0 / 4.0, max_relative = 1e-14);
        assert_relative_eq!(beta, 2.5e-21, max_relative = 1e-3);
        let plain = SphereSpec::dielectric(1e-9, constant(4.0)).unwrap();
        assert_eq!(
            excess_beta(&plain, &MediumSpec::vacuum(), 1e15).unwrap(),
            0.0
        );
    }

    #[test]
    fn rejects_non_positive_radius() {
        assert!(SphereSpec::dielectric(0.0, ResponseFunction::vacuum()).is_err());
        assert!(SphereSpec::dielectric(-1.0, ResponseFunction::vacuum()).is_err());
    }

    proptest! {
        #[test]
        fn sign_follows_contrast(e1 in 1.0f64..50.0, e in 1.0f64..50.0) {
            let a = excess_alpha_from_values(1e-9, e1, e);
            prop_assert_eq!(a > 0.0, e1 > e);
            let b = excess_beta_from_values(1e-9, e1, e);
            prop_assert_eq!(b > 0.0, e1 > e);
        }

        #[test]
        fn cubic_radius_scaling(e1 in 1.0f64..50.0, e in 1.0f64..50.0, lambda in 0.1f64..10.0) {
            let r = 1e-9;
            let a = excess_alpha_from_values(r, e1, e);
            let scaled = excess_alpha_from_values(lambda * r, e1, e);
            prop_assert!((scaled - lambda.powi(3) * a).abs() <= 1e-14 * scaled.abs().max(1e-60));
        }

        #[test]
        fn duality_companion(e1 in 1.0f64..50.0, e in 1.0f64..50.0, m1 in 1.0f64..50.0, m in 1.0f64..50.0) {
            let sphere = SphereSpec::new(2e-9, constant(e1), constant(m1)).unwrap();
            let medium = MediumSpec::new(constant(e), constant(m));
            let alpha_dual = excess_alpha(&sphere.dual(), &medium.dual(), 1e15).unwrap();
            let beta = excess_beta(&sphere, &medium, 1e15).unwrap();
            let lhs = alpha_dual / (EPSILON_0 * m);
            let rhs = MU_0 * m * beta;
            prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs().max(1e-60));
        }
    }
}
