//! Taylor coefficients of the two-sphere spectral density in the reduced
//! susceptibilities `(χ₁, χ₂, χ)` of two dielectric spheres and their medium.
//!
//! The density is evaluated at fixed frequency as a plain function of the
//! susceptibilities, so no quadrature error enters. Mixed partial derivatives
//! at the origin come from centred differences with one Richardson step.

use std::f64::consts::PI;

use crate::constants::HBAR;
use crate::dispersion::{c6_integrand_from_values, ResponseValues, StressChoice};
use crate::error::{Error, Result};

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Relative agreement required of the pair (degree-2) coefficients.
pub const HAMAKER_MATCH_TOLERANCE: f64 = 1e-8;
/// Absolute agreement required of the triplet ratio.
pub const RATIO_TOLERANCE: f64 = 1e-6;

/// Monomial coefficients of the spectral density (J·m⁶·s/rad).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionReport {
    pub choice: StressChoice,
    pub step: f64,
    pub chi1_chi2: f64,
    pub chi1_chi: f64,
    pub chi2_chi: f64,
    pub chi_chi: f64,
    pub chi1_chi2_chi: f64,
    /// `ℏR₁³R₂³/3π`, the magnitude of every Hamaker coefficient.
    pub hamaker_scale: f64,
    /// `2ℏR₁³R₂³/9π`, the microscopic triplet coefficient.
    pub threeparticle_reference: f64,
    /// `chi1_chi2_chi / threeparticle_reference`.
    pub third_order_ratio: f64,
    /// Size of the Richardson correction applied to the triplet ratio.
    pub ratio_error_estimate: f64,
}

impl ExpansionReport {
    /// Expected Hamaker coefficients, in the order χ₁χ₂, χ₁χ, χ₂χ, χ².
    pub fn hamaker_reference(&self) -> [f64; 4] {
        let s = self.hamaker_scale;
        [-s, s, s, -s]
    }

    pub fn degree_two(&self) -> [f64; 4] {
        [self.chi1_chi2, self.chi1_chi, self.chi2_chi, self.chi_chi]
    }

    /// Largest relative deviation of the degree-2 coefficients from Hamaker.
    pub fn hamaker_deviation(&self) -> f64 {
        self.degree_two()
            .iter()
            .zip(self.hamaker_reference())
            .map(|(got, want)| ((got - want) / want).abs())
            .fold(0.0, f64::max)
    }
}

struct Density {
    radius1: f64,
    radius2: f64,
    choice: StressChoice,
}

impl Density {
    fn at(&self, x1: f64, x2: f64, x: f64) -> f64 {
        let v = |chi: f64| ResponseValues::new(1.0 + chi, 1.0);
        c6_integrand_from_values(self.radius1, v(x1), self.radius2, v(x2), v(x), self.choice)
            .total()
    }

    /// `∂²f/∂a∂b` for distinct axes.
    fn mixed2(&self, axes: (usize, usize), h: f64) -> f64 {
        let mut sum = 0.0;
        for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let mut p = [0.0; 3];
            p[axes.0] = sa * h;
            p[axes.1] = sb * h;
            sum += sa * sb * self.at(p[0], p[1], p[2]);
        }
        sum / (4.0 * h * h)
    }

    /// `½ ∂²f/∂a²`.
    fn half_pure2(&self, axis: usize, h: f64) -> f64 {
        let mut plus = [0.0; 3];
        let mut minus = [0.0; 3];
        plus[axis] = h;
        minus[axis] = -h;
        let f0 = self.at(0.0, 0.0, 0.0);
        0.5 * (self.at(plus[0], plus[1], plus[2]) - 2.0 * f0
            + self.at(minus[0], minus[1], minus[2]))
            / (h * h)
    }

    /// `∂³f/∂χ₁∂χ₂∂χ`.
    fn mixed3(&self, h: f64) -> f64 {
        let mut sum = 0.0;
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                for s3 in [1.0, -1.0] {
                    sum += s1 * s2 * s3 * self.at(s1 * h, s2 * h, s3 * h);
                }
            }
        }
        sum / (8.0 * h * h * h)
    }
}

/// One Richardson step for an `O(h²)` centred estimate.
fn richardson<F: Fn(f64) -> f64>(estimate: F, h: f64) -> (f64, f64) {
    let coarse = estimate(h);
    let fine = estimate(0.5 * h);
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    (extrapolated, (extrapolated - fine).abs())
}

/// Extract the five monomial coefficients of the fixed-frequency density.
pub fn expand_c6_integrand(
    radius1: f64,
    radius2: f64,
    choice: StressChoice,
    step: f64,
) -> Result<ExpansionReport> {
    if !(step > 0.0 && step <= 1e-2) {
        return Err(Error::invalid(format!(
            "finite-difference step must lie in (0, 1e-2], got {step}"
        )));
    }
    for r in [radius1, radius2] {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid(format!(
                "sphere radius must be > 0, got {r}"
            )));
        }
    }
    let f = Density {
        radius1,
        radius2,
        choice,
    };
    let (chi1_chi2, _) = richardson(|h| f.mixed2((0, 1), h), step);
    let (chi1_chi, _) = richardson(|h| f.mixed2((0, 2), h), step);
    let (chi2_chi, _) = richardson(|h| f.mixed2((1, 2), h), step);
    let (chi_chi, _) = richardson(|h| f.half_pure2(2, h), step);
    let (chi1_chi2_chi, cubic_err) = richardson(|h| f.mixed3(h), step);

    let r6 = radius1.powi(3) * radius2.powi(3);
    let hamaker_scale = HBAR * r6 / (3.0 * PI);
    let threeparticle_reference = 2.0 * HBAR * r6 / (9.0 * PI);
    Ok(ExpansionReport {
        choice,
        step,
        chi1_chi2,
        chi1_chi,
        chi2_chi,
        chi_chi,
        chi1_chi2_chi,
        hamaker_scale,
        threeparticle_reference,
        third_order_ratio: chi1_chi2_chi / threeparticle_reference,
        ratio_error_estimate: cubic_err / threeparticle_reference,
    })
}

/// Outcome of the microscopic consistency check for one stress choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyReport {
    pub expansion: ExpansionReport,
    /// Degree-2 coefficients equal the pairwise (Hamaker) sum.
    pub hamaker_match: bool,
    pub third_order_ratio: f64,
    /// Triplet coefficient equals the microscopic three-particle term.
    pub threeparticle_match: bool,
}

impl ConsistencyReport {
    pub fn passes(&self) -> bool {
        self.hamaker_match && self.threeparticle_match
    }
}

/// Compare the expanded macroscopic density with the microscopic pair and
/// triplet sums.
pub fn verify_consistency(
    radius1: f64,
    radius2: f64,
    choice: StressChoice,
    step: f64,
) -> Result<ConsistencyReport> {
    let expansion = expand_c6_integrand(radius1, radius2, choice, step)?;
    Ok(ConsistencyReport {
        hamaker_match: expansion.hamaker_deviation() <= HAMAKER_MATCH_TOLERANCE,
        third_order_ratio: expansion.third_order_ratio,
        threeparticle_match: (expansion.third_order_ratio - 1.0).abs() <= RATIO_TOLERANCE,
        expansion,
    })
}
