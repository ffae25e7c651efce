//! Microscopic many-body dispersion: molecular pair and triplet potentials and
//! their sums over two spheres immersed in a molecular medium.
//!
//! Sphere-level coefficients are written in reduced susceptibilities
//! `χ = ηα/ε0` (dilute Clausius–Mossotti), so that they compare directly with
//! the macroscopic coefficients expanded in powers of `χ`.

use std::f64::consts::PI;

use crate::constants::{EPSILON_0, HBAR};
use crate::error::{Error, Result};
use crate::materials::{MolecularSpecies, Polarisability, DECAY_RATIO};
use crate::oracles::quadrature::{integrate_semiinfinite, Integral, QuadratureSpec};

const VDW_PREFACTOR: f64 = -3.0 * HBAR / (16.0 * PI * PI * PI * EPSILON_0 * EPSILON_0);
const AT_PREFACTOR: f64 =
    3.0 * HBAR / (64.0 * PI * PI * PI * PI * EPSILON_0 * EPSILON_0 * EPSILON_0);

/// Reduced susceptibilities of sphere 1, sphere 2 and the medium at one `ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiTriple {
    pub chi1: f64,
    pub chi2: f64,
    pub chi: f64,
}

impl ChiTriple {
    pub fn new(chi1: f64, chi2: f64, chi: f64) -> Result<Self> {
        if [chi1, chi2, chi]
            .iter()
            .any(|c| !(*c >= 0.0 && c.is_finite()))
        {
            return Err(Error::invalid(format!(
                "reduced susceptibilities must be >= 0, got ({chi1}, {chi2}, {chi})"
            )));
        }
        Ok(Self { chi1, chi2, chi })
    }

    /// Dilute Clausius–Mossotti values of three molecular species.
    pub fn from_species(
        sphere1: &MolecularSpecies,
        sphere2: &MolecularSpecies,
        medium: &MolecularSpecies,
        xi: f64,
    ) -> Result<Self> {
        Self::new(
            sphere1.clausius_mossotti_dilute(xi)?,
            sphere2.clausius_mossotti_dilute(xi)?,
            medium.clausius_mossotti_dilute(xi)?,
        )
    }
}

/// Three molecule positions (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripletGeometry {
    points: [[f64; 3]; 3],
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl TripletGeometry {
    pub fn new(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> Result<Self> {
        let g = Self { points: [a, b, c] };
        let [d12, d23, d31] = g.side_lengths();
        if d12 == 0.0 || d23 == 0.0 || d31 == 0.0 {
            return Err(Error::SingularGeometry(
                "triplet positions must be pairwise distinct".into(),
            ));
        }
        if [d12, d23, d31].iter().any(|d| !d.is_finite()) {
            return Err(Error::invalid("triplet positions must be finite"));
        }
        Ok(g)
    }

    pub fn points(&self) -> [[f64; 3]; 3] {
        self.points
    }

    /// `[|r−r′|, |r′−r″|, |r″−r|]`.
    pub fn side_lengths(&self) -> [f64; 3] {
        let [a, b, c] = self.points;
        [
            dot(sub(a, b), sub(a, b)).sqrt(),
            dot(sub(b, c), sub(b, c)).sqrt(),
            dot(sub(c, a), sub(c, a)).sqrt(),
        ]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let s = |p: [f64; 3]| [p[0] * factor, p[1] * factor, p[2] * factor];
        Self {
            points: [s(self.points[0]), s(self.points[1]), s(self.points[2])],
        }
    }
}

/// Axilrod–Teller geometric factor `(1 + 3 cos θ cos θ′ cos θ″)/(d₁₂³ d₂₃³ d₃₁³)`
/// with the interior angles of the triangle, in 1/m⁹.
pub fn at_kernel(g: &TripletGeometry) -> f64 {
    let [a, b, c] = g.points;
    at_kernel_raw(a, b, c)
}

#[inline]
pub(crate) fn at_kernel_raw(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let ab = sub(b, a);
    let bc = sub(c, b);
    let ca = sub(a, c);
    let lab2 = dot(ab, ab);
    let lbc2 = dot(bc, bc);
    let lca2 = dot(ca, ca);
    // Interior angle at a is between (b − a) and (c − a) = −ca, and so on.
    let cos_a = -dot(ab, ca);
    let cos_b = -dot(bc, ab);
    let cos_c = -dot(ca, bc);
    let l2 = lab2 * lbc2 * lca2;
    let cos_product = cos_a * cos_b * cos_c / l2;
    (1.0 + 3.0 * cos_product) / (l2 * l2.sqrt())
}

fn check_distance(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("distance must be > 0, got {d}")))
    }
}

/// Rejects spectral densities that do not fall off by [`DECAY_RATIO`] between
/// `ξ = 0` and a probe far above the quadrature scale.
fn require_decay<F>(f: &F, probe: f64, what: &str) -> Result<()>
where
    F: Fn(f64) -> Result<f64>,
{
    let at_zero = f(0.0)?.abs();
    let at_probe = f(probe)?.abs();
    if at_zero == 0.0 && at_probe == 0.0 {
        return Ok(());
    }
    if at_probe < DECAY_RATIO * at_zero {
        Ok(())
    } else {
        Err(Error::Divergent(format!(
            "{what} does not decay on the imaginary axis"
        )))
    }
}

fn polarisability_probe(alphas: &[&Polarisability], quad: &QuadratureSpec) -> f64 {
    let top = alphas
        .iter()
        .filter_map(|a| a.max_frequency())
        .fold(quad.scale(), f64::max);
    1e3 * top
}

/// Frequency integral of the pair coefficient: `U·d⁶` in J·m⁶.
pub fn vdw_coefficient(
    a: &Polarisability,
    b: &Polarisability,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let f = |xi: f64| Ok(a.eval(xi)? * b.eval(xi)?);
    require_decay(
        &f,
        polarisability_probe(&[a, b], quad),
        "polarisability product",
    )?;
    Ok(VDW_PREFACTOR * integrate_semiinfinite(f, quad)?.value)
}

/// Non-retarded van der Waals energy of two molecules (J).
pub fn vdw_pair(
    a: &Polarisability,
    b: &Polarisability,
    distance: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_distance(distance)?;
    Ok(vdw_coefficient(a, b, quad)? / distance.powi(6))
}

/// Axilrod–Teller triple-dipole energy (J).
pub fn axilrod_teller(
    a: &Polarisability,
    b: &Polarisability,
    c: &Polarisability,
    g: &TripletGeometry,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let f = |xi: f64| Ok(a.eval(xi)? * b.eval(xi)? * c.eval(xi)?);
    require_decay(
        &f,
        polarisability_probe(&[a, b, c], quad),
        "polarisability triple product",
    )?;
    let integral = integrate_semiinfinite(f, quad)?.value;
    Ok(AT_PREFACTOR * integral * at_kernel(g))
}

/// Hamaker spectral density `−(ℏR₁³R₂³/3π)(χ₁ − χ)(χ₂ − χ)`.
pub fn hamaker_integrand(t: ChiTriple, radius1: f64, radius2: f64) -> f64 {
    let pre = -HBAR * radius1.powi(3) * radius2.powi(3) / (3.0 * PI);
    pre * (t.chi1 - t.chi) * (t.chi2 - t.chi)
}

/// Medium-mediated triplet spectral density `+(2ℏR₁³R₂³/9π) χ₁χ₂χ`.
pub fn threeparticle_integrand(t: ChiTriple, radius1: f64, radius2: f64) -> f64 {
    let pre = 2.0 * HBAR * radius1.powi(3) * radius2.powi(3) / (9.0 * PI);
    pre * t.chi1 * t.chi2 * t.chi
}

fn check_radii(radius1: f64, radius2: f64) -> Result<()> {
    for r in [radius1, radius2] {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid(format!(
                "sphere radius must be > 0, got {r}"
            )));
        }
    }
    Ok(())
}

fn integrate_chi<F, G>(chis: F, density: G, quad: &QuadratureSpec, what: &str) -> Result<Integral>
where
    F: Fn(f64) -> Result<ChiTriple>,
    G: Fn(ChiTriple) -> f64,
{
    let f = |xi: f64| Ok(density(chis(xi)?));
    require_decay(&f, 1e3 * quad.scale(), what)?;
    integrate_semiinfinite(f, quad)
}

/// Pairwise-summed (Hamaker) two-sphere coefficient in J·m⁶.
pub fn c6_hamaker<F>(chis: F, radius1: f64, radius2: f64, quad: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> Result<ChiTriple>,
{
    check_radii(radius1, radius2)?;
    integrate_chi(
        chis,
        |t| hamaker_integrand(t, radius1, radius2),
        quad,
        "Hamaker spectral density",
    )
}

/// Triplet coefficient with one molecule in each sphere and one in the medium,
/// in J·m⁶.
pub fn c6_threeparticle<F>(
    chis: F,
    radius1: f64,
    radius2: f64,
    quad: &QuadratureSpec,
) -> Result<Integral>
where
    F: Fn(f64) -> Result<ChiTriple>,
{
    check_radii(radius1, radius2)?;
    integrate_chi(
        chis,
        |t| threeparticle_integrand(t, radius1, radius2),
        quad,
        "triplet spectral density",
    )
}
