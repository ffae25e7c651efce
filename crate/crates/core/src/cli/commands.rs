use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::dispersion::{
    c3, c3_integrand_parts, c6, c6_integrand_from_polarisabilities, c6_integrand_parts,
    duality_transform, force_magnitude, potential, ResponseValues, StressChoice, TwoSphereSystem,
};
use crate::materials::Polarisability;
use crate::microscopic::vdw_coefficient;
use crate::oracles::quadrature::FALLBACK_SCALE;
use crate::oracles::{
    at_medium_mc, hamaker_continuum_sum, hamaker_lattice_sum, hamaker_point_limit,
    integrate_semiinfinite, verify_consistency, MonteCarloSpec, QuadratureSpec, AT_MEDIUM_TARGET,
};
use crate::polarisability::{MediumSpec, SphereSpec};

use super::config::SystemConfig;
use super::{num, CliError, Report, SweepVariable, Table};

/// Relative change of the Abraham C6 under duality that still counts as invariant.
pub const DUALITY_TOLERANCE: f64 = 1e-10;
/// Relative agreement required between the point-limit C6 and the van der Waals pair.
pub const CORRESPONDENCE_TOLERANCE: f64 = 1e-12;
/// Band for the lattice sum normalised by its point limit.
pub const HAMAKER_BAND: (f64, f64) = (0.98, 1.02);
pub const AT_RELATIVE_TOLERANCE: f64 = 1e-2;
pub const AT_SIGMA_BOUND: f64 = 3.0;
pub const QUADRATURE_CHECK_TOLERANCE: f64 = 1e-9;

fn regime_warning(sys: &TwoSphereSystem) -> Vec<String> {
    if sys.violates_small_sphere_regime() {
        vec![format!(
            "separation {:e} m is below 5·max(R1, R2); small-sphere results are unreliable",
            sys.separation()
        )]
    } else {
        Vec::new()
    }
}

fn relative_change(new: f64, old: f64) -> f64 {
    if new == old {
        0.0
    } else {
        ((new - old) / old).abs()
    }
}

fn choice_list(choices: &[StressChoice]) -> String {
    choices
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn cmd_c6(
    cfg: &SystemConfig,
    choices: &[StressChoice],
    separation: Option<f64>,
    xi: Option<f64>,
    tolerance: Option<f64>,
) -> Result<Report, CliError> {
    let sys = cfg.system(separation)?;
    let warnings = regime_warning(&sys);
    let r = sys.separation();

    if let Some(xi) = xi {
        let mut table = Table::new([
            "choice",
            "xi[rad/s]",
            "dC6_electric[J*m^6*s]",
            "dC6_magnetic[J*m^6*s]",
            "dC6_total[J*m^6*s]",
        ]);
        let mut totals = Vec::new();
        for &choice in choices {
            let p = c6_integrand_parts(sys.sphere1(), sys.sphere2(), sys.medium(), choice, xi)?;
            totals.push(p.total());
            table.push(vec![
                choice.to_string(),
                num(xi),
                num(p.electric),
                num(p.magnetic),
                num(p.total()),
            ]);
        }
        let mut text = format!(
            "C6 spectral density at xi = {xi:e} rad/s\n\n{}",
            table.render()
        );
        if let [a, m] = totals[..] {
            let _ = writeln!(text, "\nMaxwell/Abraham = {:e}", m / a);
        }
        return Ok(Report {
            text,
            warnings,
            table: Some(table),
            passed: true,
            csv_to_stdout: false,
        });
    }

    let quad = cfg.quadrature_for(sys.dominant_frequency(), tolerance)?;
    let mut table = Table::new([
        "choice",
        "r12[m]",
        "C6_electric[J*m^6]",
        "C6_magnetic[J*m^6]",
        "C6[J*m^6]",
        "C6_error[J*m^6]",
        "U[J]",
        "F[N]",
    ]);
    for &choice in choices {
        let b = c6(&sys, choice, &quad)?;
        table.push(vec![
            choice.to_string(),
            num(r),
            num(b.electric_term),
            num(b.magnetic_term),
            num(b.total),
            num(b.quadrature_error_estimate),
            num(potential(b.total, r)?),
            num(force_magnitude(b.total, r)?),
        ]);
    }
    let text = format!(
        "C6 for {} (negative U and F attract)\n\n{}",
        choice_list(choices),
        table.render()
    );
    Ok(Report {
        text,
        warnings,
        table: Some(table),
        passed: true,
        csv_to_stdout: false,
    })
}

pub fn cmd_c3(
    cfg: &SystemConfig,
    choices: &[StressChoice],
    sphere: u8,
    xi: Option<f64>,
    tolerance: Option<f64>,
) -> Result<Report, CliError> {
    let s = if sphere == 2 {
        &cfg.sphere2
    } else {
        &cfg.sphere1
    };
    let medium = &cfg.medium;

    if let Some(xi) = xi {
        let mut table = Table::new([
            "choice",
            "xi[rad/s]",
            "dC3_electric[J*m^3*s]",
            "dC3_magnetic[J*m^3*s]",
            "dC3_total[J*m^3*s]",
        ]);
        let mut totals = Vec::new();
        for &choice in choices {
            let p = c3_integrand_parts(s, medium, choice, xi)?;
            totals.push(p.total());
            table.push(vec![
                choice.to_string(),
                num(xi),
                num(p.electric),
                num(p.magnetic),
                num(p.total()),
            ]);
        }
        let mut text = format!(
            "C3 spectral density at xi = {xi:e} rad/s\n\n{}",
            table.render()
        );
        if let [a, m] = totals[..] {
            let _ = writeln!(text, "\nMaxwell/Abraham = {:e}", m / a);
        }
        return Ok(Report {
            text,
            table: Some(table),
            passed: true,
            ..Report::default()
        });
    }

    let dominant = [s.epsilon(), s.mu(), medium.epsilon(), medium.mu()]
        .iter()
        .filter_map(|r| r.dominant_frequency())
        .reduce(f64::max);
    let quad = cfg.quadrature_for(dominant, tolerance)?;
    let mut table = Table::new([
        "choice",
        "C3_electric[J*m^3]",
        "C3_magnetic[J*m^3]",
        "C3[J*m^3]",
        "C3_error[J*m^3]",
    ]);
    for &choice in choices {
        let b = c3(s, medium, choice, &quad)?;
        table.push(vec![
            choice.to_string(),
            num(b.electric_term),
            num(b.magnetic_term),
            num(b.total),
            num(b.quadrature_error_estimate),
        ]);
    }
    let text = format!(
        "C3 of sphere {sphere} facing a perfect mirror, for {}\n\n{}",
        choice_list(choices),
        table.render()
    );
    Ok(Report {
        text,
        table: Some(table),
        passed: true,
        ..Report::default()
    })
}

pub fn verify_duality(cfg: &SystemConfig, tolerance: Option<f64>) -> Result<Report, CliError> {
    let sys = cfg.system(None)?;
    let dual = duality_transform(&sys);
    let quad = cfg.quadrature_for(sys.dominant_frequency(), tolerance)?;
    let mut table = Table::new([
        "choice",
        "C6[J*m^6]",
        "C6_dual[J*m^6]",
        "relative_change[1]",
        "invariant",
    ]);
    let mut passed = true;
    for choice in StressChoice::ALL {
        let a = c6(&sys, choice, &quad)?.total;
        let b = c6(&dual, choice, &quad)?.total;
        let delta = relative_change(b, a);
        let invariant = delta < DUALITY_TOLERANCE;
        if choice == StressChoice::Abraham {
            passed = invariant;
        }
        table.push(vec![
            choice.to_string(),
            num(a),
            num(b),
            num(delta),
            invariant.to_string(),
        ]);
    }
    let text = format!(
        "duality (epsilon <-> mu everywhere), invariance threshold {DUALITY_TOLERANCE:e}\n\n{}\n{}\n",
        table.render(),
        verdict(passed, "Abraham C6 is duality invariant")
    );
    Ok(Report {
        text,
        warnings: regime_warning(&sys),
        table: Some(table),
        passed,
        csv_to_stdout: false,
    })
}

fn verdict(passed: bool, what: &str) -> String {
    format!("{}: {what}", if passed { "PASS" } else { "FAIL" })
}

pub fn verify_correspondence(
    cfg: &SystemConfig,
    tolerance: Option<f64>,
) -> Result<Report, CliError> {
    let missing =
        || CliError::Config("correspondence needs [species.sphere1] and [species.sphere2]".into());
    let a = cfg
        .species
        .sphere1
        .as_ref()
        .ok_or_else(missing)?
        .polarisability();
    let b = cfg
        .species
        .sphere2
        .as_ref()
        .ok_or_else(missing)?
        .polarisability();
    let dominant = [a, b]
        .iter()
        .filter_map(|p| p.max_frequency())
        .reduce(f64::max);
    let quad = cfg.quadrature_for(dominant, tolerance)?;
    let reference = vdw_coefficient(a, b, &quad)?;

    let mut table = Table::new([
        "choice",
        "C6_point_limit[J*m^6]",
        "C6_vdW[J*m^6]",
        "relative_difference[1]",
    ]);
    let mut passed = true;
    for choice in StressChoice::ALL {
        let value = point_limit_c6(a, b, choice, &quad)?;
        let delta = relative_change(value, reference);
        if choice == StressChoice::Abraham {
            passed = delta < CORRESPONDENCE_TOLERANCE;
        }
        table.push(vec![
            choice.to_string(),
            num(value),
            num(reference),
            num(delta),
        ]);
    }
    let text = format!(
        "correspondence: vacuum C6 with molecular polarisabilities vs the van der Waals pair, \
         threshold {CORRESPONDENCE_TOLERANCE:e}\n\n{}\n{}\n",
        table.render(),
        verdict(
            passed,
            "Abraham point limit reproduces the van der Waals coefficient"
        )
    );
    Ok(Report {
        text,
        table: Some(table),
        passed,
        ..Report::default()
    })
}

/// The two-sphere C6 formula in vacuum with molecular polarisabilities in
/// place of the excess ones.
pub fn point_limit_c6(
    a: &Polarisability,
    b: &Polarisability,
    choice: StressChoice,
    quad: &QuadratureSpec,
) -> Result<f64, CliError> {
    let f = |xi: f64| {
        Ok(c6_integrand_from_polarisabilities(
            a.eval(xi)?,
            b.eval(xi)?,
            0.0,
            0.0,
            ResponseValues::VACUUM,
            choice,
        )
        .total())
    };
    Ok(integrate_semiinfinite(f, quad)?.value)
}

pub fn verify_microscopic(cfg: &SystemConfig, step: f64) -> Result<Report, CliError> {
    let (r1, r2) = (cfg.sphere1.radius(), cfg.sphere2.radius());
    let mut table = Table::new([
        "choice",
        "chi1_chi2[J*m^6*s]",
        "chi1_chi[J*m^6*s]",
        "chi2_chi[J*m^6*s]",
        "chi_chi[J*m^6*s]",
        "hamaker_deviation[1]",
        "third_order_ratio[1]",
        "ratio_error[1]",
        "consistent",
    ]);
    let mut passed = true;
    for choice in StressChoice::ALL {
        let rep = verify_consistency(r1, r2, choice, step)?;
        let e = rep.expansion;
        if choice == StressChoice::Abraham {
            passed = rep.passes();
        }
        table.push(vec![
            choice.to_string(),
            num(e.chi1_chi2),
            num(e.chi1_chi),
            num(e.chi2_chi),
            num(e.chi_chi),
            num(e.hamaker_deviation()),
            format!("{:.6}", e.third_order_ratio),
            num(e.ratio_error_estimate),
            rep.passes().to_string(),
        ]);
    }
    let e = verify_consistency(r1, r2, StressChoice::Abraham, step)?.expansion;
    let text = format!(
        "microscopic: susceptibility expansion of the C6 spectral density\n\
         Hamaker scale hbar*R1^3*R2^3/(3 pi) = {:e} J*m^6*s, \
         three-particle reference = {:e} J*m^6*s\n\n{}\n{}\n",
        e.hamaker_scale,
        e.threeparticle_reference,
        table.render(),
        verdict(
            passed,
            "Abraham expansion matches the pair and three-particle sums"
        )
    );
    Ok(Report {
        text,
        table: Some(table),
        passed,
        ..Report::default()
    })
}

pub fn oracle_hamaker(
    cfg: Option<&SystemConfig>,
    separation: Option<f64>,
    divisions: u32,
) -> Result<Report, CliError> {
    let (r1, r2) = cfg.map_or((1.0, 1.0), |c| (c.sphere1.radius(), c.sphere2.radius()));
    let r = separation
        .or(cfg.and_then(|c| c.separation))
        .unwrap_or(10.0 * r1.max(r2));
    if divisions == 0 {
        return Err(CliError::Config("--divisions must be positive".into()));
    }
    let pitch = r1.min(r2) / f64::from(divisions);
    let g = hamaker_lattice_sum(r1, r2, r, pitch)?;
    let point = hamaker_point_limit(r1, r2, r);
    let continuum = hamaker_continuum_sum(r1, r2, r);
    let ratio = g / point;
    let passed = (HAMAKER_BAND.0..=HAMAKER_BAND.1).contains(&ratio);

    let mut table = Table::new([
        "quantity",
        "lattice[1]",
        "target[1]",
        "relative_deviation[1]",
    ]);
    table.push(vec![
        "G/point_limit".into(),
        num(ratio),
        num(1.0),
        num(ratio - 1.0),
    ]);
    table.push(vec![
        "G/continuum".into(),
        num(g),
        num(continuum),
        num((g - continuum) / continuum),
    ]);
    let text =
        format!(
        "Hamaker lattice sum: R1 = {r1:e} m, R2 = {r2:e} m, r12 = {r:e} m, pitch = {pitch:e} m\n\
         G = {g:e}, V1*V2/r12^6 = {point:e}, two-sphere continuum = {continuum:e}\n\n{}\n{}\n",
        table.render(),
        verdict(
            passed,
            &format!("G*r12^6/(V1*V2) within [{}, {}]", HAMAKER_BAND.0, HAMAKER_BAND.1)
        )
    );
    Ok(Report {
        text,
        table: Some(table),
        passed,
        ..Report::default()
    })
}

pub fn oracle_axilrod_teller(
    cfg: Option<&SystemConfig>,
    separation: Option<f64>,
    samples: Option<u64>,
    seed: Option<u64>,
) -> Result<Report, CliError> {
    let (r1, r2, default_sep) = match cfg {
        Some(c) => (c.sphere1.radius(), c.sphere2.radius(), c.separation),
        None => (0.05, 0.05, Some(1.0)),
    };
    let r = separation
        .or(default_sep)
        .ok_or_else(|| CliError::Config("no separation given".into()))?;
    let mut mc = cfg.map_or_else(MonteCarloSpec::default, |c| c.mc);
    if let Some(n) = samples {
        mc = mc.with_samples(n)?;
    }
    if let Some(s) = seed {
        mc = mc.with_seed(s);
    }
    let est = at_medium_mc(r, r1, r2, &mc)?;
    let scale = r.powi(6);
    let value = est.value * scale;
    let sigma = est.std_error * scale;
    let rel = (value - AT_MEDIUM_TARGET) / AT_MEDIUM_TARGET;
    let z = (value - AT_MEDIUM_TARGET) / sigma;
    let passed = rel.abs() <= AT_RELATIVE_TOLERANCE && z.abs() <= AT_SIGMA_BOUND;

    let mut table = Table::new([
        "I*r12^6[1]",
        "std_error[1]",
        "target[1]",
        "relative_deviation[1]",
        "z[1]",
    ]);
    table.push(vec![
        num(value),
        num(sigma),
        num(AT_MEDIUM_TARGET),
        num(rel),
        num(z),
    ]);
    let text = format!(
        "Axilrod-Teller kernel over the medium: R1 = {r1:e} m, R2 = {r2:e} m, r12 = {r:e} m, \
         N = {}, seed = {}, chunks = {}\n\n{}\n{}\n",
        mc.samples(),
        mc.seed(),
        mc.chunks(),
        table.render(),
        verdict(passed, "within 1% and 3 standard errors of 8*pi/3")
    );
    Ok(Report {
        text,
        table: Some(table),
        passed,
        ..Report::default()
    })
}

pub fn oracle_quadrature(
    cfg: Option<&SystemConfig>,
    tolerance: Option<f64>,
) -> Result<Report, CliError> {
    let a = cfg.and_then(|c| c.quad_scale()).unwrap_or(FALLBACK_SCALE);
    let quad = match cfg {
        Some(c) => c.quadrature_for(Some(a), tolerance)?,
        None => {
            let q = QuadratureSpec::default().with_scale(a)?;
            match tolerance {
                Some(t) => q.with_tolerance(t)?,
                None => q,
            }
        }
    };
    let arctan = integrate_semiinfinite(|xi| Ok(a * a / (a * a + xi * xi)), &quad)?;
    let arctan_exact = PI * a / 2.0;
    // Single oscillator with plasma and resonance frequencies both equal to `a`.
    let b2 = 4.0 * a * a / 3.0;
    let lorentz = integrate_semiinfinite(
        |xi| {
            let v = a * a / (4.0 * a * a + 3.0 * xi * xi);
            Ok(v * v)
        },
        &quad,
    )?;
    let lorentz_exact = PI * a.powi(4) / (36.0 * b2 * b2.sqrt());

    let mut table = Table::new([
        "integrand",
        "value[1/s]",
        "exact[1/s]",
        "relative_error[1]",
        "error_estimate[1/s]",
    ]);
    let mut passed = true;
    for (name, got, exact) in [
        ("a^2/(a^2+xi^2)", arctan, arctan_exact),
        ("single_oscillator_squared", lorentz, lorentz_exact),
    ] {
        let rel = (got.value - exact) / exact;
        passed &= rel.abs() <= QUADRATURE_CHECK_TOLERANCE;
        table.push(vec![
            name.into(),
            num(got.value),
            num(exact),
            num(rel),
            num(got.error),
        ]);
    }
    let text = format!(
        "quadrature calibration, scale a = {a:e} rad/s, tolerance {:e}\n\n{}\n{}\n",
        quad.tolerance(),
        table.render(),
        verdict(passed, "relative errors within 1e-9")
    );
    Ok(Report {
        text,
        table: Some(table),
        passed,
        ..Report::default()
    })
}

fn grid(from: f64, to: f64, steps: usize, log: bool) -> Result<Vec<f64>, CliError> {
    if !(from > 0.0 && to > 0.0 && from.is_finite() && to.is_finite()) {
        return Err(CliError::Config("sweep range must be positive".into()));
    }
    if steps < 2 {
        return Err(CliError::Config("sweep needs at least 2 steps".into()));
    }
    let n = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            let t = i as f64 / n;
            if i == 0 {
                from
            } else if i == steps - 1 {
                to
            } else if log {
                (from.ln() + t * (to.ln() - from.ln())).exp()
            } else {
                from + t * (to - from)
            }
        })
        .collect())
}

fn sweep_system(
    cfg: &SystemConfig,
    variable: SweepVariable,
    value: f64,
) -> Result<TwoSphereSystem, CliError> {
    match variable {
        SweepVariable::Separation => cfg.system(Some(value)),
        SweepVariable::Density => {
            let m = &cfg.medium;
            let medium = MediumSpec::new(
                m.epsilon().with_scaled_susceptibility(value)?,
                m.mu().with_scaled_susceptibility(value)?,
            );
            let r = cfg.system(None)?.separation();
            Ok(TwoSphereSystem::new(
                cfg.sphere1.clone(),
                cfg.sphere2.clone(),
                medium,
                r,
            )?)
        }
        SweepVariable::Radius => {
            let r = cfg.system(None)?.separation();
            let s1: SphereSpec = cfg.sphere1.with_radius(value)?;
            let s2: SphereSpec = cfg.sphere2.with_radius(value)?;
            Ok(TwoSphereSystem::new(s1, s2, cfg.medium.clone(), r)?)
        }
    }
}

pub fn sweep(
    cfg: &SystemConfig,
    variable: SweepVariable,
    from: f64,
    to: f64,
    steps: usize,
    log: bool,
    tolerance: Option<f64>,
) -> Result<Report, CliError> {
    let points = grid(from, to, steps, log)?;
    let first = match variable {
        SweepVariable::Separation => "r12[m]",
        SweepVariable::Density => "density_scale[1]",
        SweepVariable::Radius => "radius[m]",
    };
    let mut table = Table::new([
        first,
        "C6_Abraham[J*m^6]",
        "C6_Maxwell[J*m^6]",
        "U_Abraham[J]",
        "U_Maxwell[J]",
        "F_Abraham[N]",
        "F_Maxwell[N]",
    ]);
    let mut warnings = Vec::new();
    // C6 does not depend on the separation, so a separation sweep integrates once.
    let mut cached: Option<(f64, f64)> = None;
    for &v in &points {
        let sys = sweep_system(cfg, variable, v)?;
        if sys.violates_small_sphere_regime() && warnings.is_empty() {
            warnings = regime_warning(&sys);
        }
        let (ca, cm) = match cached {
            Some(c) => c,
            None => {
                let quad = cfg.quadrature_for(sys.dominant_frequency(), tolerance)?;
                let ca = c6(&sys, StressChoice::Abraham, &quad)?.total;
                let cm = c6(&sys, StressChoice::Maxwell, &quad)?.total;
                if variable == SweepVariable::Separation {
                    cached = Some((ca, cm));
                }
                (ca, cm)
            }
        };
        let r = sys.separation();
        table.push(vec![
            num(v),
            num(ca),
            num(cm),
            num(potential(ca, r)?),
            num(potential(cm, r)?),
            num(force_magnitude(ca, r)?),
            num(force_magnitude(cm, r)?),
        ]);
    }
    Ok(Report {
        text: table.render(),
        warnings,
        table: Some(table),
        passed: true,
        csv_to_stdout: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        for log in [false, true] {
            let g = grid(1e-8, 1e-7, 5, log).unwrap();
            assert_eq!(g.len(), 5);
            assert_eq!(g[0], 1e-8);
            let mid = if log { 1e-15f64.sqrt() } else { 5.5e-8 };
            assert!((g[2] / mid - 1.0).abs() < 1e-14);
            assert_eq!(g[4], 1e-7);
            assert!(g.windows(2).all(|w| w[1] > w[0]));
        }
        assert!(grid(1.0, 2.0, 1, false).is_err());
        assert!(grid(-1.0, 2.0, 3, false).is_err());
    }

    #[test]
    fn relative_change_of_equal_zeros_is_zero() {
        assert_eq!(relative_change(0.0, 0.0), 0.0);
        assert_eq!(relative_change(2.0, 1.0), 1.0);
    }
}
