//! Brute-force pairwise summation of `r⁻⁶` between two lattice-filled spheres.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Offsets (relative to the centre) of cubic cells of side `pitch` whose
/// centres fall strictly inside a sphere of radius `radius`.
pub fn sphere_lattice(radius: f64, pitch: f64) -> Vec<[f64; 3]> {
    let n = (radius / pitch).ceil() as i64;
    let r2 = radius * radius;
    let mut cells = Vec::new();
    for i in -n..=n {
        for j in -n..=n {
            for k in -n..=n {
                let p = [i as f64 * pitch, j as f64 * pitch, k as f64 * pitch];
                if p[0] * p[0] + p[1] * p[1] + p[2] * p[2] < r2 {
                    cells.push(p);
                }
            }
        }
    }
    cells
}

/// `G = Σ_{i∈S₁} Σ_{j∈S₂} δ⁶/|r_i − r_j|⁶`, dimensionless.
///
/// Tends to `V₁V₂/r₁₂⁶` as the spheres shrink against their separation.
pub fn hamaker_lattice_sum(radius1: f64, radius2: f64, separation: f64, pitch: f64) -> Result<f64> {
    for r in [radius1, radius2] {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid(format!(
                "sphere radius must be > 0, got {r}"
            )));
        }
    }
    if !(pitch > 0.0 && pitch <= radius1.min(radius2) / 10.0) {
        return Err(Error::invalid(format!(
            "lattice pitch {pitch:e} m must be positive and at most min(R1, R2)/10"
        )));
    }
    if !(separation > radius1 + radius2 && separation.is_finite()) {
        return Err(Error::invalid(format!(
            "separation {separation:e} m must exceed R1 + R2"
        )));
    }
    // Work in units of the pitch so every term is O(1).
    let a = sphere_lattice(radius1 / pitch, 1.0);
    let b = sphere_lattice(radius2 / pitch, 1.0);
    let d = separation / pitch;
    let rows: Vec<f64> = a
        .par_iter()
        .map(|p| {
            let base = [d - p[0], -p[1], -p[2]];
            let mut row = 0.0;
            for q in &b {
                let x = base[0] + q[0];
                let y = base[1] + q[1];
                let z = base[2] + q[2];
                let s = x * x + y * y + z * z;
                row += 1.0 / (s * s * s);
            }
            row
        })
        .collect();
    Ok(rows.iter().sum())
}

/// Point-limit target `V₁V₂/r₁₂⁶`.
pub fn hamaker_point_limit(radius1: f64, radius2: f64, separation: f64) -> f64 {
    let v1 = 4.0 * PI * radius1.powi(3) / 3.0;
    let v2 = 4.0 * PI * radius2.powi(3) / 3.0;
    v1 * v2 / separation.powi(6)
}

/// Continuum value of `∫∫ d³x d³y |x − y|⁻⁶` over two balls at centre distance
/// `separation`, from Hamaker's closed form for two spheres.
pub fn hamaker_continuum_sum(radius1: f64, radius2: f64, separation: f64) -> f64 {
    let r2 = separation * separation;
    let plus = (radius1 + radius2).powi(2);
    let minus = (radius1 - radius2).powi(2);
    let rr = 2.0 * radius1 * radius2;
    let f = rr / (r2 - plus) + rr / (r2 - minus) + ((r2 - plus) / (r2 - minus)).ln();
    PI * PI / 6.0 * f
}
