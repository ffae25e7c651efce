//! Semi-infinite quadrature on the imaginary frequency axis.
//!
//! `ξ ∈ [0, ∞)` is mapped onto `u ∈ [0, 1)` by `ξ = ξ_c·u/(1 − u)`, and the
//! unit interval is covered by a composite Gauss–Legendre rule whose panel
//! count doubles until two successive estimates agree.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Points per Gauss–Legendre panel.
pub const GAUSS_ORDER: usize = 16;

/// Scale used when a system has no characteristic frequency.
pub const FALLBACK_SCALE: f64 = 1e16;

/// Parameters of the semi-infinite integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    scale: f64,
    tolerance: f64,
    max_doublings: u32,
}

impl QuadratureSpec {
    pub fn new(scale: f64, tolerance: f64, max_doublings: u32) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::invalid(format!(
                "quadrature scale must be > 0, got {scale}"
            )));
        }
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(Error::invalid(format!(
                "quadrature tolerance must lie in (0, 1), got {tolerance}"
            )));
        }
        if max_doublings < 1 {
            return Err(Error::invalid("at least one node doubling is required"));
        }
        // 2^30 panels is already far beyond any useful budget.
        if max_doublings > 30 {
            return Err(Error::invalid(format!(
                "max_doublings must be at most 30, got {max_doublings}"
            )));
        }
        Ok(Self {
            scale,
            tolerance,
            max_doublings,
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn max_doublings(&self) -> u32 {
        self.max_doublings
    }

    pub fn with_scale(self, scale: f64) -> Result<Self> {
        Self::new(scale, self.tolerance, self.max_doublings)
    }

    pub fn with_tolerance(self, tolerance: f64) -> Result<Self> {
        Self::new(self.scale, tolerance, self.max_doublings)
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scale: FALLBACK_SCALE,
            tolerance: 1e-10,
            max_doublings: 14,
        }
    }
}

/// A quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Composite rule with `panels` equal panels on `[a, b]`; sums in panel order.
    pub fn composite<F>(&self, a: f64, b: f64, panels: usize, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let width = (b - a) / panels as f64;
        let half = 0.5 * width;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * width;
            let mut panel = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                panel += w * f(mid + half * x)?;
            }
            total += half * panel;
        }
        Ok(total)
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(GAUSS_ORDER))
}

/// Integrate `g(u)` over `[0, 1]` with panel doubling.
pub fn integrate_unit_interval<G>(mut g: G, quad: &QuadratureSpec) -> Result<Integral>
where
    G: FnMut(f64) -> Result<f64>,
{
    let rule = rule();
    let mut previous = rule.composite(0.0, 1.0, 1, &mut g)?;
    let mut difference = f64::INFINITY;
    for level in 1..=quad.max_doublings {
        let current = rule.composite(0.0, 1.0, 1usize << level, &mut g)?;
        if !current.is_finite() {
            return Err(Error::Divergent(format!(
                "non-finite quadrature estimate at doubling {level}"
            )));
        }
        difference = (current - previous).abs();
        if difference == 0.0 || difference <= quad.tolerance * current.abs() {
            return Ok(Integral {
                value: current,
                error: difference,
            });
        }
        previous = current;
    }
    Err(Error::Convergence {
        best: previous,
        difference,
        doublings: quad.max_doublings,
    })
}

/// `∫₀^∞ f(ξ) dξ` via the map `ξ = ξ_c u/(1 − u)`.
pub fn integrate_semiinfinite<F>(mut f: F, quad: &QuadratureSpec) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    let scale = quad.scale;
    integrate_unit_interval(
        |u| {
            let one_minus = 1.0 - u;
            let xi = scale * u / one_minus;
            let jacobian = scale / (one_minus * one_minus);
            let value = f(xi)?;
            // Integrand decays to zero at the mapped endpoint.
            if value == 0.0 {
                Ok(0.0)
            } else {
                Ok(value * jacobian)
            }
        },
        quad,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_weights_sum_to_two() {
        for n in [1, 2, 5, 16, 33] {
            let r = GaussLegendre::new(n);
            let s: f64 = r.weights.iter().sum();
            assert_relative_eq!(s, 2.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn arctangent_reference() {
        let a = 1e16;
        let quad = QuadratureSpec::new(1e16, 1e-12, 14).unwrap();
        let got = integrate_semiinfinite(|x| Ok(a * a / (a * a + x * x)), &quad).unwrap();
        assert_relative_eq!(got.value, PI * a / 2.0, max_relative = 1e-9);
    }

    #[test]
    fn zero_integrand() {
        let got = integrate_semiinfinite(|_| Ok(0.0), &QuadratureSpec::default()).unwrap();
        assert_eq!(got.value, 0.0);
        assert_eq!(got.error, 0.0);
        assert_eq!(got.value.to_bits(), 0);
    }

    #[test]
    fn reports_convergence_failure() {
        let quad = QuadratureSpec::new(1.0, 1e-15, 2).unwrap();
        let err = integrate_semiinfinite(|x| Ok(1.0 / (1.0 + x).powf(1.01)), &quad).unwrap_err();
        assert!(matches!(err, Error::Convergence { best, .. } if best.is_finite()));
    }

    #[test]
    fn exact_on_mapped_polynomials() {
        let quad = QuadratureSpec::new(3e15, 1e-12, 4).unwrap();
        for degree in 0..(2 * GAUSS_ORDER - 1) as i32 {
            let got = integrate_unit_interval(|u| Ok(u.powi(degree)), &quad).unwrap();
            assert_relative_eq!(got.value, 1.0 / (degree as f64 + 1.0), max_relative = 1e-14);
        }
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(QuadratureSpec::new(0.0, 1e-9, 4).is_err());
        assert!(QuadratureSpec::new(1.0, 0.0, 4).is_err());
        assert!(QuadratureSpec::new(1.0, 1.0, 4).is_err());
        assert!(QuadratureSpec::new(1.0, 1e-9, 0).is_err());
    }
}
