//! Response functions of media and molecules on the imaginary frequency axis.
//!
//! Every quantity here is evaluated at `ω = iξ` with `ξ ≥ 0` in rad/s. On this
//! axis causal permittivities and permeabilities are real, at least one and
//! non-increasing, which is what makes the dispersion integrals well behaved.

use crate::constants::EPSILON_0;
use crate::error::{Error, Result};

/// Ratio `χ(ξ_max)/χ(0)` below which a response counts as decayed.
pub const DECAY_RATIO: f64 = 1e-3;

fn check_frequency(xi: f64) -> Result<()> {
    if xi >= 0.0 && xi.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "imaginary frequency must be finite and non-negative, got {xi}"
        )))
    }
}

/// One Drude–Lorentz oscillator, contributing `ωp² / (ω0² + γξ + ξ²)` on the
/// imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    plasma: f64,
    resonance: f64,
    damping: f64,
}

impl Oscillator {
    pub fn new(plasma: f64, resonance: f64, damping: f64) -> Result<Self> {
        if !(plasma >= 0.0 && plasma.is_finite()) {
            return Err(Error::invalid(format!(
                "plasma strength must be >= 0, got {plasma}"
            )));
        }
        if !(resonance > 0.0 && resonance.is_finite()) {
            return Err(Error::invalid(format!(
                "resonance must be > 0, got {resonance}"
            )));
        }
        if !(damping >= 0.0 && damping.is_finite()) {
            return Err(Error::invalid(format!(
                "damping must be >= 0, got {damping}"
            )));
        }
        Ok(Self {
            plasma,
            resonance,
            damping,
        })
    }

    pub fn plasma(&self) -> f64 {
        self.plasma
    }

    pub fn resonance(&self) -> f64 {
        self.resonance
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    /// Susceptibility contribution at `iξ`.
    #[inline]
    pub fn term(&self, xi: f64) -> f64 {
        self.plasma * self.plasma / (self.resonance * self.resonance + self.damping * xi + xi * xi)
    }

    /// Static strength `ωp²/ω0²`.
    pub fn static_strength(&self) -> f64 {
        (self.plasma / self.resonance).powi(2)
    }

    fn with_scaled_strength(&self, factor: f64) -> Self {
        Self {
            plasma: self.plasma * factor.sqrt(),
            ..*self
        }
    }
}

/// Behaviour of a tabulated response beyond its last sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Extrapolation {
    /// Transparent above the table: the value is 1.
    #[default]
    ClampToUnity,
    /// Queries past the last sample are an error.
    Reject,
}

/// Samples interpolated with a monotone piecewise-cubic Hermite spline in `ln ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    log_xi: Vec<f64>,
    xi: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    extrapolation: Extrapolation,
}

impl Table {
    fn new(xi: Vec<f64>, values: Vec<f64>, extrapolation: Extrapolation) -> Result<Self> {
        if xi.len() != values.len() {
            return Err(Error::invalid(format!(
                "table has {} frequencies but {} values",
                xi.len(),
                values.len()
            )));
        }
        if xi.len() < 2 {
            return Err(Error::invalid("table needs at least two samples"));
        }
        if xi.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::invalid(
                "tabulated frequencies must be positive and finite",
            ));
        }
        if xi.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "tabulated frequencies must be strictly increasing",
            ));
        }
        if values.iter().any(|&v| !(v >= 1.0 && v.is_finite())) {
            return Err(Error::invalid("tabulated values must be finite and >= 1"));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::invalid(
                "tabulated values must be non-increasing in frequency",
            ));
        }
        let log_xi: Vec<f64> = xi.iter().map(|x| x.ln()).collect();
        let slopes = pchip_slopes(&log_xi, &values);
        Ok(Self {
            log_xi,
            xi,
            values,
            slopes,
            extrapolation,
        })
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.xi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn extrapolation(&self) -> Extrapolation {
        self.extrapolation
    }

    fn last_frequency(&self) -> f64 {
        *self.xi.last().expect("table has samples")
    }

    fn eval(&self, xi: f64) -> Result<f64> {
        let n = self.xi.len();
        if xi <= self.xi[0] {
            return Ok(self.values[0]);
        }
        if xi > self.xi[n - 1] {
            return match self.extrapolation {
                Extrapolation::ClampToUnity => Ok(1.0),
                Extrapolation::Reject => Err(Error::OutOfRange {
                    xi,
                    last: self.xi[n - 1],
                }),
            };
        }
        let x = xi.ln();
        let k = (self.log_xi.partition_point(|&v| v <= x) - 1).min(n - 2);
        let h = self.log_xi[k + 1] - self.log_xi[k];
        let t = (x - self.log_xi[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * self.values[k]
            + (t3 - 2.0 * t2 + t) * h * self.slopes[k]
            + (-2.0 * t3 + 3.0 * t2) * self.values[k + 1]
            + (t3 - t2) * h * self.slopes[k + 1];
        // Hermite rounding can dip an ulp below the bracketing samples.
        Ok(value.clamp(self.values[k + 1], self.values[k]))
    }
}

/// Fritsch–Carlson slopes for a monotone cubic Hermite interpolant.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] <= 0.0 {
            d[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d[0] = pchip_end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = pchip_end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn pchip_end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Model {
    Constant(f64),
    Oscillators(Vec<Oscillator>),
    Tabulated(Table),
}

/// A relative permittivity or permeability on the imaginary frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseFunction {
    model: Model,
}

impl ResponseFunction {
    /// The vacuum response, identically 1.
    pub fn vacuum() -> Self {
        Self {
            model: Model::Constant(1.0),
        }
    }

    /// A frequency-independent response. Values other than 1 are useful for
    /// fixed-frequency analyses but are rejected by full-axis quadrature.
    pub fn constant(value: f64) -> Result<Self> {
        if !(value >= 1.0 && value.is_finite()) {
            return Err(Error::invalid(format!(
                "constant response must be finite and >= 1, got {value}"
            )));
        }
        Ok(Self {
            model: Model::Constant(value),
        })
    }

    /// Drude–Lorentz sum `1 + Σ ωp² / (ω0² + γξ + ξ²)`.
    pub fn oscillators(oscillators: Vec<Oscillator>) -> Self {
        Self {
            model: Model::Oscillators(oscillators),
        }
    }

    /// Convenience for a single undamped-or-damped oscillator.
    pub fn single_oscillator(plasma: f64, resonance: f64, damping: f64) -> Result<Self> {
        Ok(Self::oscillators(vec![Oscillator::new(
            plasma, resonance, damping,
        )?]))
    }

    pub fn tabulated(xi: Vec<f64>, values: Vec<f64>, extrapolation: Extrapolation) -> Result<Self> {
        Ok(Self {
            model: Model::Tabulated(Table::new(xi, values, extrapolation)?),
        })
    }

    /// `ε(iξ)` or `μ(iξ)`.
    pub fn eval(&self, xi: f64) -> Result<f64> {
        check_frequency(xi)?;
        match &self.model {
            Model::Constant(c) => Ok(*c),
            Model::Oscillators(list) => Ok(1.0 + list.iter().map(|o| o.term(xi)).sum::<f64>()),
            Model::Tabulated(table) => table.eval(xi),
        }
    }

    /// `χ(iξ) = eval(ξ) − 1`.
    pub fn susceptibility(&self, xi: f64) -> Result<f64> {
        check_frequency(xi)?;
        match &self.model {
            Model::Oscillators(list) => Ok(list.iter().map(|o| o.term(xi)).sum()),
            _ => Ok(self.eval(xi)? - 1.0),
        }
    }

    /// True when the susceptibility at `xi_max` has fallen below
    /// [`DECAY_RATIO`] of its static value, or when the static value is zero.
    pub fn validate_decay(&self, xi_max: f64) -> bool {
        let Ok(chi0) = self.susceptibility(0.0) else {
            return false;
        };
        if chi0 == 0.0 {
            return true;
        }
        match self.susceptibility(xi_max) {
            Ok(chi) => chi < DECAY_RATIO * chi0,
            Err(_) => false,
        }
    }

    pub fn is_vacuum(&self) -> bool {
        match &self.model {
            Model::Constant(c) => *c == 1.0,
            Model::Oscillators(list) => list.iter().all(|o| o.plasma == 0.0),
            Model::Tabulated(_) => false,
        }
    }

    /// Highest frequency at which the model has structure: the largest
    /// resonance, or the last tabulated sample.
    pub fn max_frequency(&self) -> Option<f64> {
        match &self.model {
            Model::Constant(_) => None,
            Model::Oscillators(list) => list
                .iter()
                .filter(|o| o.plasma > 0.0)
                .map(|o| o.resonance)
                .fold(None, |acc, w| Some(acc.map_or(w, |a: f64| a.max(w)))),
            Model::Tabulated(t) => Some(t.last_frequency()),
        }
    }

    /// Frequency of the strongest feature, used to centre quadrature nodes.
    pub fn dominant_frequency(&self) -> Option<f64> {
        match &self.model {
            Model::Constant(_) => None,
            Model::Oscillators(list) => list
                .iter()
                .filter(|o| o.plasma > 0.0)
                .max_by(|a, b| a.static_strength().total_cmp(&b.static_strength()))
                .map(|o| o.resonance),
            Model::Tabulated(t) => {
                let chi0 = t.values[0] - 1.0;
                t.xi.iter()
                    .zip(&t.values)
                    .find(|(_, &v)| v - 1.0 <= 0.5 * chi0)
                    .map(|(&x, _)| x)
                    .or(Some(t.last_frequency()))
            }
        }
    }

    /// The response with its susceptibility multiplied by `factor`, as for a
    /// change of number density in a dilute medium.
    pub fn with_scaled_susceptibility(&self, factor: f64) -> Result<Self> {
        if !(factor >= 0.0 && factor.is_finite()) {
            return Err(Error::invalid(format!(
                "susceptibility scale factor must be >= 0, got {factor}"
            )));
        }
        match &self.model {
            Model::Constant(c) => Self::constant(1.0 + factor * (c - 1.0)),
            Model::Oscillators(list) => Ok(Self::oscillators(
                list.iter()
                    .map(|o| o.with_scaled_strength(factor))
                    .collect(),
            )),
            Model::Tabulated(t) => Self::tabulated(
                t.xi.clone(),
                t.values.iter().map(|v| 1.0 + factor * (v - 1.0)).collect(),
                t.extrapolation,
            ),
        }
    }
}

/// Molecular polarisability on the imaginary axis, in C·m²/V.
#[derive(Debug, Clone, PartialEq)]
pub enum Polarisability {
    /// Frequency independent. Only meaningful at fixed frequency.
    Constant(f64),
    /// Sum of London-type terms `α_k(0) ω_k² / (ω_k² + γ_k ξ + ξ²)`.
    Lorentz(Vec<LorentzTerm>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzTerm {
    pub static_alpha: f64,
    pub resonance: f64,
    pub damping: f64,
}

impl Polarisability {
    pub fn constant(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!(
                "polarisability must be >= 0, got {alpha}"
            )));
        }
        Ok(Self::Constant(alpha))
    }

    pub fn london(static_alpha: f64, resonance: f64) -> Result<Self> {
        Self::lorentz(vec![LorentzTerm {
            static_alpha,
            resonance,
            damping: 0.0,
        }])
    }

    pub fn lorentz(terms: Vec<LorentzTerm>) -> Result<Self> {
        for t in &terms {
            if !(t.static_alpha >= 0.0 && t.static_alpha.is_finite()) {
                return Err(Error::invalid("static polarisability must be >= 0"));
            }
            if !(t.resonance > 0.0 && t.resonance.is_finite()) {
                return Err(Error::invalid("polarisability resonance must be > 0"));
            }
            if !(t.damping >= 0.0 && t.damping.is_finite()) {
                return Err(Error::invalid("polarisability damping must be >= 0"));
            }
        }
        Ok(Self::Lorentz(terms))
    }

    pub fn eval(&self, xi: f64) -> Result<f64> {
        check_frequency(xi)?;
        Ok(match self {
            Self::Constant(a) => *a,
            Self::Lorentz(terms) => terms
                .iter()
                .map(|t| {
                    let w2 = t.resonance * t.resonance;
                    t.static_alpha * w2 / (w2 + t.damping * xi + xi * xi)
                })
                .sum(),
        })
    }

    pub fn max_frequency(&self) -> Option<f64> {
        match self {
            Self::Constant(_) => None,
            Self::Lorentz(terms) => terms
                .iter()
                .map(|t| t.resonance)
                .fold(None, |acc, w| Some(acc.map_or(w, |a: f64| a.max(w)))),
        }
    }
}

/// A molecular species: number density (1/m³) and polarisability.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularSpecies {
    number_density: f64,
    polarisability: Polarisability,
}

impl MolecularSpecies {
    pub fn new(number_density: f64, polarisability: Polarisability) -> Result<Self> {
        if !(number_density >= 0.0 && number_density.is_finite()) {
            return Err(Error::invalid(format!(
                "number density must be >= 0, got {number_density}"
            )));
        }
        Ok(Self {
            number_density,
            polarisability,
        })
    }

    pub fn number_density(&self) -> f64 {
        self.number_density
    }

    pub fn polarisability(&self) -> &Polarisability {
        &self.polarisability
    }

    /// Dilute Clausius–Mossotti susceptibility `χ = ηα/ε0`.
    pub fn clausius_mossotti_dilute(&self, xi: f64) -> Result<f64> {
        Ok(self.number_density * self.polarisability.eval(xi)? / EPSILON_0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn reference_oscillator() -> ResponseFunction {
        ResponseFunction::single_oscillator(1e16, 1e16, 0.0).unwrap()
    }

    #[test]
    fn vacuum_is_unity_everywhere() {
        let vac = ResponseFunction::constant(1.0).unwrap();
        for xi in [0.0, 1.0, 1e15, 1e30] {
            assert_eq!(vac.eval(xi).unwrap(), 1.0);
            assert_eq!(vac.susceptibility(xi).unwrap(), 0.0);
        }
        assert!(vac.validate_decay(1e19));
    }

    #[test]
    fn single_oscillator_hand_values() {
        let r = reference_oscillator();
        assert_relative_eq!(r.eval(0.0).unwrap(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(r.eval(1e16).unwrap(), 1.5, max_relative = 1e-15);
        assert_relative_eq!(r.susceptibility(0.0).unwrap(), 1.0, max_relative = 1e-15);
        assert!(r.susceptibility(1e40).unwrap() < 1e-40);
    }

    #[test]
    fn decay_gate() {
        assert!(!ResponseFunction::constant(2.0)
            .unwrap()
            .validate_decay(1e19));
        let r = reference_oscillator();
        assert!(r.validate_decay(1e19));
        assert_relative_eq!(
            r.susceptibility(1e19).unwrap() / r.susceptibility(0.0).unwrap(),
            1e-6,
            max_relative = 1e-5
        );
        assert!(!r.validate_decay(1e16));
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(Oscillator::new(-1.0, 1.0, 0.0).is_err());
        assert!(Oscillator::new(1.0, 0.0, 0.0).is_err());
        assert!(Oscillator::new(1.0, 1.0, -1.0).is_err());
        assert!(ResponseFunction::constant(0.5).is_err());
        assert!(
            ResponseFunction::tabulated(vec![1.0, 2.0], vec![2.0, 3.0], Extrapolation::Reject)
                .is_err()
        );
        assert!(
            ResponseFunction::tabulated(vec![1.0, 2.0], vec![2.0, 0.9], Extrapolation::Reject)
                .is_err()
        );
        assert!(
            ResponseFunction::tabulated(vec![2.0, 1.0], vec![2.0, 1.5], Extrapolation::Reject)
                .is_err()
        );
        assert!(ResponseFunction::tabulated(vec![1.0], vec![2.0], Extrapolation::Reject).is_err());
        assert!(reference_oscillator().eval(-1.0).is_err());
    }

    #[test]
    fn table_interpolates_and_extrapolates() {
        let xi = vec![1e14, 1e15, 1e16, 1e17];
        let v = vec![3.0, 2.5, 1.5, 1.01];
        let clamp = ResponseFunction::tabulated(xi.clone(), v.clone(), Extrapolation::ClampToUnity)
            .unwrap();
        let reject =
            ResponseFunction::tabulated(xi.clone(), v.clone(), Extrapolation::Reject).unwrap();
        for (x, y) in xi.iter().zip(&v) {
            assert_relative_eq!(clamp.eval(*x).unwrap(), *y, max_relative = 1e-14);
        }
        assert_eq!(clamp.eval(0.0).unwrap(), 3.0);
        assert_eq!(clamp.eval(1e18).unwrap(), 1.0);
        assert!(matches!(reject.eval(1e18), Err(Error::OutOfRange { .. })));
        let mut prev = f64::INFINITY;
        for i in 0..=400 {
            let x = 1e13 * 10f64.powf(i as f64 / 100.0);
            let y = clamp.eval(x).unwrap();
            assert!(y <= prev && y >= 1.0, "x={x} y={y} prev={prev}");
            prev = y;
        }
    }

    #[test]
    fn clausius_mossotti_hand_value() {
        let s = MolecularSpecies::new(1e27, Polarisability::constant(EPSILON_0 * 1e-30).unwrap())
            .unwrap();
        assert_relative_eq!(
            s.clausius_mossotti_dilute(0.0).unwrap(),
            1e-3,
            max_relative = 1e-14
        );
        let empty = MolecularSpecies::new(0.0, Polarisability::constant(1e-40).unwrap()).unwrap();
        assert_eq!(empty.clausius_mossotti_dilute(1e15).unwrap(), 0.0);

        let chi = s.clausius_mossotti_dilute(0.0).unwrap();
        let r = ResponseFunction::constant(1.0 + chi).unwrap();
        assert_relative_eq!(r.susceptibility(3e15).unwrap(), chi, max_relative = 1e-12);
    }

    #[test]
    fn scaled_susceptibility() {
        let r = reference_oscillator()
            .with_scaled_susceptibility(0.25)
            .unwrap();
        assert_relative_eq!(r.susceptibility(0.0).unwrap(), 0.25, max_relative = 1e-14);
        assert!(reference_oscillator()
            .with_scaled_susceptibility(0.0)
            .unwrap()
            .is_vacuum());
    }

    proptest! {
        #[test]
        fn oscillator_sum_is_monotone(
            params in prop::collection::vec((0.0f64..5e16, 1e14f64..1e17, 0.0f64..1e16), 1..4),
            a in 0.0f64..1e18,
            b in 0.0f64..1e18,
        ) {
            let osc = params.iter().map(|&(p, w, g)| Oscillator::new(p, w, g).unwrap()).collect();
            let r = ResponseFunction::oscillators(osc);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let v_lo = r.eval(lo).unwrap();
            let v_hi = r.eval(hi).unwrap();
            prop_assert!(v_lo >= v_hi);
            prop_assert!(v_hi >= 1.0);
        }

        #[test]
        fn constant_round_trip(chi in 0.0f64..1e3, xi in 0.0f64..1e20) {
            let r = ResponseFunction::constant(1.0 + chi).unwrap();
            let back = r.susceptibility(xi).unwrap();
            prop_assert!((back - chi).abs() <= 1e-15 * (1.0 + chi));
        }

        #[test]
        fn clausius_mossotti_is_linear(eta in 0.0f64..1e29, alpha in 0.0f64..1e-38, k in 0.0f64..10.0) {
            let one = MolecularSpecies::new(eta, Polarisability::constant(alpha).unwrap()).unwrap();
            let dens = MolecularSpecies::new(k * eta, Polarisability::constant(alpha).unwrap()).unwrap();
            let pol = MolecularSpecies::new(eta, Polarisability::constant(k * alpha).unwrap()).unwrap();
            let base = one.clausius_mossotti_dilute(1e15).unwrap();
            let tol = 1e-14 * (k * base).abs() + 1e-300;
            prop_assert!((dens.clausius_mossotti_dilute(1e15).unwrap() - k * base).abs() <= tol);
            prop_assert!((pol.clausius_mossotti_dilute(1e15).unwrap() - k * base).abs() <= tol);
        }
    }
}
