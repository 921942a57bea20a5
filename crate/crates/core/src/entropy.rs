//! Rényi, Tsallis, Shannon and Onicescu functionals of the model densities.
//!
//! Every value comes either from a closed form, from adaptive quadrature of
//! ∫ρ^α, or from an analytic limit (α → ∞). The [`Evaluator`] carries the
//! tolerances and may force one path so that the two can be cross-checked.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::quadrature::{Integrator, QuadratureResult};
use crate::specfun::{ln_gamma, EULER_GAMMA, LN_PI};
use crate::systems::{Family, Space, SystemDescriptor};

pub use crate::expansion::{asymptotic_coefficients, Expansion, Regime, Term, Variable};

/// Orders closer to one than this are evaluated as Shannon entropies.
pub const SHANNON_CROSSOVER: f64 = 1e-6;

/// Loosest relative tolerance the evaluator falls back to.
pub const TOLERANCE_FLOOR: f64 = 1e-8;

/// Quadrature-only states are supported up to this quantum number.
pub const MAX_QUADRATURE_QUANTUM_NUMBER: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntropyKind {
    Renyi,
    Tsallis,
    Shannon,
    Onicescu,
}

impl EntropyKind {
    pub fn name(self) -> &'static str {
        match self {
            EntropyKind::Renyi => "renyi",
            EntropyKind::Tsallis => "tsallis",
            EntropyKind::Shannon => "shannon",
            EntropyKind::Onicescu => "onicescu",
        }
    }
}

impl fmt::Display for EntropyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComputationPath {
    ClosedForm,
    Quadrature,
    Limit,
}

impl ComputationPath {
    pub fn name(self) -> &'static str {
        match self {
            ComputationPath::ClosedForm => "closed_form",
            ComputationPath::Quadrature => "quadrature",
            ComputationPath::Limit => "limit",
        }
    }
}

impl fmt::Display for ComputationPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyResult {
    pub kind: EntropyKind,
    pub space: Space,
    /// Order of the functional; `None` for Shannon and Onicescu.
    pub alpha: Option<f64>,
    pub value: f64,
    pub path: ComputationPath,
    pub abs_error: f64,
    pub scale_used: f64,
}

/// How an entropy blows up as α approaches the threshold from above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Divergence {
    /// Rényi entropies grow like −c·ln(α − α_TH).
    LogDivergent,
    /// Tsallis entropies grow like c/(α − α_TH).
    PowerDivergent,
    /// Finite support: nothing diverges.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdInfo {
    pub alpha_threshold: f64,
    pub divergence: Divergence,
}

/// Which evaluation route to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Closed form when one is cataloged, quadrature otherwise.
    #[default]
    Auto,
    ClosedForm,
    Quadrature,
}

/// ln ∫ρ^α together with its error and provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIntegral {
    pub ln_value: f64,
    pub abs_error: f64,
    pub path: ComputationPath,
}

/// Entropy evaluator holding the quadrature tolerances and path choice.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Evaluator {
    pub integrator: Integrator,
    pub method: Method,
}

/// Momentum threshold below which ∫γ^α diverges.
///
/// Set by the large-k decay of the momentum density: k⁻² for the Robin wall
/// and the Neumann well, k⁻⁴ for the hydrogen model and the Dirichlet well.
pub fn threshold(sys: &SystemDescriptor, space: Space) -> ThresholdInfo {
    let finite_support = matches!(sys.family, Family::NeumannWell | Family::DirichletWell) && space == Space::Position;
    let alpha_threshold = match (sys.family, space) {
        (_, Space::Position) | (Family::HarmonicOscillator, _) => 0.0,
        (Family::RobinWall | Family::NeumannWell, Space::Momentum) => 0.5,
        (Family::Q1DHydrogen | Family::DirichletWell, Space::Momentum) => 0.25,
    };
    ThresholdInfo {
        alpha_threshold,
        divergence: if finite_support { Divergence::None } else { Divergence::LogDivergent },
    }
}

/// β = α/(2α − 1), the order paired with α in the uncertainty relations.
/// α = ½ maps to +∞ and α = +∞ to ½.
pub fn conjugate_beta(alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha < 0.5 {
        return Err(Error::Domain(format!("conjugate order needs alpha >= 1/2, got {alpha}")));
    }
    if alpha == 0.5 {
        return Ok(f64::INFINITY);
    }
    if alpha == f64::INFINITY {
        return Ok(0.5);
    }
    Ok(alpha / (2.0 * alpha - 1.0))
}

/// R = ln(1 + (1 − α)T)/(1 − α)
pub fn renyi_from_tsallis(t: f64, alpha: f64) -> Result<f64> {
    check_order(alpha)?;
    if alpha == 1.0 {
        return Ok(t);
    }
    let x = (1.0 - alpha) * t;
    if !(x > -1.0) {
        return Err(Error::Domain(format!("1 + (1 - alpha) t must be positive, got {}", 1.0 + x)));
    }
    Ok(x.ln_1p() / (1.0 - alpha))
}

/// T = (1 − e^{(1−α)R})/(α − 1)
pub fn tsallis_from_renyi(r: f64, alpha: f64) -> Result<f64> {
    check_order(alpha)?;
    if alpha == 1.0 {
        return Ok(r);
    }
    Ok(-((1.0 - alpha) * r).exp_m1() / (alpha - 1.0))
}

fn check_order(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::Domain(format!("entropy order must be positive, got {alpha}")));
    }
    Ok(())
}

pub fn renyi(sys: &SystemDescriptor, space: Space, alpha: f64) -> Result<EntropyResult> {
    Evaluator::default().renyi(sys, space, alpha)
}

pub fn tsallis(sys: &SystemDescriptor, space: Space, alpha: f64) -> Result<EntropyResult> {
    Evaluator::default().tsallis(sys, space, alpha)
}

pub fn shannon(sys: &SystemDescriptor, space: Space) -> Result<EntropyResult> {
    Evaluator::default().shannon(sys, space)
}

pub fn onicescu(sys: &SystemDescriptor, space: Space) -> Result<EntropyResult> {
    Evaluator::default().onicescu(sys, space)
}

impl Evaluator {
    pub fn new(rel_tol: f64) -> Self {
        Self { integrator: Integrator::with_rel_tol(rel_tol), method: Method::Auto }
    }

    pub fn with_method(self, method: Method) -> Self {
        Self { method, ..self }
    }

    /// Whether a closed form for ∫ρ^α is cataloged for this state and space.
    pub fn has_closed_form(sys: &SystemDescriptor, space: Space) -> bool {
        let n = sys.quantum_number;
        match (sys.family, space) {
            (Family::HarmonicOscillator, _) => n <= 1,
            (Family::RobinWall, _) => true,
            (Family::Q1DHydrogen, Space::Position) => n == 1,
            (Family::Q1DHydrogen, Space::Momentum) => true,
            (Family::NeumannWell, Space::Position) => true,
            _ => false,
        }
    }

    fn admit(&self, sys: &SystemDescriptor, space: Space, alpha: f64, kind: EntropyKind) -> Result<()> {
        check_order(alpha)?;
        let info = threshold(sys, space);
        if alpha <= info.alpha_threshold {
            let info = match kind {
                EntropyKind::Tsallis if info.divergence == Divergence::LogDivergent => {
                    ThresholdInfo { divergence: Divergence::PowerDivergent, ..info }
                }
                _ => info,
            };
            return Err(Error::DivergentEntropy { alpha, info });
        }
        if !Self::has_closed_form(sys, space) && sys.quantum_number > MAX_QUADRATURE_QUANTUM_NUMBER {
            return Err(Error::Domain(format!(
                "{sys}: states without a closed form are supported up to n = {MAX_QUADRATURE_QUANTUM_NUMBER}"
            )));
        }
        Ok(())
    }

    /// ln ∫ρ^α for α above the threshold.
    pub fn ln_power_integral(&self, sys: &SystemDescriptor, space: Space, alpha: f64) -> Result<PowerIntegral> {
        self.admit(sys, space, alpha, EntropyKind::Renyi)?;
        if !alpha.is_finite() {
            return Err(Error::Domain("the power integral needs a finite order".into()));
        }
        let closed = match self.method {
            Method::Quadrature => None,
            _ => closed_form_ln_power(sys, space, alpha)?,
        };
        match (closed, self.method) {
            (Some(v), _) => Ok(PowerIntegral {
                ln_value: v,
                abs_error: 1e-14 * (1.0 + alpha * (1.0 + alpha.ln().abs()) + v.abs()),
                path: ComputationPath::ClosedForm,
            }),
            (None, Method::ClosedForm) => Err(Error::NotImplemented(format!("closed form for {sys} in {space} space"))),
            (None, _) => self.quadrature_ln_power(sys, space, alpha),
        }
    }

    /// Integrates at the requested tolerance; on non-convergence retries at
    /// tenfold looser tolerances down to [`TOLERANCE_FLOOR`]. Slowly decaying
    /// oscillatory tails have an accuracy floor near 1e-10.
    fn integrate_laddered<G>(&self, sys: &SystemDescriptor, space: Space, g: G) -> Result<QuadratureResult>
    where
        G: Fn(f64, f64) -> f64 + Copy,
    {
        let mut integrator = self.integrator;
        loop {
            match sys.integrate_functional(space, &integrator, g) {
                Err(Error::NonConvergent { .. }) if integrator.rel_tol * 10.0 <= TOLERANCE_FLOOR * 1.000_001 => {
                    integrator.rel_tol *= 10.0;
                }
                other => return other,
            }
        }
    }

    fn quadrature_ln_power(&self, sys: &SystemDescriptor, space: Space, alpha: f64) -> Result<PowerIntegral> {
        // Normalising by the supremum keeps the integrand O(1) for large α.
        let peak = sys.sup_density(space);
        let r = self.integrate_laddered(sys, space, |_, d| if d > 0.0 { (d / peak).powf(alpha) } else { 0.0 })?;
        Ok(PowerIntegral {
            ln_value: alpha * peak.ln() + r.value.ln(),
            abs_error: r.abs_error_estimate / r.value,
            path: ComputationPath::Quadrature,
        })
    }

    pub fn renyi(&self, sys: &SystemDescriptor, space: Space, alpha: f64) -> Result<EntropyResult> {
        self.admit(sys, space, alpha, EntropyKind::Renyi)?;
        let result = |value: f64, path, abs_error: f64| EntropyResult {
            kind: EntropyKind::Renyi,
            space,
            alpha: Some(alpha),
            value,
            path,
            abs_error,
            scale_used: sys.scale,
        };
        if alpha == f64::INFINITY {
            let (sup, err) = self.sup(sys, space);
            return Ok(result(-sup.ln(), ComputationPath::Limit, err / sup));
        }
        if (alpha - 1.0).abs() < SHANNON_CROSSOVER {
            let s = self.shannon(sys, space)?;
            return Ok(result(s.value, s.path, s.abs_error));
        }
        let p = self.ln_power_integral(sys, space, alpha)?;
        let denom = (1.0 - alpha).abs();
        Ok(result(p.ln_value / (1.0 - alpha), p.path, p.abs_error / denom))
    }

    pub fn tsallis(&self, sys: &SystemDescriptor, space: Space, alpha: f64) -> Result<EntropyResult> {
        self.admit(sys, space, alpha, EntropyKind::Tsallis)?;
        let result = |value: f64, path, abs_error: f64| EntropyResult {
            kind: EntropyKind::Tsallis,
            space,
            alpha: Some(alpha),
            value,
            path,
            abs_error,
            scale_used: sys.scale,
        };
        if alpha == f64::INFINITY {
            // ∫ρ^α grows like (sup ρ)^α, so (1 − ∫ρ^α)/(α − 1) tends to zero
            // when sup ρ ≤ 1 and to −∞ otherwise.
            let (sup, _) = self.sup(sys, space);
            let value = if sup <= 1.0 { 0.0 } else { f64::NEG_INFINITY };
            return Ok(result(value, ComputationPath::Limit, 0.0));
        }
        if (alpha - 1.0).abs() < SHANNON_CROSSOVER {
            let s = self.shannon(sys, space)?;
            return Ok(result(s.value, s.path, s.abs_error));
        }
        let p = self.ln_power_integral(sys, space, alpha)?;
        let value = -p.ln_value.exp_m1() / (alpha - 1.0);
        let abs_error = p.ln_value.exp() * p.abs_error / (alpha - 1.0).abs();
        Ok(result(value, p.path, abs_error))
    }

    pub fn shannon(&self, sys: &SystemDescriptor, space: Space) -> Result<EntropyResult> {
        let closed = match self.method {
            Method::Quadrature => None,
            _ => closed_form_shannon(sys, space),
        };
        let (value, path, abs_error) = match (closed, self.method) {
            (Some(v), _) => (v, ComputationPath::ClosedForm, 1e-15 * (1.0 + v.abs())),
            (None, Method::ClosedForm) => {
                return Err(Error::NotImplemented(format!("closed-form Shannon entropy for {sys} in {space} space")))
            }
            (None, _) => {
                if !Self::has_closed_form(sys, space) && sys.quantum_number > MAX_QUADRATURE_QUANTUM_NUMBER {
                    return Err(Error::Domain(format!(
                        "{sys}: states without a closed form are supported up to n = {MAX_QUADRATURE_QUANTUM_NUMBER}"
                    )));
                }
                let r = self.integrate_laddered(sys, space, |_, d| if d > 0.0 { -d * d.ln() } else { 0.0 })?;
                (r.value, ComputationPath::Quadrature, r.abs_error_estimate)
            }
        };
        Ok(EntropyResult {
            kind: EntropyKind::Shannon,
            space,
            alpha: None,
            value,
            path,
            abs_error,
            scale_used: sys.scale,
        })
    }

    /// Onicescu energy ∫ρ² = e^{−R(2)} = 1 − T(2).
    pub fn onicescu(&self, sys: &SystemDescriptor, space: Space) -> Result<EntropyResult> {
        let p = self.ln_power_integral(sys, space, 2.0)?;
        let value = p.ln_value.exp();
        Ok(EntropyResult {
            kind: EntropyKind::Onicescu,
            space,
            alpha: None,
            value,
            path: p.path,
            abs_error: value * p.abs_error,
            scale_used: sys.scale,
        })
    }

    /// Any of the four functionals; `alpha` is ignored for Shannon and Onicescu.
    pub fn entropy(&self, kind: EntropyKind, sys: &SystemDescriptor, space: Space, alpha: f64) -> Result<EntropyResult> {
        match kind {
            EntropyKind::Renyi => self.renyi(sys, space, alpha),
            EntropyKind::Tsallis => self.tsallis(sys, space, alpha),
            EntropyKind::Shannon => self.shannon(sys, space),
            EntropyKind::Onicescu => self.onicescu(sys, space),
        }
    }

    fn sup(&self, sys: &SystemDescriptor, space: Space) -> (f64, f64) {
        let v = sys.sup_density(space);
        (v, 1e-13 * v)
    }
}

/// ln ∫ρ^α in closed form, when cataloged.
fn closed_form_ln_power(sys: &SystemDescriptor, space: Space, alpha: f64) -> Result<Option<f64>> {
    let s = sys.scale;
    let sign = match space {
        Space::Position => 1.0,
        Space::Momentum => -1.0,
    };
    let a = alpha;
    let dim = (1.0 - a) * sign * s.ln();
    let v = match (sys.family, space, sys.quantum_number) {
        (Family::HarmonicOscillator, _, 0) => dim + (1.0 - a) * 0.5 * LN_PI - 0.5 * a.ln(),
        (Family::HarmonicOscillator, _, 1) => {
            dim + a * LN_2 + ln_gamma(a + 0.5)? - 0.5 * a * LN_PI - (a + 0.5) * a.ln()
        }
        (Family::RobinWall, Space::Position, _) => dim - (1.0 - a) * LN_2 - a.ln(),
        (Family::RobinWall, Space::Momentum, _) => dim + (1.0 - a) * LN_PI + ln_gamma(a - 0.5)? - 0.5 * LN_PI - ln_gamma(a)?,
        (Family::Q1DHydrogen, Space::Position, 1) => dim + ln_gamma(2.0 * a + 1.0)? - LN_2 - (2.0 * a + 1.0) * a.ln(),
        (Family::Q1DHydrogen, Space::Momentum, n) => {
            dim - (1.0 - a) * (n as f64).ln() + a * LN_2 - (a - 0.5) * LN_PI + ln_gamma(2.0 * a - 0.5)? - ln_gamma(2.0 * a)?
        }
        (Family::NeumannWell, Space::Position, _) => dim,
        _ => return Ok(None),
    };
    Ok(Some(v))
}

fn closed_form_shannon(sys: &SystemDescriptor, space: Space) -> Option<f64> {
    let ls = sys.scale.ln();
    let g = EULER_GAMMA;
    let v = match (sys.family, space, sys.quantum_number) {
        (Family::HarmonicOscillator, Space::Position, 0) => ls + 0.5 * (1.0 + LN_PI),
        (Family::HarmonicOscillator, Space::Momentum, 0) => -ls + 0.5 * (1.0 + LN_PI),
        (Family::HarmonicOscillator, Space::Position, 1) => ls + LN_2 + g + 0.5 * LN_PI - 0.5,
        (Family::HarmonicOscillator, Space::Momentum, 1) => -ls + LN_2 + g + 0.5 * LN_PI - 0.5,
        (Family::RobinWall, Space::Position, _) => ls - LN_2 + 1.0,
        (Family::RobinWall, Space::Momentum, _) => -ls + (4.0 * PI).ln(),
        (Family::Q1DHydrogen, Space::Position, 1) => ls + 2.0 * g,
        (Family::Q1DHydrogen, Space::Momentum, n) => -ls - (n as f64).ln() - 2.0 + (8.0 * PI).ln(),
        (Family::NeumannWell, Space::Position, _) => ls,
        _ => return None,
    };
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::LN_2PI;
    use proptest::prelude::*;

    fn ho(n: u32) -> SystemDescriptor {
        SystemDescriptor::harmonic_oscillator(n).unwrap()
    }

    fn quad() -> Evaluator {
        Evaluator::new(1e-12).with_method(Method::Quadrature)
    }

    fn closed() -> Evaluator {
        Evaluator::new(1e-12).with_method(Method::ClosedForm)
    }

    #[test]
    fn ho_ground_min_entropy() {
        for space in Space::BOTH {
            let r = renyi(&ho(0), space, f64::INFINITY).unwrap();
            assert_eq!(r.path, ComputationPath::Limit);
            assert!((r.value - 0.5 * LN_PI).abs() < 1e-12);
        }
    }

    #[test]
    fn robin_position_order_two_vanishes() {
        let r = renyi(&SystemDescriptor::robin_wall(), Space::Position, 2.0).unwrap();
        assert_eq!(r.path, ComputationPath::ClosedForm);
        assert!(r.value.abs() < 1e-15);
        let t = tsallis(&SystemDescriptor::robin_wall(), Space::Position, 2.0).unwrap();
        assert!(t.value.abs() < 1e-15);
    }

    #[test]
    fn robin_momentum_min_entropy() {
        let r = renyi(&SystemDescriptor::robin_wall(), Space::Momentum, f64::INFINITY).unwrap();
        assert!((r.value - LN_PI).abs() < 1e-12);
    }

    #[test]
    fn ho2_order_two_matches_trapezoid_oracle() {
        // ρ₂(x) = (4x² − 2)² e^{−x²}/(8√π); trapezoid sums of Gaussians are spectrally accurate.
        let h = 1e-3;
        let mut sum = 0.0;
        let mut x: f64 = -12.0;
        while x <= 12.0 {
            let rho = (4.0 * x * x - 2.0).powi(2) * (-x * x).exp() / (8.0 * PI.sqrt());
            sum += rho * rho;
            x += h;
        }
        let oracle = -(sum * h).ln();
        let r = renyi(&ho(2), Space::Position, 2.0).unwrap();
        assert_eq!(r.path, ComputationPath::Quadrature);
        assert!((r.value - oracle).abs() < 1e-8, "{} vs {oracle}", r.value);
    }

    #[test]
    fn threshold_rejections() {
        let q = SystemDescriptor::q1d_hydrogen(1).unwrap();
        match tsallis(&q, Space::Momentum, 0.25) {
            Err(Error::DivergentEntropy { info, .. }) => {
                assert_eq!(info.alpha_threshold, 0.25);
                assert_eq!(info.divergence, Divergence::PowerDivergent);
            }
            other => panic!("unexpected {other:?}"),
        }
        match renyi(&SystemDescriptor::robin_wall(), Space::Momentum, 0.5) {
            Err(Error::DivergentEntropy { info, .. }) => assert_eq!(info.divergence, Divergence::LogDivergent),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(renyi(&ho(0), Space::Position, 0.0), Err(Error::Domain(_))));
        assert!(matches!(renyi(&ho(0), Space::Position, -1.0), Err(Error::Domain(_))));
        assert!(matches!(renyi(&ho(11), Space::Position, 2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn thresholds() {
        let robin = threshold(&SystemDescriptor::robin_wall(), Space::Momentum);
        assert_eq!(robin, ThresholdInfo { alpha_threshold: 0.5, divergence: Divergence::LogDivergent });
        for n in 1..4 {
            assert_eq!(threshold(&SystemDescriptor::q1d_hydrogen(n).unwrap(), Space::Momentum).alpha_threshold, 0.25);
            assert_eq!(threshold(&ho(n), Space::Momentum).alpha_threshold, 0.0);
        }
        assert_eq!(threshold(&SystemDescriptor::neumann_well(), Space::Position).divergence, Divergence::None);
        assert_eq!(threshold(&SystemDescriptor::dirichlet_well(1).unwrap(), Space::Momentum).alpha_threshold, 0.25);
    }

    #[test]
    fn shannon_values() {
        assert!((shannon(&ho(0), Space::Position).unwrap().value - 1.072_364_942_924_700_1).abs() < 1e-12);
        let q = SystemDescriptor::q1d_hydrogen(1).unwrap();
        let sum = shannon(&q, Space::Position).unwrap().value + shannon(&q, Space::Momentum).unwrap().value;
        assert!((sum - (2.0 * EULER_GAMMA - 2.0 + (8.0 * PI).ln())).abs() < 1e-12);
    }

    #[test]
    fn neumann_shannon_sum() {
        let w = SystemDescriptor::neumann_well();
        let e = Evaluator::new(1e-10);
        let sum = e.shannon(&w, Space::Position).unwrap().value + e.shannon(&w, Space::Momentum).unwrap().value;
        assert!((sum - 2.6834).abs() < 5e-4, "{sum}");
    }

    #[test]
    fn crossover_routes_to_shannon() {
        let r = renyi(&ho(1), Space::Position, 1.0).unwrap();
        let s = shannon(&ho(1), Space::Position).unwrap();
        assert_eq!(r.value, s.value);
        assert_eq!(r.alpha, Some(1.0));
        let t = tsallis(&ho(1), Space::Position, 1.0 + 5e-7).unwrap();
        assert_eq!(t.value, s.value);
    }

    #[test]
    fn onicescu_values() {
        let o = onicescu(&ho(0), Space::Position).unwrap();
        assert!((o.value - (2.0 * PI).powf(-0.5)).abs() < 1e-14);
        assert!(o.alpha.is_none());
        let o = onicescu(&SystemDescriptor::robin_wall(), Space::Position).unwrap();
        assert!((o.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn onicescu_identities() {
        for sys in [ho(0), ho(2), SystemDescriptor::robin_wall(), SystemDescriptor::q1d_hydrogen(2).unwrap(), SystemDescriptor::dirichlet_well(1).unwrap()] {
            for space in Space::BOTH {
                let o = onicescu(&sys, space).unwrap().value;
                let r = renyi(&sys, space, 2.0).unwrap().value;
                let t = tsallis(&sys, space, 2.0).unwrap().value;
                assert!((o - (-r).exp()).abs() < 1e-10);
                assert!((o - (1.0 - t)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn conversions() {
        assert_eq!(renyi_from_tsallis(0.0, 3.0).unwrap(), 0.0);
        let t = tsallis(&ho(0), Space::Position, 2.0).unwrap().value;
        assert!((t - (1.0 - (2.0 * PI).powf(-0.5))).abs() < 1e-14);
        assert!((renyi_from_tsallis(t, 2.0).unwrap() - 0.5 * LN_2PI).abs() < 1e-14);
        assert!(matches!(renyi_from_tsallis(2.0, 2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn conjugate_orders() {
        assert_eq!(conjugate_beta(1.0).unwrap(), 1.0);
        assert!((conjugate_beta(2.0).unwrap() - 2.0 / 3.0).abs() < 1e-16);
        assert_eq!(conjugate_beta(f64::INFINITY).unwrap(), 0.5);
        assert_eq!(conjugate_beta(0.5).unwrap(), f64::INFINITY);
        assert!(conjugate_beta(0.4).is_err());
    }

    #[test]
    fn dual_path_agreement() {
        let mut states = vec![ho(0), ho(1), SystemDescriptor::robin_wall(), SystemDescriptor::q1d_hydrogen(1).unwrap()];
        for n in 2..4 {
            states.push(SystemDescriptor::q1d_hydrogen(n).unwrap());
        }
        for sys in states {
            for space in Space::BOTH {
                if !Evaluator::has_closed_form(&sys, space) {
                    continue;
                }
                let thr = threshold(&sys, space).alpha_threshold;
                for alpha in [thr + 0.1, 0.75, 1.5, 2.0, 3.0, 5.0] {
                    let c = closed().renyi(&sys, space, alpha).unwrap().value;
                    let q = quad().renyi(&sys, space, alpha).unwrap().value;
                    assert!((c - q).abs() < 1e-8, "{sys} {space} {alpha}: {c} vs {q}");
                }
            }
        }
    }

    #[test]
    fn shannon_dual_path() {
        for sys in [ho(0), ho(1), SystemDescriptor::robin_wall(), SystemDescriptor::q1d_hydrogen(1).unwrap(), SystemDescriptor::neumann_well()] {
            for space in Space::BOTH {
                let Ok(c) = closed().shannon(&sys, space) else { continue };
                let q = quad().shannon(&sys, space).unwrap();
                assert!((c.value - q.value).abs() < 1e-8, "{sys} {space}");
            }
        }
    }

    #[test]
    fn shannon_limit_approach() {
        let sys = ho(1);
        let s = shannon(&sys, Space::Position).unwrap().value;
        let mut prev_r = f64::INFINITY;
        for d in [1e-2, 1e-3, 1e-4] {
            let r = renyi(&sys, Space::Position, 1.0 + d).unwrap().value;
            let t = tsallis(&sys, Space::Position, 1.0 + d).unwrap().value;
            assert!((r - s).abs() < prev_r);
            prev_r = (r - s).abs();
            // Different first-order slopes.
            let slope_r = (r - s) / d;
            let slope_t = (t - s) / d;
            assert!((slope_r - slope_t).abs() > 0.05);
        }
    }

    #[test]
    fn higher_states_have_larger_entropy() {
        for alpha in [0.3, 1.5, 4.0] {
            let mut prev = f64::NEG_INFINITY;
            for n in 0..4 {
                let r = renyi(&ho(n), Space::Position, alpha).unwrap().value;
                assert!(r > prev);
                prev = r;
            }
        }
    }

    #[test]
    fn scale_shifts_renyi_by_log() {
        let s = 2.5;
        for sys in [ho(0), ho(2), SystemDescriptor::robin_wall(), SystemDescriptor::q1d_hydrogen(2).unwrap()] {
            let scaled = sys.with_scale(s).unwrap();
            for (space, sign) in [(Space::Position, 1.0), (Space::Momentum, -1.0)] {
                let a = renyi(&sys, space, 1.7).unwrap().value;
                let b = renyi(&scaled, space, 1.7).unwrap().value;
                assert!((b - a - sign * s.ln()).abs() < 1e-9);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn renyi_tsallis_round_trip(t in -3.0f64..3.0, alpha in 0.05f64..8.0) {
            prop_assume!((1.0 - alpha) * t > -0.99);
            let r = renyi_from_tsallis(t, alpha).unwrap();
            let back = tsallis_from_renyi(r, alpha).unwrap();
            prop_assert!((back - t).abs() <= 1e-12 * t.abs().max(1.0));
        }

        #[test]
        fn conjugate_is_involution(alpha in 0.55f64..50.0) {
            let beta = conjugate_beta(alpha).unwrap();
            prop_assert!((conjugate_beta(beta).unwrap() - alpha).abs() <= 1e-13 * alpha);
            prop_assert!((1.0 / alpha + 1.0 / beta - 2.0).abs() <= 1e-14);
        }

        #[test]
        fn entropies_decrease_in_order(a in 0.3f64..6.0, da in 0.05f64..2.0) {
            let systems = [ho(0), ho(1), SystemDescriptor::robin_wall(), SystemDescriptor::q1d_hydrogen(1).unwrap()];
            for sys in systems {
                for space in Space::BOTH {
                    let thr = threshold(&sys, space).alpha_threshold;
                    let lo = a.max(thr + 0.01);
                    if (lo - 1.0).abs() < 1e-3 || (lo + da - 1.0).abs() < 1e-3 { continue; }
                    let r1 = renyi(&sys, space, lo).unwrap().value;
                    let r2 = renyi(&sys, space, lo + da).unwrap().value;
                    prop_assert!(r2 < r1);
                    let t1 = tsallis(&sys, space, lo).unwrap().value;
                    let t2 = tsallis(&sys, space, lo + da).unwrap().value;
                    prop_assert!(t2 < t1);
                }
            }
        }
    }
}
