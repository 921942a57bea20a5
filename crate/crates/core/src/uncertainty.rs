//! Entropic and variance-based uncertainty relations.
//!
//! The position order α and the momentum order β are conjugate,
//! 1/α + 1/β = 2. The relations are instantiated in one dimension.

use std::f64::consts::PI;
use std::fmt;

use crate::entropy::{conjugate_beta, Evaluator};
use crate::error::{Error, Result};
use crate::specfun::{LN_2PI, LN_PI};
use crate::systems::{Space, SystemDescriptor};

pub use crate::expansion::{sides_expansion, sum_expansion};

/// |gap| below this counts as saturation.
pub const SATURATION_TOL: f64 = 1e-7;
/// gap above −this counts as satisfied.
pub const VERIFICATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    RenyiSum,
    TsallisSobolev,
    ShannonSum,
    Heisenberg,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::RenyiSum => "renyi_sum",
            Relation::TsallisSobolev => "tsallis_sobolev",
            Relation::ShannonSum => "shannon_sum",
            Relation::Heisenberg => "heisenberg",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub relation: Relation,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub satisfied: bool,
    pub saturated: bool,
}

impl UncertaintyReport {
    fn new(relation: Relation, alpha: Option<f64>, beta: Option<f64>, lhs: f64, rhs: f64) -> Self {
        let gap = lhs - rhs;
        // An infinite lhs satisfies any finite bound.
        let gap = if gap.is_nan() && lhs == f64::INFINITY { f64::INFINITY } else { gap };
        Self {
            relation,
            alpha,
            beta,
            lhs,
            rhs,
            gap,
            satisfied: gap >= -VERIFICATION_TOL,
            saturated: gap.abs() <= SATURATION_TOL,
        }
    }
}

/// Result of maximizing the Rényi sum over α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SumMaximum {
    Maximum { alpha: f64, value: f64 },
    /// The sum still grows at the end of the search bracket.
    Unbounded { alpha: f64, value: f64 },
}

/// Search bracket for [`find_sum_maximum`].
pub const MAXIMUM_BRACKET: (f64, f64) = (0.5 + 1e-4, 60.0);

/// Lower bound of the Rényi sum:
/// f(α) = lnπ − lnα + ((α − ½)/(α − 1))·ln(2α − 1).
/// Both ends (α = ½ and α = ∞) give ln 2π; α = 1 gives 1 + lnπ.
pub fn f_bound(alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha < 0.5 {
        return Err(Error::Domain(format!("the bound needs alpha >= 1/2, got {alpha}")));
    }
    if alpha == 0.5 || alpha == f64::INFINITY {
        return Ok(LN_2PI);
    }
    let d = alpha - 1.0;
    if d.abs() < 1e-8 {
        return Ok(1.0 + LN_PI - d * d / 6.0);
    }
    Ok(LN_PI - d.ln_1p() + (0.5 + d) * (2.0 * d).ln_1p() / d)
}

pub fn renyi_relation(sys: &SystemDescriptor, alpha: f64) -> Result<UncertaintyReport> {
    Evaluator::default().renyi_relation(sys, alpha)
}

pub fn tsallis_relation(sys: &SystemDescriptor, alpha: f64) -> Result<UncertaintyReport> {
    Evaluator::default().tsallis_relation(sys, alpha)
}

pub fn shannon_relation(sys: &SystemDescriptor) -> Result<UncertaintyReport> {
    Evaluator::default().shannon_relation(sys)
}

pub fn heisenberg_relation(sys: &SystemDescriptor) -> Result<UncertaintyReport> {
    Evaluator::default().heisenberg_relation(sys)
}

pub fn find_sum_maximum(sys: &SystemDescriptor) -> Result<SumMaximum> {
    Evaluator::default().find_sum_maximum(sys)
}

impl Evaluator {
    /// R_ρ(α) + R_γ(β) for α ∈ [½, ∞].
    pub fn renyi_sum(&self, sys: &SystemDescriptor, alpha: f64) -> Result<f64> {
        let beta = conjugate_beta(alpha)?;
        Ok(self.renyi(sys, Space::Position, alpha)?.value + self.renyi(sys, Space::Momentum, beta)?.value)
    }

    pub fn renyi_relation(&self, sys: &SystemDescriptor, alpha: f64) -> Result<UncertaintyReport> {
        let beta = conjugate_beta(alpha)?;
        let lhs = self.renyi_sum(sys, alpha)?;
        Ok(UncertaintyReport::new(Relation::RenyiSum, Some(alpha), Some(beta), lhs, f_bound(alpha)?))
    }

    /// ln of one side of the Tsallis relation, (a/π)^{1/(4a)}·(∫ρ^a)^{1/(2a)}.
    /// At a = ∞ this is ½ ln sup ρ.
    pub fn ln_tsallis_side(&self, sys: &SystemDescriptor, space: Space, a: f64) -> Result<f64> {
        if a == f64::INFINITY {
            return Ok(0.5 * sys.sup_density(space).ln());
        }
        let ln_i = self.ln_power_integral(sys, space, a)?.ln_value;
        Ok((a / PI).ln() / (4.0 * a) + ln_i / (2.0 * a))
    }

    /// Both sides of the Tsallis relation: position side at α, momentum
    /// side at β. Guaranteed for ½ ≤ α ≤ 1; larger α is accepted as a
    /// diagnostic and may report `satisfied = false`.
    pub fn tsallis_relation(&self, sys: &SystemDescriptor, alpha: f64) -> Result<UncertaintyReport> {
        let beta = conjugate_beta(alpha)?;
        let lhs = self.ln_tsallis_side(sys, Space::Position, alpha)?.exp();
        let rhs = self.ln_tsallis_side(sys, Space::Momentum, beta)?.exp();
        Ok(UncertaintyReport::new(Relation::TsallisSobolev, Some(alpha), Some(beta), lhs, rhs))
    }

    pub fn shannon_relation(&self, sys: &SystemDescriptor) -> Result<UncertaintyReport> {
        let lhs = self.shannon(sys, Space::Position)?.value + self.shannon(sys, Space::Momentum)?.value;
        Ok(UncertaintyReport::new(Relation::ShannonSum, None, None, lhs, 1.0 + LN_PI))
    }

    /// Δx·Δk from the second moments of the densities; +∞ when a moment
    /// diverges.
    pub fn heisenberg_relation(&self, sys: &SystemDescriptor) -> Result<UncertaintyReport> {
        let dx = sys.deviation(Space::Position, &self.integrator)?;
        let dk = sys.deviation(Space::Momentum, &self.integrator)?;
        let lhs = if dx.is_infinite() || dk.is_infinite() { f64::INFINITY } else { dx * dk };
        Ok(UncertaintyReport::new(Relation::Heisenberg, None, None, lhs, 0.5))
    }

    /// Δx·Δk with Δk taken from the momentum operator acting on the
    /// wavefunction. Differs from the moment form when the wavefunction
    /// has kinks or jumps at walls.
    pub fn heisenberg_operator_relation(&self, sys: &SystemDescriptor) -> Result<UncertaintyReport> {
        let dx = sys.deviation(Space::Position, &self.integrator)?;
        let dk = sys.operator_momentum_variance(&self.integrator)?.max(0.0).sqrt();
        Ok(UncertaintyReport::new(Relation::Heisenberg, None, None, dx * dk, 0.5))
    }

    /// Maximizes R_ρ(α) + R_γ(β(α)) over [`MAXIMUM_BRACKET`]: a 16-point
    /// log-spaced scan in α − ½ followed by golden-section refinement.
    pub fn find_sum_maximum(&self, sys: &SystemDescriptor) -> Result<SumMaximum> {
        const POINTS: usize = 16;
        const ALPHA_TOL: f64 = 1e-3;
        let (lo, hi) = (MAXIMUM_BRACKET.0 - 0.5, MAXIMUM_BRACKET.1 - 0.5);
        let grid: Vec<f64> =
            (0..POINTS).map(|i| 0.5 + lo * (hi / lo).powf(i as f64 / (POINTS - 1) as f64)).collect();
        let values = grid.iter().map(|&a| self.renyi_sum(sys, a)).collect::<Result<Vec<_>>>()?;
        let best = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("non-empty grid");
        if best == POINTS - 1 {
            return Ok(SumMaximum::Unbounded { alpha: grid[best], value: values[best] });
        }
        let mut a = grid[best.saturating_sub(1)];
        let mut b = grid[best + 1];
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let mut fc = self.renyi_sum(sys, c)?;
        let mut fd = self.renyi_sum(sys, d)?;
        while b - a > ALPHA_TOL {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = self.renyi_sum(sys, c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = self.renyi_sum(sys, d)?;
            }
        }
        let alpha = 0.5 * (a + b);
        let value = self.renyi_sum(sys, alpha)?.max(fc).max(fd);
        Ok(SumMaximum::Maximum { alpha, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::Regime;
    use crate::specfun::EULER_GAMMA;
    use std::f64::consts::LN_2;

    fn ho(n: u32) -> SystemDescriptor {
        SystemDescriptor::harmonic_oscillator(n).unwrap()
    }

    #[test]
    fn bound_endpoints() {
        assert!((f_bound(0.5).unwrap() - 1.837_877_066_409_345_5).abs() < 1e-15);
        assert!((f_bound(1.0).unwrap() - 2.144_729_885_849_400_2).abs() < 1e-15);
        assert!((f_bound(0.5 + 1e-12).unwrap() - LN_2PI).abs() < 1e-9);
        assert!((f_bound(1e12).unwrap() - LN_2PI).abs() < 1e-9);
        assert!((f_bound(1.0 + 1e-7).unwrap() - f_bound(1.0).unwrap()).abs() < 1e-14);
        assert!(f_bound(0.4).is_err());
    }

    #[test]
    fn bound_is_ho_ground_sum() {
        for alpha in [0.51, 0.6, 0.8, 1.0, 1.5, 2.0, 5.0, 20.0] {
            let r = renyi_relation(&ho(0), alpha).unwrap();
            assert!(r.saturated && r.satisfied, "{alpha}: {}", r.gap);
        }
    }

    #[test]
    fn ho_ground_saturates_tsallis() {
        for alpha in [0.5, 0.6, 0.8, 1.0, 1.5, 2.0, 5.0, 20.0] {
            let r = tsallis_relation(&ho(0), alpha).unwrap();
            assert!(r.gap.abs() < 1e-12, "{alpha}: {}", r.gap);
        }
    }

    #[test]
    fn ho_first_excited_sides() {
        let r = tsallis_relation(&ho(1), 0.5).unwrap();
        assert!((r.lhs - 2.0 / PI.powf(0.75)).abs() < 1e-10);
        assert!((r.rhs - (2.0 / (std::f64::consts::E * PI.sqrt())).sqrt()).abs() < 1e-10);
        assert!(r.satisfied);
        assert!(!tsallis_relation(&ho(1), 1.2).unwrap().satisfied);
        assert!(!tsallis_relation(&ho(1), 2.0).unwrap().satisfied);
    }

    #[test]
    fn renyi_relation_holds_on_grid() {
        let mut systems = vec![SystemDescriptor::robin_wall(), SystemDescriptor::neumann_well()];
        for n in 0..=4 {
            systems.push(ho(n));
        }
        for n in 1..=4 {
            systems.push(SystemDescriptor::q1d_hydrogen(n).unwrap());
        }
        for sys in systems {
            for alpha in [0.6, 0.75, 1.0, 1.5, 2.0, 5.0, 20.0] {
                let r = renyi_relation(&sys, alpha).unwrap();
                assert!(r.satisfied, "{sys} {alpha}: {}", r.gap);
                assert_eq!(r.beta, Some(conjugate_beta(alpha).unwrap()));
            }
        }
    }

    #[test]
    fn renyi_sum_increases_with_n() {
        for alpha in [0.75, 2.0] {
            for n in 0..3 {
                assert!(renyi_relation(&ho(n + 1), alpha).unwrap().lhs > renyi_relation(&ho(n), alpha).unwrap().lhs);
            }
            for n in 1..3 {
                let a = SystemDescriptor::q1d_hydrogen(n).unwrap();
                let b = SystemDescriptor::q1d_hydrogen(n + 1).unwrap();
                assert!(renyi_relation(&b, alpha).unwrap().lhs > renyi_relation(&a, alpha).unwrap().lhs);
            }
        }
    }

    #[test]
    fn renyi_sum_is_scale_free() {
        for sys in [ho(1), SystemDescriptor::robin_wall(), SystemDescriptor::q1d_hydrogen(2).unwrap()] {
            let base = renyi_relation(&sys, 1.7).unwrap().lhs;
            for s in [0.1, 7.3] {
                let v = renyi_relation(&sys.with_scale(s).unwrap(), 1.7).unwrap().lhs;
                assert!((v - base).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn tsallis_holds_in_guaranteed_range() {
        let mut systems = vec![ho(0), ho(1), ho(2), SystemDescriptor::robin_wall(), SystemDescriptor::neumann_well()];
        for n in 1..=3 {
            systems.push(SystemDescriptor::q1d_hydrogen(n).unwrap());
        }
        for sys in systems {
            for alpha in [0.5, 0.6, 0.75, 0.9, 1.0] {
                let r = tsallis_relation(&sys, alpha).unwrap();
                assert!(r.satisfied, "{sys} {alpha}: {}", r.gap);
            }
        }
    }

    #[test]
    fn shannon_and_heisenberg() {
        let n = SystemDescriptor::neumann_well();
        let r = shannon_relation(&n).unwrap();
        assert!(r.satisfied && !r.saturated);
        assert!(shannon_relation(&ho(0)).unwrap().saturated);
        let q = shannon_relation(&SystemDescriptor::q1d_hydrogen(1).unwrap()).unwrap();
        assert!((q.lhs - (2.0 * EULER_GAMMA - 2.0 + (8.0 * PI).ln())).abs() < 1e-12);

        let h = heisenberg_relation(&ho(0)).unwrap();
        assert!((h.lhs - 0.5).abs() < 1e-9 && h.saturated);
        let h = heisenberg_relation(&ho(3)).unwrap();
        assert!((h.lhs - 3.5).abs() < 1e-8);
        let h = heisenberg_relation(&n).unwrap();
        assert!(h.lhs.is_infinite() && h.satisfied);
        let h = Evaluator::default().heisenberg_operator_relation(&n).unwrap();
        assert!(h.lhs == 0.0 && !h.satisfied);
        assert!(heisenberg_relation(&SystemDescriptor::robin_wall()).unwrap().lhs.is_infinite());
        // ⟨x⟩ = 3/2, ⟨x²⟩ = 3 for the hydrogen ground state; ⟨k²⟩ = 1.
        let h = heisenberg_relation(&SystemDescriptor::q1d_hydrogen(1).unwrap()).unwrap();
        assert!((h.lhs - 0.75f64.sqrt()).abs() < 1e-7, "{}", h.lhs);
    }

    #[test]
    fn maxima() {
        match find_sum_maximum(&ho(0)).unwrap() {
            SumMaximum::Maximum { alpha, value } => {
                assert!((alpha - 1.0).abs() < 2e-3);
                assert!((value - (1.0 + LN_PI)).abs() < 1e-6);
            }
            other => panic!("{other:?}"),
        }
        match find_sum_maximum(&SystemDescriptor::q1d_hydrogen(1).unwrap()).unwrap() {
            SumMaximum::Maximum { alpha, value } => {
                assert!((alpha - 4.5436).abs() < 0.05, "{alpha}");
                assert!((value - 2.527349).abs() < 2e-5, "{value}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(find_sum_maximum(&SystemDescriptor::robin_wall()).unwrap(), SumMaximum::Unbounded { .. }));
    }

    #[test]
    fn sum_expansions_have_decaying_remainders() {
        let eval = Evaluator::default();
        let systems = [ho(0), ho(1), SystemDescriptor::robin_wall(), SystemDescriptor::q1d_hydrogen(1).unwrap()];
        let mut count = 0;
        for sys in systems {
            for regime in [Regime::NearHalf, Regime::NearOne, Regime::AtInfinity] {
                let exp = sum_expansion(&sys, regime).unwrap();
                let [v1, v2] = regime.approach_points();
                let ratio = |v: f64| {
                    let a = exp.variable.alpha(v);
                    exp.remainder_ratio(a, eval.renyi_sum(&sys, a).unwrap())
                };
                let (r1, r2) = (ratio(v1), ratio(v2));
                assert!(r2 < r1 && r2 < 0.5, "{sys} {regime:?}: {r1} -> {r2}");
                count += 1;
            }
        }
        assert_eq!(count, 12);
    }

    #[test]
    fn sides_expansions_have_decaying_remainders() {
        let eval = Evaluator::default();
        let cases = [
            (ho(1), Regime::NearOne),
            (SystemDescriptor::robin_wall(), Regime::NearOne),
            (SystemDescriptor::robin_wall(), Regime::NearHalf),
            (SystemDescriptor::q1d_hydrogen(1).unwrap(), Regime::NearHalf),
            (SystemDescriptor::q1d_hydrogen(1).unwrap(), Regime::NearOne),
        ];
        for (sys, regime) in cases {
            let (lhs, rhs) = sides_expansion(&sys, regime).unwrap();
            let [v1, v2] = regime.approach_points();
            for (k, exp) in [lhs, rhs].iter().enumerate() {
                let ratio = |v: f64| {
                    let a = exp.variable.alpha(v);
                    let r = eval.tsallis_relation(&sys, a).unwrap();
                    exp.remainder_ratio(a, if k == 0 { r.lhs } else { r.rhs })
                };
                let (r1, r2) = (ratio(v1), ratio(v2));
                assert!(r2 < r1 && r2 < 0.5, "{sys} {regime:?} side {k}: {r1} -> {r2}");
            }
        }
    }

    #[test]
    fn ho_first_excited_half_limit() {
        let v = renyi_relation(&ho(1), 0.5).unwrap().lhs;
        assert!((v - (1.0 + 2.0 * LN_2)).abs() < 1e-12);
    }
}
