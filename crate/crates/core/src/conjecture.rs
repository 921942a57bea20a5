//! Saturation of the uncertainty relations by ground states at α = ½.
//!
//! Scans α_j = ½ + 2^{−j} and extrapolates the Rényi sum and the Tsallis
//! gap to α = ½ by fitting c₀ + c₁·ε ln ε + c₂·ε with ε = 2α − 1 over the
//! second half of the scan, where O(ε²) terms are negligible.

use nalgebra::{DMatrix, DVector};

use crate::entropy::Evaluator;
use crate::error::{Error, Result};
use crate::specfun::LN_2PI;
use crate::systems::{Family, SystemDescriptor};

/// Monotonicity of the trace is checked from this point index on.
pub const FIRST_MONOTONE_POINT: usize = 3;

/// Smallest scan length accepted.
pub const MIN_POINTS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureTrace {
    pub system: SystemDescriptor,
    /// Strictly decreasing toward ½.
    pub alphas: Vec<f64>,
    /// NaN marks a point whose evaluation failed (see `failures`).
    pub renyi_sums: Vec<f64>,
    pub tsallis_gaps: Vec<f64>,
    pub extrapolated_limit: f64,
    pub extrapolated_gap: f64,
    /// ln 2π for the Rényi sum; the Tsallis gap targets 0.
    pub target: f64,
    pub failures: Vec<(usize, Error)>,
}

impl ConjectureTrace {
    pub fn renyi_deviation(&self) -> f64 {
        (self.extrapolated_limit - self.target).abs()
    }

    pub fn tsallis_deviation(&self) -> f64 {
        self.extrapolated_gap.abs()
    }

    /// Whether the Rényi sums decrease monotonically from point `from` on.
    pub fn monotone_from(&self, from: usize) -> bool {
        self.renyi_sums[from.min(self.renyi_sums.len())..].windows(2).all(|w| w[1] < w[0])
    }
}

/// R_ρ(α) + R_γ(β) for the Neumann well, from the densities. α = ∞ puts
/// β on the momentum threshold, where the sum is +∞.
pub fn neumann_renyi_sum(alpha: f64) -> Result<f64> {
    neumann_renyi_sum_with(&Evaluator::default(), alpha)
}

pub fn neumann_renyi_sum_with(eval: &Evaluator, alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= 0.5 {
        return Err(Error::Domain(format!("the Neumann sum needs alpha > 1/2, got {alpha}")));
    }
    if alpha == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    eval.renyi_sum(&SystemDescriptor::neumann_well(), alpha)
}

/// The two sides of the Tsallis relation for a box well, α ∈ [½, 1].
pub fn tsallis_sides_well(well: &SystemDescriptor, alpha: f64) -> Result<(f64, f64)> {
    tsallis_sides_well_with(&Evaluator::default(), well, alpha)
}

pub fn tsallis_sides_well_with(eval: &Evaluator, well: &SystemDescriptor, alpha: f64) -> Result<(f64, f64)> {
    if !matches!(well.family, Family::NeumannWell | Family::DirichletWell) {
        return Err(Error::Domain(format!("{} is not a box well", well.family)));
    }
    if !(0.5..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("well sides need alpha in [1/2, 1], got {alpha}")));
    }
    let r = eval.tsallis_relation(well, alpha)?;
    Ok((r.lhs, r.rhs))
}

/// Scan of a ground state toward α = ½; excited states are rejected.
pub fn conjecture_scan(sys: &SystemDescriptor, n_points: usize) -> Result<ConjectureTrace> {
    Evaluator::default().conjecture_scan(sys, n_points)
}

impl Evaluator {
    pub fn conjecture_scan(&self, sys: &SystemDescriptor, n_points: usize) -> Result<ConjectureTrace> {
        if !sys.is_ground_state() {
            return Err(Error::Domain(format!("the saturation conjecture concerns ground states only, got {sys}")));
        }
        self.conjecture_scan_unchecked(sys, n_points)
    }

    /// Same scan without the ground-state precondition, for diagnostics.
    pub fn conjecture_scan_unchecked(&self, sys: &SystemDescriptor, n_points: usize) -> Result<ConjectureTrace> {
        if n_points < MIN_POINTS {
            return Err(Error::Domain(format!("need at least {MIN_POINTS} points, got {n_points}")));
        }
        let alphas: Vec<f64> = (1..=n_points).map(|j| 0.5 + 0.5f64.powi(j as i32)).collect();
        let mut renyi_sums = Vec::with_capacity(n_points);
        let mut tsallis_gaps = Vec::with_capacity(n_points);
        let mut failures = Vec::new();
        for (i, &alpha) in alphas.iter().enumerate() {
            match self.renyi_sum(sys, alpha) {
                Ok(v) => renyi_sums.push(v),
                Err(e) => {
                    renyi_sums.push(f64::NAN);
                    failures.push((i, e));
                }
            }
            match self.tsallis_relation(sys, alpha) {
                Ok(r) => tsallis_gaps.push(r.gap),
                Err(e) => {
                    tsallis_gaps.push(f64::NAN);
                    failures.push((i, e));
                }
            }
        }
        let fit = |ys: &[f64]| -> f64 {
            let pts: Vec<(f64, f64)> = alphas
                .iter()
                .zip(ys)
                .skip(n_points / 2)
                .filter(|(_, y)| y.is_finite())
                .map(|(&a, &y)| (2.0 * a - 1.0, y))
                .collect();
            extrapolate_to_zero(&pts).unwrap_or(f64::NAN)
        };
        Ok(ConjectureTrace {
            system: *sys,
            extrapolated_limit: fit(&renyi_sums),
            extrapolated_gap: fit(&tsallis_gaps),
            alphas,
            renyi_sums,
            tsallis_gaps,
            target: LN_2PI,
            failures,
        })
    }
}

/// Least-squares fit of y ≈ c₀ + c₁·ε ln ε + c₂·ε; returns c₀.
pub fn extrapolate_to_zero(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 3 {
        return None;
    }
    let a = DMatrix::from_fn(points.len(), 3, |i, j| {
        let e = points[i].0;
        [1.0, e * e.ln(), e][j]
    });
    let b = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let c = a.svd(true, true).solve(&b, 1e-14).ok()?;
    Some(c[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_model() {
        let pts: Vec<(f64, f64)> =
            (3..14).map(|j| 0.5f64.powi(j)).map(|e| (e, 1.5 - 0.7 * e * e.ln() + 0.2 * e)).collect();
        assert!((extrapolate_to_zero(&pts).unwrap() - 1.5).abs() < 1e-12);
        assert!(extrapolate_to_zero(&pts[..2]).is_none());
    }

    #[test]
    fn neumann_sum_values() {
        assert!((neumann_renyi_sum(1.0).unwrap() - 2.6834).abs() < 5e-4);
        // Oracle: 30-digit adaptive quadrature of the momentum integral at β = 25.5.
        assert!((neumann_renyi_sum(0.51).unwrap() - LN_2PI - 0.067_157_058_973_294_2).abs() < 1e-9);
        assert_eq!(neumann_renyi_sum(f64::INFINITY).unwrap(), f64::INFINITY);
        assert!(neumann_renyi_sum(0.5).is_err());
        let a = neumann_renyi_sum(5.0).unwrap();
        let b = neumann_renyi_sum(20.0).unwrap();
        assert!(b > a + 1.0, "{a} {b}");
    }

    #[test]
    fn well_sides() {
        let n = SystemDescriptor::neumann_well();
        let (l, r) = tsallis_sides_well(&n, 0.5).unwrap();
        let target = (2.0 * std::f64::consts::PI).powf(-0.5);
        assert!((l - target).abs() < 1e-12 && (r - target).abs() < 1e-12);
        let (l, r) = tsallis_sides_well(&n, 0.8).unwrap();
        assert!(l > r);
        let (l, r) = tsallis_sides_well(&SystemDescriptor::dirichlet_well(1).unwrap(), 0.5).unwrap();
        assert!((l - r).abs() < 1e-4);
        assert!(tsallis_sides_well(&SystemDescriptor::robin_wall(), 0.5).is_err());
        assert!(tsallis_sides_well(&n, 1.5).is_err());
    }

    #[test]
    fn ground_states_extrapolate_to_bound() {
        let states = [
            SystemDescriptor::harmonic_oscillator(0).unwrap(),
            SystemDescriptor::robin_wall(),
            SystemDescriptor::q1d_hydrogen(1).unwrap(),
            SystemDescriptor::neumann_well(),
            SystemDescriptor::dirichlet_well(1).unwrap(),
        ];
        for sys in states {
            let tr = conjecture_scan(&sys, 12).unwrap();
            assert!(tr.failures.is_empty());
            assert!(tr.alphas.windows(2).all(|w| w[1] < w[0] && w[1] > 0.5));
            assert!(tr.renyi_deviation() < 1e-3, "{sys}: {}", tr.extrapolated_limit);
            assert!(tr.tsallis_deviation() < 1e-3, "{sys}: {}", tr.extrapolated_gap);
            assert!(tr.monotone_from(FIRST_MONOTONE_POINT), "{sys}");
        }
    }

    #[test]
    fn ho_ground_is_saturated_everywhere() {
        let tr = conjecture_scan(&SystemDescriptor::harmonic_oscillator(0).unwrap(), 10).unwrap();
        for (a, s) in tr.alphas.iter().zip(&tr.renyi_sums) {
            assert!((s - crate::uncertainty::f_bound(*a).unwrap()).abs() < 1e-9);
        }
        assert!(tr.tsallis_gaps.iter().all(|g| g.abs() < 1e-9));
    }

    #[test]
    fn excited_states_are_rejected_and_gap_grows() {
        let q2 = SystemDescriptor::q1d_hydrogen(2).unwrap();
        assert!(matches!(conjecture_scan(&q2, 8), Err(Error::Domain(_))));
        let e = Evaluator::default();
        let g1 = e.tsallis_relation(&SystemDescriptor::q1d_hydrogen(1).unwrap(), 0.5).unwrap().gap;
        let g2 = e.conjecture_scan_unchecked(&q2, 8).unwrap();
        let g2_half = e.tsallis_relation(&q2, 0.5).unwrap().gap;
        assert!(g1.abs() < 1e-9);
        assert!(g2_half > 1e-3 && g2.tsallis_deviation() > 1e-3);
    }
}
