//! Entropies of discrete distributions and their statistical mechanics:
//! additivity, Tsallis equilibria and the Rényi free-energy identity.
//! Boltzmann's constant is 1 throughout.

use crate::entropy::{EntropyKind, SHANNON_CROSSOVER};
use crate::error::{Error, Result};

/// Tolerance on Σp = 1.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Domain("a distribution needs at least one event".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Domain(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { probs })
    }

    /// Normalizes non-negative weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) || !(total > 0.0) {
            return Err(Error::Domain("weights must be finite, non-negative and not all zero".into()));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_weights(&vec![1.0; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Joint distribution of two independent events.
    pub fn product(&self, other: &Self) -> Self {
        let probs = self.probs.iter().flat_map(|p| other.probs.iter().map(move |q| p * q)).collect();
        Self { probs }
    }

    /// Σ p_n^α with 0^α = 0.
    pub fn power_sum(&self, alpha: f64) -> f64 {
        self.probs.iter().filter(|p| **p > 0.0).map(|p| p.powf(alpha)).sum()
    }
}

/// Rényi, Tsallis, Shannon or Onicescu entropy of a discrete distribution.
/// `alpha` is ignored for Shannon and Onicescu; orders within
/// [`SHANNON_CROSSOVER`] of 1 give the Shannon value.
pub fn discrete_entropy(p: &DiscreteDistribution, kind: EntropyKind, alpha: f64) -> Result<f64> {
    let shannon = || -p.probs.iter().filter(|x| **x > 0.0).map(|x| x * x.ln()).sum::<f64>();
    match kind {
        EntropyKind::Shannon => Ok(shannon()),
        EntropyKind::Onicescu => Ok(p.power_sum(2.0)),
        EntropyKind::Renyi | EntropyKind::Tsallis => {
            if alpha.is_nan() || alpha <= 0.0 {
                return Err(Error::Domain(format!("entropy order must be positive, got {alpha}")));
            }
            if (alpha - 1.0).abs() < SHANNON_CROSSOVER {
                return Ok(shannon());
            }
            if alpha == f64::INFINITY {
                let max = p.probs.iter().cloned().fold(0.0, f64::max);
                return Ok(if kind == EntropyKind::Renyi { -max.ln() } else { 0.0 });
            }
            let s = p.power_sum(alpha);
            Ok(match kind {
                EntropyKind::Renyi => s.ln() / (1.0 - alpha),
                _ => (1.0 - s) / (alpha - 1.0),
            })
        }
    }
}

/// Comparison of the joint entropy with the composition law, for each kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditivityReport {
    pub alpha: f64,
    pub renyi_joint: f64,
    pub renyi_sum: f64,
    pub tsallis_joint: f64,
    /// T_f + T_g + (1 − α)·T_f·T_g
    pub tsallis_composed: f64,
    pub shannon_joint: f64,
    pub shannon_sum: f64,
}

impl AdditivityReport {
    pub fn max_gap(&self) -> f64 {
        (self.renyi_joint - self.renyi_sum)
            .abs()
            .max((self.tsallis_joint - self.tsallis_composed).abs())
            .max((self.shannon_joint - self.shannon_sum).abs())
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max_gap() <= tol
    }
}

pub fn additivity_check(f: &DiscreteDistribution, g: &DiscreteDistribution, alpha: f64) -> Result<AdditivityReport> {
    let fg = f.product(g);
    let e = |d: &DiscreteDistribution, k| discrete_entropy(d, k, alpha);
    let (tf, tg) = (e(f, EntropyKind::Tsallis)?, e(g, EntropyKind::Tsallis)?);
    let pseudo = if (alpha - 1.0).abs() < SHANNON_CROSSOVER { 0.0 } else { (1.0 - alpha) * tf * tg };
    Ok(AdditivityReport {
        alpha,
        renyi_joint: e(&fg, EntropyKind::Renyi)?,
        renyi_sum: e(f, EntropyKind::Renyi)? + e(g, EntropyKind::Renyi)?,
        tsallis_joint: e(&fg, EntropyKind::Tsallis)?,
        tsallis_composed: tf + tg + pseudo,
        shannon_joint: e(&fg, EntropyKind::Shannon)?,
        shannon_sum: e(f, EntropyKind::Shannon)? + e(g, EntropyKind::Shannon)?,
    })
}

/// Energy levels at a temperature, both in units with k_B = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSystem {
    pub energies: Vec<f64>,
    pub temperature: f64,
}

impl LevelSystem {
    pub fn new(energies: Vec<f64>, temperature: f64) -> Result<Self> {
        if energies.is_empty() || energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::Domain("energies must be a non-empty list of finite values".into()));
        }
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::Domain(format!("temperature must be positive, got {temperature}")));
        }
        Ok(Self { energies, temperature })
    }

    pub fn at_temperature(&self, temperature: f64) -> Result<Self> {
        Self::new(self.energies.clone(), temperature)
    }

    /// ln Z = ln Σ e^{−E_n/T}
    pub fn ln_partition(&self) -> f64 {
        log_sum_exp(self.energies.iter().map(|e| -e / self.temperature))
    }

    /// Helmholtz free energy F = −T ln Z.
    pub fn free_energy(&self) -> f64 {
        -self.temperature * self.ln_partition()
    }

    pub fn gibbs(&self) -> DiscreteDistribution {
        let ln_z = self.ln_partition();
        let probs = self.energies.iter().map(|e| (-e / self.temperature - ln_z).exp()).collect();
        DiscreteDistribution { probs }
    }

    /// First-order change of the Tsallis equilibrium away from Gibbs:
    /// p_n(α) ≈ g_n + (α − 1)·c_n with
    /// c_n = −½·g_n·[(E_n/T)² − Σ_m g_m (E_m/T)²].
    pub fn gibbs_first_order_correction(&self) -> Vec<f64> {
        let g = self.gibbs();
        let x2: Vec<f64> = self.energies.iter().map(|e| (e / self.temperature).powi(2)).collect();
        let mean: f64 = g.probs.iter().zip(&x2).map(|(p, x)| p * x).sum();
        g.probs.iter().zip(&x2).map(|(p, x)| -0.5 * p * (x - mean)).collect()
    }
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.map(|x| (x - max).exp()).sum::<f64>().ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TsallisEquilibrium {
    pub distribution: DiscreteDistribution,
    /// ln of Z(α; T) = Σ [1 − (α − 1)E_n/T]^{1/(α−1)} over retained levels.
    pub ln_partition: f64,
    /// Levels whose bracket was non-positive and were given p = 0.
    pub cutoff_levels: Vec<usize>,
}

/// Equilibrium p_n ∝ [1 − (α − 1)E_n/T]^{1/(α−1)}. Levels with a
/// non-positive bracket get p_n = 0 (Tsallis cutoff). Orders within
/// [`SHANNON_CROSSOVER`] of 1 give the Gibbs distribution.
pub fn tsallis_equilibrium(ls: &LevelSystem, alpha: f64) -> Result<TsallisEquilibrium> {
    if alpha.is_nan() || alpha <= 0.0 || alpha.is_infinite() {
        return Err(Error::Domain(format!("entropy order must be positive and finite, got {alpha}")));
    }
    if (alpha - 1.0).abs() < SHANNON_CROSSOVER {
        return Ok(TsallisEquilibrium { distribution: ls.gibbs(), ln_partition: ls.ln_partition(), cutoff_levels: Vec::new() });
    }
    let d = alpha - 1.0;
    let mut cutoff_levels = Vec::new();
    let ln_w: Vec<f64> = ls
        .energies
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let bracket = 1.0 - d * e / ls.temperature;
            if bracket > 0.0 {
                bracket.ln() / d
            } else {
                cutoff_levels.push(i);
                f64::NEG_INFINITY
            }
        })
        .collect();
    let ln_z = log_sum_exp(ln_w.iter().copied());
    if ln_z == f64::NEG_INFINITY {
        return Err(Error::EmptySupport);
    }
    let probs = ln_w.iter().map(|w| (w - ln_z).exp()).collect();
    Ok(TsallisEquilibrium { distribution: DiscreteDistribution { probs }, ln_partition: ln_z, cutoff_levels })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyIdentity {
    /// Rényi entropy of order T1/T2 of the Gibbs distribution at T1.
    pub lhs: f64,
    /// −(F(T2) − F(T1))/(T2 − T1)
    pub rhs: f64,
    pub gap: f64,
}

/// R(T1/T2) of the Gibbs state at T1 against the free-energy difference quotient.
pub fn renyi_free_energy_identity(energies: &[f64], t1: f64, t2: f64) -> Result<FreeEnergyIdentity> {
    if t1 == t2 {
        return Err(Error::Domain("the two temperatures must differ".into()));
    }
    let s1 = LevelSystem::new(energies.to_vec(), t1)?;
    let s2 = s1.at_temperature(t2)?;
    let lhs = discrete_entropy(&s1.gibbs(), EntropyKind::Renyi, t1 / t2)?;
    let rhs = -(s2.free_energy() - s1.free_energy()) / (t2 - t1);
    Ok(FreeEnergyIdentity { lhs, rhs, gap: (lhs - rhs).abs() })
}
