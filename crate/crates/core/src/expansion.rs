//! Truncated asymptotic expansions of the entropies and uncertainty sums.
//!
//! An expansion is an ordered list of terms c·v^p·(ln v)^q in a small (or
//! large) variable v derived from α, largest term first.

use std::f64::consts::{LN_2, PI};

use crate::entropy::EntropyKind;
use crate::error::{Error, Result};
use crate::specfun::{EULER_GAMMA, LN_PI, ZETA3};
use crate::systems::{Family, Space, SystemDescriptor};

/// The expansion variable as a function of α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variable {
    Alpha,
    AlphaMinusOne,
    AlphaMinusThreshold(f64),
    TwoAlphaMinusOne,
    AlphaMinusHalf,
}

impl Variable {
    pub fn at(self, alpha: f64) -> f64 {
        match self {
            Variable::Alpha => alpha,
            Variable::AlphaMinusOne => alpha - 1.0,
            Variable::AlphaMinusThreshold(t) => alpha - t,
            Variable::TwoAlphaMinusOne => 2.0 * alpha - 1.0,
            Variable::AlphaMinusHalf => alpha - 0.5,
        }
    }

    /// Inverse of [`Variable::at`].
    pub fn alpha(self, v: f64) -> f64 {
        match self {
            Variable::Alpha => v,
            Variable::AlphaMinusOne => v + 1.0,
            Variable::AlphaMinusThreshold(t) => v + t,
            Variable::TwoAlphaMinusOne => 0.5 * (v + 1.0),
            Variable::AlphaMinusHalf => v + 0.5,
        }
    }
}

/// c·v^power·(ln v)^log_power
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub power: i32,
    pub log_power: u32,
}

impl Term {
    pub const fn new(coeff: f64, power: i32, log_power: u32) -> Self {
        Self { coeff, power, log_power }
    }

    pub fn eval(&self, v: f64) -> f64 {
        if self.coeff == 0.0 {
            return 0.0;
        }
        let mut x = self.coeff * v.powi(self.power);
        if self.log_power > 0 {
            x *= v.ln().powi(self.log_power as i32);
        }
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    AtZero,
    NearOne,
    AtInfinity,
    AtThreshold,
    NearHalf,
}

impl Regime {
    /// Two successive approach points in the expansion variable.
    pub fn approach_points(self) -> [f64; 2] {
        match self {
            Regime::AtZero | Regime::AtThreshold | Regime::NearHalf => [1e-2, 1e-3],
            Regime::NearOne => [0.04, 0.01],
            Regime::AtInfinity => [1e2, 1e3],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub regime: Regime,
    pub variable: Variable,
    pub terms: Vec<Term>,
}

impl Expansion {
    fn new(regime: Regime, variable: Variable, terms: Vec<Term>) -> Self {
        Self { regime, variable, terms }
    }

    /// Sum of all kept terms at order `alpha`.
    pub fn evaluate(&self, alpha: f64) -> f64 {
        let v = self.variable.at(alpha);
        self.terms.iter().map(|t| t.eval(v)).sum()
    }

    /// |exact − expansion| / |last kept term|; tends to zero when the
    /// remainder is of smaller order than the last term.
    pub fn remainder_ratio(&self, alpha: f64, exact: f64) -> f64 {
        let v = self.variable.at(alpha);
        let last = self.terms.last().map_or(1.0, |t| t.eval(v));
        (exact - self.evaluate(alpha)).abs() / last.abs()
    }

    /// Coefficient of the term with the given power and log power, if kept.
    pub fn coefficient(&self, power: i32, log_power: u32) -> Option<f64> {
        self.terms.iter().find(|t| t.power == power && t.log_power == log_power).map(|t| t.coeff)
    }
}

fn unsupported(what: &str, sys: &SystemDescriptor, space: Option<Space>, regime: Regime) -> Error {
    let space = space.map_or(String::new(), |s| format!(" in {s} space"));
    Error::NotImplemented(format!("{what} expansion for {sys}{space} at {regime:?}"))
}

const fn t(coeff: f64, power: i32, log_power: u32) -> Term {
    Term::new(coeff, power, log_power)
}

/// Expansion of the Rényi or Tsallis entropy of a state near a special order.
pub fn asymptotic_coefficients(sys: &SystemDescriptor, space: Space, kind: EntropyKind, regime: Regime) -> Result<Expansion> {
    match kind {
        EntropyKind::Renyi => renyi_expansion(sys, space, regime),
        EntropyKind::Tsallis => tsallis_expansion(sys, space, regime),
        _ => Err(Error::NotImplemented(format!("{kind} entropies have no order to expand in"))),
    }
}

fn renyi_expansion(sys: &SystemDescriptor, space: Space, regime: Regime) -> Result<Expansion> {
    use Regime::*;
    let g = EULER_GAMMA;
    let z3 = ZETA3;
    let s = sys.scale;
    let ls = match space {
        Space::Position => s.ln(),
        Space::Momentum => -s.ln(),
    };
    let n = sys.quantum_number as f64;
    let a = Variable::Alpha;
    let d = Variable::AlphaMinusOne;
    let terms = match (sys.family, space, sys.quantum_number, regime) {
        (Family::HarmonicOscillator, _, 0, AtZero) => {
            (a, vec![t(ls + 0.5 * LN_PI, 0, 0), t(-0.5, 0, 1), t(-0.5, 1, 1)])
        }
        (Family::HarmonicOscillator, _, 0, NearOne) => {
            (d, vec![t(ls + 0.5 * (1.0 + LN_PI), 0, 0), t(-0.25, 1, 0), t(1.0 / 6.0, 2, 0)])
        }
        (Family::HarmonicOscillator, _, 0, AtInfinity) => (a, vec![t(ls + 0.5 * LN_PI, 0, 0), t(0.5, -1, 1)]),
        (Family::HarmonicOscillator, _, 1, AtZero) => (
            a,
            vec![t(ls + 0.5 * LN_PI, 0, 0), t(-0.5, 0, 1), t(-1.5, 1, 1), t(-(g + LN_2), 1, 0)],
        ),
        (Family::HarmonicOscillator, _, 1, NearOne) => (
            d,
            vec![
                t(ls + LN_2 + g + 0.5 * LN_PI - 0.5, 0, 0),
                t(-(PI * PI - 9.0) / 4.0, 1, 0),
                t((7.0 * z3 - 8.0) / 3.0, 2, 0),
            ],
        ),
        (Family::HarmonicOscillator, _, 1, AtInfinity) => (
            a,
            vec![t(ls + 1.0 - LN_2 + 0.5 * LN_PI, 0, 0), t(0.5, -1, 1), t(0.5 * (2.0 - 3.0 * LN_2), -1, 0)],
        ),
        (Family::RobinWall, Space::Position, _, NearOne) => {
            (d, vec![t(ls - LN_2 + 1.0, 0, 0), t(-0.5, 1, 0), t(1.0 / 3.0, 2, 0)])
        }
        (Family::RobinWall, Space::Position, _, AtInfinity) => (a, vec![t(ls - LN_2, 0, 0), t(1.0, -1, 1)]),
        (Family::RobinWall, Space::Momentum, _, AtThreshold) => {
            (Variable::AlphaMinusThreshold(0.5), vec![t(-2.0, 0, 1), t(ls - LN_PI, 0, 0)])
        }
        (Family::RobinWall, Space::Momentum, _, NearOne) => {
            (d, vec![t(ls + (4.0 * PI).ln(), 0, 0), t(-PI * PI / 6.0, 1, 0), t(2.0 * z3, 2, 0)])
        }
        (Family::RobinWall, Space::Momentum, _, AtInfinity) => (a, vec![t(ls + LN_PI, 0, 0), t(0.5, -1, 1)]),
        (Family::Q1DHydrogen, Space::Position, 1, AtZero) => (
            a,
            vec![t(ls - LN_2, 0, 0), t(-1.0, 0, 1), t(-3.0, 1, 1), t(-(2.0 * g + LN_2), 1, 0)],
        ),
        (Family::Q1DHydrogen, Space::Position, 1, NearOne) => (
            d,
            vec![t(ls + 2.0 * g, 0, 0), t(3.0 - PI * PI / 3.0, 1, 0), t(8.0 * z3 / 3.0 - 3.0, 2, 0)],
        ),
        (Family::Q1DHydrogen, Space::Position, 1, AtInfinity) => (
            a,
            vec![t(ls + 2.0 - 2.0 * LN_2, 0, 0), t(0.5, -1, 1), t(0.5 * (4.0 - (16.0 * PI).ln()), -1, 0)],
        ),
        (Family::Q1DHydrogen, Space::Momentum, _, AtThreshold) => (
            Variable::AlphaMinusThreshold(0.25),
            vec![t(-4.0 / 3.0, 0, 1), t(ls - 4.0 / 3.0 * (0.25 * LN_PI + 0.75 * (2.0 * n).ln()), 0, 0)],
        ),
        (Family::Q1DHydrogen, Space::Momentum, _, NearOne) => (
            d,
            vec![
                t(ls - 2.0 + (8.0 * PI / n).ln(), 0, 0),
                t(6.0 - 2.0 * PI * PI / 3.0, 1, 0),
                t(16.0 * z3 - 56.0 / 3.0, 2, 0),
            ],
        ),
        (Family::Q1DHydrogen, Space::Momentum, _, AtInfinity) => (
            a,
            vec![t(ls + (PI / (2.0 * n)).ln(), 0, 0), t(0.5, -1, 1), t(0.5 * (PI / 2.0).ln(), -1, 0)],
        ),
        _ => return Err(unsupported("Rényi", sys, Some(space), regime)),
    };
    Ok(Expansion::new(regime, terms.0, terms.1))
}

fn tsallis_expansion(sys: &SystemDescriptor, space: Space, regime: Regime) -> Result<Expansion> {
    use Regime::*;
    let g = EULER_GAMMA;
    let s = sys.scale;
    let n = sys.quantum_number as f64;
    let d = Variable::AlphaMinusOne;
    let terms = match (sys.family, space, sys.quantum_number, regime) {
        (Family::HarmonicOscillator, _, 0, NearOne) => {
            let w = if space == Space::Position { s } else { 1.0 / s };
            let l = (PI.sqrt() * w).ln();
            (d, vec![t(w.ln() + 0.5 * (1.0 + LN_PI), 0, 0), t(-0.5 * (l * l + l + 0.75), 1, 0)])
        }
        (Family::RobinWall, Space::Position, _, NearOne) => {
            let l = (2.0 / s).ln();
            (d, vec![t(s.ln() - LN_2 + 1.0, 0, 0), t(-(0.5 * l * l - l + 1.0), 1, 0)])
        }
        (Family::RobinWall, Space::Momentum, _, NearOne) => {
            let ls = s.ln();
            let slope = -PI * PI / 6.0 - 2.0 * LN_2 * LN_2 - 0.5 * LN_PI * LN_PI - 2.0 * LN_PI * LN_2 - 0.5 * ls * ls
                + (4.0 * PI).ln() * ls;
            (d, vec![t(-ls + (4.0 * PI).ln(), 0, 0), t(slope, 1, 0)])
        }
        (Family::Q1DHydrogen, Space::Position, 1, AtZero) => (
            Variable::Alpha,
            vec![t(s / 2.0, -1, 0), t(-s, 0, 1), t(-1.0 - 0.5 * (2.0 * g + s.ln()) * s + s / 2.0, 0, 0)],
        ),
        (Family::Q1DHydrogen, Space::Position, 1, NearOne) => {
            let l = s.ln();
            let pi2 = PI * PI;
            let c1 = 3.0 - pi2 / 3.0 - 2.0 * g * g - 2.0 * g * l - 0.5 * l * l;
            let c2 = l.powi(3) / 6.0 + g * l * l + (2.0 * pi2 + 12.0 * g * g - 18.0) * l / 6.0 + 8.0 * ZETA3 / 3.0
                + 2.0 * g * pi2 / 3.0
                + 4.0 * g.powi(3) / 3.0
                - 6.0 * g
                - 3.0;
            (d, vec![t(l + 2.0 * g, 0, 0), t(c1, 1, 0), t(c2, 2, 0)])
        }
        (Family::Q1DHydrogen, Space::Position, 1, AtInfinity) if s >= 1.0 => {
            (Variable::Alpha, vec![t(1.0, -1, 0), t(1.0, -2, 0)])
        }
        (Family::Q1DHydrogen, Space::Momentum, _, AtThreshold) => {
            let p0 = (2.0 / (PI * n.powi(3) * s.powi(3))).powf(0.25);
            (
                Variable::AlphaMinusThreshold(0.25),
                vec![
                    t(2.0 / 3.0 * p0, -1, 0),
                    t(-4.0 / 3.0 + 2.0 / 3.0 * p0 * ((32.0 * n * s / PI).ln() + 4.0 / 3.0), 0, 0),
                ],
            )
        }
        _ => return Err(unsupported("Tsallis", sys, Some(space), regime)),
    };
    Ok(Expansion::new(regime, terms.0, terms.1))
}

/// Expansion of the Rényi uncertainty sum R_ρ(α) + R_γ(β) (scale-free).
pub fn sum_expansion(sys: &SystemDescriptor, regime: Regime) -> Result<Expansion> {
    use Regime::*;
    let g = EULER_GAMMA;
    let z3 = ZETA3;
    let pi2 = PI * PI;
    let ln2pi = (2.0 * PI).ln();
    let e = Variable::TwoAlphaMinusOne;
    let h = Variable::AlphaMinusHalf;
    let d = Variable::AlphaMinusOne;
    let a = Variable::Alpha;
    let (var, terms) = match (sys.family, sys.quantum_number, regime) {
        (Family::HarmonicOscillator, 0, NearHalf) => (e, vec![t(ln2pi, 0, 0), t(-1.0, 1, 1), t(-1.0, 1, 0)]),
        (Family::HarmonicOscillator, 0, NearOne) => {
            (d, vec![t(1.0 + LN_PI, 0, 0), t(-1.0 / 6.0, 2, 0), t(1.0 / 3.0, 3, 0)])
        }
        (Family::HarmonicOscillator, 0, AtInfinity) => {
            (a, vec![t(ln2pi, 0, 0), t(0.5, -1, 1), t(0.5 * (LN_2 - 1.0), -1, 0)])
        }
        (Family::HarmonicOscillator, 1, NearHalf) => {
            (h, vec![t(1.0 + 2.0 * LN_2, 0, 0), t(-2.0, 1, 1), t(-2.0 * (g + LN_PI), 1, 0)])
        }
        (Family::HarmonicOscillator, 1, NearOne) => (
            d,
            vec![t(2.0 * g - 1.0 + (4.0 * PI).ln(), 0, 0), t(14.0 * z3 / 3.0 - pi2 / 2.0 - 5.0 / 6.0, 2, 0)],
        ),
        (Family::HarmonicOscillator, 1, AtInfinity) => (
            a,
            vec![t(1.0 + 2.0 * LN_2, 0, 0), t(0.5, -1, 1), t(0.5 * ((4.0 / PI).ln() - g), -1, 0)],
        ),
        (Family::RobinWall, _, NearHalf) => (e, vec![t(ln2pi, 0, 0), t(-1.0, 1, 1), t(ln2pi - 2.0, 1, 0)]),
        (Family::RobinWall, _, NearOne) => (
            d,
            vec![t(1.0 + LN_PI + LN_2, 0, 0), t(pi2 / 6.0 - 0.5, 1, 0), t(1.0 / 3.0 + 2.0 * z3 - pi2 / 3.0, 2, 0)],
        ),
        (Family::RobinWall, _, AtInfinity) => {
            let c = (8.0 / PI).ln();
            (a, vec![t(2.0, 0, 1), t(c, 0, 0), t(2.0, -1, 1), t(c - 1.0, -1, 0)])
        }
        (Family::Q1DHydrogen, 1, NearHalf) => {
            (e, vec![t(ln2pi, 0, 0), t(-1.0, 1, 1), t((4.0 * PI).ln() - 2.0 - 2.0 * g, 1, 0)])
        }
        (Family::Q1DHydrogen, 1, NearOne) => (
            d,
            vec![
                t(-2.0 + 2.0 * g + (8.0 * PI).ln(), 0, 0),
                t(pi2 / 3.0 - 3.0, 1, 0),
                t(-4.0 * pi2 / 3.0 + 56.0 * z3 / 3.0 - 29.0 / 3.0, 2, 0),
            ],
        ),
        (Family::Q1DHydrogen, 1, AtInfinity) => (
            a,
            vec![t(2.0 + (PI / 2.0).ln(), 0, 0), t(0.5, -1, 1), t(2.0 - 3.0 * LN_2 - 0.5 * LN_PI, -1, 0)],
        ),
        _ => return Err(unsupported("Rényi-sum", sys, None, regime)),
    };
    Ok(Expansion::new(regime, var, terms))
}

/// Expansions of the two sides of the Tsallis relation at unit scale,
/// returned as (lhs, rhs).
pub fn sides_expansion(sys: &SystemDescriptor, regime: Regime) -> Result<(Expansion, Expansion)> {
    use Regime::*;
    if sys.scale != 1.0 {
        return Err(unsupported("Tsallis-sides (non-unit scale)", sys, None, regime));
    }
    let g = EULER_GAMMA;
    let q = PI.powf(-0.25);
    let d = Variable::AlphaMinusOne;
    let h = Variable::AlphaMinusHalf;
    let lin = |var, c0: f64, c1: f64| Expansion::new(regime, var, vec![t(c0, 0, 0), t(c0 * c1, 1, 0)]);
    let pair = match (sys.family, sys.quantum_number, regime) {
        (Family::HarmonicOscillator, 1, NearOne) => {
            let c = 0.5 * (g - 1.0 + LN_2);
            (lin(d, q, -c), lin(d, q, c))
        }
        (Family::RobinWall, _, NearOne) => {
            (lin(d, q, 0.25 * ((4.0 * PI).ln() - 1.0)), lin(d, q, 0.25 * ((16.0 * PI).ln() - 1.0)))
        }
        (Family::RobinWall, _, NearHalf) => {
            let c0 = PI.powf(-0.5);
            (lin(h, c0, (2.0 * PI).ln() - 1.0), Expansion::new(regime, h, vec![t(c0, 0, 0), t(3.0 * c0, 2, 0)]))
        }
        (Family::Q1DHydrogen, 1, NearHalf) => {
            let c0 = (2.0 / PI).sqrt();
            (lin(h, c0, -(2.0 * g + 1.0 - (2.0 * PI).ln())), lin(h, c0, -LN_2))
        }
        (Family::Q1DHydrogen, 1, NearOne) => {
            (lin(d, q, 0.25 * (1.0 - 4.0 * g + LN_PI)), lin(d, q, 0.25 * ((64.0 * PI).ln() - 5.0)))
        }
        _ => return Err(unsupported("Tsallis-sides", sys, None, regime)),
    };
    Ok(pair)
}
