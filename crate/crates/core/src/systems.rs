//! The five model quantum systems: probability densities in position and
//! momentum space, energies, and uncertainty moments.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature::{Integrator, Interval, QuadratureResult};
use crate::specfun::{hermite, laguerre_gen, ln_gamma, MAX_DEGREE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    HarmonicOscillator,
    RobinWall,
    Q1DHydrogen,
    NeumannWell,
    DirichletWell,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::HarmonicOscillator,
        Family::RobinWall,
        Family::Q1DHydrogen,
        Family::NeumannWell,
        Family::DirichletWell,
    ];

    /// Short name used on the command line and in tables.
    pub fn short_name(self) -> &'static str {
        match self {
            Family::HarmonicOscillator => "ho",
            Family::RobinWall => "robin",
            Family::Q1DHydrogen => "q1d",
            Family::NeumannWell => "neumann",
            Family::DirichletWell => "dirichlet",
        }
    }

    fn quantum_numbers(self) -> (u32, u32) {
        match self {
            Family::HarmonicOscillator => (0, MAX_DEGREE),
            Family::RobinWall | Family::NeumannWell => (0, 0),
            Family::Q1DHydrogen => (1, MAX_DEGREE + 1),
            Family::DirichletWell => (1, MAX_DEGREE),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.short_name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown system '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    Position,
    Momentum,
}

impl Space {
    pub const BOTH: [Space; 2] = [Space::Position, Space::Momentum];

    pub fn name(self) -> &'static str {
        match self {
            Space::Position => "position",
            Space::Momentum => "momentum",
        }
    }

    pub fn dual(self) -> Space {
        match self {
            Space::Position => Space::Momentum,
            Space::Momentum => Space::Position,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "position" | "x" => Ok(Space::Position),
            "momentum" | "k" | "p" => Ok(Space::Momentum),
            _ => Err(Error::Domain(format!("unknown space '{s}'"))),
        }
    }
}

/// A single stationary state of one of the model systems.
///
/// `scale` is the natural length of the system: the oscillator length for
/// the harmonic oscillator, |Λ| for the Robin wall, the Bohr-like radius x₀
/// for the hydrogen model and the width a for the wells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemDescriptor {
    pub family: Family,
    pub quantum_number: u32,
    pub scale: f64,
}

impl fmt::Display for SystemDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.family, self.quantum_number)?;
        if self.scale != 1.0 {
            write!(f, " scale={}", self.scale)?;
        }
        Ok(())
    }
}

/// Integration recipe for functionals of a density.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraturePlan {
    /// Pieces covering the support (the non-negative half when `mirror`).
    pub pieces: Vec<Interval>,
    /// Oscillatory tail beyond the last piece: (start, period).
    pub tail: Option<(f64, f64)>,
    /// The density is even; integrate over x ≥ 0 and double.
    pub mirror: bool,
}

impl SystemDescriptor {
    pub fn new(family: Family, quantum_number: u32, scale: f64) -> Result<Self> {
        let (lo, hi) = family.quantum_numbers();
        if quantum_number < lo || quantum_number > hi {
            return Err(Error::Domain(format!("{family} supports quantum numbers {lo}..={hi}, got {quantum_number}")));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Domain(format!("scale must be positive and finite, got {scale}")));
        }
        Ok(Self { family, quantum_number, scale })
    }

    pub fn harmonic_oscillator(n: u32) -> Result<Self> {
        Self::new(Family::HarmonicOscillator, n, 1.0)
    }

    pub fn robin_wall() -> Self {
        Self { family: Family::RobinWall, quantum_number: 0, scale: 1.0 }
    }

    pub fn q1d_hydrogen(n: u32) -> Result<Self> {
        Self::new(Family::Q1DHydrogen, n, 1.0)
    }

    pub fn neumann_well() -> Self {
        Self { family: Family::NeumannWell, quantum_number: 0, scale: 1.0 }
    }

    pub fn dirichlet_well(n: u32) -> Result<Self> {
        Self::new(Family::DirichletWell, n, 1.0)
    }

    pub fn with_scale(self, scale: f64) -> Result<Self> {
        Self::new(self.family, self.quantum_number, scale)
    }

    pub fn is_ground_state(&self) -> bool {
        self.quantum_number == self.family.quantum_numbers().0
    }

    /// Probability density at `point`; zero outside the support.
    pub fn density(&self, space: Space, point: f64) -> f64 {
        let s = self.scale;
        let n = self.quantum_number;
        match (self.family, space) {
            (Family::HarmonicOscillator, Space::Position) => ho_unit_density(n, point / s) / s,
            (Family::HarmonicOscillator, Space::Momentum) => s * ho_unit_density(n, s * point),
            (Family::RobinWall, Space::Position) => {
                if point < 0.0 {
                    0.0
                } else {
                    2.0 / s * (-2.0 * point / s).exp()
                }
            }
            (Family::RobinWall, Space::Momentum) => {
                let z = s * point;
                s / PI / (1.0 + z * z)
            }
            (Family::Q1DHydrogen, Space::Position) => {
                if point < 0.0 {
                    0.0
                } else {
                    q1d_unit_density(n, point / s) / s
                }
            }
            (Family::Q1DHydrogen, Space::Momentum) => {
                let nf = n as f64;
                let z = nf * s * point;
                let d = 1.0 + z * z;
                2.0 * nf * s / PI / (d * d)
            }
            (Family::NeumannWell, Space::Position) => {
                if point.abs() <= 0.5 * s {
                    1.0 / s
                } else {
                    0.0
                }
            }
            (Family::NeumannWell, Space::Momentum) => {
                let c = sinc(0.5 * s * point);
                s / (2.0 * PI) * c * c
            }
            (Family::DirichletWell, Space::Position) => {
                if point.abs() <= 0.5 * s {
                    let v = (n as f64 * PI * (point / s + 0.5)).sin();
                    2.0 / s * v * v
                } else {
                    0.0
                }
            }
            (Family::DirichletWell, Space::Momentum) => {
                let npi = n as f64 * PI;
                let z = (s * point).abs();
                let c = sinc(0.5 * (z - npi));
                let d = npi + z;
                s * npi * n as f64 * c * c / (d * d)
            }
        }
    }

    /// Energy in the natural units of each family: ħω for the oscillator,
    /// ħ²/(m·scale²) for the wall and the wells, mλ²/ħ² for the hydrogen
    /// model.
    pub fn energy(&self) -> f64 {
        let n = self.quantum_number as f64;
        match self.family {
            Family::HarmonicOscillator => n + 0.5,
            Family::RobinWall => -0.5,
            Family::Q1DHydrogen => -0.5 / (n * n),
            Family::NeumannWell => 0.0,
            Family::DirichletWell => 0.5 * PI * PI * n * n,
        }
    }

    /// Supremum of the density, in closed form where available.
    pub fn sup_density(&self, space: Space) -> f64 {
        let s = self.scale;
        let n = self.quantum_number;
        match (self.family, space) {
            (Family::HarmonicOscillator, Space::Position) if n == 0 => 1.0 / (s * PI.sqrt()),
            (Family::HarmonicOscillator, Space::Momentum) if n == 0 => s / PI.sqrt(),
            (Family::HarmonicOscillator, Space::Position) if n == 1 => 2.0 / (s * std::f64::consts::E * PI.sqrt()),
            (Family::HarmonicOscillator, Space::Momentum) if n == 1 => 2.0 * s / (std::f64::consts::E * PI.sqrt()),
            (Family::RobinWall, Space::Position) => 2.0 / s,
            (Family::RobinWall, Space::Momentum) => s / PI,
            (Family::Q1DHydrogen, Space::Position) if n == 1 => 4.0 / (std::f64::consts::E.powi(2) * s),
            (Family::Q1DHydrogen, Space::Momentum) => 2.0 * n as f64 * s / PI,
            (Family::NeumannWell, Space::Position) => 1.0 / s,
            (Family::NeumannWell, Space::Momentum) => s / (2.0 * PI),
            (Family::DirichletWell, Space::Position) => 2.0 / s,
            (Family::DirichletWell, Space::Momentum) if n == 1 => 4.0 * s / PI.powi(3),
            _ => self.numeric_sup(space),
        }
    }

    fn numeric_sup(&self, space: Space) -> f64 {
        let plan = self.plan(space);
        let lo = plan.pieces.first().map_or(0.0, |p| p.lower);
        let hi = plan.pieces.iter().map(|p| p.upper).filter(|u| u.is_finite()).fold(lo, f64::max);
        let f = |x: f64| self.density(space, x);
        let steps = 4000;
        let h = (hi - lo) / steps as f64;
        let mut best = (lo, f(lo));
        for i in 1..=steps {
            let x = lo + i as f64 * h;
            let v = f(x);
            if v > best.1 {
                best = (x, v);
            }
        }
        let (mut a, mut b) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        while b - a > 1e-13 * (1.0 + best.0.abs()) {
            if f(c) > f(d) {
                b = d;
            } else {
                a = c;
            }
            c = b - g * (b - a);
            d = a + g * (b - a);
        }
        f(0.5 * (a + b)).max(best.1)
    }

    /// Integration pieces for functionals of the density in `space`.
    pub fn plan(&self, space: Space) -> QuadraturePlan {
        let s = self.scale;
        let n = self.quantum_number as f64;
        let iv = |a: f64, b: f64| Interval { lower: a, upper: b };
        let scaled = |breaks: &[f64], factor: f64, open: bool| -> Vec<Interval> {
            let mut v: Vec<Interval> = breaks.windows(2).map(|w| iv(w[0] * factor, w[1] * factor)).collect();
            if open {
                v.push(Interval::half_line(breaks[breaks.len() - 1] * factor));
            }
            v
        };
        match (self.family, space) {
            (Family::HarmonicOscillator, _) => {
                let factor = if space == Space::Position { s } else { 1.0 / s };
                let reach = (2.0 * n + 1.0).sqrt() + 2.0;
                let count = (2.0 * reach).ceil() as usize;
                let breaks: Vec<f64> = (0..=count).map(|i| i as f64 * reach / count as f64).collect();
                QuadraturePlan { pieces: scaled(&breaks, factor, true), tail: None, mirror: true }
            }
            (Family::RobinWall, Space::Position) => {
                QuadraturePlan { pieces: scaled(&[0.0, 0.5, 2.0], s, true), tail: None, mirror: false }
            }
            (Family::RobinWall, Space::Momentum) => {
                QuadraturePlan { pieces: scaled(&[0.0, 1.0], 1.0 / s, true), tail: None, mirror: true }
            }
            (Family::Q1DHydrogen, Space::Position) => {
                let reach = 4.0 * n * n + 4.0;
                let count = 8 * self.quantum_number as usize;
                let breaks: Vec<f64> = (0..=count).map(|i| i as f64 * reach / count as f64).collect();
                QuadraturePlan { pieces: scaled(&breaks, s, true), tail: None, mirror: false }
            }
            (Family::Q1DHydrogen, Space::Momentum) => {
                QuadraturePlan { pieces: scaled(&[0.0, 1.0 / n], 1.0 / s, true), tail: None, mirror: true }
            }
            (Family::NeumannWell | Family::DirichletWell, Space::Position) => {
                let count = self.quantum_number.max(1) as usize;
                let breaks: Vec<f64> = (0..=count).map(|i| 0.5 * i as f64 / count as f64).collect();
                QuadraturePlan { pieces: scaled(&breaks, s, false), tail: None, mirror: true }
            }
            (Family::NeumannWell, Space::Momentum) => QuadraturePlan {
                pieces: scaled(&[0.0, PI, 2.0 * PI], 1.0 / s, false),
                tail: Some((2.0 * PI / s, 2.0 * PI / s)),
                mirror: true,
            },
            (Family::DirichletWell, Space::Momentum) => {
                let last = self.quantum_number as usize + 2;
                let breaks: Vec<f64> = (0..=last).map(|i| i as f64 * PI).collect();
                QuadraturePlan {
                    pieces: scaled(&breaks, 1.0 / s, false),
                    tail: Some((last as f64 * PI / s, 2.0 * PI / s)),
                    mirror: true,
                }
            }
        }
    }

    /// Integrate `g(point, density(point))` over the whole support.
    ///
    /// When the plan mirrors, `g` must be even in `point`.
    pub fn integrate_functional<G>(&self, space: Space, integrator: &Integrator, g: G) -> Result<QuadratureResult>
    where
        G: Fn(f64, f64) -> f64,
    {
        let plan = self.plan(space);
        let f = |x: f64| g(x, self.density(space, x));
        let mut total = integrator.integrate_pieces(f, &plan.pieces)?;
        if let Some((start, period)) = plan.tail {
            let tail = integrator.integrate_oscillatory_tail(f, period, start)?;
            total.value += tail.value;
            total.abs_error_estimate += tail.abs_error_estimate;
            total.subdivisions += tail.subdivisions;
        }
        if plan.mirror {
            total.value *= 2.0;
            total.abs_error_estimate *= 2.0;
        }
        Ok(total)
    }

    /// ⟨point⟩ for the density in `space`.
    pub fn mean(&self, space: Space, integrator: &Integrator) -> Result<f64> {
        if self.plan(space).mirror {
            return Ok(0.0);
        }
        Ok(self.integrate_functional(space, integrator, |x, d| x * d)?.value)
    }

    /// Standard deviation of the density in `space`; `f64::INFINITY` marks a
    /// divergent second moment.
    pub fn deviation(&self, space: Space, integrator: &Integrator) -> Result<f64> {
        if self.second_moment_diverges(space, integrator)? {
            return Ok(f64::INFINITY);
        }
        let m2 = self.integrate_functional(space, integrator, |x, d| x * x * d)?.value;
        let m1 = self.mean(space, integrator)?;
        Ok((m2 - m1 * m1).max(0.0).sqrt())
    }

    /// Compares the second-moment contributions of the decades
    /// [10⁴, 10⁵] and [10⁵, 10⁶] (in units of the natural scale): a ratio
    /// above 0.9 means the moment does not settle.
    fn second_moment_diverges(&self, space: Space, integrator: &Integrator) -> Result<bool> {
        let plan = self.plan(space);
        let last = plan.pieces.last().expect("plan has pieces");
        if last.upper.is_finite() && plan.tail.is_none() {
            return Ok(false);
        }
        let unit = match space {
            Space::Position => self.scale,
            Space::Momentum => 1.0 / self.scale,
        };
        let f = |x: f64| x * x * self.density(space, x);
        let coarse = Integrator { rel_tol: 1e-6, abs_tol: 0.0, max_subdivisions: integrator.max_subdivisions };
        let decade = |lo: f64, hi: f64| -> Result<f64> {
            match plan.tail {
                Some((start, period)) => {
                    let first = ((lo - start) / period).ceil().max(0.0) as usize;
                    let count = ((hi - lo) / period).floor() as usize;
                    let mut sum = 0.0;
                    for m in first..first + count {
                        let a = start + m as f64 * period;
                        sum += integrate_or_estimate(&coarse, &f, Interval { lower: a, upper: a + period })?;
                    }
                    Ok(sum)
                }
                None => integrate_or_estimate(&coarse, &f, Interval { lower: lo, upper: hi }),
            }
        };
        let d4 = decade(1e4 * unit, 1e5 * unit)?;
        let d5 = decade(1e5 * unit, 1e6 * unit)?;
        if d5.abs() <= 1e-12 {
            return Ok(false);
        }
        Ok(d5 / d4 > 0.9)
    }

    /// Momentum variance from the wavefunction, −∫ψψ″ − (∫ψ(−iψ′))², for
    /// the states whose wavefunction is coded here.
    pub fn operator_momentum_variance(&self, integrator: &Integrator) -> Result<f64> {
        match self.family {
            Family::NeumannWell => Ok(0.0),
            Family::HarmonicOscillator => {
                let n = self.quantum_number;
                let norm = ho_log_norm(n);
                let nf = n as f64;
                let integrand = |x: f64| -> f64 {
                    if x.abs() > 50.0 {
                        return 0.0;
                    }
                    let h = hermite(n, x);
                    let h1 = if n >= 1 { 2.0 * nf * hermite(n - 1, x) } else { 0.0 };
                    let h2 = if n >= 2 { 4.0 * nf * (nf - 1.0) * hermite(n - 2, x) } else { 0.0 };
                    let w = (norm - x * x).exp();
                    -w * h * (h2 - 2.0 * x * h1 + (x * x - 1.0) * h)
                };
                let reach = (2.0 * nf + 1.0).sqrt() + 8.0;
                let r = integrator.integrate(integrand, Interval { lower: -reach, upper: reach })?;
                Ok(r.value / (self.scale * self.scale))
            }
            _ => Err(Error::NotImplemented(format!("operator momentum variance for {}", self.family))),
        }
    }
}

fn integrate_or_estimate<F: Fn(f64) -> f64>(integ: &Integrator, f: &F, iv: Interval) -> Result<f64> {
    match integ.integrate(f, iv) {
        Ok(r) => Ok(r.value),
        Err(Error::NonConvergent { estimate, .. }) => Ok(estimate),
        Err(e) => Err(e),
    }
}

/// sin(x)/x
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// ln of 1/(2ⁿ n! √π), the squared normalisation of the oscillator states.
fn ho_log_norm(n: u32) -> f64 {
    let nf = n as f64;
    -(nf * std::f64::consts::LN_2 + ln_gamma(nf + 1.0).expect("positive argument") + 0.5 * PI.ln())
}

fn ho_unit_density(n: u32, xi: f64) -> f64 {
    if xi.abs() > 50.0 {
        return 0.0;
    }
    let h = hermite(n, xi);
    (ho_log_norm(n) - xi * xi).exp() * h * h
}

fn q1d_unit_density(n: u32, xi: f64) -> f64 {
    let nf = n as f64;
    let t = xi / nf;
    if t > 700.0 {
        return 0.0;
    }
    let psi = 2.0 * xi / nf.powf(2.5) * (-t).exp() * laguerre_gen(n - 1, 1.0, 2.0 * t);
    psi * psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_states(max_n: u32) -> Vec<SystemDescriptor> {
        let mut v = vec![SystemDescriptor::robin_wall(), SystemDescriptor::neumann_well()];
        for n in 0..=max_n {
            v.push(SystemDescriptor::harmonic_oscillator(n).unwrap());
        }
        for n in 1..=max_n {
            v.push(SystemDescriptor::q1d_hydrogen(n).unwrap());
            v.push(SystemDescriptor::dirichlet_well(n).unwrap());
        }
        v
    }

    fn tight() -> Integrator {
        Integrator::with_rel_tol(1e-12)
    }

    #[test]
    fn densities_are_normalized() {
        for sys in all_states(5) {
            for space in Space::BOTH {
                let r = sys.integrate_functional(space, &tight(), |_, d| d).unwrap();
                assert!((r.value - 1.0).abs() < 1e-10, "{sys} {space}: {}", r.value);
            }
        }
    }

    #[test]
    fn scaled_densities_are_normalized() {
        for sys in all_states(2) {
            let sys = sys.with_scale(2.7).unwrap();
            for space in Space::BOTH {
                let r = sys.integrate_functional(space, &tight(), |_, d| d).unwrap();
                assert!((r.value - 1.0).abs() < 1e-10, "{sys} {space}: {}", r.value);
            }
        }
    }

    #[test]
    fn ho_ground_density_at_origin() {
        let sys = SystemDescriptor::harmonic_oscillator(0).unwrap();
        assert!((sys.density(Space::Position, 0.0) - PI.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn robin_densities() {
        let sys = SystemDescriptor::robin_wall();
        assert!((sys.density(Space::Position, 0.0) - 2.0).abs() < 1e-15);
        assert_eq!(sys.density(Space::Position, -0.1), 0.0);
        assert!((sys.density(Space::Momentum, 0.0) - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn q1d_ground_peaks_at_one() {
        let sys = SystemDescriptor::q1d_hydrogen(1).unwrap();
        let h = 1e-5;
        let d = |x| sys.density(Space::Position, x);
        assert!(d(1.0) > d(1.0 - h) && d(1.0) > d(1.0 + h));
        assert!((d(1.0) - 4.0 * (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn well_position_support() {
        let sys = SystemDescriptor::neumann_well();
        assert_eq!(sys.density(Space::Position, 0.6), 0.0);
        assert_eq!(sys.density(Space::Position, 0.2), 1.0);
        let d = SystemDescriptor::dirichlet_well(1).unwrap();
        assert!(d.density(Space::Position, 0.5).abs() < 1e-30);
        assert!((d.density(Space::Position, 0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_momentum_matches_textbook_form() {
        // 4πn² a cos²(z/2)/(n²π² − z²)² for odd n, sin² for even n.
        for n in 1..=4u32 {
            let sys = SystemDescriptor::dirichlet_well(n).unwrap();
            for &z in &[0.0, 0.7, 2.5, 9.0, 31.0] {
                let nf = n as f64;
                if (z - nf * PI).abs() < 1e-3 {
                    continue;
                }
                let trig = if n % 2 == 1 { (0.5 * z).cos() } else { (0.5 * z).sin() };
                let want = 4.0 * PI * nf * nf * trig * trig / (nf * nf * PI * PI - z * z).powi(2);
                assert!((sys.density(Space::Momentum, z) - want).abs() < 1e-14 * want.max(1e-3));
            }
        }
    }

    #[test]
    fn sup_closed_forms_match_numeric() {
        for sys in all_states(3) {
            for space in Space::BOTH {
                let closed = sys.sup_density(space);
                let numeric = sys.numeric_sup(space);
                assert!((closed - numeric).abs() < 1e-10 * closed, "{sys} {space}: {closed} vs {numeric}");
            }
        }
    }

    #[test]
    fn energies() {
        assert_eq!(SystemDescriptor::harmonic_oscillator(3).unwrap().energy(), 3.5);
        assert_eq!(SystemDescriptor::q1d_hydrogen(2).unwrap().energy(), -0.125);
        assert_eq!(SystemDescriptor::robin_wall().energy(), -0.5);
    }

    #[test]
    fn ho_deviations() {
        for n in 0..4 {
            let sys = SystemDescriptor::harmonic_oscillator(n).unwrap();
            let want = (n as f64 + 0.5).sqrt();
            for space in Space::BOTH {
                let dev = sys.deviation(space, &tight()).unwrap();
                assert!((dev - want).abs() < 1e-9, "n = {n} {space}: {dev}");
            }
        }
    }

    #[test]
    fn divergent_momentum_moments() {
        let it = Integrator::default();
        assert_eq!(SystemDescriptor::robin_wall().deviation(Space::Momentum, &it).unwrap(), f64::INFINITY);
        assert_eq!(SystemDescriptor::neumann_well().deviation(Space::Momentum, &it).unwrap(), f64::INFINITY);
    }

    #[test]
    fn finite_momentum_moments() {
        let it = tight();
        let q = SystemDescriptor::q1d_hydrogen(2).unwrap();
        assert!((q.deviation(Space::Momentum, &it).unwrap() - 0.5).abs() < 1e-9);
        let d = SystemDescriptor::dirichlet_well(1).unwrap();
        assert!((d.deviation(Space::Momentum, &it).unwrap() - PI).abs() < 1e-8);
    }

    #[test]
    fn position_deviations() {
        let it = tight();
        // Robin: exponential of mean s/2, deviation s/2.
        assert!((SystemDescriptor::robin_wall().deviation(Space::Position, &it).unwrap() - 0.5).abs() < 1e-10);
        // Neumann: uniform on a unit interval.
        assert!((SystemDescriptor::neumann_well().deviation(Space::Position, &it).unwrap() - (1.0f64 / 12.0).sqrt()).abs() < 1e-10);
        // Q1D n = 1: ⟨x⟩ = 3/2, ⟨x²⟩ = 3.
        assert!((SystemDescriptor::q1d_hydrogen(1).unwrap().deviation(Space::Position, &it).unwrap() - 0.75f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn operator_variance() {
        let it = tight();
        for n in 0..5 {
            let sys = SystemDescriptor::harmonic_oscillator(n).unwrap().with_scale(1.3).unwrap();
            let v = sys.operator_momentum_variance(&it).unwrap();
            assert!((v - (n as f64 + 0.5) / 1.69).abs() < 1e-10);
        }
        assert_eq!(SystemDescriptor::neumann_well().operator_momentum_variance(&it).unwrap(), 0.0);
        assert!(matches!(
            SystemDescriptor::robin_wall().operator_momentum_variance(&it),
            Err(Error::NotImplemented(_))
        ));
    }

    #[test]
    fn descriptor_validation() {
        assert!(SystemDescriptor::q1d_hydrogen(0).is_err());
        assert!(SystemDescriptor::new(Family::RobinWall, 1, 1.0).is_err());
        assert!(SystemDescriptor::new(Family::NeumannWell, 1, 1.0).is_err());
        assert!(SystemDescriptor::harmonic_oscillator(2).unwrap().with_scale(0.0).is_err());
        assert_eq!("Q1D".parse::<Family>().unwrap(), Family::Q1DHydrogen);
        assert!("foo".parse::<Family>().is_err());
    }

    proptest! {
        #[test]
        fn ho_mirror_symmetry(n in 0u32..8, x in -6.0f64..6.0) {
            let sys = SystemDescriptor::harmonic_oscillator(n).unwrap();
            prop_assert_eq!(sys.density(Space::Position, x), sys.density(Space::Position, -x));
        }

        #[test]
        fn ho_momentum_is_rescaled_position(n in 0u32..6, s in 0.3f64..3.0, k in -4.0f64..4.0) {
            let sys = SystemDescriptor::harmonic_oscillator(n).unwrap().with_scale(s).unwrap();
            let lhs = sys.density(Space::Momentum, k);
            let rhs = s * s * sys.density(Space::Position, s * s * k);
            prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1e-300));
        }

        #[test]
        fn scale_covariance(s in 0.2f64..5.0, x in 0.0f64..3.0) {
            for base in [SystemDescriptor::robin_wall(), SystemDescriptor::q1d_hydrogen(2).unwrap()] {
                let scaled = base.with_scale(s).unwrap();
                let lhs = scaled.density(Space::Position, x);
                let rhs = base.density(Space::Position, x / s) / s;
                prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs().max(1e-300));
            }
        }
    }
}
