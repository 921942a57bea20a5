//! Catalogue of acceptance criteria with their tolerances.
//!
//! Each criterion runs a set of checks and reports one pass/fail line plus
//! details. Targets are the closed-form values; where a published decimal
//! differs from its own formula, the decimal is printed as a note and the
//! leading digits it shares with the formula are checked instead.

use std::f64::consts::{E, LN_2, PI};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conjecture::{neumann_renyi_sum_with, tsallis_sides_well_with};
use crate::entropy::{asymptotic_coefficients, threshold, Divergence, EntropyKind, Evaluator, Method, Regime};
use crate::error::{Error, Result};
use crate::expansion::{sides_expansion, sum_expansion, Expansion};
use crate::specfun::{EULER_GAMMA, LN_2PI, LN_PI};
use crate::systems::{Space, SystemDescriptor};
use crate::thermo::{additivity_check, renyi_free_energy_identity, tsallis_equilibrium, DiscreteDistribution, LevelSystem};
use crate::uncertainty::SumMaximum;

/// (id, title) for every criterion.
pub const CRITERIA: [(u32, &str); 13] = [
    (1, "HO ground-state constants"),
    (2, "HO first excited constants"),
    (3, "HO ground-state saturation"),
    (4, "HO first excited Renyi-sum endpoints"),
    (5, "HO first excited Tsallis sides"),
    (6, "Robin wall"),
    (7, "Q1D hydrogen"),
    (8, "Q1D Tsallis sides"),
    (9, "Neumann well"),
    (10, "Dirichlet ground conjecture"),
    (11, "Dual-path oracle suite"),
    (12, "Asymptotic-expansion suite"),
    (13, "Thermo suite"),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    /// |value − target| ≤ tol
    Value { value: f64, target: f64, tol: f64 },
    Flag(bool),
    /// Informational; never fails.
    Note,
    /// The computation itself failed.
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub outcome: Outcome,
}

impl Check {
    pub fn passed(&self) -> bool {
        match &self.outcome {
            Outcome::Value { value, target, tol } => (value - target).abs() <= *tol,
            Outcome::Flag(ok) => *ok,
            Outcome::Note => true,
            Outcome::Failed(_) => false,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (&self.outcome, self.passed()) {
            (Outcome::Note, _) => "note",
            (_, true) => "ok",
            (_, false) => "FAIL",
        };
        match &self.outcome {
            Outcome::Value { value, target, tol } => write!(
                f,
                "{tag:<4} {}: {value:.12} (target {target:.12}, |diff| {:.2e}, tol {tol:.0e})",
                self.label,
                (value - target).abs()
            ),
            Outcome::Failed(msg) => write!(f, "{tag:<4} {}: error: {msg}", self.label),
            _ => write!(f, "{tag:<4} {}", self.label),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn summary_line(&self) -> String {
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!("{status} criterion {:>2}: {} ({} checks, {failed} failed)", self.id, self.title, self.checks.len())
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        for c in &self.checks {
            writeln!(f, "    {c}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn value(&mut self, label: impl Into<String>, r: Result<f64>, target: f64, tol: f64) {
        let outcome = match r {
            Ok(value) => Outcome::Value { value, target, tol },
            Err(e) => Outcome::Failed(e.to_string()),
        };
        self.0.push(Check { label: label.into(), outcome });
    }

    fn flag(&mut self, label: impl Into<String>, r: Result<bool>) {
        let outcome = match r {
            Ok(ok) => Outcome::Flag(ok),
            Err(e) => Outcome::Failed(e.to_string()),
        };
        self.0.push(Check { label: label.into(), outcome });
    }

    fn note(&mut self, label: impl Into<String>) {
        self.0.push(Check { label: label.into(), outcome: Outcome::Note });
    }

    /// Notes a published decimal and checks the digits it shares with the formula.
    fn published(&mut self, what: &str, value: Result<f64>, decimal: f64, digits: &str) {
        if let Ok(v) = value {
            self.note(format!("{what}: published decimal {decimal} differs by {:.2e}", (v - decimal).abs()));
            let shown = format!("{v:.12}");
            self.flag(format!("{what}: leading digits {digits}"), Ok(shown.starts_with(digits)));
        }
    }
}

fn ho(n: u32) -> SystemDescriptor {
    SystemDescriptor::harmonic_oscillator(n).expect("valid oscillator level")
}

fn q1d(n: u32) -> SystemDescriptor {
    SystemDescriptor::q1d_hydrogen(n).expect("valid hydrogen level")
}

fn value(r: Result<crate::entropy::EntropyResult>) -> Result<f64> {
    r.map(|e| e.value)
}

/// Runs one criterion.
pub fn run_criterion(eval: &Evaluator, id: u32) -> Result<CriterionReport> {
    let title = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Domain(format!("no acceptance criterion {id}")))?;
    let mut c = Checks::default();
    match id {
        1 => ho_ground_constants(eval, &mut c),
        2 => ho_excited_constants(eval, &mut c),
        3 => ho_saturation(eval, &mut c),
        4 => ho_sum_endpoints(eval, &mut c),
        5 => ho_tsallis_sides(eval, &mut c),
        6 => robin(eval, &mut c),
        7 => hydrogen(eval, &mut c),
        8 => hydrogen_tsallis(eval, &mut c),
        9 => neumann(eval, &mut c),
        10 => dirichlet(eval, &mut c),
        11 => dual_path(eval, &mut c),
        12 => expansions(eval, &mut c),
        _ => thermo(&mut c),
    }
    Ok(CriterionReport { id, title, checks: c.0 })
}

pub fn run_all(eval: &Evaluator) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|(id, _)| run_criterion(eval, *id).expect("cataloged id")).collect()
}

fn ho_ground_constants(eval: &Evaluator, c: &mut Checks) {
    for space in Space::BOTH {
        c.value(format!("R({space}, alpha=inf)"), value(eval.renyi(&ho(0), space, f64::INFINITY)), 0.5 * LN_PI, 1e-6);
        c.value(format!("S({space})"), value(eval.shannon(&ho(0), space)), 0.5 * (1.0 + LN_PI), 1e-6);
    }
    c.value("quoted decimal 0.572364", value(eval.renyi(&ho(0), Space::Position, f64::INFINITY)), 0.572364, 1e-6);
    c.value("quoted decimal 1.072364", value(eval.shannon(&ho(0), Space::Position)), 1.072364, 1e-6);
}

fn ho_excited_constants(eval: &Evaluator, c: &mut Checks) {
    let rinf = || value(eval.renyi(&ho(1), Space::Position, f64::INFINITY));
    let s = || value(eval.shannon(&ho(1), Space::Position));
    c.value("R(position, alpha=inf) = 1 - ln2 + lnpi/2", rinf(), 1.0 - LN_2 + 0.5 * LN_PI, 1e-6);
    c.value("R(momentum, alpha=inf)", value(eval.renyi(&ho(1), Space::Momentum, f64::INFINITY)), 1.0 - LN_2 + 0.5 * LN_PI, 1e-6);
    c.value("S = ln2 + gamma + lnpi/2 - 1/2", s(), LN_2 + EULER_GAMMA + 0.5 * LN_PI - 0.5, 1e-6);
    let quad = eval.with_method(Method::Quadrature);
    c.value("S by quadrature", value(quad.shannon(&ho(1), Space::Position)), LN_2 + EULER_GAMMA + 0.5 * LN_PI - 0.5, 1e-6);
    c.published("R(alpha=inf)", rinf(), 0.879239, "0.8792");
    c.published("S", s(), 1.342704, "1.3427");
}

const SATURATION_GRID: [f64; 7] = [0.6, 0.8, 1.0, 1.5, 2.0, 5.0, 20.0];

fn ho_saturation(eval: &Evaluator, c: &mut Checks) {
    for alpha in SATURATION_GRID {
        c.value(format!("Renyi sum - f at alpha={alpha}"), eval.renyi_relation(&ho(0), alpha).map(|r| r.gap), 0.0, 1e-7);
        c.value(format!("Tsallis lhs - rhs at alpha={alpha}"), eval.tsallis_relation(&ho(0), alpha).map(|r| r.gap), 0.0, 1e-7);
    }
}

fn ho_sum_endpoints(eval: &Evaluator, c: &mut Checks) {
    let sys = ho(1);
    c.value("sum at alpha=1/2 (limit)", eval.renyi_sum(&sys, 0.5), 1.0 + 2.0 * LN_2, 1e-5);
    c.value("sum at alpha=1/2 + 1e-9", eval.renyi_sum(&sys, 0.5 + 1e-9), 1.0 + 2.0 * LN_2, 1e-5);
    let at_one = || eval.renyi_sum(&sys, 1.0);
    c.value("sum at alpha=1 = 2gamma - 1 + ln4pi", at_one(), 2.0 * EULER_GAMMA - 1.0 + (4.0 * PI).ln(), 1e-5);
    c.published("sum at alpha=1", at_one(), 2.685418, "2.6854");
    let grid: Vec<f64> = (0..40).map(|i| 0.5 + 0.02 * 1.25f64.powi(i)).filter(|a| *a <= 60.0).collect();
    c.flag(
        format!("Shannon point is the maximum over {} grid points", grid.len()),
        (|| {
            let peak = at_one()?;
            for &a in &grid {
                if eval.renyi_sum(&sys, a)? > peak + 1e-12 {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
    );
}

fn ho_tsallis_sides(eval: &Evaluator, c: &mut Checks) {
    let r = eval.tsallis_relation(&ho(1), 0.5);
    let lhs = r.as_ref().map(|r| r.lhs).map_err(Clone::clone);
    let rhs = r.as_ref().map(|r| r.rhs).map_err(Clone::clone);
    c.value("lhs at alpha=1/2 = 2/pi^(3/4)", lhs.clone(), 2.0 / PI.powf(0.75), 1e-5);
    c.value("rhs at alpha=1/2 = [2/(e sqrt pi)]^(1/2)", rhs.clone(), (2.0 / (E * PI.sqrt())).sqrt(), 1e-5);
    c.published("lhs", lhs, 0.847527, "0.8475");
    c.published("rhs", rhs, 0.644203, "0.6442");
    c.flag("satisfied = false at alpha=1.2 (diagnostic)", eval.tsallis_relation(&ho(1), 1.2).map(|r| !r.satisfied));
}

fn robin(eval: &Evaluator, c: &mut Checks) {
    let w = SystemDescriptor::robin_wall();
    c.flag(
        "R(position, 2) = 0 exactly (closed form)",
        eval.with_method(Method::ClosedForm).renyi(&w, Space::Position, 2.0).map(|r| r.value == 0.0),
    );
    c.value("R(position, 2) by quadrature", value(eval.with_method(Method::Quadrature).renyi(&w, Space::Position, 2.0)), 0.0, 1e-9);
    c.value("R(momentum, alpha=inf) = ln pi", value(eval.renyi(&w, Space::Momentum, f64::INFINITY)), LN_PI, 1e-6);
    let r = |eps: f64| value(eval.renyi(&w, Space::Momentum, 0.5 + eps));
    for eps in [1e-2, 1e-3, 1e-4] {
        c.note(format!(
            "R(momentum, 1/2 + {eps:.0e}) / (-2 ln eps) = {:.6}",
            r(eps).map(|v| v / (-2.0 * eps.ln())).unwrap_or(f64::NAN)
        ));
    }
    c.value("law ratio R / (-2 ln eps) at eps=1e-3", r(1e-3).map(|v| v / (-2.0 * 1e-3f64.ln())), 1.0, 0.1);
    c.value(
        "law slope [R(1e-3) - R(1e-4)] / [2 ln 10]",
        (|| Ok((r(1e-4)? - r(1e-3)?) / (2.0 * 10f64.ln())))(),
        1.0,
        1e-2,
    );
    c.flag(
        "law ratio increases toward 1 over eps = 1e-2, 1e-3, 1e-4",
        (|| {
            let q: Vec<f64> = [1e-2, 1e-3, 1e-4].iter().map(|&e| Ok(r(e)? / (-2.0 * f64::ln(e)))).collect::<Result<_>>()?;
            Ok(q[0] < q[1] && q[1] < q[2] && q[2] < 1.0)
        })(),
    );
    let sides = eval.tsallis_relation(&w, 0.5);
    c.value("Tsallis lhs at 1/2", sides.as_ref().map(|s| s.lhs).map_err(Clone::clone), PI.powf(-0.5), 1e-6);
    c.value("Tsallis rhs at 1/2", sides.map(|s| s.rhs), PI.powf(-0.5), 1e-6);
}

fn hydrogen(eval: &Evaluator, c: &mut Checks) {
    let sys = q1d(1);
    let rejected = |r: Result<crate::entropy::EntropyResult>, div: Divergence| {
        matches!(r, Err(Error::DivergentEntropy { info, .. }) if info.alpha_threshold == 0.25 && info.divergence == div)
    };
    c.flag("Renyi momentum at alpha=0.25 rejected (log divergence)", Ok(rejected(eval.renyi(&sys, Space::Momentum, 0.25), Divergence::LogDivergent)));
    c.flag("Tsallis momentum at alpha=0.25 rejected (power divergence)", Ok(rejected(eval.tsallis(&sys, Space::Momentum, 0.25), Divergence::PowerDivergent)));
    let shannon = || eval.shannon_relation(&sys).map(|r| r.lhs);
    c.value("Shannon sum = 2gamma - 2 + ln8pi", shannon(), 2.0 * EULER_GAMMA - 2.0 + (8.0 * PI).ln(), 1e-6);
    c.published("Shannon sum", shannon(), 2.378612, "2.3786");
    let published = [(4.55, 2.5273), (3.53, 2.8876), (2.77, 3.1370), (2.42, 3.3277)];
    for (n, (alpha_p, value_p)) in (1..=4).zip(published) {
        match eval.find_sum_maximum(&q1d(n)) {
            Ok(SumMaximum::Maximum { alpha, value }) => {
                c.value(format!("n={n} maximum value"), Ok(value), value_p, 2e-4);
                c.value(format!("n={n} maximizing alpha"), Ok(alpha), alpha_p, 0.05);
            }
            Ok(other) => c.flag(format!("n={n} maximum: got {other:?}"), Ok(false)),
            Err(e) => c.flag(format!("n={n} maximum"), Err(e)),
        }
    }
}

fn hydrogen_tsallis(eval: &Evaluator, c: &mut Checks) {
    let r = eval.tsallis_relation(&q1d(1), 0.5);
    let target = (2.0 / PI).sqrt();
    c.value("n=1 lhs at 1/2", r.as_ref().map(|r| r.lhs).map_err(Clone::clone), target, 1e-6);
    c.value("n=1 rhs at 1/2", r.map(|r| r.rhs), target, 1e-6);
    let gaps: Result<Vec<f64>> = [2, 3].iter().map(|&n| eval.tsallis_relation(&q1d(n), 0.5).map(|r| r.gap)).collect();
    match gaps {
        Ok(g) => {
            c.note(format!("gaps at 1/2: n=2 {:.6}, n=3 {:.6}", g[0], g[1]));
            c.flag("n=2 gap > 0", Ok(g[0] > 0.0));
            c.flag("n=3 gap > n=2 gap", Ok(g[1] > g[0]));
        }
        Err(e) => c.flag("gaps", Err(e)),
    }
}

fn neumann(eval: &Evaluator, c: &mut Checks) {
    let w = SystemDescriptor::neumann_well();
    c.value("Shannon sum", eval.shannon_relation(&w).map(|r| r.lhs), 2.6834, 5e-4);
    c.value("Renyi sum at alpha=1", neumann_renyi_sum_with(eval, 1.0), 2.6834, 5e-4);
    c.value("scan extrapolation", eval.conjecture_scan(&w, 12).map(|t| t.extrapolated_limit), LN_2PI, 1e-3);
    let sides = tsallis_sides_well_with(eval, &w, 0.5);
    let target = (2.0 * PI).powf(-0.5);
    c.value("Tsallis lhs at 1/2", sides.as_ref().map(|s| s.0).map_err(Clone::clone), target, 1e-4);
    c.value("Tsallis rhs at 1/2", sides.map(|s| s.1), target, 1e-4);
    c.flag("moment-based dk divergent", w.deviation(Space::Momentum, &eval.integrator).map(f64::is_infinite));
    c.value("operator-based dk", w.operator_momentum_variance(&eval.integrator).map(f64::sqrt), 0.0, 0.0);
    c.flag("moment-based Heisenberg satisfied (infinite)", eval.heisenberg_relation(&w).map(|r| r.lhs.is_infinite() && r.satisfied));
    c.flag("operator-based Heisenberg violated", eval.heisenberg_operator_relation(&w).map(|r| !r.satisfied));
}

fn dirichlet(eval: &Evaluator, c: &mut Checks) {
    let w = SystemDescriptor::dirichlet_well(1).expect("ground state");
    match eval.conjecture_scan(&w, 12) {
        Ok(t) => {
            c.value("Renyi-sum extrapolation", Ok(t.extrapolated_limit), LN_2PI, 1e-3);
            c.value("Tsallis-gap extrapolation", Ok(t.extrapolated_gap), 0.0, 1e-3);
            c.flag("trace monotone beyond j=3", Ok(t.monotone_from(3)));
        }
        Err(e) => c.flag("scan", Err(e)),
    }
}

/// All (state, space) pairs with a cataloged closed form, at unit scale.
pub fn closed_form_states() -> Vec<(SystemDescriptor, Space)> {
    let mut states = Vec::new();
    let systems = [ho(0), ho(1), SystemDescriptor::robin_wall(), q1d(1), q1d(2), q1d(3), SystemDescriptor::neumann_well()];
    for sys in systems {
        for space in Space::BOTH {
            if Evaluator::has_closed_form(&sys, space) {
                states.push((sys, space));
            }
        }
    }
    states
}

fn dual_path(eval: &Evaluator, c: &mut Checks) {
    let closed = eval.with_method(Method::ClosedForm);
    let quad = eval.with_method(Method::Quadrature);
    let mut count = 0;
    let mut worst = 0.0f64;
    for (sys, space) in closed_form_states() {
        let thr = threshold(&sys, space).alpha_threshold;
        for alpha in [thr + 0.1, 0.75, 1.5, 2.0, 3.0, 5.0] {
            for kind in [EntropyKind::Renyi, EntropyKind::Tsallis] {
                let diff = (|| {
                    let a = closed.entropy(kind, &sys, space, alpha)?;
                    let b = quad.entropy(kind, &sys, space, alpha)?;
                    Ok((a.value - b.value).abs())
                })();
                count += 1;
                match diff {
                    Ok(d) if d <= 1e-8 => worst = worst.max(d),
                    other => c.value(format!("{sys} {space} {kind} alpha={alpha}"), other, 0.0, 1e-8),
                }
            }
        }
    }
    c.note(format!("largest closed-form vs quadrature difference {worst:.2e}"));
    c.flag(format!("{count} comparisons (need >= 60)"), Ok(count >= 60));
}

fn decay_check(c: &mut Checks, label: String, exp: &Expansion, exact: impl Fn(f64) -> Result<f64>) {
    let [v1, v2] = exp.regime.approach_points();
    let ratio = |v: f64| -> Result<f64> {
        let a = exp.variable.alpha(v);
        Ok(exp.remainder_ratio(a, exact(a)?))
    };
    let outcome = (|| Ok((ratio(v1)?, ratio(v2)?)))();
    match outcome {
        Ok((r1, r2)) => c.flag(format!("{label}: remainder/last term {r1:.2e} -> {r2:.2e}"), Ok(r2 < r1 && r2 < 0.5)),
        Err(e) => c.flag(label, Err(e)),
    }
}

fn expansions(eval: &Evaluator, c: &mut Checks) {
    let regimes = [Regime::AtZero, Regime::NearOne, Regime::AtInfinity, Regime::AtThreshold, Regime::NearHalf];
    let systems = [ho(0), ho(1), SystemDescriptor::robin_wall(), q1d(1), q1d(2)];
    for sys in systems {
        for space in Space::BOTH {
            for kind in [EntropyKind::Renyi, EntropyKind::Tsallis] {
                for regime in regimes {
                    if let Ok(exp) = asymptotic_coefficients(&sys, space, kind, regime) {
                        let label = format!("{sys} {space} {kind} {regime:?}");
                        decay_check(c, label, &exp, |a| value(eval.entropy(kind, &sys, space, a)));
                    }
                }
            }
        }
        for regime in regimes {
            if let Ok(exp) = sum_expansion(&sys, regime) {
                decay_check(c, format!("{sys} Renyi sum {regime:?}"), &exp, |a| eval.renyi_sum(&sys, a));
            }
            if let Ok((lhs, rhs)) = sides_expansion(&sys, regime) {
                decay_check(c, format!("{sys} Tsallis lhs {regime:?}"), &lhs, |a| eval.tsallis_relation(&sys, a).map(|r| r.lhs));
                decay_check(c, format!("{sys} Tsallis rhs {regime:?}"), &rhs, |a| eval.tsallis_relation(&sys, a).map(|r| r.rhs));
            }
        }
    }
}

fn thermo(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let random_dist = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(1..=8);
        let w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
        DiscreteDistribution::from_weights(&w)
    };
    let mut worst_add = 0.0f64;
    let additivity = (|| {
        for _ in 0..50 {
            let f = random_dist(&mut rng)?;
            let g = random_dist(&mut rng)?;
            let alpha = rng.gen_range(0.1..6.0);
            worst_add = worst_add.max(additivity_check(&f, &g, alpha)?.max_gap());
        }
        Ok(worst_add)
    })();
    c.value("largest additivity gap over 50 random products", additivity, 0.0, 1e-10);
    let identity = (|| {
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let n = rng.gen_range(1..10);
            let energies: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..5.0)).collect();
            let (t1, t2) = (rng.gen_range(0.2..5.0), rng.gen_range(0.2..5.0));
            worst = worst.max(renyi_free_energy_identity(&energies, t1, t2)?.gap);
        }
        Ok(worst)
    })();
    c.value("largest free-energy identity gap over 100 random systems", identity, 0.0, 1e-10);
    let gibbs = (|| {
        let ls = LevelSystem::new(vec![0.0, 0.4, 1.1, 2.5, 3.0], 1.2)?;
        let g = ls.gibbs();
        let corr = ls.gibbs_first_order_correction();
        let residual = |d: f64| -> Result<f64> {
            let p = tsallis_equilibrium(&ls, 1.0 + d)?;
            Ok(p.distribution.probs().iter().zip(g.probs()).zip(&corr).map(|((p, g), k)| (p - g - d * k).abs()).fold(0.0, f64::max))
        };
        let (r2, r3) = (residual(1e-2)?, residual(1e-3)?);
        Ok((r2, r3))
    })();
    match gibbs {
        Ok((r2, r3)) => c.flag(format!("Gibbs first-order residual {r2:.2e} (1e-2) -> {r3:.2e} (1e-3), O(d^2)"), Ok(r3 < r2 / 50.0)),
        Err(e) => c.flag("Gibbs first-order recovery", Err(e)),
    }
}
