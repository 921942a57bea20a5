use rayon::prelude::*;

use qentropy::conjecture::FIRST_MONOTONE_POINT;
use qentropy::entropy::{
    asymptotic_coefficients, conjugate_beta, threshold, ComputationPath, EntropyKind, EntropyResult, Evaluator, Expansion,
    Regime, Variable,
};
use qentropy::error::Error;
use qentropy::expansion::{sides_expansion, sum_expansion};
use qentropy::specfun::LN_2PI;
use qentropy::systems::{Space, SystemDescriptor};
use qentropy::thermo::{
    additivity_check, discrete_entropy, renyi_free_energy_identity, tsallis_equilibrium, DiscreteDistribution, LevelSystem,
};
use qentropy::uncertainty::{f_bound, SumMaximum, SATURATION_TOL, VERIFICATION_TOL};
use qentropy::verify::{run_criterion, CRITERIA};

use crate::args::{AlphaSpec, GridPoint, Spacing};
use crate::output::{Cell, Table};
use crate::{CliError, Context, ExpansionTarget};

pub const OK: &str = "OK";
pub const CLAMPED: &str = "CLAMPED";
pub const DIVERGENT: &str = "DIVERGENT";
pub const NONCONVERGENT: &str = "NONCONVERGENT";
pub const ERROR: &str = "ERROR";

/// Threshold endpoints move outward by this much.
pub const CLAMP_OFFSET: f64 = 1e-9;

const ENTROPY_COLUMNS: [&str; 10] = ["system", "n", "space", "kind", "alpha", "beta", "value", "path", "abs_err", "status"];

fn columns(extra: &[&'static str]) -> Vec<&'static str> {
    ENTROPY_COLUMNS.iter().chain(extra).copied().collect()
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::DivergentEntropy { .. } => DIVERGENT,
        Error::NonConvergent { .. } => NONCONVERGENT,
        _ => ERROR,
    }
}

/// Logs a failed row to stderr and returns its status.
fn report(sys: &SystemDescriptor, what: &str, alpha: Option<f64>, e: &Error) -> &'static str {
    let status = status_of(e);
    if status != DIVERGENT {
        let at = alpha.map_or(String::new(), |a| format!(" at alpha={a}"));
        eprintln!("{status}: {sys} {what}{at}: {e}");
    }
    status
}

fn par_map<T: Sync, R: Send>(ctx: &Context, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(ctx.jobs).build().expect("thread pool");
    pool.install(|| items.par_iter().map(f).collect())
}

fn path_name(sys: &SystemDescriptor, space: Space, alpha: f64) -> &'static str {
    if alpha.is_infinite() {
        ComputationPath::Limit.name()
    } else if Evaluator::has_closed_form(sys, space) {
        ComputationPath::ClosedForm.name()
    } else {
        ComputationPath::Quadrature.name()
    }
}

fn joined_path(a: ComputationPath, b: ComputationPath) -> String {
    if a == b {
        a.name().to_owned()
    } else {
        format!("{}+{}", a.name(), b.name())
    }
}

/// Additive (Rényi, Shannon) or multiplicative (∫ρ^α) scale dependence.
fn scale_term(kind: EntropyKind, space: Space, alpha: Option<f64>, scale: f64) -> f64 {
    let sign = if space == Space::Position { 1.0 } else { -1.0 };
    match kind {
        EntropyKind::Renyi | EntropyKind::Shannon => sign * scale.ln(),
        EntropyKind::Tsallis => scale.powf(sign * (1.0 - alpha.unwrap_or(1.0))),
        EntropyKind::Onicescu => scale.powf(-sign),
    }
}

struct EntropyJob {
    sys: SystemDescriptor,
    space: Space,
    kind: EntropyKind,
    alpha: Option<f64>,
    clamped: bool,
}

pub fn entropy(
    ctx: &Context,
    systems: &[SystemDescriptor],
    spaces: &[Space],
    kinds: &[EntropyKind],
    alpha: Option<&AlphaSpec>,
    spacing: Spacing,
) -> Result<Table, CliError> {
    let needs_alpha = kinds.iter().any(|k| matches!(k, EntropyKind::Renyi | EntropyKind::Tsallis));
    let grid = match (alpha, needs_alpha) {
        (Some(a), _) => a.points(spacing)?,
        (None, true) => return Err(CliError::Usage("--alpha is required for renyi and tsallis".into())),
        (None, false) => Vec::new(),
    };
    let scaled = systems.iter().any(|s| s.scale != 1.0);
    let mut jobs = Vec::new();
    for sys in systems {
        for &space in spaces {
            let thr = threshold(sys, space).alpha_threshold;
            for &kind in kinds {
                if matches!(kind, EntropyKind::Shannon | EntropyKind::Onicescu) {
                    jobs.push(EntropyJob { sys: *sys, space, kind, alpha: None, clamped: false });
                    continue;
                }
                for &GridPoint { alpha, endpoint } in &grid {
                    let clamped = endpoint && thr > 0.0 && alpha == thr;
                    let alpha = if clamped { thr + CLAMP_OFFSET } else { alpha };
                    jobs.push(EntropyJob { sys: *sys, space, kind, alpha: Some(alpha), clamped });
                }
            }
        }
    }
    let results: Vec<Result<EntropyResult, Error>> = par_map(ctx, &jobs, |j| match j.alpha {
        Some(a) => ctx.eval.entropy(j.kind, &j.sys, j.space, a),
        None => ctx.eval.entropy(j.kind, &j.sys, j.space, 1.0),
    });

    let mut table = Table::new(&if scaled { columns(&["scale_term"]) } else { columns(&[]) });
    for (j, r) in jobs.iter().zip(results) {
        let mut row: Vec<Cell> = vec![
            j.sys.family.short_name().into(),
            j.sys.quantum_number.into(),
            j.space.name().into(),
            j.kind.name().into(),
            j.alpha.into(),
            Cell::Empty,
        ];
        match r {
            Ok(e) => {
                let status = if j.clamped { CLAMPED } else { OK };
                row.extend([e.value.into(), e.path.name().into(), e.abs_error.into(), status.into()]);
            }
            Err(e) => {
                let status = report(&j.sys, j.kind.name(), j.alpha, &e);
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty, status.into()]);
            }
        }
        if scaled {
            row.push(scale_term(j.kind, j.space, j.alpha, j.sys.scale).into());
        }
        table.push(row);
    }
    Ok(table)
}

fn jobs_over(systems: &[SystemDescriptor], grid: &[GridPoint]) -> Vec<(SystemDescriptor, f64)> {
    systems.iter().flat_map(|s| grid.iter().map(move |p| (*s, p.alpha))).collect()
}

fn relation_cells(gap: f64) -> [Cell; 3] {
    [gap.into(), (gap >= -VERIFICATION_TOL).into(), (gap.abs() <= SATURATION_TOL).into()]
}

/// R_ρ(α) + R_γ(β) with f(α); one row per (n, α).
pub fn uncertainty(ctx: &Context, systems: &[SystemDescriptor], grid: &[GridPoint]) -> Table {
    let jobs = jobs_over(systems, grid);
    let results = par_map(ctx, &jobs, |(sys, alpha)| -> Result<_, Error> {
        let beta = conjugate_beta(*alpha)?;
        let x = ctx.eval.renyi(sys, Space::Position, *alpha)?;
        let k = ctx.eval.renyi(sys, Space::Momentum, beta)?;
        Ok((beta, x, k, f_bound(*alpha)?))
    });
    let mut table = Table::new(&columns(&["f_alpha", "gap", "satisfied", "saturated"]));
    for ((sys, alpha), r) in jobs.iter().zip(results) {
        let mut row: Vec<Cell> =
            vec![sys.family.short_name().into(), sys.quantum_number.into(), "both".into(), "renyi_sum".into(), (*alpha).into()];
        match r {
            Ok((beta, x, k, f)) => {
                let lhs = x.value + k.value;
                row.extend([
                    beta.into(),
                    lhs.into(),
                    joined_path(x.path, k.path).into(),
                    (x.abs_error + k.abs_error).into(),
                    OK.into(),
                    f.into(),
                ]);
                row.extend(relation_cells(lhs - f));
            }
            Err(e) => {
                let status = report(sys, "renyi sum", Some(*alpha), &e);
                row.extend([conjugate_beta(*alpha).ok().into(), Cell::Empty, Cell::Empty, Cell::Empty, status.into()]);
                row.extend([f_bound(*alpha).ok().into(), Cell::Empty, Cell::Empty, Cell::Empty]);
            }
        }
        table.push(row);
    }
    table
}

/// Position side at α against momentum side at β.
pub fn tsallis_check(ctx: &Context, systems: &[SystemDescriptor], grid: &[GridPoint]) -> Table {
    let jobs = jobs_over(systems, grid);
    let results = par_map(ctx, &jobs, |(sys, alpha)| ctx.eval.tsallis_relation(sys, *alpha));
    let mut table = Table::new(&columns(&["rhs", "gap", "satisfied", "saturated"]));
    for ((sys, alpha), r) in jobs.iter().zip(results) {
        let mut row: Vec<Cell> = vec![
            sys.family.short_name().into(),
            sys.quantum_number.into(),
            "both".into(),
            "tsallis_sides".into(),
            (*alpha).into(),
        ];
        match r {
            Ok(rep) => {
                let beta = rep.beta.unwrap_or(f64::NAN);
                let (px, pk) = (path_name(sys, Space::Position, *alpha), path_name(sys, Space::Momentum, beta));
                let path = if px == pk { px.to_owned() } else { format!("{px}+{pk}") };
                row.extend([beta.into(), rep.lhs.into(), path.into(), Cell::Empty, OK.into(), rep.rhs.into()]);
                row.extend(relation_cells(rep.gap));
            }
            Err(e) => {
                let status = report(sys, "tsallis sides", Some(*alpha), &e);
                row.extend([conjugate_beta(*alpha).ok().into(), Cell::Empty, Cell::Empty, Cell::Empty, status.into()]);
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]);
            }
        }
        table.push(row);
    }
    table
}

/// Trace toward α = ½ followed by one extrapolated row.
pub fn conjecture(ctx: &Context, systems: &[SystemDescriptor], points: usize, allow_excited: bool) -> Result<Table, CliError> {
    let traces = par_map(ctx, systems, |sys| {
        if allow_excited {
            ctx.eval.conjecture_scan_unchecked(sys, points)
        } else {
            ctx.eval.conjecture_scan(sys, points)
        }
    });
    let mut table = Table::new(&columns(&["tsallis_gap", "deviation"]));
    for (sys, trace) in systems.iter().zip(traces) {
        let trace = trace.map_err(|e| CliError::Usage(e.to_string()))?;
        let head = |alpha: f64| -> Vec<Cell> {
            vec![sys.family.short_name().into(), sys.quantum_number.into(), "both".into(), "renyi_sum".into(), alpha.into()]
        };
        for (i, &alpha) in trace.alphas.iter().enumerate() {
            let status = trace.failures.iter().find(|(j, _)| *j == i).map_or(OK, |(_, e)| report(sys, "scan", Some(alpha), e));
            let sum = trace.renyi_sums[i];
            let mut row = head(alpha);
            row.extend([
                conjugate_beta(alpha).ok().into(),
                sum.into(),
                Cell::Empty,
                Cell::Empty,
                status.into(),
                trace.tsallis_gaps[i].into(),
                (sum - LN_2PI).into(),
            ]);
            table.push(row);
        }
        let mut row = head(0.5);
        row.extend([
            f64::INFINITY.into(),
            trace.extrapolated_limit.into(),
            "fit".into(),
            Cell::Empty,
            "EXTRAPOLATED".into(),
            trace.extrapolated_gap.into(),
            (trace.extrapolated_limit - LN_2PI).into(),
        ]);
        table.push(row);
        eprintln!(
            "{sys}: extrapolated sum {:.9} (ln 2pi = {LN_2PI:.9}, deviation {:.2e}), tsallis gap {:.2e}, monotone from j={}: {}",
            trace.extrapolated_limit,
            trace.renyi_deviation(),
            trace.tsallis_deviation(),
            FIRST_MONOTONE_POINT + 1,
            trace.monotone_from(FIRST_MONOTONE_POINT)
        );
    }
    Ok(table)
}

pub fn maximum(ctx: &Context, systems: &[SystemDescriptor]) -> Table {
    let results = par_map(ctx, systems, |sys| ctx.eval.find_sum_maximum(sys));
    let mut table = Table::new(&columns(&["f_alpha"]));
    for (sys, r) in systems.iter().zip(results) {
        let mut row: Vec<Cell> = vec![sys.family.short_name().into(), sys.quantum_number.into(), "both".into(), "renyi_sum_max".into()];
        match r {
            Ok(m) => {
                let (alpha, value, status) = match m {
                    SumMaximum::Maximum { alpha, value } => (alpha, value, "MAXIMUM"),
                    SumMaximum::Unbounded { alpha, value } => (alpha, value, "UNBOUNDED"),
                };
                row.extend([
                    alpha.into(),
                    conjugate_beta(alpha).ok().into(),
                    value.into(),
                    Cell::Empty,
                    Cell::Empty,
                    status.into(),
                    f_bound(alpha).ok().into(),
                ]);
            }
            Err(e) => {
                let status = report(sys, "maximum", None, &e);
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, status.into(), Cell::Empty]);
            }
        }
        table.push(row);
    }
    table
}

pub fn heisenberg(ctx: &Context, systems: &[SystemDescriptor]) -> Table {
    let results = par_map(ctx, systems, |sys| (ctx.eval.heisenberg_relation(sys), ctx.eval.heisenberg_operator_relation(sys)));
    let mut table = Table::new(&columns(&["bound", "gap", "satisfied", "saturated"]));
    for (sys, (moment, operator)) in systems.iter().zip(results) {
        for (kind, r) in [("heisenberg_moment", moment), ("heisenberg_operator", operator)] {
            let mut row: Vec<Cell> = vec![
                sys.family.short_name().into(),
                sys.quantum_number.into(),
                "both".into(),
                kind.into(),
                Cell::Empty,
                Cell::Empty,
            ];
            match r {
                Ok(rep) => {
                    row.extend([rep.lhs.into(), Cell::Empty, Cell::Empty, OK.into(), rep.rhs.into()]);
                    row.extend(relation_cells(rep.gap));
                }
                Err(e) => {
                    let status = report(sys, kind, None, &e);
                    row.extend([Cell::Empty, Cell::Empty, Cell::Empty, status.into(), 0.5.into()]);
                    row.extend([Cell::Empty, Cell::Empty, Cell::Empty]);
                }
            }
            table.push(row);
        }
    }
    table
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::AtZero => "at_zero",
        Regime::NearOne => "near_one",
        Regime::AtInfinity => "at_infinity",
        Regime::AtThreshold => "at_threshold",
        Regime::NearHalf => "near_half",
    }
}

fn variable_name(v: Variable) -> String {
    match v {
        Variable::Alpha => "alpha".into(),
        Variable::AlphaMinusOne => "alpha-1".into(),
        Variable::AlphaMinusThreshold(t) => format!("alpha-{t}"),
        Variable::TwoAlphaMinusOne => "2alpha-1".into(),
        Variable::AlphaMinusHalf => "alpha-0.5".into(),
    }
}

pub fn expansion(
    systems: &[SystemDescriptor],
    regime: Regime,
    target: ExpansionTarget,
    space: Space,
    kind: EntropyKind,
) -> Result<Table, CliError> {
    let mut table = Table::new(&["system", "n", "space", "kind", "regime", "variable", "coeff", "power", "log_power"]);
    for sys in systems {
        let found: Vec<(&str, &str, Expansion)> = match target {
            ExpansionTarget::Entropy => {
                vec![(space.name(), kind.name(), asymptotic_coefficients(sys, space, kind, regime).map_err(usage)?)]
            }
            ExpansionTarget::Sum => vec![("both", "renyi_sum", sum_expansion(sys, regime).map_err(usage)?)],
            ExpansionTarget::Sides => {
                let (l, r) = sides_expansion(sys, regime).map_err(usage)?;
                vec![("position", "tsallis_side", l), ("momentum", "tsallis_side", r)]
            }
        };
        for (space, kind, e) in found {
            for t in &e.terms {
                table.push(vec![
                    sys.family.short_name().into(),
                    sys.quantum_number.into(),
                    space.into(),
                    kind.into(),
                    regime_name(e.regime).into(),
                    variable_name(e.variable).into(),
                    t.coeff.into(),
                    Cell::Text(t.power.to_string()),
                    t.log_power.into(),
                ]);
            }
        }
    }
    Ok(table)
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn distribution(p: &[f64]) -> Result<DiscreteDistribution, CliError> {
    DiscreteDistribution::new(p.to_vec()).map_err(usage)
}

pub fn thermo_entropy(
    probs: &[f64],
    kinds: &[EntropyKind],
    alpha: Option<&AlphaSpec>,
    spacing: Spacing,
) -> Result<Table, CliError> {
    let p = distribution(probs)?;
    let grid = match alpha {
        Some(a) => a.points(spacing)?,
        None if kinds.iter().any(|k| matches!(k, EntropyKind::Renyi | EntropyKind::Tsallis)) => {
            return Err(CliError::Usage("--alpha is required for renyi and tsallis".into()))
        }
        None => Vec::new(),
    };
    let mut table = Table::new(&["kind", "alpha", "value", "status"]);
    for &kind in kinds {
        let alphas: Vec<Option<f64>> = match kind {
            EntropyKind::Renyi | EntropyKind::Tsallis => grid.iter().map(|g| Some(g.alpha)).collect(),
            _ => vec![None],
        };
        for a in alphas {
            let r = discrete_entropy(&p, kind, a.unwrap_or(1.0));
            let (value, status) = match r {
                Ok(v) => (Cell::Num(v), OK),
                Err(e) => {
                    eprintln!("{kind} at alpha={a:?}: {e}");
                    (Cell::Empty, ERROR)
                }
            };
            table.push(vec![kind.name().into(), a.into(), value, status.into()]);
        }
    }
    Ok(table)
}

pub fn thermo_additivity(f: &[f64], g: &[f64], grid: &[GridPoint]) -> Result<Table, CliError> {
    let (f, g) = (distribution(f)?, distribution(g)?);
    let mut table = Table::new(&[
        "alpha",
        "renyi_joint",
        "renyi_sum",
        "tsallis_joint",
        "tsallis_composed",
        "shannon_joint",
        "shannon_sum",
        "max_gap",
    ]);
    for p in grid {
        let r = additivity_check(&f, &g, p.alpha).map_err(usage)?;
        table.push(vec![
            p.alpha.into(),
            r.renyi_joint.into(),
            r.renyi_sum.into(),
            r.tsallis_joint.into(),
            r.tsallis_composed.into(),
            r.shannon_joint.into(),
            r.shannon_sum.into(),
            r.max_gap().into(),
        ]);
    }
    Ok(table)
}

/// One row per (α, level); `gibbs_correction` is the first-order term of
/// p_n in (α − 1) and does not depend on α.
pub fn thermo_equilibrium(energies: &[f64], temperature: f64, grid: &[GridPoint]) -> Result<Table, CliError> {
    let ls = LevelSystem::new(energies.to_vec(), temperature).map_err(usage)?;
    let gibbs = ls.gibbs();
    let correction = ls.gibbs_first_order_correction();
    let mut table = Table::new(&[
        "alpha",
        "level",
        "energy",
        "probability",
        "gibbs",
        "gibbs_correction",
        "ln_partition",
        "cutoff",
        "status",
    ]);
    for p in grid {
        match tsallis_equilibrium(&ls, p.alpha) {
            Ok(eq) => {
                for (i, &e) in energies.iter().enumerate() {
                    table.push(vec![
                        p.alpha.into(),
                        i.into(),
                        e.into(),
                        eq.distribution.probs()[i].into(),
                        gibbs.probs()[i].into(),
                        correction[i].into(),
                        eq.ln_partition.into(),
                        eq.cutoff_levels.contains(&i).into(),
                        OK.into(),
                    ]);
                }
            }
            Err(e) => {
                eprintln!("alpha={}: {e}", p.alpha);
                let status = if e == Error::EmptySupport { "EMPTY_SUPPORT" } else { ERROR };
                table.push(vec![
                    p.alpha.into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    status.into(),
                ]);
            }
        }
    }
    Ok(table)
}

pub fn thermo_free_energy(energies: &[f64], t1: f64, t2: f64) -> Result<Table, CliError> {
    let id = renyi_free_energy_identity(energies, t1, t2).map_err(usage)?;
    let mut table = Table::new(&["t1", "t2", "order", "renyi", "free_energy_quotient", "gap"]);
    table.push(vec![t1.into(), t2.into(), (t1 / t2).into(), id.lhs.into(), id.rhs.into(), id.gap.into()]);
    Ok(table)
}

/// Text report and whether any criterion failed.
pub fn verify(ctx: &Context, suite: &str, verbose: bool) -> Result<(String, bool), CliError> {
    let ids: Vec<u32> = if suite.eq_ignore_ascii_case("all") {
        CRITERIA.iter().map(|(id, _)| *id).collect()
    } else {
        suite
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| CliError::Usage(format!("invalid criterion '{t}'"))))
            .collect::<Result<_, _>>()?
    };
    for id in &ids {
        if !CRITERIA.iter().any(|(i, _)| i == id) {
            return Err(CliError::Usage(format!("no acceptance criterion {id}; valid ids are 1..={}", CRITERIA.len())));
        }
    }
    let reports = par_map(ctx, &ids, |id| run_criterion(&ctx.eval, *id).expect("validated id"));
    let mut text = String::new();
    let mut failed = 0;
    for r in &reports {
        if verbose {
            text.push_str(&r.to_string());
        } else {
            text.push_str(&r.summary_line());
            text.push('\n');
        }
        failed += usize::from(!r.passed());
    }
    text.push_str(&format!("{} passed, {failed} failed\n", reports.len() - failed));
    Ok((text, failed > 0))
}
