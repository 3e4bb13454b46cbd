use crate::args::*;
use crate::config::Resolved;
use crate::report::{cell, fmt_f, num, Check, Output, Table};
use crate::CliError;
use hrcone::cone::{resolve_lambdas, Objective, ScalarSet};
use hrcone::constants::*;
use hrcone::profiles::{EndCondition, Profile1D};
use hrcone::scalar::{exact_repr, parse_rational, Scalar};
use hrcone::sharpness::{family_moments, oned_sharpness, r_functional, sharpness_sweep, MomentPath, OneDFamily, OneDKind};
use hrcone::spectra::finite_difference::channel_eigenvalues_richardson;
use hrcone::spectra::{
    cap_eigenvalues, hemisphere_eigenvalues, resolve_selection, sphere_eigenvalues, LambdaSelection, ModeLabel, Spectrum,
    SpectrumEntry, SphericalDomain,
};
use hrcone::verifier::inequality::{DIR_ELL_MAX, DIR_GRID};
use hrcone::verifier::{
    dirichlet_estimate, emden_fowler_check, kelvin_check, random_test_suite, resonance_report, InequalityId, MarginReport,
    IDENTITY_TOL,
};
use num::rational::BigRational;
use serde_json::{json, Value};

const R_LIMIT_TOL: f64 = 1e-2;
const PATH_TOL: f64 = 1e-9;
const ONED_TOL: f64 = 1e-2;
const SWEEP_TOL: f64 = 1e-2;
const REFINE_TOL: f64 = 1e-3;
const ORACLE_TOL: f64 = 1e-6;
/// Relative slack for the refinement ordering; the converged quotients carry noise near 1e-11.
const MONOTONE_SLACK: f64 = 1e-10;
const DEFAULT_EPS: [f64; 5] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
const DEFAULT_ESTIMATE_GRID: usize = 1000;
const DEFAULT_ORACLE_GRID: usize = 2000;

/// Weight exponent as given on the command line, kept exact when it parses as a rational.
struct Weighting {
    params: ConeParams,
    exact: BigRational,
    text: String,
}

fn weighting(w: &Weight) -> Result<Weighting, CliError> {
    let exact = parse_rational(&w.alpha).ok_or_else(|| CliError::Input(format!("cannot read alpha '{}'", w.alpha)))?;
    let params = ConeParams::new(w.dim, exact.to_f64())?;
    Ok(Weighting { params, exact, text: w.alpha.clone() })
}

struct Context {
    w: Weighting,
    domain: SphericalDomain,
    selection: LambdaSelection,
}

impl Context {
    fn inputs(&self) -> Value {
        json!({
            "dim": self.w.params.dim,
            "alpha": self.w.text,
            "domain": self.domain.to_string(),
            "lambda": self.selection.to_string(),
        })
    }

    fn scalars(&self, objective: Objective, reflected: bool) -> Result<(ScalarSet, usize), CliError> {
        let p = if reflected { self.w.params.reflected() } else { self.w.params.clone() };
        let entries = resolve_lambdas(&p, self.domain, &self.selection, objective)?;
        let set = ScalarSet::build(p.dim, self.w.params.alpha, Some(self.w.exact.clone()), &entries)?;
        Ok((set, entries.len()))
    }

    fn float_lambdas(&self) -> Result<Vec<f64>, CliError> {
        Ok(resolve_lambdas(&self.w.params, self.domain, &self.selection, Objective::HardyRellich)?
            .iter()
            .map(|e| e.lambda)
            .collect())
    }
}

fn context(s: &Setting) -> Result<Context, CliError> {
    Ok(Context { w: weighting(&s.weight)?, domain: s.domain.parse()?, selection: s.lambda.parse()? })
}

/// Named scalar rows, collected for both the json payload and the table.
struct Rows {
    json: serde_json::Map<String, Value>,
    table: Table,
}

impl Rows {
    fn new() -> Self {
        Rows { json: serde_json::Map::new(), table: Table::new(&["quantity", "value", "exact"]) }
    }

    fn add<S: Scalar>(&mut self, name: &str, x: &S) {
        self.json.insert(name.to_string(), num(x));
        let exact = x.to_exact().map(|q| exact_repr(&q)).unwrap_or_default();
        self.table.push(vec![name.to_string(), fmt_f(x.to_f64()), exact]);
    }

    fn extra(&mut self, name: &str, v: Value) {
        self.json.insert(name.to_string(), v);
    }

    fn finish(mut self, inputs: Value, exact: bool, scanned: usize, checks: Vec<Check>) -> Output {
        self.json.insert("exact_arithmetic".into(), json!(exact));
        self.json.insert("lambdas_scanned".into(), json!(scanned));
        Output { inputs, results: Value::Object(self.json), table: self.table, checks }
    }
}

fn constant_rows<S: Scalar>(rows: &mut Rows, c: &ConstantResult<S>) {
    rows.add("constant", &c.value);
    rows.add("argmin_lambda", &c.argmin_lambda);
    rows.extra("resonant", json!(c.resonant));
}

pub fn execute(cmd: &Command, rc: &Resolved) -> Result<(String, Output), CliError> {
    match cmd {
        Command::Gamma(w) => Ok(("gamma".into(), gamma(w)?)),
        Command::Constants { kind } => constants(kind),
        Command::Coeffs { kind } => coeffs(kind, rc),
        Command::Table { kind: TableKind::WeightFree { dims } } => Ok(("table weight-free".into(), weight_free(dims)?)),
        Command::Spectrum { kind } => spectrum(kind, rc),
        Command::Verify { kind } => verify(kind, rc),
        Command::Sweep { kind } => sweep(kind, rc),
        Command::Estimate { kind: EstimateKind::Dirichlet { weight, theta0, grid } } => {
            Ok(("estimate dirichlet".into(), estimate(weight, *theta0, grid, rc)?))
        }
    }
}

fn gamma(w: &Weight) -> Result<Output, CliError> {
    let wt = weighting(w)?;
    let p = ConeParams::new(w.dim, wt.exact.clone())?;
    let g = gamma_triple(&p);
    let mut rows = Rows::new();
    rows.add("gamma", &g.gamma);
    rows.add("gamma_bar", &g.gamma_bar);
    rows.add("gamma_hat", &g.gamma_hat);
    rows.add("radial_value", &radial_value(&p));
    let inputs = json!({ "dim": w.dim, "alpha": wt.text });
    let mut out = rows.finish(inputs, true, 0, Vec::new());
    if let Value::Object(m) = &mut out.results {
        m.remove("lambdas_scanned");
    }
    Ok(out)
}

fn constants(kind: &ConstantsKind) -> Result<(String, Output), CliError> {
    let (name, s) = match kind {
        ConstantsKind::HardyRellich(s) => ("hardy-rellich", s),
        ConstantsKind::Rellich(s) => ("rellich", s),
        ConstantsKind::Schmincke(s) => ("schmincke", s),
    };
    let ctx = context(s)?;
    let mut rows = Rows::new();
    let (objective, reflected) = match name {
        "rellich" => (Objective::Rellich, false),
        "schmincke" => (Objective::HardyRellich, true),
        _ => (Objective::HardyRellich, false),
    };
    let (set, scanned) = ctx.scalars(objective, reflected)?;
    let exact = set.is_exact();
    match &set {
        ScalarSet::Exact(p, ls) => constants_rows(name, p, ls, &mut rows)?,
        ScalarSet::Float(p, ls) => constants_rows(name, p, ls, &mut rows)?,
    }
    Ok((format!("constants {name}"), rows.finish(ctx.inputs(), exact, scanned, Vec::new())))
}

fn constants_rows<S: Scalar>(name: &str, p: &ConeParams<S>, ls: &[S], rows: &mut Rows) -> Result<(), CliError> {
    match name {
        "hardy-rellich" => {
            constant_rows(rows, &hardy_rellich_constant(p, ls)?);
            let r = monotone_range(p);
            rows.extra("monotone_range", json!({ "lower": num(&r.lower), "upper": num(&r.upper), "in_range": r.in_range }));
        }
        "rellich" => constant_rows(rows, &rellich_constant(p, ls)?),
        _ => {
            let s = schmincke_coefficients(p, ls)?;
            rows.add("grad_coeff", &s.grad_coeff);
            rows.add("zero_order_coeff", &s.zero_order_coeff);
            rows.add("reflected_argmin_lambda", &s.reflected.argmin_lambda);
        }
    }
    Ok(())
}

fn coeffs(kind: &CoeffsKind, rc: &Resolved) -> Result<(String, Output), CliError> {
    let (name, s) = match kind {
        CoeffsKind::Nd(s) => ("nd", s),
        CoeffsKind::NdLog(s) => ("nd-log", s),
        CoeffsKind::PuncturedBall(s) => ("punctured-ball", s),
        CoeffsKind::Navier(s) => ("navier", s),
        CoeffsKind::Dirichlet { setting, grid } => return Ok(("coeffs dirichlet".into(), dirichlet_coeffs(setting, grid, rc)?)),
    };
    let ctx = context(s)?;
    let (set, scanned) = ctx.scalars(Objective::HardyRellich, false)?;
    let exact = set.is_exact();
    let mut rows = Rows::new();
    let checks = match &set {
        ScalarSet::Exact(p, ls) => coeff_rows(name, p, ls, ctx.domain, &mut rows)?,
        ScalarSet::Float(p, ls) => coeff_rows(name, p, ls, ctx.domain, &mut rows)?,
    };
    Ok((format!("coeffs {name}"), rows.finish(ctx.inputs(), exact, scanned, checks)))
}

/// Compares a value with zero: exact for rationals, to `tol` for floats.
fn sign_check<S: Scalar>(name: &str, x: &S, tol: f64) -> Check {
    match x.to_exact() {
        Some(q) => Check::equal(name, !num::Signed::is_negative(&q)),
        None => Check::margin(name, x.to_f64(), tol),
    }
}

fn coeff_rows<S: Scalar>(
    name: &str,
    p: &ConeParams<S>,
    ls: &[S],
    domain: SphericalDomain,
    rows: &mut Rows,
) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    match name {
        "nd" => {
            let c = nd_coefficients(p, ls)?;
            rows.add("a0", &c.a0);
            rows.add("a1", &c.a1);
            rows.add("a2", &c.a2);
            rows.add("lambda_min", &c.lambda_min);
            // a2 equals (2 lambda + 2 gamma_bar - hr_term) / 4 - (lambda + gamma_hat^2) / 4 at lambda_min
            let g = gamma_triple(p);
            let l = c.lambda_min.clone();
            if !l.is_zero() {
                let four = S::from_i64(4);
                let two = S::from_i64(2);
                let lhs = (two.clone() * l.clone() + two * g.gamma_bar - hr_term(p, &l)) / four.clone()
                    - (l + g.gamma_hat.clone() * g.gamma_hat) / four;
                checks.push(match (lhs.to_exact(), c.a2.to_exact()) {
                    (Some(x), Some(y)) => Check::equal("a2_identity", x == y),
                    _ => Check::relative("a2_identity", lhs.to_f64(), c.a2.to_f64(), 1e-12),
                });
            }
        }
        "nd-log" => {
            let c = nd_log_coefficients(p, ls)?;
            rows.add("a0", &c.a0);
            rows.add("kappa", &c.kappa);
            rows.add("a2", &c.a2);
            rows.add("lambda_min", &c.lambda_min);
        }
        "punctured-ball" => {
            let c = punctured_ball_coefficients(p, &domain, ls)?;
            rows.add("a0", &c.a0);
            rows.add("a1_grad_log", &c.a1_grad_log);
            rows.add("a1_sph_grad", &c.a1_sph_grad);
            rows.add("k", &c.k);
            checks.push(sign_check("k_nonnegative", &c.k, 0.0));
        }
        _ => {
            let c = navier_coefficients(p, ls)?;
            rows.add("a0", &c.a0);
            rows.add("a1", &c.a1);
            rows.add("lambda_min", &c.lambda_min);
        }
    }
    Ok(checks)
}

fn cap_angle(domain: SphericalDomain) -> Result<f64, CliError> {
    match domain {
        SphericalDomain::FullSphere => Err(CliError::Input("clamped estimates need a cap or the hemisphere".into())),
        SphericalDomain::Hemisphere => Ok(std::f64::consts::FRAC_PI_2),
        SphericalDomain::Cap(t) => Ok(t),
    }
}

fn dirichlet_coeffs(s: &Setting, grid: &DirichletGrid, rc: &Resolved) -> Result<Output, CliError> {
    let ctx = context(s)?;
    let theta0 = cap_angle(ctx.domain)?;
    let ell_max = rc.pick(grid.ell_max, "ell-max", DIR_ELL_MAX)?;
    let grid_size = rc.pick(grid.grid_size, "grid-size", DIR_GRID)?;
    let est = dirichlet_estimate(&ctx.w.params, theta0, ell_max, grid_size)?;
    let ls = ctx.float_lambdas()?;
    let c = dirichlet_conelike_coefficients(&ctx.w.params, &ls, est.mu0)?;
    let nav = navier_coefficients(&ctx.w.params, &ls)?;
    let mut rows = Rows::new();
    rows.add("a0", &c.a0);
    rows.add("kappa0", &c.kappa0);
    rows.add("a1", &c.a1);
    rows.add("lambda_min", &c.lambda_min);
    rows.add("navier_a0", &nav.a0);
    rows.extra("grid_size", json!(grid_size));
    rows.extra("ell_max", json!(ell_max));
    let checks = vec![Check::margin("mu0_at_least_navier", c.a0 - nav.a0, 0.0)];
    let mut inputs = ctx.inputs();
    inputs["grid_size"] = json!(grid_size);
    inputs["ell_max"] = json!(ell_max);
    Ok(rows.finish(inputs, false, ls.len(), checks))
}

fn parse_dims(s: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Input(format!("bad dimension range '{s}' (expected lo..hi)"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse::<u32>().map_err(|_| bad())?, b.trim().parse::<u32>().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse::<u32>().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi || lo < 2 {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn weight_free(dims: &str) -> Result<Output, CliError> {
    let dims = parse_dims(dims)?;
    let mut table = Table::new(&["N", "mu0", "kappa0", "K"]);
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for n in dims {
        let row = weight_free_table(n)?;
        let p = ConeParams::new(n, BigRational::from_integer(0.into()))?;
        let entries = resolve_lambdas(&p.to_f64(), SphericalDomain::FullSphere, &LambdaSelection::All, Objective::HardyRellich)?;
        let ls: Vec<BigRational> = entries.iter().map(|e| e.exact.clone().expect("sphere eigenvalues are exact")).collect();
        let mu = hardy_rellich_constant(&p, &ls)?;
        let zero = BigRational::from_integer(0.into());
        let kappa = kappa_from(&p, &zero, &mu.value);
        let k = punctured_ball_coefficients(&p, &SphericalDomain::FullSphere, &ls)?.k;
        checks.push(Check::equal(format!("mu0_N{n}"), mu.value == row.mu0));
        checks.push(Check::equal(format!("kappa0_N{n}"), kappa == row.kappa0));
        table.push(vec![n.to_string(), cell(&mu.value), cell(&kappa), cell(&k)]);
        rows.push(json!({ "dim": n, "mu0": num(&mu.value), "kappa0": num(&kappa), "k": num(&k) }));
    }
    Ok(Output { inputs: json!({ "alpha": "0", "domain": "sphere", "lambda": "all" }), results: json!({ "rows": rows }), table, checks })
}

fn spectrum_output(s: &Spectrum, selection: &LambdaSelection, inputs: Value, checks: Vec<Check>) -> Result<Output, CliError> {
    let entries = resolve_selection(s, selection)?;
    let mut table = Table::new(&["label", "lambda", "exact", "multiplicity"]);
    let mut list = Vec::new();
    for e in &entries {
        let exact = e.exact.as_ref().map(exact_repr);
        table.push(vec![e.label.to_string(), fmt_f(e.lambda), exact.clone().unwrap_or_default(), e.multiplicity.to_string()]);
        list.push(json!({ "label": e.label.to_string(), "lambda": e.lambda, "exact": exact, "multiplicity": e.multiplicity }));
    }
    let results = json!({ "principal": s.principal, "entries": list });
    Ok(Output { inputs, results, table, checks })
}

fn oracle_checks(dim: u32, theta0: f64, entries: &[SpectrumEntry], grid: usize) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for e in entries {
        if let ModeLabel::Channel { ell, k } = e.label {
            let fd = channel_eigenvalues_richardson(dim, theta0, ell, k as usize, grid)?;
            out.push(Check::relative(format!("fd_oracle_{}", e.label), e.lambda, fd[k as usize - 1], ORACLE_TOL));
        }
    }
    Ok(out)
}

fn spectrum(kind: &SpectrumKind, rc: &Resolved) -> Result<(String, Output), CliError> {
    match kind {
        SpectrumKind::Sphere { dim, j_max, lambda } => {
            let sel: LambdaSelection = lambda.parse()?;
            let s = sphere_eigenvalues(*dim, *j_max)?;
            let inputs = json!({ "dim": dim, "j_max": j_max, "lambda": sel.to_string() });
            Ok(("spectrum sphere".into(), spectrum_output(&s, &sel, inputs, Vec::new())?))
        }
        SpectrumKind::Hemisphere { dim, j_max, lambda } => {
            let sel: LambdaSelection = lambda.parse()?;
            let s = hemisphere_eigenvalues(*dim, *j_max)?;
            let inputs = json!({ "dim": dim, "j_max": j_max, "lambda": sel.to_string() });
            Ok(("spectrum hemisphere".into(), spectrum_output(&s, &sel, inputs, Vec::new())?))
        }
        SpectrumKind::Cap { dim, theta0, count, ell_max, lambda, oracle_grid } => {
            let sel: LambdaSelection = lambda.parse()?;
            let s = cap_eigenvalues(*dim, *theta0, *count, *ell_max)?;
            let grid = rc.pick(*oracle_grid, "grid-size", DEFAULT_ORACLE_GRID)?;
            let checks = if grid == 0 { Vec::new() } else { oracle_checks(*dim, *theta0, &s.entries, grid)? };
            let inputs = json!({ "dim": dim, "theta0": theta0, "count": count, "ell_max": ell_max, "lambda": sel.to_string(), "oracle_grid": grid });
            Ok(("spectrum cap".into(), spectrum_output(&s, &sel, inputs, checks)?))
        }
    }
}

fn parse_profile(s: &str) -> Result<Profile1D, CliError> {
    let bad = || CliError::Input(format!("cannot read profile '{s}'"));
    let nums = |t: &str, sep: char| -> Result<Vec<f64>, CliError> {
        t.split(sep).map(|x| x.trim().parse::<f64>().map_err(|_| bad())).collect()
    };
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    let prof = match kind {
        "bump" => match nums(rest, ',')?.as_slice() {
            [c, r] => Profile1D::bump(*c, *r)?,
            _ => return Err(bad()),
        },
        "powexp" => match nums(rest, ',')?.as_slice() {
            [q] => Profile1D::pow_exp(*q)?,
            _ => return Err(bad()),
        },
        "spline" => {
            let pts = rest
                .split(',')
                .map(|pair| match nums(pair, ':')?.as_slice() {
                    [t, v] => Ok((*t, *v)),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Profile1D::spline(&pts, EndCondition::Clamped, EndCondition::Clamped)?
        }
        _ => return Err(bad()),
    };
    Ok(prof)
}

fn identity_output(a: &IdentityArgs, reports: Vec<MarginReport>) -> Output {
    let mut table = Table::new(&["identity", "x_space", "cylinder", "rel_discrepancy"]);
    let mut list = Vec::new();
    let mut checks = Vec::new();
    for r in &reports {
        table.push(vec![r.inequality_id.clone(), fmt_f(r.lhs), fmt_f(r.rhs), fmt_f(-r.margin)]);
        list.push(json!({ "name": r.inequality_id, "x_space": r.lhs, "cylinder": r.rhs, "rel_discrepancy": -r.margin }));
        checks.push(Check { name: r.inequality_id.clone(), pass: r.pass, margin: r.margin, tolerance: IDENTITY_TOL });
    }
    let inputs = json!({ "dim": a.weight.dim, "alpha": a.weight.alpha, "mode_lambda": a.mode_lambda, "profile": a.profile });
    Output { inputs, results: json!({ "identities": list }), table, checks }
}

fn verify(kind: &VerifyKind, rc: &Resolved) -> Result<(String, Output), CliError> {
    match kind {
        VerifyKind::EmdenFowler(a) => {
            let w = weighting(&a.weight)?;
            let r = emden_fowler_check(&w.params, &parse_profile(&a.profile)?, a.mode_lambda, &rc.quad)?;
            Ok(("verify emden-fowler".into(), identity_output(a, r)))
        }
        VerifyKind::Kelvin(a) => {
            let w = weighting(&a.weight)?;
            let r = kelvin_check(&w.params, &parse_profile(&a.profile)?, a.mode_lambda, &rc.quad)?;
            Ok(("verify kelvin".into(), identity_output(a, r)))
        }
        VerifyKind::Inequality { id, setting, trials } => {
            let id: InequalityId = id.parse()?;
            let ctx = context(setting)?;
            let trials = rc.pick(*trials, "trials", 100)?;
            let s = random_test_suite(id, &ctx.w.params, ctx.domain, &ctx.selection, trials, rc.seed, &rc.quad)?;
            let mut table = Table::new(&["trial", "lhs", "rhs", "margin", "pass"]);
            let mut checks = Vec::new();
            for (i, r) in s.reports.iter().enumerate() {
                table.push(vec![i.to_string(), fmt_f(r.lhs), fmt_f(r.rhs), fmt_f(r.margin), r.pass.to_string()]);
                checks.push(Check { name: format!("trial_{i}"), pass: r.pass, margin: r.margin, tolerance: r.tolerance });
            }
            let mut inputs = ctx.inputs();
            inputs["id"] = json!(id.to_string());
            inputs["trials"] = json!(trials);
            inputs["seed"] = json!(rc.seed);
            let results = json!({ "trials": s.trials, "passed": s.passed, "min_margin": s.min_margin, "pass": s.pass });
            Ok(("verify inequality".into(), Output { inputs, results, table, checks }))
        }
    }
}

fn eps_grid(arg: &Option<String>, rc: &Resolved) -> Result<Vec<f64>, CliError> {
    let text = match arg {
        Some(t) => Some(t.clone()),
        None => rc.file.raw("eps-grid").map(str::to_string),
    };
    let grid = match text {
        None => DEFAULT_EPS.to_vec(),
        Some(t) => t
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Input(format!("bad epsilon '{x}'"))))
            .collect::<Result<Vec<_>, _>>()?,
    };
    if grid.is_empty() || grid.iter().any(|e| !(*e > 0.0)) {
        return Err(CliError::Input("epsilon grid must hold positive values".into()));
    }
    Ok(grid)
}

fn smallest(grid: &[f64]) -> f64 {
    grid.iter().copied().fold(f64::INFINITY, f64::min)
}

fn sweep(kind: &SweepKind, rc: &Resolved) -> Result<(String, Output), CliError> {
    match kind {
        SweepKind::Sharpness { setting, eps_grid: g } => {
            let ctx = context(setting)?;
            let grid = eps_grid(g, rc)?;
            let ls = ctx.float_lambdas()?;
            let c = hardy_rellich_constant(&ctx.w.params, &ls)?;
            let profile = Profile1D::bump(0.0, 1.0)?;
            let r = sharpness_sweep(&ctx.w.params, c.argmin_lambda, &profile, &grid, &rc.quad)?;
            let mut table = Table::new(&["eps", "eps2", "quotient"]);
            for pt in &r.points {
                table.push(vec![fmt_f(pt.eps), fmt_f(pt.eps2), fmt_f(pt.quotient)]);
            }
            let at_min = r.points.iter().min_by(|a, b| a.eps.total_cmp(&b.eps)).map(|p| p.quotient).unwrap_or(f64::NAN);
            let checks = vec![
                Check::equal("monotone", r.monotone),
                Check::relative("gap_at_smallest_eps", at_min, c.value, SWEEP_TOL),
            ];
            let mut inputs = ctx.inputs();
            inputs["eps_grid"] = json!(grid);
            inputs["profile"] = json!("bump:0,1");
            let results = json!({ "constant": c.value, "lambda": r.lambda, "limit": r.limit, "gap_rel": r.gap_rel, "monotone": r.monotone, "points": r.points });
            Ok(("sweep sharpness".into(), Output { inputs, results, table, checks }))
        }
        SweepKind::RFunctional { eps_grid: g } => {
            let grid = eps_grid(g, rc)?;
            let limit = (33.0f64 / 2.0).sqrt() + 1.25;
            let mut table = Table::new(&["eps", "r_gamma", "r_quadrature", "path_rel_diff"]);
            let mut points = Vec::new();
            let mut checks = Vec::new();
            for &eps in &grid {
                let rg = r_functional(&family_moments(1.5 + eps, MomentPath::Gamma, &rc.quad)?)?;
                let rq = r_functional(&family_moments(1.5 + eps, MomentPath::Quadrature, &rc.quad)?)?;
                table.push(vec![fmt_f(eps), fmt_f(rg), fmt_f(rq), fmt_f((rg - rq).abs() / rg.abs())]);
                points.push(json!({ "eps": eps, "r_gamma": rg, "r_quadrature": rq }));
                checks.push(Check::relative(format!("paths_agree_eps_{eps}"), rq, rg, PATH_TOL));
                if eps == smallest(&grid) {
                    checks.push(Check::margin("near_limit", -(rg - limit).abs(), R_LIMIT_TOL));
                }
            }
            let inputs = json!({ "eps_grid": grid, "family": "t^(3/2+eps) e^-t" });
            Ok(("sweep r-functional".into(), Output { inputs, results: json!({ "limit": limit, "points": points }), table, checks }))
        }
        SweepKind::Hardy1d { eps_grid: g } => Ok(("sweep hardy1d".into(), oned(OneDKind::Hardy, &eps_grid(g, rc)?, rc)?)),
        SweepKind::Rellich1d { eps_grid: g } => Ok(("sweep rellich1d".into(), oned(OneDKind::Rellich, &eps_grid(g, rc)?, rc)?)),
    }
}

fn oned(kind: OneDKind, grid: &[f64], rc: &Resolved) -> Result<Output, CliError> {
    let constant = kind.constant();
    let gamma = oned_sharpness(kind, &OneDFamily::PowerExp(MomentPath::Gamma), grid, &rc.quad)?;
    let quad = oned_sharpness(kind, &OneDFamily::PowerExp(MomentPath::Quadrature), grid, &rc.quad)?;
    let mut table = Table::new(&["eps", "quotient_gamma", "quotient_quadrature"]);
    let mut points = Vec::new();
    let mut checks = Vec::new();
    for (a, b) in gamma.iter().zip(&quad) {
        table.push(vec![fmt_f(a.eps), fmt_f(a.quotient), fmt_f(b.quotient)]);
        points.push(json!({ "eps": a.eps, "quotient_gamma": a.quotient, "quotient_quadrature": b.quotient }));
        checks.push(Check::margin(format!("above_constant_eps_{}", a.eps), (a.quotient - constant) / constant, 1e-12));
        checks.push(Check::relative(format!("paths_agree_eps_{}", a.eps), b.quotient, a.quotient, PATH_TOL));
        if a.eps == smallest(grid) {
            checks.push(Check::relative("near_constant", a.quotient, constant, ONED_TOL));
        }
    }
    let base = match kind {
        OneDKind::Hardy => "t^(1/2+eps) e^-t",
        OneDKind::Rellich => "t^(3/2+eps) e^-t",
    };
    let inputs = json!({ "eps_grid": grid, "family": base });
    Ok(Output { inputs, results: json!({ "constant": constant, "points": points }), table, checks })
}

fn estimate(weight: &Weight, theta0: f64, grid: &DirichletGrid, rc: &Resolved) -> Result<Output, CliError> {
    let w = weighting(weight)?;
    let ell_max = rc.pick(grid.ell_max, "ell-max", DIR_ELL_MAX)?;
    let grid_size = rc.pick(grid.grid_size, "grid-size", DEFAULT_ESTIMATE_GRID)?;
    let domain = SphericalDomain::cap(theta0)?;
    let est = dirichlet_estimate(&w.params, theta0, ell_max, grid_size)?;
    let entries = resolve_lambdas(&w.params, domain, &LambdaSelection::All, Objective::HardyRellich)?;
    let ls: Vec<f64> = entries.iter().map(|e| e.lambda).collect();
    let navier = navier_coefficients(&w.params, &ls)?.a0;
    let spectrum = cap_eigenvalues(w.params.dim, theta0, entries.len().max(1), None)?;
    let resonance = resonance_report(&w.params, &spectrum, &LambdaSelection::All)?;
    let mut table = Table::new(&["ell", "mu0", "iterations"]);
    for c in &est.per_mode {
        table.push(vec![c.ell.to_string(), fmt_f(c.mu0), c.iterations.to_string()]);
    }
    let gap = est.mu0 - navier;
    let checks = vec![
        Check { name: "above_navier".into(), pass: gap > 0.0, margin: gap, tolerance: 0.0 },
        Check { name: "positive".into(), pass: est.mu0 > 0.0, margin: est.mu0, tolerance: 0.0 },
        Check::margin("refinement", -est.refinement.rel_delta, REFINE_TOL),
        Check::margin("refines_downward", (est.refinement.coarse_mu0 - est.mu0) / est.mu0.abs(), MONOTONE_SLACK),
    ];
    let inputs = json!({ "dim": w.params.dim, "alpha": w.text, "theta0": theta0, "ell_max": ell_max, "grid_size": grid_size });
    let results = json!({
        "mu0": est.mu0,
        "argmin_ell": est.argmin_ell,
        "navier_constant": navier,
        "gap": gap,
        "resonant": resonance.resonant,
        "per_mode": est.per_mode,
        "refinement": est.refinement,
    });
    Ok(Output { inputs, results, table, checks })
}
