use num_complex::Complex64;
use twistlab::evaluate::SmoothedEvaluator;
use twistlab::oscillatory::{first_derivative_bound, i_n_quadrature, i_n_stationary_phase, PhaseFamily};
use twistlab::special::{gamma_ratio_asymptotic_printed, gamma_ratio_exact, sector_threshold, GammaRatio};
use twistlab::summatory::{growth_scan, omega_certificate, twist_scan};
use twistlab::transform::{constant_ledger, kappa, transform_report, Route, TransformSettings};
use twistlab::{resonance_alpha, Budget, Convention, Error, LSeriesInstance, SmoothingParams};

use crate::grid::{parse_grid, parse_int_range};
use crate::output::{Cell, Table};
use crate::CliError;

pub fn fmt_complex(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn grid(spec: &str, name: &str) -> Result<Vec<f64>, CliError> {
    parse_grid(spec).map_err(|e| usage(format!("--{name}: {e}")))
}

/// `auto` picks the frequency resonant with a_m.
fn resolve_alpha(instance: &LSeriesInstance, spec: &str, m: u64) -> Result<f64, CliError> {
    if spec == "auto" {
        let inv = instance.invariants()?;
        return Ok(resonance_alpha(m, &inv, instance.fe().q())?);
    }
    let alpha: f64 = spec
        .parse()
        .map_err(|_| usage(format!("--alpha must be 'auto' or a number, got '{spec}'")))?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(usage("--alpha must be positive"));
    }
    Ok(alpha)
}

fn smoothing(p: f64, rho: f64, base: SmoothingParams) -> Result<SmoothingParams, CliError> {
    let sp = base.with_p(p).with_rho(rho);
    sp.validate()?;
    Ok(sp)
}

pub fn describe(instance: &LSeriesInstance, m: u64) -> Result<Table, CliError> {
    let inv = instance.invariants()?;
    let fe = instance.fe();
    let mut table = Table::new("describe", &["quantity", "value"]);
    table.param("m", m);
    let mut row = |k: &str, v: String| table.push(vec![k.into(), v.into()]);
    row("name", instance.name().to_string());
    row("d", inv.d.to_string());
    row("A", inv.a.to_string());
    row("B", inv.b.to_string());
    row("B_printed", fmt_complex(inv.b_printed));
    row("C", inv.c.to_string());
    row("Q", fe.q().to_string());
    row("omega", fmt_complex(fe.omega()));
    row("sigma_a", instance.sigma_a().to_string());
    for g in fe.gamma().numerator() {
        row("gamma_numerator", format!("lambda={} mu={}", g.lambda, fmt_complex(g.mu)));
    }
    for g in fe.gamma().denominator() {
        row("gamma_denominator", format!("lambda={} mu={}", g.lambda, fmt_complex(g.mu)));
    }
    for pole in fe.poles() {
        let parts: Vec<String> = pole.principal_part.iter().map(|c| fmt_complex(*c)).collect();
        row("pole", format!("s={} principal=[{}]", fmt_complex(pole.location), parts.join(";")));
    }
    row("sector_threshold", sector_threshold(fe.gamma()).to_string());
    let alpha = resonance_alpha(m, &inv, fe.q())?;
    row("resonant_alpha", alpha.to_string());
    let a_m = instance.coefficients().coefficient(m)?;
    row("a_m", fmt_complex(a_m));
    for convention in [Convention::OracleCalibrated, Convention::PaperPrinted] {
        let k = kappa(instance, alpha, m, convention)?;
        row(&format!("kappa_{}", convention.name()), fmt_complex(k.value));
    }
    Ok(table)
}

pub enum CoeffRequest {
    Single(u64),
    Bulk(u64),
}

pub fn coeffs(instance: &LSeriesInstance, request: CoeffRequest, budget: &Budget) -> Result<Table, CliError> {
    let mut table = Table::new("coeffs", &["n", "re", "im"]);
    match request {
        CoeffRequest::Single(n) => {
            table.param("n", n);
            let a = instance.coefficients().coefficient(n)?;
            table.push(vec![n.into(), a.re.into(), a.im.into()]);
        }
        CoeffRequest::Bulk(n) => {
            table.param("bulk", n);
            budget.check_terms(n, "coefficient table")?;
            let values = instance.coefficients().bulk(n)?;
            for (i, a) in values.values().iter().enumerate() {
                table.push(vec![(i as u64 + 1).into(), a.re.into(), a.im.into()]);
            }
        }
    }
    Ok(table)
}

pub struct EvalArgs<'a> {
    pub sigma: f64,
    pub t: &'a str,
    pub cutoff: Option<f64>,
    pub p: f64,
}

pub fn eval(instance: &LSeriesInstance, args: &EvalArgs, budget: &Budget) -> Result<Table, CliError> {
    let ts = grid(args.t, "t")?;
    let mut table = Table::new("eval", &["t", "re", "im", "terms_used", "tail_bound", "X"]);
    table.param("sigma", args.sigma);
    table.param("t", args.t);
    table.param("X", args.cutoff.map_or("auto".to_string(), |x| x.to_string()));
    table.param("p", args.p);
    let d = instance.degree();
    let fixed = match args.cutoff {
        Some(x) => {
            let sp = SmoothingParams::new(x).with_p(args.p);
            sp.validate()?;
            Some(SmoothedEvaluator::new(instance, args.sigma, &sp, budget)?)
        }
        None => None,
    };
    for t in ts {
        let per_point;
        let evaluator = match &fixed {
            Some(e) => e,
            None => {
                let sp = SmoothingParams::standalone(t, d).with_p(args.p);
                sp.validate()?;
                per_point = SmoothedEvaluator::new(instance, args.sigma, &sp, budget)?;
                &per_point
            }
        };
        let e = evaluator.evaluate(t)?;
        table.push(vec![
            t.into(),
            e.value.re.into(),
            e.value.im.into(),
            e.terms_used.into(),
            e.tail_bound.into(),
            evaluator.params().cutoff.into(),
        ]);
    }
    Ok(table)
}

pub fn gamma_check(
    instance: &LSeriesInstance,
    x: f64,
    t_grid: &str,
    convention: Convention,
) -> Result<Table, CliError> {
    let ts = grid(t_grid, "t-grid")?;
    let spec = instance.fe().gamma();
    let mut table = Table::new("gamma-check", &["t", "exact_re", "exact_im", "asym_re", "asym_im", "rel_err"]);
    table.param("x", x);
    table.param("t-grid", t_grid);
    table.param("convention", convention.name());
    for t in ts {
        let r = match convention {
            Convention::OracleCalibrated => twistlab::special::gamma_ratio(spec, x, t)?,
            Convention::PaperPrinted => {
                let exact = gamma_ratio_exact(spec, x, t)?;
                let asymptotic = gamma_ratio_asymptotic_printed(spec, x, t)?;
                GammaRatio {
                    exact,
                    asymptotic,
                    relative_error: (exact - asymptotic).norm() / asymptotic.norm(),
                }
            }
        };
        table.push(vec![
            t.into(),
            r.exact.re.into(),
            r.exact.im.into(),
            r.asymptotic.re.into(),
            r.asymptotic.im.into(),
            r.relative_error.into(),
        ]);
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OscMode {
    Quad,
    Sp,
    Both,
}

pub struct OscArgs<'a> {
    pub d: f64,
    pub alpha: f64,
    pub t: f64,
    pub n: &'a str,
    pub mode: OscMode,
    pub tol: f64,
    pub convention: Convention,
}

pub fn osc(args: &OscArgs) -> Result<Table, CliError> {
    let ns = parse_int_range(args.n).map_err(|e| usage(format!("--n: {e}")))?;
    if !(args.t > 0.0) {
        return Err(usage("--T must be positive"));
    }
    let mut table = Table::new(
        "osc",
        &["n", "quad_re", "quad_im", "sp_re", "sp_im", "abs_diff", "stationary", "fd_bound"],
    );
    table.param("d", args.d);
    table.param("alpha", args.alpha);
    table.param("T", args.t);
    table.param("n", args.n);
    table.param("mode", format!("{:?}", args.mode).to_lowercase());
    table.param("tol", args.tol);
    table.param("convention", args.convention.name());
    for n in ns {
        let family = PhaseFamily::new(args.alpha, n as f64, args.d)?;
        let stationary = family.is_stationary(args.t);
        let quad = match args.mode {
            OscMode::Sp => None,
            _ => Some(i_n_quadrature(&family, args.t, args.tol)?.value),
        };
        let sp = match (args.mode, stationary) {
            (OscMode::Quad, _) | (_, false) => None,
            _ => Some(i_n_stationary_phase(&family, args.t, args.convention)?),
        };
        let bound = if stationary { None } else { first_derivative_bound(&family, args.t).ok() };
        let diff = match (quad, sp) {
            (Some(q), Some(s)) => Some((q - s).norm()),
            _ => None,
        };
        table.push(vec![
            n.into(),
            quad.map(|z| z.re).into(),
            quad.map(|z| z.im).into(),
            sp.map(|z| z.re).into(),
            sp.map(|z| z.im).into(),
            diff.into(),
            stationary.into(),
            bound.into(),
        ]);
    }
    Ok(table)
}

pub struct TransformArgs<'a> {
    pub m: u64,
    pub alpha: &'a str,
    pub t_grid: Option<&'a str>,
    pub routes: &'a str,
    pub convention: Convention,
    pub tol: f64,
    pub p: f64,
    pub rho: f64,
    pub ledger: bool,
}

pub fn transform(instance: &LSeriesInstance, args: &TransformArgs, budget: &Budget) -> Result<Table, CliError> {
    if args.ledger {
        let mut table = Table::new("transform", &["quantity", "printed", "calibrated", "note"]);
        table.param("m", args.m);
        table.param("ledger", true);
        for e in constant_ledger(instance, args.m)? {
            table.push(vec![e.quantity.into(), e.printed.into(), e.calibrated.into(), e.note.into()]);
        }
        return Ok(table);
    }
    let t_grid = args.t_grid.ok_or_else(|| usage("--T-grid is required unless --ledger is given"))?;
    let ts = grid(t_grid, "T-grid")?;
    let routes = args
        .routes
        .split(',')
        .map(|r| Route::parse(r.trim()))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(|e| usage(format!("--routes: {e}")))?;
    if !(args.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let alpha = resolve_alpha(instance, args.alpha, args.m)?;
    let settings = TransformSettings {
        params: smoothing(args.p, args.rho, SmoothingParams::new(1.0))?,
        convention: args.convention,
        tol: args.tol,
        budget: *budget,
    };
    let mut table = Table::new(
        "transform",
        &[
            "T", "direct_re", "direct_im", "sum_re", "sum_im", "fe_re", "fe_im", "dev_direct_sum", "dev_direct_fe",
            "dev_sum_fe",
        ],
    );
    table.param("m", args.m);
    table.param("alpha", alpha);
    table.param("T-grid", t_grid);
    table.param("routes", args.routes);
    table.param("convention", args.convention.name());
    table.param("tol", args.tol);
    table.param("p", args.p);
    table.param("rho", args.rho);
    for t in ts {
        let r = transform_report(instance, alpha, args.m, t, &routes, &settings)?;
        let dev = |a: Route, b: Route| -> Cell {
            r.deviations
                .iter()
                .find(|(x, y, _)| *x == a && *y == b)
                .map(|(_, _, v)| *v)
                .into()
        };
        table.push(vec![
            t.into(),
            r.direct.map(|z| z.re).into(),
            r.direct.map(|z| z.im).into(),
            r.sum_side.map(|z| z.re).into(),
            r.sum_side.map(|z| z.im).into(),
            r.fe_side.map(|z| z.re).into(),
            r.fe_side.map(|z| z.im).into(),
            dev(Route::Direct, Route::Sum),
            dev(Route::Direct, Route::Fe),
            dev(Route::Sum, Route::Fe),
        ]);
    }
    Ok(table)
}

pub struct TwistArgs<'a> {
    pub alpha: &'a str,
    pub m: u64,
    pub t_grid: &'a str,
    pub p: f64,
    pub rho: f64,
}

pub fn twist(instance: &LSeriesInstance, args: &TwistArgs, budget: &Budget) -> Result<Table, CliError> {
    let ts = grid(args.t_grid, "T-grid")?;
    let alpha = resolve_alpha(instance, args.alpha, args.m)?;
    let sp = smoothing(args.p, args.rho, SmoothingParams::for_twist())?;
    let report = twist_scan(instance, alpha, &ts, &sp, budget)?;
    let mut table = Table::new("twist-scan", &["T", "tw_re", "tw_im", "normalized"]);
    table.param("alpha", alpha);
    table.param("m", args.m);
    table.param("T-grid", args.t_grid);
    table.param("p", args.p);
    table.param("rho", args.rho);
    if let Some(fit) = report.fit {
        table.note("slope", fit.slope);
        table.note("slope_stderr", fit.slope_stderr);
    }
    for ((t, w), n) in report.grid.iter().zip(&report.twists).zip(&report.normalized) {
        table.push(vec![(*t).into(), w.re.into(), w.im.into(), (*n).into()]);
    }
    Ok(table)
}

pub fn summatory(instance: &LSeriesInstance, x_grid: &str, budget: &Budget) -> Result<Table, CliError> {
    let xs = grid(x_grid, "X-grid")?;
    let report = growth_scan(instance, &xs, budget)?;
    let mut table = Table::new("summatory", &["X", "abs_sum"]);
    table.param("X-grid", x_grid);
    table.note("slope", report.fit.slope);
    table.note("slope_stderr", report.fit.slope_stderr);
    table.note("constant", report.fit.intercept.exp());
    for (x, s) in report.grid.iter().zip(&report.sums) {
        table.push(vec![(*x).into(), (*s).into()]);
    }
    Ok(table)
}

pub struct CertifyArgs<'a> {
    pub m: u64,
    pub alpha: &'a str,
    pub t_grid: &'a str,
    pub convention: Convention,
    pub p: f64,
    pub rho: f64,
    pub strict: bool,
}

/// Returns the table and whether a strict run should fail.
pub fn certify(instance: &LSeriesInstance, args: &CertifyArgs, budget: &Budget) -> Result<(Table, bool), CliError> {
    let ts = grid(args.t_grid, "T-grid")?;
    let alpha = resolve_alpha(instance, args.alpha, args.m)?;
    let sp = smoothing(args.p, args.rho, SmoothingParams::for_twist())?;
    let k = kappa(instance, alpha, args.m, args.convention)?;
    let rows = omega_certificate(instance, alpha, args.m, &k, &ts, &sp, budget)?;
    let d = instance.degree();
    // Beyond this abscissa the twist's error term is not known to be smaller
    // than the main term, so failures are reported but not asserted.
    let asserted = instance.sigma_a() <= 0.5 + 0.5 / d + 1e-12;
    let failures = rows.iter().filter(|r| !(r.pass && r.triangle_ok)).count();
    let mut table = Table::new("certify", &["T", "lhs", "rhs", "pass", "margin", "abs_sum", "triangle_ok"]);
    table.param("m", args.m);
    table.param("alpha", alpha);
    table.param("T-grid", args.t_grid);
    table.param("convention", args.convention.name());
    table.param("p", args.p);
    table.param("rho", args.rho);
    table.param("strict", args.strict);
    table.note("mode", if asserted { "assert" } else { "report" });
    table.note("kappa_abs", k.value.norm());
    table.note("failures", failures);
    for r in &rows {
        table.push(vec![
            r.t.into(),
            r.lhs.into(),
            r.rhs.into(),
            r.pass.into(),
            r.margin.into(),
            r.abs_sum.into(),
            r.triangle_ok.into(),
        ]);
    }
    Ok((table, args.strict && asserted && failures > 0))
}
