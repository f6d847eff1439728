//! The experiment runners behind `frame experiment` and `frame solve`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use fracframes::basis1d::Interval;
use fracframes::frame::{
    assemble, collocation_grid_1d, collocation_grid_2d, operator_image, tsvd_solve, BasisFamily, Cutoff, FamilyKind,
    Geometry, OperatorSpec, Point, SumSpace,
};
use fracframes::linalg::Matrix;
use fracframes::specfun::{gamma, hyp1f1};
use fracframes::timestep::{integrate, integrate_variable_s, Method, TimeState};
use serde::Serialize;

use crate::config::{Config, CutoffKind, ExperimentKind, RhsSpec};
use crate::output::{Cell, Outputs};

/// One entry of the N schedule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    /// ℓ∞ error of the fitted right-hand side at the collocation points.
    pub rhs_linf_error: f64,
    /// ℓ∞ error of the read-off solution at the collocation points (NaN
    /// when no exact solution is known).
    pub sol_linf_error: f64,
    pub coeff_inf_norm: f64,
    pub kept_rank: usize,
    pub wall_ms: f64,
}

/// One (method, dt) run of a time-dependent experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeRow {
    pub method: String,
    pub dt: f64,
    /// max over steps and collocation points of |u − Sv| / |u|.
    pub max_rel_error: f64,
}

/// Log-log slope of the final solution on the tail range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub run: String,
    /// Exponent in force at the final time.
    pub s_end: f64,
    pub tail_slope: f64,
}

/// Everything an experiment produced.
#[derive(Debug, Clone)]
pub struct Report {
    pub name: String,
    pub convergence: Vec<ConvergenceRow>,
    pub time: Vec<TimeRow>,
    pub tails: Vec<TailRow>,
    pub metrics: BTreeMap<String, f64>,
    /// Space and coefficients of the last stationary solve.
    pub final_solution: Option<(SumSpace<f64>, Vec<f64>)>,
}

impl Report {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            convergence: Vec::new(),
            time: Vec::new(),
            tails: Vec::new(),
            metrics: BTreeMap::new(),
            final_solution: None,
        }
    }

    /// Smallest solution error over the N schedule.
    pub fn best_sol_error(&self) -> f64 {
        self.convergence.iter().map(|r| r.sol_linf_error).fold(f64::INFINITY, f64::min)
    }

    pub fn best_rhs_error(&self) -> f64 {
        self.convergence.iter().map(|r| r.rhs_linf_error).fold(f64::INFINITY, f64::min)
    }

    pub fn time_error(&self, method: &str, dt: f64) -> Option<f64> {
        self.time.iter().find(|r| r.method == method && r.dt == dt).map(|r| r.max_rel_error)
    }
}

/// Families, grid and operator of a configuration.
#[derive(Debug, Clone)]
pub struct Setup {
    /// The space at the largest N of the schedule.
    pub space: SumSpace<f64>,
    pub points: Vec<Point<f64>>,
    pub op: OperatorSpec<f64>,
    pub dim: usize,
}

fn is_2d(config: &Config) -> bool {
    config.experiment == ExperimentKind::Gaussian2d
}

fn intervals(breaks: &[f64]) -> Result<Vec<Interval<f64>>> {
    breaks.windows(2).map(|w| Interval::new(w[0], w[1]).map_err(Into::into)).collect()
}

/// Extended and weighted families for the given exponents.
pub fn families(config: &Config, extended: f64, weighted: f64) -> Result<Vec<BasisFamily<f64>>> {
    let offset = config.space.extended_offset;
    let mut fams = Vec::new();
    if is_2d(config) {
        for &r in &config.space.disk_radii {
            fams.push(BasisFamily::extended_zernike(extended, r)?);
        }
        for &r in &config.space.disk_radii {
            fams.push(BasisFamily::weighted_zernike(weighted, r)?);
        }
    } else {
        let ivs = intervals(&config.grid.breaks).context("grid.breaks")?;
        for iv in &ivs {
            fams.push(BasisFamily::extended_jacobi(extended, extended, *iv, offset)?);
        }
        for iv in &ivs {
            fams.push(BasisFamily::weighted_jacobi(weighted, *iv)?);
        }
    }
    Ok(fams)
}

pub fn collocation_points(config: &Config) -> Result<Vec<Point<f64>>> {
    let g = &config.grid;
    if is_2d(config) {
        return Ok(collocation_grid_2d(&g.breaks, g.pts_per_segment, g.eps_offset, g.n_angles)?);
    }
    let ivs = intervals(&g.breaks).context("grid.breaks")?;
    let pads = match g.pads.as_slice() {
        [] => None,
        [l, r] => Some((Interval::new(l[0], l[1])?, Interval::new(r[0], r[1])?)),
        _ => bail!("grid.pads holds either no segments or a left and a right one"),
    };
    Ok(collocation_grid_1d(&ivs, g.pts_per_segment, g.eps_offset, pads)?)
}

pub fn operator(config: &Config) -> Result<OperatorSpec<f64>> {
    Ok(OperatorSpec::new(config.operator.terms.iter().map(|t| (t[0], t[1])).collect())?)
}

pub fn setup(config: &Config) -> Result<Setup> {
    let fams = families(config, config.space.extended_exponent, config.space.weighted_exponent)?;
    Ok(Setup {
        space: SumSpace::new(fams, config.n_max())?,
        points: collocation_points(config)?,
        op: operator(config)?,
        dim: if is_2d(config) { 2 } else { 1 },
    })
}

fn cutoff(config: &Config) -> Cutoff<f64> {
    match config.svd_cutoff {
        CutoffKind::Relative => Cutoff::Relative(config.svd_eps),
        CutoffKind::Absolute => Cutoff::Absolute(config.svd_eps),
    }
}

fn r2(p: &Point<f64>) -> f64 {
    match *p {
        Point::D1(x) => x * x,
        Point::D2(x, y) => x * x + y * y,
    }
}

/// (−Δ)^s e^{−|x|²} on ℝ^d: 4^s Γ(d/2 + s)/Γ(d/2) ₁F₁(d/2 + s; d/2; −|x|²).
pub fn frac_lap_gaussian(dim: usize, s: f64, r2: f64) -> Result<f64> {
    if s == 0.0 {
        return Ok((-r2).exp());
    }
    let h = dim as f64 / 2.0;
    Ok(4f64.powf(s) * gamma(h + s)? / gamma(h)? * hyp1f1(h + s, h, -r2)?)
}

fn elapsed_ms(config: &Config, start: Instant) -> f64 {
    if config.record_wall_time {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    }
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(&x, &y)| (x.ln(), y.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// First `n` columns of `m` applied to `c`.
fn prefix_matvec(m: &Matrix<f64>, c: &[f64]) -> Vec<f64> {
    (0..m.rows()).map(|i| m.row(i)[..c.len()].iter().zip(c).map(|(a, b)| a * b).sum()).collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Runs the experiment of `config`, writing its files to `out`.
pub fn run(config: &Config, out: &mut Outputs) -> Result<Report> {
    let report = match config.experiment {
        ExperimentKind::Gaussian | ExperimentKind::MultExponents | ExperimentKind::Gaussian2d => {
            run_stationary(config, out)?
        }
        ExperimentKind::FracHeat => run_heat(config, out)?,
        ExperimentKind::VariableS => run_variable_s(config, out)?,
    };
    write_summary(config, &report, out)?;
    Ok(report)
}

#[derive(Serialize)]
struct Summary<'a> {
    library_version: &'static str,
    config: &'a Config,
    metrics: &'a BTreeMap<String, f64>,
    files: Vec<String>,
}

fn write_summary(config: &Config, report: &Report, out: &mut Outputs) -> Result<()> {
    let mut files: Vec<String> =
        out.written().iter().filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned())).collect();
    files.push("summary.json".into());
    let summary = Summary { library_version: fracframes::VERSION, config, metrics: &report.metrics, files };
    out.json("summary.json", &summary)
}

/// Samples of the right-hand side and, when known, of the exact solution.
fn problem_data(
    config: &Config,
    setup: &Setup,
    image_matrix: &Matrix<f64>,
    id_matrix: &Matrix<f64>,
) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    match &config.problem.rhs {
        RhsSpec::Gaussian => {
            let mut f = vec![0.0; setup.points.len()];
            for &(lambda, s) in &setup.op.terms {
                for (fi, p) in f.iter_mut().zip(&setup.points) {
                    *fi += lambda * frac_lap_gaussian(setup.dim, s, r2(p))?;
                }
            }
            let u = setup.points.iter().map(|p| (-r2(p)).exp()).collect();
            Ok((f, Some(u)))
        }
        &RhsSpec::Column(j) => {
            if j >= setup.space.len() {
                bail!("problem.rhs column {j} is outside the {} columns of the space", setup.space.len());
            }
            Ok((image_matrix.column(j), Some(id_matrix.column(j))))
        }
        RhsSpec::Samples(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let mut lines = text.lines().filter(|l| !l.trim().is_empty());
            if lines.next().map(str::trim) != Some("f") {
                bail!("{}: expected a header row `f`", path.display());
            }
            let f = lines
                .enumerate()
                .map(|(i, l)| l.trim().parse::<f64>().with_context(|| format!("{}: row {}", path.display(), i + 2)))
                .collect::<Result<Vec<_>>>()?;
            if f.len() != setup.points.len() {
                bail!("{}: {} samples for {} collocation points", path.display(), f.len(), setup.points.len());
            }
            Ok((f, None))
        }
    }
}

fn run_stationary(config: &Config, out: &mut Outputs) -> Result<Report> {
    let setup = setup(config)?;
    let cut = cutoff(config);
    log::info!("{}: {} points, N up to {}", config.name, setup.points.len(), setup.space.len());
    let image = operator_image(&setup.space, &setup.op)?;
    let image_sys = assemble(&image, &setup.points)?;
    let id_sys = assemble(&setup.space.as_image(), &setup.points)?;
    let (f, exact) = problem_data(config, &setup, &image_sys.matrix, &id_sys.matrix)?;

    let mut csv = out.csv(
        &format!("{}_convergence.csv", config.name),
        &["N", "rhs_linf_error", "sol_linf_error", "coeff_inf_norm", "kept_rank", "wall_ms"],
    )?;
    let mut report = Report::new(&config.name);
    for &n in &config.space.n_schedule {
        let start = Instant::now();
        let sys = image_sys.truncated(n).with_context(|| format!("at N = {n}"))?;
        let fit = tsvd_solve(&sys, &f, cut).with_context(|| format!("solve failed at N = {n}"))?;
        let rhs_err = max_abs_diff(&sys.matrix.matvec(&fit.coeffs), &f);
        let sol_err = match &exact {
            Some(u) => max_abs_diff(&prefix_matvec(&id_sys.matrix, &fit.coeffs), u),
            None => f64::NAN,
        };
        let row = ConvergenceRow {
            n,
            rhs_linf_error: rhs_err,
            sol_linf_error: sol_err,
            coeff_inf_norm: fit.coeff_inf_norm,
            kept_rank: fit.kept_rank,
            wall_ms: elapsed_ms(config, start),
        };
        log::info!("N = {n}: rhs {rhs_err:.3e}, sol {sol_err:.3e}, rank {}", fit.kept_rank);
        csv.row(&[
            Cell::Int(row.n),
            Cell::Float(row.rhs_linf_error),
            Cell::Float(row.sol_linf_error),
            Cell::Float(row.coeff_inf_norm),
            Cell::Int(row.kept_rank),
            Cell::Float(row.wall_ms),
        ])?;
        report.convergence.push(row);
        if n == config.n_max() {
            report.final_solution = Some((setup.space.truncated(n), fit.coeffs));
        }
    }
    report.metrics.insert("best_rhs_linf_error".into(), report.best_rhs_error());
    report.metrics.insert("best_sol_linf_error".into(), report.best_sol_error());
    Ok(report)
}

/// (1 + t)/(x² + (1 + t)²), the s = 1/2 heat solution from u₀ = 1/(1 + x²).
pub fn heat_exact(x: f64, t: f64) -> f64 {
    (1.0 + t) / (x * x + (1.0 + t) * (1.0 + t))
}

fn time_config(config: &Config) -> Result<&crate::config::TimeConfig> {
    config.time.as_ref().ok_or_else(|| anyhow!("missing [time] table"))
}

fn methods(names: &[String]) -> Result<Vec<Method>> {
    names.iter().map(|m| m.parse::<Method>().with_context(|| format!("time.methods: {m}"))).collect()
}

fn xs_of(points: &[Point<f64>]) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|p| match *p {
            Point::D1(x) => Ok(x),
            Point::D2(..) => Err(anyhow!("time-dependent runs are one-dimensional")),
        })
        .collect()
}

fn run_heat(config: &Config, out: &mut Outputs) -> Result<Report> {
    let time = time_config(config)?;
    let setup = setup(config)?;
    if setup.op.terms.len() != 1 || (setup.op.terms[0].0 - 1.0).abs() > 0.0 || (setup.op.terms[0].1 - 0.5).abs() > 1e-15
    {
        bail!("frac-heat compares against the exact solution for (−Δ)^(1/2); operator.terms must be [[1.0, 0.5]]");
    }
    let cut = cutoff(config);
    let xs = xs_of(&setup.points)?;
    let x_sys = assemble(&setup.space.as_image(), &setup.points)?;
    let x_star = assemble(&operator_image(&setup.space, &setup.op)?, &setup.points)?.matrix;
    let u0: Vec<f64> = xs.iter().map(|&x| heat_exact(x, 0.0)).collect();

    let mut report = Report::new(&config.name);
    let mut conv = out.csv(
        &format!("{}_convergence.csv", config.name),
        &["N", "rhs_linf_error", "sol_linf_error", "coeff_inf_norm", "kept_rank", "wall_ms"],
    )?;
    // the convergence table records the expansion of u₀, where data and solution coincide
    for &n in &config.space.n_schedule {
        let start = Instant::now();
        let sys = x_sys.truncated(n)?;
        let fit = tsvd_solve(&sys, &u0, cut).with_context(|| format!("initial expansion failed at N = {n}"))?;
        let err = max_abs_diff(&sys.matrix.matvec(&fit.coeffs), &u0);
        let row = ConvergenceRow {
            n,
            rhs_linf_error: err,
            sol_linf_error: err,
            coeff_inf_norm: fit.coeff_inf_norm,
            kept_rank: fit.kept_rank,
            wall_ms: elapsed_ms(config, start),
        };
        conv.row(&[
            Cell::Int(n),
            Cell::Float(err),
            Cell::Float(err),
            Cell::Float(row.coeff_inf_norm),
            Cell::Int(row.kept_rank),
            Cell::Float(row.wall_ms),
        ])?;
        report.convergence.push(row);
    }
    let init_fit = tsvd_solve(&x_sys, &u0, cut)?;
    let init_err = max_abs_diff(&x_sys.matrix.matvec(&init_fit.coeffs), &u0);
    report.metrics.insert("initial_linf_error".into(), init_err);
    log::info!("{}: initial expansion error {init_err:.3e}", config.name);
    let init = TimeState::new(0.0, init_fit.coeffs, setup.space.clone())?;

    let mut csv = out.csv(&format!("{}_time.csv", config.name), &["method", "dt", "max_rel_error"])?;
    for method in methods(&time.methods)? {
        let tab = method.tableau::<f64>();
        let mut errs = Vec::new();
        for &dt in &time.dts {
            let traj = integrate(init.clone(), &tab, dt, time.t_end, &x_sys.matrix, &x_star, cut, true)
                .with_context(|| format!("{} failed at dt = {dt}", method.name()))?;
            let mut worst = 0.0f64;
            for state in &traj.states[1..] {
                let v = x_sys.matrix.matvec(&state.coeffs);
                for (vi, &x) in v.iter().zip(&xs) {
                    let u = heat_exact(x, state.t);
                    worst = worst.max((u - vi).abs() / u.abs());
                }
            }
            let last = traj.last();
            for &x in &time.tail_points {
                let got = last.space.evaluate(&last.coeffs, Point::D1(x))?;
                let want = heat_exact(x, last.t);
                report
                    .metrics
                    .insert(format!("tail_rel_error/{}/dt={dt:e}/x={x:e}", method.name()), ((got - want) / want).abs());
            }
            log::info!("{} dt = {dt:e}: max rel error {worst:.3e}", method.name());
            csv.row(&[Cell::Text(method.name()), Cell::Float(dt), Cell::Float(worst)])?;
            report.time.push(TimeRow { method: method.name().into(), dt, max_rel_error: worst });
            errs.push(worst);
        }
        if time.dts.len() >= 2 {
            report.metrics.insert(format!("order/{}", method.name()), loglog_slope(&time.dts, &errs));
        }
    }
    Ok(report)
}

fn run_variable_s(config: &Config, out: &mut Outputs) -> Result<Report> {
    let time = time_config(config)?;
    let cut = cutoff(config);
    let points = collocation_points(config)?;
    let xs = xs_of(&points)?;
    let n = config.n_max();
    let method = methods(&time.methods)?.into_iter().next().ok_or_else(|| anyhow!("time.methods is empty"))?;
    let dt = time.dts[0];
    let tab = method.tableau::<f64>();
    let [lo, hi] = time.tail_range.unwrap_or([5.5, 19.5]);
    let tail_x = logspace(lo, hi, 9);
    let u0: Vec<f64> = xs.iter().map(|&x| 1.0 / (1.0 + x * x)).collect();
    let space_for = |s: f64| -> fracframes::Result<SumSpace<f64>> {
        let fams = families(config, -s, s).map_err(|e| fracframes::Error::InvalidParameter(e.to_string()))?;
        SumSpace::new(fams, n)
    };
    let expand_u0 = |s: f64| -> Result<TimeState<f64>> {
        let space = space_for(s)?;
        let sys = assemble(&space.as_image(), &points)?;
        let fit = tsvd_solve(&sys, &u0, cut)?;
        Ok(TimeState::new(0.0, fit.coeffs, space)?)
    };
    let tail_slope = |state: &TimeState<f64>| -> Result<f64> {
        let u = tail_x
            .iter()
            .map(|&x| state.space.evaluate(&state.coeffs, Point::D1(x)))
            .collect::<fracframes::Result<Vec<_>>>()?;
        Ok(loglog_slope(&tail_x, &u))
    };

    let mut report = Report::new(&config.name);
    let mut csv = out.csv(&format!("{}_tails.csv", config.name), &["run", "s_end", "tail_slope"])?;
    let (s0, rate) = (time.s_start, time.s_rate);
    let s_of_t = move |t: f64| s0 - rate * t;
    let start = Instant::now();
    let traj =
        integrate_variable_s(expand_u0(s_of_t(0.0))?, &tab, dt, time.t_end, &s_of_t, &space_for, &points, cut, false)
            .context("variable-exponent run failed")?;
    log::info!("variable run: {:.1} s", start.elapsed().as_secs_f64());
    let mut push = |report: &mut Report, run: String, s_end: f64, slope: f64| -> Result<()> {
        csv.row(&[Cell::Text(&run), Cell::Float(s_end), Cell::Float(slope)])?;
        report.metrics.insert(format!("tail_slope/{run}"), slope);
        report.tails.push(TailRow { run, s_end, tail_slope: slope });
        Ok(())
    };
    let s_end = s_of_t(time.t_end - dt);
    push(&mut report, "variable".into(), s_end, tail_slope(traj.last())?)?;
    for &s in &time.compare_s {
        let init = expand_u0(s)?;
        let x = assemble(&init.space.as_image(), &points)?.matrix;
        let x_star = assemble(&operator_image(&init.space, &OperatorSpec::fractional(s))?, &points)?.matrix;
        let run = integrate(init, &tab, dt, time.t_end, &x, &x_star, cut, false)
            .with_context(|| format!("constant run s = {s} failed"))?;
        push(&mut report, format!("s={s}"), s, tail_slope(run.last())?)?;
    }
    let variable = report.tails[0].tail_slope;
    if let Some(closest) = report.tails[1..]
        .iter()
        .min_by(|a, b| (a.tail_slope - variable).abs().total_cmp(&(b.tail_slope - variable).abs()))
    {
        report.metrics.insert("closest_constant_s".into(), closest.s_end);
    }
    Ok(report)
}

fn family_label(f: &BasisFamily<f64>) -> String {
    let kind = match f.kind {
        FamilyKind::WeightedJacobi { a } => format!("Q^({a}, {a})"),
        FamilyKind::ExtendedJacobi { a, s } => format!("P~^({a}, {s})"),
        FamilyKind::WeightedZernike { b } => format!("W^({b})"),
        FamilyKind::ExtendedZernike { s } => format!("Z~^({s})"),
    };
    let geom = match f.geometry {
        Geometry::Interval(iv) => format!("on [{}, {}]", iv.a, iv.b),
        Geometry::Disk(d) => format!("on the disk of radius {}", d.a),
    };
    format!("{kind} {geom}")
}

/// Writes the coefficient and point-value tables of the last solve.
pub fn write_solution(config: &Config, report: &Report, out: &mut Outputs) -> Result<()> {
    let Some((space, coeffs)) = &report.final_solution else {
        return Ok(());
    };
    let mut csv =
        out.csv(&format!("{}_coefficients.csv", config.name), &["column", "family", "degree", "coefficient"])?;
    for (j, (&(f, d), &c)) in space.columns().iter().zip(coeffs).enumerate() {
        let label = family_label(&space.families()[f]);
        csv.row(&[Cell::Int(j), Cell::Text(&label), Cell::Int(d), Cell::Float(c)])?;
    }
    let points: Vec<Point<f64>> = if config.problem.eval_x.is_empty() {
        collocation_points(config)?
    } else if is_2d(config) {
        config.problem.eval_x.iter().zip(&config.problem.eval_y).map(|(&x, &y)| Point::D2(x, y)).collect()
    } else {
        config.problem.eval_x.iter().map(|&x| Point::D1(x)).collect()
    };
    let image = space.as_image();
    let values = points.iter().map(|&p| image.evaluate(coeffs, p)).collect::<fracframes::Result<Vec<_>>>()?;
    let header: &[&str] = if is_2d(config) { &["x", "y", "u"] } else { &["x", "u"] };
    let mut csv = out.csv(&format!("{}_values.csv", config.name), header)?;
    for (p, &u) in points.iter().zip(&values) {
        match *p {
            Point::D1(x) => csv.row(&[Cell::Float(x), Cell::Float(u)])?,
            Point::D2(x, y) => csv.row(&[Cell::Float(x), Cell::Float(y), Cell::Float(u)])?,
        }
    }
    Ok(())
}

/// Human-readable description of what a run would do.
pub fn describe(config: &Config) -> Result<String> {
    let mut s = String::new();
    let setup = setup(config)?;
    writeln!(s, "experiment: {} (files prefixed {:?})", config.experiment, config.name)?;
    writeln!(s, "collocation points: {}", setup.points.len())?;
    if is_2d(config) {
        writeln!(
            s,
            "  radial breaks {:?}, {} per segment, {} angles, inset {:e}",
            config.grid.breaks, config.grid.pts_per_segment, config.grid.n_angles, config.grid.eps_offset
        )?;
    } else {
        writeln!(
            s,
            "  breaks {:?}, pads {:?}, {} per segment, inset {:e}",
            config.grid.breaks, config.grid.pads, config.grid.pts_per_segment, config.grid.eps_offset
        )?;
    }
    let terms: Vec<String> = setup.op.terms.iter().map(|(l, t)| format!("{l}·(−Δ)^{t}")).collect();
    writeln!(s, "operator: {}", terms.join(" + "))?;
    writeln!(s, "families ({}):", setup.space.families().len())?;
    for f in setup.space.families() {
        writeln!(s, "  {}", family_label(f))?;
    }
    writeln!(s, "N schedule: {:?}", config.space.n_schedule)?;
    writeln!(s, "svd cutoff: {:e} ({:?})", config.svd_eps, config.svd_cutoff)?;
    if let Some(t) = &config.time {
        if config.experiment.is_time_dependent() {
            methods(&t.methods)?;
            writeln!(s, "time: methods {:?}, dt {:?}, t_end {}", t.methods, t.dts, t.t_end)?;
        }
    }
    Ok(s)
}
