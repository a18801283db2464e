use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracode::diffusion::{solve_profile, DiffusionKind, DiffusionModel};
use fracode::fracops::SampledFunction;
use fracode::greens::{EquationKind, FracEquation, FracTerm, GreensEval};
use fracode::ivp::{
    solve_ivp, verify_solution, Forcing, Grid, InitialData, SolutionTable, VerifyOptions,
};
use fracode::special_fn::{mittag_leffler_deriv, MLPoint};
use fracode::wright::{mainardi, wright, WrightPoint};
use fracode::{FracError, SeriesControl};

type EvalFn = Box<dyn Fn(f64) -> fracode::Result<f64>>;

/// Fractional calculus toolkit: special functions, Green's functions,
/// initial-value problems and fractional diffusion.
#[derive(Parser)]
#[command(name = "fracode", version)]
struct Cli {
    /// Significant digits in CSV output (default: shortest lossless form).
    #[arg(long, global = true)]
    precision: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a special function.
    Eval {
        #[command(subcommand)]
        func: EvalFunc,
    },
    /// Tabulate the Green's function of an equation.
    Green {
        #[command(flatten)]
        eq: EqArgs,
        /// Time grid `start:stop:step`, start > 0.
        #[arg(long)]
        grid: String,
    },
    /// Solve an initial-value problem.
    Solve {
        #[command(flatten)]
        eq: EqArgs,
        /// Initial values `b1,b2,...`.
        #[arg(long, allow_hyphen_values = true)]
        ic: Option<String>,
        /// `zero`, `const:c`, `pow:mu`, `sin:w` or `file:path`.
        #[arg(long, default_value = "zero", allow_hyphen_values = true)]
        forcing: String,
        /// Time grid `start:stop:step`, start > 0.
        #[arg(long)]
        grid: String,
    },
    /// Evolve an initial profile under fractional diffusion.
    Diffuse {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        alpha: f64,
        /// Length scale; the diffusion coefficient is lambda².
        #[arg(long)]
        lambda: f64,
        /// Initial profile `file:path` (CSV `x,value`, uniform step).
        #[arg(long)]
        phi: String,
        /// Output grid `start:stop:step`.
        #[arg(long, allow_hyphen_values = true)]
        x_grid: String,
        #[arg(long)]
        t: f64,
    },
    /// Substitute a tabulated solution back into its equation.
    Verify {
        #[command(flatten)]
        eq: EqArgs,
        /// Initial values; when given they are checked too.
        #[arg(long, allow_hyphen_values = true)]
        ic: Option<String>,
        #[arg(long, default_value = "zero", allow_hyphen_values = true)]
        forcing: String,
        /// Solution `file:path` (CSV with `t,y` leading columns, grid h, 2h, ...).
        #[arg(long)]
        solution: String,
        #[arg(long, default_value_t = 1e-2)]
        threshold: f64,
        /// Residuals are measured on t >= t-min.
        #[arg(long, default_value_t = 0.1)]
        t_min: f64,
    },
}

#[derive(Subcommand)]
enum EvalFunc {
    /// Mittag-Leffler function E_{alpha,beta} or its k-th derivative.
    Ml {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[command(flatten)]
        z: ZArgs,
    },
    /// Wright function W(z; alpha, beta).
    Wright {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[command(flatten)]
        z: ZArgs,
    },
    /// Mainardi function M(z; alpha).
    Mainardi {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[command(flatten)]
        z: ZArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ZArgs {
    #[arg(long, allow_hyphen_values = true)]
    z: Option<f64>,
    /// Argument grid `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    z_grid: Option<String>,
}

#[derive(Args)]
struct EqArgs {
    /// Terms `coeff:order,...`, e.g. `1:0.5,1:0`.
    #[arg(long, allow_hyphen_values = true)]
    eq: String,
    #[arg(long, value_enum, default_value_t = KindArg::Standard)]
    kind: KindArg,
    /// Sequential component orders `a1,a2,...` (innermost first).
    #[arg(long)]
    sigma: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Standard,
    Sequential,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Nigmatullin,
    Wyss,
}

enum Failure {
    Io(String),
    Usage(String),
    Numeric(FracError),
    Verify(String),
}

impl From<FracError> for Failure {
    fn from(e: FracError) -> Self {
        Failure::Numeric(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Numeric(e) => match e {
                FracError::NotConverged { .. }
                | FracError::CancellationLoss { .. }
                | FracError::Overflow(_)
                | FracError::CombinatorialOverflow { .. } => 3,
                _ => 2,
            },
            Failure::Verify(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Io(m) | Failure::Usage(m) | Failure::Verify(m) => m.clone(),
            Failure::Numeric(e) => e.to_string(),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let res = run(&cli, &mut out);
    if res.is_ok() || matches!(res, Err(Failure::Verify(_))) {
        let mut stdout = std::io::stdout().lock();
        if stdout.write_all(out.as_bytes()).is_err() {
            return ExitCode::from(1);
        }
    }
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("fracode: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn control() -> Outcome<SeriesControl> {
    let ctl = SeriesControl::default();
    match std::env::var("FRACODE_MAX_TERMS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("FRACODE_MAX_TERMS: bad value {v:?}")))?;
            let ctl = ctl.with_max_terms(n);
            ctl.validate()?;
            Ok(ctl)
        }
        Err(_) => Ok(ctl),
    }
}

fn run(cli: &Cli, out: &mut String) -> Outcome<()> {
    let ctl = control()?;
    let p = cli.precision;
    if p == Some(0) || p.is_some_and(|p| p > 17) {
        return Err(Failure::Usage("precision must be between 1 and 17".into()));
    }
    match &cli.cmd {
        Command::Eval { func } => {
            let (zs, eval): (Vec<f64>, EvalFn) = match func {
                EvalFunc::Ml { alpha, beta, k, z } => {
                    let (a, b, k) = (*alpha, *beta, *k);
                    (
                        z_points(z)?,
                        Box::new(move |z| mittag_leffler_deriv(&MLPoint::new(a, b, k, z)?, &ctl)),
                    )
                }
                EvalFunc::Wright { alpha, beta, z } => {
                    let (a, b) = (*alpha, *beta);
                    (
                        z_points(z)?,
                        Box::new(move |z| wright(&WrightPoint::new(z, a, b)?, &ctl)),
                    )
                }
                EvalFunc::Mainardi { alpha, z } => {
                    let a = *alpha;
                    (z_points(z)?, Box::new(move |z| mainardi(z, a, &ctl)))
                }
            };
            out.push_str("z,value\n");
            for z in zs {
                row(out, &[z, eval(z)?], p);
            }
        }
        Command::Green { eq, grid } => {
            let eq = parse_equation(eq)?;
            let grid = parse_grid(grid, "grid")?;
            if grid.start <= 0.0 {
                return Err(Failure::Usage("grid: start must be > 0".into()));
            }
            let g = GreensEval::new(eq, ctl)?;
            out.push_str("t,G\n");
            for t in grid.points() {
                row(out, &[t, g.eval(t)?], p);
            }
        }
        Command::Solve {
            eq,
            ic,
            forcing,
            grid,
        } => {
            let eq = parse_equation(eq)?;
            let ic = parse_ic(ic.as_deref(), &eq)?;
            let f = parse_forcing(forcing)?;
            let grid = parse_grid(grid, "grid")?;
            if grid.start <= 0.0 {
                return Err(Failure::Usage("grid: start must be > 0".into()));
            }
            let s = solve_ivp(&eq, &ic, &f, &grid, &ctl)?;
            out.push_str("t,y");
            for k in 1..=s.homogeneous.len() {
                let _ = write!(out, ",hom_{k}");
            }
            out.push_str(",conv\n");
            for i in 0..s.t.len() {
                let mut r = vec![s.t[i], s.y[i]];
                r.extend(s.homogeneous.iter().map(|h| h[i]));
                r.push(s.convolution[i]);
                row(out, &r, p);
            }
        }
        Command::Diffuse {
            model,
            alpha,
            lambda,
            phi,
            x_grid,
            t,
        } => {
            let kind = match model {
                ModelArg::Nigmatullin => DiffusionKind::Nigmatullin,
                ModelArg::Wyss => DiffusionKind::Wyss,
            };
            let m = DiffusionModel::new(kind, *alpha, *lambda)?;
            let phi = load_sampled(file_arg(phi, "phi")?)?;
            let xs = parse_grid(x_grid, "x-grid")?.points();
            let u = solve_profile(&m, &phi, &xs, *t, &ctl)?;
            out.push_str("x,u\n");
            for (x, v) in xs.iter().zip(u) {
                row(out, &[*x, v], p);
            }
        }
        Command::Verify {
            eq,
            ic,
            forcing,
            solution,
            threshold,
            t_min,
        } => {
            let eq = parse_equation(eq)?;
            let check_ics = ic.is_some();
            let ic = parse_ic(ic.as_deref(), &eq)?;
            let f = parse_forcing(forcing)?;
            let table = load_solution(file_arg(solution, "solution")?)?;
            let opts = VerifyOptions {
                threshold: *threshold,
                t_min: *t_min,
                check_ics,
                ..Default::default()
            };
            let r = verify_solution(&eq, &ic, &f, &table, &opts)?;
            out.push_str("max_residual,rms_residual\n");
            row(out, &[r.max_residual, r.rms_residual], p);
            if !r.passed {
                return Err(Failure::Verify(format!(
                    "verification failed: max residual {:e}, threshold {:e}, initial-value errors {:?}",
                    r.max_residual, r.threshold, r.ic_errors
                )));
            }
        }
    }
    Ok(())
}

fn z_points(z: &ZArgs) -> Outcome<Vec<f64>> {
    match (&z.z, &z.z_grid) {
        (Some(z), _) => Ok(vec![*z]),
        (None, Some(g)) => Ok(parse_grid(g, "z-grid")?.points()),
        (None, None) => Err(Failure::Usage("one of --z or --z-grid is required".into())),
    }
}

fn fmt_num(v: f64, precision: Option<usize>) -> String {
    let Some(p) = precision else {
        return format!("{v}");
    };
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{:.*e}", p - 1, v)
    }
}

fn row(out: &mut String, vals: &[f64], precision: Option<usize>) {
    let cells: Vec<String> = vals.iter().map(|&v| fmt_num(v, precision)).collect();
    out.push_str(&cells.join(","));
    out.push('\n');
}

fn parse_num(tok: &str, what: &str) -> Outcome<f64> {
    tok.trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("{what}: cannot parse {tok:?} as a number")))
}

fn parse_list(s: &str, what: &str) -> Outcome<Vec<f64>> {
    s.split(',').map(|t| parse_num(t, what)).collect()
}

fn parse_grid(s: &str, what: &str) -> Outcome<Grid> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::Usage(format!(
            "{what}: expected start:stop:step, got {s:?}"
        )));
    }
    let start = parse_num(parts[0], what)?;
    let stop = parse_num(parts[1], what)?;
    let step = parse_num(parts[2], what)?;
    Grid::new(start, stop, step).map_err(|e| Failure::Usage(format!("{what}: {e}")))
}

fn parse_equation(a: &EqArgs) -> Outcome<FracEquation> {
    let mut terms = Vec::new();
    for tok in a.eq.split(',') {
        let (c, o) = tok
            .split_once(':')
            .ok_or_else(|| Failure::Usage(format!("eq: term {tok:?} is not coeff:order")))?;
        let coeff = parse_num(c, "eq")
            .map_err(|_| Failure::Usage(format!("eq: bad coefficient in term {tok:?}")))?;
        let order = parse_num(o, "eq")
            .map_err(|_| Failure::Usage(format!("eq: bad order in term {tok:?}")))?;
        terms.push(FracTerm::new(coeff, order));
    }
    let sigma = a
        .sigma
        .as_deref()
        .map(|s| parse_list(s, "sigma"))
        .transpose()?;
    let kind = match a.kind {
        KindArg::Standard => {
            if sigma.is_some() {
                return Err(Failure::Usage(
                    "sigma: only valid with --kind sequential".into(),
                ));
            }
            EquationKind::Standard
        }
        KindArg::Sequential => EquationKind::Sequential,
    };
    Ok(FracEquation::new(terms, kind, sigma)?)
}

fn parse_ic(s: Option<&str>, eq: &FracEquation) -> Outcome<InitialData> {
    match s {
        Some(s) => Ok(InitialData::new(parse_list(s, "ic")?)),
        None => Ok(InitialData::zero(eq.ic_count().unwrap_or(1))),
    }
}

fn parse_forcing(s: &str) -> Outcome<Forcing> {
    let f = match s.split_once(':') {
        None if s == "zero" => Forcing::Zero,
        Some(("const", c)) => Forcing::Constant(parse_num(c, "forcing")?),
        Some(("pow", m)) => Forcing::Power(parse_num(m, "forcing")?),
        Some(("sin", w)) => Forcing::Sin(parse_num(w, "forcing")?),
        Some(("file", path)) => Forcing::Sampled(load_sampled(Path::new(path).to_path_buf())?),
        _ => {
            return Err(Failure::Usage(format!(
                "forcing: expected zero, const:c, pow:mu, sin:w or file:path, got {s:?}"
            )))
        }
    };
    f.validate()?;
    Ok(f)
}

fn file_arg(s: &str, what: &str) -> Outcome<PathBuf> {
    s.strip_prefix("file:")
        .map(PathBuf::from)
        .ok_or_else(|| Failure::Usage(format!("{what}: expected file:path, got {s:?}")))
}

/// Numeric rows of a CSV file; a non-numeric first row is taken as a header.
fn read_rows(path: &Path) -> Outcome<Vec<Vec<f64>>> {
    let io = |e: csv::Error| Failure::Io(format!("{}: {e}", path.display()));
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(io)?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(io)?;
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(r) => rows.push(r),
            Err(_) if i == 0 => continue,
            Err(_) => {
                return Err(Failure::Usage(format!(
                    "{}: line {} is not numeric",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(rows)
}

fn uniform_step(xs: &[f64], path: &Path) -> Outcome<f64> {
    if xs.len() < 2 {
        return Err(Failure::Usage(format!(
            "{}: needs at least two rows",
            path.display()
        )));
    }
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    for (i, w) in xs.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs() {
            return Err(Failure::Usage(format!(
                "{}: step between rows {} and {} is not uniform",
                path.display(),
                i + 1,
                i + 2
            )));
        }
    }
    Ok(h)
}

fn load_sampled(path: PathBuf) -> Outcome<SampledFunction> {
    let rows = read_rows(&path)?;
    if rows.iter().any(|r| r.len() < 2) {
        return Err(Failure::Usage(format!(
            "{}: expected two columns",
            path.display()
        )));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let h = uniform_step(&xs, &path)?;
    Ok(SampledFunction::new(
        xs[0],
        h,
        rows.iter().map(|r| r[1]).collect(),
    )?)
}

fn load_solution(path: PathBuf) -> Outcome<SolutionTable> {
    let rows = read_rows(&path)?;
    if rows.iter().any(|r| r.len() < 2) {
        return Err(Failure::Usage(format!(
            "{}: expected t,y columns",
            path.display()
        )));
    }
    let t: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    uniform_step(&t, &path)?;
    let n = t.len();
    Ok(SolutionTable {
        y: rows.iter().map(|r| r[1]).collect(),
        t,
        homogeneous: Vec::new(),
        convolution: vec![0.0; n],
    })
}
