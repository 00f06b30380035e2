use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex;

use loewner_lab::diagnostics::DiskMap;
use loewner_lab::error::{Error, Result};
use loewner_lab::evolution::{evolve_full, grid_image, Schedule, Segment};
use loewner_lab::experiments::{run_theorem1_suite, run_verify, Suite};
use loewner_lab::generators::{angular_rate_pick, conjugate_generator, synthesize_generator, Generator};
use loewner_lab::geometry::{cayley_inverse, BoundaryPoint, DiskPoint, HalfPlanePoint, PolarGrid};
use loewner_lab::io::{
    configure_threads_from_env, exit_code, render_svg, to_json_string, trajectory_rows, write_csv, ConfigDocument,
    DwDoc, GeneratorDoc, PointDoc, RateDoc, SynthesisDoc, SynthesisResultDoc,
};
use loewner_lab::ode::{integrate, SolverConfig};

type C = Complex<f64>;

#[derive(Parser)]
#[command(name = "loewner-lab", version, about = "Loewner-type evolution of disk self-maps with boundary fixed points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Half-plane generator vanishing at the given points, one atom per gap
    Synthesize {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        fixed: Vec<f64>,
        /// `inf`, an angle in radians, or `re,im` on the unit circle
        #[arg(long, default_value = "inf", allow_hyphen_values = true)]
        dw: String,
        #[arg(long)]
        beta: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        atoms: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Autonomous flow of the (single) generator in a config
    Flow(RunArgs),
    /// Loewner–Kufarev evolution of a piecewise-constant schedule
    Evolve(RunArgs),
    /// Run a seeded verification suite and print the JSON report
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Solver tolerance (relative and absolute)
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run the experiment payload of a config
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Start point `re` or `re,im`
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    z0: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    s: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// CSV trajectory (standard output when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Ef,
    Cone,
    Lemma53,
    #[value(name = "theoremA")]
    TheoremA,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Ef => Suite::Ef,
            SuiteArg::Cone => Suite::Cone,
            SuiteArg::Lemma53 => Suite::Lemma53,
            SuiteArg::TheoremA => Suite::TheoremA,
            SuiteArg::All => Suite::All,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = configure_threads_from_env() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Synthesize { fixed, dw, beta, atoms, out } => synthesize(fixed, &dw, beta, atoms, out.as_deref()),
        Command::Flow(args) => trajectory(&args, true),
        Command::Evolve(args) => trajectory(&args, false),
        Command::Verify { suite, seed, tol } => {
            let report = run_verify(suite.into(), seed, tol)?;
            stdout(&to_json_string(&report));
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Experiment { config, out } => {
            let doc = read_config(&config)?;
            let cfg = doc.experiment.ok_or_else(|| Error::InvalidInput("config has no experiment payload".into()))?;
            let report = run_theorem1_suite(&cfg)?;
            emit(out.as_deref(), &to_json_string(&report))?;
            Ok(if report.pass { 0 } else { 1 })
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidInput(format!("{}: {e}", path.display()))
}

fn read_config(path: &Path) -> Result<ConfigDocument> {
    ConfigDocument::parse(&fs::read_to_string(path).map_err(|e| io_err(path, e))?)
}

/// Writes to standard output; a closed reader (e.g. `| head`) is not an error.
fn stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => {
            stdout(text);
            Ok(())
        }
    }
}

fn parse_dw(dw: &str) -> Result<DwDoc> {
    if dw == "inf" {
        return Ok(DwDoc::Infinity("inf".into()));
    }
    let z = parse_complex(dw)?;
    if z.im == 0.0 && !dw.contains(',') {
        Ok(DwDoc::Point(PointDoc::Angle { angle: z.re }))
    } else {
        Ok(DwDoc::Point(PointDoc::Pair([z.re, z.im])))
    }
}

fn parse_complex(s: &str) -> Result<C> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| Error::InvalidInput(format!("not a number: {p:?}")));
    match parts.as_slice() {
        [re] => Ok(C::new(num(re)?, 0.0)),
        [re, im] => Ok(C::new(num(re)?, num(im)?)),
        _ => Err(Error::InvalidInput(format!("expected `re` or `re,im`, got {s:?}"))),
    }
}

/// Disk generator of a synthesis document, rotated onto its Denjoy–Wolff target.
fn synthesized(doc: &SynthesisDoc) -> Result<(Generator<f64>, SynthesisResultDoc)> {
    let pick = synthesize_generator(&doc.fixed, &doc.atoms, doc.beta)?;
    let mut g = conjugate_generator(&pick);
    if let DwDoc::Point(p) = doc.dw {
        g = g.rotated(p.boundary()?);
    }
    let mut xs = doc.fixed.clone();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let rates = xs
        .iter()
        .map(|&x| Ok(RateDoc { x, lambda: angular_rate_pick(&pick, x)?.value() }))
        .collect::<Result<Vec<_>>>()?;
    let result = SynthesisResultDoc {
        alpha: pick.pick.alpha(),
        weights: pick.pick.atoms().iter().map(|a| a.weight).collect(),
        rates,
        generator: GeneratorDoc::from_generator(&g),
    };
    Ok((g, result))
}

fn synthesize(fixed: Vec<f64>, dw: &str, beta: f64, atoms: Vec<f64>, out: Option<&Path>) -> Result<u8> {
    let mut doc = SynthesisDoc { fixed, dw: parse_dw(dw)?, beta, atoms, result: None };
    let (_, result) = synthesized(&doc)?;
    let table: String = result
        .rates
        .iter()
        .map(|r| format!("{:>24} {:>24}\n", r.x, r.lambda))
        .collect();
    doc.result = Some(result);
    let json = ConfigDocument::synthesis(doc).to_json();
    let header = format!("{:>24} {:>24}\n", "x", "lambda");
    match out {
        Some(p) => {
            fs::write(p, json).map_err(|e| io_err(p, e))?;
            stdout(&format!("{header}{table}"));
        }
        None => {
            stdout(&json);
            eprint!("{header}{table}");
        }
    }
    Ok(0)
}

/// Fixed points to mark and the Denjoy–Wolff marker for plots.
fn markers(doc: &ConfigDocument, g: Option<&Generator<f64>>) -> Result<(Vec<C>, Option<C>)> {
    let mut fixed = Vec::new();
    if let Some(s) = &doc.schedule {
        fixed = s.fixed_points()?.into_iter().map(|b| b.value()).collect();
    }
    if let Some(s) = &doc.synthesis {
        let rot = match s.dw {
            DwDoc::Point(p) => p.boundary()?,
            DwDoc::Infinity(_) => BoundaryPoint::one(),
        };
        fixed = s
            .fixed
            .iter()
            .map(|&x| cayley_inverse(HalfPlanePoint::real(x)) * rot.value())
            .collect();
    }
    let tau = g.filter(|g| !g.p.is_zero()).map(|g| g.tau.value());
    Ok((fixed, tau))
}

fn trajectory(args: &RunArgs, autonomous: bool) -> Result<u8> {
    let doc = read_config(&args.config)?;
    let config = SolverConfig::with_tolerance(args.tol);
    let z0 = DiskPoint::new(parse_complex(&args.z0)?)?;
    // flow: one generator over [s, t]; evolve: the schedule's own clock
    let (schedule, generator) = if autonomous {
        let g = if let Some(s) = &doc.synthesis {
            synthesized(s)?.0
        } else if let Some(s) = &doc.schedule {
            if s.segments.len() != 1 {
                return Err(Error::InvalidInput("flow needs a single-generator config; use evolve".into()));
            }
            s.segments[0].generator.to_generator()?
        } else {
            return Err(Error::InvalidInput("flow needs a schedule or synthesis payload".into()));
        };
        if !(args.t >= args.s) {
            return Err(Error::InvalidInput(format!("need s ≤ t, got s = {}, t = {}", args.s, args.t)));
        }
        (None, g)
    } else {
        let s = doc.schedule.as_ref().ok_or_else(|| Error::InvalidInput("evolve needs a schedule payload".into()))?;
        let schedule = s.to_schedule()?;
        let first = schedule
            .generator_at(args.s)
            .cloned()
            .ok_or_else(|| Error::InvalidInput("empty schedule".into()))?;
        (Some(schedule), first)
    };

    let solved = match &schedule {
        Some(sched) => evolve_full(sched, z0, args.s, args.t, false, &config).map(|(_, _, tr)| tr),
        None => integrate(&generator, z0.value(), C::new(1.0, 0.0), args.s, args.t, false, &config).map(|s| s.trajectory),
    };
    let mut out: Vec<u8> = Vec::new();
    let code = match solved {
        Ok(tr) => {
            write_csv(&mut out, &trajectory_rows(&tr), None).expect("in-memory write");
            0
        }
        Err(Error::GuardBandStall { t, partial }) => {
            write_csv(&mut out, &partial, Some(&format!("guard-band stall at t = {t}"))).expect("in-memory write");
            eprintln!("error: solver stalled at the guard band near t = {t}");
            3
        }
        Err(e) => return Err(e),
    };
    emit(args.out.as_deref(), std::str::from_utf8(&out).expect("CSV is ASCII"))?;
    if code != 0 {
        return Ok(code);
    }

    if let Some(svg_path) = &args.svg {
        let grid = PolarGrid::default();
        let points: Vec<C> = grid.points();
        let images: Vec<Option<C>> = match &schedule {
            Some(sched) => grid_image(sched, args.s, args.t, &points, &config)
                .into_iter()
                .map(|(_, w)| w.ok())
                .collect(),
            None => {
                let one = Schedule::new(vec![Segment { duration: (args.t - args.s).max(f64::MIN_POSITIVE), generator: generator.clone() }])?;
                let span = args.t - args.s;
                let map = |z: C| -> Result<C> {
                    if span == 0.0 {
                        return Ok(z);
                    }
                    Ok(evolve_full(&one, DiskPoint::new(z)?, 0.0, span, false, &config)?.0)
                };
                points.iter().map(|&z| map.apply(z).ok()).collect()
            }
        };
        let (fixed, tau) = markers(&doc, Some(&generator))?;
        fs::write(svg_path, render_svg(&grid, &images, &fixed, tau)).map_err(|e| io_err(svg_path, e))?;
    }
    Ok(0)
}
