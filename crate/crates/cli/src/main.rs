//! `ghzw-roof`: evaluate the convex roof of `√τ₃` on GHZ/W mixtures and
//! write the datasets behind its geometry.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use ghzw_roof::bloch::InteriorPoint;
use ghzw_roof::roof::{classify, surface_pattern, Region, MIN_SURFACE_GRID};
use ghzw_roof::verify::{run_criterion, VerifyOptions, VerifyReport, CRITERIA};
use ghzw_roof::{report, Error};
use serde::Serialize;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ghzw-roof",
    version,
    about = "Convex roof of the square-root threetangle for GHZ/W mixtures"
)]
struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = "GHZW_ROOF_OUT", default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// `N_THETAxN_PHIxN_R`, e.g. `20x20x5`.
#[derive(Clone, Copy, Debug)]
struct Grid3(usize, usize, usize);

impl FromStr for Grid3 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<usize> = s
            .split(['x', 'X', ','])
            .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<Result<_, _>>()?;
        match parts[..] {
            [a, b, c] if a > 0 && b > 0 && c > 0 => Ok(Grid3(a, b, c)),
            _ => Err("expected three positive sizes like 20x20x5".into()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Roof value, region and optimal decomposition of one state, as JSON on stdout.
    Eval {
        /// GHZ weight of the surface direction.
        #[arg(long)]
        p: f64,
        /// Relative phase of the surface direction, radians.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
        /// Distance from the centre of the ball.
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Read `p` as the GHZ weight of the mixture `p·GHZ + (1 − p)·W`
        /// and ignore `--phi` and `--r`.
        #[arg(long)]
        mixture: bool,
    },
    /// Zero-polytope, N and M states and the circles through them, beside the published values.
    Structure {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Region and roof value beneath every point of a surface grid.
    Surface {
        #[arg(long, default_value_t = 90)]
        n_theta: usize,
        #[arg(long, default_value_t = 180)]
        n_phi: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The two characteristic curves with their convexifying lines.
    Curves {
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiplies every tolerance.
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
        /// Oracle comparison sample, `N_THETAxN_PHIxN_R`.
        #[arg(long, default_value = "20x20x5")]
        oracle_grid: Grid3,
        #[arg(long, default_value_t = 32)]
        oracle_restarts: usize,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Do not fail criteria on their runtime budgets.
        #[arg(long)]
        no_runtime_check: bool,
        /// Also write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
    Verify,
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn library(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Serialize)]
struct Member {
    weight: f64,
    p: f64,
    phi: f64,
    sqrt_tangle: f64,
}

#[derive(Serialize)]
struct EvalOutput {
    point: [f64; 3],
    value: f64,
    region: Region,
    tag: (usize, usize),
    members: Vec<Member>,
    numeric_boundary: bool,
}

fn eval(p: f64, phi: f64, r: f64, mixture: bool) -> Result<(), Failure> {
    let point = if mixture {
        InteriorPoint::on_axis(p)
    } else {
        InteriorPoint::from_spherical(p, phi, r)
    }
    .map_err(library)?;
    let res = classify(&point).map_err(library)?;
    let out = EvalOutput {
        point: point.vector().into(),
        value: res.value,
        region: res.region,
        tag: res.decomposition.tag,
        members: res
            .decomposition
            .members
            .iter()
            .map(|(w, b)| Member {
                weight: *w,
                p: b.p,
                phi: b.phi,
                sqrt_tangle: b.sqrt_tangle(),
            })
            .collect(),
        numeric_boundary: res.numeric_boundary,
    };
    print!("{}", output::to_json(&out)?);
    Ok(())
}

fn wrote(path: &Path) {
    println!("wrote {}", path.display());
}

/// One surface grid point as written to both CSV and JSON.
#[derive(Serialize)]
struct SurfaceRecord {
    theta: f64,
    phi: f64,
    region: Region,
    roof_value: f64,
    on_21_line: u8,
    numeric_boundary: u8,
}

#[derive(Serialize)]
struct SurfaceFile {
    n_theta: usize,
    n_phi: usize,
    rows: Vec<SurfaceRecord>,
}

fn surface(
    dir: &Path,
    n_theta: usize,
    n_phi: usize,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if n_theta < MIN_SURFACE_GRID || n_phi < MIN_SURFACE_GRID {
        return Err(Failure::Usage(format!(
            "grid sizes must be at least {MIN_SURFACE_GRID}"
        )));
    }
    let pat = surface_pattern(n_theta, n_phi).map_err(library)?;
    let rows: Vec<SurfaceRecord> = pat
        .rows
        .iter()
        .map(|r| SurfaceRecord {
            theta: output::round(r.theta),
            phi: output::round(r.phi),
            region: r.region,
            roof_value: output::round(r.roof_value),
            on_21_line: r.on_21_line.into(),
            numeric_boundary: r.numeric_boundary.into(),
        })
        .collect();
    let text = match format {
        Format::Json => output::to_json(&SurfaceFile {
            n_theta,
            n_phi,
            rows,
        })?,
        Format::Csv => output::to_csv(&rows)?,
    };
    wrote(&output::write(
        out,
        dir,
        &format!("surface.{}", format.ext()),
        &text,
    )?);
    Ok(())
}

#[derive(Serialize)]
struct CurveRecord<'a> {
    family: &'a str,
    p: f64,
    value: f64,
    hull: f64,
    difference: f64,
}

fn curves(dir: &Path, points: usize, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    if points < 2 {
        return Err(Failure::Usage("need at least two points per curve".into()));
    }
    let rep = report::curves(points).map_err(library)?;
    let text = match format {
        Format::Json => output::to_json(&rep)?,
        Format::Csv => {
            let rows: Vec<CurveRecord> = rep
                .families
                .iter()
                .flat_map(|f| {
                    f.points.iter().map(|c| CurveRecord {
                        family: &f.name,
                        p: output::round(c.p),
                        value: output::round(c.value),
                        hull: output::round(c.hull),
                        difference: output::round(c.difference),
                    })
                })
                .collect();
            output::to_csv(&rows)?
        }
    };
    wrote(&output::write(
        out,
        dir,
        &format!("curves.{}", format.ext()),
        &text,
    )?);
    Ok(())
}

fn verify(opts: VerifyOptions, only: &[u8], report_path: Option<&Path>) -> Result<(), Failure> {
    if let Some(bad) = only.iter().find(|id| !CRITERIA.iter().any(|c| c.0 == **id)) {
        return Err(Failure::Usage(format!("no criterion {bad}")));
    }
    if !(opts.tolerance_scale.is_finite() && opts.tolerance_scale >= 0.0) {
        return Err(Failure::Usage(
            "tolerance scale must be a nonnegative number".into(),
        ));
    }
    let _ = ghzw_roof::roof::RoofModel::get();
    let mut rep = VerifyReport {
        options: opts.clone(),
        criteria: vec![],
        oracle_gaps: None,
    };
    for (id, _, _) in CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let (r, gaps) = run_criterion(id, &opts);
        println!("{}", r.line());
        if let Some(g) = gaps {
            println!(
                "    oracle gaps over {} points: max {:.2e}, mean {:.2e}, p99 {:.2e}, min signed {:.2e}",
                g.points, g.max_abs_gap, g.mean_abs_gap, g.p99_abs_gap, g.min_signed_gap
            );
            rep.oracle_gaps = Some(g);
        }
        rep.criteria.push(r);
    }
    let passed = rep.criteria.iter().filter(|c| c.passed).count();
    println!("{passed}/{} criteria passed", rep.criteria.len());
    if let Some(path) = report_path {
        output::write(Some(path), Path::new("."), "", &output::to_json(&rep)?)?;
    }
    if rep.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let dir = cli.out_dir.as_path();
    match cli.command {
        Command::Eval { p, phi, r, mixture } => eval(p, phi, r, mixture),
        Command::Structure { output: out } => {
            let s = report::structure().map_err(library)?;
            wrote(&output::write(
                out.as_deref(),
                dir,
                "structure.json",
                &output::to_json(&s)?,
            )?);
            Ok(())
        }
        Command::Surface {
            n_theta,
            n_phi,
            format,
            output: out,
        } => surface(dir, n_theta, n_phi, format, out.as_deref()),
        Command::Curves {
            points,
            format,
            output: out,
        } => curves(dir, points, format, out.as_deref()),
        Command::Verify {
            seed,
            tolerance_scale,
            oracle_grid,
            oracle_restarts,
            only,
            no_runtime_check,
            report,
        } => {
            let opts = VerifyOptions {
                tolerance_scale,
                oracle_grid: (oracle_grid.0, oracle_grid.1, oracle_grid.2),
                oracle_restarts,
                seed,
                check_runtime: !no_runtime_check,
            };
            verify(opts, &only, report.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
    }
}
