//! Command-line front end: simulation, cycle detection, criterion checks,
//! operator scans, transform tables and phase-portrait export.

use crate::criteria::{self, CriteriaError, CriterionId, ScanConfig};
use crate::cycles::{find_cycles, CycleError, SearchConfig};
use crate::field::{conti_filippov, SystemSpec, TRANSFORM_NORMALIZATION};
use crate::gallery;
use crate::integrate::{integrate, DEFAULT_ATOL, DEFAULT_RTOL};
use crate::operators::{self, Region, ScanOperator};
use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "LIMCYC_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "limcyc",
    about = "Limit-cycle detection, refinement and uniqueness-criterion checking \
             for planar and Liénard systems",
    version
)]
struct Cli {
    /// Run the gallery self-test and exit (same as the self-test subcommand).
    #[arg(long = "self-test", global = false)]
    self_test: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Args)]
struct SystemArgs {
    /// Gallery system: harmonic | vdp | system8 | system11 | cubic.
    #[arg(long, conflicts_with = "spec")]
    system: Option<String>,
    /// JSON file with a custom system spec.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Damping scale for the vdp gallery system.
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// Cubic damping coefficients a,b,c,d for the cubic gallery system.
    #[arg(long, value_parser = parse_coeffs, default_value = "1,0,-1,0", allow_hyphen_values = true)]
    coeffs: [f64; 4],
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate an orbit and export it as t,x,y CSV.
    Simulate {
        #[command(flatten)]
        system: SystemArgs,
        /// Initial point x,y.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: (f64, f64),
        /// Integration time.
        #[arg(long, default_value_t = 50.0)]
        t: f64,
        #[arg(long, default_value_t = DEFAULT_RTOL)]
        rtol: f64,
        #[arg(long, default_value_t = DEFAULT_ATOL)]
        atol: f64,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detect, refine and classify the limit cycles crossing the positive
    /// y-axis; export a JSON report.
    Cycles {
        #[command(flatten)]
        system: SystemArgs,
        /// Seed ordinate range min:max.
        #[arg(long = "y-range", value_parser = parse_range, allow_hyphen_values = true)]
        y_range: Option<(f64, f64)>,
        #[arg(long)]
        seeds: Option<usize>,
        /// Fixed-point refinement target |R(y) - y|.
        #[arg(long = "residual-tol", default_value_t = 1e-10)]
        residual_tol: f64,
        /// Merge fixed points closer than this.
        #[arg(long = "dedupe-tol", default_value_t = 1e-6)]
        dedupe_tol: f64,
        #[arg(long, default_value_t = 1e-11)]
        rtol: f64,
        #[arg(long, default_value_t = 1e-13)]
        atol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the uniqueness criteria and export the reports as JSON.
    Check {
        #[command(flatten)]
        system: SystemArgs,
        /// Check every criterion (the default when --criterion is absent).
        #[arg(long)]
        all: bool,
        /// Check only the named criteria.
        #[arg(long = "criterion", value_enum)]
        criteria: Vec<CriterionArg>,
        #[arg(long, value_parser = parse_region, allow_hyphen_values = true)]
        region: Option<Region>,
        #[arg(long, default_value_t = 41)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid sign scan of a stability operator; JSON report plus optional
    /// x,y,value CSV of the raw grid.
    Operators {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, value_enum)]
        operator: OperatorArg,
        #[arg(long, value_parser = parse_region, allow_hyphen_values = true)]
        region: Option<Region>,
        #[arg(long, default_value_t = 81)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the raw operator grid to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Tabulate the energy-normalising change of variable u = sign(x) *
    /// sqrt(2 G(x)) and export u,x,f_hat,phi CSV.
    Transform {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long = "x-max", default_value_t = 3.0)]
        x_max: f64,
        /// Grid points per branch.
        #[arg(long, default_value_t = 128)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the vector field on a grid as x,y,p,q CSV for external
    /// plotting.
    Portrait {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, value_parser = parse_region, allow_hyphen_values = true)]
        region: Option<Region>,
        #[arg(long, default_value_t = 41)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every gallery system against its reference results.
    SelfTest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Thm5,
    Thm6,
    Cor1,
}

impl From<CriterionArg> for CriterionId {
    fn from(value: CriterionArg) -> Self {
        match value {
            CriterionArg::Thm1 => CriterionId::Thm1,
            CriterionArg::Thm2 => CriterionId::Thm2,
            CriterionArg::Thm3 => CriterionId::Thm3,
            CriterionArg::Thm4 => CriterionId::Thm4,
            CriterionArg::Thm5 => CriterionId::Thm5,
            CriterionArg::Thm6 => CriterionId::Thm6,
            CriterionArg::Cor1 => CriterionId::Cor1,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OperatorArg {
    Alpha,
    Nu,
    AngularSpeed,
    RayIndependence,
}

impl From<OperatorArg> for ScanOperator {
    fn from(value: OperatorArg) -> Self {
        match value {
            OperatorArg::Alpha => ScanOperator::Alpha,
            OperatorArg::Nu => ScanOperator::Nu,
            OperatorArg::AngularSpeed => ScanOperator::AngularSpeed,
            OperatorArg::RayIndependence => ScanOperator::RayIndependence,
        }
    }
}

fn parse_point(text: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err("expected x,y".into());
    }
    let x = parts[0].trim().parse().map_err(|e| format!("bad x: {e}"))?;
    let y = parts[1].trim().parse().map_err(|e| format!("bad y: {e}"))?;
    Ok((x, y))
}

fn parse_range(text: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err("expected min:max".into());
    }
    let lo = parts[0].trim().parse().map_err(|e| format!("bad min: {e}"))?;
    let hi = parts[1].trim().parse().map_err(|e| format!("bad max: {e}"))?;
    Ok((lo, hi))
}

fn parse_region(text: &str) -> Result<Region, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 4 {
        return Err("expected xmin:xmax:ymin:ymax".into());
    }
    let mut vals = [0.0; 4];
    for (v, p) in vals.iter_mut().zip(parts.iter()) {
        *v = p.trim().parse().map_err(|e| format!("bad bound: {e}"))?;
    }
    if vals[0] >= vals[1] || vals[2] >= vals[3] {
        return Err("region bounds must be ordered".into());
    }
    Ok(Region::new(vals[0], vals[1], vals[2], vals[3]))
}

fn parse_coeffs(text: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err("expected a,b,c,d".into());
    }
    let mut out = [0.0; 4];
    for (v, p) in out.iter_mut().zip(parts.iter()) {
        *v = p.trim().parse().map_err(|e| format!("bad coefficient: {e}"))?;
    }
    Ok(out)
}

/// Resolve the requested system into a gallery entry or a custom spec.
fn resolve(args: &SystemArgs) -> Result<gallery::GallerySystem> {
    match (&args.system, &args.spec) {
        (Some(name), None) => gallery::build_system(name, args.eps, args.coeffs)
            .ok_or_else(|| anyhow!("unknown gallery system `{name}`")),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let spec: SystemSpec = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            Ok(gallery::GallerySystem {
                name: spec.label(),
                spec,
                y_range: (0.1, 5.0),
                seeds: 20,
                region: Region::square(3.0),
                expected: gallery::Expected::default(),
            })
        }
        (None, None) => bail!("one of --system or --spec is required"),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

/// Open the output sink; relative paths land in $LIMCYC_OUT_DIR when set.
fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(std::io::stdout().lock())),
        Some(p) => {
            let resolved = match std::env::var_os(OUT_DIR_ENV) {
                Some(dir) if p.is_relative() => PathBuf::from(dir).join(p),
                _ => p.clone(),
            };
            if let Some(parent) = resolved.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)
                        .with_context(|| format!("creating {}", parent.display()))?;
                }
            }
            let file = File::create(&resolved)
                .with_context(|| format!("creating {}", resolved.display()))?;
            Ok(Box::new(file))
        }
    }
}

#[derive(Serialize)]
struct CyclesOutput {
    system: String,
    cycles: Vec<crate::cycles::CycleReport>,
    skipped_seeds: Vec<f64>,
    center_regions: Vec<crate::cycles::CenterRegion>,
}

#[derive(Serialize)]
struct TransformRow {
    u: f64,
    x: f64,
    f_hat: f64,
    phi: f64,
}

/// Run the CLI with the given arguments (the first element is the program
/// name) and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    let command = if cli.self_test {
        Command::SelfTest
    } else {
        match cli.command {
            Some(c) => c,
            None => {
                eprintln!("a subcommand is required; see --help");
                return EXIT_USAGE;
            }
        }
    };
    match execute(command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code_for(&err)
        }
    }
}

/// Internal inconsistencies get exit code 2, everything else 1.
fn exit_code_for(err: &anyhow::Error) -> i32 {
    if let Some(CycleError::InconsistentIndicators { .. }) = err.downcast_ref::<CycleError>() {
        return EXIT_INCONSISTENT;
    }
    if let Some(CriteriaError::ClosedFormMismatch { .. }) = err.downcast_ref::<CriteriaError>() {
        return EXIT_INCONSISTENT;
    }
    EXIT_PRECONDITION
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Simulate { system, from, t, rtol, atol, out } => {
            let entry = resolve(&system)?;
            let field = entry.spec.build()?;
            if !(rtol > 0.0 && atol > 0.0) {
                bail!("tolerances must be positive");
            }
            let traj = integrate(&field, from, t, rtol, atol);
            let mut sink = open_out(&out)?;
            traj.write_csv(&mut sink)?;
            eprintln!(
                "integrated {} for t = {} ({} steps, termination: {:?})",
                entry.name,
                traj.t_end(),
                traj.steps.len(),
                traj.termination
            );
            Ok(EXIT_OK)
        }
        Command::Cycles {
            system,
            y_range,
            seeds,
            residual_tol,
            dedupe_tol,
            rtol,
            atol,
            out,
        } => {
            let entry = resolve(&system)?;
            let field = entry.spec.build()?;
            let (y_min, y_max) = y_range.unwrap_or(entry.y_range);
            let seeds = seeds.unwrap_or(entry.seeds);
            let cfg = SearchConfig {
                rtol,
                atol,
                residual_tol,
                dedupe_tol,
                ..SearchConfig::default()
            };
            let search = find_cycles(&field, y_min, y_max, seeds, &cfg)?;
            let output = CyclesOutput {
                system: entry.name.clone(),
                cycles: search.cycles.iter().map(|c| c.report()).collect(),
                skipped_seeds: search.skipped_seeds,
                center_regions: search.center_regions,
            };
            let mut sink = open_out(&out)?;
            serde_json::to_writer_pretty(&mut sink, &output)?;
            writeln!(sink)?;
            eprintln!(
                "{}: {} cycle(s), {} center region(s), {} skipped seed(s)",
                entry.name,
                output.cycles.len(),
                output.center_regions.len(),
                output.skipped_seeds.len()
            );
            Ok(EXIT_OK)
        }
        Command::Check { system, all, criteria: selected, region, resolution, out } => {
            let entry = resolve(&system)?;
            let region = region.unwrap_or(entry.region);
            let scan = ScanConfig::default();
            let mut reports = criteria::run_all(&entry.spec, region, resolution, &scan)?;
            if !all && !selected.is_empty() {
                let wanted: Vec<CriterionId> =
                    selected.into_iter().map(CriterionId::from).collect();
                reports.retain(|r| wanted.contains(&r.criterion));
            }
            for report in &reports {
                eprintln!(
                    "{:<6} {:<28} {:?}",
                    report.criterion.name(),
                    report.system,
                    report.conclusion
                );
            }
            let mut sink = open_out(&out)?;
            serde_json::to_writer_pretty(&mut sink, &reports)?;
            writeln!(sink)?;
            Ok(EXIT_OK)
        }
        Command::Operators { system, operator, region, resolution, out, csv } => {
            let entry = resolve(&system)?;
            let field = entry.spec.build()?;
            let region = region.unwrap_or(entry.region);
            if resolution < 8 {
                bail!("resolution must be at least 8");
            }
            let report =
                operators::sign_scan(&field, operator.into(), region, resolution);
            if let Some(csv_path) = &csv {
                let mut sink = open_out(&Some(csv_path.clone()))?;
                operators::write_grid_csv(&field, operator.into(), region, resolution, &mut sink)?;
            }
            let mut sink = open_out(&out)?;
            serde_json::to_writer_pretty(&mut sink, &report)?;
            writeln!(sink)?;
            eprintln!(
                "{}: verdict {:?} ({} positive, {} negative, {} zero, {} singular)",
                entry.name,
                report.verdict,
                report.n_positive,
                report.n_negative,
                report.n_zero,
                report.n_singular
            );
            Ok(EXIT_OK)
        }
        Command::Transform { system, x_max, points, out } => {
            let entry = resolve(&system)?;
            let lienard = entry
                .spec
                .lienard()?
                .ok_or_else(|| anyhow!("the transform needs a Liénard system (f and g)"))?;
            let table = conti_filippov(&lienard, x_max, points)?;
            let mut sink = open_out(&out)?;
            writeln!(sink, "# {}", table.normalization)?;
            writeln!(sink, "u,x,f_hat,phi")?;
            for i in 0..table.u_grid.len() {
                let row = TransformRow {
                    u: table.u_grid[i],
                    x: table.x_grid[i],
                    f_hat: table.f_hat[i],
                    phi: table.phi[i],
                };
                writeln!(sink, "{},{},{},{}", row.u, row.x, row.f_hat, row.phi)?;
            }
            eprintln!("note: {}", TRANSFORM_NORMALIZATION);
            Ok(EXIT_OK)
        }
        Command::Portrait { system, region, resolution, out } => {
            let entry = resolve(&system)?;
            let field = entry.spec.build()?;
            let region = region.unwrap_or(entry.region);
            let mut sink = open_out(&out)?;
            writeln!(sink, "x,y,p,q")?;
            for i in 0..resolution {
                let x = region.x_min
                    + (region.x_max - region.x_min) * i as f64 / (resolution - 1) as f64;
                for j in 0..resolution {
                    let y = region.y_min
                        + (region.y_max - region.y_min) * j as f64 / (resolution - 1) as f64;
                    let (p, q) = field.eval(x, y);
                    writeln!(sink, "{x},{y},{p},{q}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::SelfTest => {
            let ok = gallery::self_test(std::io::stdout().lock())?;
            Ok(if ok { EXIT_OK } else { EXIT_PRECONDITION })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        run(std::iter::once("limcyc").chain(args.iter().copied()))
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        assert_eq!(run_args(&["cycles", "--nonsense"]), EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]), EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_args(&["--help"]), EXIT_OK);
    }

    #[test]
    fn missing_system_is_precondition_error() {
        assert_eq!(run_args(&["simulate", "--from", "0,1", "--t", "1"]), EXIT_PRECONDITION);
    }

    #[test]
    fn parse_helpers() {
        assert_eq!(parse_point("0,0.5").unwrap(), (0.0, 0.5));
        assert!(parse_point("1").is_err());
        assert_eq!(parse_range("0.1:3").unwrap(), (0.1, 3.0));
        let r = parse_region("-2:2:-1:1").unwrap();
        assert_eq!((r.x_min, r.x_max, r.y_min, r.y_max), (-2.0, 2.0, -1.0, 1.0));
        assert!(parse_region("2:-2:0:1").is_err());
        assert_eq!(parse_coeffs("1,0,-1,0").unwrap(), [1.0, 0.0, -1.0, 0.0]);
    }
}
