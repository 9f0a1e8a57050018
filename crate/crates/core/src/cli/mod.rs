//! The `conedepth` command line.
//!
//! Exit codes: 0 success, 2 input error, 3 enumeration budget exceeded.
//! Identical arguments and inputs give byte-identical output.

pub mod dataset;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::depth::{depth, monte_carlo_depth, DepthFamily};
use crate::error::Error;
use crate::jensen::{jensen_general, jensen_median, CFunctionSpec, SublevelFamily, DEFAULT_GRID};
use crate::json::{Real, RegionJson};
use crate::order::ConeOrder;
use crate::regions::{bound_check, center, region, rotated_axis_intersection};
use dataset::{parse_list, parse_matrix, parse_points, read_dataset, DatasetFile};
use report::{BoundReport, DepthRecord, Format, JensenReport, MedianReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// A failure with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: String) -> Self {
        CliError { code: EXIT_INPUT, message }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Budget(_)) { EXIT_BUDGET } else { EXIT_INPUT };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "conedepth",
    version,
    about = "Depth functions, medians, depth regions and centers of weighted point clouds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Depth of query points.
    Depth {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        family: FamilyArgs,
        /// Query points, "x,y;x,y".
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        points: String,
    },
    /// Median box for a cone order.
    Median {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Depth region S_alpha.
    Region {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        alpha: f64,
        /// Rotation angles in degrees for the rotated family, "0,45,90".
        #[arg(long, allow_hyphen_values = true)]
        angles: Option<String>,
    },
    /// Maximal depth and the set where it is attained.
    Center {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Check the maximal halfspace depth against 1/(d+1).
    Bound {
        #[command(flatten)]
        input: Input,
    },
    /// Median Jensen inequality for a built-in function.
    Jensen {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        family: FamilyArgs,
        /// gauge-box, sqnorm, proj-i or exp-line.
        #[arg(long, alias = "fn")]
        function: FunctionName,
        /// Function parameters, comma separated.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        params: String,
    },
}

#[derive(Debug, Args)]
struct Input {
    /// CSV file with columns x1..xd and an optional weight column.
    dataset: PathBuf,
    /// Treat the last column of a header-less file as weights.
    #[arg(long)]
    weighted: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Grid resolution per axis for grid searches.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Largest sample accepted by exact enumerations in three or more dimensions.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Debug, Args)]
struct OrderArgs {
    /// Cone generator matrix by rows, "g11,g12;g21,g22" (default identity).
    #[arg(long, conflicts_with = "rotation", allow_hyphen_values = true)]
    order: Option<String>,
    /// Planar cone order rotated by this many degrees.
    #[arg(long, allow_hyphen_values = true)]
    rotation: Option<f64>,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long, value_enum, default_value_t = FamilyName::Halfspace)]
    family: FamilyName,
    #[command(flatten)]
    order: OrderArgs,
    /// Largest admissible ball radius (default 1e4 times the sample diameter).
    #[arg(long)]
    radius_cap: Option<f64>,
    /// Random directions for the Monte Carlo family.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Halfspace,
    Axis,
    Interval,
    Ball,
    Mc,
    Convex,
    Rotated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FunctionName {
    GaugeBox,
    Sqnorm,
    #[value(name = "proj-i")]
    ProjI,
    #[value(alias = "paper-exp-line")]
    ExpLine,
}

/// Run the command line on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write output: {e}");
                EXIT_INPUT
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn load(input: &Input) -> Result<DatasetFile, CliError> {
    let ds = read_dataset(&input.dataset, input.weighted)?;
    if let Some(b) = input.budget {
        if ds.sample.dim() >= 3 && ds.sample.len() > b {
            return Err(CliError {
                code: EXIT_BUDGET,
                message: format!("{} atoms exceed the enumeration budget {b}", ds.sample.len()),
            });
        }
    }
    Ok(ds)
}

fn cone_order(args: &OrderArgs, dim: usize) -> Result<ConeOrder, CliError> {
    if let Some(spec) = &args.order {
        let rows = parse_matrix(spec)?;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(CliError::input(format!("--order must be a {dim}x{dim} matrix")));
        }
        return Ok(ConeOrder::from_generators(&rows)?);
    }
    if let Some(deg) = args.rotation {
        if dim != 2 {
            return Err(CliError::input("--rotation needs a planar dataset".into()));
        }
        return Ok(ConeOrder::rotation(deg.to_radians())?);
    }
    Ok(ConeOrder::identity(dim))
}

fn depth_family(args: &FamilyArgs, ds: &DatasetFile) -> Result<DepthFamily, CliError> {
    let dim = ds.sample.dim();
    Ok(match args.family {
        FamilyName::Halfspace | FamilyName::Mc => DepthFamily::HalfspaceAll,
        FamilyName::Convex => DepthFamily::ConvexCompactComplements,
        FamilyName::Axis => DepthFamily::AxisParallel(cone_order(&args.order, dim)?),
        FamilyName::Interval => DepthFamily::IntervalComplements(cone_order(&args.order, dim)?),
        FamilyName::Ball => {
            let cap = args.radius_cap.unwrap_or_else(|| {
                let d = ds.sample.diameter();
                1e4 * if d > 0.0 { d } else { 1.0 }
            });
            DepthFamily::BallComplements { radius_cap: cap }
        }
        FamilyName::Rotated => return Err(CliError::input("the rotated family is only available for regions".into())),
    })
}

fn execute(command: Command) -> Result<String, CliError> {
    match command {
        Command::Depth { input, family, points } => {
            let ds = load(&input)?;
            let queries = parse_points(&points, ds.sample.dim())?;
            let fam = depth_family(&family, &ds)?;
            let name = match family.family {
                FamilyName::Mc => "mc",
                _ => fam.name(),
            };
            let records = queries
                .iter()
                .map(|q| {
                    let d = match family.family {
                        FamilyName::Mc => monte_carlo_depth(q, &ds.sample, family.trials, family.seed)?,
                        _ => depth(q, &ds.sample, &fam)?,
                    };
                    Ok(DepthRecord {
                        point: Real::vec(q),
                        family: name.to_string(),
                        depth: Real(d.value),
                        exact: d.exact,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(report::render_depths(&records, ds.sample.dim(), input.format))
        }
        Command::Median { input, order } => {
            let ds = load(&input)?;
            let order = cone_order(&order, ds.sample.dim())?;
            let m = order.median_set(&ds.sample)?;
            let (al, au) = m.ambient_endpoints().ok_or_else(|| CliError::input("median box is not compact".into()))?;
            let rep = MedianReport {
                generators: order.generator_rows().iter().map(|r| Real::vec(r)).collect(),
                lower: Real::vec(m.lower()),
                upper: Real::vec(m.upper()),
                ambient_lower: Real::vec(&al),
                ambient_upper: Real::vec(&au),
            };
            Ok(report::render_median(&rep, input.format))
        }
        Command::Region { input, family, alpha, angles } => {
            let ds = load(&input)?;
            let (r, name) = if family.family == FamilyName::Rotated {
                let spec =
                    angles.ok_or_else(|| CliError::input("--angles is required for the rotated family".into()))?;
                let rad: Vec<f64> = parse_list(&spec)?.into_iter().map(f64::to_radians).collect();
                (rotated_axis_intersection(&ds.sample, &rad, alpha)?, "rotated")
            } else {
                let fam = depth_family(&family, &ds)?;
                (region(&ds.sample, &fam, alpha)?, fam.name())
            };
            let mut j = RegionJson::from_region(&r, alpha);
            j.family = Some(name.to_string());
            Ok(report::render_region(&j, ds.sample.dim(), input.format))
        }
        Command::Center { input, family } => {
            let ds = load(&input)?;
            let fam = depth_family(&family, &ds)?;
            let c = center(&ds.sample, &fam)?;
            let mut j = RegionJson::from_region(&c.region, c.alpha_max);
            j.family = Some(fam.name().to_string());
            Ok(report::render_region(&j, ds.sample.dim(), input.format))
        }
        Command::Bound { input } => {
            let ds = load(&input)?;
            let b = bound_check(&ds.sample)?;
            let rep = BoundReport {
                dim: ds.sample.dim(),
                alpha_max: Real(b.alpha_max),
                bound: Real(b.bound),
                holds: b.holds,
            };
            Ok(report::render_bound(&rep, input.format))
        }
        Command::Jensen { input, family, function, params } => {
            let ds = load(&input)?;
            let fam = depth_family(&family, &ds)?;
            let declared = match &fam {
                DepthFamily::AxisParallel(o) | DepthFamily::IntervalComplements(o) => {
                    SublevelFamily::IntervalSublevels(o.clone())
                }
                DepthFamily::HalfspaceAll | DepthFamily::ConvexCompactComplements => SublevelFamily::ConvexSublevels,
                DepthFamily::BallComplements { .. } => {
                    return Err(CliError::input(
                        "the Jensen check needs the halfspace, convex, axis or interval family".into(),
                    ))
                }
            };
            let f = builtin(function, &parse_list(&params)?, declared, &ds)?;
            let rep = match &fam {
                DepthFamily::AxisParallel(o) => {
                    let r = jensen_median(o, &f, &ds.sample, input.grid)?;
                    JensenReport::Median {
                        function: f.description().to_string(),
                        m_star: Real::vec(&r.m_star),
                        f_m: Real(r.f_m),
                        median_lo: Real(r.median.q_lo),
                        median_hi: Real(r.median.q_hi),
                        holds: r.holds,
                        grid: input.grid,
                    }
                }
                _ => {
                    let r = jensen_general(&fam, &f, &ds.sample, input.grid)?;
                    JensenReport::General {
                        function: f.description().to_string(),
                        family: fam.name().to_string(),
                        alpha_max: Real(r.alpha_max),
                        f_max: Real(r.f_max),
                        argmax: Real::vec(&r.argmax),
                        q: Real(r.q),
                        worst_gap: Real(r.worst_gap),
                        holds: r.holds,
                        grid: input.grid,
                        evaluated: r.evaluated,
                    }
                }
            };
            Ok(report::render_jensen(&rep, input.format))
        }
    }
}

fn builtin(
    name: FunctionName,
    params: &[f64],
    family: SublevelFamily,
    ds: &DatasetFile,
) -> Result<CFunctionSpec, CliError> {
    let d = ds.sample.dim();
    let label = name.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
    let wrong = |want: &str| CliError::input(format!("{label} expects {want}, got {} parameters", params.len()));
    Ok(match name {
        FunctionName::GaugeBox => match params.len() {
            0 => CFunctionSpec::gauge_box(vec![-1.0; d], vec![1.0; d], family)?,
            n if n == 2 * d => CFunctionSpec::gauge_box(params[..d].to_vec(), params[d..].to_vec(), family)?,
            _ => return Err(wrong(&format!("{} values (a then b)", 2 * d))),
        },
        FunctionName::Sqnorm if params.is_empty() => CFunctionSpec::sqnorm(family),
        FunctionName::Sqnorm => return Err(wrong("no")),
        FunctionName::ProjI => {
            let i = match params {
                [] => 0,
                [i] if i.fract() == 0.0 && *i >= 0.0 && (*i as usize) < d => *i as usize,
                _ => return Err(wrong(&format!("one coordinate index below {d}"))),
            };
            CFunctionSpec::projection(i, family)
        }
        FunctionName::ExpLine => {
            if d != 2 {
                return Err(CliError::input("exp-line needs a planar dataset".into()));
            }
            let pts: Vec<[f64; 2]> = match params.len() {
                0 if ds.sample.len() >= 3 => (0..3).map(|i| [ds.sample.point(i)[0], ds.sample.point(i)[1]]).collect(),
                6 => params.chunks(2).map(|c| [c[0], c[1]]).collect(),
                _ => return Err(wrong("six values (three points)")),
            };
            CFunctionSpec::exp_line(pts[0], pts[1], pts[2])?.with_family(family)
        }
    })
}
