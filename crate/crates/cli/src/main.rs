//! Command-line front end for the radtail library.
//!
//! Exit codes: 0 on success (and on fully certified verification runs),
//! 1 on usage or domain errors, 2 when a verification run ends refuted
//! or inconclusive.

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use radtail::bounds::{edelman_bound, k, u, v, KQuery, PiecewiseBound};
use radtail::gaussian::{constants, gauss_tail};
use radtail::rademacher::{
    exact_tail, mc_tail, ratio_curve, selfnorm_mc_tail, SelfNormFamily, Weights, EXACT_TAIL_MAX_N,
};
use radtail::verifier::{
    search_worst_ratio, verify_all, verify_induction, verify_mixture_x_ge_sqrt3, verify_rectangle,
    verify_region, RegionId, Status, VerificationReport,
};
use radtail::Error;

#[derive(Parser)]
#[command(
    name = "radtail",
    about = "Rademacher tail bounds: evaluation, comparison curves, and certified verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct WeightArgs {
    /// Comma-separated weight vector, e.g. 3,4 or 0.6,0.8
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true, conflicts_with = "equal_weights")]
    weights: Option<Vec<f64>>,

    /// Use n equal weights 1/sqrt(n)
    #[arg(long, value_name = "N")]
    equal_weights: Option<usize>,

    /// Reject weight vectors whose squared norm is not already 1
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.005)]
    grid_start: f64,

    #[arg(long, allow_negative_numbers = true, default_value_t = 3.0)]
    grid_stop: f64,

    #[arg(long, allow_negative_numbers = true, default_value_t = 0.005)]
    grid_step: f64,
}

#[derive(Args)]
struct BudgetArgs {
    /// Box budget for branch and bound (0 = default)
    #[arg(long, default_value_t = 0)]
    max_boxes: u64,

    /// Depth budget for branch and bound (0 = default)
    #[arg(long, default_value_t = 0)]
    max_depth: u32,

    /// Measure wall time and fill elapsed_ms in reports
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the comparison constants
    Constants {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Exact tail probability and Gaussian comparison at a single point
    Tail {
        #[command(flatten)]
        weights: WeightArgs,

        /// Evaluation point x
        #[arg(long, allow_negative_numbers = true)]
        x: f64,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Tabulate tail, Gaussian tail, and their ratio over a grid
    RatioCurve {
        #[command(flatten)]
        weights: WeightArgs,

        #[command(flatten)]
        grid: GridArgs,

        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,

        /// Write output to a file instead of stdout
        #[arg(long)]
        out: Option<String>,
    },

    /// Tabulate the piecewise majorant and its ingredients over a grid
    Bounds {
        #[command(flatten)]
        grid: GridArgs,

        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,

        #[arg(long)]
        out: Option<String>,
    },

    /// Evaluate the deficit functional K(a, x) at a single point
    Deficit {
        /// Leading weight a, in [0, 1]
        #[arg(long, allow_negative_numbers = true)]
        a: f64,

        /// Evaluation point x
        #[arg(long, allow_negative_numbers = true)]
        x: f64,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Certify one named region of the deficit functional
    VerifyRegion {
        /// Region tag, e.g. A1, X11, LLe, GG2
        #[arg(long)]
        region: String,

        /// Certify sup <= threshold instead of <= 0
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        threshold: f64,

        #[command(flatten)]
        budget: BudgetArgs,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Run every region, the rectangle sweep, and the mixture sweep
    VerifyAll {
        #[command(flatten)]
        budget: BudgetArgs,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Certify the deficit functional on the weight rectangle [delta_a, 0.98]
    VerifyRectangle {
        /// Lower end of the weight range; (0, delta_a) is covered by decay evidence
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.01)]
        delta_a: f64,

        /// Certify sup <= threshold instead of <= 0
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        threshold: f64,

        #[command(flatten)]
        budget: BudgetArgs,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Certify the two-atom mixture bound on x >= sqrt(3)
    VerifyMixture {
        /// Upper end of the weight range
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.999)]
        a_max: f64,

        /// Swept x range ends here; larger x is handled by sampled rows
        #[arg(long, allow_negative_numbers = true, default_value_t = 8.0)]
        x_max: f64,

        #[command(flatten)]
        budget: BudgetArgs,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Replay the two-point reduction for one weight vector on a grid
    InductionCheck {
        #[command(flatten)]
        weights: WeightArgs,

        #[arg(long, allow_negative_numbers = true, default_value_t = -1.0)]
        grid_start: f64,

        #[arg(long, allow_negative_numbers = true, default_value_t = 4.0)]
        grid_stop: f64,

        #[arg(long, allow_negative_numbers = true, default_value_t = 0.05)]
        grid_step: f64,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Monte Carlo tail of a self-normalized sum against the certified bound
    Selfnorm {
        /// Weight model: two-point, uniform, or gaussian
        #[arg(long)]
        family: String,

        /// Number of summands
        #[arg(long)]
        n: usize,

        /// Evaluation point x
        #[arg(long, allow_negative_numbers = true)]
        x: f64,

        /// Scales for the two-point family, comma-separated, length n
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        scales: Option<Vec<f64>>,

        #[arg(long, default_value_t = 100_000)]
        samples: u64,

        #[arg(long, default_value_t = 42)]
        seed: u64,
    },

    /// Search for the weight vector with the worst tail-to-Gaussian ratio
    Search {
        /// Number of weights
        #[arg(long)]
        n: usize,

        /// Evaluation point x
        #[arg(long, allow_negative_numbers = true)]
        x: f64,

        #[arg(long, default_value_t = 16)]
        restarts: usize,

        #[arg(long, default_value_t = 42)]
        seed: u64,
    },

    /// Monte Carlo estimate of a Rademacher tail probability
    McTail {
        #[command(flatten)]
        weights: WeightArgs,

        /// Evaluation point x
        #[arg(long, allow_negative_numbers = true)]
        x: f64,

        #[arg(long, default_value_t = 100_000)]
        samples: u64,

        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders its own help/version output with exit code 0.
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Constants { format } => cmd_constants(format),
        Command::Tail { weights, x, format } => cmd_tail(&weights, x, format),
        Command::RatioCurve { weights, grid, format, out } => {
            cmd_ratio_curve(&weights, &grid, format, out.as_deref())
        }
        Command::Bounds { grid, format, out } => cmd_bounds(&grid, format, out.as_deref()),
        Command::Deficit { a, x, format } => cmd_deficit(a, x, format),
        Command::VerifyRegion { region, threshold, budget, format } => {
            cmd_verify_region(&region, threshold, &budget, format)
        }
        Command::VerifyAll { budget, format } => cmd_verify_all(&budget, format),
        Command::VerifyRectangle { delta_a, threshold, budget, format } => {
            cmd_verify_rectangle(delta_a, threshold, &budget, format)
        }
        Command::VerifyMixture { a_max, x_max, budget, format } => {
            cmd_verify_mixture(a_max, x_max, &budget, format)
        }
        Command::InductionCheck { weights, grid_start, grid_stop, grid_step, format } => {
            cmd_induction_check(&weights, grid_start, grid_stop, grid_step, format)
        }
        Command::Selfnorm { family, n, x, scales, samples, seed } => {
            cmd_selfnorm(&family, n, x, scales, samples, seed)
        }
        Command::Search { n, x, restarts, seed } => cmd_search(n, x, restarts, seed),
        Command::McTail { weights, x, samples, seed } => cmd_mc_tail(&weights, x, samples, seed),
    }
}

/// Builds a normalized weight vector from the shared CLI flags.
fn build_weights(args: &WeightArgs) -> Result<Weights, Error> {
    match (&args.weights, args.equal_weights) {
        (Some(values), None) => {
            let norm_sq: f64 = values.iter().map(|w| w * w).sum();
            if args.no_normalize && (norm_sq - 1.0).abs() > 1e-9 {
                return Err(Error::Domain(format!(
                    "--no-normalize requires a unit vector; squared norm is {norm_sq}"
                )));
            }
            if !args.no_normalize && (norm_sq - 1.0).abs() > 1e-9 {
                eprintln!("note: squared norm {norm_sq} != 1; weights renormalized");
            }
            Weights::normalize(values)
        }
        (None, Some(n)) => Weights::equal(n),
        (None, None) => Err(Error::Domain(
            "one of --weights or --equal-weights is required".to_string(),
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects conflicting weight flags"),
    }
}

fn build_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, Error> {
    if !start.is_finite() || !stop.is_finite() || !step.is_finite() {
        return Err(Error::Domain("grid endpoints and step must be finite".to_string()));
    }
    if step <= 0.0 {
        return Err(Error::Domain(format!("grid step must be positive, got {step}")));
    }
    if stop < start {
        return Err(Error::Domain(format!("grid stop {stop} is below start {start}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
    if count > 10_000_000 {
        return Err(Error::Domain(format!("grid has {count} points; cap is 10000000")));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Prints to stdout or writes the same bytes to a file.
fn emit(out: Option<&str>, body: &str) -> Result<(), Error> {
    match out {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(path) => fs::write(path, body)
            .map_err(|e| Error::Domain(format!("cannot write {path}: {e}"))),
    }
}

fn cmd_constants(format: Format) -> Result<ExitCode, Error> {
    let c = constants();
    match format {
        Format::Text => {
            println!("c1     = {}", c.c1);
            println!("c2     = {}", c.c2);
            println!("c3     = {}", c.c3);
            println!("c2/c1  = {}", c.c2 / c.c1);
            println!("x_star = {}", c.x_star);
            println!("s_star = {}", c.s_star);
        }
        Format::Json => {
            let value = serde_json::json!({
                "c1": c.c1,
                "c2": c.c2,
                "c3": c.c3,
                "c2_over_c1": c.c2 / c.c1,
                "x_star": c.x_star,
                "s_star": c.s_star,
            });
            println!("{value}");
        }
        Format::Csv => {
            return Err(Error::Domain("constants has no csv form".to_string()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_tail(args: &WeightArgs, x: f64, format: Format) -> Result<ExitCode, Error> {
    let w = build_weights(args)?;
    if w.n() > EXACT_TAIL_MAX_N {
        return Err(Error::Budget(format!(
            "exact tails stop at n = {EXACT_TAIL_MAX_N}; use mc-tail for n = {}",
            w.n()
        )));
    }
    let tail = exact_tail(&w, x)?;
    let gt = gauss_tail(x)?;
    let ratio = if gt > 0.0 { tail / gt } else { f64::NAN };
    match format {
        Format::Text => {
            println!("n          = {}", w.n());
            println!("x          = {x}");
            println!("tail       = {tail}");
            println!("gauss_tail = {gt}");
            println!("ratio      = {ratio}");
        }
        Format::Json => {
            let value = serde_json::json!({
                "n": w.n(),
                "x": x,
                "tail": tail,
                "gauss_tail": gt,
                "ratio": ratio,
            });
            println!("{value}");
        }
        Format::Csv => {
            println!("x,tail,gauss_tail,ratio");
            println!("{x},{tail},{gt},{ratio}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ratio_curve(
    args: &WeightArgs,
    grid: &GridArgs,
    format: Format,
    out: Option<&str>,
) -> Result<ExitCode, Error> {
    let w = build_weights(args)?;
    let xs = build_grid(grid.grid_start, grid.grid_stop, grid.grid_step)?;
    let points = ratio_curve(&w, &xs)?;
    let mut body = String::new();
    match format {
        Format::Csv => {
            body.push_str("x,tail,gauss_tail,ratio\n");
            for p in &points {
                let _ = writeln!(body, "{},{},{},{}", p.x, p.tail, p.gauss_tail, p.ratio);
            }
        }
        Format::Json => {
            let rows: Vec<_> = points
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "x": p.x,
                        "tail": p.tail,
                        "gauss_tail": p.gauss_tail,
                        "ratio": p.ratio,
                    })
                })
                .collect();
            let _ = writeln!(body, "{}", serde_json::Value::Array(rows));
        }
        Format::Text => {
            return Err(Error::Domain(
                "ratio-curve emits csv or json; pick one with --format".to_string(),
            ));
        }
    }
    emit(out, &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(grid: &GridArgs, format: Format, out: Option<&str>) -> Result<ExitCode, Error> {
    let bound = PiecewiseBound::standard();
    let xs = build_grid(grid.grid_start, grid.grid_stop, grid.grid_step)?;
    let mut body = String::new();
    let mut rows = Vec::new();
    for &x in &xs {
        let h1 = bound.eval(x)?;
        let branch = bound.branch(x)?;
        let g = radtail::bounds::g(x)?;
        let h = radtail::bounds::h(x)?;
        let shifted = if x > 0.0 { Some(edelman_bound(x)?) } else { None };
        rows.push((x, h1, branch, g, h, shifted));
    }
    match format {
        Format::Csv => {
            body.push_str("x,h1,branch,g,h,shifted\n");
            for (x, h1, branch, g, h, shifted) in &rows {
                let shifted = shifted.map_or(String::new(), |s| s.to_string());
                let _ = writeln!(body, "{x},{h1},{},{g},{h},{shifted}", branch.tag());
            }
        }
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(x, h1, branch, g, h, shifted)| {
                    serde_json::json!({
                        "x": x,
                        "h1": h1,
                        "branch": branch.tag(),
                        "g": g,
                        "h": h,
                        "shifted": shifted,
                    })
                })
                .collect();
            let _ = writeln!(body, "{}", serde_json::Value::Array(items));
        }
        Format::Text => {
            return Err(Error::Domain(
                "bounds emits csv or json; pick one with --format".to_string(),
            ));
        }
    }
    emit(out, &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_deficit(a: f64, x: f64, format: Format) -> Result<ExitCode, Error> {
    let query = KQuery::new(a, x)?;
    let value = k(query);
    // u and v blow up as a -> 1; report them where defined.
    let uv = if a < 1.0 { Some((u(a, x)?, v(a, x)?)) } else { None };
    match format {
        Format::Text => {
            println!("a = {a}");
            println!("x = {x}");
            if let Some((uu, vv)) = uv {
                println!("u = {uu}");
                println!("v = {vv}");
            }
            println!("k = {value}");
        }
        Format::Json => {
            let obj = serde_json::json!({
                "a": a,
                "x": x,
                "u": uv.map(|p| p.0),
                "v": uv.map(|p| p.1),
                "k": value,
            });
            println!("{obj}");
        }
        Format::Csv => {
            println!("a,x,k");
            println!("{a},{x},{value}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_json(report: &VerificationReport) -> serde_json::Value {
    serde_json::json!({
        "region": report.region,
        "status": report.status.to_string(),
        "certified_sup": report.certified_sup,
        "boxes_processed": report.boxes_processed,
        "max_depth": report.max_depth,
        "elapsed_ms": report.elapsed_ms,
    })
}

fn print_report_text(report: &VerificationReport) {
    println!(
        "{:<12} {:<13} sup={:<24} boxes={:<9} depth={:<3} ms={}",
        report.region,
        report.status.to_string(),
        format!("{:e}", report.certified_sup),
        report.boxes_processed,
        report.max_depth,
        report.elapsed_ms
    );
    if let Some(w) = &report.witness {
        println!("  witness: a={} x={} value={} ({})", w.a, w.x, w.value, w.detail);
    }
    for note in &report.notes {
        println!("  note: {note}");
    }
}

fn finish_reports(reports: Vec<VerificationReport>, format: Format) -> Result<ExitCode, Error> {
    let all_certified = reports.iter().all(|r| r.status == Status::Certified);
    match format {
        Format::Text => {
            for report in &reports {
                print_report_text(report);
            }
        }
        Format::Json => {
            let items: Vec<_> = reports.iter().map(report_json).collect();
            println!("{}", serde_json::Value::Array(items));
        }
        Format::Csv => {
            println!("region,status,certified_sup,boxes_processed,max_depth,elapsed_ms");
            for r in &reports {
                println!(
                    "{},{},{},{},{},{}",
                    r.region, r.status, r.certified_sup, r.boxes_processed, r.max_depth,
                    r.elapsed_ms
                );
            }
        }
    }
    if all_certified {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

/// Runs one verification closure, optionally timing it into elapsed_ms.
fn timed<F>(budget: &BudgetArgs, f: F) -> Result<Vec<VerificationReport>, Error>
where
    F: FnOnce() -> Result<Vec<VerificationReport>, Error>,
{
    if !budget.timings {
        return f();
    }
    let start = Instant::now();
    let mut reports = f()?;
    let total = start.elapsed().as_millis() as u64;
    // One wall clock over the whole run; attribute by box share.
    let boxes: u64 = reports.iter().map(|r| r.boxes_processed).sum();
    let count = reports.len().max(1) as u64;
    for r in &mut reports {
        r.elapsed_ms = if boxes == 0 {
            total / count
        } else {
            total * r.boxes_processed / boxes
        };
    }
    Ok(reports)
}

fn cmd_verify_region(
    tag: &str,
    threshold: f64,
    budget: &BudgetArgs,
    format: Format,
) -> Result<ExitCode, Error> {
    let Some(region) = RegionId::from_tag(tag) else {
        let tags: Vec<&str> = RegionId::ALL.iter().map(|r| r.tag()).collect();
        return Err(Error::Domain(format!(
            "unknown region {tag}; expected one of {}",
            tags.join(", ")
        )));
    };
    let reports = timed(budget, || {
        Ok(vec![verify_region(region, threshold, budget.max_boxes, budget.max_depth)?])
    })?;
    finish_reports(reports, format)
}

fn cmd_verify_all(budget: &BudgetArgs, format: Format) -> Result<ExitCode, Error> {
    let reports = timed(budget, || verify_all(budget.max_boxes, budget.max_depth))?;
    finish_reports(reports, format)
}

fn cmd_verify_rectangle(
    delta_a: f64,
    threshold: f64,
    budget: &BudgetArgs,
    format: Format,
) -> Result<ExitCode, Error> {
    let reports = timed(budget, || {
        Ok(vec![verify_rectangle(
            delta_a,
            threshold,
            budget.max_boxes,
            budget.max_depth,
        )?])
    })?;
    finish_reports(reports, format)
}

fn cmd_verify_mixture(
    a_max: f64,
    x_max: f64,
    budget: &BudgetArgs,
    format: Format,
) -> Result<ExitCode, Error> {
    let reports = timed(budget, || {
        Ok(vec![verify_mixture_x_ge_sqrt3(
            a_max,
            x_max,
            budget.max_boxes,
            budget.max_depth,
        )?])
    })?;
    finish_reports(reports, format)
}

fn cmd_induction_check(
    args: &WeightArgs,
    grid_start: f64,
    grid_stop: f64,
    grid_step: f64,
    format: Format,
) -> Result<ExitCode, Error> {
    let w = build_weights(args)?;
    let grid = build_grid(grid_start, grid_stop, grid_step)?;
    let report = verify_induction(&w, &grid)?;
    finish_reports(vec![report], format)
}

fn cmd_selfnorm(
    family: &str,
    n: usize,
    x: f64,
    scales: Option<Vec<f64>>,
    samples: u64,
    seed: u64,
) -> Result<ExitCode, Error> {
    let family = match family {
        "two-point" => {
            let scales = scales.ok_or_else(|| {
                Error::Domain("two-point needs --scales with n entries".to_string())
            })?;
            SelfNormFamily::TwoPoint { scales }
        }
        "uniform" => SelfNormFamily::Uniform,
        "gaussian" => SelfNormFamily::Gaussian,
        other => {
            return Err(Error::Domain(format!(
                "unknown family {other}; expected two-point, uniform, or gaussian"
            )))
        }
    };
    let estimate = selfnorm_mc_tail(&family, n, x, samples, seed)?;
    let gt = gauss_tail(x)?;
    let bound = constants().c2 * gt;
    println!("estimate   = {}", estimate.estimate);
    println!("std_error  = {}", estimate.std_error);
    println!("samples    = {}", estimate.samples);
    println!("seed       = {}", estimate.seed);
    println!("gauss_tail = {gt}");
    println!("bound      = {bound}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_search(n: usize, x: f64, restarts: usize, seed: u64) -> Result<ExitCode, Error> {
    let (w, ratio) = search_worst_ratio(n, x, restarts, seed)?;
    let c = constants();
    println!("ratio = {ratio}");
    println!("c1    = {}", c.c1);
    println!("c2    = {}", c.c2);
    let rendered: Vec<String> = w.values().iter().map(|v| v.to_string()).collect();
    println!("weights = {}", rendered.join(","));
    Ok(ExitCode::SUCCESS)
}

fn cmd_mc_tail(args: &WeightArgs, x: f64, samples: u64, seed: u64) -> Result<ExitCode, Error> {
    let w = build_weights(args)?;
    let estimate = mc_tail(&w, x, samples, seed)?;
    let gt = gauss_tail(x)?;
    println!("estimate   = {}", estimate.estimate);
    println!("std_error  = {}", estimate.std_error);
    println!("samples    = {}", estimate.samples);
    println!("seed       = {}", estimate.seed);
    println!("gauss_tail = {gt}");
    Ok(ExitCode::SUCCESS)
}
