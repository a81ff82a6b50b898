//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 1 computation or I/O failure.

use clap::error::ErrorKind;
use clap::Parser;
use std::ffi::OsString;
use std::path::PathBuf;

use crate::cfoi::CfoiParams;
use crate::output::{summary_text, write_outputs};
use crate::pipeline::{irid_fcoi, IridRequest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

/// Fit discrete and continuous rational models to the impulse response of
/// the complex fractional order integrator (w_gc/s)^lambda * cos(mu * ln(w_gc/s)).
#[derive(Debug, Parser)]
#[command(name = "irid-cfoi", version)]
pub struct Args {
    /// Real part of the order, in (0, 2) [required]
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Imaginary part of the order, in (-1, 0] [required]
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Gain-crossover frequency in rad/s
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub wgc: f64,
    /// Impulse-response window end time in seconds [required]
    #[arg(long, allow_negative_numbers = true)]
    pub tm: Option<f64>,
    /// Lower edge of the frequency band in rad/s
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub wmin: f64,
    /// Upper edge of the frequency band in rad/s (clamped to 0.9 x Nyquist)
    #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
    pub wmax: f64,
    /// Numerator and denominator degree of the fitted models
    #[arg(long, default_value_t = 5)]
    pub norder: usize,
    /// Number of impulse-response samples (power of two, >= 64)
    #[arg(long, default_value_t = 1024)]
    pub samples: usize,
    /// Number of log-spaced frequency points
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Steiglitz-McBride iterations
    #[arg(long, default_value_t = 5)]
    pub iters: usize,
    /// Output directory
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// Skip the SVG plots
    #[arg(long)]
    pub no_svg: bool,
}

fn build_request(args: &Args) -> Result<IridRequest, String> {
    // range checks on supplied values come first so a bad value is reported
    // even when other required flags are missing
    if let Some(l) = args.lambda {
        if !(l > 0.0 && l < 2.0) {
            return Err(format!("--lambda must lie in the open interval (0, 2), got {l}"));
        }
    }
    if let Some(m) = args.mu {
        if !(m > -1.0 && m <= 0.0) {
            return Err(format!("--mu must lie in (-1, 0], got {m}"));
        }
    }
    if let Some(tm) = args.tm {
        if !(tm > 0.0 && tm.is_finite()) {
            return Err(format!("--tm must be positive, got {tm}"));
        }
    }
    let missing: Vec<&str> = [
        ("--lambda", args.lambda.is_none()),
        ("--mu", args.mu.is_none()),
        ("--tm", args.tm.is_none()),
    ]
    .into_iter()
    .filter_map(|(name, absent)| absent.then_some(name))
    .collect();
    if !missing.is_empty() {
        return Err(format!("missing required flag(s): {}", missing.join(", ")));
    }

    let params = CfoiParams::new(args.lambda.unwrap(), args.mu.unwrap(), args.wgc)
        .map_err(|e| e.to_string())?;
    let mut req = IridRequest::new(params, args.tm.unwrap(), args.wmin, args.wmax, args.norder);
    req.samples = args.samples;
    req.points = args.points;
    req.iterations = args.iters;
    req.validate().map_err(|e| e.to_string())?;
    Ok(req)
}

/// Parses `argv` (program name first), runs the pipeline and writes results.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_VALIDATION,
            };
        }
    };
    let req = match build_request(&args) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_VALIDATION;
        }
    };
    let res = match irid_fcoi(&req) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_COMPUTATION
            };
        }
    };
    let files = match write_outputs(&res, &args.out_dir, !args.no_svg) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_COMPUTATION;
        }
    };
    print!("{}", summary_text(&res));
    println!();
    for f in files {
        println!("wrote {}", f.display());
    }
    EXIT_OK
}
