//! `cmc-rot`: rotational CMC spheres of `H^n × R` and `S^n × R` from the
//! command line.
//!
//! Mean curvature flags (`--H`, `--H-star`, grids and brackets) take `H` as
//! the sum of the principal curvatures. Threshold outputs also report the
//! averaged value `H/n`.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cmc_rot::isoperimetric::{isoperimetric_curve, slab_crossing_report};
use cmc_rot::nesting::{check_nested, estimate_alpha};
use cmc_rot::profile::DEFAULT_SAMPLES;
use cmc_rot::stability::{stability_threshold_h0, stability_verdict};
use cmc_rot::{Bracket, CmcError, CmcSphere, SpaceForm, SphereParams, Tolerance};
use serde_json::{json, Value};

use crate::output::{Document, Table};

#[derive(Parser, Debug)]
#[command(name = "cmc-rot", version, about = "Rotational CMC spheres of H^n x R and S^n x R")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Meridian profile and global geometry of one sphere (CSV by default).
    Profile {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long = "H")]
        h: f64,
        /// Number of Chebyshev samples of [0, s0].
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Check that the sphere of curvature H lies inside that of H* < H.
    Nest {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long = "H")]
        h: f64,
        #[arg(long = "H-star")]
        h_star: f64,
        #[arg(long, default_value_t = 128)]
        samples: usize,
    },
    /// Upper estimate of the nesting threshold alpha.
    Alpha {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Stability verdict for one sphere, or the threshold H0 with --threshold.
    Stability {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long = "H", required_unless_present = "threshold", conflicts_with = "threshold")]
        h: Option<f64>,
        #[arg(long)]
        threshold: bool,
        #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
        bracket_lo: f64,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        bracket_hi: f64,
    },
    /// Volume and area along an H grid (CSV by default), or the sphere/slab
    /// crossing H1 with --crossing.
    Iso {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        crossing: bool,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        h_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        h_max: f64,
        #[arg(long, default_value_t = 19)]
        h_count: usize,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        bracket_lo: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        bracket_hi: f64,
    },
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Curvature sign of the space form: -1 for H^n, 1 for S^n.
    #[arg(long = "eps", allow_negative_numbers = true)]
    epsilon: i8,
    /// Dimension of the space form (at least 2).
    #[arg(long)]
    n: u32,
    /// Relative tolerance of the adaptive integrals.
    #[arg(long, default_value_t = Tolerance::default().rel)]
    rel_tol: f64,
    /// Absolute tolerance of the adaptive integrals.
    #[arg(long, default_value_t = Tolerance::default().abs)]
    abs_tol: f64,
    /// Maximum bisection depth of the adaptive integrals.
    #[arg(long, default_value_t = Tolerance::default().max_depth)]
    max_depth: u32,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

struct Run {
    space: SpaceForm,
    tol: Tolerance,
    format: Format,
    output: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(&self, default_format: Format) -> Result<Run, CmcError> {
        Ok(Run {
            space: SpaceForm::from_epsilon(self.epsilon, self.n)?,
            tol: Tolerance::new(self.rel_tol, self.abs_tol, self.max_depth)?,
            format: self.format.unwrap_or(default_format),
            output: self.output.clone(),
        })
    }
}

impl Run {
    fn metadata(&self, extra: Value) -> Value {
        let mut meta = json!({
            "epsilon": self.space.epsilon() as i8,
            "n": self.space.n(),
            "tolerance": self.tol,
        });
        if let (Value::Object(m), Value::Object(e)) = (&mut meta, extra) {
            m.extend(e);
        }
        meta
    }
}

fn positive(name: &str, value: usize) -> Result<usize, CmcError> {
    if value == 0 {
        Err(CmcError::InvalidParameter(format!("{name} must be positive")))
    } else {
        Ok(value)
    }
}

fn profile(run: &Run, h: f64, samples: usize) -> Result<Document, CmcError> {
    positive("samples", samples)?;
    let sphere = CmcSphere::new(&run.space, h, &run.tol)?;
    let geometry = sphere.geometry()?;
    let curve = sphere.profile_curve(samples)?;
    let meta = run.metadata(json!({ "samples": samples }));
    match run.format {
        Format::Json => Ok(Document::json("profile", meta, json!({ "geometry": geometry, "samples": curve.samples }))),
        Format::Csv => {
            let mut table = Table::new(
                "profile",
                meta,
                &["s", "rho", "theta", "height", "k_profile", "k_rot"],
            );
            table.note("H", geometry.params.mean_curvature);
            table.note("s0", geometry.params.s0);
            table.note("area", geometry.area);
            table.note("volume", geometry.volume);
            table.note("total_height", geometry.total_height);
            table.note("convex", geometry.convex);
            for p in &curve.samples {
                table.row(&[p.s, p.rho, sphere.theta(p.s)?, p.t_lower, p.k_profile, p.k_rot]);
            }
            Ok(Document::Table(table))
        }
    }
}

fn stability(run: &Run, h: Option<f64>, threshold: bool, lo: f64, hi: f64) -> Result<Document, CmcError> {
    if threshold {
        let bracket = Bracket::new(lo, hi)?;
        let h0 = stability_threshold_h0(&run.space, bracket, &run.tol)?;
        let meta = run.metadata(json!({ "bracket": [lo, hi] }));
        return Ok(Document::json(
            "stability",
            meta,
            json!({
                "H0": h0 / run.space.n() as f64,
                "H0_raw": h0,
                "koiso_preconditions_assumed": true,
            }),
        ));
    }
    let h = h.expect("clap requires --H without --threshold");
    let report = stability_verdict(&SphereParams::solve(&run.space, h)?, &run.tol)?;
    Ok(Document::json("stability", run.metadata(json!({})), serde_json::to_value(report).unwrap()))
}

fn iso(run: &Run, args: IsoArgs) -> Result<Document, CmcError> {
    if args.crossing {
        let report = slab_crossing_report(&run.space, Bracket::new(args.bracket_lo, args.bracket_hi)?, &run.tol)?;
        let meta = run.metadata(json!({ "bracket": [args.bracket_lo, args.bracket_hi] }));
        return Ok(Document::json(
            "iso",
            meta,
            json!({
                "H1": report.h1_normalized,
                "H1_raw": report.h1,
                "reference": report.reference,
                "flagged": report.flagged,
            }),
        ));
    }
    let count = positive("h-count", args.h_count)?;
    let grid = if count == 1 {
        vec![args.h_min]
    } else {
        Bracket::new(args.h_min, args.h_max)?.linspace(count)
    };
    let report = isoperimetric_curve(&run.space, &grid, &run.tol)?;
    let meta = run.metadata(json!({ "h_grid": [args.h_min, args.h_max, count] }));
    match run.format {
        Format::Json => Ok(Document::json("iso", meta, serde_json::to_value(report).unwrap())),
        Format::Csv => {
            let mut table = Table::new("iso", meta, &["H", "volume", "area"]);
            if let Some(slab) = report.slab_area {
                table.note("slab_area", slab);
            }
            if let Some(h1) = report.crossing_h {
                table.note("crossing_H", h1);
            }
            table.note("unique_H_for_V", report.unique_h_for_v);
            for p in &report.curve {
                table.row(&[p.mean_curvature, p.volume, p.area]);
            }
            Ok(Document::Table(table))
        }
    }
}

struct IsoArgs {
    crossing: bool,
    h_min: f64,
    h_max: f64,
    h_count: usize,
    bracket_lo: f64,
    bracket_hi: f64,
}

fn execute(command: Command) -> Result<(Document, Option<PathBuf>), CmcError> {
    let (run_args, default_format) = match &command {
        Command::Profile { run, .. } | Command::Iso { run, crossing: false, .. } => (run, Format::Csv),
        Command::Iso { run, crossing: true, .. } => (run, Format::Json),
        Command::Nest { run, .. } | Command::Alpha { run, .. } | Command::Stability { run, .. } => (run, Format::Json),
    };
    let run = run_args.resolve(default_format)?;
    let json_only = |cmd: &str| {
        if run.format == Format::Csv {
            Err(CmcError::InvalidParameter(format!("{cmd} emits a report; use --format json")))
        } else {
            Ok(())
        }
    };
    let doc = match command {
        Command::Profile { h, samples, .. } => profile(&run, h, samples)?,
        Command::Nest { h, h_star, samples, .. } => {
            json_only("nest")?;
            let report = check_nested(&run.space, h, h_star, samples, &run.tol)?;
            let meta = run.metadata(json!({ "samples": samples }));
            Document::json("nest", meta, serde_json::to_value(report).unwrap())
        }
        Command::Alpha { grid, .. } => {
            json_only("alpha")?;
            positive("grid", grid)?;
            let estimate = estimate_alpha(&run.space, grid, &run.tol);
            Document::json("alpha", run.metadata(json!({ "grid": grid })), serde_json::to_value(estimate).unwrap())
        }
        Command::Stability { h, threshold, bracket_lo, bracket_hi, .. } => {
            json_only("stability")?;
            stability(&run, h, threshold, bracket_lo, bracket_hi)?
        }
        Command::Iso { crossing, h_min, h_max, h_count, bracket_lo, bracket_hi, .. } => {
            if crossing {
                json_only("iso --crossing")?;
            }
            iso(
                &run,
                IsoArgs { crossing, h_min, h_max, h_count, bracket_lo, bracket_hi },
            )?
        }
    };
    Ok((doc, run.output))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(cli.command).and_then(|(doc, path)| {
        doc.write(path.as_deref())
            .map_err(|e| CmcError::InvalidParameter(format!("cannot write output: {e}")))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_invalid_input() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
