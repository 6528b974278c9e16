//! Command-line surface of the `surflink` binary.
//!
//! Exit codes: 0 success, 2 domain or usage error, 3 unidentifiable fit,
//! 4 numerical non-convergence. Errors go to the error stream only.

pub mod format;
pub mod scenario;
pub mod trials_csv;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::antenna::{self, AntennaRecord, ENCLOSURE_ADVANTAGE_DB_MEASURED};
use crate::error::{Error, Result};
use crate::halfspace::field_map;
use crate::linkmodel::{
    fit_parameters, link_probability, probability_grid, simulate_records, simulate_trials,
    two_path_gain, FreeParam, LinkScenario, ParamBounds,
};
use crate::media::{self, eps_imag, RfContext};
use crate::surfwave::{self, SurfaceWaveParams};
use format::sig6;
use scenario::Scenario;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_UNIDENTIFIABLE: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

pub const FIELD_MAP_HEADER: &str = "range_m,depth_m,magnitude_db";
pub const LINK_MAP_HEADER: &str = "depth_m,range_m,probability";

const DISCREPANCY_NOTE: &str = "note: eps_im derived from conductivity; the effective L_r of about \
60 m usually quoted for 50 MHz seawater corresponds to eps_im ~ 31.4, far below this value \
(see README, \"Surface-wave length discrepancy\")";

#[derive(Debug, Parser)]
#[command(name = "surflink", version, about = "Surface-wave underwater radio link calculator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plane-wave skin depth and its frequency-independent constant.
    #[command(allow_negative_numbers = true)]
    SkinDepth {
        #[arg(long)]
        freq: f64,
        #[command(flatten)]
        loss: Conductivity,
        #[arg(long)]
        json: bool,
    },
    /// Surface-wave penetration depth and propagation length.
    #[command(allow_negative_numbers = true)]
    SurfaceParams {
        #[arg(long)]
        freq: f64,
        /// Imaginary part of the relative permittivity.
        #[arg(long, conflicts_with_all = ["eps_real", "sigma", "salinity"])]
        eps_im: Option<f64>,
        #[arg(long)]
        eps_real: Option<f64>,
        #[command(flatten)]
        loss: OptionalConductivity,
        /// Signal level for the reported depth (dB, <= 0).
        #[arg(long, default_value_t = -90.0)]
        level_db: f64,
        /// Read `--level-db` as power dB instead of field amplitude dB.
        #[arg(long)]
        power_db: bool,
        #[arg(long)]
        json: bool,
    },
    /// Dipole field map below the interface as long-format CSV.
    #[command(allow_negative_numbers = true)]
    FieldMap {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Link probability map as long-format CSV.
    #[command(allow_negative_numbers = true)]
    LinkMap {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit link parameters to a trial CSV; prints JSON.
    #[command(allow_negative_numbers = true)]
    Fit {
        #[arg(long)]
        trials: PathBuf,
        /// Comma-separated subset of L_r, L_z, coupling_db, sigma_fade_db.
        #[arg(long, value_delimiter = ',', required = true)]
        free: Vec<String>,
        /// Comma-separated `name=lo:hi` bounds overriding the defaults.
        #[arg(long, value_delimiter = ',')]
        bounds: Vec<String>,
        /// Scenario supplying the fixed parameters.
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Seeded push-to-talk trials.
    #[command(allow_negative_numbers = true)]
    Simulate {
        #[arg(long, conflicts_with = "scenario")]
        prob: Option<f64>,
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long, requires = "scenario")]
        depth: Option<f64>,
        #[arg(long, requires = "scenario")]
        range: Option<f64>,
        #[arg(long)]
        attempts: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// With a scenario and no cell: write trials for the whole grid.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Resonance and size scaling for a dielectric-loaded antenna.
    #[command(allow_negative_numbers = true)]
    AntennaScale {
        #[arg(long, required_unless_present = "reference")]
        f_air: Option<f64>,
        #[arg(long, required_unless_present = "reference")]
        eps_r: Option<f64>,
        /// Print the bundled reference helix record instead.
        #[arg(long)]
        reference: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Conductivity {
    /// S/m
    #[arg(long)]
    sigma: Option<f64>,
    /// Percent; rough linear map to conductivity.
    #[arg(long)]
    salinity: Option<f64>,
}

#[derive(Debug, Args)]
#[group(required = false, multiple = false)]
pub struct OptionalConductivity {
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    salinity: Option<f64>,
}

fn conductivity(sigma: Option<f64>, salinity: Option<f64>) -> Result<f64> {
    match (sigma, salinity) {
        (Some(s), _) => Ok(s),
        (None, Some(x)) => media::salinity_to_conductivity(x),
        (None, None) => Err(Error::domain("give --sigma or --salinity")),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unidentifiable(_) => EXIT_UNIDENTIFIABLE,
        Error::Convergence { .. } | Error::MapFailed => EXIT_NONCONVERGENCE,
        _ => EXIT_DOMAIN,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_DOMAIN,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(out: &mut dyn Write, json: bool, pairs: &[(&str, f64)]) -> Result<()> {
    if json {
        let map: serde_json::Map<String, serde_json::Value> =
            pairs.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        writeln!(out, "{}", serde_json::Value::Object(map))?;
    } else {
        for (k, v) in pairs {
            writeln!(out, "{k} = {}", sig6(*v))?;
        }
    }
    Ok(())
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::SkinDepth { freq, loss, json } => {
            let sigma = conductivity(loss.sigma, loss.salinity)?;
            let delta = media::skin_depth(sigma, freq)?;
            let constant = media::skin_depth_constant(sigma)?;
            emit(
                out,
                json,
                &[("delta_m", delta), ("constant_hz_sqrt_m", constant), ("sigma_s_per_m", sigma)],
            )
        }
        Command::SurfaceParams {
            freq,
            eps_im,
            eps_real,
            loss,
            level_db,
            power_db,
            json,
        } => {
            let ctx = RfContext::new(freq)?;
            let (eps_im, derived) = match eps_im {
                Some(e) => (e, false),
                None => {
                    let sigma = conductivity(loss.sigma, loss.salinity)
                        .map_err(|_| Error::domain("give --eps-im, or --eps-real with --sigma/--salinity"))?;
                    // ε' does not enter the closed forms but must still be a valid medium.
                    media::Medium::new(eps_real.unwrap_or(media::SEAWATER_EPS_R), sigma, "water")?;
                    (eps_imag(sigma, &ctx), true)
                }
            };
            let p = SurfaceWaveParams::new(ctx.lambda0(), eps_im)?;
            let depth = if power_db {
                surfwave::depth_at_power_level(level_db, p.l_z)?
            } else {
                surfwave::depth_at_level(level_db, p.l_z)?
            };
            emit(
                out,
                json,
                &[
                    ("lambda0_m", p.lambda0),
                    ("eps_im", p.eps_im),
                    ("L_z_m", p.l_z),
                    ("L_r_m", p.l_r),
                    ("level_db", level_db),
                    ("depth_at_level_m", depth),
                ],
            )?;
            if derived && !json {
                writeln!(out, "{DISCREPANCY_NOTE}")?;
            }
            Ok(())
        }
        Command::FieldMap { scenario, out: path } => {
            let s = Scenario::load(&scenario)?;
            let problem = s.half_space()?;
            let map = field_map(&problem, &s.ranges()?, &s.depths()?, &s.quadrature()?)?;
            let mut w = create(&path)?;
            writeln!(w, "{FIELD_MAP_HEADER}")?;
            for (r, d, db) in map.rows() {
                writeln!(w, "{},{},{}", sig6(r), sig6(d), db.map(sig6).unwrap_or_default())?;
            }
            w.flush()?;
            writeln!(
                out,
                "points = {}\nfailed = {}",
                map.magnitude_db.len(),
                map.failures.len()
            )?;
            Ok(())
        }
        Command::LinkMap { scenario, out: path } => {
            let s = Scenario::load(&scenario)?;
            let grid = probability_grid(&s.depths()?, &s.ranges()?, &s.link_params()?)?;
            let mut w = create(&path)?;
            writeln!(w, "{LINK_MAP_HEADER}")?;
            for (d, r, p) in grid.rows() {
                writeln!(w, "{},{},{}", sig6(d), sig6(r), sig6(p))?;
            }
            w.flush()?;
            writeln!(out, "cells = {}", grid.depths.len() * grid.ranges.len())?;
            Ok(())
        }
        Command::Fit {
            trials,
            free,
            bounds,
            scenario,
        } => {
            let file = File::open(&trials).map_err(|e| Error::Io(format!("{}: {e}", trials.display())))?;
            let records = trials_csv::read_trials(file)?;
            let base = match scenario {
                Some(p) => Scenario::load(&p)?.link_params()?,
                None => Default::default(),
            };
            let free = parse_free(&free, &bounds)?;
            let fit = fit_parameters(&records, &base, &free)?;
            let fitted: serde_json::Map<String, serde_json::Value> = fit
                .fitted
                .iter()
                .map(|(p, v)| (p.name().to_string(), json!(v)))
                .collect();
            let doc = json!({
                "fitted": fitted,
                "objective": fit.objective,
                "params": fit.params,
                "records": records.len(),
                "iterations": fit.iterations,
                "evaluations": fit.evaluations,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("plain JSON"))?;
            Ok(())
        }
        Command::Simulate {
            prob,
            scenario,
            depth,
            range,
            attempts,
            seed,
            out: path,
            json,
        } => {
            let s = match &scenario {
                Some(p) => Some(Scenario::load(p)?),
                None => None,
            };
            let seed = match seed {
                Some(v) => v,
                None => s.as_ref().map(|s| s.seed()).transpose()?.unwrap_or(0),
            };
            let attempts = match attempts {
                Some(v) => v,
                None => s
                    .as_ref()
                    .map(|s| s.attempts())
                    .transpose()?
                    .flatten()
                    .unwrap_or(10),
            };
            if let (Some(s), None, None) = (&s, depth, range) {
                let path = path.ok_or_else(|| {
                    Error::domain("with a scenario, give --depth and --range, or --out for the whole grid")
                })?;
                let grid = probability_grid(&s.depths()?, &s.ranges()?, &s.link_params()?)?;
                let records = simulate_records(&grid, attempts, seed)?;
                trials_csv::write_trials(create(&path)?, &records)?;
                writeln!(out, "records = {}", records.len())?;
                return Ok(());
            }
            let prob = match (prob, &s) {
                (Some(p), _) => p,
                (None, Some(s)) => {
                    let (d, r) = match (depth, range) {
                        (Some(d), Some(r)) => (d, r),
                        _ => return Err(Error::domain("give both --depth and --range")),
                    };
                    let params = s.link_params()?;
                    link_probability(two_path_gain(&LinkScenario::level(d, r)?, &params), &params)
                }
                (None, None) => return Err(Error::domain("give --prob or --scenario")),
            };
            let o = simulate_trials(prob, attempts, seed)?;
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({"prob": prob, "attempts": attempts, "seed": seed,
                           "successes": o.successes, "estimate": o.estimate})
                )?;
            } else {
                writeln!(out, "successes = {}", o.successes)?;
                writeln!(out, "attempts = {attempts}")?;
                writeln!(out, "estimate = {}", sig6(o.estimate))?;
            }
            Ok(())
        }
        Command::AntennaScale {
            f_air,
            eps_r,
            reference,
            json,
        } => {
            if reference {
                let rec = AntennaRecord::reference_helix();
                let doc = json!({
                    "record": rec,
                    "f_medium_hz": rec.resonance_in_medium()?,
                    "enclosure_advantage_db": {
                        "value": ENCLOSURE_ADVANTAGE_DB_MEASURED,
                        "kind": "measurement",
                        "conditions": "2.45 GHz, brackish water 0.5% salinity, enclosed vs bare antennas",
                    },
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("plain JSON"))?;
                return Ok(());
            }
            let (f_air, eps_r) = (f_air.expect("clap requires"), eps_r.expect("clap requires"));
            emit(
                out,
                json,
                &[
                    ("f_medium_hz", antenna::resonance_in_medium(f_air, eps_r)?),
                    ("size_factor", antenna::size_reduction_factor(eps_r)?),
                ],
            )
        }
    }
}

fn default_bounds(p: FreeParam) -> ParamBounds {
    match p {
        FreeParam::LR => ParamBounds::new(1.0, 100.0),
        FreeParam::LZ => ParamBounds::new(0.005, 1.0),
        FreeParam::Coupling => ParamBounds::new(-60.0, 60.0),
        FreeParam::SigmaFade => ParamBounds::new(0.5, 30.0),
    }
}

/// Free parameters in declared order with bounds from `name=lo:hi` overrides.
pub fn parse_free(free: &[String], bounds: &[String]) -> Result<Vec<(FreeParam, ParamBounds)>> {
    let mut out: Vec<(FreeParam, ParamBounds)> = free
        .iter()
        .map(|n| n.parse::<FreeParam>().map(|p| (p, default_bounds(p))))
        .collect::<Result<_>>()?;
    for entry in bounds {
        let bad = || Error::domain(format!("bound `{entry}` must look like name=lo:hi"));
        let (name, range) = entry.split_once('=').ok_or_else(bad)?;
        let (lo, hi) = range.split_once(':').ok_or_else(bad)?;
        let param: FreeParam = name.parse()?;
        let b = ParamBounds::new(lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
        let slot = out
            .iter_mut()
            .find(|(p, _)| *p == param)
            .ok_or_else(|| Error::domain(format!("bound given for {param}, which is not free")))?;
        slot.1 = b;
    }
    Ok(out)
}
