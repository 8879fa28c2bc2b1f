//! The `geocur` command line.
//!
//! Exit codes: 0 success, 1 failed verification, 2 contract or input
//! error, 3 infeasible, 4 i/o error, 64 usage error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::complex::CellComplex;
use crate::error::{GeoError, Result};
use crate::field::VectorField;
use crate::flatnorm::{flat_norm_with, Arith, FlatKind, FlatOptions};
use crate::io;
use crate::mountain;
use crate::path::CurrentPath;
use crate::rational::{self, Rational};
use crate::spacetime::{self, Side};
use crate::transport;
use crate::verify;

#[derive(Parser, Debug)]
#[command(name = "geocur", version, about = "Flat norms, transport and space-time slicing of discrete currents")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Where to write the run manifest (default: next to the first output).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LipschitzPairs {
    AllConsecutive,
    AllPairs,
    None,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SliceSide {
    Below,
    Above,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Flat norm of a current with its optimal decomposition.
    Flatnorm {
        #[arg(long)]
        current: PathBuf,
        /// Complex to read the current against, overriding its own reference.
        #[arg(long)]
        complex: Option<PathBuf>,
        /// whitney, homogeneous, integral_whitney or integral_homogeneous.
        #[arg(long, default_value = "whitney")]
        kind: String,
        /// Certificate output (value, Q and R).
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Push a current along a vector field and check the weak equation.
    Transport {
        #[arg(long)]
        current: PathBuf,
        /// `constant:v1,v2`, `rotation:c1,c2:rate`, `shear:s`, `linear:a,b,c,d` or `zero:d`.
        #[arg(long)]
        field: String,
        #[arg(long, default_value = "0")]
        t0: String,
        #[arg(long, default_value = "1")]
        t1: String,
        /// Snapshot spacing; rounded so that it divides `t1 - t0`.
        #[arg(long, default_value = "1/64")]
        dt: String,
        /// RK4 step (default: `dt / 8`).
        #[arg(long)]
        h: Option<f64>,
        /// Snapshot path output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV of residuals per battery form and test function.
        #[arg(long)]
        residual_report: Option<PathBuf>,
    },
    /// Glue a boundaryless path into a space-time current.
    Glue {
        #[arg(long)]
        path: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Complex to fill differences in when the snapshots carry no cells
        /// of one dimension higher (default: the coarsest lattice grid).
        #[arg(long)]
        ambient: Option<PathBuf>,
    },
    /// Slice a space-time current at one time.
    Slice {
        #[arg(long)]
        spacetime: PathBuf,
        #[arg(long)]
        t: String,
        #[arg(long, value_enum, default_value = "below")]
        side: SliceSide,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Variation, dyadic estimates and the critical set of a space-time current.
    Diagnose {
        #[arg(long)]
        spacetime: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Per-bin CSV (default: the report path with a `.csv` extension).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        /// Complex for the flat norms between slices (default: the coarsest
        /// lattice grid through all slice vertices, else the slice complexes).
        #[arg(long)]
        ambient: Option<PathBuf>,
        /// Also run the advection check with this many time intervals.
        #[arg(long)]
        advection: Option<usize>,
    },
    /// Build the Flat Mountain at a level and check its identities.
    Flatmountain {
        #[arg(long)]
        level: u32,
        /// CSV of `u` per cell: digit string, numerator, denominator.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        emit_spacetime: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "none")]
        verify_lipschitz: LipschitzPairs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long, default_value = "paper")]
        suite: String,
        /// Comma separated criterion numbers (default: all).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
        #[arg(long, default_value_t = 20_240_601)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub inputs: Vec<InputHash>,
    pub seed: Option<u64>,
    pub arith: String,
    pub version: String,
    pub wall_time: f64,
    pub outputs: Vec<String>,
}

struct Run {
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    seed: Option<u64>,
    arith: String,
    failed: bool,
}

impl Run {
    fn new(arith: &str) -> Self {
        Run { inputs: Vec::new(), outputs: Vec::new(), seed: None, arith: arith.into(), failed: false }
    }

    fn input(&mut self, p: &Path) {
        self.inputs.push(p.to_path_buf());
    }

    fn output(&mut self, p: &Path) {
        self.outputs.push(p.to_path_buf());
    }
}

fn arith_env(default: &str) -> Result<String> {
    match std::env::var("GEOCUR_ARITH") {
        Ok(v) if !v.is_empty() => match v.as_str() {
            "exact" | "float64" => Ok(v),
            _ => Err(GeoError::Parse(format!("GEOCUR_ARITH must be exact or float64, not '{v}'"))),
        },
        _ => Ok(default.into()),
    }
}

fn exit_code(e: &GeoError) -> i32 {
    match e {
        GeoError::Infeasible(_) => 3,
        GeoError::Io(_) => 4,
        _ => 2,
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.jobs {
        // fails only if a pool already exists, as in repeated in-process calls
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let start = Instant::now();
    let outcome = dispatch(&cli.command).and_then(|run| {
        write_manifest(&cli, &argv, &run, start.elapsed().as_secs_f64())?;
        Ok(run)
    });
    match outcome {
        Ok(run) if run.failed => 1,
        Ok(_) => 0,
        Err(e) => {
            eprintln!("geocur: {e}");
            exit_code(&e)
        }
    }
}

fn write_manifest(cli: &Cli, argv: &[OsString], run: &Run, wall_time: f64) -> Result<()> {
    let target = match (&cli.manifest, run.outputs.first()) {
        (Some(p), _) => p.clone(),
        (None, Some(first)) => {
            let name = first.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            first.with_file_name(format!("{name}.manifest.json"))
        }
        (None, None) => return Ok(()),
    };
    let inputs = run
        .inputs
        .iter()
        .map(|p| {
            Ok(InputHash { path: p.display().to_string(), sha256: hex::encode(Sha256::digest(fs::read(p)?)) })
        })
        .collect::<Result<_>>()?;
    let m = RunManifest {
        command: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        inputs,
        seed: run.seed,
        arith: run.arith.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        wall_time,
        outputs: run.outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    io::write_json(&target, &m)
}

fn dispatch(cmd: &Command) -> Result<Run> {
    match cmd {
        Command::Flatnorm { current, complex, kind, emit } => {
            let mut run = Run::new(&arith_env("exact")?);
            run.input(current);
            let t = match complex {
                Some(c) => {
                    run.input(c);
                    let f: io::CurrentFile = serde_json::from_str(&fs::read_to_string(current)?)?;
                    f.to_current_on(&io::read_complex_file(c)?)?
                }
                None => io::read_current(current)?,
            };
            let kind: FlatKind = kind.parse()?;
            let opts = FlatOptions { arith: run.arith.parse::<Arith>()?, ..FlatOptions::default() };
            let cert = flat_norm_with(&t, kind, &opts)?;
            match cert.exact_value() {
                Some(v) => println!("{kind} flat norm = {} ({:.12})", rational::format(v), cert.value.value()),
                None => println!("{kind} flat norm = {:.12}", cert.value.value()),
            }
            if let Some(p) = emit {
                io::write_json(p, &io::CertificateFile::of(&cert)?)?;
                run.output(p);
            }
            Ok(run)
        }
        Command::Transport { current, field, t0, t1, dt, h, out, residual_report } => {
            let mut run = Run::new(&arith_env("float64")?);
            run.input(current);
            let t = io::read_current(current)?;
            let b = VectorField::parse(field)?;
            let (a, z) = (rational::parse(t0)?, rational::parse(t1)?);
            let dt = rational::to_f64(&rational::parse(dt)?);
            if z <= a || dt.is_nan() || dt <= 0.0 {
                return Err(GeoError::Contract("need t1 > t0 and dt > 0".into()));
            }
            let n = (rational::to_f64(&(&z - &a)) / dt).round().max(1.0) as i64;
            let times: Vec<Rational> = (0..=n).map(|i| &a + (&z - &a) * rational::rat(i, n)).collect();
            let path = if run.arith == "exact" {
                exact_translation(&t, &b, &times)?
            } else {
                transport::transport_path(&t, &b, &times, h.unwrap_or(dt / 8.0))?
            };
            println!("{} snapshots, final mass {:.12}", path.len(), path.snapshots[path.len() - 1].mass().value());
            if let Some(p) = out {
                io::write_path(p, &path)?;
                run.output(p);
            }
            if let Some(p) = residual_report {
                let forms = crate::form::battery(t.ambient_dim(), t.k());
                let psis = transport::test_functions();
                let res = transport::gte_residuals(&path, &b, &forms, &psis)?;
                let mut rows = Vec::new();
                let mut worst: f64 = 0.0;
                for (i, row) in res.iter().enumerate() {
                    for (j, r) in row.iter().enumerate() {
                        worst = worst.max(r.abs());
                        rows.push(vec![i.to_string(), j.to_string(), format!("{r:.6e}")]);
                    }
                }
                io::write_csv(p, &["form", "psi", "residual"], rows)?;
                run.output(p);
                println!("largest weak-equation residual {worst:.3e}");
            }
            Ok(run)
        }
        Command::Glue { path, out, ambient } => {
            let mut run = Run::new("exact");
            run.input(path);
            let mut p = io::read_path(path)?.on_common_complex()?;
            let cx = p.snapshots[0].complex().clone();
            let target = match ambient {
                Some(a) => {
                    run.input(a);
                    Some(io::read_complex(a)?)
                }
                None if cx.max_dim() <= p.k() => lattice_grid(&cx)?,
                None => None,
            };
            if let Some(t) = target {
                let snaps = p.snapshots.iter().map(|s| s.transfer_subdivided(&t)).collect::<Result<Vec<_>>>()?;
                p = CurrentPath::new(p.times.clone(), snaps)?;
            }
            let g = spacetime::glue(&p)?;
            let bd_ok = g.current.current().boundary().to_cell_map() == g.expected_boundary;
            println!(
                "glued {} cells; sum of filling masses {}; boundary formula {}",
                g.current.current().len(),
                measure_text(&g.filling_mass),
                if bd_ok { "holds" } else { "FAILS" }
            );
            io::write_spacetime(out, &g.current)?;
            run.output(out);
            Ok(run)
        }
        Command::Slice { spacetime: sp, t, side, out } => {
            let mut run = Run::new("exact");
            run.input(sp);
            let s = io::read_spacetime(sp)?;
            let side = match side {
                SliceSide::Below => Side::Below,
                SliceSide::Above => Side::Above,
            };
            let sl = spacetime::slice(&s, &rational::parse(t)?, side)?;
            println!("slice mass {}; boundary mass {}", measure_text(&sl.mass()), measure_text(&sl.boundary().mass()));
            if let Some(p) = out {
                io::write_current(p, &sl)?;
                run.output(p);
            }
            Ok(run)
        }
        Command::Diagnose { spacetime: sp, report, csv, depth, ambient, advection } => {
            let mut run = Run::new("exact");
            run.input(sp);
            let s = io::read_spacetime(sp)?;
            let cx = match ambient {
                Some(p) => {
                    run.input(p);
                    io::read_complex(p)?
                }
                None => spacetime::slice_hull(&s, *depth)?,
            };
            let rep = match (ambient, lattice_grid(&cx)?) {
                (None, Some(grid)) => spacetime::variation_report(&s, *depth, &grid).or_else(|_| spacetime::variation_report(&s, *depth, &cx))?,
                _ => spacetime::variation_report(&s, *depth, &cx)?,
            };
            let gd = s.geometric_derivative(&Rational::from_integer(0.into()))?;
            let adv = advection.map(|n| spacetime::advection_check(&s, n)).transpose()?;
            #[derive(Serialize)]
            struct Diagnosis<'a> {
                variation: &'a spacetime::VariationReport,
                crit_mass: f64,
                crit_mass_exact: Option<String>,
                advection: Option<spacetime::AdvectionReport>,
            }
            let d = Diagnosis {
                variation: &rep,
                crit_mass: gd.crit_mass.value(),
                crit_mass_exact: gd.crit_mass.exact.as_ref().map(rational::format),
                advection: adv,
            };
            io::write_json(report, &d)?;
            run.output(report);
            let csv_path = csv.clone().unwrap_or_else(|| report.with_extension("csv"));
            let rows = rep.bins.iter().map(|b| {
                vec![b.lo.clone(), b.hi.clone(), b.var_exact.clone().unwrap_or_else(|| format!("{:.12}", b.var)), format!("{:.12}", b.crit_mass)]
            });
            io::write_csv(&csv_path, &["lo", "hi", "var", "crit_mass"], rows)?;
            run.output(&csv_path);
            let ev_path = csv_path.with_file_name(format!(
                "{}_ev.csv",
                csv_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
            ));
            let opt = |v: &Option<String>| v.clone().unwrap_or_default();
            let rows = rep.ev.iter().map(|r| {
                vec![
                    r.depth.to_string(),
                    r.ev_whitney_exact.clone().unwrap_or_else(|| format!("{:.12}", r.ev_whitney)),
                    opt(&r.ev_homogeneous_exact),
                    opt(&r.ev_integral_exact),
                    r.within_var.to_string(),
                ]
            });
            io::write_csv(&ev_path, &["depth", "ev_whitney", "ev_homogeneous", "ev_integral", "within_var"], rows)?;
            run.output(&ev_path);
            println!(
                "Var = {}; eV({depth}) = {}; critical mass {}",
                rep.var_total_exact.clone().unwrap_or_else(|| format!("{:.12}", rep.var_total)),
                rep.ev.last().map(|r| r.best().1.map(String::from).unwrap_or_else(|| format!("{:.12}", r.best().0))).unwrap_or_default(),
                measure_text(&gd.crit_mass)
            );
            Ok(run)
        }
        Command::Flatmountain { level, emit, emit_spacetime, verify_lipschitz, report } => {
            let mut run = Run::new(&arith_env("exact")?);
            let u = mountain::iterate_u(*level)?;
            if let Some(p) = emit {
                let n = *level as usize;
                let rows = u.values().iter().enumerate().map(|(d, v)| {
                    let digits: String = (0..n).map(|i| char::from(b'0' + ((d >> (2 * (n - 1 - i))) & 3) as u8)).collect();
                    vec![digits, v.numer().to_string(), v.denom().to_string()]
                });
                io::write_csv(p, &["digits", "num", "den"], rows)?;
                run.output(p);
            }
            let g = mountain::graph_current(&u)?;
            if let Some(p) = emit_spacetime {
                io::write_spacetime(p, &g)?;
                run.output(p);
            }
            let top = 1u64 << (2 * level);
            let pairs: Vec<(u64, u64)> = match verify_lipschitz {
                LipschitzPairs::AllConsecutive => (0..top).map(|j| (j, j + 1)).collect(),
                LipschitzPairs::AllPairs => (0..=top).flat_map(|j| (j + 1..=top).map(move |k| (j, k))).collect(),
                LipschitzPairs::None => Vec::new(),
            };
            let lip = if pairs.is_empty() { None } else { Some(mountain::verify_lipschitz(*level, &pairs)?) };
            let (crit, var) = mountain::graph_mass_split(&u)?;
            #[derive(Serialize)]
            struct FmReport {
                level: u32,
                total_variation: String,
                critical_mass: String,
                variation_mass: String,
                lipschitz: Option<mountain::LipschitzReport>,
            }
            let rep = FmReport {
                level: *level,
                total_variation: rational::format(&u.total_variation()),
                critical_mass: measure_text(&crit),
                variation_mass: measure_text(&var),
                lipschitz: lip,
            };
            if let Some(l) = &rep.lipschitz {
                let ok = l.entries.iter().filter(|e| e.ok).count();
                println!("lipschitz identity: {ok} of {} pairs exact", l.entries.len());
                run.failed |= !l.all_ok;
            }
            println!("level {level}: TV(u) = {}, critical mass {}, Var {}", rep.total_variation, rep.critical_mass, rep.variation_mass);
            if let Some(p) = report {
                io::write_json(p, &rep)?;
                run.output(p);
            }
            Ok(run)
        }
        Command::Verify { suite, criteria, seed, report } => {
            if suite != "paper" {
                return Err(GeoError::Contract(format!("unknown suite '{suite}'")));
            }
            let mut run = Run::new("exact");
            run.seed = Some(*seed);
            let ids: Vec<u8> = if criteria.is_empty() { verify::CRITERIA.iter().map(|c| c.0).collect() } else { criteria.clone() };
            let mut results = Vec::new();
            for id in ids {
                let r = verify::run_criterion(id, *seed);
                println!("{r}");
                run.failed |= !r.passed;
                results.push(r);
            }
            if let Some(p) = report {
                io::write_json(p, &results)?;
                run.output(p);
            }
            Ok(run)
        }
    }
}

/// Largest grid cells on which every vertex of `hull` is a lattice point,
/// when that grid is small enough to solve on.
fn lattice_grid(hull: &CellComplex) -> Result<Option<Arc<CellComplex>>> {
    let d = hull.ambient_dim();
    let (mut lo, mut h, mut counts) = (Vec::new(), Vec::new(), Vec::new());
    let mut total = 1usize;
    for axis in 0..d {
        let Some((a, b)) = hull.coord_range(axis) else { return Ok(None) };
        let l = hull.cells(0).iter().fold(BigInt::one(), |l, c| l.lcm(c.vertices()[0][axis].denom()));
        let step = Rational::new(BigInt::one(), l);
        let n = ((&b - &a) / &step).to_integer().to_usize().unwrap_or(usize::MAX).max(1);
        total = total.saturating_mul(n);
        lo.push(a);
        h.push(step);
        counts.push(n);
    }
    if total > 4096 {
        return Ok(None);
    }
    CellComplex::grid(&lo, &h, &counts).map(Some)
}

fn measure_text(m: &crate::rational::Measure) -> String {
    m.exact.as_ref().map(rational::format).unwrap_or_else(|| format!("{:.12}", m.value()))
}

/// Exact transport, available for constant fields only.
fn exact_translation(t: &crate::chain::Current, b: &VectorField, times: &[Rational]) -> Result<CurrentPath> {
    let v = match b.polynomials_at(&times[0]) {
        Some(ps) if ps.iter().all(|p| p.degree() == 0) => ps.iter().map(|p| p.eval(&vec![Rational::from_integer(0.into()); p.nvars()])).collect::<Vec<_>>(),
        _ => return Err(GeoError::Contract("exact transport needs a constant field".into())),
    };
    let snaps = times
        .iter()
        .map(|s| {
            let dt = s - &times[0];
            transport::translate(t, &v.iter().map(|c| c * &dt).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    CurrentPath::new(times.to_vec(), snaps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run_from(["geocur", "flatnorm", "--bogus"]), 64);
        assert_eq!(run_from(["geocur", "--help"]), 0);
    }

    #[test]
    fn homogeneous_norm_of_open_segment_is_infeasible() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("seg.json");
        let cx = crate::complex::CellComplex::unit_grid(&[2]).unwrap();
        let t = crate::chain::Current::from_entries(cx, 1, [(0, rational::int(1))]).unwrap();
        io::write_current(&p, &t).unwrap();
        let code = run_from(["geocur", "flatnorm", "--current", p.to_str().unwrap(), "--kind", "homogeneous"]);
        assert_eq!(code, 3);
    }

    #[test]
    fn missing_input_is_io_error() {
        assert_eq!(run_from(["geocur", "slice", "--spacetime", "/nonexistent/s.json", "--t", "1/2"]), 4);
    }
}
