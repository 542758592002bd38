//! Command-line driver: synthesize phaseless datasets, run inversions, verify
//! the translation-invariance lattice and compare the solver against the
//! circle series oracle.
//!
//! Exit codes: 0 success, 2 configuration/validation error, 3 numerical
//! failure.

use clap::{Parser, Subcommand};
use serde::Serialize;
use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use scatter2d::error::Error;
use scatter2d::frechet::Physics;
use scatter2d::geometry::Curve;
use scatter2d::inversion::{reconstruct, FrequencyRecord};
use scatter2d::oracle::series_farfield_superposition;
use scatter2d::phaseless::{
    add_noise, check_invariance, invariance_offset, read_dataset, synthesize_dataset_threaded,
    write_dataset,
};
use scatter2d::incident::PlaneWaveSuperposition;
use scatter2d::solver::{far_field_for, BoundaryCondition, SolverConfig};

use scatter2d_cli::config::ExperimentConfig;

#[derive(Parser)]
#[command(name = "scatter2d", about = "2D phaseless obstacle-scattering experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for independent solves
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a phaseless far-field dataset from an obstacle description
    Synthesize {
        #[arg(long)]
        config: String,
        /// Output dataset file (default: <config out dir>/dataset.txt)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config noise seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reconstruct the obstacle from a dataset
    Invert {
        #[arg(long)]
        config: String,
        #[arg(long)]
        dataset: PathBuf,
        /// Output directory for report and curves (default: config out dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate phaseless discrepancies over translation shifts
    VerifyInvariance {
        #[arg(long)]
        config: String,
        /// Output CSV file (default: <config out dir>/invariance.csv)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the Nystrom solver with the circle series oracle
    OracleCheck {
        #[arg(long)]
        config: String,
        /// Output CSV file (default: <config out dir>/oracle.csv)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidConfig(_)
                | Error::MetadataMismatch(_)
                | Error::Json(_)
                | Error::Io(_) => 2,
                Error::Domain(_) | Error::DegenerateCurve { .. } | Error::SingularSystem(_) => 3,
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<(), Error> {
    let threads = cli.threads.max(1);
    match cli.command {
        Command::Synthesize { config, out, seed } => cmd_synthesize(&config, out, seed, threads),
        Command::Invert {
            config,
            dataset,
            out,
        } => cmd_invert(&config, &dataset, out, threads),
        Command::VerifyInvariance { config, out } => cmd_verify_invariance(&config, out),
        Command::OracleCheck { config, out } => cmd_oracle_check(&config, out),
    }
}

fn cmd_synthesize(
    config: &str,
    out: Option<PathBuf>,
    seed_override: Option<u64>,
    threads: usize,
) -> Result<(), Error> {
    let cfg = ExperimentConfig::load(config)?;
    let out = out.unwrap_or_else(|| Path::new(&cfg.out).join("dataset.txt"));
    let out = out.as_path();
    if let Some(warning) = cfg.location_recovery_warning() {
        eprintln!("warning: {warning}");
    }
    let curve = cfg.curve()?;
    let bc = cfg.boundary_condition();
    let clean = synthesize_dataset_threaded(
        &curve,
        &bc,
        &cfg.pair_angles_rad(),
        &cfg.ks,
        cfg.nf,
        &SolverConfig::default(),
        threads,
    )?;
    let seed = seed_override.unwrap_or(cfg.seed);
    let data = add_noise(&clean, cfg.delta, seed)?;
    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut file = BufWriter::new(fs::File::create(out)?);
    write_dataset(&data, &mut file)?;
    file.flush()?;
    println!(
        "wrote {} ({} direction sets x {} frequencies x {} samples, delta {}, seed {seed})",
        out.display(),
        data.n_pairs(),
        data.ks.len(),
        data.n_f,
        data.delta
    );
    Ok(())
}

#[derive(Serialize)]
struct Report<'a> {
    delta: f64,
    seed: u64,
    ks: &'a [f64],
    frequencies: &'a [FrequencyRecord],
    final_state: &'a scatter2d::inversion::IterateState,
    warnings: Vec<String>,
}

fn cmd_invert(
    config: &str,
    dataset: &Path,
    out: Option<PathBuf>,
    threads: usize,
) -> Result<(), Error> {
    let cfg = ExperimentConfig::load(config)?;
    let out = out.unwrap_or_else(|| PathBuf::from(&cfg.out));
    let out = out.as_path();
    let data = read_dataset(BufReader::new(fs::File::open(dataset)?))?;

    // dataset metadata must match the configuration
    if data.n_f != cfg.nf {
        return Err(Error::MetadataMismatch(format!(
            "dataset has n_f = {}, config expects {}",
            data.n_f, cfg.nf
        )));
    }
    let want_pairs = cfg.pair_angles_rad();
    if data.pair_angles.len() != want_pairs.len()
        || data
            .pair_angles
            .iter()
            .zip(&want_pairs)
            .any(|(a, b)| a.len() != b.len() || a.iter().zip(b).any(|(x, y)| (x - y).abs() > 1e-9))
    {
        return Err(Error::MetadataMismatch(
            "dataset direction sets differ from the configuration".into(),
        ));
    }
    if data.ks.len() != cfg.ks.len()
        || data
            .ks
            .iter()
            .zip(&cfg.ks)
            .any(|(a, b)| (a - b).abs() > 1e-12)
    {
        return Err(Error::MetadataMismatch(
            "dataset frequency schedule differs from the configuration".into(),
        ));
    }

    let mut warnings = Vec::new();
    if let Some(w) = cfg.location_recovery_warning() {
        eprintln!("warning: {w}");
        warnings.push(w);
    }

    let physics = match cfg.boundary_condition() {
        BoundaryCondition::Dirichlet => Physics::Dirichlet,
        BoundaryCondition::Neumann => Physics::Neumann,
        BoundaryCondition::Transmission { n, .. } => Physics::Transmission { n },
        BoundaryCondition::Impedance { .. } => {
            return Err(Error::InvalidConfig(
                "impedance inversion is not supported (no shape derivative available); \
                 use synthesize/oracle-check for impedance obstacles"
                    .into(),
            ))
        }
    };
    let inv_cfg = cfg.inversion_config(data.delta, threads);
    let init = cfg.initial_state(inv_cfg.order)?;

    let result = reconstruct(&init, &physics, &data, &inv_cfg)?;

    fs::create_dir_all(out)?;
    for f in &result.frequencies {
        if f.cap_hit {
            let w = format!("iteration cap reached at k = {}", f.k);
            eprintln!("warning: {w}");
            warnings.push(w);
        }
    }
    let report = Report {
        delta: data.delta,
        seed: data.seed,
        ks: &data.ks,
        frequencies: &result.frequencies,
        final_state: &result.final_state,
        warnings,
    };
    fs::write(
        out.join("report.json"),
        serde_json::to_string_pretty(&report)?,
    )?;
    fs::write(
        out.join("curve.json"),
        serde_json::to_string_pretty(&result.final_state)?,
    )?;
    write_polyline(
        &out.join("init.csv"),
        &Curve::Starlike(init.curve.clone()),
    )?;
    for (m, state) in result.trajectory.iter().enumerate() {
        write_polyline(
            &out.join(format!("recon_k{}.csv", m + 1)),
            &Curve::Starlike(state.curve.clone()),
        )?;
    }
    for f in &result.frequencies {
        println!(
            "k = {:5.2}: {} iterations, Err {:.4} -> {:.4}",
            f.k, f.iterations, f.err_before, f.err_after
        );
    }
    if matches!(physics, Physics::Transmission { .. }) {
        println!("final lambda: {}", result.final_state.lambda);
    }
    println!("report written to {}", out.display());
    Ok(())
}

fn write_polyline(path: &Path, curve: &Curve) -> Result<(), Error> {
    let mut file = BufWriter::new(fs::File::create(path)?);
    writeln!(file, "t,x,y")?;
    for (t, x, y) in curve.sample_polyline(256) {
        writeln!(file, "{t},{x},{y}")?;
    }
    file.flush()?;
    Ok(())
}

fn cmd_verify_invariance(config: &str, out: Option<PathBuf>) -> Result<(), Error> {
    let cfg = ExperimentConfig::load(config)?;
    let out = out.unwrap_or_else(|| Path::new(&cfg.out).join("invariance.csv"));
    let out = out.as_path();
    let curve = cfg.curve()?;
    let bc = cfg.boundary_condition();
    let pairs = cfg.pair_angles_rad();
    let angles = &pairs[0];
    let k = cfg.ks[0];
    let w = PlaneWaveSuperposition::from_angles(k, angles)?;

    let mut shifts: Vec<([f64; 2], String)> = Vec::new();
    if let Some(spec) = &cfg.shifts {
        if let Some(lat) = &spec.lattice {
            if angles.len() != 2 {
                return Err(Error::InvalidConfig(
                    "lattice shifts need a two-direction set".into(),
                ));
            }
            let d1 = [angles[0].cos(), angles[0].sin()];
            let d2 = [angles[1].cos(), angles[1].sin()];
            for n in lat.n_min..=lat.n_max {
                for &a in &lat.a_values {
                    let o = invariance_offset(d1, d2, k, n, a, None)?;
                    shifts.push((o.offset, format!("lattice n={n} a={a}")));
                }
            }
        }
        for &l in &spec.extra {
            shifts.push((l, "extra".into()));
        }
        if spec.off_lattice_probe {
            if angles.len() == 2 {
                let d1 = [angles[0].cos(), angles[0].sin()];
                let d2 = [angles[1].cos(), angles[1].sin()];
                shifts.push((
                    [0.37 * (d1[0] - d2[0]), 0.37 * (d1[1] - d2[1])],
                    "off-lattice probe".into(),
                ));
            } else {
                shifts.push(([0.37, -0.11], "off-lattice probe".into()));
            }
        }
    }
    if shifts.is_empty() {
        return Err(Error::InvalidConfig(
            "field shifts: no translation shifts specified".into(),
        ));
    }

    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut file = BufWriter::new(fs::File::create(out)?);
    writeln!(file, "lx,ly,sup_discrepancy")?;
    println!("{:>10} {:>10} {:>14}  note", "lx", "ly", "discrepancy");
    for (l, note) in shifts {
        let d = check_invariance(&curve, &bc, &w, l, cfg.nf, &SolverConfig::default())?;
        writeln!(file, "{},{},{}", l[0], l[1], d)?;
        println!("{:>10.5} {:>10.5} {:>14.3e}  {note}", l[0], l[1], d);
    }
    file.flush()?;
    Ok(())
}

fn cmd_oracle_check(config: &str, out: Option<PathBuf>) -> Result<(), Error> {
    let cfg = ExperimentConfig::load(config)?;
    let out = out.unwrap_or_else(|| Path::new(&cfg.out).join("oracle.csv"));
    let out = out.as_path();
    let bc = cfg.boundary_condition();
    let radius = cfg.oracle_radius;
    let circle = Curve::Benchmark(scatter2d::geometry::BenchmarkCurve::Circle {
        r0: radius,
        center: [0.0, 0.0],
    });
    let angles = &cfg.pair_angles_rad()[0];

    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut file = BufWriter::new(fs::File::create(out)?);
    writeln!(file, "k,n_q,sup_error")?;
    println!("{:>6} {:>6} {:>14}", "k", "n_q", "sup error");
    for &k in &cfg.ks {
        let w = PlaneWaveSuperposition::from_angles(k, angles)?;
        let want = series_farfield_superposition(radius, [0.0, 0.0], &bc, &w, cfg.nf)?;
        let mut n_q = 64;
        let mut err = f64::INFINITY;
        while n_q <= 256 {
            let far = far_field_for(&circle, &bc, &w, cfg.nf, &SolverConfig::fixed(n_q))?;
            err = far.sup_diff(&want);
            if err < 1e-8 {
                break;
            }
            n_q *= 2;
        }
        let n_q_used = n_q.min(256);
        writeln!(file, "{k},{n_q_used},{err}")?;
        println!("{k:>6.2} {n_q_used:>6} {err:>14.3e}");
    }
    file.flush()?;
    Ok(())
}
