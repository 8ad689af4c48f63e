use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use socc_core::experiments::{
    ber_csv, bounds_csv, read_spec, run_amplitude_histogram, run_ber_sweep, run_bounds_export, BoundsSpec, HistogramSpec,
    SimulationSpec,
};
use socc_core::zerosum::build_planemap;
use socc_core::SoccError;

/// Tolerance for the PlaneMap orthonormality and zero-sum checks.
const PLANEMAP_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "socc-lab", version, about = "Simultaneous over-the-air computation and communication lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Digital BER/FER and analog MSE over a noise-power grid.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Achievable and converse sum rates.
    Bounds {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Histogram of peak-amplitude growth caused by the zero-sum wrap.
    Histogram {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Builds U_n, prints its invariants and optionally writes it as CSV.
    Planemap {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write(path: &Path, body: &str) -> Result<(), SoccError> {
    std::fs::write(path, body)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn run(command: Command) -> Result<(), SoccError> {
    match command {
        Command::Simulate { config, out } => {
            let spec: SimulationSpec = read_spec(&config)?;
            let rows = run_ber_sweep(&spec)?;
            for r in &rows {
                let db = r.noise_power_db.map_or("noiseless".into(), |d| format!("{d} dB"));
                eprintln!(
                    "{db}: ber {:.3e}, fer {:.3e}, analog mse {:.4e} (theory {:.4e}), {} frames",
                    r.ber(),
                    r.fer(),
                    r.analog_mse,
                    r.analog_mse_theory,
                    r.frames
                );
                if r.noise_power_db.is_none() && (r.bit_errors > 0 || r.analog_mse > 1e-18) {
                    return Err(SoccError::ConstraintViolation(
                        "errors on the noiseless channel".into(),
                    ));
                }
            }
            write(&out, &ber_csv(&rows))
        }
        Command::Bounds { config, out } => {
            let spec: BoundsSpec = read_spec(&config)?;
            let rows = run_bounds_export(&spec)?;
            for r in &rows {
                if !(r.achievable <= r.converse && r.converse <= r.trivial) {
                    return Err(SoccError::ConstraintViolation(format!(
                        "bounds out of order at K_d={}, beta={}: {} / {} / {}",
                        r.digital_users, r.beta, r.achievable, r.converse, r.trivial
                    )));
                }
            }
            write(&out, &bounds_csv(&spec.sweep, &rows))
        }
        Command::Histogram { config, out } => {
            let spec: HistogramSpec = read_spec(&config)?;
            let h = run_amplitude_histogram(&spec)?;
            eprintln!(
                "{} codewords: max ratio {:.4} (bound {:.4}), {:.2}% at most 1.65, energy deviation {:.1e}",
                h.ratios.len(),
                h.max_ratio(),
                h.bound,
                100.0 * h.fraction_at_most(1.65),
                h.max_energy_deviation
            );
            if h.max_ratio() > h.bound * (1.0 + 1e-12) || h.max_energy_deviation > 1e-9 {
                return Err(SoccError::ConstraintViolation("wrapped codeword outside its bounds".into()));
            }
            write(&out, &h.to_csv())
        }
        Command::Planemap { n, out } => {
            let u = build_planemap(n)?;
            let r = u.report();
            println!("n = {n}");
            println!("orthonormality residual  {:.3e}", r.orthonormality_residual);
            println!("max |column sum|         {:.3e}", r.max_abs_column_sum);
            println!("max row abs sum          {:.6}", r.max_row_abs_sum);
            println!("induction bound          {:.6}", r.induction_bound);
            if let Some(path) = out {
                write(&path, &u.to_csv())?;
            }
            if !r.within(PLANEMAP_TOL) {
                return Err(SoccError::ConstraintViolation(format!("U_{n} fails its invariants")));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
