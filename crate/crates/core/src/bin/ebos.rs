use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ebos::bench::{self, BenchConfig, BenchMode, OutputFormat};
use ebos::flops::{flop_report, table1_csv, table1_report, TABLE1_EPS, TABLE1_Q};
use ebos::io::{read_matrix, write_matrix};
use ebos::{
    solve, ColPartition, Error, Method, PinvOptions, RowPartition,
};

#[derive(Parser)]
#[command(name = "ebos", version, about = "Block-wise solver for min ‖A - BXC‖_F")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Y CC* = AC* only.
    Y,
    /// Complete solve for X.
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Ebos,
    Direct,
    Independent,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Ebos => Method::Ebos,
            MethodArg::Direct => Method::Direct,
            MethodArg::Independent => Method::Independent,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Time the block method against full pseudo-inverses on a random instance.
    Bench {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        dh: usize,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "y")]
        mode: ModeArg,
        /// Column blocks of B for `--mode full` (defaults to q blocks of dh).
        #[arg(long)]
        gpart: Option<ColPartition>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Solve min ‖A - BXC‖_F for matrices stored as text files.
    Solve {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        c: PathBuf,
        /// Column blocks of B, e.g. "2,4".
        #[arg(long)]
        gpart: ColPartition,
        /// Row blocks of C, e.g. "2,2,3".
        #[arg(long)]
        hpart: RowPartition,
        #[arg(long, value_enum, default_value = "ebos")]
        method: MethodArg,
        #[arg(long)]
        out: PathBuf,
        /// Absolute singular-value cutoff for every pseudo-inverse.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print the analytic operation counts.
    Flops {
        #[arg(long, required_unless_present = "table1")]
        m: Option<u64>,
        #[arg(long, required_unless_present = "table1")]
        n: Option<u64>,
        #[arg(long, required_unless_present = "table1")]
        h: Option<u64>,
        #[arg(long, required_unless_present = "table1")]
        q: Option<u64>,
        /// Leading-order coefficients on the standard (eps, q) grid.
        #[arg(long)]
        table1: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Check both methods agree on a sweep of random instances.
    Verify {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        dh: usize,
        /// Number of instances.
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> ebos::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn run(cli: Cli) -> ebos::Result<()> {
    match cli.command {
        Command::Bench {
            m,
            n,
            q,
            dh,
            trials,
            seed,
            mode,
            gpart,
            out,
            format,
        } => {
            let cfg = BenchConfig {
                m,
                n,
                q,
                dh,
                trials,
                seed,
                mode: match mode {
                    ModeArg::Y => BenchMode::YEquation,
                    ModeArg::Full => BenchMode::FullSolve,
                },
                output_format: match format {
                    FormatArg::Csv => OutputFormat::Csv,
                    FormatArg::Json => OutputFormat::Json,
                },
            };
            cfg.validate()?;
            let record = match cfg.mode {
                BenchMode::FullSolve => {
                    let cp = match gpart {
                        Some(cp) => cp,
                        None => ColPartition::uniform(q, dh)?,
                    };
                    bench::bench_full(&cfg, &cp, seed.wrapping_add(1))?
                }
                _ => bench::bench_y_equation(&cfg)?,
            };
            let text = match cfg.output_format {
                OutputFormat::Csv => bench::records_csv(std::slice::from_ref(&record)),
                OutputFormat::Json => json(&record),
            };
            emit(out.as_ref(), &text)
        }
        Command::Solve {
            a,
            b,
            c,
            gpart,
            hpart,
            method,
            out,
            tol,
        } => {
            let opts = match tol {
                Some(t) => PinvOptions::with_tolerance(t)?,
                None => PinvOptions::automatic(),
            };
            let (a, b, c) = (read_matrix(&a)?, read_matrix(&b)?, read_matrix(&c)?);
            let result = solve(method.into(), &a, &b, &c, &gpart, &hpart, &opts)?;
            write_matrix(&out, &result.x_plus)?;
            println!(
                "method={} residual={:e} x_norm={:e}",
                result.method,
                result.residual,
                ebos::frobenius_norm(&result.x_plus)
            );
            Ok(())
        }
        Command::Flops {
            m,
            n,
            h,
            q,
            table1,
            format,
        } => {
            if table1 {
                let rows = table1_report(&TABLE1_EPS, &TABLE1_Q)?;
                let text = match format {
                    FormatArg::Csv => table1_csv(&rows),
                    FormatArg::Json => json(&rows),
                };
                print!("{text}");
                return Ok(());
            }
            let (m, n, h, q) = (m.unwrap(), n.unwrap(), h.unwrap(), q.unwrap());
            let r = flop_report(m, n, h, q)?;
            match format {
                FormatArg::Csv => {
                    println!("m,n,h,q,N1,N2,N3,N,F,N/F");
                    println!(
                        "{m},{n},{h},{q},{:e},{:e},{:e},{:e},{:e},{:.4}",
                        r.n1, r.n2, r.n3, r.n_total, r.f_direct, r.ratio
                    );
                }
                FormatArg::Json => print!("{}", json(&r)),
            }
            Ok(())
        }
        Command::Verify {
            m,
            n,
            q,
            dh,
            trials,
            seed,
        } => {
            let cfg = BenchConfig {
                trials,
                seed,
                mode: BenchMode::Verify,
                ..BenchConfig::new(m, n, q, dh)
            };
            let summary = bench::verify(&cfg)?;
            print!("{}", json(&summary));
            if !summary.pass {
                eprintln!("error: methods disagree beyond tolerance");
                std::process::exit(3);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
