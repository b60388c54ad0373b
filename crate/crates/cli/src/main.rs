use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use permpoly::digits::Template;
use permpoly::hermite::{Method, SupportSystem, DEFAULT_BUDGET};
use permpoly_cli::commands::{self, CnArgs, MethodChoice, SweepArgs};
use permpoly_cli::{overall, Record, Status};

/// Exhaustive and symbolic checks for the polynomials
/// f(X) = X^(q-2) + X^(q^2-2) + ... + X^(q^a-2) over F_(q^e).
///
/// Every command prints one JSON record per line. Exit codes: 0 when all
/// records agree, 1 on usage errors, 2 on any mismatch.
#[derive(Parser)]
#[command(name = "permpoly", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Also write the report stream to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report runtime_ms as 0 so reports are byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Worker threads for field enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compare brute-force permutation verdicts with the predicted answer.
    Sweep {
        #[arg(long, default_value_t = 6561)]
        max_card: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5, 7])]
        primes: Vec<u64>,
        /// Skip prime powers above this.
        #[arg(long)]
        max_q: Option<u64>,
        /// Allow p = 2.
        #[arg(long)]
        include_even: bool,
        /// Also evaluate the kernel of X + X^q + ... + X^(q^(a-1)).
        #[arg(long)]
        kernel: bool,
    },
    /// Compute the Hermite coefficient C(N) for one case.
    Cn {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        a: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Largest field the enumeration route may use.
        #[arg(long, default_value_t = 1 << 20)]
        max_card: u64,
        /// Accept a with gcd(a, pe) > 1.
        #[arg(long)]
        ignore_gcd: bool,
    },
    /// Recompute the free-parameter values, their factorizations and the
    /// prime powers left to fixed rows.
    Tables {
        #[arg(value_enum, default_value_t = TableArg::All)]
        which: TableArg,
    },
    /// Point-count certificate for 2 <= a <= e/4.
    Hasse {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        a: u32,
        /// Confirm by exhaustion when q^e is at most this.
        #[arg(long, default_value_t = 100_000)]
        max_card: u64,
    },
    /// Solve an exponent-split system both from its known list and by search.
    Lemma {
        #[arg(value_enum)]
        system: SystemArg,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        e: u32,
        /// The k in q^k - 1 for power-minus-one.
        #[arg(long)]
        power: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Check the window-product coefficient routine against full expansion
    /// on seeded random instances.
    Windows {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
    },
    /// Pointwise identities: the shifted-sum identity and the reduction of a
    /// mod pe.
    Identity {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        e: u32,
        #[arg(long, default_value_t = 4)]
        max_a: i64,
        #[arg(long, default_value_t = 1 << 20)]
        max_card: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Brute,
    Multinomial,
    BorrowSet,
    ClosedForm,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    ThreeTerm,
    TwoTerm,
    OneTerm,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
#[allow(clippy::enum_variant_names)]
enum SystemArg {
    SquareMinusOne,
    QMinusOne,
    PowerMinusOne,
}

fn run(cmd: Cmd) -> permpoly::Result<Vec<Record>> {
    Ok(match cmd {
        Cmd::Sweep {
            max_card,
            primes,
            max_q,
            include_even,
            kernel,
        } => commands::sweep(&SweepArgs {
            max_card,
            primes,
            max_q,
            include_even,
            kernel,
        })?,
        Cmd::Cn {
            p,
            k,
            e,
            a,
            method,
            budget,
            max_card,
            ignore_gcd,
        } => {
            let method = match method {
                MethodArg::Brute => MethodChoice::One(Method::Brute),
                MethodArg::Multinomial => MethodChoice::One(Method::Multinomial),
                MethodArg::BorrowSet => MethodChoice::One(Method::BorrowSet),
                MethodArg::ClosedForm => MethodChoice::One(Method::ClosedForm),
                MethodArg::All => MethodChoice::All,
            };
            vec![commands::cn(&CnArgs {
                p,
                k,
                e,
                a,
                method,
                budget,
                max_card,
                ignore_gcd,
            })?]
        }
        Cmd::Tables { which } => {
            let templates = match which {
                TableArg::ThreeTerm => vec![Template::ThreeTerm],
                TableArg::TwoTerm => vec![Template::TwoTerm],
                TableArg::OneTerm => vec![Template::OneTerm],
                TableArg::All => vec![Template::ThreeTerm, Template::TwoTerm, Template::OneTerm],
            };
            templates.into_iter().map(commands::tables).collect()
        }
        Cmd::Hasse {
            p,
            k,
            e,
            a,
            max_card,
        } => vec![commands::hasse(p, k, e, a, max_card)?],
        Cmd::Lemma {
            system,
            p,
            k,
            e,
            power,
            budget,
        } => {
            let system = match (system, power) {
                (SystemArg::SquareMinusOne, _) => SupportSystem::SquareMinusOne,
                (SystemArg::QMinusOne, _) => SupportSystem::QMinusOne,
                (SystemArg::PowerMinusOne, Some(k)) => SupportSystem::PowerMinusOne { k },
                (SystemArg::PowerMinusOne, None) => {
                    return Err(permpoly::Error::Precondition(
                        "power-minus-one needs --power".into(),
                    ))
                }
            };
            vec![commands::lemma(system, p, k, e, budget)?]
        }
        Cmd::Windows { seed, count } => vec![commands::windows(seed, count)?],
        Cmd::Identity {
            p,
            k,
            e,
            max_a,
            max_card,
        } => commands::identity(p, k, e, max_a, max_card)?,
    })
}

fn emit(records: &[Record], out: Option<&PathBuf>) -> io::Result<()> {
    let mut text = String::new();
    for r in records {
        text.push_str(&r.to_line());
        text.push('\n');
    }
    if let Some(path) = out {
        let mut f = BufWriter::new(File::create(path)?);
        f.write_all(text.as_bytes())?;
        f.flush()?;
    }
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    lock.write_all(text.as_bytes())?;
    lock.flush()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let usage = err.use_stderr();
            let _ = err.print();
            return if usage {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {err}");
            return ExitCode::from(1);
        }
    }
    let mut records = match run(cli.cmd) {
        Ok(r) => r,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(1);
        }
    };
    if cli.no_timing {
        for r in &mut records {
            r.runtime_ms = 0;
        }
    }
    if let Err(err) = emit(&records, cli.out.as_ref()) {
        eprintln!("error: {err}");
        return ExitCode::from(1);
    }
    match overall(&records) {
        Status::Mismatch => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    }
}
