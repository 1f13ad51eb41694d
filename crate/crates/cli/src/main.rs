use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use totalpos::lcp::DEFAULT_CAP;
use totalpos::Class;
use totalpos_cli::commands::{self, Kind, Method, EXIT_INPUT};
use totalpos_cli::report::Report;

#[derive(Parser, Debug)]
#[command(name = "totalpos", version, about = "Exact total positivity checks")]
struct Cli {
    /// Seed for generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest LCP size solved by support enumeration.
    #[arg(long, global = true, env = "TOTALPOS_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Emit the JSON report (`--json false` prints a short summary instead).
    #[arg(long, global = true, default_value_t = true, num_args = 0..=1,
          default_missing_value = "true", action = clap::ArgAction::Set)]
    json: bool,
    /// Print nothing; the exit code carries the verdict.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check TP_k or TN_k of a matrix file.
    Check {
        path: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = ClassArg::Tp)]
        class: ClassArg,
        /// Order; defaults to min(m, n).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Linear complementarity problems.
    Lcp {
        #[command(subcommand)]
        command: LcpCommand,
    },
    /// Write a generated matrix.
    Generate {
        #[arg(value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every method and report disagreements.
    Compare {
        path: PathBuf,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Pólya frequency window check of a sequence file.
    Pf {
        path: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_negative_numbers = true)]
        l_min: i64,
        #[arg(long, allow_negative_numbers = true)]
        l_max: i64,
    },
}

#[derive(Subcommand, Debug)]
enum LcpCommand {
    /// Enumerate the full solution set. Without `--q`, the matrix file holds
    /// one extra line with `q`.
    Solve {
        path: PathBuf,
        #[arg(long)]
        q: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Minors,
    Contiguous,
    Snr,
    Vd,
    Lcp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClassArg {
    Tp,
    Tn,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Karlin,
    Cauchy,
}

fn run(cli: &Cli) -> commands::CmdResult {
    match &cli.command {
        Command::Check {
            path,
            method,
            class,
            k,
        } => {
            let method = match method {
                MethodArg::Minors => Method::Minors,
                MethodArg::Contiguous => Method::Contiguous,
                MethodArg::Snr => Method::Snr,
                MethodArg::Vd => Method::Vd,
                MethodArg::Lcp => Method::Lcp,
            };
            let class = match class {
                ClassArg::Tp => Class::Tp,
                ClassArg::Tn => Class::Tn,
            };
            commands::check(path, method, class, *k, cli.cap)
        }
        Command::Lcp {
            command: LcpCommand::Solve { path, q },
        } => commands::lcp_solve(path, q.as_ref(), cli.cap),
        Command::Generate { kind, n, out } => {
            let kind = match kind {
                KindArg::Karlin => Kind::Karlin,
                KindArg::Cauchy => Kind::Cauchy,
            };
            commands::generate(kind, *n, cli.seed, out.as_ref())
        }
        Command::Compare { path, k_max } => commands::compare(path, *k_max, cli.cap),
        Command::Pf {
            path,
            k,
            l_min,
            l_max,
        } => commands::pf(path, *k, *l_min, *l_max, cli.cap),
    }
}

fn summary(report: &Report) -> String {
    let mut out = format!("{} ({})", report.command, report.method);
    if let Some(v) = &report.verdict {
        let class = match report.class {
            Some(Class::Tn) => "TN",
            _ => "TP",
        };
        out += &format!(
            ": {}_{} {}",
            class,
            v.order,
            if v.holds { "holds" } else { "fails" }
        );
        if let Some(label) = &report.label {
            out += &format!(" [{label}]");
        }
        if let Some(c) = &v.certificate {
            out += &format!(
                "\ncertificate: {}",
                serde_json::to_string(c).unwrap_or_default()
            );
        }
    }
    if let Some(l) = &report.lcp {
        out += &format!(": {:?}, {} point solution(s)", l.status, l.solutions.len());
        for s in &l.solutions {
            out += &format!("\n  ({})", s.join(", "));
        }
        for s in &l.infinite_supports {
            out += &format!("\n  infinite family on support {s:?}");
        }
    }
    if let Some(c) = &report.comparison {
        out += if c.agreement {
            ": all methods agree"
        } else {
            ": DISAGREEMENT"
        };
        for d in &c.disagreements {
            out += &format!("\n  {d}");
        }
    }
    if let Some(g) = &report.generated {
        out += &format!(": {} {}x{} verified {}", g.kind, g.n, g.n, g.verified);
        if let Some(p) = &g.path {
            out += &format!(" -> {p}");
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok((mut report, code)) => {
            report.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            if !cli.quiet {
                if cli.json {
                    match serde_json::to_string_pretty(&report) {
                        Ok(s) => println!("{s}"),
                        Err(e) => {
                            eprintln!("error: {e}");
                            return ExitCode::from(EXIT_INPUT as u8);
                        }
                    }
                } else {
                    println!("{}", summary(&report));
                }
            }
            ExitCode::from(code as u8)
        }
        Err(message) => {
            if !cli.quiet {
                eprintln!("error: {message}");
            }
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
