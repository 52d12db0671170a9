use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use khsq::complex::LadybugConvention;
use khsq::pd::parse_corpus;
use khsq_cli::{compute, mirror_diagnostic, render_table, selftest, st_summary, Fault, Options};
use rayon::prelude::*;

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTE: u8 = 2;
const EXIT_SELFTEST: u8 = 3;

#[derive(Parser)]
#[command(name = "khsq", version, about = "Khovanov homology, Steenrod squares and width-three homotopy types")]
struct Cli {
    /// Worker threads (defaults to KHSQ_THREADS, then to the number of cores).
    #[arg(long, global = true, env = "KHSQ_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute invariants of one link given by a PD code.
    Compute {
        #[arg(long)]
        pd: String,
        /// Name used in the report.
        #[arg(long, default_value = "link")]
        id: String,
        #[command(flatten)]
        flags: StageFlags,
    },
    /// Compute invariants for every `<link_id>\t<pd_code>` line of a file.
    Corpus {
        file: PathBuf,
        #[command(flatten)]
        flags: StageFlags,
    },
    /// Compare Sq ranks on a link with those on its mirror (diagnostic only).
    Mirror {
        #[arg(long)]
        pd: String,
    },
    /// Run internal consistency checks.
    Selftest {
        /// Largest cube dimension for the exhaustive sign and frame checks.
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Args, Clone)]
struct StageFlags {
    /// Emit JSON (one object per link).
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Emit a human-readable table (the default).
    #[arg(long)]
    table: bool,
    /// Compute Sq1, Sq2 and St.
    #[arg(long)]
    sq: bool,
    /// Compute homotopy types (implies --sq).
    #[arg(long)]
    homotopy: bool,
    /// Stop after Khovanov homology.
    #[arg(long, conflicts_with_all = ["sq", "homotopy"])]
    kh_only: bool,
    /// Check that Sq maps agree for boundary-matching seeds 0..K.
    #[arg(long, default_value_t = 1)]
    matching_seeds: u64,
    #[arg(long, value_enum, default_value_t = LadybugArg::Right)]
    ladybug: LadybugArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum LadybugArg {
    Right,
    Left,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    SignFlip,
}

impl StageFlags {
    fn options(&self) -> Options {
        // With no stage flag everything runs.
        let all = !self.sq && !self.homotopy && !self.kh_only;
        Options {
            sq: !self.kh_only && (all || self.sq || self.homotopy),
            homotopy: !self.kh_only && (all || self.homotopy),
            matching_seeds: self.matching_seeds.max(1),
            ladybug: match self.ladybug {
                LadybugArg::Right => LadybugConvention::Right,
                LadybugArg::Left => LadybugConvention::Left,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("khsq: cannot configure {n} threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match cli.command {
        Command::Compute { pd, id, flags } => match compute(&id, &pd, &flags.options()) {
            Ok(report) => {
                if flags.json {
                    println!("{}", report.to_json());
                } else {
                    print!("{}", render_table(&report));
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("khsq: {id}: {e}");
                ExitCode::from(EXIT_COMPUTE)
            }
        },
        Command::Corpus { file, flags } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("khsq: {}: {e}", file.display());
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            let opts = flags.options();
            let results: Vec<Result<khsq_cli::ComputationReport, String>> = parse_corpus(&text)
                .into_par_iter()
                .map(|rec| {
                    let rec = rec.map_err(|e| format!("corpus: {e}"))?;
                    compute(&rec.link_id, &rec.pd, &opts).map_err(|e| format!("line {} ({}): {e}", rec.line, rec.link_id))
                })
                .collect();
            let mut failed = false;
            let mut reports = Vec::new();
            for r in results {
                match r {
                    Ok(report) => {
                        if flags.json {
                            println!("{}", report.to_json());
                        } else {
                            print!("{}", render_table(&report));
                            println!();
                        }
                        reports.push(report);
                    }
                    Err(e) => {
                        failed = true;
                        if flags.json {
                            println!("{}", serde_json::json!({ "error": e }));
                        }
                        eprintln!("khsq: {e}");
                    }
                }
            }
            if !flags.json && opts.sq {
                print!("{}", st_summary(&reports));
            }
            if failed {
                ExitCode::from(EXIT_COMPUTE)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Mirror { pd } => match mirror_diagnostic(&pd) {
            Ok(lines) => {
                println!("op\t(i,j)\trank\tmirror rank at (-i-op,-j)");
                for l in &lines {
                    println!("Sq{}\t({},{})\t{}\t{}", l.op, l.i, l.j, l.rank, l.mirror_rank);
                }
                let agree = lines.iter().all(|l| l.rank == l.mirror_rank);
                println!("ranks {}", if agree { "agree" } else { "differ" });
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("khsq: {e}");
                ExitCode::from(EXIT_COMPUTE)
            }
        },
        Command::Selftest { n_max, inject_fault } => {
            let fault = inject_fault.map(|FaultArg::SignFlip| Fault::SignFlip);
            let results = selftest(n_max, fault);
            let mut ok = true;
            for r in &results {
                println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                ok &= r.passed;
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_SELFTEST)
            }
        }
    }
}
