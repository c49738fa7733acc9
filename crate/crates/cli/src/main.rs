//! `effects-lab`: command-line front end over the library's reports.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use effects_lab::corpus::Corpus;
use effects_lab::monads::laws::LawConfig;
use effects_lab::suites;
use effects_lab::{Monad, Report};

#[derive(Parser)]
#[command(name = "effects-lab", version, about = "Checks on finite commutative monads and their Kleisli categories")]
struct Cli {
    /// Corpus file; the bundled corpus when omitted.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    M1m2,
    Codiscrete,
    Definetti,
    Namegen,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Idempotence,
}

#[derive(Subcommand)]
enum Command {
    /// Classify corpus kernels (all of them when none are named).
    Classify { kernels: Vec<String> },
    /// Compute DX, θ and e for a corpus space.
    Sobrify {
        #[arg(long)]
        space: String,
        #[arg(long, value_parser = parse_monad)]
        monad: Monad,
        #[arg(long)]
        check: Option<Check>,
        /// Sampled pairs for the measure monads' injectivity check.
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare two corpus outers by observation, or with `--monad` and no
    /// outers, test seeded random pairs.
    Equiv {
        outers: Vec<String>,
        #[arg(long, value_parser = parse_monad)]
        monad: Option<Monad>,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
    },
    /// Compare two corpus programs by their testing contexts.
    EquivProg {
        p: String,
        q: String,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
    },
    /// Classify the kernel a corpus program denotes.
    ClassifyProg { program: String },
    /// Run the law suites over the corpus.
    Laws {
        #[arg(long, value_parser = parse_monad)]
        monad: Option<Monad>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Built-in demonstrations.
    Demo {
        name: Demo,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long, default_value_t = 5)]
        stage_bound: usize,
    },
    /// Name-generation checks on the corpus staged objects.
    Namegen {
        objects: Vec<String>,
        #[arg(long, default_value_t = 5)]
        stage_bound: usize,
    },
}

fn parse_monad(s: &str) -> Result<Monad, String> {
    Monad::parse(s).ok_or_else(|| format!("unknown monad `{s}`"))
}

fn run(cli: &Cli) -> Result<Report, String> {
    let corpus = match &cli.corpus {
        Some(p) => Corpus::load(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => Corpus::shipped(),
    };
    let c = &corpus;
    let r = match &cli.command {
        Command::Classify { kernels } => suites::classify_report(c, kernels),
        Command::Sobrify { space, monad, check, pairs, seed } => {
            let x = c.space(space).map_err(|e| e.to_string())?;
            suites::sobrify_report(*monad, x, *check == Some(Check::Idempotence), *pairs, *seed)
        }
        Command::Equiv { outers, monad, nmax, seed, pairs } => match (outers.as_slice(), monad) {
            ([a, b], _) => suites::equiv_report(c, a, b, *nmax),
            ([], Some(m)) => suites::equiv_sampled_report(c, *m, *pairs, *seed),
            _ => return Err("equiv takes two outer names, or `--monad` alone".into()),
        },
        Command::EquivProg { p, q, nmax } => suites::equiv_prog_report(c, p, q, *nmax),
        Command::ClassifyProg { program } => suites::classify_prog_report(c, program),
        Command::Laws { monad, seed } => {
            let monads = monad.map_or(Monad::ALL.to_vec(), |m| vec![m]);
            suites::laws_report(c, &monads, &LawConfig { seed: *seed, ..LawConfig::default() })
        }
        Command::Demo { name, nmax, stage_bound } => match name {
            Demo::M1m2 => suites::demo_m1m2(*nmax),
            Demo::Codiscrete => suites::demo_codiscrete(c),
            Demo::Definetti => suites::demo_definetti(c, *nmax),
            Demo::Namegen => suites::demo_namegen(*stage_bound),
        },
        Command::Namegen { objects, stage_bound } => suites::namegen_report(c, *stage_bound, objects),
    };
    r.map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let rep = match run(&cli) {
        Ok(rep) => rep,
        Err(e) => {
            eprintln!("effects-lab: {e}");
            return ExitCode::from(2);
        }
    };
    match cli.format {
        Format::Text => print!("{}", rep.to_text()),
        Format::Json => println!("{}", rep.to_json()),
    }
    match rep.first_failure() {
        None => ExitCode::SUCCESS,
        Some(r) => {
            eprintln!("effects-lab: check failed: {}", r.check);
            ExitCode::from(1)
        }
    }
}
