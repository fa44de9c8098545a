//! `deldyn`: command-line front end for the deldyn library.
//!
//! Results go to stdout, progress and diagnostics to stderr. Exit codes:
//! 0 on success, 1 when a check finds a failure, 2 on bad input.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "deldyn", version, about = "Galois-equivariant Dynkin diagram combinatorics")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Special nodes, symplectic nodes and <alpha, omega> labels for every
    /// connected type with a special node, checked against the closed forms.
    Table {
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
    },
    /// Validity, flags, type, symplectic set, U-set and automorphism count
    /// of a diagram file.
    Classify { file: String },
    /// Special nodes of a connected type (1-based, Bourbaki order).
    Special { family: String, rank: usize },
    /// The opposition involution of a connected type (1-based).
    Oppinv {
        family: String,
        rank: usize,
        /// Also run the brute-force Weyl group oracle (rank <= 4).
        #[arg(long)]
        oracle: bool,
    },
    /// Isomorphisms between two diagrams, globally and at local groups.
    Isom {
        file1: String,
        file2: String,
        /// Index of a local group (cyclic subgroup of the joint group).
        #[arg(long, conflicts_with = "all_locals")]
        local: Option<usize>,
        /// Report witnesses at every local group.
        #[arg(long)]
        all_locals: bool,
    },
    /// Exhaustive local-global campaign. Counterexamples are dumped as
    /// instance files.
    VerifyLocalGlobal {
        #[arg(long, default_value_t = 24)]
        max_order: usize,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        #[arg(long, default_value_t = 3)]
        max_components: usize,
        /// Comma-separated families, e.g. `A,B,C,D`.
        #[arg(long, default_value = "A,B,C,D")]
        types: String,
        #[arg(long, env = "DELDYN_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Also probe pairs outside the hypothesis.
        #[arg(long)]
        explore: bool,
        /// Directory for counterexample dumps.
        #[arg(long, default_value = ".")]
        dump_dir: String,
    },
    /// Re-run the local-global check on a dumped instance file.
    Replay { file: String },
    /// Deligne's construction on a diagram file.
    Deligne {
        file: String,
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// Hyperadjoint chain of a reductive datum such as `D4+T1` or `A2:ad`.
    Hyperadjoint {
        spec: String,
        /// Dimension of the starting object; defaults to Lie dimension + 1.
        #[arg(long)]
        dim: Option<u64>,
    },
    /// Exhaustive Goursat check over pairs of small groups.
    Goursat {
        #[arg(long, default_value_t = 12)]
        max_order: usize,
        #[arg(long, env = "DELDYN_JOBS", default_value_t = 1)]
        jobs: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
