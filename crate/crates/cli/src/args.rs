use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "irrcode",
    version,
    about = "Tandem-duplication-correcting codes from irreducible words"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SystemArgs {
    /// Alphabet size.
    #[arg(short = 'q', default_value_t = 3)]
    pub q: u16,
    /// Maximal duplication length (2 or 3).
    #[arg(short = 'k', default_value_t = 2)]
    pub k: usize,
}

#[derive(Debug, Clone, Args)]
pub struct IoArgs {
    /// Input file (standard input when omitted).
    #[arg(short = 'i', long = "input")]
    pub input: Option<PathBuf>,
    /// Output file (standard output when omitted).
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Finite-state encoder: one irreducible sequence per file.
    Fse,
    /// Duplication-correcting code: one codeword of length n per line.
    Code,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    Counts,
    Delta,
    Roots,
}

#[derive(Debug, Clone, Args)]
pub struct CodecArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    #[arg(long, value_enum, default_value_t = Mode::Fse)]
    pub mode: Mode,
    /// Codeword length (code mode).
    #[arg(short = 'n', long = "length")]
    pub n: Option<usize>,
    /// Rate gap used to choose the encoder parameters (fse mode).
    #[arg(short = 'e', long)]
    pub epsilon: Option<f64>,
    /// Message block length; requires --m.
    #[arg(long, requires = "m")]
    pub ell: Option<usize>,
    /// State length; requires --ell.
    #[arg(long, requires = "ell")]
    pub m: Option<usize>,
    /// Read and write sequences as A/C/G/T (q = 4).
    #[arg(long)]
    pub dna: bool,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of irreducible words of length n.
    Count {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(short = 'n', long = "length")]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Asymptotic rate, growth constant and optional encoder parameters, as JSON.
    Rate {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(short = 'e', long)]
        epsilon: Option<f64>,
    },
    /// Rank of an irreducible word among the words of its length.
    Rank {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(short = 'w', long = "word")]
        word: String,
        /// Expected word length, checked when given.
        #[arg(short = 'n', long = "length")]
        n: Option<usize>,
        #[arg(long)]
        dna: bool,
        #[arg(long)]
        json: bool,
    },
    /// Irreducible word of length n with the given rank.
    Unrank {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(short = 'n', long = "length")]
        n: usize,
        #[arg(short = 'j', long = "rank")]
        j: String,
        #[arg(long)]
        dna: bool,
        #[arg(long)]
        json: bool,
    },
    /// Encode a binary file into a sequence file.
    Encode(CodecArgs),
    /// Decode a sequence file back into the original bytes.
    Decode(CodecArgs),
    /// Apply random tandem duplications to every line of a sequence file.
    Channel {
        #[command(flatten)]
        sys: SystemArgs,
        /// Duplications per line.
        #[arg(short = 't', long = "duplications", default_value_t = 1)]
        t: usize,
        /// Line i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        dna: bool,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Cross-check the fast algorithms against brute force; prints a JSON report.
    Verify {
        #[arg(long, value_enum)]
        scope: Scope,
        #[arg(short = 'q', default_value_t = 3)]
        q: u16,
        /// Restrict to one duplication length; both 2 and 3 otherwise.
        #[arg(short = 'k')]
        k: Option<usize>,
        /// Largest word length (counts, roots).
        #[arg(short = 'n', long = "length")]
        n: Option<usize>,
        /// State length (delta scope).
        #[arg(long)]
        m: Option<usize>,
        /// Duplications explored per word (roots).
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Cap on words visited by the brute-force searches.
        #[arg(long)]
        budget: Option<u64>,
        /// Accepted for symmetry; the report is always JSON.
        #[arg(long)]
        json: bool,
    },
}
