use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "filtergames", version, about = "Filter games on ultimately periodic sets of naturals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play one side from standard input against a machine strategy.
    Play(PlayArgs),
    /// Run two strategies against each other and certify the outcome.
    Simulate(SimulateArgs),
    /// Transform strategies and play the result.
    Transform(TransformArgs),
    /// Check a witness property of a filter up to a bound.
    VerifyWitness(WitnessArgs),
    /// Check tree labels and search bounded branches.
    Tree(TreeArgs),
    /// Classify a set, or compare set operations against a brute-force oracle.
    OracleCheck(OracleArgs),
    /// Re-certify a saved transcript and replay it from its header.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Standard,
    G1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    /// `<mover>,<move>,<payoff>` with mover fr|allinf|f|fplus, move elem|block,
    /// payoff f|fplus|fcomp|fstar.
    #[arg(long)]
    pub game: Option<String>,
    #[arg(long, value_enum, default_value_t = VariantArg::Standard)]
    pub variant: VariantArg,
    /// frechet | dyadic | frtensorfr | product:<inner> | finitegen:<set>,...
    #[arg(long, default_value = "frechet")]
    pub filter: String,
    #[arg(long, default_value_t = 20)]
    pub rounds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// Strategy spec for I.
    #[arg(long = "I")]
    pub i: String,
    /// Strategy spec for II.
    #[arg(long = "II")]
    pub ii: String,
    /// auto | forfeit | partition-selector | interval | fixed-set | sigma-diag | chain-subtract
    #[arg(long, default_value = "auto")]
    pub certifier: String,
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// The side entered on standard input.
    #[arg(long, value_enum, default_value_t = Side::II)]
    pub human: Side,
    /// Machine strategy when the human plays II.
    #[arg(long = "I")]
    pub i: Option<String>,
    /// Machine strategy when the human plays I.
    #[arg(long = "II")]
    pub ii: Option<String>,
    #[arg(long, default_value = "auto")]
    pub certifier: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformKind {
    /// Dual strategy for the other side of the dual game.
    Dual,
    /// Block-game strategies played in the integer game.
    ToG1,
    /// Integer-game strategies played in the block game.
    FromG1,
    /// Two plays against one threshold strategy whose replies cover each other's gaps.
    TwoBoard,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, value_enum)]
    pub kind: TransformKind,
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long = "I")]
    pub i: Option<String>,
    #[arg(long = "II")]
    pub ii: Option<String>,
    /// Compute images over the first M basis sets instead of exactly.
    #[arg(long)]
    pub approx: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Selector,
    Diag,
    Talagrand,
    Claim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Plain,
    Plus,
    UniversalF,
    UniversalFplus,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long, value_enum)]
    pub property: Property,
    #[arg(long, default_value = "frechet")]
    pub filter: String,
    #[arg(long, default_value_t = 50)]
    pub bound: u64,
    /// Set checked by `selector`.
    #[arg(long)]
    pub set: Option<String>,
    /// Block boundary rule for `selector`, e.g. `k^2`.
    #[arg(long)]
    pub partition: Option<String>,
    /// Set family for `diag`: columns | omega | list:<set>|... | tails:<set>.
    #[arg(long)]
    pub family: Option<String>,
    /// Ladder rules for the universal `diag` modes, `|`-separated.
    #[arg(long)]
    pub ladders: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
    pub mode: ModeArg,
    /// Number of basis sets sampled.
    #[arg(long, default_value_t = 10)]
    pub sample: u64,
    /// Ladder rule for `talagrand`, e.g. `2^k`.
    #[arg(long)]
    pub ladder: Option<String>,
    /// Integer-game strategy for II checked by `claim`.
    #[arg(long = "II")]
    pub ii: Option<String>,
    /// Comma-separated prefix of I's integers for `claim`.
    #[arg(long, default_value = "")]
    pub sigma: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchCertifierArg {
    None,
    Union,
    Gaps,
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    /// chain:<filter> | interval:pi=<rule> | const:<set> | fromstrategy:<II spec>
    #[arg(long)]
    pub tree: String,
    #[arg(long, default_value = "frechet")]
    pub filter: String,
    /// Game used to read `fromstrategy:` specs.
    #[arg(long, default_value = "fr,elem,fplus")]
    pub game: String,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    #[arg(long, default_value_t = 2)]
    pub width: usize,
    #[arg(long, value_enum, default_value_t = BranchCertifierArg::None)]
    pub certifier: BranchCertifierArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Set to classify; without it, random descriptor pairs are checked.
    #[arg(long)]
    pub set: Option<String>,
    #[arg(long, default_value = "frechet")]
    pub filter: String,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Transcript written by `simulate`, `play` or `transform`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Certifier to apply; defaults to the one recorded in the file.
    #[arg(long)]
    pub certifier: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
