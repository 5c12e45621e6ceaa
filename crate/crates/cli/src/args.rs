use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "dockeval", version, about = "Evaluate protein-ligand docking poses")]
pub struct Cli {
    /// TOML or JSON file of flag values; top-level keys apply to every
    /// subcommand that has the flag, `[subcommand]` tables to one subcommand.
    /// Flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for batch commands (default: logical cores; 1 runs
    /// sequentially).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = LogLevel::Info)]
    pub log_level: LogLevel,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LogLevel {
    Error,
    Warn,
    Info,
    Debug,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plausibility checks for one pose or every entry of a benchmark directory.
    Validate(ValidateArgs),
    /// Symmetry-corrected heavy-atom RMSD.
    Rmsd(RmsdArgs),
    /// RMSD + validity (optionally after relaxation) into a record CSV.
    Evaluate(EvaluateArgs),
    /// Restrained minimisation of protein-ligand complexes.
    Relax(RelaxArgs),
    /// Superpose structures onto a reference and transfer their ligands.
    Crossdock(CrossdockArgs),
    /// Maximum pocket TM-score of each entry against a corpus.
    PocketSim(PocketSimArgs),
    /// Build self- or cross-docking sets from a manifest.
    Curate(CurateArgs),
    /// Aggregate record CSVs into report artifacts.
    Report(ReportArgs),
}

#[derive(Debug, Args, Clone)]
pub struct ValidityFlags {
    /// Radius table CSV (`element,vdw,covalent`).
    #[arg(long, value_name = "CSV")]
    pub radii: Option<PathBuf>,
    /// Bond/angle bounds table CSV.
    #[arg(long, value_name = "CSV")]
    pub bounds: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_name = "SDF", conflicts_with = "dir", required_unless_present = "dir")]
    pub pred: Option<PathBuf>,
    #[arg(long = "ref", value_name = "SDF", conflicts_with = "dir")]
    pub reference: Option<PathBuf>,
    #[arg(long, value_name = "PDB", conflicts_with = "dir")]
    pub protein: Option<PathBuf>,
    /// Benchmark directory of `{entry}/protein.pdb`, `ligand_ref.sdf`, `ligand_pred.sdf`.
    #[arg(long, value_name = "DIR")]
    pub dir: Option<PathBuf>,
    /// Report JSON (single pose) or output directory (batch). Default: stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub validity: ValidityFlags,
}

#[derive(Debug, Args)]
pub struct RmsdArgs {
    #[arg(long, value_name = "SDF", conflicts_with = "dir", required_unless_present = "dir")]
    pub pred: Option<PathBuf>,
    #[arg(long = "ref", value_name = "SDF", conflicts_with = "dir", required_unless_present = "dir")]
    pub reference: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub dir: Option<PathBuf>,
    /// Pair atoms by file order instead of graph symmetry.
    #[arg(long)]
    pub naive: bool,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct RelaxFlags {
    /// Backbone restraint constant, kJ/mol/nm².
    #[arg(long, value_name = "K")]
    pub k_backbone: Option<f64>,
    #[arg(long, value_name = "K")]
    pub k_bond: Option<f64>,
    #[arg(long, value_name = "K")]
    pub k_rep: Option<f64>,
    /// nm.
    #[arg(long, value_name = "NM")]
    pub repulsion_margin: Option<f64>,
    /// kJ/mol/nm.
    #[arg(long, value_name = "G")]
    pub gradient_tolerance: Option<f64>,
    #[arg(long, value_name = "N")]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, value_name = "DIR")]
    pub dir: PathBuf,
    /// Record CSV; default stdout.
    #[arg(long, value_name = "CSV")]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "method")]
    pub method: String,
    #[arg(long)]
    pub run_id: Option<String>,
    /// Success criterion for the printed rate.
    #[arg(long, value_enum, default_value_t = CriterionArg::RmsdOnly)]
    pub criterion: CriterionArg,
    /// Relax each complex before scoring.
    #[arg(long)]
    pub relax: bool,
    /// CSV `entry_id,target_id`; entries not listed are their own target.
    #[arg(long, value_name = "CSV")]
    pub targets: Option<PathBuf>,
    /// Pocket corpus index CSV; adds pocket_similarity.
    #[arg(long, value_name = "CSV")]
    pub corpus: Option<PathBuf>,
    #[arg(long, value_name = "YYYY-MM-DD")]
    pub released_before: Option<String>,
    /// Å.
    #[arg(long, default_value_t = 10.0)]
    pub pocket_cutoff: f64,
    /// Å; success is strictly below.
    #[arg(long, default_value_t = 2.0)]
    pub success_threshold: f64,
    #[command(flatten)]
    pub validity: ValidityFlags,
    #[command(flatten)]
    pub relax_flags: RelaxFlags,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum CriterionArg {
    RmsdOnly,
    RmsdAndValid,
}

#[derive(Debug, Args)]
pub struct RelaxArgs {
    #[arg(long, value_name = "PDB", conflicts_with = "dir", required_unless_present = "dir")]
    pub protein: Option<PathBuf>,
    #[arg(long, value_name = "SDF", conflicts_with = "dir", required_unless_present = "dir")]
    pub ligand: Option<PathBuf>,
    /// Relax every entry's predicted pose.
    #[arg(long, value_name = "DIR")]
    pub dir: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
    #[arg(long, value_name = "CSV")]
    pub radii: Option<PathBuf>,
    #[command(flatten)]
    pub relax_flags: RelaxFlags,
}

#[derive(Debug, Args)]
pub struct CrossdockArgs {
    #[arg(long, value_name = "DIR")]
    pub dir: PathBuf,
    /// Entry whose structure and ligand define the frame.
    #[arg(long, value_name = "ENTRY")]
    pub reference: String,
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
    /// Å.
    #[arg(long, default_value_t = 2.0)]
    pub max_ca_rmsd: f64,
    /// Å.
    #[arg(long, default_value_t = 4.0)]
    pub max_ligand_displacement: f64,
}

#[derive(Debug, Args)]
pub struct PocketSimArgs {
    #[arg(long, value_name = "DIR")]
    pub dir: PathBuf,
    #[arg(long, value_name = "CSV")]
    pub corpus: PathBuf,
    #[arg(long, value_name = "YYYY-MM-DD")]
    pub released_before: Option<String>,
    /// Å.
    #[arg(long, default_value_t = 10.0)]
    pub cutoff: f64,
    #[arg(long, default_value_t = 0.70)]
    pub threshold: f64,
    #[arg(long, value_name = "CSV")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PipelineArg {
    SelfDock,
    CrossDock,
}

#[derive(Debug, Args)]
pub struct CurateArgs {
    /// JSON array or CSV of manifest entries.
    #[arg(long, value_name = "FILE")]
    pub manifest: PathBuf,
    #[arg(long, value_enum)]
    pub pipeline: PipelineArg,
    /// Structure root for cross-docking (`{pdb_id}/protein.pdb`,
    /// `{pdb_id}/{ccd_id}_ligand.sdf`, or the manifest's paths).
    #[arg(long, value_name = "DIR")]
    pub structures: Option<PathBuf>,
    /// TOML or JSON filter and clustering settings.
    #[arg(long, value_name = "FILE")]
    pub filters: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, value_name = "CSV", required = true, num_args = 1..)]
    pub records: Vec<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
    /// Split by pocket similarity; every record then needs one.
    #[arg(long)]
    pub stratify: bool,
    #[arg(long, default_value_t = 0.70)]
    pub similarity_threshold: f64,
    /// Å; success is strictly below.
    #[arg(long, default_value_t = 2.0)]
    pub success_threshold: f64,
}
