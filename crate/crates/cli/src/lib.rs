//! Command line front end: file formats, commands and the bundled corpus.

pub mod commands;
pub mod corpus;
pub mod io;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use supercompact::verdict::Caps;

use commands::{CommandError, CommandResult, Kind, Status};
use io::InputError;

pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "supercompact", version, about = "Finite sites, arches, sheaves and localic duality checks")]
pub struct Cli {
    /// Print the machine-readable report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Distinct normalized funnels explored per object.
    #[arg(long, global = true)]
    pub funnel_cap: Option<usize>,
    /// Representables allowed in one coproduct of the bounded compact category.
    #[arg(long, global = true, value_name = "K")]
    pub coproduct_bound: Option<usize>,
    /// Largest hom-set into one object searched for finite families.
    #[arg(long, global = true)]
    pub family_cap: Option<usize>,
    /// Candidates allowed in one enumeration.
    #[arg(long, global = true)]
    pub search_cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a document and run its load-time checks.
    Validate { file: PathBuf },
    /// Classify the underlying category of a category or site.
    Classify { file: PathBuf },
    /// Connected components of arches from A to B.
    ArchHoms { a: String, b: String, file: PathBuf },
    /// Morphisms between the sheafified representables of A and B.
    SheafHoms { a: String, b: String, file: PathBuf },
    /// The full subcategory of sheaves on the quotients of representables.
    SupercompactCategory {
        file: PathBuf,
        /// Quotients of coproducts of up to `--coproduct-bound` representables.
        #[arg(long)]
        compact: bool,
    },
    /// The quotient by local equality, with its pushed-forward topology.
    QuotientSite { file: PathBuf },
    /// Check a functor between sites; the target defaults to the source.
    MorphismCheck { functor: PathBuf, source: PathBuf, target: Option<PathBuf> },
    /// Distributivity, ideals and prime filters of a join semilattice.
    Spectrum { file: PathBuf },
    /// Recover a distributive join semilattice from its frame of ideals.
    StoneRoundtrip { file: PathBuf },
    /// Recover a poset from its frame of down-sets.
    AlexandroffRoundtrip { file: PathBuf },
    /// Print every poset or join semilattice up to isomorphism, one per line.
    Enumerate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        max_size: usize,
    },
    /// Check every expectation of the corpus.
    Corpus {
        /// Worker threads; the report does not depend on it.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Read entries from a directory instead of the bundled corpus.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

impl Cli {
    pub fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            funnel_cap: self.funnel_cap.unwrap_or(d.funnel_cap),
            family_cap: self.family_cap.unwrap_or(d.family_cap),
            coproduct_bound: self.coproduct_bound.unwrap_or(d.coproduct_bound),
            search_cap: self.search_cap.unwrap_or(d.search_cap),
        }
    }
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn read(path: &Path) -> Result<io::Document, InputError> {
    io::read_document(path)
}

fn dispatch(cli: &Cli) -> CommandResult {
    let caps = cli.caps();
    match &cli.command {
        Command::Validate { file } => commands::validate(&read(file)?),
        Command::Classify { file } => commands::classify_command(&read(file)?.into_category()?, &caps),
        Command::ArchHoms { a, b, file } => commands::arch_homs(&read(file)?.into_site()?, a, b, &caps),
        Command::SheafHoms { a, b, file } => commands::sheaf_homs(&read(file)?.into_site()?, a, b),
        Command::SupercompactCategory { file, compact } => {
            commands::supercompact_command(&read(file)?.into_site()?, *compact, &caps)
        }
        Command::QuotientSite { file } => commands::quotient_site(&read(file)?.into_site()?),
        Command::MorphismCheck { functor, source, target } => {
            let io::Document::Functor(f) = read(functor)? else {
                return Err(InputError::Usage(format!("{} is not a functor document", functor.display())).into());
            };
            let sa = read(source)?.into_site()?;
            let sb = match target {
                Some(t) => read(t)?.into_site()?,
                None => sa.clone(),
            };
            commands::morphism_check(&f, &sa, &sb)
        }
        Command::Spectrum { file } => commands::spectrum(&read(file)?.into_semilattice()?),
        Command::StoneRoundtrip { file } => commands::stone(&read(file)?.into_semilattice()?),
        Command::AlexandroffRoundtrip { file } => commands::alexandroff_command(&read(file)?.into_poset()?),
        Command::Enumerate { kind, max_size } => commands::enumerate(*kind, *max_size),
        Command::Corpus { parallel, dir } => {
            let entries = match dir {
                Some(d) => corpus::load_dir(d)?,
                None => corpus::bundled(),
            };
            let report = corpus::run(&entries, &caps, *parallel).map_err(InputError::Usage)?;
            Ok(commands::Outcome {
                text: report.text(),
                json: serde_json::to_value(&report).expect("report serializes"),
                status: report.status(),
            })
        }
    }
}

/// Runs one invocation with the given arguments (program name first).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Output { stdout: rendered, stderr: String::new(), code }
            } else {
                Output { stdout: String::new(), stderr: rendered, code }
            };
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            let stdout = if cli.json {
                let mut s = serde_json::to_string_pretty(&outcome.json).expect("reports serialize");
                s.push('\n');
                s
            } else {
                outcome.text
            };
            Output { stdout, stderr: String::new(), code: outcome.status.exit_code() }
        }
        Err(CommandError::Cap(msg)) => Output {
            stdout: String::new(),
            stderr: format!("inconclusive: {msg}\n"),
            code: Status::Inconclusive.exit_code(),
        },
        Err(CommandError::Input(e)) => {
            Output { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_INPUT_ERROR }
        }
    }
}
