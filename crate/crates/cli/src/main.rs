use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use topos_core::{load_problem, run_command, Closure, Command, Error, Format, Mode, Options};

#[derive(Parser)]
#[command(
    name = "topos",
    version,
    about = "Topos quantum theory on finite-dimensional Hilbert spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Problem file (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Context label (e.g. `b0[1|2|34]`) or numeric id.
    #[arg(long, global = true)]
    context: Option<String>,

    /// Named state from the problem file.
    #[arg(long, global = true)]
    state: Option<String>,

    /// Named proposition from the problem file.
    #[arg(long, global = true)]
    prop: Option<String>,

    /// Named observable from the problem file.
    #[arg(long, global = true)]
    observable: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Outer)]
    mode: ModeArg,

    /// Node budget for the global-section search.
    #[arg(long, global = true, default_value_t = topos_core::valuation::DEFAULT_SEARCH_BUDGET)]
    budget: u64,

    /// How seed contexts are closed into a poset.
    #[arg(long, global = true, value_enum, default_value_t = ClosureArg::Generated)]
    closure: ClosureArg,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// List the contexts of the poset.
    Contexts,
    /// Gelfand spectra and restriction maps.
    Spectrum,
    /// Daseinise a proposition (--prop) or an observable (--observable, --mode).
    Daseinize,
    /// Pseudo-state of a named state (--state).
    PseudoState,
    /// Truth value of a proposition in a state (--prop, --state).
    Truth,
    /// Interval values of an observable at every character of a context.
    Value,
    /// Check the Heyting laws on the sieves of each context.
    HeytingCheck,
    /// Search for global sections of the spectral presheaf.
    Sections,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Outer,
    Inner,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClosureArg {
    Generated,
    Complete,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Contexts => Command::Contexts,
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Daseinize => Command::Daseinize,
            Cmd::PseudoState => Command::PseudoState,
            Cmd::Truth => Command::Truth,
            Cmd::Value => Command::Value,
            Cmd::HeytingCheck => Command::HeytingCheck,
            Cmd::Sections => Command::Sections,
        }
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}\n");
    eprintln!("{}", Cli::command().render_usage());
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(input) = &cli.input else {
        return usage_error("--input <path> is required");
    };
    let problem = match load_problem(input) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let options = Options {
        context: cli.context.clone(),
        state: cli.state.clone(),
        prop: cli.prop.clone(),
        observable: cli.observable.clone(),
        mode: match cli.mode {
            ModeArg::Outer => Mode::Outer,
            ModeArg::Inner => Mode::Inner,
        },
        budget: cli.budget,
        closure: match cli.closure {
            ClosureArg::Generated => Closure::Generated,
            ClosureArg::Complete => Closure::Complete,
        },
    };
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Table => Format::Table,
    };
    match run_command(cli.command.into(), &problem, &options) {
        Ok(report) => {
            print!("{}", report.render(format));
            ExitCode::SUCCESS
        }
        Err(Error::Usage(msg)) => usage_error(&msg),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
