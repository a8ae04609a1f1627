//! Command-line interface: run computations and verification over a
//! workspace of dg categories, functors, and bimodules.

use clap::{Parser, Subcommand};
use hochcat::cli::{
    default_workspace, parse_workspace, run_binf_axioms, run_gerstenhaber, run_hh, run_lax_c,
    run_span, run_tasks, run_validate, run_verify, Report, Workspace,
};

#[derive(Parser)]
#[command(
    name = "hochcat",
    about = "Exact computations with Hochschild cochain complexes of dg categories"
)]
struct Cli {
    /// Workspace file (JSON); the bundled corpus when omitted
    #[arg(long, global = true)]
    input: Option<std::path::PathBuf>,

    /// Weight truncation for realized complexes
    #[arg(long, global = true, default_value_t = 4)]
    truncation: usize,

    /// Degree window "lo:hi" for cohomology commands
    #[arg(long, global = true)]
    window: Option<String>,

    /// Ground field: Q or Fp:<p> (workspace files carry their own field)
    #[arg(long, global = true, default_value = "Q")]
    field: String,

    /// Seed for all randomized checks
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,

    /// Output format: text or json
    #[arg(long, global = true, default_value = "text")]
    format: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate the workspace
    Validate,
    /// Hochschild cohomology dimensions of a category
    Hh {
        cat: String,
        #[arg(long, default_value_t = 2)]
        max_degree: i64,
    },
    /// Gerstenhaber structure on cohomology with axiom report
    Gerstenhaber { cat: String },
    /// A-infinity / B-infinity axiom checks for the brace structure
    BinfAxioms {
        cat: String,
        #[arg(long, default_value_t = 4)]
        stasheff: usize,
        #[arg(long, default_value_t = 2)]
        indices: usize,
    },
    /// Verify a lemma by id, or "all"
    Verify { lemma: String },
    /// Randomized span-bicategory checks: compose | suite | h-colax
    Span { expr: String },
    /// Lax functor data: on-object | on-one-cell | on-two-cell |
    /// constraint-c2 | constraint-c0
    LaxC { mode: String, args: Vec<String> },
    /// Run the tasks listed in the workspace file
    Tasks,
    /// List all lemma ids
    Lemmas,
}

fn load(input: &Option<std::path::PathBuf>) -> Result<Workspace, hochcat::Error> {
    match input {
        None => Ok(default_workspace()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| hochcat::Error::ParseError {
                at: path.display().to_string(),
                msg: e.to_string(),
            })?;
            parse_workspace(&text)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let json = cli.format == "json";
    let mut report = Report::new(cli.seed);
    let outcome = (|| -> Result<(), hochcat::Error> {
        match &cli.command {
            Command::Lemmas => {
                for id in hochcat::verify::lemma_ids() {
                    report.push(&format!("lemma {id}"), true, Vec::new());
                }
                Ok(())
            }
            Command::Validate => {
                let ws = load(&cli.input)?;
                report.tasks.push(run_validate(&ws));
                Ok(())
            }
            Command::Hh { cat, max_degree } => {
                let ws = load(&cli.input)?;
                let t = run_hh(&ws, cat, *max_degree, cli.truncation.max(5))?;
                report.pass &= t.pass;
                report.tasks.push(t);
                Ok(())
            }
            Command::Gerstenhaber { cat } => {
                let ws = load(&cli.input)?;
                let t = run_gerstenhaber(&ws, cat, cli.seed)?;
                report.pass &= t.pass;
                report.tasks.push(t);
                Ok(())
            }
            Command::BinfAxioms {
                cat,
                stasheff,
                indices,
            } => {
                let ws = load(&cli.input)?;
                let t = run_binf_axioms(&ws, cat, *stasheff, *indices)?;
                report.pass &= t.pass;
                report.tasks.push(t);
                Ok(())
            }
            Command::Verify { lemma } => run_verify(lemma, cli.seed, &mut report),
            Command::Span { expr } => {
                let t = run_span(expr, cli.seed)?;
                report.pass &= t.pass;
                report.tasks.push(t);
                Ok(())
            }
            Command::LaxC { mode, args } => {
                let ws = load(&cli.input)?;
                let t = run_lax_c(&ws, mode, args, cli.seed)?;
                report.pass &= t.pass;
                report.tasks.push(t);
                Ok(())
            }
            Command::Tasks => {
                let ws = load(&cli.input)?;
                run_tasks(&ws, cli.seed, &mut report)
            }
        }
    })();
    match outcome {
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
        Ok(()) => {
            print!("{}", report.render(json));
            std::process::exit(if report.pass { 0 } else { 1 });
        }
    }
}
