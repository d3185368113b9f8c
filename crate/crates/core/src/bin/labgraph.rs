use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use labgraph::decompose::decompose;
use labgraph::hereditary::{hereditary_closure, minimal_sink_sets};
use labgraph::rep::{
    all_canonical_terms, build_rep, sample_terms, verify_homomorphism, verify_relations, HomomorphismFailure,
};
use labgraph::space::{closure, validate_space, ClosureMode, SetFamily, DEFAULT_CLOSURE_CAP};
use labgraph::term::{expand_to_sinks, multiply};
use labgraph::text::{format_element, parse_graph_file, parse_set_list, parse_term, GraphFile};
use labgraph::{AlgebraElement, Error, LabeledSpace, Verdict};

#[derive(Parser)]
#[command(
    name = "labgraph",
    version,
    about = "Labeled graph C*-algebras: axioms, closures, products and decompositions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report which labeled-space axioms hold.
    Validate {
        file: PathBuf,
        /// Also require a left-resolving, acyclic graph.
        #[arg(long)]
        strict: bool,
    },
    /// Print the closure of the listed sets, one set per line.
    Closure {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Normal)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
    /// Print the sinks and the minimal sink sets.
    Sinks { file: PathBuf },
    /// Hereditary closure of the seeds and the ideal hypothesis verdict.
    Ideal {
        file: PathBuf,
        /// Sets such as "{v};{x}" or "v; x".
        #[arg(long)]
        seeds: String,
    },
    /// Product of two elements.
    Mul { file: PathBuf, x: String, y: String },
    /// Rewrite an element over the minimal sink sets.
    Expand { file: PathBuf, expr: String },
    /// Matrix-algebra blocks of a finite acyclic space.
    Decompose { file: PathBuf },
    /// Build the representation and check every relation on it.
    Verify {
        file: PathBuf,
        /// Number of sampled terms; every ordered pair of them is checked.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        dump_matrices: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Accommodating,
    Normal,
}

enum Failure {
    /// Exit 1: the input parsed but a check or precondition failed.
    Semantic(String),
    /// Exit 2: the input did not parse.
    Parse(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => Failure::Parse(p.to_string()),
            other => Failure::Semantic(other.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn load(path: &Path) -> Result<GraphFile, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_graph_file(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_space(path: &Path) -> Result<LabeledSpace, Failure> {
    Ok(load(path)?.space(DEFAULT_CLOSURE_CAP)?)
}

fn term(space: &LabeledSpace, text: &str) -> Result<AlgebraElement, Failure> {
    parse_term(space, text).map_err(|e| Failure::Parse(format!("{text:?}: {e}")))
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { file, strict } => {
            let space = load_space(&file)?;
            let report = validate_space(&space);
            print!("{}", report.render(space.graph()));
            let labeled_space = report.accommodating.holds() && report.weakly_left_resolving.holds();
            Ok(if strict {
                report.all_hold()
            } else {
                labeled_space && report.normal
            })
        }
        Command::Closure { file, mode, cap } => {
            let parsed = load(&file)?;
            let mode = match mode {
                Mode::Accommodating => ClosureMode::Accommodating,
                Mode::Normal => ClosureMode::Normal,
            };
            let seeds = if parsed.sets.is_empty() {
                SetFamily::empty()
            } else {
                parsed.seeds()?
            };
            let family = closure(&parsed.graph, &seeds, mode, cap)?;
            for set in &family {
                println!("{}", parsed.graph.format_set(set));
            }
            Ok(true)
        }
        Command::Sinks { file } => {
            let space = load_space(&file)?;
            let g = space.graph();
            println!("sinks: {}", g.format_set(&g.sinks()));
            let minimal = minimal_sink_sets(&space)?;
            let names: Vec<String> = minimal.iter().map(|v| g.format_set(v)).collect();
            println!("minimal: {}", names.join(" "));
            Ok(true)
        }
        Command::Ideal { file, seeds } => {
            let space = load_space(&file)?;
            let g = space.graph();
            let sets = parse_set_list(g, &seeds)?;
            let h = hereditary_closure(&space, &SetFamily::new(sets)?)?;
            let members: Vec<String> = h.members().iter().map(|a| g.format_set(a)).collect();
            println!("hereditary: {}", members.join(" "));
            for w in h.warnings() {
                println!("warning: {}", w.describe(g));
            }
            match h.ideal_hypothesis() {
                Verdict::Holds => {
                    println!("ideal hypothesis: yes");
                    Ok(true)
                }
                Verdict::Fails(a) => {
                    println!(
                        "ideal hypothesis: no (source of {} meets a member but is not in H)",
                        g.symbol_name(a)
                    );
                    Ok(false)
                }
            }
        }
        Command::Mul { file, x, y } => {
            let space = load_space(&file)?;
            let product = multiply(&space, &term(&space, &x)?, &term(&space, &y)?)?;
            println!("{}", format_element(space.graph(), &product));
            Ok(true)
        }
        Command::Expand { file, expr } => {
            let space = load_space(&file)?;
            let expanded = expand_to_sinks(&space, &term(&space, &expr)?)?;
            println!("{}", format_element(space.graph(), &expanded));
            Ok(true)
        }
        Command::Decompose { file } => {
            let space = load_space(&file)?;
            print!("{}", decompose(&space)?.render(space.graph()));
            Ok(true)
        }
        Command::Verify {
            file,
            samples,
            seed,
            dump_matrices,
        } => {
            let space = load_space(&file)?;
            let g = space.graph();
            let dec = decompose(&space)?;
            let rep = build_rep(&space, &dec)?;
            println!("{}", dec.summary(g));
            println!("rep dimension: {}", rep.dimension());
            if let Some(path) = dump_matrices {
                std::fs::write(&path, rep.dump(g))
                    .map_err(|e| Failure::Semantic(format!("cannot write {}: {e}", path.display())))?;
            }
            let report = verify_relations(&space, &rep)?;
            print!("{}", report.render());

            let terms = all_canonical_terms(&space)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sample: Vec<AlgebraElement> = sample_terms(&terms, samples, &mut rng)
                .into_iter()
                .map(AlgebraElement::from)
                .collect();
            let homomorphism = verify_homomorphism(&space, &rep, &sample)?;
            match &homomorphism {
                Verdict::Holds => println!("homomorphism: pass ({} pairs)", sample.len() * sample.len()),
                Verdict::Fails(HomomorphismFailure::Product(i, j)) => println!(
                    "homomorphism: FAIL at product ({}) * ({})",
                    format_element(g, &sample[*i]),
                    format_element(g, &sample[*j])
                ),
                Verdict::Fails(HomomorphismFailure::Adjoint(i)) => {
                    println!("homomorphism: FAIL at adjoint of {}", format_element(g, &sample[*i]))
                }
            }
            Ok(report.all_pass() && homomorphism.holds())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Semantic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(2)
        }
    }
}
