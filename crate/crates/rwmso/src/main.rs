use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rwmso::bench::{self, BenchConfig};
use rwmso::format::{parse_graph, parse_tree_from_text, print_parse_tree};
use rwmso::report::RunReport;
use rwmso_core::bits::MAX_LABEL_WIDTH;
use rwmso_core::chartree::{dump, CharTreeStore};
use rwmso_core::games::{prepare_sentence, ModelChecker};
use rwmso_core::linemso::{solve_linemso, Direction, LinEmsoError, LinEmsoProblem};
use rwmso_core::rankdec::exact_rankwidth;
use rwmso_core::{catalog, evaluate, family_tree, parse_formula, Assignment, Family, Formula, ParseTree, Structure};
use serde_json::json;

const ORACLE_MAX_VERTICES: usize = 12;
const ORACLE_MAX_SET_QUANTIFIERS: usize = 2;
const DEFAULT_MAX_Q: usize = 4;

#[derive(Parser)]
#[command(name = "rwmso", version, about = "MSO model checking on graphs of bounded rankwidth")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the graph of a parse tree satisfies a sentence.
    Check {
        #[arg(long)]
        parse_tree: PathBuf,
        /// Sentence text, a file holding it, or a catalog name.
        #[arg(long)]
        formula: String,
        #[arg(long)]
        json: bool,
        /// Ignore the RWMSO_MAX_Q depth cap.
        #[arg(long)]
        force: bool,
    },
    /// Decide a sentence on an explicit graph by brute force.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        json: bool,
        /// Run beyond the size limits.
        #[arg(long)]
        force: bool,
    },
    /// Optimize a linear weight over the free set variables of a formula.
    Optimize {
        #[arg(long)]
        parse_tree: PathBuf,
        #[arg(long)]
        formula: String,
        /// One weight per free set variable, in order of first occurrence.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Vec<i64>,
        #[arg(long, value_enum, default_value = "max")]
        direction: Opt,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        force: bool,
    },
    /// Exact rankwidth of a small graph.
    Rankwidth {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build the reduced characteristic tree of a parse tree.
    Chartree {
        #[arg(long)]
        parse_tree: PathBuf,
        #[arg(long)]
        q: usize,
        /// Print every node.
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        force: bool,
    },
    /// Write the parse tree of a family member.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Label width, at least the family's own.
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantifier rank of a formula.
    Qrank {
        formula: String,
        #[arg(long, default_value_t = MAX_LABEL_WIDTH)]
        width: usize,
    },
    /// Time model checking over growing family members; prints CSV.
    Bench {
        #[arg(long, default_value = "path")]
        family: String,
        #[arg(long, value_delimiter = ',', default_value = "256,512,1024,2048,4096,8192,16384")]
        n_list: Vec<usize>,
        #[arg(long, default_value = "has-edge")]
        formula: String,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        /// Reuse products of equal subtrees.
        #[arg(long)]
        cache: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Opt {
    Max,
    Min,
}

enum Outcome {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Yes) => ExitCode::from(0),
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_tree(path: &Path) -> Result<ParseTree> {
    Ok(parse_tree_from_text(&read(path)?)?)
}

fn load_graph(path: &Path) -> Result<Structure> {
    Ok(parse_graph(&read(path)?)?)
}

/// A file path, a catalog name, or formula text, tried in that order.
fn load_formula(arg: &str, width: usize) -> Result<Formula> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        read(path)?
    } else if let Some(f) = catalog::sentence(arg) {
        if f.max_label() > width {
            bail!("catalog sentence {arg} uses label {} beyond width {width}", f.max_label());
        }
        return Ok(f);
    } else {
        arg.to_string()
    };
    Ok(parse_formula(text.trim(), width)?)
}

fn max_q() -> Result<usize> {
    match std::env::var("RWMSO_MAX_Q") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("RWMSO_MAX_Q must be a number, got `{v}`")),
        Err(_) => Ok(DEFAULT_MAX_Q),
    }
}

fn guard_depth(q: usize, force: bool) -> Result<()> {
    let cap = max_q()?;
    if q > cap {
        if !force {
            bail!("depth {q} exceeds RWMSO_MAX_Q={cap}; pass --force to run anyway");
        }
        eprintln!("warning: depth {q} exceeds RWMSO_MAX_Q={cap}, continuing because of --force");
    }
    Ok(())
}

fn truth(holds: bool, json: bool, report: RunReport) -> Outcome {
    if json {
        println!("{}", report.to_json());
    } else {
        println!("{holds}");
    }
    if holds {
        Outcome::Yes
    } else {
        Outcome::No
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Check {
            parse_tree,
            formula,
            json,
            force,
        } => {
            let tree = load_tree(&parse_tree)?;
            let phi = load_formula(&formula, tree.width())?;
            let q = prepare_sentence(&phi)?.quantifier_rank();
            guard_depth(q, force)?;
            let start = Instant::now();
            let mut checker = ModelChecker::new(tree.width());
            let r = checker.check(&tree, &phi)?;
            let mut report = RunReport::new("check", json!(r.holds));
            report.char_tree_nodes = Some(r.tree_nodes);
            report.parse_tree_nodes = Some(tree.len());
            report.peak_interned = Some(checker.store().len());
            report.depth = Some(r.depth);
            report.wall_time_ms = ms(start);
            Ok(truth(r.holds, json, report))
        }
        Command::Oracle {
            graph,
            formula,
            json,
            force,
        } => {
            let g = load_graph(&graph)?;
            let phi = load_formula(&formula, g.width().max(1))?;
            if !phi.is_sentence() {
                bail!("formula has free variables");
            }
            let sq = phi.set_quantifier_count();
            if g.len() > ORACLE_MAX_VERTICES || sq > ORACLE_MAX_SET_QUANTIFIERS {
                let msg = format!(
                    "brute force limited to {ORACLE_MAX_VERTICES} vertices and {ORACLE_MAX_SET_QUANTIFIERS} set quantifiers, got {} and {sq}",
                    g.len()
                );
                if !force {
                    bail!("{msg}; pass --force to run anyway");
                }
                eprintln!("warning: {msg}, continuing because of --force");
            }
            let start = Instant::now();
            let holds = evaluate(&g, &phi, &Assignment::new())?;
            let mut report = RunReport::new("oracle", json!(holds));
            report.wall_time_ms = ms(start);
            Ok(truth(holds, json, report))
        }
        Command::Optimize {
            parse_tree,
            formula,
            weights,
            direction,
            json,
            force,
        } => {
            let tree = load_tree(&parse_tree)?;
            let phi = load_formula(&formula, tree.width())?;
            let direction = match direction {
                Opt::Max => Direction::Max,
                Opt::Min => Direction::Min,
            };
            let problem = LinEmsoProblem::new(phi, weights, direction);
            guard_depth(problem.phi.quantifier_rank() + problem.variables.len(), force)?;
            let start = Instant::now();
            match solve_linemso(&tree, &problem) {
                Ok(sol) => {
                    let witness: Vec<Vec<usize>> = sol.witness.iter().map(|s| s.iter().collect()).collect();
                    if json {
                        let mut report = RunReport::new(
                            "optimize",
                            json!({ "value": sol.value.to_string(), "witness": witness, "variables": problem.variables }),
                        );
                        report.parse_tree_nodes = Some(tree.len());
                        report.depth = Some(sol.depth);
                        report.peak_interned = Some(sol.max_classes);
                        report.wall_time_ms = ms(start);
                        println!("{}", report.to_json());
                    } else {
                        println!("{}", sol.value);
                        for (name, set) in problem.variables.iter().zip(&witness) {
                            let ids: Vec<String> = set.iter().map(usize::to_string).collect();
                            println!("{name} = {{{}}}", ids.join(","));
                        }
                    }
                    Ok(Outcome::Yes)
                }
                Err(LinEmsoError::Infeasible) => {
                    if json {
                        println!("{}", RunReport::new("optimize", json!("infeasible")).to_json());
                    } else {
                        println!("infeasible");
                    }
                    Ok(Outcome::No)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Rankwidth { graph, json } => {
            let g = load_graph(&graph)?;
            let start = Instant::now();
            let (w, _) = exact_rankwidth(&g)?;
            if json {
                let mut report = RunReport::new("rankwidth", json!(w));
                report.wall_time_ms = ms(start);
                println!("{}", report.to_json());
            } else {
                println!("{w}");
            }
            Ok(Outcome::Yes)
        }
        Command::Chartree {
            parse_tree,
            q,
            dump: show,
            json,
            force,
        } => {
            let tree = load_tree(&parse_tree)?;
            guard_depth(q, force)?;
            let start = Instant::now();
            let mut store = CharTreeStore::new(tree.width());
            store.set_product_cache(true);
            let root = store.from_parse_tree(&tree, q)?;
            let nodes = store.reachable_count(root);
            if json {
                let mut report = RunReport::new("chartree", json!({ "nodes": nodes, "unfolded": store.tree_size(root).to_string() }));
                report.char_tree_nodes = Some(nodes);
                report.parse_tree_nodes = Some(tree.len());
                report.peak_interned = Some(store.len());
                report.depth = Some(q);
                report.wall_time_ms = ms(start);
                println!("{}", report.to_json());
            } else {
                println!("nodes {nodes}");
                println!("unfolded {}", store.tree_size(root));
                println!("interned {}", store.len());
                if show {
                    print!("{}", dump(&store, root));
                }
            }
            Ok(Outcome::Yes)
        }
        Command::Gen { family, n, width, out } => {
            let fam = Family::from_name(&family).with_context(|| {
                let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
                format!("unknown family `{family}`; expected one of {}", names.join(", "))
            })?;
            let mut tree = family_tree(fam, n)?;
            if let Some(w) = width {
                if w < tree.width() {
                    bail!("{family} needs width {}", tree.width());
                }
                tree = tree.widen(w)?;
            }
            let text = print_parse_tree(&tree);
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(Outcome::Yes)
        }
        Command::Qrank { formula, width } => {
            let phi = load_formula(&formula, width)?;
            println!("{}", phi.quantifier_rank());
            Ok(Outcome::Yes)
        }
        Command::Bench {
            family,
            n_list,
            formula,
            t,
            repeats,
            cache,
        } => {
            let fam = Family::from_name(&family).with_context(|| format!("unknown family `{family}`"))?;
            let phi = load_formula(&formula, t)?;
            let config = BenchConfig {
                family: fam,
                sizes: n_list,
                width: t,
                repeats,
                product_cache: cache,
            };
            let rows = bench::run(&config, &phi)?;
            print!("{}", bench::to_csv(&rows));
            Ok(Outcome::Yes)
        }
    }
}
