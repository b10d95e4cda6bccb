//! `cnl`: build, check, update and verify conditional neighbourhood models
//! from the command line.
//!
//! Usage errors exit with status 2, domain errors with status 1 and a
//! single `error: ...` line on stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cnl_core::comparison::expressivity_separation;
use cnl_core::dynamics::{announce_cut, announce_delete, extension_pc, extension_pcpm};
use cnl_core::format::{read_model, to_canonical_string, write_model, AnyModel};
use cnl_core::lab::{
    builtin_comparison, builtin_ellsberg, builtin_lottery, enumerate_families, find_countermodel,
    fuzz, Suite,
};
use cnl_core::syntax::{desugar, tr1, tr2};
use cnl_core::{parse, Evaluator, Formula, Language, WorldSet};

#[derive(Parser)]
#[command(name = "cnl", version, about = "Conditional neighbourhood logic workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it canonically.
    Parse {
        formula: String,
        /// Expand abbreviations into core constructors.
        #[arg(long)]
        desugar: bool,
    },
    /// Check the neighbourhood conditions of a model file.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// Evaluate a formula at a world.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        #[arg(long)]
        formula: String,
        /// Inferred from the model kind and the formula's language if omitted.
        #[arg(long, value_enum)]
        semantics: Option<Semantics>,
    },
    /// Apply a public announcement and write the updated model.
    Update {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        announce: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Translate between the belief and the comparative language.
    Translate {
        #[arg(long, value_enum)]
        dir: Direction,
        #[arg(long)]
        formula: String,
    },
    /// Run a seeded fuzz suite and print its report.
    Fuzz {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List every valid neighbourhood family over a ground set.
    EnumerateFamilies {
        #[arg(long)]
        size: usize,
    },
    /// Search single-agent models for one falsifying a formula.
    FindCountermodel {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
        /// Also write the model file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one of the built-in models.
    Example {
        #[arg(value_enum)]
        name: Example,
        /// Number of lottery tickets.
        #[arg(long, default_value_t = 4)]
        tickets: usize,
        /// The (1-based) ticket the agent bought.
        #[arg(long, default_value_t = 1)]
        bought: usize,
        /// Weight of the bought ticket, as `n` or `n/d`; defaults to the
        /// number of tickets.
        #[arg(long)]
        heavy: Option<String>,
        /// Write the lottery as its induced neighbourhood model.
        #[arg(long)]
        explicit: bool,
        /// Which comparison model to write.
        #[arg(long, value_enum, default_value_t = Which::N1)]
        which: Which,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare N1 and N2 on all enumerated formulas.
    Separation {
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Semantics {
    Cn,
    Weight,
    Pc,
    Pcpm,
    Cmp1,
    Cmp2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Delete,
    Cut,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Cn2qp,
    Qp2cn,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Ellsberg,
    Lottery,
    Comparison,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    N1,
    N2,
}

/// Largest separation depth; the enumeration grows doubly exponentially.
const MAX_SEPARATION_DEPTH: usize = 2;

fn formula(text: &str) -> Result<Formula> {
    parse(text).with_context(|| format!("cannot parse '{text}'"))
}

fn load(path: &Path) -> Result<AnyModel> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    read_model(&text).with_context(|| format!("cannot load {}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn infer(model: &AnyModel, lang: Language) -> Semantics {
    match (model, lang) {
        (AnyModel::Cn(_), Language::Pc) => Semantics::Pc,
        (AnyModel::Cn(_), Language::PcPm) => Semantics::Pcpm,
        (AnyModel::Cn(_), _) => Semantics::Cn,
        (AnyModel::Weight(_), _) => Semantics::Weight,
        (AnyModel::Comparison(_), Language::Cn) => Semantics::Cmp1,
        (AnyModel::Comparison(_), _) => Semantics::Cmp2,
    }
}

fn holds(model: &AnyModel, world: &str, f: &Formula, semantics: Option<Semantics>) -> Result<bool> {
    let lang = f.language().ok_or_else(|| anyhow!("formula mixes constructors of several languages"))?;
    let semantics = semantics.unwrap_or_else(|| infer(model, lang));
    let at = |m: &dyn Evaluator, set: WorldSet| -> Result<bool> {
        let w = m
            .model_base()
            .world_index(world)
            .ok_or_else(|| anyhow!("unknown world '{world}'"))?;
        Ok(set.contains(w))
    };
    Ok(match (semantics, model) {
        (Semantics::Cn, AnyModel::Cn(m)) => at(m, m.extension(f)?)?,
        (Semantics::Cn, AnyModel::Weight(m)) => {
            let cn = m.induce_cn()?;
            at(&cn, cn.extension(f)?)?
        }
        (Semantics::Pc, AnyModel::Cn(m)) => at(m, extension_pc(m, f)?)?,
        (Semantics::Pcpm, AnyModel::Cn(m)) => at(m, extension_pcpm(m, f)?)?,
        (Semantics::Weight | Semantics::Pc | Semantics::Pcpm, AnyModel::Weight(m)) => {
            if f.has_announcements() {
                at(m, m.extension_dynamic(f)?)?
            } else {
                at(m, m.extension(f)?)?
            }
        }
        (Semantics::Cmp1, AnyModel::Comparison(m)) => m.eval1(world, f)?,
        (Semantics::Cmp2, AnyModel::Comparison(m)) => m.eval2(world, f)?,
        (s, m) => bail!(
            "semantics '{}' does not apply to a {} model",
            s.to_possible_value().expect("named").get_name(),
            m.kind()
        ),
    })
}

fn parse_weight(s: &str) -> Result<num_rational::Ratio<i64>> {
    s.trim().parse().map_err(|_| anyhow!("'{s}' is not a rational 'n' or 'n/d'"))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Parse { formula: text, desugar: expand } => {
            let f = formula(&text)?;
            println!("{}", if expand { desugar(&f) } else { f });
        }
        Command::Validate { model } => {
            let report = match load(&model)? {
                AnyModel::Cn(m) => m.validate(),
                // Weight and comparison models carry no neighbourhood
                // conditions of their own.
                _ => Default::default(),
            };
            print!("{}", to_canonical_string(&json!({
                "valid": report.is_empty(),
                "violations": report.violations,
            })));
            if !report.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Check { model, world, formula: text, semantics } => {
            let m = load(&model)?;
            println!("{}", holds(&m, &world, &formula(&text)?, semantics)?);
        }
        Command::Update { model, announce, mode, out } => {
            let phi = formula(&announce)?;
            let updated = match (load(&model)?, mode) {
                (AnyModel::Cn(m), Mode::Delete) => AnyModel::Cn(announce_delete(&m, &phi)?),
                (AnyModel::Cn(m), Mode::Cut) => AnyModel::Cn(announce_cut(&m, &phi)?),
                (AnyModel::Weight(m), Mode::Delete) => AnyModel::Weight(m.announce_delete(&phi)?),
                (AnyModel::Weight(m), Mode::Cut) => AnyModel::Weight(m.announce_cut(&phi)?),
                (AnyModel::Comparison(_), _) => bail!("comparison models have no announcement update"),
            };
            emit(&write_model(&updated), Some(&out))?;
        }
        Command::Translate { dir, formula: text } => {
            let f = formula(&text)?;
            let g = match dir {
                Direction::Cn2qp => tr1(&f)?,
                Direction::Qp2cn => tr2(&f)?,
            };
            println!("{g}");
        }
        Command::Fuzz { suite, trials, seed } => {
            let suite: Suite = suite.parse().map_err(|e: String| anyhow!(e))?;
            let report = fuzz(suite, trials, seed);
            print!("{}", to_canonical_string(&report.to_value()));
            if !report.ok {
                return Ok(ExitCode::from(1));
            }
        }
        Command::EnumerateFamilies { size } => {
            let fams = enumerate_families(size)?;
            let listing: Vec<Vec<Vec<usize>>> = fams
                .iter()
                .map(|fam| {
                    fam.members()
                        .iter()
                        .map(|&y| (0..size).filter(|b| y & (1 << b) != 0).collect())
                        .collect()
                })
                .collect();
            print!("{}", to_canonical_string(&json!({
                "size": size,
                "count": fams.len(),
                "families": listing,
            })));
        }
        Command::FindCountermodel { formula: text, max_worlds, out } => {
            let f = formula(&text)?;
            match find_countermodel(&f, max_worlds)? {
                Some(c) => {
                    let model = AnyModel::Cn(c.model);
                    if let Some(p) = &out {
                        emit(&write_model(&model), Some(p))?;
                    }
                    let value: serde_json::Value = serde_json::from_str(&write_model(&model))?;
                    print!("{}", to_canonical_string(&json!({ "world": c.world, "model": value })));
                }
                None => println!("valid up to bound {max_worlds}"),
            }
        }
        Command::Example { name, tickets, bought, heavy, explicit, which, out } => {
            let model = match name {
                Example::Ellsberg => AnyModel::Cn(builtin_ellsberg()),
                Example::Lottery => {
                    let heavy = match heavy {
                        Some(s) => parse_weight(&s)?,
                        None => num_rational::Ratio::from_integer(tickets as i64),
                    };
                    let w = builtin_lottery(tickets, bought, heavy)?;
                    if explicit {
                        AnyModel::Cn(w.induce_cn()?)
                    } else {
                        AnyModel::Weight(w)
                    }
                }
                Example::Comparison => {
                    let (n1, n2) = builtin_comparison();
                    AnyModel::Comparison(match which {
                        Which::N1 => n1,
                        Which::N2 => n2,
                    })
                }
            };
            emit(&write_model(&model), out.as_deref())?;
        }
        Command::Separation { max_depth } => {
            if max_depth > MAX_SEPARATION_DEPTH {
                bail!("max-depth must be at most {MAX_SEPARATION_DEPTH}");
            }
            let report = expressivity_separation(max_depth);
            print!("{}", to_canonical_string(&serde_json::to_value(&report)?));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let reason = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {reason}");
            ExitCode::from(1)
        }
    }
}
