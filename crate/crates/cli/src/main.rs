use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use latmod::constructions::{belnap_four, boolean_algebra, chain, footnote_k5, twist, ChainNeg};
use latmod::enumeration::{enumerate_complementations, enumerate_lattices, ComplementationMode};
use latmod::harness::{run_suite, verify_theorem, Bounds, SuiteConfig, TheoremId};
use latmod::io::{self, LatticeDoc};
use latmod::properties::{check_designated, check_lattice_properties, classify_implication, Check, DownDistMode};
use latmod::{
    check_regularity, entails, evaluate, find_frame_counterexample, BoxMode, ElemSet, Entailment, Error, Formula,
    ImpMode, Lattice, Limits, Matrix,
};

/// Finite lattice-valued modal logic: evaluation, validity search and
/// exhaustive theorem checks.
#[derive(Parser)]
#[command(name = "latmod", version)]
struct Cli {
    /// Print JSON on a single line.
    #[arg(long, global = true)]
    compact: bool,
    /// Lift the size guards on exhaustive searches.
    #[arg(long, global = true)]
    unsafe_bounds: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice file operations.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Evaluate a formula in a model file.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        /// Only this world; default is every world.
        #[arg(long)]
        world: Option<String>,
        #[arg(long = "box", default_value = "normal")]
        box_mode: BoxMode,
    },
    /// Search all frames up to a size for a counterexample.
    Valid {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long = "box", default_value = "normal")]
        box_mode: BoxMode,
    },
    /// Propositional consequence by brute force over valuations.
    Entails {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, num_args = 0..)]
        premises: Vec<String>,
        #[arg(long)]
        conclusion: String,
    },
    /// Compare semantic regularity of the designated set with the filter check.
    Regular {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, default_value_t = 2)]
        max_worlds: usize,
    },
    /// All lattices of one size up to isomorphism, as JSON lines.
    Enumerate {
        #[arg(long)]
        size: usize,
        /// `antimonotone-involutions` pairs each lattice with every such negation.
        #[arg(long)]
        neg: Option<String>,
    },
    /// Emit a built-in lattice.
    Construct {
        /// boolean:K, chain:N[:none], belnap, k5, twist:K[:P]
        #[arg(long)]
        kind: String,
    },
    /// Exhaustively check one correspondence, or all of them.
    Verify {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        theorem: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long, default_value_t = 2)]
        twist_atoms: usize,
        /// Restore the Eq. (1) value of the K5 special entry.
        #[arg(long)]
        mutate_k5: bool,
    },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Validate and report every property.
    Check { file: PathBuf },
}

#[derive(Args)]
struct MatrixArgs {
    /// A lattice file, or a built-in kind as for `construct`.
    #[arg(long)]
    lattice: String,
    /// Replace the implication: material or deductive_eq1.
    #[arg(long)]
    imp: Option<String>,
    /// Replace the designated set, comma separated.
    #[arg(long)]
    designated: Option<String>,
}

enum Outcome {
    Holds(Value),
    Counterexample(Value),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = if cli.unsafe_bounds {
        Limits::unbounded()
    } else {
        Limits::default()
    };
    match run(cli.command, &limits) {
        Ok(Outcome::Holds(v)) => {
            print(&v, cli.compact);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Counterexample(v)) => {
            print(&v, cli.compact);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn print(v: &Value, compact: bool) {
    if !v.is_null() {
        println!("{}", io::render(v, compact));
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))
}

fn parse_formula(text: &str) -> Result<Formula, Error> {
    Ok(Formula::parse(text)?)
}

fn run(command: Command, limits: &Limits) -> Result<Outcome, Error> {
    match command {
        Command::Lattice {
            command: LatticeCommand::Check { file },
        } => {
            let doc = io::parse_lattice(&read(&file)?)?;
            Ok(Outcome::Holds(lattice_record(&doc)?))
        }
        Command::Eval {
            model,
            formula,
            world,
            box_mode,
        } => {
            let base = model.parent().unwrap_or(Path::new("."));
            let (doc, model) = io::parse_model(&read(&model)?, base)?;
            let f = parse_formula(&formula)?;
            let worlds = match &world {
                Some(w) => vec![model.frame.world(w)?],
                None => (0..model.frame.size()).collect(),
            };
            let l = &model.lattice;
            let mut values = Map::new();
            let mut failing = None;
            for w in worlds {
                let v = evaluate(&model, w, &f, box_mode, None)?;
                let name = model.frame.world_name(w).to_string();
                if doc.designated.is_some_and(|d| !d.contains(v)) && failing.is_none() {
                    failing = Some(name.clone());
                }
                values.insert(name, json!(l.name(v)));
            }
            let mut out = json!({ "formula": f.to_string(), "box": box_mode.as_str(), "values": values });
            if doc.designated.is_some() {
                out["satisfied"] = json!(failing.is_none());
                out["failing_world"] = json!(failing);
            }
            Ok(if failing.is_some() {
                Outcome::Counterexample(out)
            } else {
                Outcome::Holds(out)
            })
        }
        Command::Valid {
            matrix,
            formula,
            max_worlds,
            box_mode,
        } => {
            let m = matrix.load()?;
            let f = parse_formula(&formula)?;
            Ok(match find_frame_counterexample(&m, &f, max_worlds, box_mode, limits)? {
                Some(r) => Outcome::Counterexample(io::counterexample_to_value(&r)),
                None => Outcome::Holds(json!({
                    "formula": f.to_string(),
                    "box": box_mode.as_str(),
                    "max_worlds": max_worlds,
                    "valid": true,
                })),
            })
        }
        Command::Entails {
            matrix,
            premises,
            conclusion,
        } => {
            let m = matrix.load()?;
            let premises = premises.iter().map(|p| parse_formula(p)).collect::<Result<Vec<_>, _>>()?;
            let conclusion = parse_formula(&conclusion)?;
            let base = json!({
                "premises": premises.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "conclusion": conclusion.to_string(),
            });
            Ok(match entails(&m, &premises, &conclusion)? {
                Entailment::Holds => {
                    let mut v = base;
                    v["entails"] = json!(true);
                    Outcome::Holds(v)
                }
                Entailment::Fails(a) => {
                    let mut v = base;
                    v["entails"] = json!(false);
                    let witness: Map<String, Value> =
                        a.iter().map(|(k, e)| (k.clone(), json!(m.lattice.name(*e)))).collect();
                    v["witness"] = Value::Object(witness);
                    Outcome::Counterexample(v)
                }
            })
        }
        Command::Regular { matrix, max_worlds } => {
            let m = matrix.load()?;
            let r = check_regularity(&m, max_worlds, limits)?;
            let mut v = json!({
                "regular": r.regular,
                "is_filter": r.structural.is_filter,
                "meet_in_designated": r.structural.meet_in_f,
                "agrees": r.agrees(),
                "max_worlds": max_worlds,
            });
            if let Some(w) = &r.witness {
                let mut model = io::model_to_value(&w.model, Some(m.designated.set()));
                model["world"] = json!(w.model.frame.world_name(w.world));
                model["box_designated"] = json!(w.box_designated);
                v["witness"] = model;
            }
            Ok(if r.regular {
                Outcome::Holds(v)
            } else {
                Outcome::Counterexample(v)
            })
        }
        Command::Enumerate { size, neg } => {
            let with_neg = match neg.as_deref() {
                None | Some("none") => false,
                Some("antimonotone-involutions") => true,
                Some(other) => return Err(Error::InvalidArgument(format!("unknown --neg `{other}`"))),
            };
            for l in enumerate_lattices(size, limits)? {
                if with_neg {
                    for t in enumerate_complementations(&l, ComplementationMode::AntimonotoneInvolutions, limits)? {
                        let ln = l.clone().with_neg(t)?;
                        print(&io::lattice_to_value("", &ln, None), true);
                    }
                } else {
                    print(&io::lattice_to_value("", &l, None), true);
                }
            }
            Ok(Outcome::Holds(Value::Null))
        }
        Command::Construct { kind } => {
            let doc = construct(&kind)?;
            Ok(Outcome::Holds(io::lattice_to_value(&doc.name, &doc.lattice, doc.designated)))
        }
        Command::Verify {
            theorem,
            all,
            max_size,
            max_worlds,
            twist_atoms,
            mutate_k5,
        } => {
            let bounds = Bounds {
                max_size,
                max_worlds,
                twist_atoms,
            };
            if all {
                let r = run_suite(&SuiteConfig { bounds, mutate_k5 }, limits)?;
                let v = io::suite_to_value(&r);
                return Ok(if r.passed() {
                    Outcome::Holds(v)
                } else {
                    Outcome::Counterexample(v)
                });
            }
            let id: TheoremId = theorem.expect("clap requires --theorem or --all").parse()?;
            let r = verify_theorem(id, &bounds, limits)?;
            let v = io::theorem_report_to_value(&r);
            Ok(if r.passed() {
                Outcome::Holds(v)
            } else {
                Outcome::Counterexample(v)
            })
        }
    }
}

impl MatrixArgs {
    fn load(&self) -> Result<Matrix, Error> {
        let path = Path::new(&self.lattice);
        let mut doc = if path.is_file() {
            io::parse_lattice(&read(path)?)?
        } else {
            construct(&self.lattice)?
        };
        if let Some(mode) = &self.imp {
            let mode = match mode.as_str() {
                "material" => ImpMode::Material,
                "deductive_eq1" => ImpMode::DeductiveEq1,
                other => return Err(Error::InvalidArgument(format!("unknown --imp `{other}`"))),
            };
            doc.lattice = doc.lattice.with_imp_mode(mode)?;
        }
        if let Some(names) = &self.designated {
            let l = &doc.lattice;
            let set = names
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|n| l.parse_elem(n))
                .collect::<Result<ElemSet, _>>()?;
            doc.designated = Some(set);
        }
        doc.matrix()
    }
}

fn construct(kind: &str) -> Result<LatticeDoc, Error> {
    let parts: Vec<&str> = kind.split(':').collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("`{s}` is not a number in kind `{kind}`")))
    };
    let plain = |name: String, lattice: Lattice| LatticeDoc {
        name,
        lattice,
        designated: None,
    };
    let with_matrix = |name: String, m: Matrix| LatticeDoc {
        name,
        designated: Some(m.designated.set()),
        lattice: m.lattice,
    };
    Ok(match parts.as_slice() {
        ["boolean", k] => plain(kind.to_string(), boolean_algebra(num(k)?)?),
        ["chain", n] => plain(kind.to_string(), chain(num(n)?, ChainNeg::Flip)?),
        ["chain", n, "none"] => plain(kind.to_string(), chain(num(n)?, ChainNeg::None)?),
        ["belnap"] => plain(kind.to_string(), belnap_four()),
        ["k5"] => with_matrix(kind.to_string(), footnote_k5()),
        ["twist", k] => with_matrix(kind.to_string(), twist(&boolean_algebra(num(k)?)?, false)?),
        ["twist", k, "P"] => with_matrix(kind.to_string(), twist(&boolean_algebra(num(k)?)?, true)?),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown lattice `{kind}`: not a file, and not one of boolean:K, chain:N[:none], belnap, k5, twist:K[:P]"
            )))
        }
    })
}

fn check_value(l: &Lattice, c: &Check) -> Value {
    json!({
        "holds": c.holds,
        "witness": c.witness.map(|w| w.describe(l)),
    })
}

fn lattice_record(doc: &LatticeDoc) -> Result<Value, Error> {
    let l = &doc.lattice;
    let props = check_lattice_properties(l, DownDistMode::Exhaustive)?;
    let mut out = json!({
        "lattice": io::lattice_to_value(&doc.name, l, doc.designated),
        "size": l.size(),
        "top": l.name(l.top()),
        "bottom": l.name(l.bottom()),
        "down_distribution": check_value(l, &props.down_distribution),
    });
    if let Some(c) = &props.anti_monotone {
        out["anti_monotone"] = check_value(l, c);
    }
    if let Some(c) = &props.involutive {
        out["involutive"] = check_value(l, c);
    }
    if doc.designated.is_some() {
        let m = doc.matrix()?;
        let r = check_designated(&m);
        let mut d = json!({
            "upward_closed": check_value(l, &r.upward_closed),
            "is_filter": check_value(l, &r.is_filter),
            "linear_outside": check_value(l, &r.linear_outside),
        });
        if let Some(c) = &r.is_implicative {
            d["is_implicative"] = check_value(l, c);
        }
        out["designated"] = d;
        if l.imp_table().is_some() {
            let c = classify_implication(&m)?;
            out["implication"] = json!({
                "deductive": check_value(l, &c.deductive),
                "strictly_deductive": check_value(l, &c.strictly_deductive),
            });
        }
    }
    Ok(out)
}
