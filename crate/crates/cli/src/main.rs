use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use difflat::catalog::{catalog_filter, enumerate_lattices, to_jsonl, CatalogFilter};
use difflat::classify::classify;
use difflat::derivation::{check_derivation, enumerate_derivations_par};
use difflat::derposet::{build_do_poset, run_conjecture};
use difflat::io::{lattice_to_dot, lattice_to_json, read_lattice};
use difflat::verify::{run_suite, Suite};
use difflat::{Elem, Error, FinLattice, OperatorMap};

#[derive(Parser)]
#[command(name = "difflat", version, about = "Derivations on finite lattices")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Chain,
    Diamond,
    Boolean,
    Pentagon,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Print a named lattice as JSON.
    Gen {
        family: Family,
        /// Element count (chain, diamond) or number of atoms (boolean).
        size: Option<usize>,
        /// Print DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// List the derivations of a lattice.
    Derivations {
        lattice: PathBuf,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        isotone_only: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Isomorphism classes of derivations.
    Classify {
        lattice: PathBuf,
        #[arg(long)]
        witnesses: bool,
    },
    /// The pointwise-ordered poset of derivations.
    Doposet {
        lattice: PathBuf,
        #[arg(long)]
        check_lattice: bool,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// All lattices of one order up to isomorphism, as JSON lines.
    Catalog {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        filter: Option<String>,
    },
    /// Probe every lattice up to an order: is the DO poset a lattice, and do DO posets collide?
    Conjecture {
        #[arg(long)]
        max_order: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the claim suite (quick or paper).
    Verify {
        #[arg(default_value = "quick")]
        suite: String,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Render one map as a two-row table and check it.
    Show {
        lattice: PathBuf,
        /// Images in element order, by id or label, separated by commas or spaces.
        #[arg(long)]
        derivation: String,
        #[arg(long)]
        dot: bool,
    },
}

enum Outcome {
    Ok,
    ClaimFailure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ClaimFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value serializes"));
}

fn load(path: &Path) -> Result<FinLattice, Error> {
    read_lattice(path).map_err(|e| match e {
        Error::Json(j) => Error::BadSize(format!("{}: {j}", path.display())),
        other => other,
    })
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Gen { family, size, dot } => {
            let need = |what| size.ok_or(Error::Precondition(what));
            let l = match family {
                Family::Chain => FinLattice::chain(need("chain needs a size")?)?,
                Family::Diamond => FinLattice::diamond(need("diamond needs a size")?)?,
                Family::Boolean => FinLattice::boolean(need("boolean needs a number of atoms")? as u32)?,
                Family::Pentagon => FinLattice::pentagon(),
            };
            if dot {
                print!("{}", lattice_to_dot(&l));
            } else {
                println!("{}", lattice_to_json(&l));
            }
        }
        Command::Derivations { lattice, count, isotone_only, format } => {
            let l = load(&lattice)?;
            let dset = enumerate_derivations_par(&l);
            let items: Vec<_> = dset.iter().filter(|d| !isotone_only || d.is_isotone()).collect();
            match (count, format) {
                (true, Format::Json) => print_json(&json!({ "count": items.len() })),
                (true, Format::Table) => println!("{}", items.len()),
                (false, Format::Json) => {
                    let list: Vec<Value> = items
                        .iter()
                        .map(|d| {
                            json!({
                                "image": d.image(),
                                "fix_points": d.fix_points(),
                                "top_value": d.top_value(),
                                "isotone": d.is_isotone(),
                            })
                        })
                        .collect();
                    print_json(&json!({ "lattice": l.name(), "count": list.len(), "derivations": list }));
                }
                (false, Format::Table) => {
                    let width = l.labels().iter().map(String::len).max().unwrap_or(1);
                    let row = |cells: Vec<&str>| cells.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join(" ");
                    println!("{}  isotone", row(l.labels().iter().map(String::as_str).collect()));
                    for d in items {
                        let cells: Vec<&str> = d.image().iter().map(|&y| l.label(y)).collect();
                        println!("{}  {}", row(cells), if d.is_isotone() { "yes" } else { "no" });
                    }
                }
            }
        }
        Command::Classify { lattice, witnesses } => {
            let l = load(&lattice)?;
            let dset = enumerate_derivations_par(&l);
            let cls = classify(&dset)?;
            let classes: Vec<Value> = cls
                .classes
                .iter()
                .map(|c| {
                    let mut v = json!({
                        "size": c.len(),
                        "fix_size": c.fix_size,
                        "top_is_zero": c.top_is_zero,
                        "representative": dset.get(c.representative()).image(),
                        "members": c.members.iter().map(|&i| dset.get(i).image()).collect::<Vec<_>>(),
                    });
                    if witnesses {
                        v["witnesses"] = json!(c.witnesses);
                    }
                    v
                })
                .collect();
            print_json(&json!({
                "lattice": l.name(),
                "derivations": dset.len(),
                "automorphisms": cls.group_order,
                "class_count": cls.len(),
                "classes": classes,
            }));
        }
        Command::Doposet { lattice, check_lattice, dot } => {
            let l = load(&lattice)?;
            let dset = enumerate_derivations_par(&l);
            let poset = build_do_poset(&dset);
            let image = |i: usize| dset.get(i).image().to_vec();
            let mut out = json!({
                "lattice": l.name(),
                "size": poset.len(),
                "derivations": dset.images(),
                "covers": poset.covers(),
                "do_poset_canonical_key": poset.canonical_key(),
            });
            if check_lattice {
                match poset.check_lattice() {
                    Ok(()) => out["is_lattice"] = json!(true),
                    Err(c) => {
                        out["is_lattice"] = json!(false);
                        out["certificate"] = json!({
                            "kind": c.kind,
                            "pair": [image(c.pair.0), image(c.pair.1)],
                            "bounds": c.bounds.into_iter().map(image).collect::<Vec<_>>(),
                        });
                    }
                }
            }
            if let Some(path) = dot {
                let names: Vec<String> = dset
                    .iter()
                    .map(|d| d.image().iter().map(|&y| l.label(y)).collect::<Vec<_>>().join(","))
                    .collect();
                std::fs::write(&path, poset.to_dot(&format!("DO({})", l.name().unwrap_or("L")), &names))?;
            }
            print_json(&out);
        }
        Command::Catalog { order, out, filter } => {
            let mut cat = enumerate_lattices(order)?;
            if let Some(f) = filter {
                cat = catalog_filter(&cat, f.parse::<CatalogFilter>()?);
            }
            let text = to_jsonl(&cat);
            match out {
                Some(path) => {
                    std::fs::write(&path, text)?;
                    print_json(&json!(cat.provenance()));
                }
                None => print!("{text}"),
            }
        }
        Command::Conjecture { max_order, report } => {
            let r = run_conjecture(max_order)?;
            if let Some(path) = report {
                std::fs::write(&path, serde_json::to_string_pretty(&r)?)?;
            }
            print_json(&json!({
                "max_order": r.max_order,
                "lattices_checked": r.lattices_checked,
                "per_order": r.per_order,
                "do_not_lattice": r.non_lattice,
                "collisions": r.collisions.len(),
                "determination_counterexamples": r.determination_counterexamples,
            }));
        }
        Command::Verify { suite, max_n, report } => {
            let suite: Suite = suite.parse()?;
            let r = run_suite(suite, max_n);
            for c in &r.claims {
                eprintln!("{} {} ({} ms)", if c.passed { "PASS" } else { "FAIL" }, c.id, c.runtime_ms);
            }
            let text = serde_json::to_string_pretty(&r)?;
            match report {
                Some(path) => std::fs::write(&path, text)?,
                None => println!("{text}"),
            }
            if !r.passed {
                return Ok(Outcome::ClaimFailure);
            }
        }
        Command::Show { lattice, derivation, dot } => {
            let l = load(&lattice)?;
            let image = parse_image(&l, &derivation)?;
            let map = OperatorMap::new(image);
            check_derivation(&l, &map).map_err(Error::NotADerivation)?;
            print!("{}", two_row(&l, &map));
            if dot {
                print!("{}", derivation_dot(&l, &map));
            }
        }
    }
    Ok(Outcome::Ok)
}

fn parse_image(l: &FinLattice, spec: &str) -> Result<Vec<Elem>, Error> {
    let tokens: Vec<&str> = spec.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
    if tokens.len() != l.len() {
        return Err(Error::BadSize(format!("image has {} entries, lattice has {} elements", tokens.len(), l.len())));
    }
    tokens
        .iter()
        .map(|t| {
            l.find_label(t)
                .or_else(|| t.parse::<usize>().ok().filter(|&i| i < l.len()))
                .ok_or_else(|| Error::BadSize(format!("unknown element {t:?}")))
        })
        .collect()
}

/// `( x_0 x_1 … )` over `( d(x_0) d(x_1) … )`, columns in element order.
fn two_row(l: &FinLattice, d: &OperatorMap) -> String {
    let top: Vec<&str> = l.elements().map(|x| l.label(x)).collect();
    let bottom: Vec<&str> = l.elements().map(|x| l.label(d.apply(x))).collect();
    let width = top.iter().chain(&bottom).map(|s| s.chars().count()).max().unwrap_or(1);
    let row = |cells: &[&str]| cells.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join(" ");
    format!("( {} )\n( {} )\n", row(&top), row(&bottom))
}

/// The Hasse diagram with the map drawn as dashed arrows.
fn derivation_dot(l: &FinLattice, d: &OperatorMap) -> String {
    let mut dot = lattice_to_dot(l);
    dot.truncate(dot.trim_end().len() - 1);
    for x in l.elements() {
        if d.apply(x) != x {
            writeln!(dot, "  {x} -> {} [style=dashed, constraint=false];", d.apply(x)).expect("write to string");
        }
    }
    dot.push_str("}\n");
    dot
}
