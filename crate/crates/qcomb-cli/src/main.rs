use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use qcomb::dinner::{self, word_string};
use qcomb::order;
use qcomb::rook::RookPlacement;
use qcomb::verify::{self, VerificationReport};
use qcomb::{Involution, LabeledMotzkinPath, Permutation};

#[derive(Parser)]
#[command(name = "qcomb", about = "Exact combinatorics of involutions, labeled paths, and Bruhat order", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify an identity family by exhaustive enumeration.
    Verify {
        #[arg(value_enum)]
        identity: Identity,
        /// Size parameter: word length for main/structure/census/deodhar,
        /// half the path length for the fixed-point-free families.
        #[arg(long)]
        n: usize,
        /// Also write reports as JSON lines to this path.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Override the guard ceilings.
        #[arg(long)]
        force: bool,
    },
    /// Apply one of the bijections to a single object.
    Map {
        #[arg(value_enum)]
        direction: Direction,
        /// One-line permutation word, e.g. "5 2 6 4 1 3".
        #[arg(long)]
        perm: Option<String>,
        /// Step word with labels, e.g. "UULDUULLDDD;2,2,1,1".
        #[arg(long)]
        path: Option<String>,
    },
    /// Build an induced order on involutions and write its DOT rendering.
    Poset {
        #[arg(long)]
        n: usize,
        /// Output file for the DOT digraph.
        #[arg(long)]
        dot: PathBuf,
        /// Use the weak-order covers instead of the full induced order.
        #[arg(long)]
        weak: bool,
        /// Restrict to fixed-point-free involutions (n must be even).
        #[arg(long)]
        fpf: bool,
        #[arg(long)]
        force: bool,
    },
    /// Play the crossout game for one permutation, or census a size.
    Dinner {
        #[arg(long)]
        perm: Option<String>,
        /// Count fair permutations of this (even) size.
        #[arg(long)]
        census: Option<usize>,
        #[arg(long)]
        force: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    Main,
    Fpf,
    Blm,
    Watson,
    Deodhar,
    Structure,
    Census,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    PermToPath,
    PathToPerm,
    DyckToRooks,
}

fn main() -> ExitCode {
    match run() {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<bool> {
    match Cli::parse().command {
        Command::Verify {
            identity,
            n,
            json,
            force,
        } => {
            let reports = match identity {
                Identity::Main => verify::verify_main(n, force)?,
                Identity::Fpf => verify::verify_fpf(n, force)?,
                Identity::Blm => verify::verify_blm(n, force)?,
                Identity::Watson => verify::verify_watson(n, force)?,
                Identity::Deodhar => verify::verify_deodhar(n, force)?,
                Identity::Structure => verify::verify_structure(n, force)?,
                Identity::Census => vec![verify::verify_census(n, force)?],
            };
            for r in &reports {
                println!("{r} [{} ms, {} shard(s)]", r.elapsed.as_millis(), r.shards);
            }
            if let Some(path) = json {
                let lines: String = reports.iter().map(|r| r.to_json() + "\n").collect();
                fs::write(&path, lines).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(reports.iter().all(VerificationReport::passed))
        }
        Command::Map { direction, perm, path } => {
            let record = match direction {
                Direction::PermToPath => {
                    let word = perm.context("--perm is required for perm-to-path")?;
                    let p: Permutation = word.parse()?;
                    let s = Involution::new(p)?;
                    let lp = s.to_labeled_path();
                    bijection_record(s.perm(), &lp)
                }
                Direction::PathToPerm => {
                    let text = path.context("--path is required for path-to-perm")?;
                    let lp: LabeledMotzkinPath = text.parse()?;
                    let s = lp.to_involution();
                    bijection_record(s.perm(), &lp)
                }
                Direction::DyckToRooks => {
                    let text = path.context("--path is required for dyck-to-rooks")?;
                    let lp: LabeledMotzkinPath = text.parse()?;
                    let rp = RookPlacement::from_labeled_dyck(&lp)?;
                    serde_json::json!({
                        "path": lp.path().to_string(),
                        "labels": lp.label_word(),
                        "shape": rp.row_lengths(),
                        "rooks": rp.rook_cols(),
                    })
                }
            };
            println!("{record}");
            Ok(true)
        }
        Command::Poset {
            n,
            dot,
            weak,
            fpf,
            force,
        } => {
            if weak && fpf {
                bail!("--weak and --fpf are mutually exclusive");
            }
            let poset = if fpf {
                order::fpf_involution_poset_forced(n, force)?
            } else if weak {
                order::weak_involution_poset_forced(n, force)?
            } else {
                order::involution_poset_forced(n, force)?
            };
            fs::write(&dot, poset.to_dot()).with_context(|| format!("writing {}", dot.display()))?;
            println!(
                "{} elements, {} covers, rank profile {:?} -> {}",
                poset.elements().len(),
                poset.covers().len(),
                poset.rank_profile(),
                dot.display()
            );
            Ok(true)
        }
        Command::Dinner { perm, census, force } => match (perm, census) {
            (Some(word), None) => {
                let p: Permutation = word.parse()?;
                let out = dinner::allocate(&p)?;
                println!("perm      {p}");
                println!("w         {}", out.allocation().to_compact_string());
                println!(
                    "alice     eats positions {:?}",
                    out.allocation().alice_order
                );
                println!("bob       eats positions {:?}", out.allocation().bob_order);
                println!(
                    "delta_a   {};{}",
                    word_string(out.delta_a()),
                    join(out.lambda_a().values())
                );
                println!(
                    "delta_b   {};{}",
                    word_string(out.delta_b()),
                    join(out.lambda_b().values())
                );
                let (hat, hat_labels) = out.delta_b_hat();
                println!("delta_b^  {};{}", word_string(&hat), join(hat_labels.values()));
                let fair = dinner::is_fair(&p)?;
                let k = dinner::k_fairness(&p)?;
                println!("fair      {fair} (k = {k})");
                Ok(true)
            }
            (None, Some(size)) => {
                let report = verify::verify_census(size, force)?;
                println!(
                    "fair permutations of size {size}: counted {} vs formula {}",
                    report.left.as_deref().unwrap_or("?"),
                    report.right.as_deref().unwrap_or("?"),
                );
                println!("{report}");
                Ok(report.passed())
            }
            _ => bail!("pass exactly one of --perm or --census"),
        },
    }
}

fn bijection_record(p: &Permutation, lp: &LabeledMotzkinPath) -> serde_json::Value {
    serde_json::json!({
        "perm": p.to_string(),
        "path": lp.path().to_string(),
        "labels": lp.label_word(),
    })
}

fn join<'a>(values: impl Iterator<Item = &'a usize>) -> String {
    values.map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}
