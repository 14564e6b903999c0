//! Batch verifier and workbench for generalized cellular automata.
//!
//! Loads one JSON definition document per invocation, runs a single
//! operation or the whole invariant suite, prints a text report, and
//! optionally writes the same facts as JSON. Exit codes: 0 all checks
//! passed, 1 a check failed, 2 usage or parse error, 3 unsupported input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gca_lab::ca::{self, Gca};
use gca_lab::config::Configuration;
use gca_lab::equivariance::{self, DeltaElements};
use gca_lab::error::Error;
use gca_lab::groups::{Element, HomMap, Homomorphism};
use gca_lab::report::Report;
use gca_lab::structure;
use gca_lab::verify::{run_verification, VerifyBudget};
use gca_lab::workspace::Workspace;

#[derive(Parser)]
#[command(
    name = "gca-lab",
    version,
    about = "generalized cellular automata workbench"
)]
struct Cli {
    /// JSON definition document with groups, homomorphisms, rules, automata.
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,

    /// Write the machine-readable report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an automaton to a dense configuration.
    Apply {
        #[arg(long)]
        gca: String,
        /// Comma-separated symbols, one per group element.
        #[arg(long)]
        input: String,
    },
    /// Compose two automata (the first runs first).
    Compose {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Split an automaton into a pullback and an id-automaton.
    Factorize {
        #[arg(long)]
        gca: String,
    },
    /// Minimal memory set of an automaton.
    Minimize {
        #[arg(long)]
        gca: String,
    },
    /// Difference set of two homomorphisms.
    Delta {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
    },
    /// Decide whether an automaton realizes its map through another
    /// homomorphism.
    Equivariance {
        #[arg(long)]
        gca: String,
        #[arg(long)]
        psi: String,
    },
    /// List every homomorphism the automaton is equivariant through.
    UhpScan {
        #[arg(long)]
        gca: String,
    },
    /// Build the symmetric rule equivariant through two homomorphisms at
    /// once (possible exactly when their difference set is finite).
    Counterexample {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
    /// Push an endomorphism automaton down to a quotient group.
    Quotient {
        #[arg(long)]
        gca: String,
        #[arg(long)]
        subgroup: String,
    },
    /// Restrict an automaton to a subgroup of its output group.
    Restrict {
        #[arg(long)]
        gca: String,
        #[arg(long)]
        subgroup: String,
    },
    /// Rebuild a full automaton from its restriction.
    Induce {
        #[arg(long)]
        gca: String,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        phi: String,
    },
    /// Injectivity/bijectivity transfer between an automaton and its
    /// restriction.
    Transfer {
        #[arg(long)]
        gca: String,
        #[arg(long)]
        subgroup: String,
    },
    /// Compare closure under composition with full invariance of a subgroup.
    Submonoid {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: String,
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    /// Run the whole invariant suite over a size budget.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = 2)]
        max_memory: usize,
    },
}

fn hom_desc(h: &Homomorphism) -> String {
    match h.map() {
        HomMap::Table(images) => format!("images={images:?}"),
        HomMap::Matrix { entries, .. } => format!("matrix={entries:?}"),
        HomMap::Trivial => "trivial".to_string(),
    }
}

fn gca_desc(t: &Gca) -> String {
    let memory: Vec<String> = t.rule().memory().iter().map(|m| m.to_string()).collect();
    format!(
        "phi {}; memory [{}]; table {:?}",
        hom_desc(t.phi()),
        memory.join(", "),
        t.rule().table()
    )
}

fn elements_desc(els: &[Element]) -> String {
    let parts: Vec<String> = els.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn need_workspace(path: &Option<PathBuf>) -> Result<Workspace, Error> {
    match path {
        Some(p) => Workspace::load(p),
        None => Err(Error::Parse(
            "this subcommand needs --workspace <file>".into(),
        )),
    }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    if let Command::Verify {
        max_order,
        q,
        max_memory,
    } = &cli.command
    {
        let budget = VerifyBudget {
            max_order: *max_order,
            q: *q,
            max_memory: *max_memory,
        };
        return Ok(run_verification(&budget));
    }
    let ws = need_workspace(&cli.workspace)?;
    let mut report;
    match &cli.command {
        Command::Verify { .. } => unreachable!("handled above"),
        Command::Apply { gca, input } => {
            report = Report::new(format!("apply --gca {gca}"));
            let t = ws.gca(gca)?;
            let symbols: Vec<u8> = input
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::Parse(format!("bad symbol '{p}'")))
                })
                .collect::<Result<_, _>>()?;
            let x = Configuration::dense(t.domain_space().clone(), t.alphabet(), symbols)?;
            let y = t.apply(&x)?;
            report.pass("apply", format!("{x} -> {y}"));
        }
        Command::Compose { first, second } => {
            report = Report::new(format!("compose --first {first} --second {second}"));
            let t = ws.gca(first)?;
            let s = ws.gca(second)?;
            let composed = ca::compose(t, s)?;
            report.pass("compose", gca_desc(&composed));
            report.pass(
                "minimal-memory",
                elements_desc(&composed.minimal_memory_set()),
            );
        }
        Command::Factorize { gca } => {
            report = Report::new(format!("factorize --gca {gca}"));
            let t = ws.gca(gca)?;
            let (tau, phi) = ca::factorize(t);
            report.pass("id-automaton", gca_desc(&tau));
            report.pass("pullback-through", hom_desc(&phi));
        }
        Command::Minimize { gca } => {
            report = Report::new(format!("minimize --gca {gca}"));
            let t = ws.gca(gca)?;
            report.pass("minimal-memory", elements_desc(&t.minimal_memory_set()));
            report.pass("constant", t.is_constant().to_string());
        }
        Command::Delta { phi, psi } => {
            report = Report::new(format!("delta --phi {phi} --psi {psi}"));
            let d = equivariance::difference_set(ws.homomorphism(phi)?, ws.homomorphism(psi)?)?;
            match &d.elements {
                DeltaElements::Finite(els) => {
                    report.pass("difference-set", format!("finite; {}", elements_desc(els)));
                }
                DeltaElements::Infinite { direction, .. } => {
                    report.pass(
                        "difference-set",
                        format!("infinite; certificate direction {direction}"),
                    );
                }
            }
        }
        Command::Equivariance { gca, psi } => {
            report = Report::new(format!("equivariance --gca {gca} --psi {psi}"));
            let verdict = equivariance::decide_equivariance(ws.gca(gca)?, ws.homomorphism(psi)?)?;
            let method = format!("{:?}", verdict.method);
            if verdict.equivariant {
                report.pass("equivariant", format!("yes; method {method}"));
            } else {
                let (h, x) = verdict.witness.expect("negative verdicts carry a witness");
                report.pass(
                    "equivariant",
                    format!("no; method {method}; witness h={h}, x={x}"),
                );
            }
        }
        Command::UhpScan { gca } => {
            report = Report::new(format!("uhp-scan --gca {gca}"));
            let t = ws.gca(gca)?;
            let kept = equivariance::uhp_scan(t)?;
            for (i, h) in kept.iter().enumerate() {
                report.pass(format!("equivariant-homomorphism-{i}"), hom_desc(h));
            }
            let unique = kept.len() == 1 && &kept[0] == t.phi();
            report.pass(
                "unique-homomorphism-property",
                if unique { "holds" } else { "fails" },
            );
        }
        Command::Counterexample { phi, psi, q } => {
            report = Report::new(format!("counterexample --phi {phi} --psi {psi} --q {q}"));
            let alphabet = gca_lab::config::Alphabet::new(*q)?;
            let tau = equivariance::symmetric_counterexample(
                ws.homomorphism(phi)?,
                ws.homomorphism(psi)?,
                alphabet,
            )?;
            report.pass("shared-rule", gca_desc(&tau));
        }
        Command::Quotient { gca, subgroup } => {
            report = Report::new(format!("quotient --gca {gca} --subgroup {subgroup}"));
            let pkg = structure::quotient_gca(ws.gca(gca)?, ws.subgroup(subgroup)?)?;
            report.pass("quotient-automaton", gca_desc(&pkg.quotient));
            report.pass("diagram", "verified on every input");
            report.pass("fixed-set-size", pkg.fix_set.len().to_string());
        }
        Command::Restrict { gca, subgroup } => {
            report = Report::new(format!("restrict --gca {gca} --subgroup {subgroup}"));
            let pkg = structure::restrict(ws.gca(gca)?, ws.subgroup(subgroup)?)?;
            report.pass("restricted-automaton", gca_desc(&pkg.restricted));
            report.pass("diagram", "verified on every input");
        }
        Command::Induce { gca, subgroup, phi } => {
            report = Report::new(format!(
                "induce --gca {gca} --subgroup {subgroup} --phi {phi}"
            ));
            let induced =
                structure::induce(ws.gca(gca)?, ws.subgroup(subgroup)?, ws.homomorphism(phi)?)?;
            report.pass("induced-automaton", gca_desc(&induced));
        }
        Command::Transfer { gca, subgroup } => {
            report = Report::new(format!("transfer --gca {gca} --subgroup {subgroup}"));
            let r = structure::transfer_theorem_check(ws.gca(gca)?, ws.subgroup(subgroup)?)?;
            report.pass(
                "original",
                format!(
                    "injective={}, surjective={}",
                    r.original_injective, r.original_surjective
                ),
            );
            report.pass(
                "restricted",
                format!(
                    "injective={}, surjective={}",
                    r.restricted_injective, r.restricted_surjective
                ),
            );
            report.pass(
                "homomorphism",
                format!(
                    "injective={}, surjective={}",
                    r.phi_injective, r.phi_surjective
                ),
            );
            report.pass("biconditionals", "both hold");
        }
        Command::Submonoid {
            group,
            subgroup,
            bound,
        } => {
            report = Report::new(format!(
                "submonoid --group {group} --subgroup {subgroup} --bound {bound}"
            ));
            let closed =
                structure::gca_submonoid_check(ws.group(group)?, ws.subgroup(subgroup)?, *bound)?;
            report.pass(
                "closed-under-composition",
                format!("{closed} (agrees with full invariance)"),
            );
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            report.elapsed_ms = started.elapsed().as_millis();
            print!("{}", report.render_text());
            if let Some(path) = &cli.report {
                let json = serde_json::to_string_pretty(&report.to_json())
                    .expect("report serialization cannot fail");
                if let Err(e) = std::fs::write(path, json + "\n") {
                    eprintln!("error: cannot write report to {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(u8::try_from(report.exit_code()).unwrap_or(1))
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse(_) => 2,
                Error::Unsupported(_) | Error::InfiniteFamily(_) => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
