//! Command-line front end: validate graph files, list implied independences,
//! decide separation, test Markov equivalence, classify against neighboring
//! model classes, orient into a DAG, and run the Gaussian cross-check.
//!
//! Exit codes: 0 success (or "separated"/"equivalent"/sound), 1 domain
//! results and errors, 2 usage and file errors.

use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use reggraph::equivalence::{classify, markov_equivalent};
use reggraph::gaussian::{faithfulness_check, implied_covariance, sample_parameters};
use reggraph::orientation::orient_to_dag;
use reggraph::{io, pairwise_independences, separates, RegressionGraph};

#[derive(Parser)]
#[command(name = "reggraph", version, about = "regression graph toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a graph file.
    Validate { file: String },
    /// Print the pairwise independence statements implied by the graph.
    Independences { file: String },
    /// Decide whether node sets a and b are separated given c.
    Separate {
        file: String,
        /// Comma-separated labels.
        #[arg(long)]
        a: String,
        /// Comma-separated labels.
        #[arg(long)]
        b: String,
        /// Comma-separated labels; "" for the empty set.
        #[arg(long, default_value = "")]
        c: String,
    },
    /// Test two graph files for Markov equivalence.
    Equivalent { file1: String, file2: String },
    /// Report membership in the neighboring model classes.
    Classify { file: String },
    /// Orient the graph into a Markov equivalent DAG.
    Orient {
        file: String,
        /// Print the edge rewrites to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Check graph separation against Gaussian partial covariances.
    GaussianCheck {
        file: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        draws: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol_zero: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol_nonzero: f64,
    },
}

fn read_graph(path: &str) -> Result<RegressionGraph, ExitCode> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {path}: {e}");
            return Err(ExitCode::from(2));
        }
    };
    io::parse(&text).map_err(|e| {
        eprintln!("error: {path}: {e}");
        ExitCode::from(1)
    })
}

fn parse_set(g: &RegressionGraph, csv: &str) -> Result<BTreeSet<usize>, ExitCode> {
    let mut out = BTreeSet::new();
    for tok in csv.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match g.index_of(tok) {
            Ok(i) => {
                out.insert(i);
            }
            Err(e) => {
                eprintln!("error: {e}");
                return Err(ExitCode::from(1));
            }
        }
    }
    Ok(out)
}

fn statement_text(g: &RegressionGraph, s: &BTreeSet<usize>) -> String {
    let mut labels: Vec<&str> = s.iter().map(|&i| g.label(i)).collect();
    labels.sort_unstable();
    format!("{{{}}}", labels.join(", "))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(code) => code,
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.cmd {
        Cmd::Validate { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {file}: {e}");
                    return Ok(ExitCode::from(2));
                }
            };
            match io::parse(&text) {
                Ok(_) => {
                    println!("valid");
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("{e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::Independences { file } => {
            let g = read_graph(&file)?;
            let mut lines: Vec<String> = pairwise_independences(&g)
                .iter()
                .map(|st| {
                    format!(
                        "{} _||_ {} | {}",
                        statement_text(&g, &st.a),
                        statement_text(&g, &st.b),
                        statement_text(&g, &st.c)
                    )
                })
                .collect();
            lines.sort_unstable();
            for l in lines {
                println!("{l}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Separate { file, a, b, c } => {
            let g = read_graph(&file)?;
            let (a, b, c) = (parse_set(&g, &a)?, parse_set(&g, &b)?, parse_set(&g, &c)?);
            match separates(&g, &a, &b, &c) {
                Ok(true) => {
                    println!("separated");
                    Ok(ExitCode::SUCCESS)
                }
                Ok(false) => {
                    println!("connected");
                    Ok(ExitCode::from(1))
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::Equivalent { file1, file2 } => {
            let g1 = read_graph(&file1)?;
            let g2 = read_graph(&file2)?;
            match markov_equivalent(&g1, &g2) {
                Ok(rep) if rep.equivalent => {
                    println!("equivalent");
                    Ok(ExitCode::SUCCESS)
                }
                Ok(rep) => {
                    if let Some((a, b)) = rep.skeleton_mismatch {
                        println!("not equivalent: skeleton edge {a}-{b} in one graph only");
                    } else if let Some(((a, b), o)) = rep.collision_mismatch {
                        println!("not equivalent: collision V ({a},{o},{b}) in one graph only");
                    }
                    Ok(ExitCode::from(1))
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::Classify { file } => {
            let g = read_graph(&file)?;
            let r = classify(&g);
            println!("dag_orientable: {}", r.dag_orientable);
            println!("concentration_equivalent: {}", r.concentration_equivalent);
            println!("covariance_equivalent: {}", r.covariance_equivalent);
            println!("cov_con_equivalent: {}", r.cov_con_equivalent);
            println!("amp_same_components: {}", r.amp_same_components);
            println!("lwf_same_components: {}", r.lwf_same_components);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Orient { file, trace } => {
            let g = read_graph(&file)?;
            match orient_to_dag(&g) {
                Ok(res) => {
                    if trace {
                        for line in res.trace(&g) {
                            eprintln!("{line}");
                        }
                    }
                    print!("{}", io::serialize(&res.dag));
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("{e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::GaussianCheck { file, seed, draws, tol_zero, tol_nonzero } => {
            let g = read_graph(&file)?;
            // exercise the full pipeline so parameter problems surface early
            let p = sample_parameters(&g, seed);
            if let Err(e) = implied_covariance(&p, &g) {
                eprintln!("error: {e}");
                return Ok(ExitCode::from(1));
            }
            match faithfulness_check(&g, seed, draws, tol_zero, tol_nonzero) {
                Ok(rep) => {
                    print!("{}", rep.to_text(&g));
                    if rep.sound() {
                        Ok(ExitCode::SUCCESS)
                    } else {
                        Ok(ExitCode::from(1))
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}
