//! Command-line front end for `plucking-core`.
//!
//! [`run`] does all the work and returns the exit code and both output
//! streams, so tests can drive commands without spawning a process.
//!
//! Exit codes: 0 success, 1 negative answer (not equal, unrealizable, move
//! does not apply, ...), 2 usage or parse error, 3 internal inconsistency.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use plucking_core::enumerate::{
    classify_by_polynomial, generate_trees, verify_prop25, verify_theorem12,
};
use plucking_core::moves::{
    exchange_orbit, find_permutation_move, CertificateError, FindMoveError, MoveCertificate,
    DEFAULT_ORBIT_CAP,
};
use plucking_core::plucking::{
    plucking_polynomial, plucking_polynomial_verified, quotient_fraction, Method,
};
use plucking_core::realize::{
    binomial_product, necessary_conditions, realize_binomial_product, realize_multiset,
    theorem52_decide, CandidateMultiset, RealizeError,
};
use plucking_core::tree::PlaneTree;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn negative(stdout: String) -> Self {
        CommandResult {
            code: EXIT_NEGATIVE,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        CommandResult {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {}\n", message.into()),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        CommandResult {
            code: EXIT_INTERNAL,
            stdout: String::new(),
            stderr: format!("internal error: {}\n", message.into()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "plucking",
    version,
    about = "Plucking polynomials of rooted trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Recursive,
    Product,
    Quotient,
    /// All three, failing unless they agree.
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Coeffs,
    Factored,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Plucking polynomial of a tree.
    Poly {
        /// Tree text such as "(()())", or @path to read it from a file.
        tree: String,
        #[arg(long, value_enum, default_value = "quotient")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "both")]
        format: Format,
    },
    /// Whether two trees have the same plucking polynomial.
    Equal { a: String, b: String },
    /// All trees reachable by exchange moves.
    Orbit {
        tree: String,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        cap: usize,
    },
    /// A single permutation move taking A to B.
    FindMove {
        a: String,
        b: String,
        /// Write the certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replays a move certificate on a tree.
    ApplyMove { tree: String, certificate: PathBuf },
    /// A tree with a given descendant multiset or binomial product.
    Realize {
        /// Comma-separated descendant counts, e.g. 0,0,2.
        multiset: Option<String>,
        /// Semicolon-separated pairs m,n each standing for binom(m+n; m, n)_q.
        #[arg(long, conflicts_with = "multiset")]
        binomials: Option<String>,
        /// Also decide via binomial products and check both answers agree.
        #[arg(long)]
        certify: bool,
    },
    /// Every tree with a given edge count.
    Enumerate {
        #[arg(long)]
        edges: usize,
        /// Group the trees by plucking polynomial.
        #[arg(long)]
        classify: bool,
        /// Check that polynomial and descendant classes coincide and that
        /// every collision is one permutation move.
        #[arg(long)]
        verify: bool,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandResult {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandResult::ok(text)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(r) | Err(r) => r,
    }
}

type Outcome = Result<CommandResult, CommandResult>;

fn read_tree(arg: &str) -> Result<PlaneTree, CommandResult> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CommandResult::usage(format!("cannot read {path}: {e}")))?,
        None => arg.to_string(),
    };
    text.trim()
        .parse()
        .map_err(|e| CommandResult::usage(format!("bad tree {arg:?}: {e}")))
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Poly {
            tree,
            method,
            format,
        } => cmd_poly(&read_tree(&tree)?, method, format),
        Command::Equal { a, b } => cmd_equal(&read_tree(&a)?, &read_tree(&b)?),
        Command::Orbit { tree, cap } => cmd_orbit(&read_tree(&tree)?, cap),
        Command::FindMove { a, b, out } => cmd_find_move(&read_tree(&a)?, &read_tree(&b)?, out),
        Command::ApplyMove { tree, certificate } => {
            cmd_apply_move(&read_tree(&tree)?, &certificate)
        }
        Command::Realize {
            multiset,
            binomials,
            certify,
        } => match (multiset, binomials) {
            (_, Some(list)) => cmd_realize_binomials(&list),
            (Some(text), None) => cmd_realize_multiset(&text, certify),
            (None, None) => Err(CommandResult::usage("give a multiset or --binomials")),
        },
        Command::Enumerate {
            edges,
            classify,
            verify,
        } => cmd_enumerate(edges, classify, verify),
    }
}

fn cmd_poly(t: &PlaneTree, method: MethodArg, format: Format) -> Outcome {
    let poly = match method {
        MethodArg::Recursive => plucking_polynomial(t, Method::Recursive),
        MethodArg::Product => plucking_polynomial(t, Method::Product),
        MethodArg::Quotient => plucking_polynomial(t, Method::Quotient),
        MethodArg::All => {
            plucking_polynomial_verified(t).map_err(|e| CommandResult::internal(e.to_string()))?
        }
    };
    let mut out = String::new();
    if format != Format::Factored {
        writeln!(out, "coeffs: {poly}").unwrap();
    }
    if format != Format::Coeffs {
        writeln!(out, "factored: {}", quotient_fraction(t)).unwrap();
    }
    Ok(CommandResult::ok(out))
}

fn cmd_equal(a: &PlaneTree, b: &PlaneTree) -> Outcome {
    let da = a.reduce().0.descendant_multiset();
    let db = b.reduce().0.descendant_multiset();
    let same = da == db;
    let mut out = String::from(if same { "equal\n" } else { "not-equal\n" });
    writeln!(out, "d-a: {da}").unwrap();
    writeln!(out, "d-b: {db}").unwrap();
    Ok(if same {
        CommandResult::ok(out)
    } else {
        CommandResult::negative(out)
    })
}

fn cmd_orbit(t: &PlaneTree, cap: usize) -> Outcome {
    match exchange_orbit(t, cap) {
        Ok(members) => {
            let mut out = format!("orbit-size: {}\n", members.len());
            for m in members {
                writeln!(out, "member: {m}").unwrap();
            }
            Ok(CommandResult::ok(out))
        }
        Err(e) => Ok(CommandResult::negative(format!(
            "orbit-overflow: {}\nexplored: {}\n",
            e.cap,
            e.explored.len()
        ))),
    }
}

fn cmd_find_move(a: &PlaneTree, b: &PlaneTree, out: Option<PathBuf>) -> Outcome {
    let cert = match find_permutation_move(a, b) {
        Ok(cert) => cert,
        Err(FindMoveError::NotEquivalent { a, b }) => {
            return Ok(CommandResult::negative(format!(
                "not-equivalent\nd-a: {a}\nd-b: {b}\n"
            )))
        }
        Err(e) => return Err(CommandResult::internal(e.to_string())),
    };
    let text = cert.to_string();
    let mut stdout = text.clone();
    if let Some(path) = out {
        std::fs::write(&path, &text)
            .map_err(|e| CommandResult::usage(format!("cannot write {}: {e}", path.display())))?;
        writeln!(stdout, "certificate: {}", path.display()).unwrap();
    }
    Ok(CommandResult::ok(stdout))
}

fn cmd_apply_move(t: &PlaneTree, path: &PathBuf) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandResult::usage(format!("cannot read {}: {e}", path.display())))?;
    let cert: MoveCertificate = text
        .parse()
        .map_err(|e: CertificateError| CommandResult::usage(e.to_string()))?;
    match cert.apply(t) {
        Ok(result) => Ok(CommandResult::ok(format!(
            "result: {result}\ncanonical: {}\n",
            result.canonical_code()
        ))),
        Err(CertificateError::Move(violations)) => {
            let mut out = String::from("move-invalid\n");
            for line in violations.lines() {
                writeln!(out, "violation: {line}").unwrap();
            }
            Ok(CommandResult::negative(out))
        }
        Err(e) => Ok(CommandResult::negative(format!(
            "move-invalid\nviolation: {e}\n"
        ))),
    }
}

fn unrealizable(reason: &str, extra: &str) -> CommandResult {
    CommandResult::negative(format!("unrealizable: {reason}\n{extra}"))
}

fn cmd_realize_multiset(text: &str, certify: bool) -> Outcome {
    let c: CandidateMultiset = text
        .parse()
        .map_err(|e: RealizeError| CommandResult::usage(e.to_string()))?;
    let mut violations = String::new();
    for v in necessary_conditions(&c) {
        writeln!(violations, "violates: {v}").unwrap();
    }
    if certify {
        let decision = theorem52_decide(&c).map_err(|e| CommandResult::internal(e.to_string()))?;
        let fraction = decision.fraction.map(|f| f.to_string()).unwrap_or_default();
        return Ok(match (decision.tree, decision.factors) {
            (Some(tree), Some(factors)) => {
                let pairs: Vec<String> = factors.iter().map(|(m, n)| format!("{m},{n}")).collect();
                CommandResult::ok(format!(
                    "tree: {tree}\nd: {c}\nfraction: {fraction}\nfactors: {}\n",
                    pairs.join(";")
                ))
            }
            _ => unrealizable(
                decision.reason.as_deref().unwrap_or("unknown"),
                &format!("{violations}fraction: {fraction}\nbinomial-product: no\n"),
            ),
        });
    }
    match realize_multiset(&c) {
        Ok(tree) => Ok(CommandResult::ok(format!("tree: {tree}\nd: {c}\n"))),
        Err(RealizeError::Unrealizable(reason)) => Ok(unrealizable(&reason, &violations)),
        Err(e) => Err(CommandResult::internal(e.to_string())),
    }
}

fn parse_binomials(list: &str) -> Result<Vec<(u32, u32)>, CommandResult> {
    list.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let bad = || CommandResult::usage(format!("bad binomial {pair:?}, expected m,n"));
            let (m, n) = pair.split_once(',').ok_or_else(bad)?;
            Ok((
                m.trim().parse().map_err(|_| bad())?,
                n.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

fn cmd_realize_binomials(list: &str) -> Outcome {
    let factors = parse_binomials(list)?;
    match realize_binomial_product(&factors) {
        Ok(tree) => Ok(CommandResult::ok(format!(
            "tree: {tree}\nd: {}\ncoeffs: {}\nfactored: {}\n",
            tree.descendant_multiset(),
            binomial_product(&factors),
            quotient_fraction(&tree)
        ))),
        Err(RealizeError::Unrealizable(reason)) => Ok(unrealizable(&reason, "")),
        Err(e) => Err(CommandResult::internal(e.to_string())),
    }
}

fn cmd_enumerate(edges: usize, classify: bool, verify: bool) -> Outcome {
    let usage = |e: plucking_core::enumerate::EnumerateError| CommandResult::usage(e.to_string());
    let mut out = String::new();
    let mut negative = false;
    if classify {
        let report = classify_by_polynomial(edges).map_err(usage)?;
        out.push_str(&report.to_string());
    }
    if verify {
        let p = verify_prop25(edges).map_err(usage)?;
        let t = verify_theorem12(edges).map_err(usage)?;
        let word = |b: bool| if b { "ok" } else { "FAILED" };
        writeln!(out, "prop25: {}, theorem12: {}", word(p), word(t)).unwrap();
        negative = !(p && t);
    }
    if !classify && !verify {
        let trees = generate_trees(edges).map_err(usage)?;
        writeln!(out, "trees: {}", trees.len()).unwrap();
        for t in trees {
            writeln!(out, "tree: {t}").unwrap();
        }
    }
    Ok(if negative {
        CommandResult::negative(out)
    } else {
        CommandResult::ok(out)
    })
}
