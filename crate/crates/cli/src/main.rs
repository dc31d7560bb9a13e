mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skewfrac::demo::DemoOptions;
use skewfrac::Error;

use commands::EndoArgs;
use report::Report;

const GRAMMAR: &str = "expressions: E := E + E | E - E | E * E | inv(E) | (E) | scalar*[word]; \
words: (a,b) or x^2.y^-1 for vector groups, a.B for free groups, s1.S2 for braids";

#[derive(Parser)]
#[command(name = "skewfrac", version, about = "Exact series arithmetic over twisted group rings of ordered groups")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GroupArg {
    /// Group and twist configuration (JSON).
    #[arg(long)]
    group: PathBuf,
}

#[derive(Args)]
struct EndoFlags {
    #[command(flatten)]
    g: GroupArg,
    /// Columns are truncated below this group element.
    #[arg(long)]
    target: Option<String>,
    /// Radius of the certification window.
    #[arg(long)]
    window: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check normalization, action and cocycle identities on a ball of samples.
    VerifyCocycle {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Compare two group elements in the configured order.
    OrderCompare {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Search for n with a b < (b a)^n.
    ConradTest {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 64)]
        nmax: u64,
    },
    /// Invert an expression into a truncated series.
    Invert {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        expr: String,
        /// One rational per tower level.
        #[arg(long, value_delimiter = ',')]
        frontier: Vec<String>,
    },
    /// Evaluate a rational expression into a truncated series.
    Eval {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        expr: String,
        #[arg(long, value_delimiter = ',')]
        frontier: Vec<String>,
    },
    /// Left representation of an expression's value.
    LeftRepr {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        expr: String,
        #[arg(long, value_delimiter = ',')]
        frontier: Vec<String>,
    },
    /// Common left multiple of two skew polynomials; coefficients lowest degree first, `;`-separated.
    OreWitness {
        /// rational, doubling or magnus.
        #[arg(long, default_value = "rational")]
        ring: String,
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Apply the endomorphism of an expression to a basis monomial.
    EndoApply {
        #[command(flatten)]
        e: EndoFlags,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "e")]
        at: String,
    },
    /// Certify and invert the endomorphism of an expression.
    EndoInvert {
        #[command(flatten)]
        e: EndoFlags,
        #[arg(long)]
        expr: String,
    },
    /// v-compatibility and surjectivity on the window.
    VcompatCheck {
        #[command(flatten)]
        e: EndoFlags,
        #[arg(long)]
        expr: String,
    },
    /// Independence of d_i(x_{h_i}) over distinct cosets of N.
    HughesCheck {
        #[command(flatten)]
        e: EndoFlags,
        /// N is the subgroup of vectors supported on the first `n` coordinates.
        #[arg(long)]
        n: usize,
        /// `;`-separated coset representatives.
        #[arg(long)]
        h: String,
        /// `;`-separated expressions.
        #[arg(long)]
        exprs: String,
    },
    /// Bounded-degree independence of powers of x_h.
    TranscendenceCheck {
        #[command(flatten)]
        e: EndoFlags,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = 6)]
        degree: usize,
        #[arg(long)]
        exprs: String,
    },
    /// Braid group demonstration.
    B3Demo {
        #[arg(long, default_value_t = 10)]
        ball: usize,
        #[arg(long, default_value_t = 5)]
        pairs: usize,
        #[arg(long, default_value_t = 64)]
        nmax: u64,
        #[arg(long, default_value_t = 8)]
        degree: usize,
    },
}

fn endo_args(e: &EndoFlags) -> EndoArgs<'_> {
    EndoArgs { group_path: e.g.group.to_str().unwrap_or("?"), target: e.target.as_deref(), window: e.window }
}

fn dispatch(cmd: &Cmd) -> skewfrac::Result<Report> {
    let path = |g: &GroupArg| g.group.to_string_lossy().into_owned();
    match cmd {
        Cmd::VerifyCocycle { g, radius } => commands::verify_cocycle(&commands::load(&g.group)?, &path(g), *radius),
        Cmd::OrderCompare { g, a, b } => commands::order_compare(&commands::load(&g.group)?, &path(g), a, b),
        Cmd::ConradTest { g, a, b, nmax } => commands::conrad_test(&commands::load(&g.group)?, &path(g), a, b, *nmax),
        Cmd::Invert { g, expr, frontier } => {
            commands::eval_cmd(&commands::load(&g.group)?, &path(g), "invert", expr, frontier, true)
        }
        Cmd::Eval { g, expr, frontier } => {
            commands::eval_cmd(&commands::load(&g.group)?, &path(g), "eval", expr, frontier, false)
        }
        Cmd::LeftRepr { g, expr, frontier } => commands::left_repr_cmd(&commands::load(&g.group)?, &path(g), expr, frontier),
        Cmd::OreWitness { ring, degree, a, b } => commands::ore_witness(ring, *degree, a, b),
        Cmd::EndoApply { e, expr, at } => commands::endo_apply(&commands::load(&e.g.group)?, &endo_args(e), expr, at),
        Cmd::EndoInvert { e, expr } => commands::endo_invert(&commands::load(&e.g.group)?, &endo_args(e), expr),
        Cmd::VcompatCheck { e, expr } => commands::vcompat_check(&commands::load(&e.g.group)?, &endo_args(e), expr),
        Cmd::HughesCheck { e, n, h, exprs } => {
            commands::hughes_check(&commands::load(&e.g.group)?, &endo_args(e), *n, h, exprs)
        }
        Cmd::TranscendenceCheck { e, n, h, degree, exprs } => {
            commands::transcendence_check(&commands::load(&e.g.group)?, &endo_args(e), *n, h, *degree, exprs)
        }
        Cmd::B3Demo { ball, pairs, nmax, degree } => commands::b3_demo_cmd(DemoOptions {
            ball_radius: *ball,
            pair_radius: *pairs,
            conrad_bound: *nmax,
            magnus_degree: *degree,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.cmd) {
        Ok(report) => {
            let text = report.render();
            match &cli.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &text) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ (Error::Parse(_) | Error::Config(_))) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Parse(_)) {
                eprintln!("hint: {GRAMMAR}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
