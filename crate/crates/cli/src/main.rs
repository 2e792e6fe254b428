//! `pgwitness`: batch front end for the checkers in `pgroup-witness`.
//!
//! Every command prints one report to stdout and exits 0 exactly when all of
//! its assertions passed. Diagnostics go to stderr.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use pgroup_witness::arith::power_exponent_report;
use pgroup_witness::dpoly::{
    d_poly_recurrence_check, module_recurrence_check, nilpotent_independence_suite,
    tower_induction_check, IdentityReport, IndependenceSuiteReport,
};
use pgroup_witness::groups::Limits;
use pgroup_witness::metacyclic::{
    cr_quotient_check, verify_metacyclic_structure, CrReport, MetacyclicParams, StructureReport,
};
use pgroup_witness::obstruction::{
    check_thm_1, check_thm_filtration, check_thm_l_less_m, check_thm_t, sweep, sweep_tail,
    GridSpec, RelationShape, Theorem, YAssignment,
};
use pgroup_witness::selftest;
use pgroup_witness::unipotent::{
    congruence_check, lcs_vanishing_check, witness_group_check, CongruenceReport,
    LcsVanishingReport, WitnessGroupSpec, WitnessReport,
};
use pgroup_witness::words::Alphabet;
use pgroup_witness::Error;

const SCHEMA: &str = "1";
const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "pgwitness",
    version,
    about = "Exact finite p-group witnesses for obstructed relation shapes"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Largest group the enumeration engine will build.
    #[arg(
        long,
        env = "PGWITNESS_MAX_ORDER",
        default_value_t = 1_000_000,
        global = true
    )]
    max_order: usize,

    /// Seed for every sampled check.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure of the metacyclic group G(a,m).
    Metacyclic {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        /// Also check the quotient with this many tau generators.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// The unipotent witness group <X, Y> inside U_{k+2}(F_p).
    Unipotent {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        /// Run the congruence check (needs k = p - 1).
        #[arg(long)]
        congruence: bool,
        /// Also check the lower central series of the full group U_n.
        #[arg(long)]
        full_n: Option<usize>,
        /// Samples for the U_n check when it is too large to enumerate.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// D_i polynomial identities, the group-ring recurrence and nilpotent orbits.
    Dpoly {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 20)]
        max_dim: usize,
    },
    /// Solve (1 + p^k u)^v = 1 + p^k in Z_p to precision N.
    Padic {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        u: i64,
        #[arg(long = "n", default_value_t = 12)]
        precision: u32,
    },
    /// Witness that a relation shape cannot hold.
    Obstruct(ObstructArgs),
    /// Run the matching checker over a parameter grid.
    Sweep {
        /// For example `thm=1,T;p=3,5;k=1..2;m=2..4;l=1..3;u=1,2;w=0,1`.
        #[arg(long, default_value = "")]
        grid: String,
    },
    /// Run the full acceptance grid.
    Selftest,
}

#[derive(Args, Debug)]
struct ObstructArgs {
    /// One of l<m, 1, T, filtration (a `thm` or `thm:` prefix is accepted).
    theorem: String,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    u: Option<i64>,
    /// Relation over x, y1, y2, ...; defaults to x^{p^l u} followed by a stock tail.
    #[arg(long)]
    relation: Option<String>,
    /// Case 2 of the T theorem: x acts through sigma^w.
    #[arg(long)]
    w: Option<u64>,
    /// Exponents c_i for y_i -> sigma^{c_i}.
    #[arg(long, value_delimiter = ',')]
    y: Option<Vec<u64>>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'static str,
    passed: bool,
    report: &'a T,
}

#[derive(Serialize)]
struct MetacyclicOutput {
    structure: StructureReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient: Option<CrReport>,
}

#[derive(Serialize)]
struct UnipotentOutput {
    witness: WitnessReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    congruence: Option<CongruenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    full_group: Option<LcsVanishingReport>,
}

#[derive(Serialize)]
struct DpolyOutput {
    recurrence: IdentityReport,
    module: IdentityReport,
    tower: Vec<IdentityReport>,
    independence: IndependenceSuiteReport,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(passed) if passed => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("pgwitness: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    if cli.max_order == 0 {
        return Err(Error::InvalidParameter(
            "--max-order must be positive".into(),
        ));
    }
    let limits = Limits::with_max_order(cli.max_order);
    match &cli.command {
        Command::Metacyclic { p, k, m, rank } => {
            let structure =
                verify_metacyclic_structure(MetacyclicParams::new(*p, *k, *m)?, &limits)?;
            let quotient = rank
                .map(|r| cr_quotient_check(*p, *k, *m, r, &limits))
                .transpose()?;
            let passed = structure.passed() && quotient.as_ref().is_none_or(CrReport::passed);
            emit(
                cli.format,
                "metacyclic",
                passed,
                &MetacyclicOutput {
                    structure,
                    quotient,
                },
            )
        }
        Command::Unipotent {
            p,
            k,
            congruence,
            full_n,
            samples,
        } => {
            let witness = witness_group_check(&WitnessGroupSpec::new(*p, *k)?, &limits)?;
            let congruence = if *congruence {
                if *k as u64 + 1 != *p {
                    return Err(Error::InvalidParameter(format!(
                        "--congruence needs k = p - 1, got k = {k}"
                    )));
                }
                Some(congruence_check(*p, cli.seed, &limits)?)
            } else {
                None
            };
            let full_group = full_n
                .map(|n| lcs_vanishing_check(n, *p, cli.seed, *samples, &limits))
                .transpose()?;
            let passed = witness.passed()
                && congruence.as_ref().is_none_or(CongruenceReport::passed)
                && full_group.as_ref().is_none_or(|r| r.passed);
            emit(
                cli.format,
                "unipotent",
                passed,
                &UnipotentOutput {
                    witness,
                    congruence,
                    full_group,
                },
            )
        }
        Command::Dpoly {
            p,
            instances,
            max_dim,
        } => {
            let recurrence = d_poly_recurrence_check(*p)?;
            let module = module_recurrence_check(*p)?;
            let mut tower = Vec::new();
            for i in 1..*p {
                for n in 1..=*p {
                    tower.push(tower_induction_check(*p, i, n)?);
                }
            }
            let independence = nilpotent_independence_suite(*p, *max_dim, *instances, cli.seed)?;
            let passed = recurrence.passed()
                && module.passed()
                && tower.iter().all(IdentityReport::passed)
                && independence.passed;
            emit(
                cli.format,
                "dpoly",
                passed,
                &DpolyOutput {
                    recurrence,
                    module,
                    tower,
                    independence,
                },
            )
        }
        Command::Padic { p, k, u, precision } => {
            let report = power_exponent_report(*p, *k, *u, *precision)?;
            emit(cli.format, "padic", report.passed(), &report)
        }
        Command::Obstruct(args) => {
            let report = obstruct(args, cli.seed, &limits)?;
            emit(cli.format, "obstruct", report.passed(), &report)
        }
        Command::Sweep { grid } => {
            let report = sweep(&GridSpec::parse(grid)?, cli.seed, &limits);
            emit(cli.format, "sweep", report.passed(), &report)
        }
        Command::Selftest => {
            let report = selftest::run_all(cli.seed, &limits);
            emit(cli.format, "selftest", report.passed(), &report)
        }
    }
}

fn required<T: Copy>(value: Option<T>, flag: &str, theorem: Theorem) -> Result<T, Error> {
    value.ok_or_else(|| Error::InvalidParameter(format!("theorem {theorem} needs --{flag}")))
}

/// Highest `yN` index mentioned in the relation text.
fn y_count(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut max = 0;
    for (i, _) in text.match_indices('y') {
        let before_ok = i == 0 || !(bytes[i - 1].is_ascii_alphanumeric() || bytes[i - 1] == b'_');
        let digits: String = text[i + 1..]
            .chars()
            .take_while(char::is_ascii_digit)
            .collect();
        if before_ok {
            if let Ok(n) = digits.parse::<usize>() {
                max = max.max(n);
            }
        }
    }
    max
}

fn obstruct(
    args: &ObstructArgs,
    seed: u64,
    limits: &Limits,
) -> Result<pgroup_witness::obstruction::WitnessReport, Error> {
    let theorem: Theorem = args.theorem.parse()?;
    let shape = match &args.relation {
        Some(text) => {
            let alphabet = Alphabet::standard(y_count(text).max(1));
            let shape = RelationShape::parse(text, &alphabet, args.p, theorem)?;
            for (flag, given, derived) in [
                ("l", args.l.map(i64::from), shape.l() as i64),
                ("u", args.u, shape.u()),
            ] {
                if given.is_some_and(|g| g != derived) {
                    return Err(Error::InvalidParameter(format!(
                        "--{flag} {} disagrees with the relation, which has {flag} = {derived}",
                        given.unwrap_or_default()
                    )));
                }
            }
            shape
        }
        None => {
            let alphabet = Alphabet::standard(2);
            let tail = pgroup_witness::words::parse_word(sweep_tail(theorem), &alphabet)?;
            RelationShape::new(
                alphabet,
                args.l.unwrap_or(1),
                args.u.unwrap_or(1),
                Some(tail),
                theorem.tag(),
            )?
        }
    };
    let assign = YAssignment {
        exponents: args.y.clone(),
        seed,
    };
    if args.w.is_some() && theorem != Theorem::T {
        return Err(Error::InvalidParameter(
            "--w only applies to theorem T".into(),
        ));
    }
    match theorem {
        Theorem::LessThanM => check_thm_l_less_m(args.p, required(args.m, "m", theorem)?, &shape),
        Theorem::One => check_thm_1(
            args.p,
            required(args.k, "k", theorem)?,
            required(args.m, "m", theorem)?,
            &shape,
            &assign,
        ),
        Theorem::T => check_thm_t(
            args.p,
            required(args.k, "k", theorem)?,
            required(args.m, "m", theorem)?,
            &shape,
            args.w.filter(|w| *w != 0),
            &assign,
        ),
        Theorem::Filtration => check_thm_filtration(
            args.p,
            required(args.k, "k", theorem)?,
            &shape,
            &assign,
            limits,
        ),
    }
}

fn emit<T: Serialize>(
    format: Format,
    command: &'static str,
    passed: bool,
    report: &T,
) -> Result<bool, Error> {
    let envelope = Envelope {
        schema: SCHEMA,
        command,
        passed,
        report,
    };
    let mut out = match format {
        Format::Json => serde_json::to_string_pretty(&envelope).expect("reports serialize"),
        Format::Text => {
            let value = serde_json::to_value(&envelope).expect("reports serialize");
            let mut s = String::new();
            render_text(&value, 0, &mut s);
            s
        }
    };
    out.push('\n');
    let mut stdout = io::stdout().lock();
    if let Err(e) = stdout
        .write_all(out.as_bytes())
        .and_then(|_| stdout.flush())
    {
        eprintln!("pgwitness: writing report: {e}");
    }
    if !passed {
        eprintln!("pgwitness: {command}: some assertions failed");
    }
    Ok(passed)
}

fn render_text(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                if is_scalar(v) {
                    out.push_str(&format!("{pad}{key}: {}\n", scalar(v)));
                } else {
                    out.push_str(&format!("{pad}{key}:\n"));
                    render_text(v, indent + 1, out);
                }
            }
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{pad}[{}]\n", joined.join(", ")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                out.push_str(&format!("{pad}- #{i}\n"));
                render_text(v, indent + 1, out);
            }
        }
        v => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_) | Value::Array(_))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}
