//! Command-line driver. Exit status 0 for a decided result (NoDescent
//! included), 1 for bad input or a failed `verify`, 2 for internal failures.

use std::ffi::OsString;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use super::parse::{parse_polynomial, parse_problem_source};
use super::report::{parse_stored_result, Certificates, Report};
use crate::descent::{analyze, dominance_check, minimal_polynomial, regular_promotion, DescentProblem, DescentResult};
use crate::error::{Error, Result};
use crate::groebner::buchberger;
use crate::poly::{MonomialOrder, PolyRing};
use crate::verify::{
    fibre_witness_search, minimal_polynomial_certificate, sample_certificate, symbolic_certificate, SampleBudget,
    DEFAULT_BOX,
};

const DEFAULT_WITNESS_BUDGET: u64 = 10_000;

#[derive(Parser, Debug)]
#[command(
    name = "fibre-descent",
    version,
    about = "Decide whether a polynomial map factors through another"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Monomial order for `gb` and `nf`.
    #[arg(long, global = true, value_enum, default_value_t = OrderArg::Grevlex)]
    order: OrderArg,

    /// Evaluate the result at points of X: a point count, or `all` over F_p.
    #[arg(long = "check-samples", global = true, value_parser = parse_budget)]
    check_samples: Option<SampleBudget>,

    /// Points visited when looking for a fibre on which f is not constant.
    #[arg(long = "witness-budget", global = true, default_value_t = DEFAULT_WITNESS_BUDGET)]
    witness_budget: u64,

    /// Half-width of the integer sampling box in characteristic 0.
    #[arg(long = "box", global = true, default_value_t = DEFAULT_BOX)]
    box_bound: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide descent of f through phi.
    Descend { problem: PathBuf },
    /// Minimal polynomial of each component of f over k(Y).
    Minpoly { problem: PathBuf },
    /// Reduced Groebner basis of the ideal of X, or of the graph of phi.
    Gb {
        problem: PathBuf,
        #[arg(long)]
        graph: bool,
    },
    /// Normal form of a polynomial modulo the ideal of X (or the graph of phi).
    Nf {
        problem: PathBuf,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        graph: bool,
    },
    /// Re-check a stored JSON result against a problem.
    Verify { problem: PathBuf, result: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OrderArg {
    Lex,
    Grevlex,
}

impl From<OrderArg> for MonomialOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Lex => MonomialOrder::Lex,
            OrderArg::Grevlex => MonomialOrder::Grevlex,
        }
    }
}

fn parse_budget(s: &str) -> std::result::Result<SampleBudget, String> {
    if s == "all" {
        return Ok(SampleBudget::Exhaustive);
    }
    match s.parse::<u64>() {
        Ok(0) => Err("the sample count must be positive".into()),
        Ok(n) => Ok(SampleBudget::Points(n)),
        Err(_) => Err(format!("expected a point count or `all`, got `{s}`")),
    }
}

/// Errors tagged with the file they came from.
struct Failure {
    file: Option<PathBuf>,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { file: None, error }
    }
}

fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |error| Failure {
        file: Some(path.to_path_buf()),
        error,
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        file: Some(path.to_path_buf()),
        error: Error::usage(format!("cannot read file: {e}")),
    })
}

fn load(path: &Path) -> std::result::Result<DescentProblem, Failure> {
    let text = read(path)?;
    Ok(parse_problem_source(&text).map_err(in_file(path))?.problem)
}

/// Runs the command line `args` (program name first), writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| dispatch(&cli)));
    match outcome {
        Ok(Ok((text, code))) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Ok(Err(Failure { file, error })) => {
            let prefix = file.map(|f| format!("{}:", f.display())).unwrap_or_default();
            let sep = if matches!(error, Error::Parse { .. }) || prefix.is_empty() {
                ""
            } else {
                " "
            };
            let _ = writeln!(err, "error: {prefix}{sep}{error}");
            if matches!(error, Error::Internal(_)) {
                2
            } else {
                1
            }
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| panic.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            let _ = writeln!(err, "internal error: {msg}");
            2
        }
    }
}

type Outcome = std::result::Result<(String, i32), Failure>;

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Descend { problem } => descend(cli, &load(problem)?),
        Command::Minpoly { problem } => minpoly(cli, &load(problem)?),
        Command::Gb { problem, graph } => gb(cli, &load(problem)?, *graph),
        Command::Nf { problem, poly, graph } => nf(cli, &load(problem)?, poly, *graph),
        Command::Verify { problem, result } => verify(cli, &load(problem)?, result),
    }
}

/// Builds the full report for `problem`.
pub fn build_report(
    problem: &DescentProblem,
    samples: Option<SampleBudget>,
    witness_budget: u64,
    box_bound: u32,
) -> Result<Report> {
    if !dominance_check(problem)? {
        return Ok(Report {
            dominant: false,
            result: None,
            minimal_polynomials: Vec::new(),
            certificates: Certificates {
                symbolic: false,
                samples: None,
            },
            witness: None,
            witness_budget: 0,
            non_regular_locus: None,
        });
    }
    let descent = analyze(problem)?;
    let result = descent.result;
    let (symbolic, samples, witness) = match &result {
        DescentResult::NoDescent { component, certificate } => {
            let symbolic = minimal_polynomial_certificate(problem, *component, certificate)?;
            let witness = fibre_witness_search(problem, witness_budget, box_bound)?;
            (symbolic, None, witness)
        }
        _ => {
            let symbolic = symbolic_certificate(problem, &result)?;
            let samples = samples
                .map(|b| sample_certificate(problem, &result, b, box_bound))
                .transpose()?;
            (symbolic, samples, None)
        }
    };
    Ok(Report {
        dominant: true,
        non_regular_locus: regular_promotion(&result).non_regular_locus,
        result: Some(result),
        minimal_polynomials: descent.minimal_polynomials,
        certificates: Certificates { symbolic, samples },
        witness,
        witness_budget,
    })
}

fn descend(cli: &Cli, problem: &DescentProblem) -> Outcome {
    let report = build_report(problem, cli.check_samples, cli.witness_budget, cli.box_bound)?;
    let text = if cli.json {
        report.to_json()
    } else {
        report.to_text(problem)
    };
    let samples_ok = report.certificates.samples.as_ref().is_none_or(|s| s.passed());
    let code = if !report.dominant {
        1
    } else if !report.certificates.symbolic || !samples_ok {
        // the engine's own answer failed its certificate
        2
    } else {
        0
    };
    Ok((text, code))
}

fn minpoly(cli: &Cli, problem: &DescentProblem) -> Outcome {
    let mus = (0..problem.components())
        .map(|i| minimal_polynomial(problem, i).map(|mu| mu.render()))
        .collect::<Result<Vec<_>>>()?;
    let text = if cli.json {
        pretty(&json!({ "minimal_polynomials": mus }))
    } else {
        mus.iter()
            .enumerate()
            .map(|(i, mu)| format!("f{}: {mu}\n", i + 1))
            .collect()
    };
    Ok((text, 0))
}

fn working_ring(
    problem: &DescentProblem,
    graph: bool,
    order: MonomialOrder,
) -> Result<(
    std::sync::Arc<PolyRing<crate::arith::FieldSpec>>,
    Vec<crate::poly::Poly>,
)> {
    let gens = if graph {
        problem.graph_generators()?
    } else {
        problem.ideal().to_vec()
    };
    let ring = match gens.first() {
        Some(g) => g.ring().with_order(order)?,
        None => problem.source().with_order(order)?,
    };
    let gens = gens.iter().map(|g| g.in_ring(&ring)).collect::<Result<Vec<_>>>()?;
    Ok((ring, gens))
}

fn order_name(order: OrderArg) -> &'static str {
    match order {
        OrderArg::Lex => "lex",
        OrderArg::Grevlex => "grevlex",
    }
}

fn gb(cli: &Cli, problem: &DescentProblem, graph: bool) -> Outcome {
    let (ring, gens) = working_ring(problem, graph, cli.order.into())?;
    let basis = buchberger(&ring, &gens, ring.order())?;
    let rendered: Vec<String> = basis.generators().iter().map(|g| g.render()).collect();
    let text = if cli.json {
        pretty(&json!({ "order": order_name(cli.order), "basis": rendered }))
    } else if rendered.is_empty() {
        "0\n".to_string()
    } else {
        rendered.iter().map(|g| format!("{g}\n")).collect()
    };
    Ok((text, 0))
}

fn nf(cli: &Cli, problem: &DescentProblem, poly: &str, graph: bool) -> Outcome {
    let (ring, gens) = working_ring(problem, graph, cli.order.into())?;
    let p = parse_polynomial(poly, &ring).map_err(|e| Error::usage(format!("--poly: {e}")))?;
    let basis = buchberger(&ring, &gens, ring.order())?;
    let r = basis.normal_form(&p)?.render();
    let text = if cli.json {
        pretty(&json!({ "order": order_name(cli.order), "normal_form": r }))
    } else {
        format!("{r}\n")
    };
    Ok((text, 0))
}

fn verify(cli: &Cli, problem: &DescentProblem, result: &Path) -> Outcome {
    let stored = parse_stored_result(&read(result)?, problem).map_err(in_file(result))?;
    if !stored.minimal_polynomials.is_empty() && stored.minimal_polynomials.len() != problem.components() {
        return Err(in_file(result)(Error::usage(format!(
            "{} minimal polynomials for {} components",
            stored.minimal_polynomials.len(),
            problem.components()
        ))));
    }
    let (symbolic, samples) = match &stored.result {
        DescentResult::NoDescent { .. } => {
            let mut ok = true;
            for (i, mu) in stored.minimal_polynomials.iter().enumerate() {
                ok &= minimal_polynomial_certificate(problem, i, mu)?;
            }
            (ok, None)
        }
        r => {
            let samples = cli
                .check_samples
                .map(|b| sample_certificate(problem, r, b, cli.box_bound))
                .transpose()?;
            (symbolic_certificate(problem, r)?, samples)
        }
    };
    let passed = symbolic && samples.as_ref().is_none_or(|s| s.passed());
    let text = if cli.json {
        let samples = samples.as_ref().map(|s| {
            json!({
                "tested": s.points_tested,
                "skipped": s.points_skipped_denominator_zero,
                "mismatches": s.mismatches.len(),
            })
        });
        pretty(&json!({
            "status": stored.result.status(),
            "verified": passed,
            "symbolic": symbolic,
            "samples": samples,
        }))
    } else {
        let mut t = format!(
            "status: {}\nsymbolic: {}\n",
            stored.result.status(),
            if symbolic { "pass" } else { "fail" }
        );
        if let Some(s) = &samples {
            t.push_str(&format!(
                "samples: {} tested, {} skipped, {} mismatches\n",
                s.points_tested,
                s.points_skipped_denominator_zero,
                s.mismatches.len()
            ));
        }
        t.push_str(if passed { "verified\n" } else { "NOT verified\n" });
        t
    };
    Ok((text, if passed { 0 } else { 1 }))
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}
