//! The `triality` command line, as a library so tests can drive it in-process.
//!
//! Exit codes: 0 when everything passes, 1 for a failed check or invalid
//! input data (non-antisymmetric matrix, disagreeing encodings), 2 for usage
//! errors, unreadable files and malformed JSON.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use so8_triality::exact::{Rational, SquareMatrix};
use so8_triality::invariants::{
    invariant_vector, sigma_transform_invariants, spectral_coefficients, t_matrix, InvariantVector,
};
use so8_triality::octonion::structure_constants;
use so8_triality::report::to_canonical_json;
use so8_triality::so8::{generators, quadruples, So8Element, DEFAULT_BOUND, DIM};
use so8_triality::triality::{
    identify_fixed_algebra, so7_fixed_subalgebra, FixedSubalgebra, SubalgebraTag, TrialityMap,
};
use so8_triality::verify::{run_verify, Suite, VerifyConfig};
use so8_triality::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "triality",
    version,
    about = "Exact checks of so(8) triality, g2 and their invariant polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suites.
    Verify,
    /// Evaluate p1, p2, p3, pf and e1..e4 of an element.
    Eval,
    /// Apply a power of sigma to an element.
    Sigma,
    /// Fixed subalgebras of sigma and of the outer involution.
    Fixed,
    /// Dump structure data as JSON.
    Dump,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Random samples per check.
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Random coefficients are drawn from [-bound, bound].
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND, value_parser = clap::value_parser!(i64).range(1..))]
    pub bound: i64,
    /// Element file: {"coeffs": [...28...]} and/or {"matrix": [[...8x8...]]}.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Power of sigma for `sigma`.
    #[arg(long, global = true, default_value_t = 1)]
    pub power: u64,
    /// Restrict `verify` to one suite: octonion, so8, triality, invariants.
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// JSON 4x4 matrix replacing the triality block (negative controls).
    #[arg(long, global = true)]
    pub block: Option<PathBuf>,
}

/// Captured result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

fn error_code(e: &Error) -> i32 {
    if e.is_invalid_data() {
        EXIT_FAILED
    } else {
        EXIT_USAGE
    }
}

/// Runs the command line `args`, where `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match dispatch(&cli) {
        Ok(out) => out,
        Err(out) => out,
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Outcome> {
    let o = &cli.options;
    match cli.command {
        Command::Verify => cmd_verify(o),
        Command::Eval => cmd_eval(o),
        Command::Sigma => cmd_sigma(o),
        Command::Fixed => cmd_fixed(o),
        Command::Dump => cmd_dump(),
    }
}

fn read_file(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path)
        .map_err(|e| Outcome::error(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))
}

fn load_element(o: &Options) -> Result<So8Element, Outcome> {
    let path = o
        .input
        .as_deref()
        .ok_or_else(|| Outcome::error(EXIT_USAGE, "--input PATH is required"))?;
    let text = read_file(path)?;
    So8Element::from_json(&text)
        .map_err(|e| Outcome::error(error_code(&e), format!("{}: {e}", path.display())))
}

fn load_map(o: &Options) -> Result<(TrialityMap, bool), Outcome> {
    let Some(path) = o.block.as_deref() else {
        return Ok((TrialityMap::standard().clone(), false));
    };
    let text = read_file(path)?;
    let malformed = |e: String| Outcome::error(EXIT_USAGE, format!("{}: {e}", path.display()));
    let rows: Vec<Vec<Rational>> =
        serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?;
    let block = SquareMatrix::from_rows(rows).map_err(|e| malformed(e.to_string()))?;
    if block.dim() != 4 {
        return Err(malformed(format!(
            "block must be 4x4, got {0}x{0}",
            block.dim()
        )));
    }
    let map = TrialityMap::from_block(block).map_err(|e| malformed(e.to_string()))?;
    Ok((map, true))
}

fn cmd_verify(o: &Options) -> Result<Outcome, Outcome> {
    let suite = o
        .suite
        .as_deref()
        .map(str::parse::<Suite>)
        .transpose()
        .map_err(|e| Outcome::error(EXIT_USAGE, e))?;
    let (map, custom_block) = load_map(o)?;
    let cfg = VerifyConfig {
        samples: o.samples as usize,
        seed: o.seed,
        bound: o.bound,
        suite,
        map,
        custom_block,
    };
    let report = run_verify(&cfg).map_err(|e| Outcome::error(EXIT_USAGE, e))?;
    let stdout = if o.json {
        report.to_json()
    } else {
        report.to_text()
    };
    let mut out = Outcome::ok(stdout);
    if !report.passed() {
        out.code = EXIT_FAILED;
        for c in report.checks.iter().filter(|c| c.status.is_failure()) {
            let detail = c
                .counterexample
                .as_ref()
                .map(Value::to_string)
                .unwrap_or_default();
            out.stderr
                .push_str(&format!("check {} failed: {detail}\n", c.check_id));
        }
    }
    Ok(out)
}

fn eval_json(m: &So8Element) -> Value {
    let v = invariant_vector(m);
    let e = spectral_coefficients(m);
    json!({
        "p1": v.p1.to_string(),
        "p2": v.p2.to_string(),
        "p3": v.p3.to_string(),
        "pf": v.pf.to_string(),
        "e1": e.e1.to_string(),
        "e2": e.e2.to_string(),
        "e3": e.e3.to_string(),
        "e4": e.e4.to_string(),
    })
}

fn as_text(v: &Value) -> String {
    let Value::Object(map) = v else {
        return format!("{v}\n");
    };
    map.iter()
        .map(|(k, v)| {
            format!(
                "{k} = {}\n",
                v.as_str().map_or_else(|| v.to_string(), str::to_string)
            )
        })
        .collect()
}

fn cmd_eval(o: &Options) -> Result<Outcome, Outcome> {
    let m = load_element(o)?;
    let v = eval_json(&m);
    Ok(Outcome::ok(if o.json {
        to_canonical_json(&v)
    } else {
        as_text(&v)
    }))
}

/// Exponent actually applied: reduced mod 3 when the map has order 3.
fn effective_power(map: &TrialityMap, power: u64) -> Result<u32, Outcome> {
    if map.full().pow(3) == SquareMatrix::identity(DIM) {
        return Ok((power % 3) as u32);
    }
    u32::try_from(power).map_err(|_| {
        Outcome::error(
            EXIT_USAGE,
            "--power too large for a block of order other than 3",
        )
    })
}

fn cmd_sigma(o: &Options) -> Result<Outcome, Outcome> {
    let m = load_element(o)?;
    let (map, _) = load_map(o)?;
    let k = effective_power(&map, o.power)?;
    let image = map.apply_power(&m, k);
    let before = invariant_vector(&m);
    let after = invariant_vector(&image);
    let mut predicted: InvariantVector = before.clone();
    for _ in 0..k {
        predicted = sigma_transform_invariants(&predicted);
    }
    let v = json!({
        "power": o.power,
        "input": m.document(),
        "output": image.document(),
        "invariants_before": before,
        "invariants_after": after,
        "invariants_predicted": predicted,
    });
    if o.json {
        return Ok(Outcome::ok(to_canonical_json(&v)));
    }
    let line = |x: &[Rational]| {
        x.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    let inv =
        |x: &InvariantVector| format!("p1 = {}, p2 = {}, p3 = {}, pf = {}", x.p1, x.p2, x.p3, x.pf);
    Ok(Outcome::ok(format!(
        "power: {}\ncoeffs: {}\ninvariants before: {}\ninvariants after:  {}\n",
        o.power,
        line(image.coeffs()),
        inv(&before),
        inv(&after)
    )))
}

fn subalgebra_json(s: &FixedSubalgebra) -> Value {
    let basis: Vec<Value> = s
        .basis()
        .iter()
        .map(|b| serde_json::to_value(b.coeffs()).expect("serializes"))
        .collect();
    json!({
        "structure": identify_fixed_algebra(s),
        "basis": basis,
    })
}

fn fixed_sections(map: &TrialityMap) -> Result<(FixedSubalgebra, FixedSubalgebra), Outcome> {
    let g2 = FixedSubalgebra::fixed_locus(map.full(), SubalgebraTag::G2)
        .map_err(|e| Outcome::error(EXIT_FAILED, e))?;
    let so7 = so7_fixed_subalgebra().map_err(|e| Outcome::error(EXIT_FAILED, e))?;
    Ok((g2, so7))
}

fn cmd_fixed(o: &Options) -> Result<Outcome, Outcome> {
    let (map, _) = load_map(o)?;
    let (g2, so7) = fixed_sections(&map)?;
    let (rg, rs) = (identify_fixed_algebra(&g2), identify_fixed_algebra(&so7));
    let ok = (rg.dim, rg.killing_nondegenerate, rg.rank) == (14, true, 2)
        && (rs.dim, rs.killing_nondegenerate, rs.rank) == (21, true, 3);
    let stdout = if o.json {
        to_canonical_json(&json!({"g2": subalgebra_json(&g2), "so7": subalgebra_json(&so7)}))
    } else {
        let row = |name: &str, r: &so8_triality::triality::StructureReport| {
            format!(
                "{name}: dim {}, killing nondegenerate {}, rank {}\n",
                r.dim, r.killing_nondegenerate, r.rank
            )
        };
        row("sigma", &rg) + &row("involution", &rs)
    };
    let mut out = Outcome::ok(stdout);
    if !ok {
        out.code = EXIT_FAILED;
        out.stderr = "error: fixed subalgebras do not have the expected structure\n".into();
    }
    Ok(out)
}

/// Every structure constant the checks rely on, as one JSON document.
pub fn dump_value() -> Result<Value, so8_triality::Error> {
    let map = TrialityMap::standard();
    let g2 = FixedSubalgebra::fixed_locus(map.full(), SubalgebraTag::G2)?;
    let so7 = so7_fixed_subalgebra()?;
    let basis = |s: &FixedSubalgebra| -> Vec<Value> {
        s.basis()
            .iter()
            .map(|b| serde_json::to_value(b.coeffs()).expect("serializes"))
            .collect()
    };
    let gens: Vec<String> = generators().iter().map(ToString::to_string).collect();
    let quads: Vec<Vec<String>> = quadruples()
        .iter()
        .map(|q| q.slots.iter().map(ToString::to_string).collect())
        .collect();
    Ok(json!({
        "octonion_table": structure_constants(),
        "generators": gens,
        "quadruples": quads,
        "block": map.block(),
        "sigma_matrix": map.full(),
        "t": t_matrix(1),
        "t_squared": t_matrix(2),
        "g2_basis": basis(&g2),
        "so7_basis": basis(&so7),
    }))
}

fn cmd_dump() -> Result<Outcome, Outcome> {
    let v = dump_value().map_err(|e| Outcome::error(EXIT_FAILED, e))?;
    Ok(Outcome::ok(to_canonical_json(&v)))
}
