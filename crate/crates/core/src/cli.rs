//! Command-line front end. Every command prints one JSON document (sorted
//! keys, rationals as `"p/q"` strings) on stdout and diagnostics on stderr.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 hypothesis failure.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::adams::adams_expand;
use crate::decompose::{build_library, certify, verify_certificate, DecompositionCertificate, VerificationReport};
use crate::error::{Error, Result};
use crate::functor::FunctorExpr;
use crate::geometry::{acw_lower_bound, hopf_curvature_norm, SphereLineBundle};
use crate::graded::Partition;
use crate::pipeline::{comparison_pipeline, AdamsPart};
use crate::rational::{self, Rational};
use crate::selftest;
use crate::splitting::{FormalBundle, LinearForm, PairingData, PairingDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn payload(code: i32, value: &Value) -> Self {
        let mut stdout = serde_json::to_string_pretty(value).expect("json rendering");
        stdout.push('\n');
        CommandResult { code, stdout, stderr: String::new() }
    }

    fn failure(code: i32, message: impl std::fmt::Display) -> Self {
        CommandResult { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }

    /// Parsed payload, if any.
    pub fn json(&self) -> Option<Value> {
        serde_json::from_str(&self.stdout).ok()
    }
}

#[derive(Parser, Debug)]
#[command(name = "cowaist", version, about = "Exact characteristic-class calculus for admissible functors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certificate writing a Chern monomial as a combination of ch_K of functor images.
    Decompose {
        /// Parts of the Chern monomial, e.g. `2,1`.
        #[arg(long)]
        partition: String,
        /// Weight bound of the functor library.
        #[arg(long = "N")]
        n: u32,
        /// Verify at ranks 1..=max-rank (default N).
        #[arg(long)]
        max_rank: Option<u32>,
    },
    /// Re-check a certificate file on generic bundles.
    Verify {
        file: PathBuf,
        /// Comma-separated ranks (default: the certificate's recorded ranks, else 1..=N).
        #[arg(long)]
        ranks: Option<String>,
    },
    /// Find an admissible image with nonzero Â-pairing and the constant c.
    Pipeline {
        /// Comma-separated Chern roots, e.g. `x1,x2` or `2x1-y1`.
        #[arg(long)]
        roots: String,
        /// Pairing file (cc-pairing-v1).
        #[arg(long)]
        pairing: PathBuf,
        /// Partition whose Chern number is nonzero.
        #[arg(long)]
        witness: String,
        #[arg(long)]
        m0: String,
    },
    /// Expansion of ψ_k in exterior powers.
    Adams {
        #[arg(long)]
        k: u32,
    },
    /// Curvature bound constant of a functor (inline JSON or a file path).
    Bounds { functor: String },
    /// Hopf bundle over the round sphere of the given radius.
    Hopf {
        #[arg(long)]
        radius: String,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        orientation: i8,
        /// ∫ Â of the other factor; adds the product pairing.
        #[arg(long, allow_negative_numbers = true)]
        ahat: Option<String>,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CommandResult { code, stdout: text, stderr: String::new() }
            } else {
                CommandResult { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(r) => r,
        Err(e) => CommandResult::failure(exit_code(&e), e),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ChernHypothesis(_) | Error::AhatHypothesis(_) => EXIT_HYPOTHESIS,
        Error::Internal(_) => EXIT_VERIFICATION,
        _ => EXIT_USAGE,
    }
}

fn dispatch(command: Command) -> Result<CommandResult> {
    match command {
        Command::Decompose { partition, n, max_rank } => cmd_decompose(&partition, n, max_rank),
        Command::Verify { file, ranks } => cmd_verify(&file, ranks.as_deref()),
        Command::Pipeline { roots, pairing, witness, m0 } => cmd_pipeline(&roots, &pairing, &witness, &m0),
        Command::Adams { k } => cmd_adams(k),
        Command::Bounds { functor } => cmd_bounds(&functor),
        Command::Hopf { radius, orientation, ahat } => cmd_hopf(&radius, orientation, ahat.as_deref()),
        Command::Selftest => Ok(cmd_selftest()),
    }
}

fn render(q: &Rational) -> Value {
    Value::String(rational::render(q))
}

fn functor_value(f: &FunctorExpr) -> Value {
    serde_json::to_value(f).expect("functor serialization")
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::Usage(format!("invalid {what} {s:?}"))))
        .collect()
}

fn report_value(report: &VerificationReport) -> Value {
    json!({
        "passed": report.passed(),
        "ranks": report.checks.iter().map(|c| c.rank).collect::<Vec<_>>(),
        "failures": report.failures().map(|c| json!({
            "rank": c.rank,
            "residual": c.residual.to_string_map(),
        })).collect::<Vec<_>>(),
    })
}

pub fn cmd_decompose(partition: &str, n: u32, max_rank: Option<u32>) -> Result<CommandResult> {
    let partition: Partition = partition.parse()?;
    if partition.weight() > n {
        return Err(Error::InvalidPartition(format!("weight {} exceeds N = {n}", partition.weight())));
    }
    let max_rank = max_rank.unwrap_or(n);
    if max_rank == 0 {
        return Err(Error::Usage("max-rank must be at least 1".into()));
    }
    let library = build_library(n, partition.weight().max(1) as usize)?;
    let ranks: Vec<u32> = (1..=max_rank).collect();
    let (cert, report) = certify(&partition, &library, &ranks)?;
    let doc = serde_json::to_value(cert.to_document())?;
    if report.passed() {
        Ok(CommandResult::payload(EXIT_OK, &doc))
    } else {
        let mut r = CommandResult::payload(EXIT_VERIFICATION, &json!({ "certificate": doc, "verification": report_value(&report) }));
        r.stderr = "error: certificate failed verification\n".into();
        Ok(r)
    }
}

pub fn cmd_verify(file: &std::path::Path, ranks: Option<&str>) -> Result<CommandResult> {
    let cert = DecompositionCertificate::from_json(&std::fs::read_to_string(file)?)?;
    let ranks: Vec<u32> = match ranks {
        Some(r) => parse_list(r, "rank")?,
        None if !cert.verified_ranks.is_empty() => cert.verified_ranks.clone(),
        None => (1..=cert.n.max(1)).collect(),
    };
    if ranks.contains(&0) {
        return Err(Error::Usage("ranks must be positive".into()));
    }
    let report = verify_certificate(&cert, &ranks)?;
    let code = if report.passed() { EXIT_OK } else { EXIT_VERIFICATION };
    let mut r = CommandResult::payload(code, &report_value(&report));
    if code != EXIT_OK {
        r.stderr = "error: certificate identity fails\n".into();
    }
    Ok(r)
}

pub fn parse_roots(text: &str) -> Result<FormalBundle> {
    Ok(FormalBundle::from_roots(parse_list::<LinearForm>(text, "root")?))
}

pub fn cmd_pipeline(roots: &str, pairing: &std::path::Path, witness: &str, m0: &str) -> Result<CommandResult> {
    let e = parse_roots(roots)?;
    let doc: PairingDocument = serde_json::from_str(&std::fs::read_to_string(pairing)?)?;
    let pairing = PairingData::from_document(&doc)?;
    let witness: Partition = witness.parse()?;
    let m0 = rational::parse(m0)?;
    let out = comparison_pipeline(&e, &pairing, &witness, &m0)?;
    Ok(CommandResult::payload(
        EXIT_OK,
        &json!({
            "functor": functor_value(&out.functor),
            "display": out.functor.to_string(),
            "c": render(out.c()),
            "k0": out.k0,
            "part": match out.part { AdamsPart::Positive => "G1", AdamsPart::Negative => "G2" },
            "A_N": render(&out.constant.a_n),
            "C_k0": render(&out.c_k0),
            "bound": render(&out.bound),
            "chern_number": render(&out.chern_number),
            "ahat_pairing": render(&out.ahat_pairing),
        }),
    ))
}

pub fn cmd_adams(k: u32) -> Result<CommandResult> {
    let psi = adams_expand(k)?;
    let terms: Vec<Value> = psi
        .terms()
        .iter()
        .map(|(c, f)| json!({ "c": render(c), "functor": functor_value(f), "display": f.to_string() }))
        .collect();
    Ok(CommandResult::payload(EXIT_OK, &json!({ "k": k, "terms": terms })))
}

pub fn cmd_bounds(functor: &str) -> Result<CommandResult> {
    let text = if functor.trim_start().starts_with('{') {
        functor.to_string()
    } else {
        std::fs::read_to_string(functor)?
    };
    let f = FunctorExpr::from_json(&text)?;
    Ok(CommandResult::payload(EXIT_OK, &json!({ "C": render(&f.bound_constant().0) })))
}

pub fn cmd_hopf(radius: &str, orientation: i8, ahat: Option<&str>) -> Result<CommandResult> {
    let b = SphereLineBundle::new(rational::parse(radius)?, orientation)?;
    let norm = hopf_curvature_norm(&b).value;
    let mut out = json!({
        "curvature_norm": render(&norm),
        "acw_lower_bound": render(&(Rational::from_integer(1.into()) / &norm)),
    });
    if let Some(a) = ahat {
        let w = acw_lower_bound(&b, &rational::parse(a)?)?;
        out["product_pairing"] = render(&w.product_pairing);
    }
    Ok(CommandResult::payload(EXIT_OK, &out))
}

pub fn cmd_selftest() -> CommandResult {
    let checks = selftest::run();
    let passed = checks.iter().all(|c| c.passed);
    let value = json!({
        "passed": passed,
        "checks": checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>(),
    });
    let mut r = CommandResult::payload(if passed { EXIT_OK } else { EXIT_VERIFICATION }, &value);
    for c in checks.iter().filter(|c| !c.passed) {
        r.stderr.push_str(&format!("FAIL {}: {}\n", c.name, c.detail));
    }
    r
}
