//! Command-line front end: ingest manifold JSON files, validate the relation
//! structure, run the computation pipelines, and emit human-readable and
//! machine-readable reports.
//!
//! Exit codes: 0 success, 1 validation failure, 2 parse error,
//! 3 hypothesis/dispatch error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use cohomotopy_core::bordism::{
    fivebrane_stub, g_to_h_ses, section_existence, wedge_oracle, EulerData, SectionVerdict,
    StructureGroupK,
};
use cohomotopy_core::cochain::{
    validate_datum, CohomologyDatum, StructureTag, ValidationReport,
};
use cohomotopy_core::codim2::{codim2_with_dual, framed_spin_bordism2};
use cohomotopy_core::codim3::{assemble_codim3, spin3_bordism, string_fast_path};
use cohomotopy_core::error::Error;
use cohomotopy_core::extension::enumerate_extension_middles;
use cohomotopy_core::input::{load_datum, LoadOutcome};
use cohomotopy_core::report::{ParamInfo, ParametricGroup, SesReport, Splitting};

#[derive(Parser)]
#[command(
    name = "cohomotopy",
    version,
    about = "stable cohomotopy and bordism groups of manifolds from cohomological data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structure-map relations of an input file
    Validate(FileArgs),
    /// Codimension-2 cohomotopy, with the bordism dual when homology is present
    Codim2(FileArgs),
    /// Codimension-3 cohomotopy via the four-case dispatch
    Codim3(Codim3Args),
    /// Structure-group bordism reports
    Bordism(BordismArgs),
    /// Nowhere-vanishing-section decision from declared Euler data
    SectionCheck(SectionArgs),
    /// Cohomotopy of a stable wedge of spheres (test oracle)
    Oracle(OracleArgs),
}

#[derive(Args)]
struct FileArgs {
    /// input JSON file
    file: PathBuf,
    /// write the machine-readable report here ("-" for stdout)
    #[arg(long)]
    json: Option<String>,
}

#[derive(Args)]
struct Codim3Args {
    file: PathBuf,
    #[arg(long)]
    json: Option<String>,
    /// assume the secondary operation Phi acts trivially
    #[arg(long)]
    assume_phi_trivial: bool,
    /// assume the tertiary operation acts trivially
    #[arg(long)]
    assume_t_trivial: bool,
    /// assume the 3-primary epsilon vanishes (with its splitting condition)
    #[arg(long)]
    assume_eps3_zero: bool,
    /// enumerate candidate middle groups for undetermined extensions (order <= 64)
    #[arg(long)]
    enumerate_extensions: bool,
}

#[derive(Args)]
struct BordismArgs {
    file: PathBuf,
    /// submanifold dimension k (1, 2, 3, or the stubbed 7)
    #[arg(long)]
    k: usize,
    #[arg(long)]
    json: Option<String>,
}

#[derive(Args)]
struct SectionArgs {
    /// structure group and codimension: spin1, spin2 or string3
    #[arg(long, default_value = "spin2")]
    group: String,
    /// G-Euler class: "zero" or "nonzero"
    #[arg(long)]
    euler_g: Option<String>,
    /// G-divisor kappa
    #[arg(long)]
    kappa: Option<String>,
    /// H-Euler class
    #[arg(long)]
    euler_h: Option<String>,
    /// defect class (k = 2 only)
    #[arg(long)]
    defect: Option<String>,
    #[arg(long)]
    json: Option<String>,
}

#[derive(Args)]
struct OracleArgs {
    /// sphere dimensions, comma separated; "n" and "n+k" resolve against --target
    #[arg(long)]
    wedge: String,
    /// the cohomotopy degree n
    #[arg(long)]
    target: usize,
    #[arg(long)]
    json: Option<String>,
}

// ---------------------------------------------------------------------------
// Report document
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DatumSummary {
    name: String,
    dimension: usize,
    codimension: usize,
    structure: String,
    #[serde(rename = "mod2Ranks")]
    mod2_ranks: BTreeMap<usize, usize>,
}

#[derive(Serialize)]
struct ReportDocument<T: Serialize> {
    #[serde(rename = "schemaVersion")]
    schema_version: u32,
    command: String,
    #[serde(rename = "inputDigest", skip_serializing_if = "Option::is_none")]
    input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    datum: Option<DatumSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    validation: Option<ValidationReport>,
    result: T,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

fn summarize(d: &CohomologyDatum) -> DatumSummary {
    DatumSummary {
        name: d.name.clone(),
        dimension: d.dimension,
        codimension: d.codimension,
        structure: format!("{:?}", d.tag).to_lowercase(),
        mod2_ranks: d.mod2_rank.clone(),
    }
}

fn emit<T: Serialize>(doc: &ReportDocument<T>, json: &Option<String>) {
    let text = serde_json::to_string_pretty(doc).expect("report serialization");
    match json.as_deref() {
        Some("-") => println!("{}", text),
        Some(path) => {
            if let Err(e) = std::fs::write(path, text.as_bytes()) {
                eprintln!("error: cannot write {}: {}", path, e);
            }
        }
        None => {}
    }
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::Validation(_) => ExitCode::from(1),
        Error::Parse(_) => ExitCode::from(2),
        _ => ExitCode::from(3),
    }
}

fn load(path: &Path) -> Result<(LoadOutcome, String), Error> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::Parse("input file is not UTF-8".into()))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let outcome = load_datum(&text)?;
    Ok((outcome, digest))
}

fn print_ses(ses: &SesReport) {
    println!("  {}", ses.label);
    println!("    left:   {}", ses.left.render());
    println!("    middle: {}", ses.middle.render());
    println!("    right:  {}", ses.right.render());
    println!("    splitting: {}", splitting_str(&ses.splitting));
}

fn splitting_str(s: &Splitting) -> String {
    match s {
        Splitting::Split => "Split".into(),
        Splitting::NonSplit => "NonSplit".into(),
        Splitting::Undetermined { criterion } => format!("Undetermined ({})", criterion),
    }
}

fn print_params(params: &[ParamInfo]) {
    for p in params {
        let v = match p.value {
            Some(v) => v.to_string(),
            None => "unknown".into(),
        };
        println!("  parameter {} = {} [{:?}]", p.name, v, p.provenance);
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn run_validate(args: &FileArgs) -> Result<ExitCode, Error> {
    let pretty = args.json.as_deref() != Some("-");
    let (outcome, digest) = load(&args.file)?;
    let report = validate_datum(&outcome.datum);
    let passed = report.passed();
    if pretty { println!(
        "validate {}: {} ({} checks, {} skipped)",
        outcome.datum.name,
        if passed { "PASS" } else { "FAIL" },
        report.checked.len(),
        report.skipped.len()
    ); }
    if pretty {
        for f in &report.failures {
            println!(
                "  FAILED {} at degree {} (witness {}): {}",
                f.relation, f.degree, f.witness, f.detail
            );
        }
    }
    let doc = ReportDocument {
        schema_version: 1,
        command: "validate".into(),
        input_digest: Some(digest),
        datum: Some(summarize(&outcome.datum)),
        validation: Some(report),
        result: serde_json::json!({ "passed": passed }),
        warnings: outcome.warnings,
    };
    emit(&doc, &args.json);
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Compute commands validate first; a failing datum is rejected.
fn validated(outcome: &LoadOutcome) -> Result<ValidationReport, Error> {
    let report = validate_datum(&outcome.datum);
    if !report.passed() {
        let first = &report.failures[0];
        return Err(Error::Validation(format!(
            "input fails validation: {} at degree {} ({})",
            first.relation, first.degree, first.detail
        )));
    }
    Ok(report)
}

#[derive(Serialize)]
struct Codim2Report {
    #[serde(rename = "kernelTerm")]
    kernel_term: String,
    #[serde(rename = "quotientTerm")]
    quotient_term: String,
    #[serde(rename = "framedSummand")]
    framed_summand: Option<bool>,
    middle: ParametricGroup,
    ses: Vec<SesReport>,
    #[serde(rename = "dualConsistent", skip_serializing_if = "Option::is_none")]
    dual_consistent: Option<bool>,
    #[serde(rename = "corollaryConsistent", skip_serializing_if = "Option::is_none")]
    corollary_consistent: Option<bool>,
}

fn run_codim2(args: &FileArgs) -> Result<ExitCode, Error> {
    let (outcome, digest) = load(&args.file)?;
    let validation = validated(&outcome)?;
    let d = &outcome.datum;
    if d.codimension != 2 {
        return Err(Error::Dispatch(format!(
            "codim2 needs a codimension-2 file, got codimension {}",
            d.codimension
        )));
    }
    let res = codim2_with_dual(d, &outcome.overrides)?;
    let pretty = args.json.as_deref() != Some("-");

    if pretty {
        println!("codim2 {}: pi^{}(M) = {}", d.name, d.n(), res.middle.render());
        println!("  splitting: {}", splitting_str(&res.splitting));
        print_ses(&res.ses);
    }

    let mut ses = vec![res.ses.clone()];
    let mut dual_consistent = None;
    let mut corollary_consistent = None;
    if let Some(dual) = &res.dual {
        ses.push(dual.ses.clone());
        dual_consistent = Some(true); // codim2_with_dual errors on mismatch
        let fs = framed_spin_bordism2(d)?;
        corollary_consistent = Some(fs.corollary_consistent);
        if pretty {
            println!("  bordism dual: {}", dual.middle.rendered);
            println!("  framed/spin: {}", fs.ses.middle.render());
        }
        ses.push(fs.ses);
    }

    let doc = ReportDocument {
        schema_version: 1,
        command: "codim2".into(),
        input_digest: Some(digest),
        datum: Some(summarize(d)),
        validation: Some(validation),
        result: Codim2Report {
            kernel_term: res.kernel_term.render(),
            quotient_term: res.quotient_term.rendered.clone(),
            framed_summand: res.framed_summand_present,
            middle: res.middle.clone(),
            ses,
            dual_consistent,
            corollary_consistent,
        },
        warnings: outcome.warnings,
    };
    emit(&doc, &args.json);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Codim3Report {
    case: u8,
    #[serde(rename = "epsSq4Z")]
    eps_sq4z: u8,
    parameters: Vec<ParamInfo>,
    #[serde(rename = "parameterNotes")]
    parameter_notes: Vec<(String, String)>,
    middle: ParametricGroup,
    ses: Vec<SesReport>,
    #[serde(rename = "stringFastPath", skip_serializing_if = "Option::is_none")]
    string_fast_path: Option<Vec<SesReport>>,
    #[serde(rename = "spin3Bordism", skip_serializing_if = "Option::is_none")]
    spin3: Option<SesReport>,
    #[serde(rename = "enumeratedMiddles", skip_serializing_if = "Option::is_none")]
    enumerated_middles: Option<Vec<String>>,
}

fn run_codim3(args: &Codim3Args) -> Result<ExitCode, Error> {
    let (outcome, digest) = load(&args.file)?;
    let validation = validated(&outcome)?;
    let d = &outcome.datum;
    if d.codimension != 3 {
        return Err(Error::Dispatch(format!(
            "codim3 needs a codimension-3 file, got codimension {}",
            d.codimension
        )));
    }
    let mut overrides = outcome.overrides.clone();
    if args.assume_phi_trivial {
        overrides.phi_trivial = Some(true);
    }
    if args.assume_t_trivial {
        overrides.t_trivial = Some(true);
    }
    if args.assume_eps3_zero {
        overrides.eps3_zero = Some(true);
    }

    let res = assemble_codim3(d, &overrides)?;
    let pretty = args.json.as_deref() != Some("-");
    if pretty {
        println!("codim3 {}: case {} fired", d.name, res.case);
        print_params(&res.parameters);
        println!("  pi^{}(M) = {}", d.n(), res.middle.render());
        for ses in &res.reports {
            print_ses(ses);
        }
    }

    let mut string_reports = None;
    let mut spin3 = None;
    if d.tag == StructureTag::String {
        let (outer, inner) = string_fast_path(d, &overrides)?;
        if pretty {
            println!("  string fast path:");
            print_ses(&outer);
            print_ses(&inner);
        }
        string_reports = Some(vec![outer, inner]);
        let s3 = spin3_bordism(d, &overrides)?;
        if pretty {
            println!("  Omega_3^Spin(M) = {}", s3.middle.render());
        }
        spin3 = Some(s3);
    } else if d.tag == StructureTag::Spin {
        let s3 = spin3_bordism(d, &overrides)?;
        if pretty {
            println!("  Omega_3^Spin(M) = {}", s3.middle.render());
        }
        spin3 = Some(s3);
    }

    let enumerated = if args.enumerate_extensions {
        Some(enumerate_undetermined(&res.middle))
    } else {
        None
    };
    if pretty {
        if let Some(e) = &enumerated {
            for line in e {
                println!("  candidate middles: {}", line);
            }
        }
    }

    let doc = ReportDocument {
        schema_version: 1,
        command: "codim3".into(),
        input_digest: Some(digest),
        datum: Some(summarize(d)),
        validation: Some(validation),
        result: Codim3Report {
            case: res.case,
            eps_sq4z: res.eps_sq4z,
            parameters: res.parameters.clone(),
            parameter_notes: res.parameter_notes.clone(),
            middle: res.middle.clone(),
            ses: res.reports.clone(),
            string_fast_path: string_reports,
            spin3,
            enumerated_middles: enumerated,
        },
        warnings: outcome.warnings,
    };
    emit(&doc, &args.json);
    Ok(ExitCode::SUCCESS)
}

/// For every branch with an undetermined extension status and finite order
/// at most 64, list all abelian groups of that order admitting the branch's
/// elementary-2 layer. Coarse but honest bounds.
fn enumerate_undetermined(pg: &ParametricGroup) -> Vec<String> {
    let mut lines = Vec::new();
    for b in &pg.branches {
        if !matches!(b.extension_status, Splitting::Undetermined { .. }) {
            continue;
        }
        if b.group.free_rank > 0 {
            continue;
        }
        let order: u64 = b.group.invariant_factors.iter().product();
        if order == 0 || order > 64 {
            continue;
        }
        let mut twos = 0usize;
        let mut rest: Vec<u64> = Vec::new();
        for &f in &b.group.invariant_factors {
            if f == 2 {
                twos += 1;
            } else {
                rest.push(f);
            }
        }
        if twos == 0 {
            continue;
        }
        let middles = enumerate_extension_middles(&rest, twos);
        let rendered: Vec<String> = middles.iter().map(|g| g.rendered.clone()).collect();
        lines.push(format!(
            "branch {:?} ({}): {}",
            b.assumptions,
            b.group.rendered,
            rendered.join("; ")
        ));
    }
    lines
}

#[derive(Serialize)]
#[serde(untagged)]
enum BordismResult {
    Ses(SesReport),
    Stub(cohomotopy_core::bordism::FivebraneStub),
}

fn run_bordism(args: &BordismArgs) -> Result<ExitCode, Error> {
    let (outcome, digest) = load(&args.file)?;
    let validation = validated(&outcome)?;
    let d = &outcome.datum;
    let pretty = args.json.as_deref() != Some("-");
    let result = if args.k == 7 {
        let stub = fivebrane_stub();
        if pretty {
            println!("bordism {} k=7: left {} / right {}", d.name, stub.left, stub.right);
        }
        BordismResult::Stub(stub)
    } else {
        let ses = g_to_h_ses(d, args.k, &outcome.overrides)?;
        if pretty {
            println!("bordism {} k={}:", d.name, args.k);
            print_ses(&ses);
        }
        BordismResult::Ses(ses)
    };
    let doc = ReportDocument {
        schema_version: 1,
        command: format!("bordism k={}", args.k),
        input_digest: Some(digest),
        datum: Some(summarize(d)),
        validation: Some(validation),
        result,
        warnings: outcome.warnings,
    };
    emit(&doc, &args.json);
    Ok(ExitCode::SUCCESS)
}

fn tri(s: &Option<String>, what: &str) -> Result<Option<bool>, Error> {
    match s.as_deref() {
        None => Ok(None),
        Some("zero") => Ok(Some(true)),
        Some("nonzero") => Ok(Some(false)),
        Some(other) => Err(Error::Parse(format!(
            "{} must be 'zero' or 'nonzero', got '{}'",
            what, other
        ))),
    }
}

fn run_section_check(args: &SectionArgs) -> Result<ExitCode, Error> {
    let group = match args.group.as_str() {
        "spin1" => StructureGroupK::Spin1,
        "spin2" => StructureGroupK::Spin2,
        "string3" => StructureGroupK::String3,
        other => {
            return Err(Error::Parse(format!(
                "--group must be spin1, spin2 or string3, got '{}'",
                other
            )))
        }
    };
    let data = EulerData {
        group,
        e_g_zero: tri(&args.euler_g, "--euler-g")?,
        kappa_zero: tri(&args.kappa, "--kappa")?,
        e_h_zero: tri(&args.euler_h, "--euler-h")?,
        defect_zero: tri(&args.defect, "--defect")?,
    };
    let verdict = section_existence(&data)?;
    if args.json.as_deref() != Some("-") {
        match &verdict {
            SectionVerdict::Exists => println!("Exists"),
            SectionVerdict::NotExists { obstruction } => {
                println!("NotExists (obstruction: {})", obstruction)
            }
            SectionVerdict::Insufficient { missing } => {
                println!("Insufficient (missing: {})", missing.join(", "))
            }
        }
    }
    let doc = ReportDocument {
        schema_version: 1,
        command: "section-check".into(),
        input_digest: None,
        datum: None,
        validation: None,
        result: verdict,
        warnings: vec![],
    };
    emit(&doc, &args.json);
    Ok(ExitCode::SUCCESS)
}

fn parse_wedge(expr: &str, n: usize) -> Result<Vec<usize>, Error> {
    expr.split(',')
        .map(|tok| {
            let tok = tok.trim();
            if let Some(rest) = tok.strip_prefix("n+") {
                let k: usize = rest
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad wedge entry '{}'", tok)))?;
                Ok(n + k)
            } else if tok == "n" {
                Ok(n)
            } else {
                tok.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad wedge entry '{}'", tok)))
            }
        })
        .collect()
}

fn run_oracle(args: &OracleArgs) -> Result<ExitCode, Error> {
    let dims = parse_wedge(&args.wedge, args.target)?;
    let group = wedge_oracle(&dims, args.target)?;
    if args.json.as_deref() != Some("-") {
        println!("pi^{} of the wedge {:?} = {}", args.target, dims, group.rendered);
    }
    let doc = ReportDocument {
        schema_version: 1,
        command: "oracle".into(),
        input_digest: None,
        datum: None,
        validation: None,
        result: serde_json::json!({ "dims": dims, "group": group }),
        warnings: vec![],
    };
    emit(&doc, &args.json);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // die quietly when the output pipe closes (e.g. piping through head)
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let started = std::time::Instant::now();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate(a) => run_validate(a),
        Command::Codim2(a) => run_codim2(a),
        Command::Codim3(a) => run_codim3(a),
        Command::Bordism(a) => run_bordism(a),
        Command::SectionCheck(a) => run_section_check(a),
        Command::Oracle(a) => run_oracle(a),
    };
    // timing goes to stderr only: the JSON report body stays deterministic
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            exit_code_for(&e)
        }
    };
    eprintln!("elapsed: {:.1?}", started.elapsed());
    code
}
