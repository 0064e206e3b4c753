mod models;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coevo_core::adapters::{adapt_evolution, Evolution, Strategy};
use coevo_core::diff::{classify_changes, compute_diff, derive_difference_schema, DiffModel};
use coevo_core::fixtures::{self, FixtureError};
use coevo_core::model::{serialize_model, Metamodel, ModelKind};
use coevo_core::soundness::{assert_matrix, render_table, validate, BlameReport, Severity};

/// Co-evolves the models of a generated graphical editor with its domain
/// metamodel.
#[derive(Parser)]
#[command(name = "coevo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the difference model between two metamodel versions.
    Diff {
        old: PathBuf,
        new: PathBuf,
        /// Where to write the difference model; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Propagate a difference model into an editor model set.
    Adapt {
        #[arg(long)]
        diff: PathBuf,
        /// Directory holding the editor models built for the old metamodel.
        #[arg(long)]
        models: PathBuf,
        #[arg(long, default_value = "best-effort")]
        strategy: Strategy,
        /// Output directory; must differ from the models directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Rate an editor model set. Exits with 1 or 2 below full soundness.
    Validate {
        #[arg(long)]
        models: PathBuf,
        /// Difference model that produced the domain, used to recognise renames.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Derive the difference metamodel of a metamodel.
    Schema {
        source: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a bundled scenario (or "all" catalog rows) against its expected blame matrix.
    Scenario {
        name: String,
        /// Write the scenario's base models and evolved metamodel to this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

/// A command failure with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 64, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Failure {
        Failure { code: 65, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Failure {
        Failure { code: 74, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Diff { old, new, out } => cmd_diff(&old, &new, out.as_deref()),
        Command::Adapt { diff, models, strategy, out } => cmd_adapt(&diff, &models, strategy, &out),
        Command::Validate { models, trace, format } => cmd_validate(&models, trace.as_deref(), format),
        Command::Schema { source, out } => cmd_schema(&source, out.as_deref()),
        Command::Scenario { name, export } => cmd_scenario(&name, export.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("coevo: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load_metamodel(path: &Path) -> Result<Metamodel, Failure> {
    models::parse(path, &models::read(path)?)
}

fn cmd_diff(old_path: &Path, new_path: &Path, out: Option<&Path>) -> Result<u8, Failure> {
    let old = load_metamodel(old_path)?;
    let new = load_metamodel(new_path)?;
    let diff = compute_diff(&old, &new);
    let classification = classify_changes(&diff, &old, &new);

    let mut summary = format!("{} entries\n", diff.len());
    for (i, e) in diff.entries.iter().enumerate() {
        let _ = writeln!(summary, "  [{i}] {}", e.summary());
    }
    for change in &classification.changes {
        let bindings: Vec<_> = change.bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(summary, "{} {} {:?}", change.kind, bindings.join(" "), change.entries);
    }
    for i in &classification.unclassified {
        let _ = writeln!(summary, "unclassified [{i}]");
    }

    let bytes = serialize_model(&diff);
    match out {
        Some(path) => {
            models::write(path, &bytes)?;
            print!("{summary}");
        }
        None => {
            print!("{}", String::from_utf8_lossy(&bytes));
            eprint!("{summary}");
        }
    }
    Ok(0)
}

fn same_dir(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

/// Name for the plan report, derived from the domain file name.
fn plan_name(domain_file: &str) -> String {
    let stem = domain_file
        .strip_suffix(ModelKind::Metamodel.extension())
        .or_else(|| domain_file.strip_suffix(".json"))
        .unwrap_or(domain_file);
    format!("{stem}{}", ModelKind::Plan.extension())
}

fn cmd_adapt(diff_path: &Path, models_dir: &Path, strategy: Strategy, out: &Path) -> Result<u8, Failure> {
    let input = models::load(models_dir)?;
    let diff: DiffModel = models::parse(diff_path, &models::read(diff_path)?)?;
    let evo = Evolution::new(&input.set.domain, &diff).map_err(|e| {
        Failure::data(format!("{} does not apply to {}: {e}", diff_path.display(), input.sources[0].path.display()))
    })?;
    let plan = adapt_evolution(&evo, &input.set, strategy);

    fs::create_dir_all(out).map_err(|e| Failure::io(format!("cannot create {}: {e}", out.display())))?;
    if same_dir(models_dir, out) {
        return Err(Failure::usage("the output directory must differ from the models directory"));
    }

    let set = &input.set;
    let adapted = &plan.outputs;
    let fresh: [Option<Vec<u8>>; 5] = [
        (adapted.domain != set.domain).then(|| serialize_model(&adapted.domain)),
        None,
        (adapted.tooling != set.tooling).then(|| serialize_model(&adapted.tooling)),
        (adapted.mapping != set.mapping).then(|| serialize_model(&adapted.mapping)),
        (adapted.emfgen != set.emfgen).then(|| serialize_model(&adapted.emfgen)),
    ];
    let mut written = Vec::new();
    for (source, bytes) in input.sources.iter().zip(&fresh) {
        let name = source.file_name();
        models::write(&out.join(&name), bytes.as_deref().unwrap_or(&source.bytes))?;
        let marker = if bytes.is_some() { "adapted" } else { "unchanged" };
        println!("{marker:9} {name}");
        written.push(name);
    }

    let report_name = plan_name(&input.sources[0].file_name());
    models::write(&out.join(&report_name), &serialize_model(&plan.report(written)))?;
    println!(
        "{strategy}: {} rules fired, {} diagnostics, report in {report_name}",
        plan.fired_rules.len(),
        plan.diagnostics.len()
    );
    for d in &plan.diagnostics {
        println!("  {}: {}", d.rule, d.message);
    }
    Ok(0)
}

fn exit_for_level(level: u8) -> u8 {
    match level {
        3 => 0,
        other => other,
    }
}

fn render_findings(report: &BlameReport) -> String {
    let mut s = String::new();
    for f in &report.findings {
        let mark = match f.severity {
            Severity::Broken => "×",
            Severity::Gap => "○",
        };
        let _ = writeln!(s, "{mark} {:8} {}  {}: {}", f.model.label(), f.code, f.subject, f.message);
    }
    s
}

fn cmd_validate(models_dir: &Path, trace: Option<&Path>, format: Format) -> Result<u8, Failure> {
    let input = models::load(models_dir)?;
    let diff: Option<DiffModel> = match trace {
        Some(path) => Some(models::parse(path, &models::read(path)?)?),
        None => None,
    };
    let report = validate(&input.set, diff.as_ref());
    match format {
        Format::Json => print!("{}", String::from_utf8_lossy(&serialize_model(&report))),
        Format::Table => {
            let label = models_dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| ".".into());
            print!("{}", render_table(&[(label, &report)]));
            print!("{}", render_findings(&report));
        }
    }
    Ok(exit_for_level(report.level))
}

fn cmd_schema(source: &Path, out: Option<&Path>) -> Result<u8, Failure> {
    let schema = derive_difference_schema(&load_metamodel(source)?);
    let bytes = serialize_model(&schema);
    match out {
        Some(path) => {
            models::write(path, &bytes)?;
            println!("{} difference classes written to {}", schema.classes.len(), path.display());
        }
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(0)
}

fn fixture_failure(e: FixtureError) -> Failure {
    match e {
        FixtureError::UnknownScenario(name) => Failure::usage(format!(
            "unknown scenario {name:?}; valid names: all, {}",
            fixtures::scenario_names().join(", ")
        )),
        other => Failure::data(other.to_string()),
    }
}

fn cmd_scenario(name: &str, export: Option<&Path>) -> Result<u8, Failure> {
    if let Some(dir) = export {
        if name == "all" {
            return Err(Failure::usage("--export takes a single scenario name"));
        }
        return export_scenario(name, dir);
    }
    let scenarios = if name == "all" {
        fixtures::catalog_scenarios().map_err(fixture_failure)?
    } else {
        vec![fixtures::scenario(name).map_err(fixture_failure)?]
    };
    let mut passed = 0;
    for s in &scenarios {
        let outcome = assert_matrix(s).map_err(fixture_failure)?;
        let status = if outcome.passed() { "PASS" } else { "FAIL" };
        println!("{status} {} ({})", s.name, s.title);
        print!("{}", render_table(&[("before".to_string(), &outcome.before), ("after".to_string(), &outcome.after)]));
        for m in &outcome.mismatches {
            println!("  mismatch: {m}");
        }
        passed += usize::from(outcome.passed());
    }
    println!("{passed}/{} PASS", scenarios.len());
    Ok(if passed == scenarios.len() { 0 } else { 1 })
}

fn export_scenario(name: &str, dir: &Path) -> Result<u8, Failure> {
    let s = fixtures::scenario(name).map_err(fixture_failure)?;
    let files =
        fixtures::base_files(&s.base).ok_or_else(|| fixture_failure(FixtureError::UnknownBase(s.base.clone())))?;
    let models_dir = dir.join("models");
    fs::create_dir_all(&models_dir).map_err(|e| Failure::io(format!("cannot create {}: {e}", models_dir.display())))?;
    for (file, text) in files {
        models::write(&models_dir.join(file), text.as_bytes())?;
    }
    let new_domain = s.new_domain().map_err(fixture_failure)?;
    let new_path = dir.join(format!("{}.new{}", s.base, ModelKind::Metamodel.extension()));
    models::write(&new_path, &serialize_model(&new_domain))?;
    println!("{} base models in {}", files.len(), models_dir.display());
    println!("evolved metamodel in {}", new_path.display());
    Ok(0)
}
