//! Command-line front end: generate corpora, validate and verify instances,
//! search for witnesses, and render reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use perfdef::corpus::{self, Instance};
use perfdef::report::{run_checks, CheckRecord, Report, Status, CHECK_NAMES};
use perfdef::serial;

#[derive(Parser)]
#[command(name = "perfdef", about = "Deformation checks for perfect complexes on finite sites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Random seed driving generation and sampling
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Budget for exhaustive and witness searches
    #[arg(long, default_value_t = 65536)]
    budget: u128,
    /// Corpus directory (instances/, witnesses/, reports/)
    #[arg(long, default_value = "corpus")]
    corpus: PathBuf,
    /// Comma-separated check names (default: all)
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    /// Cap on instances processed
    #[arg(long)]
    max_elements: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse every instance file and re-serialize; fail on any mismatch
    Validate(Common),
    /// Write the standard generated corpus into the corpus directory
    Generate(Common),
    /// Run checks over the corpus and write a report
    Verify(Common),
    /// Search for a line with nonzero obstruction; persist it as a witness
    Search(Common),
    /// Re-render the most recent report to stdout
    Report(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(c) => cmd_validate(&c),
        Command::Generate(c) => cmd_generate(&c),
        Command::Verify(c) => cmd_verify(&c),
        Command::Search(c) => cmd_search(&c),
        Command::Report(c) => cmd_report(&c),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}

fn instances_dir(c: &Common) -> PathBuf {
    c.corpus.join("instances")
}

fn load_instances(c: &Common) -> Result<Vec<Instance>, String> {
    let dir = instances_dir(c);
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| format!("cannot read {}: {}", dir.display(), e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "pd").unwrap_or(false))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        let text = fs::read_to_string(&f).map_err(|e| format!("{}: {}", f.display(), e))?;
        let inst =
            serial::parse(&text).map_err(|e| format!("{}: parse failed: {:?}", f.display(), e))?;
        out.push(inst);
        if let Some(max) = c.max_elements {
            if out.len() >= max {
                break;
            }
        }
    }
    Ok(out)
}

fn cmd_generate(c: &Common) -> Result<ExitCode, String> {
    let dir = instances_dir(c);
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    fs::create_dir_all(c.corpus.join("witnesses")).map_err(|e| e.to_string())?;
    fs::create_dir_all(c.corpus.join("reports")).map_err(|e| e.to_string())?;
    let mut insts = corpus::standard_corpus(c.seed);
    if let Some(max) = c.max_elements {
        insts.truncate(max);
    }
    let n = insts.len();
    for inst in &insts {
        let path = dir.join(format!("{}.pd", inst.id));
        fs::write(&path, serial::serialize(inst)).map_err(|e| e.to_string())?;
    }
    println!("generated {} instances in {}", n, dir.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(c: &Common) -> Result<ExitCode, String> {
    let insts = load_instances(c)?;
    let mut bad = 0usize;
    for inst in &insts {
        let text = serial::serialize(inst);
        match serial::parse(&text) {
            Ok(back) if serial::serialize(&back) == text => {
                println!("CHECK ROUNDTRIP {} pass", inst.id)
            }
            _ => {
                println!("CHECK ROUNDTRIP {} fail", inst.id);
                bad += 1;
            }
        }
    }
    println!("validated {} instances, {} failures", insts.len(), bad);
    Ok(if bad == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn checks_of(c: &Common) -> Result<Vec<String>, String> {
    for name in &c.checks {
        if name != "all" && !CHECK_NAMES.contains(&name.as_str()) {
            return Err(format!("unknown check {name}; known: {}", CHECK_NAMES.join(",")));
        }
    }
    Ok(c.checks.clone())
}

fn write_report(c: &Common, stem: &str, report: &Report) -> Result<PathBuf, String> {
    let dir = c.corpus.join("reports");
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join(format!("{}.txt", stem));
    // timing goes to stderr only so the report body stays deterministic
    fs::write(&path, report.render()).map_err(|e| e.to_string())?;
    eprintln!("elapsed {} ms", report.elapsed_ms);
    Ok(path)
}

fn cmd_verify(c: &Common) -> Result<ExitCode, String> {
    let insts = load_instances(c)?;
    let checks = checks_of(c)?;
    let report = run_checks(&insts, &checks, c.seed, c.budget);
    print!("{}", report.render());
    let path = write_report(c, &format!("verify-seed{}", c.seed), &report)?;
    eprintln!("report written to {}", path.display());
    Ok(if report.any_failed() { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn cmd_search(c: &Common) -> Result<ExitCode, String> {
    let budget = c.budget.min(u64::MAX as u128) as u64;
    let mut report = Report::default();
    match corpus::search_line_witness(budget, c.seed).map_err(|e| format!("{:?}", e))? {
        Some((id, ext, line)) => {
            let e = corpus::line_as_complex(&ext, &line).map_err(|e| format!("{:?}", e))?;
            let inst = Instance { id: id.clone(), ext, e, levels: None, seed: c.seed };
            let dir = c.corpus.join("witnesses");
            fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
            let path = dir.join(format!("{}.pd", id));
            fs::write(&path, serial::serialize(&inst)).map_err(|e| e.to_string())?;
            println!("witness {} written to {}", id, path.display());
            report.records.push(CheckRecord {
                name: "WITNESS-SEARCH".into(),
                instance: id,
                status: Status::Pass,
                witness: Some(path.display().to_string()),
            });
        }
        None => {
            println!("no witness found within budget {} (seed {})", budget, c.seed);
            report.records.push(CheckRecord {
                name: "WITNESS-SEARCH".into(),
                instance: "search".into(),
                status: Status::Skipped(format!(
                    "no-nonzero-witness-found-within-budget-{}-seed-{}",
                    budget, c.seed
                )),
                witness: None,
            });
        }
    }
    print!("{}", report.render());
    write_report(c, &format!("search-seed{}", c.seed), &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_report(c: &Common) -> Result<ExitCode, String> {
    let dir = c.corpus.join("reports");
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| format!("cannot read {}: {}", dir.display(), e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "txt").unwrap_or(false))
        .collect();
    files.sort();
    let latest: &Path = files.last().ok_or("no reports found")?;
    let text = fs::read_to_string(latest).map_err(|e| e.to_string())?;
    print!("{}", text);
    let failed = text.lines().any(|l| l.split_whitespace().nth(3) == Some("fail"));
    Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}
