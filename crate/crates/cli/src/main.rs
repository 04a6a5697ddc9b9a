//! `hodge`: solve, evaluate, verify and fuzz Hodge-diamond construction plans.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hodge_core::algebra::{residue, Assignment, AssignmentDoc, DEFAULT_BOUND};
use hodge_core::calculus::{atom, AtomSpec};
use hodge_core::diamond::{HodgeDiamond, ResidueTargets};
use hodge_core::fuzz::fuzz;
use hodge_core::plan::{eval_plan, Plan};
use hodge_core::planner::solve_full;
use hodge_core::verify::{verify, VerificationReport};

#[derive(Parser)]
#[command(name = "hodge", version, about = "Construction plans for Hodge numbers modulo m")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SigmaArgs {
    /// Seed for random values of the unknown Hodge numbers.
    #[arg(long, conflicts_with = "assignment")]
    seed: Option<u64>,
    /// Random values are drawn from [0, bound).
    #[arg(long, requires = "seed")]
    bound: Option<u64>,
    /// JSON file {"seed":..,"bound":..,"values":{"path":value}}.
    #[arg(long)]
    assignment: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a plan realizing a targets file and verify it.
    Solve {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        targets: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        sigma: SigmaArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the diamond of a plan, symbolic or under an assignment.
    Eval {
        #[arg(long)]
        plan: PathBuf,
        #[command(flatten)]
        sigma: SigmaArgs,
        /// Print polynomials instead of evaluating.
        #[arg(long)]
        symbolic: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check a plan against a targets file.
    Verify {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        targets: PathBuf,
        #[command(flatten)]
        sigma: SigmaArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Solve and verify random admissible targets.
    Fuzz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the atom diamonds.
    Atoms {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

struct Invalid(String);

type Outcome = Result<bool, Invalid>;

fn read(path: &Path) -> Result<String, Invalid> {
    fs::read_to_string(path).map_err(|e| Invalid(format!("{}: {e}", path.display())))
}

fn load_targets(path: &Path) -> Result<ResidueTargets, Invalid> {
    ResidueTargets::from_json(&read(path)?).map_err(|e| Invalid(format!("{}: {e}", path.display())))
}

fn load_plan(path: &Path) -> Result<Plan, Invalid> {
    Plan::from_json(&read(path)?).map_err(|e| Invalid(format!("{}: {e}", path.display())))
}

/// Assignment from flags; falls back to `recorded`, then to all zeros.
fn load_sigma(args: &SigmaArgs, recorded: Option<&AssignmentDoc>) -> Result<Assignment, Invalid> {
    if let Some(path) = &args.assignment {
        let doc: AssignmentDoc = serde_json::from_str(&read(path)?)
            .map_err(|e| Invalid(format!("{}: {e}", path.display())))?;
        if doc.bound == Some(0) {
            return Err(Invalid(format!("{}: key \"bound\": must be positive", path.display())));
        }
        return Ok(Assignment::from_doc(&doc));
    }
    if let Some(seed) = args.seed {
        let bound = args.bound.unwrap_or(DEFAULT_BOUND);
        if bound == 0 {
            return Err(Invalid("--bound must be positive".into()));
        }
        return Ok(Assignment::random(seed, bound));
    }
    Ok(recorded.map(Assignment::from_doc).unwrap_or_else(Assignment::zero))
}

/// Residue and certification flag per cell; `None` where not materialized.
type ResidueCells = Vec<Vec<Option<(u64, bool)>>>;

fn residue_cells(d: &HodgeDiamond, m: u64, sigma: &Assignment) -> Result<ResidueCells, Invalid> {
    let n = d.n();
    let mut out = vec![vec![None; n + 1]; n + 1];
    for (p, row) in out.iter_mut().enumerate() {
        for (q, cell) in row.iter_mut().enumerate() {
            if let Some(v) = d.try_get(p, q) {
                let x = v.eval(sigma).map_err(|e| Invalid(e.to_string()))?;
                let r = residue(x, m);
                *cell = Some((r, v.const_mod(m) == Some(r)));
            }
        }
    }
    Ok(out)
}

fn render_residues(d: &HodgeDiamond, cells: &ResidueCells) -> String {
    d.render_rotated(|p, q, _| match cells[p][q] {
        Some((r, true)) => format!("{r}* "),
        Some((r, false)) => format!("{r}  "),
        None => "?  ".into(),
    })
}

fn summary_line(r: &VerificationReport) -> String {
    let matched = r.entries.iter().filter(|e| e.ok()).count();
    let certified = r.entries.iter().filter(|e| e.certified).count();
    let audits_failed: Vec<&str> = r.audits.iter().filter(|a| !a.pass).map(|a| a.name.as_str()).collect();
    format!(
        "verification: {} ({matched}/{} targeted entries match, {certified} certified; {})",
        if r.pass { "pass" } else { "FAIL" },
        r.entries.len(),
        if audits_failed.is_empty() { "audits pass".to_string() } else { format!("failed audits: {}", audits_failed.join(", ")) }
    )
}

fn print_report(r: &VerificationReport, format: Format) {
    match format {
        Format::Json => println!("{}", r.to_json()),
        Format::Text => {
            let mut s = String::new();
            for e in &r.entries {
                let _ = writeln!(
                    s,
                    "h^{{{},{}}}: expected {} got {}{}{}",
                    e.p,
                    e.q,
                    e.expected,
                    e.got,
                    if e.certified { " certified" } else { "" },
                    if e.ok() { "" } else { "  MISMATCH" }
                );
            }
            for a in &r.audits {
                let _ = writeln!(
                    s,
                    "audit {}: {} ({} node{})",
                    a.name,
                    if a.pass { "pass" } else { "FAIL" },
                    a.checked,
                    if a.checked == 1 { "" } else { "s" }
                );
                for f in &a.failures {
                    let _ = writeln!(s, "  {f}");
                }
            }
            let _ = writeln!(s, "{}", summary_line(r));
            print!("{s}");
        }
    }
}

fn solve(
    n: Option<usize>,
    m: Option<u64>,
    targets_path: &Path,
    out: &Path,
    sigma: &SigmaArgs,
    format: Format,
) -> Outcome {
    let targets = load_targets(targets_path)?;
    if let Some(n) = n.filter(|&n| n != targets.n()) {
        return Err(Invalid(format!("{}: key \"n\": file says {}, --n says {n}", targets_path.display(), targets.n())));
    }
    if let Some(m) = m.filter(|&m| m != targets.m()) {
        return Err(Invalid(format!("{}: key \"m\": file says {}, --m says {m}", targets_path.display(), targets.m())));
    }
    let sigma = load_sigma(sigma, None)?;
    let plan = solve_full(&targets, &sigma).map_err(|e| Invalid(e.to_string()))?;
    fs::write(out, plan.to_json() + "\n").map_err(|e| Invalid(format!("{}: {e}", out.display())))?;
    let report = verify(&plan, &targets, &sigma).map_err(|e| Invalid(e.to_string()))?;
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => {
            let d = eval_plan(&plan, &sigma).map_err(|e| Invalid(e.to_string()))?;
            let cells = residue_cells(&d, targets.m(), &sigma)?;
            println!("plan written to {} ({} nodes, dimension {})", out.display(), plan.root.node_count(), d.n());
            println!("h^{{p,q}} mod {} (* = independent of the unknowns)", targets.m());
            print!("{}", render_residues(&d, &cells));
            println!("{}", summary_line(&report));
        }
    }
    Ok(report.pass)
}

fn eval_cmd(plan_path: &Path, sigma_args: &SigmaArgs, symbolic: bool, format: Format) -> Outcome {
    let plan = load_plan(plan_path)?;
    let sigma = load_sigma(sigma_args, plan.assignment.as_ref())?;
    let d = eval_plan(&plan, &sigma).map_err(|e| Invalid(format!("{}: {e}", plan_path.display())))?;
    let n = d.n();
    if symbolic {
        match format {
            Format::Json => {
                let rows: Vec<Vec<String>> =
                    (0..=n).map(|p| (0..=n).map(|q| d.get(p, q).to_string()).collect()).collect();
                println!("{}", serde_json::to_string_pretty(&json!({"n": n, "m": plan.m, "entries": rows})).unwrap());
            }
            Format::Text => print!("{}", d.render_grid(|_, _, v| v.to_string())),
        }
        return Ok(true);
    }
    let values = d.eval_complete(&sigma).map_err(|e| Invalid(e.to_string()))?;
    match format {
        Format::Json => {
            let certified: Vec<Vec<bool>> = (0..=n)
                .map(|p| (0..=n).map(|q| d.get(p, q).as_constant().is_some()).collect())
                .collect();
            let doc = json!({"n": n, "m": plan.m, "values": values, "exact": certified});
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        Format::Text => {
            let cells = residue_cells(&d, plan.m, &sigma)?;
            println!("dimension {n}");
            print!("{}", d.render_rotated(|p, q, _| values[p][q].to_string() + " "));
            println!("mod {} (* = independent of the unknowns)", plan.m);
            print!("{}", render_residues(&d, &cells));
        }
    }
    Ok(true)
}

fn verify_cmd(plan_path: &Path, targets_path: &Path, sigma_args: &SigmaArgs, format: Format) -> Outcome {
    let plan = load_plan(plan_path)?;
    let targets = load_targets(targets_path)?;
    let sigma = load_sigma(sigma_args, plan.assignment.as_ref())?;
    let report = verify(&plan, &targets, &sigma).map_err(|e| Invalid(e.to_string()))?;
    print_report(&report, format);
    Ok(report.pass)
}

fn fuzz_cmd(n: usize, m: u64, trials: usize, seed: u64, format: Format) -> Outcome {
    if m < 2 {
        return Err(Invalid(format!("--m must be at least 2, got {m}")));
    }
    let s = fuzz(n, m, trials, seed);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&s).unwrap()),
        Format::Text => {
            for t in &s.trials {
                let status = if t.pass { "pass" } else { "FAIL" };
                match &t.error {
                    Some(e) => println!("trial {}: {status} ({e})", t.index),
                    None => println!("trial {}: {status}", t.index),
                }
            }
            println!("passed {}/{} (n = {n}, m = {m}, seed = {seed})", s.passed, s.trials.len());
        }
    }
    Ok(s.all_passed())
}

fn atoms_cmd(format: Format) -> Outcome {
    let specs = [
        AtomSpec::Point,
        AtomSpec::ProjectiveSpace(1),
        AtomSpec::ProjectiveSpace(2),
        AtomSpec::ProjectiveSpace(3),
        AtomSpec::EllipticCurve,
        AtomSpec::SerreSurface,
        AtomSpec::Hypersurface(3),
        AtomSpec::Hypersurface(4),
        AtomSpec::Hypersurface(5),
    ];
    let mut docs = Vec::new();
    for spec in specs {
        let label = spec.label();
        let d = atom(spec, &label).map_err(|e| Invalid(e.to_string()))?;
        let n = d.n();
        match format {
            Format::Text => {
                println!("{label} (dimension {n})");
                print!("{}", d.render_rotated(|_, _, v| v.to_string() + "  "));
                println!();
            }
            Format::Json => {
                let rows: Vec<Vec<String>> =
                    (0..=n).map(|p| (0..=n).map(|q| d.get(p, q).to_string()).collect()).collect();
                docs.push(json!({"atom": label, "n": n, "entries": rows}));
            }
        }
    }
    if format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&Value::Array(docs)).unwrap());
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve { n, m, targets, out, sigma, format } => solve(*n, *m, targets, out, sigma, *format),
        Command::Eval { plan, sigma, symbolic, format } => eval_cmd(plan, sigma, *symbolic, *format),
        Command::Verify { plan, targets, sigma, format } => verify_cmd(plan, targets, sigma, *format),
        Command::Fuzz { n, m, trials, seed, format } => fuzz_cmd(*n, *m, *trials, *seed, *format),
        Command::Atoms { format } => atoms_cmd(*format),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
