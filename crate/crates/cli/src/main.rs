use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ingleton_core::ci::ci_structure;
use ingleton_core::dist::{format_rational, JointTable};
use ingleton_core::entropy::{entropy_vector, exact_sign};
use ingleton_core::essential::{self, CurveFamily, DEFAULT_ORDER};
use ingleton_core::inference::{self, AntecedentDB};
use ingleton_core::ingleton::{self, ingleton_functional, IngletonLabels, INGLETON_COLUMN};
use ingleton_core::model::{self, HeatmapConfig, OptimizeMode, ParamPoint, Region, Score, SearchBounds};

/// Exact verification tools for conditional Ingleton inequalities on four binary variables.
#[derive(Parser, Debug)]
#[command(name = "ingleton", version, about)]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "INGLETON_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact CI structure and Ingleton signs of a distribution file.
    VerifyDist {
        file: PathBuf,
        /// Fail unless ◻(XY|ZU) is negative.
        #[arg(long)]
        require_violation: bool,
    },
    /// Print the known mask identities.
    Masks {
        /// Check every identity exactly; exit 1 on failure.
        #[arg(long)]
        verify: bool,
        /// Also derive the shortest masks from the circuit census.
        #[arg(long)]
        shortest: bool,
    },
    /// Enumerate the circuits of the functional matrix.
    Circuits {
        /// Only print the summary counts.
        #[arg(long)]
        count: bool,
        /// Write all circuits as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for rational points with a perfect-square discriminant.
    Search(SearchArgs),
    /// Sign map of ρ₂ over the (p1111, p1011) plane.
    Heatmap {
        #[arg(long, default_value_t = 100)]
        res: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local optimization of a score on the model.
    Optimize {
        /// Minimize instead of maximize.
        #[arg(long)]
        min: bool,
        /// Restrict to the default box around the counterexample region.
        #[arg(long = "box")]
        in_box: bool,
        /// Optimize ρ₂ instead of ρ₁.
        #[arg(long)]
        rho2: bool,
        /// Start point p0110,p1011,p1111 (default 1/16,1/16,1/16).
        #[arg(long, value_delimiter = ',')]
        start: Option<Vec<f64>>,
    },
    /// Series expansions and essential conditionality certificates.
    Essential(EssentialArgs),
    /// Coverage of the CI-structure lattice by antecedents and counterexamples.
    Closure {
        #[arg(long)]
        db: Option<PathBuf>,
        /// Restrict to structures between two named or listed structures, e.g. `L0 L`.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        interval: Option<Vec<String>>,
        /// Collapse the uncovered list to one structure per symmetry class.
        #[arg(long)]
        dedup: bool,
    },
    /// Non-Ingleton score of a distribution file.
    Score {
        file: PathBuf,
        #[arg(long, conflicts_with = "rho2")]
        rho1: bool,
        #[arg(long)]
        rho2: bool,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, default_value_t = 99)]
    max_b: u64,
    #[arg(long, default_value_t = 11)]
    max_d: u64,
    /// Widen every rectangle by this percentage on each side.
    #[arg(long, default_value_t = 10)]
    inflate: u32,
}

#[derive(Args, Debug)]
struct EssentialArgs {
    /// Curve family JSON (default: the built-in sparse family).
    #[arg(long, conflicts_with = "sample")]
    family: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Sample this many random families and report the first certificate.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Exit status plus an error message.
enum Failure {
    Verification(String),
    Usage(String),
}

impl From<ingleton_core::Error> for Failure {
    fn from(e: ingleton_core::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn load_table(path: &Path) -> std::result::Result<JointTable, Failure> {
    JointTable::from_json(&read(path)?).map_err(|e| Failure::Verification(format!("{}: {e}", path.display())))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn verify_dist(file: &Path, require_violation: bool, as_json: bool) -> CmdResult {
    let t = load_table(file)?;
    let cis = ci_structure(&t);
    let h = entropy_vector(&t);
    let rows: Vec<(IngletonLabels, i8, f64)> = IngletonLabels::distinct()
        .into_iter()
        .map(|l| {
            let f = ingleton_functional(l);
            (l, exact_sign(&f, &t).sign, f.eval(&h))
        })
        .collect();
    let main = exact_sign(&ingleton::ingleton_xy_zu(), &t);
    if as_json {
        print_json(&json!({
            "ci_structure": cis,
            "ingleton": rows.iter().map(|(l, s, v)| json!({"expression": l.to_string(), "sign": s, "value": v})).collect::<Vec<_>>(),
            "certificate": main,
        }));
    } else {
        println!("CI structure: {cis}");
        for (l, s, v) in &rows {
            let s = match s {
                1 => "+1",
                0 => "0",
                _ => "-1",
            };
            println!("{l}: sign {s}, value {v:.6}");
        }
        println!(
            "◻(XY|ZU) certificate: scale {}, numerator {} digits, denominator {} digits",
            main.scale,
            main.numerator.to_string().len(),
            main.denominator.to_string().len()
        );
    }
    if require_violation && main.sign != -1 {
        return Err(Failure::Verification("◻(XY|ZU) is not negative".into()));
    }
    Ok(())
}

fn masks(verify: bool, shortest: bool, as_json: bool) -> CmdResult {
    let mut all = ingleton::known_masks();
    all.extend(ingleton::rearranged_identities());
    if shortest {
        all.extend(ingleton::shortest_masks(&ingleton::circuits(&ingleton::functional_matrix()))?);
    }
    let results: Vec<(String, String, bool)> =
        all.iter().map(|m| (m.name.clone(), m.to_string(), m.verify())).collect();
    if as_json {
        print_json(&json!(results
            .iter()
            .map(|(n, m, ok)| json!({"name": n, "identity": m, "verified": ok}))
            .collect::<Vec<_>>()));
    } else {
        for (name, m, ok) in &results {
            if verify {
                println!("{name:>10}  {}  {m}", if *ok { "ok  " } else { "FAIL" });
            } else {
                println!("{name:>10}  {m}");
            }
        }
    }
    if verify && results.iter().any(|r| !r.2) {
        return Err(Failure::Verification("a mask identity does not hold".into()));
    }
    Ok(())
}

fn circuits(count: bool, out: Option<&Path>, as_json: bool) -> CmdResult {
    let m = ingleton::functional_matrix();
    let cs = ingleton::circuits(&m);
    let through: Vec<_> = cs.iter().filter(|c| c.coefficient(INGLETON_COLUMN) != 0).collect();
    let min = through.iter().map(|c| c.support_size()).min().unwrap_or(0);
    let shortest = through.iter().filter(|c| c.support_size() == min).count();
    if let Some(path) = out {
        let names = ingleton::column_names();
        let mut csv = String::new();
        for c in &cs {
            csv.push_str(&c.to_csv_line(&names));
            csv.push('\n');
        }
        write(path, &csv)?;
    }
    if as_json {
        print_json(
            &json!({"total": cs.len(), "ingleton": through.len(), "shortest": shortest, "shortest_support": min}),
        );
    } else {
        println!("total={} ingleton={} shortest={}", cs.len(), through.len(), shortest);
        if !count && out.is_none() {
            for c in cs.iter().filter(|c| c.coefficient(INGLETON_COLUMN) != 0 && c.support_size() == min) {
                println!("{}", c.to_csv_line(&ingleton::column_names()));
            }
        }
    }
    Ok(())
}

fn search(a: &SearchArgs, as_json: bool) -> CmdResult {
    if a.max_b == 0 || a.max_d == 0 {
        return Err(Failure::Usage("--max-b and --max-d must be positive".into()));
    }
    let bounds = SearchBounds::default_box(a.max_b, a.max_d).inflate(a.inflate);
    let found = model::search_rational(&bounds);
    if as_json {
        print_json(&serde_json::to_value(&found).expect("serializable"));
    } else {
        println!("{} counterexample(s)", found.len());
        for c in &found {
            println!(
                "p1011 = {}/{}, p1111 = {}/{}, p0110 = {}, ◻ sign {}",
                c.a,
                c.b,
                c.c,
                c.d,
                format_rational(&c.p0110),
                c.certificate.sign
            );
        }
    }
    Ok(())
}

fn heatmap(res: usize, out: Option<&Path>, as_json: bool) -> CmdResult {
    let cells = model::heatmap(&HeatmapConfig { resolution: res, ..HeatmapConfig::default() })?;
    let csv = model::heatmap_csv(&cells);
    match out {
        Some(path) => write(path, &csv)?,
        None if !as_json => print!("{csv}"),
        None => {}
    }
    let count = |s: model::CellStatus| cells.iter().filter(|c| c.status == s).count();
    let (inv, neg, pos) =
        (count(model::CellStatus::Invalid), count(model::CellStatus::Neg), count(model::CellStatus::Pos));
    if as_json {
        print_json(&json!({"cells": cells.len(), "invalid": inv, "neg": neg, "pos": pos}));
    } else if out.is_some() {
        println!("cells={} invalid={inv} neg={neg} pos={pos}", cells.len());
    }
    Ok(())
}

fn optimize(min: bool, in_box: bool, rho2: bool, start: Option<&[f64]>, as_json: bool) -> CmdResult {
    let start = match start {
        Some([a, b, c]) => ParamPoint::new(*a, *b, *c),
        Some(_) => return Err(Failure::Usage("--start takes exactly three values".into())),
        None => ParamPoint::new(1.0 / 16.0, 1.0 / 16.0, 1.0 / 16.0),
    };
    let which = if rho2 { Score::Rho2 } else { Score::Rho1 };
    let mode = if min { OptimizeMode::Min } else { OptimizeMode::Max };
    let region = if in_box { Region::default_box() } else { Region::T1 };
    let (pt, v) = model::optimize_score(&start, which, mode, region)?;
    if as_json {
        print_json(&json!({"p0110": pt.p0110, "p1011": pt.p1011, "p1111": pt.p1111, "value": v}));
    } else {
        println!("value {v:.6} at p0110 = {:.5}, p1011 = {:.5}, p1111 = {:.5}", pt.p0110, pt.p1011, pt.p1111);
    }
    Ok(())
}

fn essential_cmd(a: &EssentialArgs, as_json: bool) -> CmdResult {
    if a.order == 0 {
        return Err(Failure::Usage("--order must be at least 1".into()));
    }
    let assumptions = essential::xz_yz_given_u();
    if let Some(n) = a.sample {
        let families = essential::sample_families(a.seed, n.max(1));
        return match essential::find_certificate(&assumptions, &families, a.order) {
            Some(cert) => {
                if as_json {
                    print_json(&serde_json::to_value(&cert).expect("serializable"));
                } else {
                    let idx = families.iter().position(|f| *f == cert.family).expect("sampled");
                    println!("certificate from sample #{idx} (seed {}), order {}", a.seed, cert.order);
                    println!("{}", cert.family.to_json());
                }
                Ok(())
            }
            None => Err(Failure::Verification(format!("no certificate among {n} sampled families"))),
        };
    }
    let fam = match &a.family {
        Some(path) => CurveFamily::from_json(&read(path)?)?,
        None => essential::reference_family(),
    };
    let conclusion = essential::functional_series(&ingleton::ingleton_xy_zu(), &fam, a.order)?;
    let deltas = assumptions
        .iter()
        .map(|s| Ok((s.to_string(), essential::functional_series(&s.delta_functional(), &fam, a.order)?)))
        .collect::<ingleton_core::Result<Vec<_>>>()?;
    let cert = essential::prove_essential(&assumptions, &fam, a.order);
    if as_json {
        let series = |s: &essential::EpsSeries| {
            (0..=s.order()).map(|k| json!({"k": k, "c": s.c(k), "d": format_rational(s.d(k))})).collect::<Vec<_>>()
        };
        print_json(&json!({
            "ingleton": series(&conclusion),
            "assumptions": deltas.iter().map(|(n, s)| json!({"statement": n, "series": series(s)})).collect::<Vec<_>>(),
            "certificate": cert.as_ref().ok(),
        }));
    } else {
        println!("◻(XY|ZU) = {conclusion}");
        for (n, s) in &deltas {
            println!("{n}: △ = {s}");
        }
        match &cert {
            Ok(c) => println!("certificate: order {}, ε^k·log ε coefficient {}", c.order, c.conclusion_logeps),
            Err(e) => println!("no certificate: {e}"),
        }
    }
    cert.map(|_| ()).map_err(|e| Failure::Verification(e.to_string()))
}

fn closure(db: Option<&Path>, interval: Option<&[String]>, dedup: bool, as_json: bool) -> CmdResult {
    let db = match db {
        Some(path) => AntecedentDB::from_json(&read(path)?)?,
        None => inference::default_db(),
    }
    .closed();
    let restrict = match interval {
        Some([lo, hi]) => Some((inference::named_structure(lo)?, inference::named_structure(hi)?)),
        _ => None,
    };
    let shape = |v: Vec<_>| if dedup { inference::dedup_by_symmetry(&v) } else { v };
    let before = shape(inference::enumerate_uncovered(&db.prior(), restrict)?);
    let after = shape(inference::enumerate_uncovered(&db, restrict)?);
    let external: Vec<&str> =
        db.counterexamples.iter().filter(|r| r.is_external()).map(|r| r.source.as_str()).collect();
    if as_json {
        print_json(&json!({"before": before, "after": after, "external_records": external, "pending": db.pending}));
    } else {
        println!("uncovered before={} after={}", before.len(), after.len());
        if before.len() <= 64 {
            for s in &before {
                println!("  open before: {s}");
            }
        }
        if after.len() <= 64 {
            for s in &after {
                println!("  open after: {s}");
            }
        }
    }
    Ok(())
}

fn score(file: &Path, rho2: bool, as_json: bool) -> CmdResult {
    let t = load_table(file)?;
    let which = if rho2 { Score::Rho2 } else { Score::Rho1 };
    let v = model::score(&t, which);
    if as_json {
        print_json(&json!({"score": if rho2 { "rho2" } else { "rho1" }, "value": v}));
    } else {
        println!("{v:.9}");
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    let j = cli.json;
    match cli.command {
        Command::VerifyDist { file, require_violation } => verify_dist(&file, require_violation, j),
        Command::Masks { verify, shortest } => masks(verify, shortest, j),
        Command::Circuits { count, out } => circuits(count, out.as_deref(), j),
        Command::Search(a) => search(&a, j),
        Command::Heatmap { res, out } => heatmap(res, out.as_deref(), j),
        Command::Optimize { min, in_box, rho2, start } => optimize(min, in_box, rho2, start.as_deref(), j),
        Command::Essential(a) => essential_cmd(&a, j),
        Command::Closure { db, interval, dedup } => closure(db.as_deref(), interval.as_deref(), dedup, j),
        Command::Score { file, rho2, .. } => score(&file, rho2, j),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool configured once");
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
