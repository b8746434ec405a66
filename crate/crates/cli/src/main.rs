mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isofam::checks::{CheckOutcome, Command, Session, SessionOptions};
use isofam::duality::dihedral_orbits;
use isofam::omega::Sign;
use isofam::order::{close, phi_step};
use isofam::sectors::{build_sector_table, leq_tau, SectorContext};
use isofam::{Case, Error, Setup};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "isofam", version, about = "Enumerate and verify families of odd intervals over GF(2)")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List every admissible family with its image vector.
    Enumerate(RunArgs),
    /// Run the perfectness checks and the laws of the chosen case.
    Verify(RunArgs),
    /// The containment order on families.
    Order(RunArgs),
    /// The coefficient matrix of the perp indicators (quotient case).
    Fourier(RunArgs),
    /// The edge-marked collection with signs and sectors (quotient case).
    Omega(RunArgs),
    /// Sector tables over the quotient by [eps] (quotient case).
    Sectors(RunArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Columns {
    All,
    Spot,
}

#[derive(Args)]
struct RunArgs {
    /// a (odd path), b (cycle), c (cycle modulo e_S) or even (even path).
    #[arg(long, default_value = "c", value_parser = parse_case)]
    case: Case,
    #[arg(long)]
    n: usize,
    /// Marked edge as two adjacent 1-based vertices, e.g. `6,7`.
    #[arg(long)]
    edge: Option<String>,
    /// Preferred endpoint of the edge (1-based).
    #[arg(long)]
    tau: Option<usize>,
    /// The path J as 1-based vertices, e.g. `1,2,3,4`.
    #[arg(long = "j")]
    j: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, env = "ISOFAM_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Compare the column at 0 with the printed N = 7 values.
    #[arg(long)]
    compare_paper: bool,
    /// Coefficient columns to solve: all, or one per dihedral orbit.
    /// Defaults to all for N <= 9.
    #[arg(long, value_enum)]
    columns: Option<Columns>,
}

fn parse_case(s: &str) -> Result<Case, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_list(s: &str, n: usize) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: usize = t
                .parse()
                .map_err(|_| Error::Usage(format!("`{t}` is not a vertex")))?;
            if v == 0 || v > n {
                return Err(Error::Usage(format!("vertex {v} is not in 1..={n}")));
            }
            Ok(v - 1)
        })
        .collect()
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

struct Report {
    artifact: String,
    checks: Vec<CheckOutcome>,
}

fn diag(v: Value) {
    eprintln!("{v}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Enumerate(a) => (Command::Enumerate, a),
        Cmd::Verify(a) => (Command::Verify, a),
        Cmd::Order(a) => (Command::Order, a),
        Cmd::Fourier(a) => (Command::Fourier, a),
        Cmd::Omega(a) => (Command::Omega, a),
        Cmd::Sectors(a) => (Command::Sectors, a),
    };
    match run(command, &args) {
        Ok(report) => {
            if let Err(e) = emit(&args, &report.artifact) {
                diag(json!({ "level": "error", "message": e.to_string() }));
                return ExitCode::from(2);
            }
            let mut failed = 0;
            for c in &report.checks {
                if c.passed {
                    continue;
                }
                let level = if c.informational { "warning" } else { "error" };
                failed += usize::from(!c.informational);
                diag(json!({
                    "level": level,
                    "check": c.id,
                    "violations": c.violations.len(),
                    "first": c.violations.iter().take(5).collect::<Vec<_>>(),
                }));
            }
            if failed > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let code = match e {
                Error::Verification(_) | Error::DegenerateForm { .. } | Error::CoefficientOverflow { .. } => 1,
                _ => 2,
            };
            diag(json!({ "level": "error", "message": e.to_string() }));
            ExitCode::from(code)
        }
    }
}

fn emit(args: &RunArgs, artifact: &str) -> std::io::Result<()> {
    match &args.output {
        Some(path) => std::fs::write(path, artifact),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(artifact.as_bytes())?;
            out.flush()
        }
    }
}

fn allowed(command: Command) -> &'static [Format] {
    match command {
        Command::Enumerate => &[Format::Json, Format::Csv, Format::Text],
        Command::Verify => &[Format::Json, Format::Text],
        Command::Order => &[Format::Json, Format::Csv, Format::Dot, Format::Text],
        Command::Fourier => &[Format::Json, Format::Csv, Format::Text],
        Command::Omega => &[Format::Json, Format::Text],
        Command::Sectors => &[Format::Json, Format::Csv, Format::Text],
    }
}

fn options(command: Command, args: &RunArgs, setup: &Setup) -> Result<SessionOptions, Error> {
    let quotient = setup.case() == Case::CycleQuotient;
    let needs_quotient = matches!(command, Command::Fourier | Command::Omega | Command::Sectors);
    if needs_quotient && !quotient {
        return Err(usage("this command needs --case c"));
    }
    if !allowed(command).contains(&args.format) {
        return Err(usage("this format is not available for the command"));
    }
    if command != Command::Fourier && (args.compare_paper || args.columns.is_some()) {
        return Err(usage("--compare-paper and --columns belong to fourier"));
    }
    if command != Command::Sectors && (args.tau.is_some() || args.j.is_some()) {
        return Err(usage("--tau and --j belong to sectors"));
    }
    if args.compare_paper && setup.n() != 7 {
        return Err(usage("--compare-paper needs --n 7"));
    }
    let n = setup.size();
    let mut opts = SessionOptions {
        compare_paper: args.compare_paper,
        ..Default::default()
    };
    if let Some(e) = &args.edge {
        if !quotient {
            return Err(usage("--edge needs --case c"));
        }
        let v = parse_list(e, n)?;
        let [a, b] = v[..] else {
            return Err(usage("--edge takes two vertices"));
        };
        if !setup.is_edge(a, b) {
            return Err(usage(format!("{{{}, {}}} is not an edge", a + 1, b + 1)));
        }
        opts.edge = Some((a.min(b), a.max(b)));
    }
    if let Some(t) = args.tau {
        let t = parse_list(&t.to_string(), n)?[0];
        let (a, b) = opts.edge.unwrap_or_else(|| isofam::affine::default_edge(setup));
        if t != a && t != b {
            return Err(usage(format!("tau = {} is not an endpoint of the edge", t + 1)));
        }
        opts.tau = Some(t);
    }
    if let Some(j) = &args.j {
        let mask = parse_list(j, n)?.iter().fold(0u64, |m, &s| m | 1 << s);
        let edge = opts.edge.unwrap_or_else(|| isofam::affine::default_edge(setup));
        isofam::sectors::validate_j(setup, edge, mask)?;
        opts.j_mask = Some(mask);
    }
    if command == Command::Fourier {
        let spot = match args.columns {
            Some(c) => c == Columns::Spot,
            None => setup.n() > 9,
        };
        if spot {
            let orbits = dihedral_orbits(setup)?;
            opts.fourier_columns = Some(orbits.orbits.iter().map(|o| o.representative).collect());
        }
    }
    Ok(opts)
}

fn run(command: Command, args: &RunArgs) -> Result<Report, Error> {
    let setup = Setup::build(args.case, args.n)?;
    let opts = options(command, args, &setup)?;
    let mut warn = |m: String| diag(json!({ "level": "warning", "message": m }));
    let table = cache::load_or_enumerate(args.cache_dir.as_deref(), &setup, &mut warn);
    let mut session = Session::new(setup, table, opts)?;
    let checks = session.run_suite(command);
    let artifact = match command {
        Command::Enumerate => enumerate_artifact(&session, args.format),
        Command::Verify => checks_artifact(&session, "verify", &checks, args.format, json!({})),
        Command::Order => order_artifact(&mut session, &checks, args.format)?,
        Command::Fourier => fourier_artifact(&mut session, &checks, args.format)?,
        Command::Omega => omega_artifact(&mut session, &checks, args.format)?,
        Command::Sectors => sectors_artifact(&mut session, &checks, args.format)?,
    };
    Ok(Report { artifact, checks })
}

fn head(session: &Session, command: &str) -> Value {
    json!({ "command": command, "case": session.setup().case().tag(), "n": session.setup().n() })
}

fn check_values(checks: &[CheckOutcome]) -> Vec<Value> {
    checks
        .iter()
        .map(|c| {
            let mut v = json!({
                "id": c.id,
                "passed": c.passed,
                "informational": c.informational,
                "violationCount": c.violations.len(),
                "violations": c.violations.iter().take(20).collect::<Vec<_>>(),
            });
            if let Some(d) = &c.detail {
                v["detail"] = d.clone();
            }
            v
        })
        .collect()
}

fn passed(checks: &[CheckOutcome]) -> bool {
    checks.iter().all(|c| c.passed || c.informational)
}

fn text_checks(checks: &[CheckOutcome]) -> String {
    let mut out = String::new();
    for c in checks {
        let tag = match (c.passed, c.informational) {
            (true, _) => "PASS",
            (false, true) => "INFO",
            (false, false) => "FAIL",
        };
        let _ = write!(out, "{tag}  {}", c.id);
        if !c.passed {
            let _ = write!(out, " ({} entries)", c.violations.len());
        }
        out.push('\n');
    }
    out
}

fn checks_artifact(session: &Session, command: &str, checks: &[CheckOutcome], format: Format, extra: Value) -> String {
    match format {
        Format::Text => {
            let s = session.setup();
            format!(
                "{command} case {} N = {}: {} families\n{}",
                s.case().tag(),
                s.n(),
                session.table().len(),
                text_checks(checks)
            )
        }
        _ => {
            let mut v = head(session, command);
            v["families"] = json!(session.table().len());
            v["passed"] = json!(passed(checks));
            v["checks"] = json!(check_values(checks));
            if let Value::Object(map) = extra {
                for (k, x) in map {
                    v[k] = x;
                }
            }
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    }
}

fn enumerate_artifact(session: &Session, format: Format) -> String {
    let table = session.table();
    match format {
        Format::Csv => {
            let mut out = String::from("family,eps,dim\n");
            for r in table.records() {
                let _ = writeln!(out, "\"{}\",{},{}", r.family, r.eps.mask(), r.subspace.dim());
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in table.records() {
                let _ = writeln!(out, "{}\t{}", r.family, r.eps);
            }
            out
        }
        _ => table.to_json_lines(),
    }
}

fn order_artifact(session: &mut Session, checks: &[CheckOutcome], format: Format) -> Result<String, Error> {
    let labels: Vec<String> = session.table().families().map(|b| b.to_string()).collect();
    let po = close(&phi_step(session.table()))?;
    Ok(match format {
        Format::Dot => po.to_dot(&labels),
        Format::Csv => po.to_csv(&labels),
        _ => {
            let covers: Vec<[usize; 2]> = po.covers().iter().map(|&(i, j)| [i, j]).collect();
            let extra = json!({ "nodes": labels, "covers": covers });
            checks_artifact(session, "order", checks, format, extra)
        }
    })
}

fn fourier_artifact(session: &mut Session, checks: &[CheckOutcome], format: Format) -> Result<String, Error> {
    let orbits = dihedral_orbits(session.setup())?;
    let cm = session.cmatrix()?.clone();
    if format == Format::Csv {
        return Ok(cm.to_csv());
    }
    let nonzero: usize = cm.columns().map(|(_, c)| c.iter().filter(|&&v| v != 0).count()).sum();
    let extra = json!({
        "width": cm.width(),
        "columns": cm.columns().count(),
        "nonzero": nonzero,
        "orbitSizes": orbits.sizes(),
        "orbits": serde_json::to_value(&orbits).expect("json"),
    });
    Ok(match format {
        Format::Text => {
            let mut out = checks_artifact(session, "fourier", checks, format, extra);
            let _ = writeln!(out, "columns {} nonzero {nonzero} orbits {}", cm.columns().count(), orbits.orbits.len());
            if let Some(c) = checks.iter().find(|c| c.id == "fourier.printed_table") {
                if let Some(rows) = c.detail.as_ref().and_then(|d| d.get("rows")).and_then(Value::as_array) {
                    for r in rows {
                        let _ = writeln!(
                            out,
                            "{:>6} orbit {:>2} computed {:>3} printed {:>3}",
                            r["label"].as_str().unwrap_or(""),
                            r["orbit_size"],
                            r["computed"],
                            r["printed"]
                        );
                    }
                }
            }
            out
        }
        _ => checks_artifact(session, "fourier", checks, format, extra),
    })
}

fn omega_artifact(session: &mut Session, checks: &[CheckOutcome], format: Format) -> Result<String, Error> {
    let omega = session.omega()?;
    Ok(match format {
        Format::Text => {
            let mut out = String::new();
            for r in omega.records() {
                let sector = r.sector.map_or("-".to_string(), |t| (t + 1).to_string());
                let _ = writeln!(out, "{}\t{}\tn={}\tsector={sector}", r.family, r.sign.symbol(), r.n);
            }
            out.push_str(&text_checks(checks));
            out
        }
        _ => omega.to_json_lines(),
    })
}

fn sectors_artifact(session: &mut Session, checks: &[CheckOutcome], format: Format) -> Result<String, Error> {
    let (j, preferred) = session.sector_choice()?;
    let (a, b) = session.edge();
    let setup = session.setup().clone();
    let omega = session.omega()?.clone();
    let mut tables = Vec::new();
    let mut csv = String::from("sign,tau,y,members\n");
    for sign in [Sign::Plus, Sign::Minus] {
        for tau in [a, b] {
            let ctx = SectorContext::new(&setup, omega.marker(), sign, tau, j)?;
            let t = build_sector_table(&setup, &omega, &ctx)?;
            let po = leq_tau(&t)?;
            tables.push(t.to_json(&po));
            csv.push_str(&t.collection_csv_rows());
        }
    }
    Ok(match format {
        Format::Csv => csv,
        _ => {
            let extra = json!({
                "edge": [a + 1, b + 1],
                "J": isofam::f2::bits(j).map(|s| s + 1).collect::<Vec<_>>(),
                "preferredTau": preferred + 1,
                "tables": tables,
            });
            checks_artifact(session, "sectors", checks, format, extra)
        }
    })
}
