use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use telescoping::calculus::{
    botany_family_member, botany_seed, compose_recipe, BlockName, ExponentConvention, FamilyRecipe, Registry,
};
use telescoping::catalog::{witness, Catalog};
use telescoping::export::{render_svg, write_csv};
use telescoping::geography::{char_from_es, enumerate_points, prop14_betti};
use telescoping::homeo::{hk_applicable, is_odd_prime, prototype_for};
use telescoping::verify::{self, parse_primes, RunConfig, Scope};

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "telescoping", version, about = "Exact telescoping-triple calculus and 4-manifold geography")]
struct Cli {
    /// Block registry (JSON); defaults to the built-in registry.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 10)]
    n_max: u32,
    #[arg(long, global = true, default_value_t = 10)]
    m_max: u32,
    #[arg(long, global = true, default_value_t = 5)]
    g_max: u32,
    /// Comma-separated odd primes, or an inclusive range such as `3..47`.
    #[arg(long, global = true, default_value = "3..47")]
    primes: String,
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[arg(long, global = true, default_value = "kill-xp")]
    exponent_convention: ExponentConvention,
    /// Run botany even when n + m < 2; the criterion is then reported as computed.
    #[arg(long, global = true)]
    override_hk: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Block registry operations.
    Blocks {
        #[command(subcommand)]
        action: BlocksAction,
    },
    /// Run a verification suite and print an NDJSON report.
    Verify {
        /// theorem1, prop14, pi1, hk or all.
        scope: Scope,
    },
    /// Enumerate the geography points within the bounds.
    Enumerate,
    /// Build members of the exotic family over one geography point.
    Botany {
        #[arg(long)]
        family: u8,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        p: u32,
        /// Family member indices: comma-separated or an inclusive range `1..5`.
        #[arg(long, default_value = "1..5")]
        members: String,
    },
}

#[derive(Subcommand, Debug)]
enum BlocksAction {
    List,
}

enum Failure {
    Config(String),
    Verification(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn config(cli: &Cli) -> Result<RunConfig, Failure> {
    let cfg = RunConfig {
        registry: cli.registry.clone(),
        n_max: cli.n_max,
        m_max: cli.m_max,
        g_max: cli.g_max,
        primes: parse_primes(&cli.primes).map_err(Failure::Config)?,
        csv: cli.csv.clone(),
        svg: cli.svg.clone(),
        catalog: cli.catalog.clone(),
        convention: cli.exponent_convention,
        override_hk: cli.override_hk,
    };
    cfg.validate().map_err(Failure::Config)?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = config(&cli)?;
    let registry = cfg.load_registry().map_err(|e| Failure::Config(e.to_string()))?;
    match cli.command {
        Command::Blocks {
            action: BlocksAction::List,
        } => blocks_list(&registry),
        Command::Verify { scope } => cmd_verify(scope, &registry, &cfg),
        Command::Enumerate => cmd_enumerate(&registry, &cfg),
        Command::Botany {
            family,
            n,
            m,
            g,
            p,
            ref members,
        } => {
            let recipe = FamilyRecipe::new(family, n, m, g).map_err(|e| Failure::Config(e.to_string()))?;
            let members = parse_members(members).map_err(Failure::Config)?;
            cmd_botany(&registry, &recipe, p, &members, &cfg)
        }
    }
}

fn blocks_list(registry: &Registry) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{:<6} {:>4} {:>6} {:>5} {:>4}  status", "block", "e", "sigma", "c", "chi");
    let mut failed = Vec::new();
    for entry in registry.entries() {
        let name: BlockName = if entry.e_per_genus.is_some() || entry.sigma_per_genus.is_some() {
            BlockName::B(0)
        } else {
            entry.name.parse().map_err(|e: telescoping::calculus::CalculusError| Failure::Config(e.to_string()))?
        };
        let label = match name {
            BlockName::B(_) => format!("{}_g", entry.name),
            _ => entry.name.clone(),
        };
        let e = match (entry.e_per_genus, name) {
            (Some(k), BlockName::B(_)) => format!("{}+{k}g", entry.e),
            _ => entry.e.to_string(),
        };
        let (status, c, chi) = match registry.load_block(name) {
            Ok(t) => match char_from_es(t.e, t.sigma) {
                Ok(cn) => ("ok".to_string(), cn.c1sq.to_string(), cn.chi_h.to_string()),
                Err(err) => (format!("FAIL {err}"), "-".into(), "-".into()),
            },
            Err(err) => (format!("FAIL {err}"), "-".into(), "-".into()),
        };
        if status != "ok" {
            failed.push(label.clone());
        }
        let _ = writeln!(out, "{label:<6} {e:>4} {:>6} {c:>5} {chi:>4}  {status}", entry.sigma);
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Config(format!("blocks failed validation: {}", failed.join(", "))))
    }
}

fn cmd_verify(scope: Scope, registry: &Registry, cfg: &RunConfig) -> Result<(), Failure> {
    let report = verify::run(scope, registry, cfg);
    print!("{}", report.to_ndjson());
    match report.first_failure() {
        None => {
            eprintln!("{scope}: {} checks, 0 failures", report.records.len());
            Ok(())
        }
        Some(first) => Err(Failure::Verification(format!(
            "{} of {} checks failed; first: {} {}: {}",
            report.failure_count(),
            report.records.len(),
            first.subject,
            first.identity,
            first.detail
        ))),
    }
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn cmd_enumerate(registry: &Registry, cfg: &RunConfig) -> Result<(), Failure> {
    let points = enumerate_points(cfg.n_max, cfg.m_max, cfg.g_max);
    let mut buf = Vec::new();
    write_csv(registry, &points, &mut buf).map_err(|e| Failure::Config(e.to_string()))?;
    match &cfg.csv {
        Some(path) => write_file(path, &buf)?,
        None => {
            let _ = io::stdout().lock().write_all(&buf);
        }
    }
    if let Some(path) = &cfg.svg {
        write_file(path, render_svg(&points).as_bytes())?;
    }
    if let Some(path) = &cfg.catalog {
        let mut catalog = Catalog::open(path, registry).map_err(|e| Failure::Config(e.to_string()))?;
        let p = cfg.primes[0];
        let mut entries = Vec::with_capacity(points.len());
        for pt in &points {
            let entry = witness(registry, &pt.family, pt.group, p, cfg.convention)
                .map_err(|e| Failure::Verification(e.to_string()))?;
            entries.push(entry);
        }
        let added = catalog.append(entries).map_err(|e| Failure::Config(e.to_string()))?;
        eprintln!("catalog {}: {added} new entries, {} total", path.display(), catalog.entries().len());
    }
    eprintln!("{} points", points.len());
    Ok(())
}

#[derive(Serialize)]
struct MemberReport {
    member: u32,
    pi1: String,
    symplectic: bool,
    prototype_b2_plus: i64,
    prototype_b2_minus: i64,
    e: i64,
    sigma: i64,
    hk_applicable: bool,
}

fn cmd_botany(
    registry: &Registry,
    recipe: &FamilyRecipe,
    p: u32,
    members: &[u32],
    cfg: &RunConfig,
) -> Result<(), Failure> {
    if !is_odd_prime(p) {
        return Err(Failure::Config(format!("p = {p} is not an odd prime")));
    }
    let betti = prop14_betti(recipe);
    let hk = hk_applicable(betti.b2(), betti.sigma(), false, 1);
    if recipe.size() < 2 && !cfg.override_hk {
        return Err(Failure::Verification(format!(
            "refusing {recipe}: n + m = {} < 2 and the criterion {} (b2 - |sigma| = {}, needs > 4); pass --override-hk to build anyway",
            recipe.size(),
            if hk { "holds" } else { "fails" },
            betti.b2() - betti.sigma().abs()
        )));
    }
    let t = compose_recipe(registry, recipe).map_err(|e| Failure::Config(e.to_string()))?;
    let x0 = botany_seed(&t, i64::from(p)).map_err(|e| Failure::Verification(e.to_string()))?;
    let mut out = io::stdout().lock();
    for &n in members {
        let x = botany_family_member(&x0, n, p, cfg.convention).map_err(|e| Failure::Verification(e.to_string()))?;
        let proto = prototype_for(&x, p).map_err(|e| Failure::Verification(e.to_string()))?;
        let report = MemberReport {
            member: n,
            pi1: x.invariants().to_string(),
            symplectic: x.symplectic,
            prototype_b2_plus: proto.b2_plus,
            prototype_b2_minus: proto.b2_minus,
            e: x.e,
            sigma: x.sigma,
            hk_applicable: hk,
        };
        let _ = writeln!(out, "{}", serde_json::to_string(&report).expect("report serializes"));
    }
    Ok(())
}

fn parse_members(text: &str) -> Result<Vec<u32>, String> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|e| format!("bad member range {text:?}: {e}"))?;
        let hi: u32 = hi.trim().parse().map_err(|e| format!("bad member range {text:?}: {e}"))?;
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse().map_err(|e| format!("bad member {s:?}: {e}")))
        .collect()
}
