mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use logarr::derivation::VFieldJson;
use logarr::group::{self, DEFAULT_ELEMENT_CAP};
use logarr::hodge;
use logarr::multiarr::{parse_nu, saito_check, search_basis};
use logarr::universal::{check_universal, shifted_universality, TComb};
use logarr::{CycNum, Error, FlatFrame, GroupData, Mult};
use serde_json::json;

use report::{Check, RunReport};

#[derive(Parser)]
#[command(name = "logarr", version, about = "Exact checks on reflection multi-arrangements")]
struct Cli {
    /// Write the machine-readable report here.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Give up when the group closure exceeds this many elements.
    #[arg(long, global = true, default_value_t = DEFAULT_ELEMENT_CAP)]
    element_cap: usize,
    /// Record wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degrees, exponents, coexponents and hyperplane data of a catalog group.
    Group {
        #[arg(long)]
        group: String,
    },
    /// Saito criterion for fields read from a JSON file, or for a basis found
    /// by degree search when no file is given.
    SaitoCheck {
        #[arg(long)]
        group: String,
        /// `k*omega+c`, an integer, or a bracketed per-orbit/per-hyperplane list.
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long)]
        fields: Option<PathBuf>,
    },
    /// Hodge filtration checks over a window of k.
    Hodge {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        k_min: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        k_max: Option<i64>,
    },
    /// Universality certificate for E_k at multiplicity -k omega.
    Universal {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Shift a (k omega)-universal field to ((k+1) omega).
    Shift {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        k_from: i64,
    },
    /// Run verification suites.
    Verify {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, allow_hyphen_values = true)]
        k_min: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        k_max: Option<i64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Saito,
    Hodge,
    Universal,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Saito => "saito",
            Suite::Hodge => "hodge",
            Suite::Universal => "universal",
            Suite::All => "all",
        }
    }
}

fn window(group: &GroupData, k_min: Option<i64>, k_max: Option<i64>) -> (i64, i64) {
    let (a, b) = hodge::default_window(group.rank);
    (k_min.unwrap_or(a), k_max.unwrap_or(b))
}

fn flat(group: &GroupData) -> Result<FlatFrame> {
    Ok(hodge::flatten(group)?)
}

fn group_info(g: &GroupData) -> RunReport {
    let mut orbits: Vec<(usize, u32, usize)> = Vec::new();
    for h in &g.hyperplanes {
        match orbits.iter_mut().find(|o| o.0 == h.orbit) {
            Some(o) => o.2 += 1,
            None => orbits.push((h.orbit, h.e_h, 1)),
        }
    }
    println!("group          {}", g.name);
    println!("rank           {}", g.rank);
    println!("|W|            {}", g.order());
    println!("|R|            {}", g.reflections.len());
    println!("|A|            {}", g.hyperplanes.len());
    println!("degrees        {:?}", g.degrees);
    println!("exponents      {:?}", g.exponents());
    println!("coexponents    {:?}", g.coexponents);
    println!("h              {}", g.coxeter_h);
    for (o, e, n) in &orbits {
        println!("orbit {o}        e_H = {e}, {n} hyperplanes");
    }
    println!("well-generated {}", g.well_generated());
    let names = ["t1", "t2", "t3", "t4"];
    let xnames = ["x1", "x2", "x3", "x4"];
    for (i, t) in g.invariants().iter().enumerate() {
        println!("{:<14} {}", names[i], t.display_with(&xnames));
    }
    println!("discriminant   {}", g.discriminant.display_with(&names));
    let witness = json!({
        "rank": g.rank,
        "order": g.order(),
        "reflections": g.reflections.len(),
        "hyperplanes": g.hyperplanes.len(),
        "degrees": g.degrees,
        "exponents": g.exponents(),
        "coexponents": g.coexponents,
        "h": g.coxeter_h.to_string(),
        "orbits": orbits.iter().map(|(o, e, n)| json!({"orbit": o, "e_h": e, "size": n})).collect::<Vec<_>>(),
        "well_generated": g.well_generated(),
        "invariants": g.invariants(),
        "discriminant": g.discriminant,
        "hyperplane_forms": g.hyperplanes,
    });
    RunReport::new(
        &g.name,
        "group",
        vec![Check::new("well-generated", suites::ANCHOR_CATALOG, g.well_generated(), witness)],
    )
}

fn run(cli: &Cli) -> Result<RunReport> {
    let load = |name: &str| -> Result<GroupData> { Ok(group::load(name, cli.element_cap)?) };
    let report = match &cli.command {
        Command::Group { group } => group_info(&load(group)?),
        Command::SaitoCheck { group, nu, fields } => {
            let g = load(group)?;
            let nu: Mult = parse_nu(nu, &g.hyperplanes)?;
            let cert = match fields {
                Some(path) => {
                    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    let raw: Vec<VFieldJson<CycNum>> = serde_json::from_str(&text)
                        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    let alphas = g.alphas();
                    let fields = raw
                        .into_iter()
                        .map(|f| f.into_vfield(&alphas))
                        .collect::<logarr::Result<Vec<_>>>()?;
                    saito_check(&fields, &nu)?
                }
                None => search_basis(&nu)?,
            };
            println!("verdict        {:?}", cert.verdict);
            println!("scalar         {}", cert.scalar.as_ref().map_or("-".into(), |c| c.to_string()));
            println!("|nu|           {}", cert.nu_size);
            println!("pdegs          {:?}", cert.pdegs);
            println!("routes agree   {}", cert.routes_agree());
            let ok = cert.is_basis() && cert.routes_agree();
            RunReport::new(&g.name, "saito-check", vec![Check::new("saito", suites::ANCHOR_SAITO, ok, &cert)])
        }
        Command::Hodge { group, k_min, k_max } => {
            let g = load(group)?;
            let (a, b) = window(&g, *k_min, *k_max);
            let checks = suites::hodge_suite(&flat(&g)?, a, b)?;
            RunReport::new(&g.name, "hodge", checks)
        }
        Command::Universal { group, k } => {
            let g = load(group)?;
            let f = flat(&g)?;
            let ek = TComb::euler(&f, *k).to_field(&f);
            let cert = check_universal(&ek, &Mult::omega(&f.hyperplanes, -k, 0))?;
            println!("exponents      {:?}", cert.basis_cert.exponents().unwrap_or_default());
            println!("valuations     {:?}", cert.maximality_witness);
            RunReport::new(
                &g.name,
                "universal",
                vec![Check::new(format!("universal:k={k}"), suites::ANCHOR_UNIVERSAL, cert.is_universal(), &cert)],
            )
        }
        Command::Shift { group, k_from } => {
            let g = load(group)?;
            let f = flat(&g)?;
            let zeta = TComb::euler(&f, -k_from);
            let s = shifted_universality(&f, &zeta, *k_from)?;
            if let Some(m) = &s.transition {
                let names = ["t1", "t2", "t3", "t4"];
                for row in m {
                    println!("f  {:?}", row.iter().map(|p| p.display_with(&names)).collect::<Vec<_>>());
                }
            }
            println!("det f          {}", s.transition_det.as_ref().map_or("-".into(), |c| c.to_string()));
            RunReport::new(
                &g.name,
                "shift",
                vec![Check::new(format!("shift:k={k_from}"), suites::ANCHOR_SHIFT, s.passed(), &s)],
            )
        }
        Command::Verify { group, suite, k_min, k_max } => {
            let g = load(group)?;
            let (a, b) = window(&g, *k_min, *k_max);
            let mut checks = Vec::new();
            if matches!(suite, Suite::Saito | Suite::All) {
                checks.extend(suites::saito_suite(&g)?);
            }
            if matches!(suite, Suite::Hodge | Suite::Universal | Suite::All) {
                let f = flat(&g)?;
                if matches!(suite, Suite::Hodge | Suite::All) {
                    checks.extend(suites::hodge_suite(&f, a, b)?);
                }
                if matches!(suite, Suite::Universal | Suite::All) {
                    checks.extend(suites::universal_suite(&g, &f, a, b)?);
                }
            }
            RunReport::new(&g.name, suite.name(), checks)
        }
    };
    Ok(report)
}

/// Usage and catalog problems exit with 2; failed mathematics with 1.
fn error_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::UnknownGroup(_)
            | Error::Catalog(_)
            | Error::Parse(_)
            | Error::OutOfRange(_)
            | Error::WindowTooSmall { .. }
            | Error::NotClosedWithinBudget { .. },
        ) => 2,
        Some(_) => 1,
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            if cli.timing {
                report.wall_time = Some(start.elapsed().as_secs_f64());
            }
            report.print();
            if let Some(path) = &cli.json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                if let Err(e) = std::fs::write(path, text + "\n") {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if report.all_pass() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}
