use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dyspair::angular::Parity;
use dyspair::config::{parse_float_list, Format, KSource, RunConfig, OUTPUT_DIR_ENV};
use dyspair::output::{fmt_float, table_records, to_json, write_file, CsvTable};
use dyspair::report::{self, ScaleSet, Selection, SpectrumSummary};
use dyspair::scattering::{total_rate, RateTableBuilder};
use dyspair::units::{kelvin_to_hartree, rate_to_cm3_per_s};

/// Long-range interactions and loss rates for pairs of open-shell atoms.
#[derive(Debug, Parser)]
#[command(name = "dyspair", version)]
struct Cli {
    /// Configuration file (`key = value` with [sections]).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [env: DYSPAIR_OUT, default: .]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Symmetry {
    G,
    U,
    Both,
}

impl Symmetry {
    fn parities(self) -> Vec<Parity> {
        match self {
            Symmetry::G => vec![Parity::Gerade],
            Symmetry::U => vec![Parity::Ungerade],
            Symmetry::Both => Parity::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Adiabatic C6 coefficients.
    C6(SpectrumArgs),
    /// Adiabatic C3 coefficients.
    C3(SpectrumArgs),
    /// Combined -C6/R^6 - C3/R^3 potential curves for one (Omega, parity).
    Adiabats(AdiabatArgs),
    /// Zeeman, rotational, dipole-dipole and dispersion splitting scales.
    Scales(ScalesArgs),
    /// Universal-model and Born loss rate coefficients.
    Rates(RatesArgs),
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// Omega value or `all`.
    #[arg(long, default_value = "all")]
    omega: String,
    #[arg(long, value_enum, default_value = "both")]
    symmetry: Symmetry,
    /// Line list replacing the built-in K values.
    #[arg(long)]
    linelist: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AdiabatArgs {
    /// a0
    #[arg(long)]
    rmin: Option<f64>,
    /// a0
    #[arg(long)]
    rmax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, default_value_t = 0)]
    omega: i32,
    #[arg(long, value_enum, default_value = "g")]
    symmetry: Symmetry,
    /// Add an energy column in mK.
    #[arg(long)]
    mk: bool,
    #[arg(long)]
    linelist: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScalesArgs {
    /// Comma-separated fields in gauss.
    #[arg(long)]
    bfields: Option<String>,
    #[arg(long)]
    rmin: Option<f64>,
    #[arg(long)]
    rmax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Anisotropy of C6, a.u.
    #[arg(long)]
    delta_c6: Option<f64>,
}

#[derive(Debug, Args)]
struct RatesArgs {
    /// Lowest collision energy, microkelvin.
    #[arg(long)]
    emin: Option<f64>,
    /// Highest collision energy, microkelvin.
    #[arg(long)]
    emax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    lmax: Option<u32>,
    /// Absorbing radius R_c, a0.
    #[arg(long)]
    rc: Option<f64>,
    /// Outer matching radius, a0 (default: chosen per energy).
    #[arg(long)]
    rout: Option<f64>,
    /// Radial step, a0.
    #[arg(long)]
    step: Option<f64>,
    /// Field for the Born rates, gauss (required here or in the config).
    #[arg(long)]
    bfield: Option<f64>,
    /// Isotropic C6, a.u.
    #[arg(long)]
    c6: Option<f64>,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<dyspair::Error> for Failure {
    fn from(e: dyspair::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path).map_err(usage)?,
        None => RunConfig::default(),
    };
    if let Some(out) = cli.out.clone().or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from)) {
        cfg.output_dir = out;
    }
    if let Some(f) = cli.format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    match cli.command {
        Command::C6(a) => cmd_spectrum(cfg, a, "c6"),
        Command::C3(a) => cmd_spectrum(cfg, a, "c3"),
        Command::Adiabats(a) => cmd_adiabats(cfg, a),
        Command::Scales(a) => cmd_scales(cfg, a),
        Command::Rates(a) => cmd_rates(cfg, a),
    }
}

fn parse_omega(s: &str, j: u32) -> Result<Option<i32>, Failure> {
    if s == "all" {
        return Ok(None);
    }
    let o: i32 = s.parse().map_err(|_| usage(format!("--omega expects an integer or 'all', got '{s}'")))?;
    if !(0..=2 * j as i32).contains(&o) {
        return Err(usage(format!("--omega must lie in 0..={}, got {o}", 2 * j)));
    }
    Ok(Some(o))
}

fn emit(cfg: &RunConfig, command: &str, tables: &[(&str, &CsvTable)], extra: impl Serialize) -> Result<(), Failure> {
    let dir = &cfg.output_dir;
    match cfg.format {
        Format::Csv => {
            for (name, t) in tables {
                let path = dir.join(format!("{name}.csv"));
                t.write(&path)?;
                println!("wrote {}", display(&path));
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Data<'a, E> {
                tables: std::collections::BTreeMap<&'a str, Vec<serde_json::Map<String, serde_json::Value>>>,
                #[serde(flatten)]
                extra: E,
            }
            let data = Data { tables: tables.iter().map(|(n, t)| (*n, table_records(t))).collect(), extra };
            let path = dir.join(format!("{command}.json"));
            write_file(&path, &to_json(command, cfg, data)?)?;
            println!("wrote {}", display(&path));
        }
    }
    Ok(())
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".into(), fmt_float)
}

fn cmd_spectrum(mut cfg: RunConfig, a: SpectrumArgs, which: &str) -> Result<(), Failure> {
    if let Some(p) = a.linelist {
        cfg.k_source = KSource::LineList(p);
    }
    let sel = Selection { omega: parse_omega(&a.omega, cfg.atom.j)?, parities: a.symmetry.parities() };
    let (table, summary): (CsvTable, SpectrumSummary) = if which == "c6" {
        let k = cfg.k_tensor().map_err(usage)?;
        report::c6_report(&k, &sel)?
    } else {
        report::c3_report(cfg.atom.j, cfg.atom.g_j, &sel)?
    };
    println!(
        "{which}: count = {}, min = {}, max = {}, spread = {}",
        summary.count,
        opt(summary.min),
        opt(summary.max),
        opt(summary.spread)
    );
    if which == "c3" {
        println!(
            "c3: positive = {}, negative = {}, full-space sum = {}",
            summary.positive,
            summary.negative,
            fmt_float(summary.full_space_sum)
        );
    }
    emit(&cfg, which, &[(which, &table)], serde_json::json!({ "selection": sel, "summary": summary }))
}

fn cmd_adiabats(mut cfg: RunConfig, a: AdiabatArgs) -> Result<(), Failure> {
    if let Some(p) = a.linelist {
        cfg.k_source = KSource::LineList(p);
    }
    set(&mut cfg.adiabats.r_min, a.rmin);
    set(&mut cfg.adiabats.r_max, a.rmax);
    set(&mut cfg.adiabats.points, a.points);
    let grid = cfg.adiabats.grid().map_err(usage)?;
    let omega = parse_omega(&a.omega.to_string(), cfg.atom.j)?.unwrap_or(0);
    let parity = match a.symmetry {
        Symmetry::G => Parity::Gerade,
        Symmetry::U => Parity::Ungerade,
        Symmetry::Both => return Err(usage("adiabats needs --symmetry g or u")),
    };
    let k = cfg.k_tensor().map_err(usage)?;
    let set = report::adiabat_curves(&k, cfg.atom.g_j, omega, parity, &grid)?;
    println!(
        "adiabats: Omega = {omega}{}, {} curves on {} points, {} to {} a0",
        parity.label(),
        set.n_curves(),
        grid.len(),
        fmt_float(grid[0]),
        fmt_float(grid[grid.len() - 1])
    );
    let table = report::adiabat_table(&set, a.mk);
    emit(&cfg, "adiabats", &[("adiabats", &table)], serde_json::json!({ "omega": omega, "parity": parity }))
}

fn cmd_scales(mut cfg: RunConfig, a: ScalesArgs) -> Result<(), Failure> {
    if let Some(list) = a.bfields {
        cfg.b_fields_gauss = parse_float_list(&list).map_err(usage)?;
    }
    if cfg.b_fields_gauss.is_empty() {
        return Err(usage("at least one magnetic field is required (--bfields)"));
    }
    set(&mut cfg.scales.r_min, a.rmin);
    set(&mut cfg.scales.r_max, a.rmax);
    set(&mut cfg.scales.points, a.points);
    set(&mut cfg.delta_c6_au, a.delta_c6);
    cfg.validate().map_err(usage)?;
    let grid = cfg.scales.grid()?;
    let set = ScaleSet::from_config(&cfg);
    let table = report::scales_table(&set, &grid)?;
    let crossings = report::crossings(&set, cfg.scales.r_min, cfg.scales.r_max)?;
    println!("crossing radii (a0) in [{}, {}]:", fmt_float(cfg.scales.r_min), fmt_float(cfg.scales.r_max));
    for c in &crossings {
        let against = match c.b_gauss {
            Some(b) => format!("{}({b} G)", c.against),
            None => c.against.clone(),
        };
        println!("  {:<10} x {:<16} {}", c.curve, against, c.r_a0.map_or_else(|| "none".into(), fmt_float));
    }
    let ct = report::crossings_table(&crossings);
    emit(&cfg, "scales", &[("scales", &table), ("crossings", &ct)], serde_json::json!({}))
}

fn cmd_rates(mut cfg: RunConfig, a: RatesArgs) -> Result<(), Failure> {
    let s = &mut cfg.scattering;
    set(&mut s.e_min_uk, a.emin);
    set(&mut s.e_max_uk, a.emax);
    set(&mut s.points, a.points);
    set(&mut s.l_max, a.lmax);
    set(&mut s.r_inner, a.rc);
    set(&mut s.grid_step, a.step);
    set(&mut s.c6_au, a.c6);
    if a.rout.is_some() {
        s.r_outer = a.rout;
    }
    if a.bfield.is_some() {
        s.b_field_gauss = a.bfield;
    }
    cfg.validate().map_err(usage)?;
    let b = cfg.born_field().map_err(usage)?;
    let collision = cfg.collision_config().map_err(usage)?;

    let table = RateTableBuilder::new(collision.clone(), b).build()?;
    let at = total_rate(&collision, kelvin_to_hartree(500e-6))?;
    println!(
        "rates: beta_total(500 uK) = {} cm3/s (R_c = {} a0, C6 = {} a.u., l <= {})",
        fmt_float(rate_to_cm3_per_s(at.total)),
        fmt_float(collision.r_match_inner),
        fmt_float(collision.c6),
        collision.l_max
    );
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    let per_l = report::rates_table(&table);
    let summary = report::rates_summary_table(&table);
    emit(
        &cfg,
        "rates",
        &[("rates", &per_l), ("rates_summary", &summary)],
        serde_json::json!({ "warnings": table.warnings }),
    )
}
