mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use vsc_core::algebra::{format_rational, HalfInt};
use vsc_core::cache::VscCache;
use vsc_core::evaluate::DEFAULT_RETRIES;
use vsc_core::gf::{gf_closed, gf_open};
use vsc_core::gmt::{gmt_check_closed, gmt_check_open};
use vsc_core::iritani::iritani_pipeline;
use vsc_core::mirror::{disk_h2_invariant, gw_closed_gf, gw_open_gf, mirror_map_closed, open_mirror_map};
use vsc_core::open::OpenTruncationPolicy;
use vsc_core::residue::Sector;
use vsc_core::verify::{run_suite, Suite, VerifyOptions};
use vsc_core::{CorrelatorSpec, Error, Evaluator, InsertionProfile, Model};

use config::Config;
use output::{render_map, render_series, Format};

#[derive(Parser, Debug)]
#[command(name = "vsc", version, about = "Exact virtual structure constants and Gromov-Witten invariants")]
struct Cli {
    /// Configuration file (key = value); defaults to ./vsc.conf when present.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for the persistent value cache (overrides VSC_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Attempts with perturbed radii after an indecisive pole.
    #[arg(long, global = true)]
    retries: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One virtual structure constant.
    #[command(alias = "eval")]
    Vsc(VscArgs),
    /// Generating functions, mirror maps and Gromov-Witten series.
    Series(SeriesArgs),
    /// Maximal h²-insertion disk invariants of CP².
    TableDisk(TableArgs),
    /// Runs an invariant suite and exits nonzero on any failed check.
    Verify(VerifyArgs),
    /// Generalized mirror transformation identity for a general-type hypersurface.
    Gmt(GmtArgs),
    /// Extended I-function pipeline for CP² with its comparison report.
    Iritani(IritaniArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SectorArg {
    Closed,
    Open,
}

impl From<SectorArg> for Sector {
    fn from(s: SectorArg) -> Self {
        match s {
            SectorArg::Closed => Sector::Closed,
            SectorArg::Open => Sector::Open,
        }
    }
}

#[derive(Args, Debug)]
struct VscArgs {
    #[arg(long)]
    model: Model,
    #[arg(long, value_enum, default_value = "closed")]
    sector: SectorArg,
    #[arg(long)]
    d: u32,
    #[arg(long, allow_hyphen_values = true)]
    a: i64,
    #[arg(long, default_value_t = 0)]
    b: i64,
    /// Insertions as j:m,j:m,...
    #[arg(long, default_value = "")]
    insert: InsertionProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Stage {
    Gf,
    Mirror,
    Gw,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(value_enum)]
    stage: Stage,
    #[arg(long, default_value = "cp:3")]
    model: Model,
    #[arg(long, value_enum, default_value = "closed")]
    sector: SectorArg,
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    a: i64,
    #[arg(long, default_value_t = 0)]
    b: i64,
    /// Highest q power; half-integers such as 5/2 for disk series.
    #[arg(long)]
    dmax: Option<String>,
    #[arg(long)]
    jmax: Option<u32>,
    /// Extra O_1 insertions allowed by the open truncation policy.
    #[arg(long)]
    extra_units: Option<u32>,
    /// Set t⁰ = 0 in an open Gromov-Witten series (only 0 is accepted).
    #[arg(long)]
    t0: Option<i64>,
    /// Further classes whose flat coordinate is set to zero.
    #[arg(long, value_delimiter = ',')]
    zero: Vec<u32>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, default_value_t = 4)]
    dmax: u32,
    /// Allows d = 5 and 6, which take minutes to hours.
    #[arg(long)]
    extended: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// axioms, order, selection, integrability, oracle, quadrature, gmt, iritani, truncation or all
    suite: String,
    #[arg(long, default_value = "cp:3")]
    model: Model,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum)]
    sector: Option<SectorArg>,
}

#[derive(Args, Debug)]
struct GmtArgs {
    #[arg(long, default_value = "hyp:8:9")]
    model: Model,
    #[arg(long, value_enum, default_value = "closed")]
    sector: SectorArg,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    a: i64,
    #[arg(long)]
    b: Option<i64>,
}

#[derive(Args, Debug)]
struct IritaniArgs {
    #[arg(long, default_value_t = 5)]
    n_max: u32,
    #[arg(long, default_value_t = 16)]
    m_max: u32,
}

struct Ctx {
    ev: Evaluator,
    cfg: Config,
}

fn setup(cli: &Cli) -> Result<Ctx> {
    let cfg = Config::load(cli.config.as_deref())?;
    if let Some(n) = cli.threads.or(cfg.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let retries = cli.retries.or(cfg.radii_retries).unwrap_or(DEFAULT_RETRIES);
    let cache = match cfg.cache_dir(cli.cache_dir.as_deref()) {
        Some(dir) => VscCache::with_dir(&dir).with_context(|| format!("opening cache {}", dir.display()))?,
        None => VscCache::in_memory(),
    };
    Ok(Ctx {
        ev: Evaluator::with_cache(Arc::new(cache), retries),
        cfg,
    })
}

fn hint(e: Error) -> anyhow::Error {
    match e {
        Error::IndecisivePole { .. } => anyhow!(e).context("radius perturbation retries ran out; rerun with a larger --retries"),
        other => anyhow!(other),
    }
}

fn cmd_vsc(ctx: &Ctx, a: &VscArgs) -> Result<()> {
    let spec = match a.sector {
        SectorArg::Closed => CorrelatorSpec::closed(a.model, a.d, a.a, a.b, a.insert.clone()),
        SectorArg::Open => CorrelatorSpec::open(a.model, a.d, a.a, a.insert.clone()),
    };
    let v = ctx.ev.vsc(&spec).map_err(hint)?;
    println!("{}", json!({ "value": format_rational(&v) }));
    Ok(())
}

fn parse_dmax(text: Option<&str>, fallback: &str) -> Result<HalfInt> {
    let t = text.unwrap_or(fallback);
    let h: HalfInt = t.parse().map_err(|e: String| anyhow!(e))?;
    if h <= HalfInt::ZERO {
        bail!("--dmax must be positive");
    }
    Ok(h)
}

fn integer_dmax(h: HalfInt) -> Result<u32> {
    if !h.is_integer() {
        bail!("closed series take an integer --dmax, got {h}");
    }
    Ok(h.floor() as u32)
}

fn cmd_series(ctx: &Ctx, s: &SeriesArgs) -> Result<()> {
    let ev = &ctx.ev;
    let model = s.model;
    let dmax_text = s.dmax.as_deref().or(ctx.cfg.dmax.as_deref());
    let out = match s.sector {
        SectorArg::Closed => {
            let dmax = integer_dmax(parse_dmax(dmax_text, "3")?)?;
            let j_max = s.jmax.or(ctx.cfg.jmax).unwrap_or(model.dim() as u32);
            match s.stage {
                Stage::Gf => render_series("gf", &gf_closed(ev, &model, s.a, s.b, dmax, j_max).map_err(hint)?, s.format),
                Stage::Mirror => render_map(&mirror_map_closed(ev, &model, dmax, j_max).map_err(hint)?, s.format),
                Stage::Gw => {
                    let gw = gw_closed_gf(ev, &model, s.a, s.b, dmax, j_max).map_err(hint)?;
                    render_series("gw", &gw.series, s.format)
                }
            }
        }
        SectorArg::Open => {
            let dmax = parse_dmax(dmax_text, "5/2")?;
            if dmax.is_integer() {
                bail!("disk series live at half-integer q powers; use --dmax like 5/2");
            }
            let top = ((dmax.twice() + 1) / 2) as u32;
            let mut policy = match model {
                Model::Hypersurface { .. } => OpenTruncationPolicy::for_hypersurface(&model, top),
                _ => OpenTruncationPolicy::for_degree(top),
            };
            if let Some(j) = s.jmax.or(ctx.cfg.jmax) {
                policy.j_max = j;
            }
            if let Some(u) = s.extra_units {
                policy.extra_units = u;
            }
            let mut zero = s.zero.clone();
            match s.t0 {
                Some(0) => zero.push(0),
                Some(v) => bail!("only --t0 0 is supported, got {v}"),
                None => {}
            }
            zero.sort_unstable();
            zero.dedup();
            match s.stage {
                Stage::Gf => render_series("gf", &gf_open(ev, &model, s.a, dmax, &policy).map_err(hint)?, s.format),
                Stage::Mirror => render_map(&open_mirror_map(ev, &model, dmax, &policy).map_err(hint)?, s.format),
                Stage::Gw => {
                    let gw = gw_open_gf(ev, &model, s.a, dmax, &policy, &zero).map_err(hint)?;
                    render_series("gw", &gw.series, s.format)
                }
            }
        }
    };
    print!("{out}");
    Ok(())
}

fn cmd_table_disk(ctx: &Ctx, t: &TableArgs) -> Result<()> {
    if t.dmax == 0 {
        bail!("--dmax must be at least 1");
    }
    if t.dmax > 4 && !t.extended {
        bail!("d > 4 takes minutes to hours; pass --extended to run it");
    }
    if t.dmax > 6 {
        bail!("the table stops at d = 6");
    }
    let mut rows = Vec::new();
    for d in 1..=t.dmax {
        let v = disk_h2_invariant(&ctx.ev, d, &OpenTruncationPolicy::for_degree(d)).map_err(hint)?;
        match t.format {
            Format::Text => println!("{d}\t{}", format_rational(&v)),
            Format::Csv => {
                if d == 1 {
                    println!("d,value");
                }
                println!("{d},{}", format_rational(&v));
            }
            Format::Json => rows.push(json!({ "d": d, "insertions": 3 * d - 2, "value": format_rational(&v) })),
        }
    }
    if t.format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
    }
    Ok(())
}

fn cmd_verify(ctx: &Ctx, v: &VerifyArgs) -> Result<bool> {
    let suites: Vec<Suite> = if v.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![v.suite.parse().map_err(hint)?]
    };
    let opts = VerifyOptions {
        model: v.model,
        samples: v.samples,
        seed: v.seed,
        sector: v.sector.map(Sector::from),
        ..VerifyOptions::default()
    };
    let mut checks = Vec::new();
    for s in suites {
        checks.extend(run_suite(&ctx.ev, s, &opts).map_err(hint)?);
    }
    let pass = checks.iter().all(|c| c.pass);
    let failed = checks.iter().filter(|c| !c.pass).count();
    let report = json!({ "suite": v.suite, "pass": pass, "checks": checks.len(), "failed": failed, "results": checks });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(pass)
}

fn cmd_gmt(ctx: &Ctx, g: &GmtArgs) -> Result<bool> {
    let (n, k) = match g.model {
        Model::Hypersurface { n, k } => (n, k),
        m => bail!("the identity is stated for hypersurfaces, got {m}"),
    };
    let rep = match g.sector {
        SectorArg::Closed => {
            let b = g.b.context("closed identities need --b")?;
            gmt_check_closed(&ctx.ev, n, k, g.d, g.a, b)
        }
        SectorArg::Open => gmt_check_open(&ctx.ev, n, k, g.d, g.a),
    }
    .map_err(hint)?;
    println!("{}", serde_json::to_string_pretty(&rep)?);
    Ok(rep.equal)
}

fn cmd_iritani(ctx: &Ctx, i: &IritaniArgs) -> Result<()> {
    let res = iritani_pipeline(&ctx.ev, i.n_max, i.m_max).map_err(hint)?;
    println!("{}", serde_json::to_string_pretty(&res.report)?);
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let ctx = setup(&cli)?;
    match &cli.command {
        Command::Vsc(a) => cmd_vsc(&ctx, a).map(|_| true),
        Command::Series(s) => cmd_series(&ctx, s).map(|_| true),
        Command::TableDisk(t) => cmd_table_disk(&ctx, t).map(|_| true),
        Command::Verify(v) => cmd_verify(&ctx, v),
        Command::Gmt(g) => cmd_gmt(&ctx, g),
        Command::Iritani(i) => cmd_iritani(&ctx, i).map(|_| true),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
