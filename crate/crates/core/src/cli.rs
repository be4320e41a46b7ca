//! The `whrank` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation error, 3 when a
//! computed `N_G` is positive (`rank`, `classdata`).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::automorphisms::{
    automorphism_group, automorphism_search, inner_automorphisms, ActionSet, AutError, Provenance,
    DEFAULT_BUDGET,
};
use crate::classdata::{from_group, rank_report_from_table, ClassDataError, ClassTable};
use crate::classes::conjugacy_classes;
use crate::constructors::{least_faithful_exponent, ConstructError, FamilySpec};
use crate::group::{FiniteGroup, DEFAULT_CAP};
use crate::io::{format_aut, load_group, parse_aut, read_to_string, FormatError};
use crate::kconj::{
    divisor_sum_formula, lnq_criteria, metacyclic_criterion, rank_report_with_classes,
    KconjError, RankReport, TSV_HEADER,
};
use crate::numtheory::is_prime;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutPolicy {
    Search,
    Explicit,
    File(PathBuf),
    InnOnly,
}

impl FromStr for AutPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "search" => Ok(AutPolicy::Search),
            "explicit" => Ok(AutPolicy::Explicit),
            "inn-only" => Ok(AutPolicy::InnOnly),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(AutPolicy::File(p.into())),
                _ => Err(format!(
                    "expected search, explicit, file:<path> or inn-only, got {s:?}"
                )),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Tsv,
    Json,
}

/// Parsed invocation.
#[derive(Debug, Parser)]
#[command(name = "whrank", version, about = "Whitehead-group ranks N_G and rk Wh(G) of finite groups")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Automorphism source: search, explicit, file:<path> or inn-only.
    /// Default: explicit when the family has one, else computed.
    #[arg(long, global = true)]
    pub aut: Option<AutPolicy>,
    /// Largest group order that will be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub cap: usize,
    /// Node budget for the automorphism search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Tsv)]
    pub format: OutputFormat,
    /// Worker threads for sweeps and surveys (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, clap::Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Group file (`%group` format).
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// Family spec such as `cpm:11,5,3` or `psl:2,7`.
    #[arg(long)]
    pub family: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank report for one group.
    Rank(Source),
    /// Rank reports across a family, with the predicted value.
    Family {
        /// `cpm:7,3;13,4`, `cpm:3..7` (least prime per m), `meta:5,5;4,2`,
        /// `alt:4..7`, ...
        sweep: String,
    },
    /// Rank reports for every group file in a directory.
    Survey { dir: PathBuf },
    /// Rank report from a class-data table.
    Classdata { file: PathBuf },
    /// Automorphism group summary; `--output` writes its generators.
    Aut {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Conjugacy classes, power maps and Aut action in class-data format.
    Classes(Source),
    /// Quick built-in checks.
    Selftest,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("building group: {0}")]
    Build(#[from] ConstructError),
    #[error("reading group: {0}")]
    Load(#[from] FormatError),
    #[error("automorphisms: {0}")]
    Aut(#[from] AutError),
    #[error("rank computation: {0}")]
    Rank(#[from] KconjError),
    #[error("class data: {0}")]
    ClassData(#[from] ClassDataError),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// A loaded group and, for families, its spec.
pub struct Loaded {
    pub group: FiniteGroup,
    pub family: Option<FamilySpec>,
}

fn load(source: &Source, cap: usize) -> Result<Loaded> {
    match (&source.group, &source.family) {
        (Some(path), None) => Ok(Loaded {
            group: load_group(path, cap)?,
            family: None,
        }),
        (None, Some(spec)) => {
            let family: FamilySpec = spec
                .parse()
                .map_err(|e: ConstructError| CliError::Usage(e.to_string()))?;
            Ok(Loaded {
                group: family.build(cap)?,
                family: Some(family),
            })
        }
        _ => Err(CliError::Usage("give exactly one of --group and --family".into())),
    }
}

/// The automorphism action used for `N_G` under `policy`.
pub fn aut_action(
    g: &FiniteGroup,
    family: Option<&FamilySpec>,
    policy: Option<&AutPolicy>,
    budget: u64,
) -> Result<ActionSet> {
    let explicit = || family.and_then(|f| f.explicit_aut(g));
    match policy {
        None => match explicit() {
            Some(a) => Ok(a?),
            None => Ok(automorphism_group(g, budget)?),
        },
        Some(AutPolicy::Search) => Ok(automorphism_search(g, budget)?),
        Some(AutPolicy::Explicit) => match explicit() {
            Some(a) => Ok(a?),
            None => Err(CliError::Failed(format!(
                "automorphisms: no explicit action for {}",
                g.label()
            ))),
        },
        Some(AutPolicy::InnOnly) => Ok(inner_automorphisms(g)),
        Some(AutPolicy::File(path)) => {
            let text = read_to_string(path)?;
            let (_, maps) = parse_aut(&text, g)?;
            Ok(ActionSet::with_inner(g, maps, Provenance::AutFile)?)
        }
    }
}

pub fn report_for(
    g: &FiniteGroup,
    family: Option<&FamilySpec>,
    policy: Option<&AutPolicy>,
    budget: u64,
) -> Result<RankReport> {
    let aut = aut_action(g, family, policy, budget)?;
    let classes = conjugacy_classes(g);
    Ok(rank_report_with_classes(g, &classes, &aut, &inner_automorphisms(g))?)
}

fn emit_reports(out: &mut dyn Write, format: OutputFormat, reports: &[RankReport]) -> Result<()> {
    match format {
        OutputFormat::Tsv => {
            writeln!(out, "{TSV_HEADER}")?;
            for r in reports {
                writeln!(out, "{}", r.to_tsv_row())?;
            }
        }
        OutputFormat::Json => {
            for r in reports {
                writeln!(out, "{}", r.to_json())?;
            }
        }
    }
    Ok(())
}

fn positive_exit(reports: &[RankReport]) -> u8 {
    if reports.iter().any(|r| r.n > 0) {
        3
    } else {
        0
    }
}

fn least_prime_1_mod(m: u64) -> u64 {
    (1..).map(|t| t * m + 1).find(|&p| is_prime(p)).unwrap()
}

/// Expands a sweep into family specs.
pub fn expand_sweep(sweep: &str) -> Result<Vec<FamilySpec>> {
    let usage = |msg: String| CliError::Usage(format!("sweep {sweep:?}: {msg}"));
    let (tag, rest) = sweep
        .split_once(':')
        .ok_or_else(|| usage("expected `<family>:<params>`".into()))?;
    let mut specs = Vec::new();
    for item in rest.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let parse = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| usage(format!("bad range bound {s:?}")))
            };
            let (a, b) = (parse(a)?, parse(b)?);
            for v in a..=b {
                let text = match tag {
                    "cpm" => {
                        let p = least_prime_1_mod(v);
                        let k = least_faithful_exponent(p, v).unwrap();
                        format!("cpm:{p},{v},{k}")
                    }
                    _ => format!("{tag}:{v}"),
                };
                specs.push(text.parse().map_err(|e: ConstructError| usage(e.to_string()))?);
            }
        } else {
            let text = format!("{tag}:{item}");
            specs.push(text.parse().map_err(|e: ConstructError| usage(e.to_string()))?);
        }
    }
    if specs.is_empty() {
        return Err(usage("no parameters".into()));
    }
    Ok(specs)
}

/// Formula prediction for a family member, when one is known.
pub fn prediction(spec: &FamilySpec) -> Option<String> {
    match spec {
        FamilySpec::SemidirectCyclic { n, m, .. } if is_prime(*n) => {
            Some(format!("N={}", divisor_sum_formula(*m)))
        }
        FamilySpec::MetacyclicPq { q, r } => Some(if metacyclic_criterion(*q, *r) {
            "N>0".into()
        } else {
            "N=0".into()
        }),
        _ => None,
    }
}

fn agrees(prediction: &str, n: i64) -> bool {
    match prediction {
        "N>0" => n > 0,
        "N=0" => n == 0,
        p => p.strip_prefix("N=").and_then(|v| v.parse().ok()) == Some(n),
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Failed(e.to_string()))
}

fn cmd_family(cfg: &RunConfig, sweep: &str, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let specs = expand_sweep(sweep)?;
    let rows: Vec<Result<RankReport>> = pool(cfg.jobs)?.install(|| {
        specs
            .par_iter()
            .map(|s| {
                let g = s.build(cfg.cap)?;
                report_for(&g, Some(s), cfg.aut.as_ref(), cfg.budget)
            })
            .collect()
    });
    let mut failed = 0;
    if cfg.format == OutputFormat::Tsv {
        writeln!(out, "spec\torder\tN\tbass_rank\tprediction\tagree")?;
    }
    for (spec, row) in specs.iter().zip(rows) {
        let r = match row {
            Ok(r) => r,
            Err(e) => {
                failed += 1;
                writeln!(err, "{spec}: {e}")?;
                continue;
            }
        };
        let pred = prediction(spec);
        let agree = pred.as_deref().map(|p| agrees(p, r.n));
        match cfg.format {
            OutputFormat::Tsv => writeln!(
                out,
                "{spec}\t{}\t{}\t{}\t{}\t{}",
                r.order,
                r.n,
                r.bass_rank,
                pred.as_deref().unwrap_or("-"),
                agree.map_or("-", |a| if a { "yes" } else { "no" })
            )?,
            OutputFormat::Json => {
                let mut v = serde_json::to_value(&r).expect("report serializes");
                v["spec"] = spec.to_string().into();
                v["prediction"] = pred.into();
                v["agree"] = agree.into();
                writeln!(out, "{v}")?;
            }
        }
    }
    Ok(if failed > 0 { 2 } else { 0 })
}

fn cmd_survey(cfg: &RunConfig, dir: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Failed(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "group"))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    let rows: Vec<Result<RankReport>> = pool(cfg.jobs)?.install(|| {
        files
            .par_iter()
            .map(|p| {
                let g = load_group(p, cfg.cap)?;
                report_for(&g, None, cfg.aut.as_ref(), cfg.budget)
            })
            .collect()
    });
    let mut reports = Vec::new();
    let mut failed = 0;
    for (p, row) in files.iter().zip(rows) {
        match row {
            Ok(r) => reports.push(r),
            Err(e) => {
                failed += 1;
                writeln!(err, "{}: {e}", p.display())?;
            }
        }
    }
    emit_reports(out, cfg.format, &reports)?;
    let mut by_order: std::collections::BTreeMap<u128, (usize, i64)> = Default::default();
    for r in &reports {
        let order: u128 = r.order.to_string().parse().unwrap_or(u128::MAX);
        let e = by_order.entry(order).or_insert((0, 0));
        e.0 += 1;
        e.1 = e.1.max(r.n);
    }
    let first = by_order.iter().find(|(_, &(_, n))| n > 0).map(|(&o, _)| o);
    match cfg.format {
        OutputFormat::Tsv => {
            for (o, (count, max_n)) in &by_order {
                writeln!(out, "# order {o}: {count} group(s), max N {max_n}")?;
            }
            match first {
                Some(o) => writeln!(out, "# first order with N > 0: {o}")?,
                None => writeln!(out, "# first order with N > 0: none")?,
            }
        }
        OutputFormat::Json => {
            let orders: Vec<serde_json::Value> = by_order
                .iter()
                .map(|(o, (c, n))| serde_json::json!({"order": o, "groups": c, "max_N": n}))
                .collect();
            let v = serde_json::json!({"summary": {"orders": orders, "first_positive_order": first}});
            writeln!(out, "{v}")?;
        }
    }
    Ok(if failed > 0 { 2 } else { 0 })
}

fn cmd_aut(cfg: &RunConfig, source: &Source, output: Option<&Path>, out: &mut dyn Write) -> Result<u8> {
    let l = load(source, cfg.cap)?;
    let g = &l.group;
    let a = aut_action(g, l.family.as_ref(), cfg.aut.as_ref(), cfg.budget)?;
    let order = a.known_order().unwrap_or_else(|| a.closure_order(g));
    let inn = inner_automorphisms(g).known_order().unwrap_or(1);
    match cfg.format {
        OutputFormat::Tsv => {
            writeln!(out, "label\torder\taut_order\tout_order\tgenerators\tprovenance")?;
            writeln!(
                out,
                "{}\t{}\t{order}\t{}\t{}\t{}",
                g.label(),
                g.order(),
                order / inn,
                a.generators().len(),
                a.provenance()
            )?;
        }
        OutputFormat::Json => {
            let v = serde_json::json!({
                "label": g.label(), "order": g.order(), "aut_order": order,
                "out_order": order / inn, "generators": a.generators().len(),
                "provenance": a.provenance(),
            });
            writeln!(out, "{v}")?;
        }
    }
    if let Some(path) = output {
        std::fs::write(path, format_aut(g.label(), a.generators()))?;
    }
    Ok(0)
}

fn cmd_classes(cfg: &RunConfig, source: &Source, out: &mut dyn Write) -> Result<u8> {
    let l = load(source, cfg.cap)?;
    let g = &l.group;
    let a = aut_action(g, l.family.as_ref(), cfg.aut.as_ref(), cfg.budget)?;
    let t = from_group(g, &conjugacy_classes(g), &a);
    match cfg.format {
        OutputFormat::Tsv => write!(out, "{}", t.to_text())?,
        OutputFormat::Json => {
            let classes: Vec<serde_json::Value> = (0..t.len())
                .map(|c| {
                    serde_json::json!({
                        "name": t.names[c], "order": t.orders[c], "size": t.sizes[c].to_string(),
                    })
                })
                .collect();
            let powermaps: serde_json::Map<String, serde_json::Value> = t
                .powermaps
                .iter()
                .map(|(p, m)| (p.to_string(), serde_json::json!(m)))
                .collect();
            let v = serde_json::json!({
                "label": t.name, "order": t.order.to_string(), "classes": classes,
                "powermaps": powermaps, "aut_action": t.aut_action,
            });
            writeln!(out, "{v}")?;
        }
    }
    Ok(0)
}

type Check<'a> = Box<dyn Fn() -> Result<bool> + 'a>;

const J1_TABLE: &str = include_str!("../data/classdata/j1.ctbl");

fn cmd_selftest(cfg: &RunConfig, out: &mut dyn Write) -> Result<u8> {
    let family = |s: &str| -> Result<RankReport> {
        let spec: FamilySpec = s.parse()?;
        let g = spec.build(cfg.cap)?;
        report_for(&g, Some(&spec), None, cfg.budget)
    };
    let checks: Vec<(&str, Check)> = vec![
        ("order 55: N = 1, bass_rank = 1", Box::new(|| {
            let r = family("cpm:11,5,3")?;
            Ok((r.n, r.bass_rank) == (1, 1))
        })),
        ("C5: bass_rank = 1, N = 0", Box::new(|| {
            let r = family("cyc:5")?;
            Ok((r.bass_rank, r.n) == (1, 0))
        })),
        ("A5 with explicit Aut: N = 0", Box::new(|| Ok(family("alt:5")?.n == 0))),
        ("PSL_2(11): N > 0", Box::new(|| Ok(family("psl:2,11")?.n > 0))),
        ("divisor sum for m = 7 is 2", Box::new(|| Ok(divisor_sum_formula(7) == 2))),
        ("PSL_3(3) criteria: M = 13", Box::new(|| {
            let c = lnq_criteria(3, 3)?;
            Ok((c.m, c.phi_m, c.two_kn) == (13, 12, 6))
        })),
        ("J1 class data: bass_rank = 5, N = 5", Box::new(|| {
            let r = rank_report_from_table(&J1_TABLE.parse()?)?;
            Ok((r.bass_rank, r.n) == (5, 5))
        })),
    ];
    let mut failed = 0;
    for (name, check) in &checks {
        let verdict = match check() {
            Ok(true) => "PASS".to_string(),
            Ok(false) => "FAIL".to_string(),
            Err(e) => format!("FAIL ({e})"),
        };
        if verdict != "PASS" {
            failed += 1;
        }
        writeln!(out, "{verdict}  {name}")?;
    }
    Ok(if failed > 0 { 2 } else { 0 })
}

fn dispatch(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    match &cfg.command {
        Command::Rank(source) => {
            let l = load(source, cfg.cap)?;
            let r = report_for(&l.group, l.family.as_ref(), cfg.aut.as_ref(), cfg.budget)?;
            emit_reports(out, cfg.format, std::slice::from_ref(&r))?;
            Ok(positive_exit(&[r]))
        }
        Command::Family { sweep } => cmd_family(cfg, sweep, out, err),
        Command::Survey { dir } => cmd_survey(cfg, dir, out, err),
        Command::Classdata { file } => {
            let r = rank_report_from_table(&ClassTable::load(file)?)?;
            emit_reports(out, cfg.format, std::slice::from_ref(&r))?;
            Ok(positive_exit(&[r]))
        }
        Command::Aut { source, output } => cmd_aut(cfg, source, output.as_deref(), out),
        Command::Classes(source) => cmd_classes(cfg, source, out),
        Command::Selftest => cmd_selftest(cfg, out),
    }
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp
                    | clap::error::ErrorKind::DisplayVersion
                    | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            );
            let text = e.render().to_string();
            if help && e.kind() != clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                let _ = write!(out, "{text}");
                return 0;
            }
            let _ = write!(err, "{text}");
            return 1;
        }
    };
    match dispatch(&cfg, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> ExitCode {
    let code = run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code)
}
