//! Batch driver for the congruence engine: single cases, grid sweeps, lemma
//! suites, Alexander and LMOV checks, and the character-table cache.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hecke_core::alexlimit::{limit_identity, theorem13_verdict, verify_thm41_hooks};
use hecke_core::combinatorics::{partitions_of, CharacterCache};
use hecke_core::hecke::{
    double_root_check, lemma32_check, lemma33_check, verify_hecke_with_gp, Check,
};
use hecke_core::lmov::{LmovAnalysis, LmovVerdict};
use hecke_core::{CongruenceReport, HookShape, Partition, TorusKnot, ZAPoly};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const CACHE_ENV: &str = "HECKE_CACHE_DIR";
const NUMERIC_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Everything a sweep needs. Missing fields in a config file take their defaults.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub primes: Vec<u32>,
    pub composites: Vec<u32>,
    pub d_min: u32,
    pub d_max: u32,
    pub m_min: i64,
    pub m_max: i64,
    /// Cases with p·d above this are skipped.
    pub max_pd: u32,
    pub lemmas: bool,
    pub alexander: bool,
    pub lmov: bool,
    pub degree: u32,
    pub seed: u64,
    pub numeric_samples: usize,
    /// 0 means one worker per core.
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            primes: vec![2, 3, 5],
            composites: vec![4, 6],
            d_min: 1,
            d_max: 3,
            m_min: 1,
            m_max: 7,
            max_pd: 15,
            lemmas: false,
            alexander: false,
            lmov: false,
            degree: 3,
            seed: 0,
            numeric_samples: 2,
            workers: 0,
            out: None,
            format: Format::Json,
        }
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Valid knots in the (d, m) box, in canonical order.
    pub fn knots(&self) -> Vec<TorusKnot> {
        let mut out = Vec::new();
        for d in self.d_min.max(1)..=self.d_max {
            for m in self.m_min..=self.m_max {
                if let Ok(k) = TorusKnot::new(d, m) {
                    out.push(k);
                }
            }
        }
        out
    }

    /// Every (T, p) case, sorted by (d, m, p).
    pub fn cases(&self) -> Vec<(TorusKnot, u32)> {
        let mut ps: Vec<u32> = self
            .primes
            .iter()
            .chain(&self.composites)
            .copied()
            .filter(|&p| p > 0)
            .collect();
        ps.sort_unstable();
        ps.dedup();
        let mut out = Vec::new();
        for knot in self.knots() {
            for &p in &ps {
                if p * knot.d() <= self.max_pd {
                    out.push((knot, p));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericOracle {
    pub max_value: f64,
    pub max_derivative: f64,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HookEntry {
    pub hook: Partition,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlexanderEntry {
    pub limit_identity: Check,
    pub thm13: Check,
    pub thm41_hooks: Vec<HookEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseError {
    pub d: u32,
    pub m: i64,
    pub p: u32,
    pub message: String,
}

/// One case of a report: the congruence record plus whatever suites ran.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseEntry {
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub report: Option<CongruenceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric_oracle: Option<NumericOracle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alexander: Option<AlexanderEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lmov: Option<Vec<LmovVerdict>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<CaseError>,
}

impl CaseEntry {
    pub fn key(&self) -> (u32, i64, u32) {
        match (&self.report, &self.error) {
            (Some(r), _) => (r.d, r.m, r.p),
            (None, Some(e)) => (e.d, e.m, e.p),
            (None, None) => (0, 0, 0),
        }
    }

    pub fn verdict(&self) -> &'static str {
        match &self.report {
            Some(r) if r.passed() => "PASS",
            Some(_) => "FAIL",
            None => "ERROR",
        }
    }

    /// Every enabled check passed. Composite p is judged only on its side suites.
    pub fn clean(&self) -> bool {
        let Some(r) = &self.report else { return false };
        let core = !r.p_prime || (r.passed() && r.identity_gp_eq_p2f.passed());
        let numeric = self
            .numeric_oracle
            .as_ref()
            .is_none_or(|n| n.within_tolerance);
        let alex = self.alexander.as_ref().is_none_or(|a| {
            (!r.p_prime || (a.limit_identity.passed() && a.thm13.passed()))
                && a.thm41_hooks.iter().all(|h| h.pass)
        });
        let lmov = self.lmov.as_ref().is_none_or(|v| v.iter().all(|x| x.pass));
        core && numeric && alex && lmov
    }

    /// Zeroes timing so reports can be compared byte for byte.
    pub fn without_timing(mut self) -> Self {
        if let Some(r) = &mut self.report {
            r.millis = 0;
        }
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub cases: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    pub prime_fail: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaEntry {
    pub p: u32,
    pub m: i64,
    pub partition: Partition,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaSuite {
    pub lemma32: Vec<LemmaEntry>,
    pub lemma33: Vec<LemmaEntry>,
}

impl LemmaSuite {
    pub fn passed(&self) -> bool {
        self.lemma32.iter().chain(&self.lemma33).all(|e| e.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub summary: Summary,
    pub cases: Vec<CaseEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaSuite>,
}

impl SweepReport {
    pub fn exit_code(&self) -> i32 {
        if self.summary.error > 0 {
            EXIT_ERROR
        } else if !self.cases.iter().all(CaseEntry::clean)
            || !self.lemmas.as_ref().is_none_or(LemmaSuite::passed)
        {
            EXIT_FAIL
        } else {
            EXIT_PASS
        }
    }

    pub fn without_timing(&self) -> Self {
        SweepReport {
            cases: self
                .cases
                .iter()
                .cloned()
                .map(CaseEntry::without_timing)
                .collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        to_csv(&self.cases)
    }
}

/// Columns d,m,p,p_prime,verdict,quotient_z2_degree,millis.
pub fn to_csv(cases: &[CaseEntry]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "d",
        "m",
        "p",
        "p_prime",
        "verdict",
        "quotient_z2_degree",
        "millis",
    ])
    .unwrap();
    for c in cases {
        let (d, m, p) = c.key();
        let r = c.report.as_ref();
        let degree = r
            .and_then(|r| r.quotient.as_ref())
            .and_then(ZAPoly::z2_degree);
        w.write_record([
            d.to_string(),
            m.to_string(),
            p.to_string(),
            r.map_or(String::new(), |r| r.p_prime.to_string()),
            c.verdict().to_string(),
            degree.map_or(String::new(), |k| k.to_string()),
            r.map_or(String::new(), |r| r.millis.to_string()),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// Side checks that depend only on the knot.
#[derive(Clone, Debug, Default)]
struct KnotExtras {
    hooks: Option<Vec<HookEntry>>,
    lmov: Option<Result<Vec<LmovVerdict>, String>>,
}

fn knot_extras(knot: &TorusKnot, alexander: bool, lmov: bool, degree: u32) -> KnotExtras {
    let hooks = alexander.then(|| {
        (1..=degree)
            .flat_map(HookShape::all_of_weight)
            .map(|h| HookEntry {
                hook: h.to_partition(),
                pass: verify_thm41_hooks(knot, h).is_ok_and(|c| c.holds()),
            })
            .collect()
    });
    let lmov = lmov.then(|| {
        LmovAnalysis::new(knot, degree)
            .map(|a| a.verdicts())
            .map_err(|e| e.to_string())
    });
    KnotExtras { hooks, lmov }
}

fn oracle_seed(seed: u64, knot: &TorusKnot, p: u32) -> u64 {
    seed ^ ((knot.d() as u64) << 48) ^ ((knot.m() as u64) << 16) ^ p as u64
}

fn run_case(knot: &TorusKnot, p: u32, cfg: &SweepConfig, extras: &KnotExtras) -> CaseEntry {
    let err = |message: String| CaseEntry {
        report: None,
        numeric_oracle: None,
        alexander: None,
        lmov: None,
        error: Some(CaseError {
            d: knot.d(),
            m: knot.m(),
            p,
            message,
        }),
    };
    let (report, g) = match verify_hecke_with_gp(knot, p) {
        Ok(x) => x,
        Err(e) => return err(e.to_string()),
    };
    let numeric_oracle = (report.passed() && cfg.numeric_samples > 0).then(|| {
        let c = double_root_check(&g, p, oracle_seed(cfg.seed, knot, p), cfg.numeric_samples);
        NumericOracle {
            max_value: c.max_value,
            max_derivative: c.max_derivative,
            within_tolerance: c.within(NUMERIC_TOL),
        }
    });
    let alexander = match &extras.hooks {
        None => None,
        Some(hooks) => {
            let li = limit_identity(knot, p).map(|l| l.holds());
            let t13 = theorem13_verdict(knot, p);
            Some(AlexanderEntry {
                limit_identity: Check::from_bool(li.unwrap_or(false)),
                thm13: Check::from_bool(t13.unwrap_or(false)),
                thm41_hooks: hooks.clone(),
            })
        }
    };
    let lmov = match &extras.lmov {
        None => None,
        Some(Ok(v)) => Some(v.clone()),
        Some(Err(e)) => return err(format!("lmov: {e}")),
    };
    CaseEntry {
        report: Some(report),
        numeric_oracle,
        alexander,
        lmov,
        error: None,
    }
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}

/// Lemma checks over ν ⊢ d and the qualifying μ ⊢ pd for the primes and knots of the config.
pub fn lemma_suite(cfg: &SweepConfig) -> LemmaSuite {
    let mut jobs32 = Vec::new();
    let mut jobs33 = Vec::new();
    for knot in cfg.knots() {
        for &p in &cfg.primes {
            if knot.m() <= 0 || p * knot.d() > cfg.max_pd {
                continue;
            }
            jobs32.extend(partitions_of(knot.d()).into_iter().map(|nu| (p, knot, nu)));
            jobs33.extend(
                partitions_of(p * knot.d())
                    .into_iter()
                    .filter(|mu| !mu.all_parts_divisible(p))
                    .map(|mu| (p, knot, mu)),
            );
        }
    }
    let lemma32 = jobs32
        .into_par_iter()
        .map(|(p, k, nu)| {
            let pass = lemma32_check(p, k.m(), &nu, k.d()).is_ok_and(|(ok, _)| ok);
            LemmaEntry {
                p,
                m: k.m(),
                partition: nu,
                pass,
            }
        })
        .collect();
    let lemma33 = jobs33
        .into_par_iter()
        .map(|(p, k, mu)| {
            let pass = lemma33_check(p, k.m(), &mu).unwrap_or(false);
            LemmaEntry {
                p,
                m: k.m(),
                partition: mu,
                pass,
            }
        })
        .collect();
    LemmaSuite { lemma32, lemma33 }
}

/// Runs every case of the config on a worker pool and merges by (d, m, p).
pub fn cmd_sweep(cfg: &SweepConfig) -> SweepReport {
    let cases = cfg.cases();
    let pool = pool(cfg.workers);
    pool.install(|| {
        let mut knots: Vec<TorusKnot> = cases.iter().map(|(k, _)| *k).collect();
        knots.dedup();
        let extras: BTreeMap<(u32, i64), KnotExtras> = knots
            .par_iter()
            .map(|k| {
                (
                    (k.d(), k.m()),
                    knot_extras(k, cfg.alexander, cfg.lmov, cfg.degree),
                )
            })
            .collect();
        let mut entries: Vec<CaseEntry> = cases
            .par_iter()
            .map(|(k, p)| run_case(k, *p, cfg, &extras[&(k.d(), k.m())]))
            .collect();
        entries.sort_by_key(CaseEntry::key);
        let mut summary = Summary {
            cases: entries.len(),
            ..Summary::default()
        };
        for e in &entries {
            match (&e.report, e.verdict()) {
                (_, "PASS") => summary.pass += 1,
                (Some(r), _) => {
                    summary.fail += 1;
                    summary.prime_fail += r.p_prime as usize;
                }
                (None, _) => summary.error += 1,
            }
        }
        let lemmas = cfg.lemmas.then(|| lemma_suite(cfg));
        SweepReport {
            summary,
            cases: entries,
            lemmas,
        }
    })
}

/// Single case: exit 0 on PASS, 1 on FAIL, 2 on error.
pub fn cmd_verify(knot: &TorusKnot, p: u32, cfg: &SweepConfig) -> (i32, CaseEntry) {
    let extras = knot_extras(knot, cfg.alexander, cfg.lmov, cfg.degree);
    let entry = run_case(knot, p, cfg, &extras);
    let code = match &entry.report {
        None => EXIT_ERROR,
        Some(r) if r.passed() && entry.clean() => EXIT_PASS,
        Some(_) => EXIT_FAIL,
    };
    (code, entry)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum CacheAction {
    /// Writes character tables for weights 1..=max-weight.
    Build {
        #[arg(long, default_value_t = 15)]
        max_weight: u32,
    },
    /// Removes all cached tables.
    Clear,
    /// Reports what is cached.
    Stat,
}

pub fn cmd_cache(action: CacheAction, dir: &Path) -> Result<serde_json::Value, hecke_core::Error> {
    let cache = CharacterCache::new(dir);
    Ok(match action {
        CacheAction::Build { max_weight } => serde_json::to_value(cache.build(max_weight)?)?,
        CacheAction::Clear => serde_json::json!({ "removed": cache.clear()? }),
        CacheAction::Stat => serde_json::to_value(cache.stat()?)?,
    })
}

#[derive(Debug, Parser)]
#[command(
    name = "hecke",
    version,
    about = "Exact Hecke lifting congruence checks for framed torus knots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks a single torus knot T(d, m) at one p.
    Verify {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        opts: SuiteOpts,
    },
    /// Runs a grid of cases.
    Sweep {
        #[arg(long)]
        sweep_config: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        lemmas: bool,
        #[command(flatten)]
        opts: SuiteOpts,
    },
    /// Manages the character-table cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
        #[arg(long, global = true)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SuiteOpts {
    #[arg(long)]
    pub alexander: bool,
    #[arg(long)]
    pub lmov: bool,
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

impl SuiteOpts {
    fn apply(&self, cfg: &mut SweepConfig) {
        cfg.alexander |= self.alexander;
        cfg.lmov |= self.lmov;
        if let Some(d) = self.degree {
            cfg.degree = d;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
    }
}

fn cache_dir(flag: Option<&PathBuf>) -> Option<PathBuf> {
    flag.cloned()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
}

fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn install_cache(dir: Option<PathBuf>) -> Result<(), String> {
    match dir {
        Some(d) if d.exists() => CharacterCache::new(d)
            .install_all()
            .map(|_| ())
            .map_err(|e| e.to_string()),
        _ => Ok(()),
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    match cli.command {
        Command::Verify { d, m, p, opts } => {
            let knot = match TorusKnot::new(d, m) {
                Ok(k) if p > 0 => k,
                Ok(_) => return usage("p must be positive"),
                Err(e) => return usage(&e.to_string()),
            };
            if let Err(e) = install_cache(cache_dir(opts.cache_dir.as_ref())) {
                eprintln!("error: {e}");
                return EXIT_ERROR;
            }
            let mut cfg = SweepConfig::default();
            opts.apply(&mut cfg);
            let (code, entry) = cmd_verify(&knot, p, &cfg);
            let text = match cfg.format {
                Format::Json => {
                    serde_json::to_string_pretty(&entry).expect("entry serializes") + "\n"
                }
                Format::Csv => to_csv(std::slice::from_ref(&entry)),
            };
            if let Err(e) = emit(&text, cfg.out.as_deref()) {
                eprintln!("error: {e}");
                return EXIT_ERROR;
            }
            code
        }
        Command::Sweep {
            sweep_config,
            workers,
            lemmas,
            opts,
        } => {
            let mut cfg = match sweep_config {
                None => SweepConfig::default(),
                Some(path) => match fs::read_to_string(&path) {
                    Ok(text) => match SweepConfig::from_json(&text) {
                        Ok(c) => c,
                        Err(e) => return usage(&format!("{}: {e}", path.display())),
                    },
                    Err(e) => {
                        eprintln!("error: {}: {e}", path.display());
                        return EXIT_ERROR;
                    }
                },
            };
            opts.apply(&mut cfg);
            cfg.lemmas |= lemmas;
            if let Some(w) = workers {
                cfg.workers = w;
            }
            if let Err(e) = install_cache(cache_dir(opts.cache_dir.as_ref())) {
                eprintln!("error: {e}");
                return EXIT_ERROR;
            }
            let report = cmd_sweep(&cfg);
            let written = match (cfg.format, &cfg.out) {
                (Format::Json, Some(out)) => fs::write(out, report.to_json())
                    .and_then(|_| fs::write(out.with_extension("csv"), report.to_csv())),
                (Format::Json, None) => emit(&report.to_json(), None),
                (Format::Csv, out) => emit(&report.to_csv(), out.as_deref()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return EXIT_ERROR;
            }
            let s = &report.summary;
            eprintln!(
                "{} cases: {} pass, {} fail ({} prime), {} error",
                s.cases, s.pass, s.fail, s.prime_fail, s.error
            );
            report.exit_code()
        }
        Command::Cache {
            action,
            cache_dir: flag,
        } => {
            let Some(dir) = cache_dir(flag.as_ref()) else {
                return usage(&format!(
                    "no cache directory: pass --cache-dir or set {CACHE_ENV}"
                ));
            };
            match cmd_cache(action, &dir) {
                Ok(v) => {
                    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
                    EXIT_PASS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_ERROR
                }
            }
        }
    }
}

fn usage(msg: &str) -> i32 {
    eprintln!("usage error: {msg}");
    EXIT_USAGE
}
