//! Configuration-driven experiment runner.
//!
//! A run is described by an [`ExperimentConfig`], read from a JSON file and/or
//! assembled from flags (flags win). Every command writes one CSV document with
//! a fixed header; floats use Rust's shortest round-trip formatting, so reruns
//! are byte-identical at any thread count.

pub mod expr;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspec::{convolve_table, eval_mult, MultSpec, ValueTable};
use crate::moments::{self, MomentOptions, MomentReport};
use crate::predict::{self, Comparison, FormulaId, Prediction};
use crate::primesums::{ConditionId, ConditionReport, Hypotheses, Params, TwistedExponent};
use crate::sieve::{build_primes, build_spf, PrimeTable};

pub use expr::{parse_add, parse_mult, parse_spec, ParseError, Spec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Primes,
    Eval,
    Meanvalue,
    Check,
    Predict,
    Moments,
    Sifted,
    Decay,
    ConvolveVerify,
}

/// Parameter overrides; anything left out takes the documented default at
/// each `x`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub a: Option<f64>,
    pub b: Option<f64>,
    #[serde(rename = "A")]
    pub big_a: Option<f64>,
    #[serde(rename = "B")]
    pub big_b: Option<f64>,
    pub rho: Option<f64>,
    pub eps: Option<f64>,
    /// Floor in `eps = max(1/sqrt(log x), floor)` when `eps` is not fixed.
    pub eps_floor: Option<f64>,
    pub delta1: Option<f64>,
    pub threshold: Option<f64>,
    pub twisted_exponent: Option<TwistedExponent>,
}

impl ParamOverrides {
    /// Defaults at `x` with the overrides applied.
    pub fn resolve(&self, x: u64) -> Params {
        let mut p = Params::defaults(x);
        let log_x = (x.max(3) as f64).ln();
        if let Some(floor) = self.eps_floor {
            p.eps = (1.0 / log_x.sqrt()).max(floor).min(0.5);
        }
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {$(
                if let Some(v) = self.$field { p.$target = v; }
            )*};
        }
        set!(a => a, b => b, big_a => big_a, big_b => big_b, rho => rho, eps => eps, threshold => threshold);
        if let Some(t) = self.twisted_exponent {
            p.twisted_exponent = t;
        }
        p.derive();
        p.delta1 = self
            .delta1
            .unwrap_or_else(|| 2.0 / 3.0 * crate::primesums::beta(p.rho, p.big_a) * p.b);
        p
    }
}

/// Points of an `x`-grid: a JSON array of integers or a grid expression.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum XGrid {
    List(Vec<u64>),
    Expr(String),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<Command>,
    #[serde(alias = "f_expr")]
    pub f: Option<String>,
    #[serde(alias = "r_expr")]
    pub r: Option<String>,
    #[serde(alias = "h_expr")]
    pub h: Option<String>,
    #[serde(alias = "x_grid")]
    pub x: Option<XGrid>,
    #[serde(default)]
    pub params: ParamOverrides,
    #[serde(rename = "D")]
    pub d: Option<u64>,
    pub tau: Option<f64>,
    #[serde(alias = "m_list")]
    pub m: Option<Vec<u32>>,
    #[serde(alias = "output_path")]
    pub out: Option<PathBuf>,
    #[serde(alias = "parallelism")]
    pub threads: Option<usize>,
    pub formula: Option<String>,
}

/// `meanlab <command> [--config <path>] [flags]`
#[derive(Clone, Debug, Parser)]
#[command(name = "meanlab", version, about = "Mean values of multiplicative functions: sieves, predictions, checks")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON experiment configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Multiplicative spec f.
    #[arg(long = "f")]
    pub f: Option<String>,
    /// Comparison spec r.
    #[arg(long = "r")]
    pub r: Option<String>,
    /// Additive spec h.
    #[arg(long = "h")]
    pub h: Option<String>,
    /// One integer, a comma list, or `10^4..10^7`.
    #[arg(long = "x")]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// Sifting modulus.
    #[arg(long = "D")]
    pub d: Option<u64>,
    /// Moment orders, comma separated.
    #[arg(long = "m", value_delimiter = ',')]
    pub m: Option<Vec<u32>>,
    /// Formula for `predict` and `decay` (T1_6, T1_10, T1_13, T2_3, T4_5, L2_4).
    #[arg(long)]
    pub formula: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write the resolved parameters as JSON (`<out>.params.json`, or stderr).
    #[arg(long)]
    pub seed_params: bool,
}

/// Parse `"10"`, `"1e7"`, `"10,100,1000"`, `"10^4"` or `"10^4..10^7"`.
pub fn parse_x_grid(s: &str) -> Result<Vec<u64>> {
    let usage = |m: String| Error::Usage(m);
    let one = |t: &str| -> Result<u64> {
        let t = t.trim();
        if let Some((b, e)) = t.split_once('^') {
            let b: u64 = b.trim().parse().map_err(|_| usage(format!("bad x value `{t}`")))?;
            let e: u32 = e.trim().parse().map_err(|_| usage(format!("bad x value `{t}`")))?;
            return b.checked_pow(e).ok_or_else(|| usage(format!("x value `{t}` overflows")));
        }
        if let Ok(v) = t.parse::<u64>() {
            return Ok(v);
        }
        let f: f64 = t.parse().map_err(|_| usage(format!("bad x value `{t}`")))?;
        if f.fract() != 0.0 || !(1.0..=u64::MAX as f64).contains(&f) {
            return Err(usage(format!("x value `{t}` is not a positive integer")));
        }
        Ok(f as u64)
    };
    let out = if let Some((lo, hi)) = s.split_once("..") {
        let (lo_t, hi_t) = (lo.trim(), hi.trim());
        match (lo_t.split_once('^'), hi_t.split_once('^')) {
            (Some((b1, e1)), Some((b2, e2))) if b1.trim() == b2.trim() => {
                let b: u64 = b1.trim().parse().map_err(|_| usage(format!("bad grid `{s}`")))?;
                let e1: u32 = e1.trim().parse().map_err(|_| usage(format!("bad grid `{s}`")))?;
                let e2: u32 = e2.trim().parse().map_err(|_| usage(format!("bad grid `{s}`")))?;
                (e1..=e2)
                    .map(|e| b.checked_pow(e).ok_or_else(|| usage(format!("grid `{s}` overflows"))))
                    .collect::<Result<Vec<_>>>()?
            }
            _ => vec![one(lo_t)?, one(hi_t)?],
        }
    } else {
        s.split(',').map(one).collect::<Result<Vec<_>>>()?
    };
    check_grid(out)
}

fn check_grid(grid: Vec<u64>) -> Result<Vec<u64>> {
    if grid.is_empty() {
        return Err(Error::Usage("empty x grid".into()));
    }
    if grid.iter().any(|&x| x == 0) {
        return Err(Error::Usage("x values must be positive".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Usage("x grid must be strictly ascending".into()));
    }
    Ok(grid)
}

/// A fully resolved run.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub command: Command,
    pub f: String,
    pub r: String,
    pub h: String,
    pub xs: Vec<u64>,
    pub params: ParamOverrides,
    pub d: u64,
    pub tau: f64,
    pub ms: Vec<u32>,
    pub formula: FormulaId,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed_params: bool,
}

impl Resolved {
    /// Merge the config file (if any) with the flags.
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                serde_json::from_str::<ExperimentConfig>(&text)?
            }
            None => ExperimentConfig::default(),
        };
        Self::merge(cli, file)
    }

    pub fn merge(cli: &Cli, file: ExperimentConfig) -> Result<Self> {
        let xs = match (&cli.x, &file.x) {
            (Some(s), _) => parse_x_grid(s)?,
            (None, Some(XGrid::Expr(s))) => parse_x_grid(s)?,
            (None, Some(XGrid::List(v))) => check_grid(v.clone())?,
            (None, None) => return Err(Error::Usage("no x given (use --x or the `x` config field)".into())),
        };
        let formula = cli
            .formula
            .clone()
            .or(file.formula)
            .map(|s| s.parse::<FormulaId>().map_err(Error::Usage))
            .transpose()?
            .unwrap_or(FormulaId::T1_13);
        let ms = cli.m.clone().or(file.m).unwrap_or_else(|| vec![1, 2, 3, 4]);
        Ok(Resolved {
            command: cli.command,
            f: cli.f.clone().or(file.f).unwrap_or_else(|| "one".into()),
            r: cli.r.clone().or(file.r).unwrap_or_else(|| "one".into()),
            h: cli.h.clone().or(file.h).unwrap_or_else(|| "omega".into()),
            xs,
            params: file.params,
            d: cli.d.or(file.d).unwrap_or(1),
            tau: cli.tau.or(file.tau).unwrap_or(0.0),
            ms,
            formula,
            out: cli.out.clone().or(file.out),
            threads: cli.threads.or(file.threads),
            seed_params: cli.seed_params,
        })
    }

    fn x_max(&self) -> u64 {
        *self.xs.last().expect("grid is non-empty")
    }
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match Resolved::from_cli(&cli).and_then(|r| run(&r)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("meanlab: {e}");
            e.exit_code()
        }
    }
}

/// Run a resolved configuration, writing CSV to `out` or stdout.
pub fn run(cfg: &Resolved) -> Result<()> {
    let body = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Resource(e.to_string()))?
            .install(|| render(cfg))?,
        None => render(cfg)?,
    };
    if cfg.seed_params {
        let params: Vec<Params> = cfg.xs.iter().map(|&x| cfg.params.resolve(x)).collect();
        let json = serde_json::to_string_pretty(&params)?;
        match &cfg.out {
            Some(out) => std::fs::write(params_path(out), json + "\n")?,
            None => eprintln!("{json}"),
        }
    }
    match &cfg.out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn params_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".params.json");
    PathBuf::from(s)
}

/// Produce the CSV document for `cfg` without touching the filesystem.
pub fn render(cfg: &Resolved) -> Result<String> {
    let mut out = Csv::default();
    let x_max = cfg.x_max();
    match cfg.command {
        Command::Primes => {
            let primes = build_primes(x_max);
            out.header("x,pi_x");
            for &x in &cfg.xs {
                out.row(format!("{x},{}", primes.count_upto(x)));
            }
        }
        Command::Eval => {
            let table = match parse_spec(&cfg.f)? {
                Spec::Mult(f) => eval_mult(&f, x_max, &build_spf(x_max)?)?,
                Spec::Add(h) => crate::funcspec::eval_add(&h, x_max, &build_spf(x_max)?)?,
            };
            out.header("n,re,im");
            for n in 1..=x_max {
                let v = table.value(n);
                out.row(format!("{n},{},{}", v.re, v.im));
            }
        }
        Command::Meanvalue => {
            let f = parse_mult(&cfg.f)?;
            let table = eval_mult(&f, x_max, &build_spf(x_max)?)?;
            out.header("spec,x,re,im");
            for &x in &cfg.xs {
                let m = table.summatory(x)?;
                out.row(format!("{f},{x},{},{}", m.re, m.im));
            }
        }
        Command::Check => {
            let (f, r) = (parse_mult(&cfg.f)?, parse_mult(&cfg.r)?);
            let h = parse_add(&cfg.h).ok();
            let primes = build_primes(x_max);
            out.header(ConditionReport::CSV_HEADER);
            for &x in &cfg.xs {
                let params = cfg.params.resolve(x);
                let mut hyp = Hypotheses::new(&params, &f, &r, x, &primes)?;
                if let Some(h) = &h {
                    hyp = hyp.with_additive(h);
                }
                for id in ConditionId::ALL {
                    if id == ConditionId::C3_1_iv && h.is_none() {
                        continue;
                    }
                    match hyp.check(id) {
                        Ok(rep) => out.row(rep.csv_row()),
                        // A condition whose y-range is empty at this x is not applicable.
                        Err(Error::Range(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        Command::Predict | Command::Sifted | Command::Decay => {
            let formula = if cfg.command == Command::Sifted { FormulaId::T4_5 } else { cfg.formula };
            let rows = comparisons(cfg, formula)?;
            if cfg.command == Command::Decay {
                out.header(DECAY_HEADER);
                for (c, p) in &rows {
                    out.row(decay_row(c, p));
                }
            } else {
                out.header(Comparison::CSV_HEADER);
                for (c, _) in &rows {
                    out.row(c.csv_row());
                }
            }
        }
        Command::Moments => {
            let h = parse_add(&cfg.h)?;
            let r = parse_mult(&cfg.r)?;
            let primes = build_primes(x_max);
            out.header(&format!("x,{}", MomentReport::CSV_HEADER));
            for &x in &cfg.xs {
                let params = cfg.params.resolve(x);
                let reps = moments::moment_g(&cfg.ms, &h, &r, x, &params, &primes, MomentOptions::default())?;
                for rep in reps {
                    for w in &rep.warnings {
                        eprintln!("meanlab: x = {x}: {w}");
                    }
                    out.row(format!("{x},{}", rep.csv_row()));
                }
            }
        }
        Command::ConvolveVerify => {
            let (f, g) = (parse_mult(&cfg.f)?, parse_mult(&cfg.r)?);
            let spf = build_spf(x_max)?;
            let (tf, tg) = (eval_mult(&f, x_max, &spf)?, eval_mult(&g, x_max, &spf)?);
            let direct = convolve_table(&tf, &tg, x_max)?;
            let spec = eval_mult(&MultSpec::conv(&f, &g), x_max, &spf)?;
            out.header("x,f,g,max_abs_diff,holds");
            for &x in &cfg.xs {
                let diff = max_diff(&direct, &spec, x);
                out.row(format!("{x},{f},{g},{diff},{}", diff <= 1e-9));
            }
        }
    }
    Ok(out.finish())
}

fn max_diff(a: &ValueTable, b: &ValueTable, x: u64) -> f64 {
    (1..=x)
        .map(|n| (a.value(n) - b.value(n)).norm() / b.value(n).norm().max(1.0))
        .fold(0.0, f64::max)
}

pub const DECAY_HEADER: &str =
    "formula_id,x,eps,delta,observed_re,observed_im,predicted_re,predicted_im,abs_err,rel_err,budget_ratio";

fn decay_row(c: &Comparison, p: &Prediction) -> String {
    let delta = match &p.sifted {
        Some(s) => s.delta,
        None => p.params.delta1,
    };
    let rest = c.csv_row();
    let tail = rest.splitn(3, ',').nth(2).unwrap_or_default();
    format!("{},{},{},{},{}", c.formula_id, c.x, p.params.eps, delta, tail)
}

/// Observed values from exact tables, predictions from the predictor, one pair per `x`.
fn comparisons(cfg: &Resolved, formula: FormulaId) -> Result<Vec<(Comparison, Prediction)>> {
    let x_max = cfg.x_max();
    let f = parse_mult(&cfg.f)?;
    let r = parse_mult(&cfg.r)?;
    let primes: PrimeTable = build_primes(x_max);
    let spf = build_spf(x_max)?;
    let observed_spec = match formula {
        FormulaId::T4_5 => MultSpec::coprime(&r, cfg.d)?,
        FormulaId::L2_4 => r.clone(),
        _ => f.clone(),
    };
    if formula == FormulaId::T4_5 {
        let p_max = crate::sieve::largest_prime_factor(cfg.d);
        if let Some(&x) = cfg.xs.iter().find(|&&x| p_max > x) {
            return Err(Error::Contract(format!("P+(D) = {p_max} exceeds x = {x}")));
        }
    }
    let observed = eval_mult(&observed_spec, x_max, &spf)?;
    let r_table = match formula {
        FormulaId::T1_13 | FormulaId::T2_3 | FormulaId::T4_5 => Some(eval_mult(&r, x_max, &spf)?),
        _ => None,
    };
    drop(spf);
    let mut rows = Vec::with_capacity(cfg.xs.len());
    for &x in &cfg.xs {
        let params = cfg.params.resolve(x);
        let m_r = match &r_table {
            Some(t) => t.summatory(x)?.re,
            None => 0.0,
        };
        let pred = match formula {
            FormulaId::T1_6 => predict::predict_1_6(&f, &params, x, &primes)?,
            FormulaId::T1_10 => predict::predict_1_10(&f, &params, x, &primes)?,
            FormulaId::T1_13 => predict::predict_1_13(&f, &r, m_r, &params, x, &primes)?,
            FormulaId::T2_3 => predict::predict_2_3(&f, &r, cfg.tau, m_r, &params, x, &primes)?,
            FormulaId::T4_5 => predict::predict_4_5(&r, cfg.d, m_r, &params, x)?,
            FormulaId::L2_4 => predict::predict_l2_4(&r, &params, x, &primes)?,
        };
        let obs: Complex64 = observed.summatory(x)?;
        rows.push((predict::compare(obs, &pred), pred));
    }
    Ok(rows)
}

#[derive(Default)]
struct Csv {
    buf: String,
}

impl Csv {
    fn header(&mut self, h: &str) {
        self.row(h.to_string());
    }

    fn row(&mut self, r: String) {
        self.buf.push_str(&r);
        self.buf.push('\n');
    }

    fn finish(self) -> String {
        self.buf
    }
}
