//! Range scans of Δ(x) with deterministic, worker-count-independent CSV output.

use std::io::Write;
use std::str::FromStr;
use std::thread;

use crate::divisor::{self, X_MAX};
use crate::error::{domain, Error, Result};
use crate::shift::s_sum_int;

use super::fmt_g12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Linear(u64),
    /// Points per decade, snapped to integers and deduplicated.
    Log(u32),
}

impl FromStr for Step {
    type Err = Error;

    /// `N` for a linear step, `log` or `log:N` for N points per decade (default 100).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "log" {
            return Ok(Step::Log(100));
        }
        if let Some(n) = s.strip_prefix("log:") {
            return match n.parse::<u32>() {
                Ok(n) if n > 0 => Ok(Step::Log(n)),
                _ => domain(format!("bad points-per-decade in {s:?}")),
            };
        }
        match s.parse::<u64>() {
            Ok(n) if n > 0 => Ok(Step::Linear(n)),
            _ => domain(format!("step must be a positive integer, `log` or `log:N`, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub lo: u64,
    pub hi: u64,
    pub step: Step,
    pub thetas: Vec<f64>,
    pub workers: usize,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lo == 0 {
            return domain("lo must be at least 1");
        }
        if self.hi > X_MAX {
            return domain(format!("hi must not exceed {X_MAX}"));
        }
        if self.workers == 0 {
            return domain("workers must be at least 1");
        }
        if let Some(t) = self.thetas.iter().find(|t| !t.is_finite()) {
            return domain(format!("theta must be finite, got {t}"));
        }
        Ok(())
    }

    pub fn samples(&self) -> Result<Vec<u64>> {
        self.validate()?;
        if self.lo > self.hi {
            return Ok(Vec::new());
        }
        match self.step {
            Step::Linear(s) => Ok((self.lo..=self.hi).step_by(s as usize).collect()),
            Step::Log(n) => log_samples(self.lo, self.hi, n),
        }
    }
}

/// lo·10^{i/n} for i = 0, 1, … up to hi, rounded to integers, with hi appended.
pub fn log_samples(lo: u64, hi: u64, per_decade: u32) -> Result<Vec<u64>> {
    if lo == 0 || lo > hi || per_decade == 0 {
        return domain("need 1 <= lo <= hi and a positive point density");
    }
    let decades = (hi as f64 / lo as f64).log10();
    let count = (decades * per_decade as f64).floor() as u64;
    let mut xs: Vec<u64> = (0..=count)
        .map(|i| {
            let v = (lo as f64 * 10f64.powf(i as f64 / per_decade as f64)).round() as u64;
            v.clamp(lo, hi)
        })
        .collect();
    xs.push(hi);
    xs.dedup();
    Ok(xs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub x: u64,
    pub d: u64,
    pub main: f64,
    pub delta: f64,
    /// |Δ| / x^θ for each configured θ.
    pub ratios: Vec<f64>,
    pub s_sum0: f64,
    pub residual_c1: f64,
    pub residual_c2: f64,
}

pub fn scan_row(x: u64, thetas: &[f64]) -> Result<ScanRow> {
    let e = divisor::delta(x)?;
    let s = s_sum_int(x);
    Ok(ScanRow {
        x,
        d: e.d,
        main: e.main.to_f64(),
        delta: e.delta,
        ratios: thetas.iter().map(|&t| e.delta.abs() / (x as f64).powf(t)).collect(),
        s_sum0: s,
        residual_c1: e.delta - s,
        residual_c2: e.delta - 2.0 * s,
    })
}

/// Rows for every sample, split into contiguous chunks across workers and
/// reassembled in chunk order.
pub fn scan(config: &ScanConfig) -> Result<Vec<ScanRow>> {
    let xs = config.samples()?;
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    let chunk = xs.len().div_ceil(config.workers);
    let parts: Vec<Result<Vec<ScanRow>>> = thread::scope(|s| {
        let handles: Vec<_> = xs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|&x| scan_row(x, &config.thetas)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
    });
    let mut rows = Vec::with_capacity(xs.len());
    for p in parts {
        rows.extend(p?);
    }
    Ok(rows)
}

pub fn header(thetas: &[f64]) -> Vec<String> {
    let mut h = vec!["x".to_string(), "D".into(), "main".into(), "delta".into()];
    h.extend(thetas.iter().map(|t| format!("ratio_theta_{}", fmt_g12(*t))));
    h.extend(["s_sum0".into(), "residual_c1".into(), "residual_c2".into()]);
    h
}

fn record(row: &ScanRow) -> Vec<String> {
    let mut r = vec![row.x.to_string(), row.d.to_string(), fmt_g12(row.main), fmt_g12(row.delta)];
    r.extend(row.ratios.iter().map(|&v| fmt_g12(v)));
    r.extend([fmt_g12(row.s_sum0), fmt_g12(row.residual_c1), fmt_g12(row.residual_c2)]);
    r
}

/// Largest |Δ|/x^θ within one decade [10^k, 10^{k+1}).
#[derive(Debug, Clone, PartialEq)]
pub struct DecadeMax {
    pub decade: u32,
    pub count: usize,
    pub max_ratio: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSummary {
    pub rows: usize,
    /// (max ratio, x at the max) per θ.
    pub overall: Vec<(f64, u64)>,
    pub decades: Vec<DecadeMax>,
}

fn decade_of(x: u64) -> u32 {
    x.ilog10()
}

pub fn summarize(rows: &[ScanRow], thetas: &[f64]) -> ScanSummary {
    let mut overall = vec![(0.0, 0u64); thetas.len()];
    let mut decades: Vec<DecadeMax> = Vec::new();
    for row in rows {
        let k = decade_of(row.x);
        if decades.last().map(|d| d.decade) != Some(k) {
            decades.push(DecadeMax { decade: k, count: 0, max_ratio: vec![0.0; thetas.len()] });
        }
        let dm = decades.last_mut().expect("pushed above");
        dm.count += 1;
        for (i, &r) in row.ratios.iter().enumerate() {
            if r > overall[i].0 || overall[i].1 == 0 {
                overall[i] = (r, row.x);
            }
            dm.max_ratio[i] = dm.max_ratio[i].max(r);
        }
    }
    ScanSummary { rows: rows.len(), overall, decades }
}

/// CSV body (header plus one line per row).
pub fn write_body<W: Write>(out: W, rows: &[ScanRow], thetas: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header(thetas)).map_err(io)?;
    for row in rows {
        w.write_record(record(row)).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// `#`-prefixed summary lines appended after the body.
pub fn write_footer<W: Write>(mut out: W, summary: &ScanSummary, thetas: &[f64]) -> Result<()> {
    writeln!(out, "# rows={}", summary.rows)?;
    for (t, (m, x)) in thetas.iter().zip(&summary.overall) {
        writeln!(out, "# max_ratio theta={} value={} at_x={}", fmt_g12(*t), fmt_g12(*m), x)?;
    }
    for d in &summary.decades {
        let cols: Vec<String> = thetas
            .iter()
            .zip(&d.max_ratio)
            .map(|(t, m)| format!("theta={}:{}", fmt_g12(*t), fmt_g12(*m)))
            .collect();
        writeln!(out, "# decade=1e{} count={} {}", d.decade, d.count, cols.join(" "))?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(mut out: W, rows: &[ScanRow], thetas: &[f64]) -> Result<()> {
    write_body(&mut out, rows, thetas)?;
    write_footer(&mut out, &summarize(rows, thetas), thetas)
}
