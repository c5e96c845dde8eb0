use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use divisor_lab::approx::approx_2d;
use divisor_lab::divisor::{self, X_MAX};
use divisor_lab::harness::scan::{self, ScanConfig, Step};
use divisor_lab::harness::verify::{self, Suite};
use divisor_lab::harness::{cache, fmt_g12, residual_grid, residual_probe};
use divisor_lab::mean_value::{a0_bound, mean_value, psi_weights, PsiParams};
use divisor_lab::osc::{i_pm, i_pm_stationary, OscSpec, PhaseSign};
use divisor_lab::shift::{shift_search, ShiftQuery};
use divisor_lab::{Error, Rational};

#[derive(Parser)]
#[command(name = "divlab", version, about = "Divisor-problem numerics: D(x), Delta(x), scans and checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// D(x), the main term and Delta(x) at one point
    Dx {
        #[arg(long)]
        x: u64,
    },
    /// Scan Delta(x) over a range and write CSV
    Scan(ScanArgs),
    /// Integer points on the shifted hyperbola (u + shift)v = x
    ShiftCount {
        #[arg(long)]
        x: u64,
        /// `a/q` for an exact rational shift, otherwise a decimal
        #[arg(long)]
        shift: String,
        /// Residual tolerance for decimal shifts
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
    /// Simultaneous approximation of (xi, eta) with q <= (1 + sqrt(tau))^2
    Approx2d {
        #[arg(long)]
        xi: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        tau: f64,
    },
    /// The oscillatory integral I_{p,m} over [N, 2N+1] and its stationary-phase term
    Oscint {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        n: f64,
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum, default_value_t = SignArg::Stationary)]
        sign: SignArg,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Mean value I_r of the psi-weighted series, directly and through Parseval
    Meanvalue {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        n: f64,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 1e-9)]
        target: f64,
    },
    /// Grid search for theta minimizing |S(x + theta, 0)|
    ShiftSearch {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        theta_max: f64,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
    },
    /// sup |Delta(x) - c S(x,0)| for c = 1, 2 over a grid
    ResidualProbe {
        #[arg(long, default_value_t = 1000)]
        lo: u64,
        #[arg(long, default_value_t = 1_000_000)]
        hi: u64,
        /// Log-spaced points per decade above `lo`; every integer up to `lo` is included
        #[arg(long, default_value_t = 200)]
        per_decade: u32,
    },
    /// Run a seeded property suite
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
    /// Manage sieved tau tables on disk
    Cache {
        #[command(subcommand)]
        action: CacheAction,
        #[arg(long, env = cache::CACHE_ENV, global = true)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    lo: u64,
    #[arg(long)]
    hi: u64,
    /// Positive integer, `log`, or `log:N` (N points per decade)
    #[arg(long, default_value = "1")]
    step: String,
    #[arg(long = "theta", default_values_t = [0.25, 1.0 / 3.0])]
    thetas: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CacheAction {
    Build {
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
    },
    List,
    Verify {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Paper,
    Stationary,
}

enum Fail {
    Verification(String),
    Usage(String),
    Io(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Overflow(_) => Fail::Usage(e.to_string()),
            _ => Fail::Io(e.to_string()),
        }
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Cmd) -> Result<(), Fail> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cmd {
        Cmd::Dx { x } => {
            if x == 0 || x > X_MAX {
                return Err(Fail::Usage(format!("x must lie in [1, {X_MAX}]")));
            }
            let e = divisor::delta(x)?;
            writeln!(out, "x={} D={} main={} delta={}", x, e.d, fmt_g12(e.main.to_f64()), fmt_g12(e.delta))?;
        }
        Cmd::Scan(a) => {
            let step: Step = a.step.parse()?;
            let config = ScanConfig { lo: a.lo, hi: a.hi, step, thetas: a.thetas, workers: a.workers };
            let rows = scan::scan(&config)?;
            match a.out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(&path)?);
                    scan::write_csv(&mut w, &rows, &config.thetas)?;
                    w.flush()?;
                    writeln!(out, "wrote {} rows to {}", rows.len(), path.display())?;
                }
                None => scan::write_csv(&mut out, &rows, &config.thetas)?,
            }
        }
        Cmd::ShiftCount { x, shift, tol } => {
            let query = if shift.contains('/') {
                ShiftQuery::rational(x, shift.parse::<Rational>()?)?
            } else {
                let xi: f64 = shift.parse().map_err(|_| Fail::Usage(format!("bad shift {shift:?}")))?;
                ShiftQuery::real(x, xi, tol)?
            };
            let pts = query.points()?;
            writeln!(out, "count={}", pts.len())?;
            for (u, v) in pts {
                writeln!(out, "{u},{v}")?;
            }
        }
        Cmd::Approx2d { xi, eta, tau } => {
            let r = approx_2d(xi, eta, tau)?;
            writeln!(
                out,
                "q={} a={} b={} err_xi={} err_eta={} invariants={}",
                r.q,
                r.a,
                r.b,
                fmt_g12(r.err_xi),
                fmt_g12(r.err_eta),
                if r.satisfies_invariants(xi, eta) { "ok" } else { "FAILED" }
            )?;
        }
        Cmd::Oscint { m, p, n, x, sign, tol } => {
            let sign = match sign {
                SignArg::Paper => PhaseSign::Paper,
                SignArg::Stationary => PhaseSign::Stationary,
            };
            let spec = OscSpec { m, p, n, x, sign };
            let v = i_pm(&spec, tol)?;
            writeln!(out, "I={} {}i |I|={}", fmt_g12(v.re), fmt_g12(v.im), fmt_g12(v.norm()))?;
            let st = i_pm_stationary(&spec)?;
            if st.valid {
                let rel = (v - st.main).norm() / st.main.norm();
                writeln!(out, "main={} {}i rel_err={}", fmt_g12(st.main.re), fmt_g12(st.main.im), fmt_g12(rel))?;
                let rel_u = (v - st.unnormalized).norm() / st.unnormalized.norm();
                writeln!(out, "main_without_sqrt2={} {}i rel_err={}", fmt_g12(st.unnormalized.re), fmt_g12(st.unnormalized.im), fmt_g12(rel_u))?;
            } else {
                writeln!(out, "no stationary point in [N, 2N+1]")?;
            }
        }
        Cmd::Meanvalue { r, n, x, k, delta, target } => {
            let w = psi_weights(PsiParams { n, x, k, delta })?;
            let res = mean_value(r, &w, target, 1e-12)?;
            writeln!(
                out,
                "r={} direct={} parseval={} tail_bound={} s_trunc={} |a0|={} a0_bound={}",
                fmt_g12(r),
                fmt_g12(res.direct),
                fmt_g12(res.parseval),
                fmt_g12(res.tail_bound),
                res.s_trunc,
                fmt_g12(res.a0.norm()),
                fmt_g12(a0_bound(r, &w)?)
            )?;
        }
        Cmd::ShiftSearch { x, theta_max, step } => {
            let s = shift_search(x, theta_max, step)?;
            writeln!(out, "theta={} value={} baseline={}", fmt_g12(s.theta), fmt_g12(s.value), fmt_g12(s.baseline))?;
        }
        Cmd::ResidualProbe { lo, hi, per_decade } => {
            let xs = residual_grid(lo, hi, per_decade)?;
            let rep = residual_probe(&xs)?;
            writeln!(out, "samples={}", rep.samples)?;
            for f in rep.families {
                writeln!(out, "c={} sup={} at_x={}", f.c, fmt_g12(f.sup), f.at_x)?;
            }
            match rep.chosen {
                Some(c) => writeln!(out, "bounded: c={c}")?,
                None => writeln!(out, "bounded: none unique")?,
            }
        }
        Cmd::Verify { suite, seed, cases } => {
            let suite: Suite = suite.parse()?;
            let rep = verify::run(suite, seed, cases)?;
            writeln!(out, "suite={} seed={} passed={}/{}", rep.suite, seed, rep.passed, rep.cases)?;
            for n in &rep.notes {
                writeln!(out, "note: {n}")?;
            }
            for f in &rep.failures {
                writeln!(out, "FAIL: {f}")?;
            }
            if !rep.ok() {
                return Err(Fail::Verification(format!("{} of {} cases failed", rep.cases - rep.passed, rep.cases)));
            }
        }
        Cmd::Cache { action, cache_dir } => {
            let dir = cache_dir.ok_or_else(|| {
                Fail::Usage(format!("no cache directory: pass --cache-dir or set {}", cache::CACHE_ENV))
            })?;
            match action {
                CacheAction::Build { lo, hi } => {
                    let path = cache::build(&dir, lo, hi)?;
                    writeln!(out, "wrote {}", path.display())?;
                }
                CacheAction::List => {
                    for e in cache::list(&dir)? {
                        writeln!(out, "{} lo={} len={}", e.path.display(), e.lo, e.len)?;
                    }
                }
                CacheAction::Verify { samples } => {
                    let mut bad = 0;
                    for v in cache::verify(&dir, samples)? {
                        match &v.error {
                            None => writeln!(out, "ok {} checked={}", v.path.display(), v.checked)?,
                            Some(e) => {
                                bad += 1;
                                writeln!(out, "BAD {} {e}", v.path.display())?;
                            }
                        }
                    }
                    if bad > 0 {
                        return Err(Fail::Verification(format!("{bad} cache file(s) failed")));
                    }
                }
            }
        }
    }
    Ok(())
}
