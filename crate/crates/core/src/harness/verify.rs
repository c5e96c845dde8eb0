//! Seeded property suites behind `divlab verify`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::approx::approx_2d;
use crate::divisor::tau;
use crate::error::{domain, Error, Result};
use crate::mean_value::{mean_value, psi_weights, PsiParams, PsiWeights};
use crate::osc::{check_first_derivative_bound, check_second_derivative_bound, i_pm, i_pm_stationary, OscSpec, PhaseSign};
use crate::quad;
use crate::rational::Rational;
use crate::sawtooth::{rho, rho1};
use crate::shift::shifted_lattice_rational;

use super::{residual_grid, residual_probe};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemma1,
    Lemma2,
    Lemma4,
    Lemma5,
    Lemma7,
    Parseval,
    Stationary,
    Residual,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Lemma4,
        Suite::Lemma5,
        Suite::Lemma7,
        Suite::Parseval,
        Suite::Stationary,
        Suite::Residual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma4 => "lemma4",
            Suite::Lemma5 => "lemma5",
            Suite::Lemma7 => "lemma7",
            Suite::Parseval => "parseval",
            Suite::Stationary => "stationary",
            Suite::Residual => "residual",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub passed: usize,
    /// Up to ten failing cases, described.
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

struct Tally {
    report: SuiteReport,
}

impl Tally {
    fn new(suite: Suite) -> Self {
        Tally { report: SuiteReport { suite, cases: 0, passed: 0, failures: Vec::new(), notes: Vec::new() } }
    }

    fn record(&mut self, pass: bool, what: impl FnOnce() -> String) {
        self.report.cases += 1;
        if pass {
            self.report.passed += 1;
        } else if self.report.failures.len() < 10 {
            self.report.failures.push(what());
        }
    }
}

pub fn run(suite: Suite, seed: u64, cases: usize) -> Result<SuiteReport> {
    if cases == 0 {
        return domain("cases must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new(suite);
    match suite {
        Suite::Lemma1 => lemma1(&mut rng, cases, &mut t)?,
        Suite::Lemma2 => lemma2(&mut rng, cases, &mut t)?,
        Suite::Lemma4 => lemma4(&mut rng, cases, &mut t)?,
        Suite::Lemma5 => lemma5(&mut rng, cases, &mut t)?,
        Suite::Lemma7 => lemma7(&mut rng, cases, &mut t)?,
        Suite::Parseval => parseval(&mut rng, cases, &mut t)?,
        Suite::Stationary => stationary(&mut rng, cases, &mut t)?,
        Suite::Residual => residual(&mut rng, cases, &mut t)?,
    }
    Ok(t.report)
}

const OSC_TOL: f64 = 1e-10;

/// Phases with monotone f′ ≥ δ > 0: quadratics with linear f′, powers A·u^p, and −c/u.
fn lemma1(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) -> Result<()> {
    for _ in 0..cases {
        let family = rng.random_range(0..3);
        let (desc, check) = match family {
            0 => {
                let len = rng.random_range(0.5..5.0);
                let c: f64 = rng.random_range(0.2..20.0);
                // f′(u) = c + 2d·u stays ≥ 0.1c on [0, len]
                let d = rng.random_range(-0.45 * c / len..5.0);
                let delta = c.min(c + 2.0 * d * len);
                let f = move |u: f64| c * u + d * u * u;
                (format!("quadratic c={c} d={d} len={len}"), check_first_derivative_bound(&f, 0.0, len, delta, OSC_TOL)?)
            }
            1 => {
                let a: f64 = rng.random_range(0.1..2.0);
                let b = a + rng.random_range(0.5..4.0);
                let p = rng.random_range(1.0..3.0);
                let amp = rng.random_range(0.2..5.0);
                let delta = amp * p * a.powf(p - 1.0);
                let f = move |u: f64| amp * u.powf(p);
                (format!("power amp={amp} p={p} [{a},{b}]"), check_first_derivative_bound(&f, a, b, delta, OSC_TOL)?)
            }
            _ => {
                let a = rng.random_range(1.0..10.0);
                let b = a + rng.random_range(0.5..10.0);
                let c = rng.random_range(0.5..200.0);
                let delta = c / (b * b);
                let f = move |u: f64| -c / u;
                (format!("hyperbolic c={c} [{a},{b}]"), check_first_derivative_bound(&f, a, b, delta, OSC_TOL)?)
            }
        };
        t.record(check.pass, || format!("{desc}: |I|={} > 4/delta={}", check.magnitude, check.bound));
    }
    Ok(())
}

/// Phases with f″ ≥ A > 0: A/2·u² + cu + e·u³ (e ≥ 0, u ≥ 0) and c/u on u > 0.
fn lemma2(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) -> Result<()> {
    for _ in 0..cases {
        let (desc, check) = if rng.random_bool(0.6) {
            let len = rng.random_range(0.5..4.0);
            let big_a = 10f64.powf(rng.random_range(-2.0..1.5));
            let c = rng.random_range(-20.0..20.0);
            let e = rng.random_range(0.0..2.0);
            let f = move |u: f64| 0.5 * big_a * u * u + c * u + e * u * u * u;
            (format!("cubic A={big_a} c={c} e={e} len={len}"), check_second_derivative_bound(&f, 0.0, len, big_a, OSC_TOL)?)
        } else {
            let a = rng.random_range(1.0..10.0);
            let b = a + rng.random_range(0.5..20.0);
            let c = rng.random_range(0.5..500.0);
            let big_a = 2.0 * c / (b * b * b);
            let f = move |u: f64| c / u;
            (format!("hyperbolic c={c} [{a},{b}]"), check_second_derivative_bound(&f, a, b, big_a, OSC_TOL)?)
        };
        t.record(check.pass, || format!("{desc}: |I|={} > 12/sqrt(A)={}", check.magnitude, check.bound));
    }
    Ok(())
}

/// (1/2δ₀)∫_{−δ₀}^{δ₀} ρ(x+u) du by quadrature split at the jumps of ρ.
pub fn rho1_quadrature(x: f64, delta0: f64) -> Result<f64> {
    let mut cuts = vec![-delta0];
    let first = (x - delta0).floor() as i64 + 1;
    let last = (x + delta0).ceil() as i64 - 1;
    for k in first..=last {
        let u = k as f64 - x;
        if u > -delta0 && u < delta0 {
            cuts.push(u);
        }
    }
    cuts.push(delta0);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        // integrate the continuous branch of ρ on (lo, hi)
        let base = (x + 0.5 * (lo + hi)).floor();
        let f = |u: f64| 0.5 - (x + u - base);
        total += quad::integrate(f, lo, hi, 1e-15, 64)?.value;
    }
    Ok(total / (2.0 * delta0))
}

fn lemma4(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) -> Result<()> {
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let x = rng.random_range(-50.0..50.0);
        let delta0 = rng.random_range(1e-3..0.499);
        let closed = rho1(x, delta0)?;
        let quad = rho1_quadrature(x, delta0)?;
        let dev = (closed - quad).abs();
        worst = worst.max(dev);
        let s = x - (x + 0.5).floor();
        let outside_ok = s.abs() < delta0 || closed == rho(x);
        t.record(dev <= 1e-12 && outside_ok, || format!("x={x} delta0={delta0}: closed={closed} quad={quad}"));
    }
    t.report.notes.push(format!("max deviation {worst:.3e}"));
    Ok(())
}

/// Points on (u + a/q)v = x in [1, x]² by scanning v.
pub fn shifted_lattice_brute(x: u64, a: u64, q: u64) -> Vec<(u64, u64)> {
    let qx = q * x;
    let mut pts = Vec::new();
    for v in 1..=x {
        if !qx.is_multiple_of(v) {
            continue;
        }
        let w = qx / v;
        if w > a && (w - a).is_multiple_of(q) {
            let u = (w - a) / q;
            if (1..=x).contains(&u) {
                pts.push((u, v));
            }
        }
    }
    pts.sort_unstable();
    pts
}

fn lemma5(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) -> Result<()> {
    for _ in 0..cases {
        let x = rng.random_range(1..=10_000u64);
        let q = rng.random_range(1..=60u64);
        let a = rng.random_range(0..q);
        let shift = Rational::new(a as i64, q as i64)?;
        let (a, q) = (shift.numer() as u64, shift.denom() as u64);
        let fast = shifted_lattice_rational(x, shift)?;
        let brute = shifted_lattice_brute(x, a, q);
        let cap = tau(q * x)? as usize;
        t.record(fast == brute && fast.len() <= cap, || {
            format!("x={x} shift={a}/{q}: fast {} points, brute {}, tau(qx)={cap}", fast.len(), brute.len())
        });
    }
    Ok(())
}

fn lemma7(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) -> Result<()> {
    for _ in 0..cases {
        let xi: f64 = rng.random();
        let eta: f64 = rng.random();
        let tau = 10f64.powf(rng.random_range(0.01..5.0));
        let r = approx_2d(xi, eta, tau)?;
        t.record(r.satisfies_invariants(xi, eta), || format!("xi={xi} eta={eta} tau={tau}: {r:?}"));
    }
    Ok(())
}

/// One of three weight families: genuine ψ weights, a sparse random set, dense random values.
pub fn random_weights(rng: &mut ChaCha8Rng, r: f64) -> Result<PsiWeights> {
    let family = rng.random_range(0..3);
    weights_of_family(rng, r, family)
}

/// Random weights covering n ≤ r/4 from family 0 (ψ), 1 (sparse) or 2 (dense).
pub fn weights_of_family(rng: &mut ChaCha8Rng, r: f64, family: usize) -> Result<PsiWeights> {
    let top = (r / 4.0).floor() as usize;
    match family {
        0 => {
            // N² ≈ mx with m ~ 1 puts p-ranges near 1; scale x so that √x/4 ≥ r/4
            let x = (r * r).max(1e4) * rng.random_range(1.0..4.0);
            let n = x.powf(0.25) * rng.random_range(2.5..12.0);
            let w = psi_weights(PsiParams { n, x, k: rng.random_range(1..4), delta: rng.random_range(1e-3..0.05) })?;
            let mut v = w.values().to_vec();
            v.resize(top.max(v.len()), 0.0);
            Ok(PsiWeights::from_values(v))
        }
        1 => {
            let mut v = vec![0.0; top];
            for _ in 0..rng.random_range(1..6) {
                let n = rng.random_range(0..top);
                v[n] = rng.random_range(-3.0..3.0);
            }
            Ok(PsiWeights::from_values(v))
        }
        _ => Ok(PsiWeights::from_values((0..top).map(|_| rng.random_range(-1.0..1.0)).collect())),
    }
}

fn parseval(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) -> Result<()> {
    for _ in 0..cases {
        let r = rng.random_range(20.0..1000.0f64).round();
        let w = random_weights(rng, r)?;
        let res = mean_value(r, &w, 1e-9, 1e-12)?;
        let gap = (res.direct - res.parseval).abs();
        t.record(gap <= res.tail_bound + 1e-6 * res.direct + 1e-12, || {
            format!("r={r}: direct={} parseval={} tail={}", res.direct, res.parseval, res.tail_bound)
        });
    }
    Ok(())
}

/// Endpoint allowance (1/π)(1/|f′(N)| + 1/|f′(2N+1)|) for I_{p,m} with an interior stationary point.
pub fn stationary_allowance(spec: &OscSpec) -> f64 {
    let (a, b) = spec.interval();
    use crate::osc::Phase;
    (1.0 / spec.slope(a).abs() + 1.0 / spec.slope(b).abs()) / std::f64::consts::PI
}

fn stationary(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) -> Result<()> {
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let m = rng.random_range(1..=4u64);
        let p = rng.random_range(1..=4i64);
        let n = rng.random_range(50.0..400.0f64).round();
        let u_star = rng.random_range(1.25 * n..1.75 * n + 0.5);
        let x = p as f64 * u_star * u_star / m as f64;
        let spec = OscSpec { m, p, n, x, sign: PhaseSign::Stationary };
        let main = i_pm_stationary(&spec)?;
        let value = i_pm(&spec, 1e-9)?;
        let err = (value - main.main).norm();
        let allow = stationary_allowance(&spec);
        worst = worst.max(err / allow);
        t.record(main.valid && err <= allow, || {
            format!("m={m} p={p} N={n} x={x}: |I - main|={err} > endpoint allowance {allow}")
        });
    }
    t.report.notes.push(format!("max error / endpoint allowance {worst:.3}"));
    Ok(())
}

fn residual(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) -> Result<()> {
    let mut xs = residual_grid(1000, 1_000_000, 50)?;
    xs.extend((0..cases).map(|_| rng.random_range(1..=1_000_000u64)));
    xs.sort_unstable();
    xs.dedup();
    let rep = residual_probe(&xs)?;
    for f in rep.families {
        t.report.notes.push(format!("c={}: sup={:.6} at x={}", f.c, f.sup, f.at_x));
    }
    t.record(rep.chosen.is_some(), || "no unique bounded residual family".into());
    if let Some(c) = rep.chosen {
        t.report.notes.push(format!("bounded family: c={c}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("unknown".parse::<Suite>().is_err());
    }

    #[test]
    fn rho1_quadrature_matches_closed_form() {
        for &(x, d) in &[(0.3, 0.1), (0.05, 0.1), (-2.97, 0.2), (7.0, 0.25)] {
            assert!((rho1_quadrature(x, d).unwrap() - rho1(x, d).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn brute_lattice_small_case() {
        // (u + 1/2)v = 6 → (2u+1)v = 12: (1, 4), (5, 1)... only odd 2u+1 ∈ {3}: u=1, v=4
        assert_eq!(shifted_lattice_brute(6, 1, 2), vec![(1, 4)]);
    }

    #[test]
    fn quick_suites_pass() {
        for s in [Suite::Lemma1, Suite::Lemma2, Suite::Lemma4, Suite::Lemma5, Suite::Lemma7] {
            let r = run(s, 7, 40).unwrap();
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn same_seed_same_report() {
        assert_eq!(run(Suite::Lemma7, 3, 50).unwrap(), run(Suite::Lemma7, 3, 50).unwrap());
    }
}
