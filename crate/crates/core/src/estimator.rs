//! Monte Carlo estimation on top of the detectors.
//!
//! An [`Experiment`] turns trial `t` (the RNG stream) into a vector of
//! success counters; totals are sums over trials, so any runner that visits
//! every trial once produces the same numbers regardless of order or
//! parallelism. Comparative statistics evaluate all their events on the
//! same sample (common random numbers).

use alloc::vec;
use alloc::vec::Vec;

use crate::arms::{detect_arms, detect_arms_nested, detect_arms_oracle, detect_separated};
use crate::color::ColorSequence;
use crate::config::{ConfigSource, Configuration};
use crate::connectivity::{crossing, CrossDirection, Rect};
use crate::lattice::{n0, Annulus, BoxRegion};
use crate::{Color, Vertex};
use crate::Error;

fn sq(x: f64) -> f64 {
    x * x
}

/// Success count of one event over a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub seed: u64,
    /// Seconds, filled in by runners that can measure time.
    pub wall_time: f64,
}

/// Wilson score interval for `s` successes in `t` trials at normal quantile `z`.
pub fn wilson_interval(s: u64, t: u64, z: f64) -> (f64, f64) {
    if t == 0 {
        return (0.0, 1.0);
    }
    let n = t as f64;
    let p = s as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // at p = 0 or 1 one bound equals p exactly; rounding can push it past
    ((center - half).clamp(0.0, p), (center + half).clamp(p, 1.0))
}

impl Estimate {
    pub fn new(successes: u64, trials: u64, seed: u64) -> Self {
        Estimate { successes, trials, seed, wall_time: 0.0 }
    }

    pub fn phat(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    /// 95% Wilson interval.
    pub fn wilson95(&self) -> (f64, f64) {
        wilson_interval(self.successes, self.trials, 1.959_963_984_540_054)
    }

    /// Binomial standard error `sqrt(p(1-p)/n)`.
    pub fn std_error(&self) -> f64 {
        let p = self.phat();
        libm::sqrt(p * (1.0 - p) / self.trials.max(1) as f64)
    }
}

/// Which detector decides a trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Detector {
    Fast,
    Oracle,
    Separated,
}

impl Detector {
    pub fn name(self) -> &'static str {
        match self {
            Detector::Fast => "fast",
            Detector::Oracle => "oracle",
            Detector::Separated => "separated",
        }
    }
}

/// A batch of trials producing summed counters.
pub trait Experiment: Sync {
    fn counters(&self) -> usize;
    /// Adds the outcome of trial `stream` into `out`.
    fn trial(&self, stream: u64, out: &mut [u64]) -> Result<(), Error>;
}

/// Visits trials `0..trials` and sums their counters.
pub trait Runner {
    fn run(&self, exp: &dyn Experiment, trials: u64) -> Result<Vec<u64>, Error>;
}

/// Single-threaded runner.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Runner for Sequential {
    fn run(&self, exp: &dyn Experiment, trials: u64) -> Result<Vec<u64>, Error> {
        let mut out = vec![0u64; exp.counters()];
        for t in 0..trials {
            exp.trial(t, &mut out)?;
        }
        Ok(out)
    }
}

/// Parameters of an arm-probability run: one sequence, one inner radius,
/// one or more outer radii sharing each sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentSpec {
    pub sigma: ColorSequence,
    pub n: u32,
    pub outer: Vec<u32>,
    pub ell: u32,
    pub trials: u64,
    pub seed: u64,
    pub detector: Detector,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if self.trials == 0 {
            return Err(Error::ZeroTrials);
        }
        let need = n0(self.sigma.len())?;
        if self.outer.is_empty() {
            return Err(Error::TooFewPoints);
        }
        for &big in &self.outer {
            if self.n < need || self.n >= big {
                return Err(Error::InvalidRadii { inner: self.n, outer: big });
            }
        }
        if self.detector == Detector::Separated && self.ell < 5 {
            return Err(Error::SeparationTooSmall(self.ell));
        }
        Ok(())
    }
}

/// Sample box for outer radius `big`: one extra layer for dual edges.
pub fn sample_box(big: u32) -> BoxRegion {
    BoxRegion::centered(big + 1)
}

/// Events `A_{k,σ_i}(n, N_j)` for several sequences and nested outer radii
/// on one sample; counter `i * outer.len() + j`. Larger radii are skipped
/// once a smaller one fails, since the events are nested.
pub struct ArmExperiment<'a> {
    pub source: &'a dyn ConfigSource,
    pub sigmas: Vec<ColorSequence>,
    pub n: u32,
    pub outer: Vec<u32>,
    pub ell: u32,
    pub detector: Detector,
}

impl ArmExperiment<'_> {
    fn detect(&self, cfg: &Configuration, sigma: &ColorSequence, big: u32) -> Result<bool, Error> {
        let a = Annulus::centered(self.n, big)?;
        match self.detector {
            Detector::Fast => detect_arms(cfg, a, sigma),
            Detector::Oracle => Ok(detect_arms_oracle(cfg, a, sigma)?.is_some()),
            Detector::Separated => detect_separated(cfg, a, sigma, self.ell),
        }
    }
}

impl Experiment for ArmExperiment<'_> {
    fn counters(&self) -> usize {
        self.sigmas.len() * self.outer.len()
    }

    fn trial(&self, stream: u64, out: &mut [u64]) -> Result<(), Error> {
        let big = self.outer.iter().copied().max().unwrap_or(1);
        let cfg = self.source.sample(sample_box(big), stream);
        if self.detector == Detector::Fast {
            let hits = detect_arms_nested(&cfg, Vertex::new(0, 0), self.n, &self.outer, &self.sigmas)?;
            for (i, row) in hits.iter().enumerate() {
                for (j, &hit) in row.iter().enumerate() {
                    out[i * self.outer.len() + j] += hit as u64;
                }
            }
            return Ok(());
        }
        let mut order: Vec<usize> = (0..self.outer.len()).collect();
        order.sort_by_key(|&j| self.outer[j]);
        for (i, sigma) in self.sigmas.iter().enumerate() {
            for &j in &order {
                // nesting holds for the exact oracle, not the witness search
                if !self.detect(&cfg, sigma, self.outer[j])? {
                    if self.detector != Detector::Separated {
                        break;
                    }
                    continue;
                }
                out[i * self.outer.len() + j] += 1;
            }
        }
        Ok(())
    }
}

/// One estimate per outer radius, in the order of `spec.outer`.
pub fn estimate_arm_prob(spec: &ExperimentSpec, source: &dyn ConfigSource, runner: &dyn Runner) -> Result<Vec<Estimate>, Error> {
    spec.validate()?;
    let exp = ArmExperiment {
        source,
        sigmas: vec![spec.sigma.clone()],
        n: spec.n,
        outer: spec.outer.clone(),
        ell: spec.ell,
        detector: spec.detector,
    };
    let counts = runner.run(&exp, spec.trials)?;
    Ok(counts.into_iter().map(|s| Estimate::new(s, spec.trials, source.seed())).collect())
}

/// `p̂(a) / p̂(b)` with the conservative interval `[lo_a / hi_b, hi_a / lo_b]`
/// from the two Wilson intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct Ratio {
    pub a: ColorSequence,
    pub b: ColorSequence,
    pub outer: u32,
    pub ratio: f64,
    pub lo: f64,
    pub hi: f64,
}

pub fn ratio_of(a: &Estimate, b: &Estimate) -> (f64, f64, f64) {
    let (la, ha) = a.wilson95();
    let (lb, hb) = b.wilson95();
    let div = |x: f64, y: f64| if y > 0.0 { x / y } else { f64::INFINITY };
    (div(a.phat(), b.phat()), if hb > 0.0 { la / hb } else { 0.0 }, div(ha, lb))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioTable {
    pub sigmas: Vec<ColorSequence>,
    pub n: u32,
    pub outer: Vec<u32>,
    /// `estimates[i][j]` for sequence `i`, outer radius `j`.
    pub estimates: Vec<Vec<Estimate>>,
    /// Every ordered pair (including a sequence with itself), per radius.
    pub ratios: Vec<Ratio>,
}

/// Paired estimates of several polychromatic sequences of equal length and
/// all their pairwise ratios.
pub fn compare_sequences(
    sigmas: &[ColorSequence],
    n: u32,
    outer: &[u32],
    trials: u64,
    source: &dyn ConfigSource,
    runner: &dyn Runner,
) -> Result<RatioTable, Error> {
    let first = sigmas.first().ok_or(Error::EmptySequence)?;
    for s in sigmas {
        if !s.is_polychromatic() {
            return Err(Error::Monochromatic);
        }
        if s.len() != first.len() {
            return Err(Error::LengthMismatch);
        }
    }
    ExperimentSpec {
        sigma: first.clone(),
        n,
        outer: outer.to_vec(),
        ell: 5,
        trials,
        seed: source.seed(),
        detector: Detector::Fast,
    }
    .validate()?;
    let exp = ArmExperiment { source, sigmas: sigmas.to_vec(), n, outer: outer.to_vec(), ell: 5, detector: Detector::Fast };
    let counts = runner.run(&exp, trials)?;
    let m = outer.len();
    let estimates: Vec<Vec<Estimate>> =
        (0..sigmas.len()).map(|i| (0..m).map(|j| Estimate::new(counts[i * m + j], trials, source.seed())).collect()).collect();
    let mut ratios = Vec::new();
    for j in 0..m {
        for (ia, a) in sigmas.iter().enumerate() {
            for (ib, b) in sigmas.iter().enumerate() {
                let (ratio, lo, hi) = ratio_of(&estimates[ia][j], &estimates[ib][j]);
                ratios.push(Ratio { a: a.clone(), b: b.clone(), outer: outer[j], ratio, lo, hi });
            }
        }
    }
    Ok(RatioTable { sigmas: sigmas.to_vec(), n, outer: outer.to_vec(), estimates, ratios })
}

/// Separated versus plain arm events on the same samples.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationReport {
    pub separated: Estimate,
    pub plain: Estimate,
    /// `p̂(Ã) / p̂(A)`, a lower bound for the true ratio.
    pub ratio: f64,
    /// Samples with the separated event but not the plain one (must be 0).
    pub violations: u64,
}

struct SeparationExperiment<'a> {
    source: &'a dyn ConfigSource,
    sigma: ColorSequence,
    annulus: Annulus,
    ell: u32,
}

impl Experiment for SeparationExperiment<'_> {
    fn counters(&self) -> usize {
        3
    }

    fn trial(&self, stream: u64, out: &mut [u64]) -> Result<(), Error> {
        let cfg = self.source.sample(sample_box(self.annulus.outer), stream);
        let plain = detect_arms(&cfg, self.annulus, &self.sigma)?;
        // evaluated even without the plain event, to count violations
        let sep = detect_separated(&cfg, self.annulus, &self.sigma, self.ell)?;
        out[0] += sep as u64;
        out[1] += plain as u64;
        out[2] += (sep && !plain) as u64;
        Ok(())
    }
}

/// Whether `8 ℓ n0(k) <= 8 n <= N`.
pub fn in_separation_regime(k: usize, ell: u32, n: u32, big: u32) -> Result<bool, Error> {
    Ok(8 * ell * n0(k)? <= 8 * n && 8 * n <= big)
}

pub fn separation_ratio(
    sigma: &ColorSequence,
    ell: u32,
    n: u32,
    big: u32,
    trials: u64,
    source: &dyn ConfigSource,
    runner: &dyn Runner,
) -> Result<SeparationReport, Error> {
    if ell < 5 {
        return Err(Error::SeparationTooSmall(ell));
    }
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if !in_separation_regime(sigma.len(), ell, n, big)? {
        return Err(Error::RegimeViolation);
    }
    let exp = SeparationExperiment { source, sigma: sigma.clone(), annulus: Annulus::centered(n, big)?, ell };
    let c = runner.run(&exp, trials)?;
    let separated = Estimate::new(c[0], trials, source.seed());
    let plain = Estimate::new(c[1], trials, source.seed());
    let ratio = if c[1] > 0 { c[0] as f64 / c[1] as f64 } else { 0.0 };
    Ok(SeparationReport { separated, plain, ratio, violations: c[2] })
}

/// `π(n, N)` against `π(n, m) π(m, N)` on the same samples.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiMultReport {
    pub whole: Estimate,
    pub inner: Estimate,
    pub outer: Estimate,
    /// Both sub-annulus events on the same sample.
    pub joint: Estimate,
    /// `π̂(n, m) π̂(m, N)`.
    pub product: f64,
    /// Standard error of the product (delta method).
    pub product_se: f64,
    /// Samples with the whole event but not both sub-events (must be 0).
    pub violations: u64,
    /// `π̂(n, m) π̂(m, N) / π̂(n, N)`.
    pub constant: f64,
}

impl QuasiMultReport {
    /// `π̂(n, N) <= π̂(n, m) π̂(m, N)` up to `z` combined standard errors.
    pub fn holds_within(&self, z: f64) -> bool {
        let se = libm::sqrt(sq(self.whole.std_error()) + sq(self.product_se));
        self.whole.phat() <= self.product + z * se
    }
}

struct QuasiMultExperiment<'a> {
    source: &'a dyn ConfigSource,
    sigma: ColorSequence,
    radii: [u32; 3],
}

impl Experiment for QuasiMultExperiment<'_> {
    fn counters(&self) -> usize {
        5
    }

    fn trial(&self, stream: u64, out: &mut [u64]) -> Result<(), Error> {
        let [n, m, big] = self.radii;
        let cfg = self.source.sample(sample_box(big), stream);
        let whole = detect_arms(&cfg, Annulus::centered(n, big)?, &self.sigma)?;
        let inner = detect_arms(&cfg, Annulus::centered(n, m)?, &self.sigma)?;
        let outer = detect_arms(&cfg, Annulus::centered(m, big)?, &self.sigma)?;
        out[0] += whole as u64;
        out[1] += inner as u64;
        out[2] += outer as u64;
        out[3] += (inner && outer) as u64;
        out[4] += (whole && !(inner && outer)) as u64;
        Ok(())
    }
}

pub fn quasi_mult_check(
    sigma: &ColorSequence,
    n: u32,
    m: u32,
    big: u32,
    trials: u64,
    source: &dyn ConfigSource,
    runner: &dyn Runner,
) -> Result<QuasiMultReport, Error> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if !(n <= m && m <= big && n < big) || n < n0(sigma.len())? {
        return Err(Error::InvalidRadii { inner: n, outer: big });
    }
    let seed = source.seed();
    if m == n || m == big {
        // one factor is the trivial event
        let spec = ExperimentSpec { sigma: sigma.clone(), n, outer: vec![big], ell: 5, trials, seed, detector: Detector::Fast };
        let whole = estimate_arm_prob(&spec, source, runner)?[0];
        let one = Estimate::new(trials, trials, seed);
        let (inner, outer) = if m == n { (one, whole) } else { (whole, one) };
        return Ok(QuasiMultReport {
            whole,
            inner,
            outer,
            joint: whole,
            product: whole.phat(),
            product_se: whole.std_error(),
            violations: 0,
            constant: 1.0,
        });
    }
    let exp = QuasiMultExperiment { source, sigma: sigma.clone(), radii: [n, m, big] };
    let c = runner.run(&exp, trials)?;
    let est = |s| Estimate::new(s, trials, seed);
    let (whole, inner, outer, joint) = (est(c[0]), est(c[1]), est(c[2]), est(c[3]));
    let product = inner.phat() * outer.phat();
    let product_se = libm::sqrt(sq(outer.phat() * inner.std_error()) + sq(inner.phat() * outer.std_error()));
    let constant = if whole.successes > 0 { product / whole.phat() } else { f64::INFINITY };
    Ok(QuasiMultReport { whole, inner, outer, joint, product, product_se, violations: c[4], constant })
}

/// Least-squares slope of `ln p` against `ln(N / n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
}

/// Fits `y = a + b x` by ordinary least squares.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<ExponentFit, Error> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch);
    }
    let m = xs.len();
    if m < 2 {
        return Err(Error::TooFewPoints);
    }
    let k = m as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::TooFewPoints);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if m > 2 {
        let rss: f64 = xs.iter().zip(ys).map(|(x, y)| sq(y - intercept - slope * x)).sum();
        libm::sqrt(rss / (k - 2.0) / sxx)
    } else {
        0.0
    };
    Ok(ExponentFit { slope, stderr, intercept })
}

/// Power-law fit of `p(N)` given as `(N, p̂)` pairs.
pub fn fit_power_law(n: u32, points: &[(u32, f64)]) -> Result<ExponentFit, Error> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints);
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(big, p) in points {
        if p <= 0.0 {
            return Err(Error::ZeroEstimate(big));
        }
        xs.push(libm::log(big as f64 / n as f64));
        ys.push(libm::log(p));
    }
    fit_line(&xs, &ys)
}

/// Estimates over the outer radii and the fitted exponent.
pub fn fit_exponent(
    sigma: &ColorSequence,
    n: u32,
    outer: &[u32],
    trials: u64,
    source: &dyn ConfigSource,
    runner: &dyn Runner,
) -> Result<(Vec<Estimate>, ExponentFit), Error> {
    if outer.len() < 3 {
        return Err(Error::TooFewPoints);
    }
    let spec = ExperimentSpec {
        sigma: sigma.clone(),
        n,
        outer: outer.to_vec(),
        ell: 5,
        trials,
        seed: source.seed(),
        detector: Detector::Fast,
    };
    let est = estimate_arm_prob(&spec, source, runner)?;
    let points: Vec<(u32, f64)> = outer.iter().zip(&est).map(|(&big, e)| (big, e.phat())).collect();
    let fit = fit_power_law(n, &points)?;
    Ok((est, fit))
}

/// The `(n + 1) × n` rectangle `[0, n + 1] × [0, n]`.
pub fn selfdual_rect(n: u32) -> Result<Rect, Error> {
    Rect::new(0, 0, n as i32 + 1, n as i32)
}

struct CrossingExperiment<'a> {
    source: &'a dyn ConfigSource,
    rect: Rect,
    region: BoxRegion,
}

impl Experiment for CrossingExperiment<'_> {
    fn counters(&self) -> usize {
        1
    }

    fn trial(&self, stream: u64, out: &mut [u64]) -> Result<(), Error> {
        let cfg = self.source.sample(self.region, stream);
        out[0] += crossing(&cfg, self.rect, CrossDirection::Horizontal, Color::O)? as u64;
        Ok(())
    }
}

/// Horizontal open crossings of the `(n + 1) × n` rectangle; the exact
/// value is `1/2`.
pub fn crossing_selfduality_check(n: u32, trials: u64, source: &dyn ConfigSource, runner: &dyn Runner) -> Result<Estimate, Error> {
    if n < 1 {
        return Err(Error::Degenerate);
    }
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let rect = selfdual_rect(n)?;
    let exp = CrossingExperiment { source, rect, region: BoxRegion::new(crate::Vertex::new(0, 0), n + 2) };
    let c = runner.run(&exp, trials)?;
    Ok(Estimate::new(c[0], trials, source.seed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ConstantSampler, CriticalSampler};

    fn seq(s: &str) -> ColorSequence {
        s.parse().unwrap()
    }

    #[test]
    fn wilson_contains_phat() {
        for (s, t) in [(0, 10), (3, 10), (10, 10), (500, 1000)] {
            let e = Estimate::new(s, t, 0);
            let (lo, hi) = e.wilson95();
            assert!(lo <= e.phat() && e.phat() <= hi);
        }
        let (lo, hi) = wilson_interval(50, 100, 1.959_963_984_540_054);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    #[test]
    fn constant_source_gives_certain_event() {
        let spec = ExperimentSpec { sigma: seq("O"), n: 1, outer: vec![2], ell: 5, trials: 20, seed: 0, detector: Detector::Fast };
        let e = estimate_arm_prob(&spec, &ConstantSampler { open: true }, &Sequential).unwrap();
        assert_eq!(e[0].phat(), 1.0);
    }

    #[test]
    fn reproducible() {
        let spec = ExperimentSpec { sigma: seq("OC*"), n: 2, outer: vec![8, 12], ell: 5, trials: 200, seed: 7, detector: Detector::Fast };
        let src = CriticalSampler { seed: 7 };
        let a = estimate_arm_prob(&spec, &src, &Sequential).unwrap();
        let b = estimate_arm_prob(&spec, &src, &Sequential).unwrap();
        assert_eq!(a, b);
        assert!(a[1].successes <= a[0].successes);
    }

    #[test]
    fn spec_validation() {
        let mut spec = ExperimentSpec { sigma: seq("O"), n: 1, outer: vec![4], ell: 5, trials: 0, seed: 0, detector: Detector::Fast };
        assert_eq!(spec.validate(), Err(Error::ZeroTrials));
        spec.trials = 1;
        spec.outer = vec![1];
        assert!(matches!(spec.validate(), Err(Error::InvalidRadii { .. })));
    }

    #[test]
    fn single_sequence_ratio_is_one() {
        let t = compare_sequences(&[seq("OC*")], 2, &[8], 100, &CriticalSampler { seed: 1 }, &Sequential).unwrap();
        assert!(t.ratios.iter().all(|r| r.ratio == 1.0));
        assert_eq!(
            compare_sequences(&[seq("OO")], 2, &[8], 10, &CriticalSampler { seed: 1 }, &Sequential),
            Err(Error::Monochromatic)
        );
    }

    #[test]
    fn synthetic_power_law() {
        let pts: Vec<(u32, f64)> = [8u32, 16, 32, 64].iter().map(|&big| (big, 1.0 / (big as f64 * big as f64))).collect();
        let fit = fit_power_law(1, &pts).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-6);
        assert_eq!(fit_power_law(1, &[(8, 0.5), (16, 0.0), (32, 0.1)]), Err(Error::ZeroEstimate(16)));
    }

    #[test]
    fn separation_k1_is_exact() {
        let r = separation_ratio(&seq("O"), 5, 5, 40, 30, &CriticalSampler { seed: 2 }, &Sequential).unwrap();
        assert_eq!(r.separated, r.plain);
        assert_eq!(r.violations, 0);
        assert_eq!(
            separation_ratio(&seq("O"), 5, 4, 40, 30, &CriticalSampler { seed: 2 }, &Sequential),
            Err(Error::RegimeViolation)
        );
    }

    #[test]
    fn quasi_mult_degenerate_and_inclusion() {
        let src = CriticalSampler { seed: 3 };
        let r = quasi_mult_check(&seq("O"), 2, 2, 16, 50, &src, &Sequential).unwrap();
        assert_eq!(r.constant, 1.0);
        let r = quasi_mult_check(&seq("OC*"), 2, 6, 16, 100, &src, &Sequential).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn crossing_estimate_is_reproducible() {
        let src = CriticalSampler { seed: 4 };
        let a = crossing_selfduality_check(3, 300, &src, &Sequential).unwrap();
        assert_eq!(a, crossing_selfduality_check(3, 300, &src, &Sequential).unwrap());
    }
}
