//! Walk-on-spheres Monte Carlo estimation of Brownian first-hit
//! probabilities.
//!
//! Each walk jumps to a uniform point of the largest boundary-free circle
//! around the current position and terminates inside an epsilon shell of the
//! boundary; the termination point samples the harmonic-measure exit
//! distribution up to O(eps) classification bias.
//!
//! Reproducibility contract: the random stream of sample `i` is a
//! counter-based ChaCha stream keyed by `(seed, i)`. Workers own disjoint
//! sample-index ranges and merging is a sum of integer counts, so results are
//! bit-identical for a fixed config regardless of worker count or
//! scheduling.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, HitClass, Point};

/// Tolerated fraction of timed-out walks before a run is rejected.
const TIMEOUT_BUDGET: f64 = 1e-3;

/// Monte Carlo run parameters.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct WosConfig {
    /// Absorption shell thickness in units of the run scale (the probed
    /// radius `R`, or the domain scale when no radius is involved).
    pub eps: f64,
    /// Step-count guard per walk.
    pub max_steps: u32,
    /// Total number of walks.
    pub samples: u64,
    /// Base seed of the counter-based sample streams.
    pub seed: u64,
    /// Samples per work batch; partitions work, never the random stream.
    pub batch: u64,
}

impl WosConfig {
    pub fn new(samples: u64, seed: u64) -> WosConfig {
        WosConfig { eps: 1e-4, max_steps: 1_000_000, samples, seed, batch: samples.clamp(1, 4096) }
    }

    pub fn with_eps(mut self, eps: f64) -> WosConfig {
        self.eps = eps;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.eps.is_nan() || self.eps <= 0.0 {
            return Err(Error::invalid(format!("eps = {} must be positive", self.eps)));
        }
        if self.samples == 0 || self.batch == 0 || self.batch > self.samples {
            return Err(Error::invalid(format!(
                "need 1 <= batch <= samples, got batch = {}, samples = {}",
                self.batch, self.samples
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps must be positive".to_string()));
        }
        Ok(())
    }
}

/// Walk outcome counts plus the derived binomial estimate.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TallyEstimate {
    pub hits: u64,
    pub samples: u64,
    pub ambiguous: u64,
    pub timeouts: u64,
    /// `hits / (samples - ambiguous - timeouts)`.
    pub p_hat: f64,
    /// Binomial standard error over the effective sample count.
    pub stderr: f64,
    /// Seed echo for provenance.
    pub seed: u64,
    /// Context guarded by [`merge`]: domain name and shell thickness.
    pub domain: String,
    pub eps: f64,
}

impl TallyEstimate {
    fn from_counts(counts: Counts, seed: u64, domain: &str, eps: f64) -> TallyEstimate {
        let effective = counts.effective();
        let p_hat = if effective > 0 { counts.hits as f64 / effective as f64 } else { 0.0 };
        let stderr =
            if effective > 0 { (p_hat * (1.0 - p_hat) / effective as f64).sqrt() } else { 0.0 };
        TallyEstimate {
            hits: counts.hits,
            samples: counts.samples,
            ambiguous: counts.ambiguous,
            timeouts: counts.timeouts,
            p_hat,
            stderr,
            seed,
            domain: domain.to_string(),
            eps,
        }
    }

    pub fn misses(&self) -> u64 {
        self.samples - self.hits - self.ambiguous - self.timeouts
    }

    pub fn effective(&self) -> u64 {
        self.samples - self.ambiguous - self.timeouts
    }

    pub fn ambiguous_frac(&self) -> f64 {
        self.ambiguous as f64 / self.samples as f64
    }

    pub fn timeout_frac(&self) -> f64 {
        self.timeouts as f64 / self.samples as f64
    }

    /// Estimate of the complementary class with the same standard error.
    pub fn complement(&self) -> f64 {
        1.0 - self.p_hat
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Counts {
    hits: u64,
    samples: u64,
    ambiguous: u64,
    timeouts: u64,
}

impl Counts {
    fn effective(&self) -> u64 {
        self.samples - self.ambiguous - self.timeouts
    }

    fn add(&mut self, other: Counts) {
        self.hits += other.hits;
        self.samples += other.samples;
        self.ambiguous += other.ambiguous;
        self.timeouts += other.timeouts;
    }
}

/// The per-sample generator: one independent ChaCha stream per
/// `(seed, sample index)` pair, independent of scheduling.
fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs one walk from `start` and classifies its termination; `None` means
/// the walk hit the step guard.
///
/// `r` is the classification radius: a genuine boundary foot of modulus
/// `>= r` is `Far`, otherwise `Near` (`r = 0` makes everything far). If the
/// domain carries an escape circle, terminating on it yields `Escape`.
/// Terminations where the two nearest pieces disagree in class within twice
/// the shell are `Ambiguous`.
pub fn sample_exit(
    domain: &DomainSpec,
    start: Point,
    r: f64,
    config: &WosConfig,
    stream_index: u64,
) -> Result<(Option<HitClass>, u32)> {
    if !domain.contains(start) {
        return Err(Error::PointOutsideDomain(start.re, start.im));
    }
    config.validate()?;
    let shell = config.eps * run_scale(domain, r);
    Ok(walk(domain, start, r, shell, config.max_steps, config.seed, stream_index))
}

fn run_scale(domain: &DomainSpec, r: f64) -> f64 {
    if r > 0.0 {
        r
    } else {
        domain.scale()
    }
}

fn walk(
    domain: &DomainSpec,
    start: Point,
    r: f64,
    shell: f64,
    max_steps: u32,
    seed: u64,
    stream_index: u64,
) -> (Option<HitClass>, u32) {
    let mut rng = sample_stream(seed, stream_index);
    let mut z = start;
    let mut steps = 0u32;
    loop {
        let rho = domain.distance_unchecked(z);
        if rho < shell {
            return (Some(classify(domain, z, r, shell)), steps);
        }
        if steps >= max_steps {
            return (None, steps);
        }
        let theta = rng.gen::<f64>() * TAU;
        let (s, c) = theta.sin_cos();
        z = Point { re: z.re + rho * c, im: z.im + rho * s };
        steps += 1;
    }
}

fn classify(domain: &DomainSpec, z: Point, r: f64, shell: f64) -> HitClass {
    let [first, second] = domain.two_nearest(z);
    // Feet computed on a circle of radius exactly R land at R +- 1 ulp;
    // compare with a relative pad so rounding dust cannot flip the class.
    let far_cut = r * (1.0 - 1e-12);
    let class_of = |idx: usize, foot: Point| -> HitClass {
        if domain.escape_index() == Some(idx) {
            HitClass::Escape
        } else if foot.abs() >= far_cut {
            HitClass::Far
        } else {
            HitClass::Near
        }
    };
    let primary = class_of(first.0, first.1);
    if second.0 != usize::MAX && second.2 <= 2.0 * shell {
        let secondary = class_of(second.0, second.1);
        if secondary != primary {
            return HitClass::Ambiguous;
        }
    }
    primary
}

/// Walk classes tallied as hits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum HitTarget {
    Far,
    Escape,
}

fn run_tally(
    domain: &DomainSpec,
    r: f64,
    config: &WosConfig,
    target: HitTarget,
) -> Result<TallyEstimate> {
    config.validate()?;
    let start = domain.basepoint();
    if !domain.contains(start) {
        return Err(Error::PointOutsideDomain(start.re, start.im));
    }
    let shell = config.eps * run_scale(domain, r);
    let n_batches = config.samples.div_ceil(config.batch);
    let counts = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let lo = b * config.batch;
            let hi = (lo + config.batch).min(config.samples);
            let mut acc = Counts::default();
            for i in lo..hi {
                let (class, _steps) =
                    walk(domain, start, r, shell, config.max_steps, config.seed, i);
                acc.samples += 1;
                match (class, target) {
                    (None, _) => acc.timeouts += 1,
                    (Some(HitClass::Ambiguous), _) => acc.ambiguous += 1,
                    (Some(HitClass::Far), HitTarget::Far) => acc.hits += 1,
                    (Some(HitClass::Escape), HitTarget::Escape) => acc.hits += 1,
                    _ => {}
                }
            }
            acc
        })
        .reduce(Counts::default, |mut a, b| {
            a.add(b);
            a
        });
    let tally = TallyEstimate::from_counts(counts, config.seed, domain.name(), config.eps);
    if tally.timeout_frac() > TIMEOUT_BUDGET {
        return Err(Error::TooManyTimeouts(tally.timeout_frac()));
    }
    Ok(tally)
}

/// Estimates `omega(R)`: the probability that a walk from the basepoint
/// terminates on a genuine boundary point of modulus `>= R`.
pub fn estimate_omega(domain: &DomainSpec, r: f64, config: &WosConfig) -> Result<TallyEstimate> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::invalid(format!("R = {r} must be positive")));
    }
    if domain.escape_index().is_some() {
        return Err(Error::invalid(
            "estimate_omega runs on the bare domain, without an escape circle".to_string(),
        ));
    }
    run_tally(domain, r, config, HitTarget::Far)
}

/// Estimates `omega_hat(R)`: attaches the escape circle `|z| = R` and counts
/// walks absorbed by it. The restriction to the basepoint's component of
/// `D ∩ {|z| < R}` is automatic, because walk jumps stay inside
/// boundary-free disks.
pub fn estimate_omega_hat(
    domain: &DomainSpec,
    r: f64,
    config: &WosConfig,
) -> Result<TallyEstimate> {
    let augmented = domain.clone().with_escape_circle(r)?;
    run_tally(&augmented, r, config, HitTarget::Escape)
}

/// Pools tallies from the same `(domain, eps)` context: counts add, the
/// estimate is recomputed. Order-independent.
pub fn merge(tallies: &[TallyEstimate]) -> Result<TallyEstimate> {
    let first = tallies
        .first()
        .ok_or_else(|| Error::invalid("merge of an empty tally sequence".to_string()))?;
    let mut counts = Counts::default();
    for t in tallies {
        if t.domain != first.domain {
            return Err(Error::ContextMismatch(format!(
                "domain '{}' vs '{}'",
                t.domain, first.domain
            )));
        }
        if t.eps != first.eps {
            return Err(Error::ContextMismatch(format!("eps {} vs {}", t.eps, first.eps)));
        }
        counts.add(Counts {
            hits: t.hits,
            samples: t.samples,
            ambiguous: t.ambiguous,
            timeouts: t.timeouts,
        });
    }
    Ok(TallyEstimate::from_counts(counts, first.seed, &first.domain, first.eps))
}
