//! In-process simulation of a master and `N` workers.
//!
//! A run encodes the inputs, lets every worker that is not a straggler multiply
//! its share pair (in parallel), collects responses according to a
//! [`CollectionPolicy`], decodes, and optionally checks the result against a
//! direct multiplication. Delays are ranks rather than clock times, so a run is
//! a pure function of its configuration, inputs and seed.
//!
//! Seeds: the encoding randomness uses `ChaCha8Rng::seed_from_u64(seed)` on
//! stream 0 and random inputs use the same seed on stream 1. A sweep gives
//! trial `t` of case `c` the seed `splitmix64(master ^ splitmix64((c << 32) | t))`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::FieldMatrix;
use crate::records::Record;
use crate::schemes::config::join_indices;
use crate::schemes::{DecodePath, ResponseSet, SchemeConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorkerBehavior {
    Responsive,
    /// Never responds.
    Straggler,
    /// Responds after every worker with a smaller rank. Responsive workers have
    /// rank 0; ties are broken by index.
    Delayed(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkerPool {
    behaviors: Vec<WorkerBehavior>,
}

impl WorkerPool {
    pub fn responsive(workers: usize) -> Self {
        WorkerPool {
            behaviors: vec![WorkerBehavior::Responsive; workers],
        }
    }

    /// Any number of stragglers is allowed, including more than the scheme
    /// tolerates.
    pub fn with_stragglers(workers: usize, stragglers: &[usize]) -> Result<Self> {
        let mut pool = Self::responsive(workers);
        for &w in stragglers {
            pool.set(w, WorkerBehavior::Straggler)?;
        }
        Ok(pool)
    }

    pub fn set(&mut self, worker: usize, behavior: WorkerBehavior) -> Result<()> {
        let n = self.behaviors.len();
        let slot = self
            .behaviors
            .get_mut(worker)
            .ok_or_else(|| Error::InvalidParams(format!("worker {worker} out of range for {n} workers")))?;
        *slot = behavior;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.behaviors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.behaviors.is_empty()
    }

    pub fn behavior(&self, worker: usize) -> Option<WorkerBehavior> {
        self.behaviors.get(worker).copied()
    }

    pub fn stragglers(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&w| self.behaviors[w] == WorkerBehavior::Straggler)
            .collect()
    }

    /// Responding workers with their ranks, in arrival order.
    pub fn arrivals(&self) -> Vec<(usize, u32)> {
        self.behaviors
            .iter()
            .enumerate()
            .filter_map(|(w, b)| match b {
                WorkerBehavior::Responsive => Some((w, 0)),
                WorkerBehavior::Delayed(r) => Some((w, *r)),
                WorkerBehavior::Straggler => None,
            })
            .sorted_by_key(|&(w, r)| (r, w))
            .collect()
    }
}

/// When the master stops waiting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollectionPolicy {
    /// Every worker that eventually responds.
    WaitForAll,
    /// The first `k` arrivals.
    FirstArrivals(usize),
    /// Workers with rank at most the deadline.
    Deadline(u32),
}

impl CollectionPolicy {
    pub fn collect(&self, pool: &WorkerPool) -> Vec<usize> {
        let arrivals = pool.arrivals();
        match *self {
            CollectionPolicy::WaitForAll => arrivals.into_iter().map(|(w, _)| w).collect(),
            CollectionPolicy::FirstArrivals(k) => arrivals.into_iter().take(k).map(|(w, _)| w).collect(),
            CollectionPolicy::Deadline(d) => arrivals
                .into_iter()
                .filter(|&(_, r)| r <= d)
                .map(|(w, _)| w)
                .collect(),
        }
    }
}

impl fmt::Display for CollectionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CollectionPolicy::WaitForAll => write!(f, "all"),
            CollectionPolicy::FirstArrivals(k) => write!(f, "first:{k}"),
            CollectionPolicy::Deadline(d) => write!(f, "deadline:{d}"),
        }
    }
}

impl FromStr for CollectionPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("collection policy `{s}`: expected all, first:K or deadline:R"));
        match s.trim().split_once(':') {
            None if s.trim() == "all" => Ok(CollectionPolicy::WaitForAll),
            Some(("first", k)) => k.parse().map(CollectionPolicy::FirstArrivals).map_err(|_| bad()),
            Some(("deadline", d)) => d.parse().map(CollectionPolicy::Deadline).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub scheme: SchemeConfig,
    pub policy: CollectionPolicy,
    /// Compare the decoded product with a direct multiplication.
    pub verify: bool,
}

impl ExperimentConfig {
    pub fn new(scheme: SchemeConfig) -> Self {
        ExperimentConfig {
            scheme,
            policy: CollectionPolicy::WaitForAll,
            verify: true,
        }
    }
}

/// Work and traffic, counted in field operations and field symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Costs {
    /// Multiplications performed by each worker (0 for stragglers).
    pub worker_multiplications: Vec<u64>,
    pub shares_uploaded: u64,
    pub symbols_uploaded: u64,
    pub symbols_downloaded: u64,
}

/// Wall-clock time per phase, in microseconds. Never part of comparisons.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Timings {
    pub encode_us: u128,
    pub compute_us: u128,
    pub decode_us: u128,
    pub verify_us: u128,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    /// Resolved field spec, or empty if the configuration never got that far.
    pub field: String,
    pub workers: usize,
    pub received: Vec<usize>,
    pub stragglers: Vec<usize>,
    pub path: Option<DecodePath>,
    /// Decoding produced a product.
    pub success: bool,
    /// Oracle comparison, when enabled and decoding succeeded.
    pub verified: Option<bool>,
    pub failure: Option<String>,
    pub costs: Costs,
    pub timings: Timings,
    pub product: Option<FieldMatrix>,
}

impl PartialEq for ExperimentReport {
    /// Equality ignores timings.
    fn eq(&self, other: &Self) -> bool {
        self.to_record(false) == other.to_record(false) && self.product == other.product
    }
}

impl ExperimentReport {
    /// A report for a configuration that could not be instantiated.
    pub fn config_failure(config: ExperimentConfig, error: &Error) -> Self {
        let workers = config.scheme.worker_count();
        ExperimentReport {
            field: config.scheme.resolve_field().map(|f| f.to_string()).unwrap_or_default(),
            config,
            workers,
            received: Vec::new(),
            stragglers: Vec::new(),
            path: None,
            success: false,
            verified: None,
            failure: Some(error.to_string()),
            costs: Costs::default(),
            timings: Timings::default(),
            product: None,
        }
    }

    /// Decoded and, if verification was on, matched the oracle.
    pub fn passed(&self) -> bool {
        self.success && self.verified != Some(false)
    }

    /// `Ok(())` when [`passed`](Self::passed), otherwise a `DecodeFailed` error.
    pub fn check(&self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::DecodeFailed(
                self.failure
                    .clone()
                    .unwrap_or_else(|| "decoded product does not match the oracle".into()),
            ))
        }
    }

    pub fn to_record(&self, include_timing: bool) -> Record {
        let s = &self.config.scheme;
        let mut r = Record::new("experiment");
        r.push("scheme", s.scheme)
            .push("field", &self.field)
            .push("P", s.partitions)
            .push("X", s.collusion)
            .push("S", s.stragglers)
            .push("t", s.rows)
            .push("s", s.inner)
            .push("r", s.cols)
            .push("seed", s.seed)
            .push(
                "zero_set",
                s.zero_set.as_deref().map_or("default".to_string(), join_indices),
            )
            .push("pad", s.pad)
            .push("policy", self.config.policy)
            .push("verify", self.config.verify)
            .push("workers", self.workers)
            .push("received", join_indices(&self.received))
            .push("stragglers", join_indices(&self.stragglers))
            .push("path", self.path.map_or("none", DecodePath::name))
            .push("success", self.success)
            .push(
                "verified",
                self.verified.map_or("skipped".to_string(), |v| v.to_string()),
            )
            .push("failure", self.failure.as_deref().unwrap_or(""))
            .push(
                "worker_multiplications",
                self.costs
                    .worker_multiplications
                    .iter()
                    .map(u64::to_string)
                    .join(","),
            )
            .push(
                "total_multiplications",
                self.costs.worker_multiplications.iter().sum::<u64>(),
            )
            .push("shares_uploaded", self.costs.shares_uploaded)
            .push("symbols_uploaded", self.costs.symbols_uploaded)
            .push("symbols_downloaded", self.costs.symbols_downloaded);
        if include_timing {
            r.push("time_encode_us", self.timings.encode_us)
                .push("time_compute_us", self.timings.compute_us)
                .push("time_decode_us", self.timings.decode_us)
                .push("time_verify_us", self.timings.verify_us);
        }
        r
    }
}

/// Runs one experiment with explicit inputs. Configuration and dimension
/// errors are returned as `Err`; decoding failures are reported in-band.
pub fn run_experiment(
    config: &ExperimentConfig,
    a: &FieldMatrix,
    b: &FieldMatrix,
    pool: &WorkerPool,
) -> Result<ExperimentReport> {
    let scheme = config.scheme.build()?;
    let params = scheme.params();
    let n = scheme.worker_count();
    if pool.len() != n {
        return Err(Error::InvalidParams(format!(
            "worker pool has {} workers, scheme needs N = {n}",
            pool.len()
        )));
    }
    if a.shape() != (params.rows, params.inner) || b.shape() != (params.inner, params.cols) {
        return Err(Error::DimensionMismatch(format!(
            "configured for A {}x{} and B {}x{}, got A {}x{} and B {}x{}",
            params.rows,
            params.inner,
            params.inner,
            params.cols,
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if a.field() != &params.field || b.field() != &params.field {
        return Err(Error::MixedFields {
            left: params.field.to_string(),
            right: a.field().to_string(),
        });
    }

    let mut timings = Timings::default();
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.scheme.seed);
    let shares = scheme.encode(a, b, &mut rng)?;
    timings.encode_us = clock.elapsed().as_micros();

    // Each responding worker multiplies its own pair; nothing is shared.
    let clock = Instant::now();
    let responding: Vec<usize> = pool.arrivals().into_iter().map(|(w, _)| w).collect();
    let computed: Vec<(usize, FieldMatrix)> = responding
        .par_iter()
        .map(|&w| Ok((w, shares.get(w).expect("pool size checked").compute()?)))
        .collect::<Result<_>>()?;
    timings.compute_us = clock.elapsed().as_micros();

    let collected = config.policy.collect(pool);
    let mut responses = ResponseSet::new(n);
    for w in &collected {
        let (_, h) = computed.iter().find(|(cw, _)| cw == w).expect("collected workers responded");
        responses.insert(*w, h.clone())?;
    }

    let share0 = shares.get(0).expect("at least one worker");
    let per_worker = (share0.a.rows() * share0.a.cols() * share0.b.cols()) as u64;
    let upload_per_worker = (share0.a.rows() * share0.a.cols() + share0.b.rows() * share0.b.cols()) as u64;
    let costs = Costs {
        worker_multiplications: (0..n)
            .map(|w| if responding.contains(&w) { per_worker } else { 0 })
            .collect(),
        shares_uploaded: n as u64,
        symbols_uploaded: n as u64 * upload_per_worker,
        symbols_downloaded: responses.len() as u64 * (params.rows * params.cols) as u64,
    };

    let clock = Instant::now();
    let decoded = scheme.decode(&responses);
    timings.decode_us = clock.elapsed().as_micros();

    let (success, path, product, failure) = match decoded {
        Ok(d) => (true, Some(d.path), Some(d.product), None),
        Err(e) => (false, None, None, Some(e.to_string())),
    };
    let clock = Instant::now();
    let verified = match (&product, config.verify) {
        (Some(p), true) => Some(*p == a.mul(b)?),
        _ => None,
    };
    timings.verify_us = clock.elapsed().as_micros();

    Ok(ExperimentReport {
        config: config.clone(),
        field: params.field.to_string(),
        workers: n,
        received: responses.received(),
        stragglers: pool.stragglers(),
        path,
        success,
        verified,
        failure,
        costs,
        timings,
        product,
    })
}

/// Uniform random inputs of the configured shape, drawn from stream 1 of the
/// configuration's seed.
pub fn random_inputs(config: &SchemeConfig) -> Result<(FieldMatrix, FieldMatrix)> {
    let field = config.resolve_field()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);
    let a = FieldMatrix::random(&field, config.rows, config.inner, &mut rng);
    let b = FieldMatrix::random(&field, config.inner, config.cols, &mut rng);
    Ok((a, b))
}

/// [`run_experiment`] on [`random_inputs`].
pub fn run_random_experiment(config: &ExperimentConfig, pool: &WorkerPool) -> Result<ExperimentReport> {
    let (a, b) = random_inputs(&config.scheme)?;
    run_experiment(config, &a, &b, pool)
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_seed(master: u64, case: usize, trial: usize) -> u64 {
    splitmix64(master ^ splitmix64(((case as u64) << 32) | trial as u64))
}

/// One configuration of a sweep with its worker pool (`None` means every
/// worker responds).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepCase {
    pub config: ExperimentConfig,
    pub pool: Option<WorkerPool>,
}

impl SweepCase {
    pub fn new(config: ExperimentConfig) -> Self {
        SweepCase { config, pool: None }
    }
}

/// Runs every case `trials` times on random inputs. Each trial overrides the
/// case's seed with [`trial_seed`]. Failures, including invalid
/// configurations, are recorded in the reports.
pub fn sweep(cases: &[SweepCase], trials: usize, seed: u64) -> Vec<ExperimentReport> {
    let mut out = Vec::with_capacity(cases.len() * trials);
    for (c, case) in cases.iter().enumerate() {
        for t in 0..trials {
            let mut config = case.config.clone();
            config.scheme.seed = trial_seed(seed, c, t);
            let pool = case
                .pool
                .clone()
                .unwrap_or_else(|| WorkerPool::responsive(config.scheme.worker_count()));
            out.push(
                run_random_experiment(&config, &pool)
                    .unwrap_or_else(|e| ExperimentReport::config_failure(config, &e)),
            );
        }
    }
    out
}

/// The listed scheme kinds over a `P x X` grid, with `A` of shape `P x 2P` and
/// `B` of shape `2P x P`. Only the redundant variant gets `S` stragglers, and
/// the binary scheme only appears where it is defined (even `P`, `X = 1`).
pub fn parameter_grid(
    kinds: &[crate::schemes::SchemeKind],
    partitions: impl IntoIterator<Item = usize> + Clone,
    collusion: impl IntoIterator<Item = usize> + Clone,
    stragglers: usize,
) -> Vec<SweepCase> {
    use crate::schemes::SchemeKind;
    let mut cases = Vec::new();
    for &kind in kinds {
        for p in partitions.clone() {
            for x in collusion.clone() {
                if kind == SchemeKind::Binary && (p % 2 != 0 || x != 1) {
                    continue;
                }
                let s = if kind == SchemeKind::FlexRedundant { stragglers } else { 0 };
                cases.push(SweepCase::new(ExperimentConfig::new(
                    SchemeConfig::new(kind, p, x, s).with_dims(p, 2 * p, p),
                )));
            }
        }
    }
    cases
}

/// One case per straggler set of size at most the configured `S`.
pub fn straggler_cases(config: &ExperimentConfig) -> Vec<SweepCase> {
    let n = config.scheme.worker_count();
    (0..=config.scheme.stragglers.min(n))
        .flat_map(|k| (0..n).combinations(k))
        .map(|set| SweepCase {
            config: config.clone(),
            pool: Some(WorkerPool::with_stragglers(n, &set).expect("indices in range")),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::SchemeKind;

    fn flex_redundant() -> ExperimentConfig {
        ExperimentConfig::new(SchemeConfig::new(SchemeKind::FlexRedundant, 1, 1, 1).with_seed(5))
    }

    #[test]
    fn arrival_order_and_policies() {
        let mut pool = WorkerPool::responsive(5);
        pool.set(0, WorkerBehavior::Delayed(2)).unwrap();
        pool.set(3, WorkerBehavior::Straggler).unwrap();
        pool.set(4, WorkerBehavior::Delayed(1)).unwrap();
        assert_eq!(pool.arrivals(), vec![(1, 0), (2, 0), (4, 1), (0, 2)]);
        assert_eq!(CollectionPolicy::WaitForAll.collect(&pool), vec![1, 2, 4, 0]);
        assert_eq!(CollectionPolicy::FirstArrivals(2).collect(&pool), vec![1, 2]);
        assert_eq!(CollectionPolicy::Deadline(1).collect(&pool), vec![1, 2, 4]);
        assert_eq!(pool.stragglers(), vec![3]);
        assert!(pool.set(5, WorkerBehavior::Straggler).is_err());
    }

    #[test]
    fn policy_strings() {
        for p in [
            CollectionPolicy::WaitForAll,
            CollectionPolicy::FirstArrivals(3),
            CollectionPolicy::Deadline(7),
        ] {
            assert_eq!(p.to_string().parse::<CollectionPolicy>().unwrap(), p);
        }
        assert!("first:x".parse::<CollectionPolicy>().is_err());
        assert!("sometimes".parse::<CollectionPolicy>().is_err());
    }

    #[test]
    fn flex_without_stragglers_uses_full_sum() {
        let config = ExperimentConfig::new(SchemeConfig::new(SchemeKind::Flex, 2, 1, 0).with_seed(3));
        let report = run_random_experiment(&config, &WorkerPool::responsive(4)).unwrap();
        assert!(report.passed());
        assert_eq!(report.path, Some(DecodePath::FullSum));
        assert_eq!(report.verified, Some(true));
        // 2x1 times 1x2 blocks: 4 multiplications per worker.
        assert_eq!(report.costs.worker_multiplications, vec![4; 4]);
        assert_eq!(report.costs.symbols_downloaded, 16);
        assert_eq!(report.costs.symbols_uploaded, 16);
    }

    #[test]
    fn straggler_outside_support_keeps_direct_path() {
        // P = X = S = 1: N = 4, default zero set {3}.
        let config = flex_redundant();
        let pool = WorkerPool::with_stragglers(4, &[3]).unwrap();
        let report = run_random_experiment(&config, &pool).unwrap();
        assert!(report.passed());
        assert_eq!(report.path, Some(DecodePath::DirectSupport));
        assert_eq!(report.stragglers, vec![3]);
        assert_eq!(report.costs.worker_multiplications[3], 0);
    }

    #[test]
    fn two_stragglers_are_reported() {
        let config = flex_redundant();
        for set in (0..4).combinations(2) {
            let pool = WorkerPool::with_stragglers(4, &set).unwrap();
            let report = run_random_experiment(&config, &pool).unwrap();
            // Two responses: below 2P+2X-1 = 3 and the support has 3 workers.
            assert!(!report.success);
            let msg = report.failure.clone().unwrap();
            assert!(msg.contains("received 2 < 2P+2X-1 = 3"), "{msg}");
            assert!(matches!(report.check(), Err(Error::DecodeFailed(_))));
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let config = flex_redundant();
        let pool = WorkerPool::with_stragglers(4, &[0]).unwrap();
        let a = run_random_experiment(&config, &pool).unwrap();
        let b = run_random_experiment(&config, &pool).unwrap();
        assert_eq!(a.to_record(false).to_string(), b.to_record(false).to_string());
        assert_eq!(a, b);
        assert!(a.to_record(true).get("time_encode_us").is_some());
        assert!(a.to_record(false).get("time_encode_us").is_none());
    }

    #[test]
    fn sweep_seeds_and_failures() {
        let cases = vec![
            SweepCase::new(flex_redundant().clone()),
            SweepCase::new(ExperimentConfig::new(SchemeConfig::new(SchemeKind::Binary, 3, 1, 0))),
        ];
        let reports = sweep(&cases, 3, 11);
        assert_eq!(reports.len(), 6);
        assert!(reports[..3].iter().all(ExperimentReport::passed));
        let seeds: Vec<u64> = reports[..3].iter().map(|r| r.config.scheme.seed).collect();
        assert_eq!(seeds, (0..3).map(|t| trial_seed(11, 0, t)).collect::<Vec<_>>());
        assert!(reports[3].failure.as_ref().unwrap().contains("P must be even"));
        assert_eq!(sweep(&cases, 3, 11), reports);
    }

    #[test]
    fn grid_skips_undefined_binary_cases() {
        let cases = parameter_grid(&SchemeKind::ALL, 1..=4, 1..=3, 1);
        // 3 kinds x 12 points plus binary at P = 2, 4 with X = 1.
        assert_eq!(cases.len(), 38);
        assert!(sweep(&cases, 1, 0).iter().all(ExperimentReport::passed));
    }

    #[test]
    fn straggler_enumeration() {
        let config = ExperimentConfig::new(SchemeConfig::new(SchemeKind::FlexRedundant, 2, 1, 2));
        let cases = straggler_cases(&config);
        // N = 7: 1 + 7 + 21 straggler sets.
        assert_eq!(cases.len(), 29);
        assert!(sweep(&cases, 1, 2).iter().all(ExperimentReport::passed));
    }

    #[test]
    fn mismatched_inputs_are_errors() {
        let config = flex_redundant();
        let f = config.scheme.resolve_field().unwrap();
        let a = FieldMatrix::zeros(&f, 2, 2);
        assert!(matches!(
            run_experiment(&config, &a, &a, &WorkerPool::responsive(4)),
            Err(Error::DimensionMismatch(_))
        ));
        let (a, b) = random_inputs(&config.scheme).unwrap();
        assert!(run_experiment(&config, &a, &b, &WorkerPool::responsive(3)).is_err());
    }

    #[test]
    fn splitmix_reference_values() {
        // First outputs of the reference generator seeded with 0.
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
        assert_eq!(splitmix64(0x9e37_79b9_7f4a_7c15), 0x6e78_9e6a_a1b9_65f4);
    }
}
