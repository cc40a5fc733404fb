//! The redundant flexible-field scheme tolerates S stragglers. With all of the
//! P + 2X support workers present it decodes directly; otherwise it
//! interpolates from any 2P + 2X - 1 responses.
//!
//! Run with `cargo run --example straggler_decoding`.

use sdmm::schemes::{SchemeConfig, SchemeKind};
use sdmm::simulator::{run_random_experiment, ExperimentConfig, WorkerBehavior, WorkerPool};
use sdmm::Result;

fn main() -> Result<()> {
    let config = ExperimentConfig::new(SchemeConfig::new(SchemeKind::FlexRedundant, 2, 1, 2).with_dims(3, 4, 3).with_seed(8));
    let n = config.scheme.worker_count();
    println!("N = {n} workers over GF({})", config.scheme.resolve_field()?.order());

    for stragglers in [vec![], vec![6], vec![0], vec![1, 5], vec![0, 1, 2]] {
        let pool = WorkerPool::with_stragglers(n, &stragglers)?;
        let report = run_random_experiment(&config, &pool)?;
        match &report.path {
            Some(path) => println!("stragglers {stragglers:?}: {path}, verified {:?}", report.verified),
            None => println!("stragglers {stragglers:?}: failed, {}", report.failure.as_deref().unwrap_or("")),
        }
    }

    // Delayed workers: stop listening after the first five arrivals.
    let mut pool = WorkerPool::responsive(n);
    pool.set(2, WorkerBehavior::Delayed(3))?;
    pool.set(3, WorkerBehavior::Delayed(1))?;
    let mut early = config.clone();
    early.policy = "first:5".parse()?;
    let report = run_random_experiment(&early, &pool)?;
    println!("first five arrivals {:?}: {:?}", report.received, report.path);
    Ok(())
}
