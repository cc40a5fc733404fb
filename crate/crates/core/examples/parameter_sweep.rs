//! A seeded sweep over a parameter grid, then over every straggler set.
//!
//! Run with `cargo run --release --example parameter_sweep`.

use sdmm::schemes::{SchemeConfig, SchemeKind};
use sdmm::simulator::{parameter_grid, straggler_cases, sweep, ExperimentConfig};

fn main() {
    let cases = parameter_grid(&SchemeKind::ALL, 1..=4, 1..=3, 1);
    let reports = sweep(&cases, 5, 42);
    let passed = reports.iter().filter(|r| r.passed()).count();
    println!("grid: {passed}/{} runs decoded and verified", reports.len());
    for r in reports.iter().step_by(5).take(6) {
        println!("  {} P={} X={} over {}: {:?} multiplications per worker",
            r.config.scheme.scheme, r.config.scheme.partitions, r.config.scheme.collusion, r.field,
            r.costs.worker_multiplications.first());
    }

    let base = ExperimentConfig::new(SchemeConfig::new(SchemeKind::FlexRedundant, 2, 2, 2));
    let cases = straggler_cases(&base);
    let reports = sweep(&cases, 1, 7);
    let direct = reports.iter().filter(|r| r.path.map(|p| p.name()) == Some("direct-support")).count();
    println!("{} straggler sets: all pass = {}, direct path in {direct}",
        reports.len(), reports.iter().all(|r| r.passed()));
}
