// One-off measurement harness; run with:
//   cargo test -p chaoswarm-core --test dev_measure -- --ignored --nocapture
use chaoswarm_core::analysis::lyapunov_exponent;
use chaoswarm_core::sources::{MapSpec, SequenceSource, SourceKind, SourceSpec, ValueSource};
use std::time::Instant;

fn raw_range(spec: MapSpec, seeds: u64, iters: u64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for seed in 0..seeds {
        let wrapped = SourceSpec { id: "m".into(), kind: SourceKind::Map(spec) };
        let mut src = SequenceSource::new(&wrapped, seed).unwrap();
        for _ in 0..iters {
            src.next_value();
            let z = src.map_state().unwrap();
            lo = lo.min(z);
            hi = hi.max(z);
        }
    }
    (lo, hi)
}

#[test]
#[ignore]
fn measure_raw_ranges() {
    for (name, spec) in [
        ("weierstrass", MapSpec::weierstrass()),
        ("cubic", MapSpec::cubic()),
        ("bellows", MapSpec::bellows()),
    ] {
        let (lo, hi) = raw_range(spec, 100, 10_000);
        println!("{name}: ({lo:?}, {hi:?})");
    }
}

#[test]
#[ignore]
fn measure_step_costs() {
    for id in chaoswarm_core::sources::SOURCE_IDS {
        let spec = SourceSpec::by_id(id).unwrap();
        let mut src = SequenceSource::new(&spec, 1).unwrap();
        let n = if id == "weierstrass" { 300_000 } else { 3_000_000 };
        let t0 = Instant::now();
        let mut acc = 0.0;
        for _ in 0..n {
            acc += src.next_value();
        }
        let dt = t0.elapsed().as_secs_f64();
        println!("{id}: {:.1} ns/draw (acc {acc:.3})", dt / n as f64 * 1e9);
    }
}

#[test]
#[ignore]
fn measure_lyapunov() {
    for id in ["logistic", "chebyshev", "weierstrass", "tent", "cubic", "bellows"] {
        let spec = SourceSpec::by_id(id).unwrap();
        let t0 = Instant::now();
        let est = lyapunov_exponent(&spec, 10_000, 400, 2024).unwrap();
        println!("{id}: lambda={:.4} ({:.2}s)", est.lambda, t0.elapsed().as_secs_f64());
    }
}
