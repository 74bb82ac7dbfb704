//! The seeded audit: every trial decomposes a random element, builds
//! commuting conjugates and a simultaneous handle, and solves the family
//! three times. Reports are byte-reproducible from their seed.

use vworkbench::constructions::criterion_audit;

fn main() {
    let report = criterion_audit(2024, 25).unwrap();
    println!(
        "seed {}, {} trials, N = {}, passed: {}",
        report.seed, report.trials, report.n_value, report.passed
    );

    // Timing is recorded but excluded from the canonical bytes, so two runs
    // with the same seed agree byte for byte.
    let again = criterion_audit(2024, 25).unwrap();
    assert_eq!(report.canonical_bytes(), again.canonical_bytes());
    println!("re-run reproduces canonically: ok");
    println!("shape recheck: {}", report.recheck_flags());

    if let Some(ms) = &report.trial_ms {
        let total: u64 = ms.iter().sum();
        println!("total trial time {total} ms, slowest {} ms", ms.iter().max().unwrap());
    }
}
