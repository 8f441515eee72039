//! Replays the identity checks over randomized basis pairs and prints the
//! per-identity worst residuals.
//!
//! ```text
//! cargo run --release --example verify_harness -- [dim] [trials] [seed]
//! ```

use dualbasis::verify::{verify_identities, TrialConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dim = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);
    let trials = args.next().map(|s| s.parse()).transpose()?.unwrap_or(10_000);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(42);

    let cfg = TrialConfig::new(dim, trials, seed, 1e-8, 1e3)?;
    let started = std::time::Instant::now();
    let report = verify_identities(&cfg)?;
    println!("{dim}D, {trials} trials, seed {seed} ({:.2?})", started.elapsed());
    for (name, stats) in &report.identities {
        println!(
            "{:<40} {:>6} trials  max {:>10.3e}  at #{:<6} {}",
            name,
            stats.trials,
            stats.max_residual,
            stats.trial_index,
            if stats.pass { "ok" } else { "FAIL" }
        );
    }
    println!("overall: {}", if report.pass { "pass" } else { "FAIL" });
    Ok(())
}
