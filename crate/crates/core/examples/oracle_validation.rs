//! Cross-checks the fast driver-count routes against the exact Kalman
//! oracle on small random systems.
//!
//! cargo run --example oracle_validation -- [instances] [seed]

use ectrl::validation::oracle_agreement;

fn main() -> ectrl::Result<()> {
    let mut args = std::env::args().skip(1);
    let instances = args.next().and_then(|a| a.parse().ok()).unwrap_or(200);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(0);
    let report = oracle_agreement(instances, 8, seed)?;
    println!(
        "{}/{} instances agree ({:.1}%), {} first order, {} second order",
        report.agreed,
        report.instances,
        100.0 * report.fraction(),
        report.by_order[0],
        report.by_order[1]
    );
    for d in &report.disagreements {
        println!(
            "  instance {} (seed {:#x}, dim {}): oracle {}, et {}, ect {}",
            d.instance, d.seed, d.dim, d.oracle, d.et, d.ect_numeric
        );
    }
    Ok(())
}
