//! Identical self-dynamics do not change the Kalman rank: for a coupling
//! matrix A, any input matrix B and any w, rank[B, AB, ...] equals
//! rank[B, (A + wI)B, ...].
//!
//! cargo run --example shift_identity

use ectrl::control::{kalman_shift_check, random_b};
use ectrl::dynamics::{assemble, make_unit_type, Assignment};
use ectrl::netgen::{generate, GraphSpec};
use ectrl::validation::shift_checks;
use ectrl::Rational;

fn main() -> ectrl::Result<()> {
    let t = generate(&GraphSpec::er(6, 2.0, 4).directed(true))?;
    let zero = make_unit_type(1, vec![Rational::zero()])?;
    let m = assemble(&t, &Assignment::explicit(vec![zero], vec![0; 6])?)?;
    let b = random_b(6, 2, 5);
    for w in [Rational::new(-3, 2), Rational::from_int(7), Rational::new(22, 7)] {
        println!("w = {w:>5}: ranks equal = {}", kalman_shift_check(&m, &b, &w, 6)?);
    }

    let report = shift_checks(200, 8, 0)?;
    println!("randomized suite: {} instances, {} failures", report.instances, report.failures.len());
    Ok(())
}
