//! Unit types, their placement over a network, and the mixed state matrix
//! they assemble into.
//!
//! cargo run --example unit_dynamics

use ectrl::dynamics::{assemble, assign_types, delta, make_unit_type};
use ectrl::netgen::directed_chain;
use ectrl::Rational;

fn main() -> ectrl::Result<()> {
    // A second-order unit with eigenvalues 1 and 2 has characteristic
    // polynomial s^2 - 3s + 2, i.e. companion coefficients (-2, 3).
    let slow = make_unit_type(2, vec![Rational::from_int(1), Rational::from_int(2)])?;
    let fast = make_unit_type(2, vec![Rational::from_int(-1), Rational::from_int(5)])?;
    for row in slow.companion_block() {
        println!("{}", row.iter().map(|v| format!("{:>3}", v.to_string())).collect::<Vec<_>>().join(" "));
    }

    let t = directed_chain(3);
    let a = assign_types(vec![slow, fast], vec![Rational::new(2, 3), Rational::new(1, 3)], 3, 42)?;
    println!("\nnode types {:?}, counts {:?}, heterogeneity {:.3}", a.node_type, a.counts(), delta(&a));

    let m = assemble(&t, &a)?;
    println!("{}x{} matrix, {} free couplings:", m.dim(), m.dim(), m.n_params());
    print!("{}", m.to_triplets());
    Ok(())
}
