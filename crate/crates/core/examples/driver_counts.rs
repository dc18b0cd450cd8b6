//! Driver counts of one network by every method: the candidate-eigenvalue
//! formula, dense eigenvalue multiplicities, the symmetric shortcut, the
//! structural matching baseline, and (on a small network) the exact oracle.
//!
//! cargo run --example driver_counts

use ectrl::control::{
    instantiate_real, nd_ect_numeric, nd_ect_symmetric, nd_et, nd_oracle, nd_sct_pattern, EctOptions,
};
use ectrl::dynamics::{assemble, assign_types, make_unit_type};
use ectrl::netgen::{generate, GraphSpec};
use ectrl::Rational;

fn main() -> ectrl::Result<()> {
    let types = || -> ectrl::Result<_> {
        Ok(vec![
            make_unit_type(1, vec![Rational::zero()])?,
            make_unit_type(1, vec![Rational::from_int(2)])?,
        ])
    };
    let half = vec![Rational::new(1, 2), Rational::new(1, 2)];

    let t = generate(&GraphSpec::er(300, 3.0, 5))?;
    let m = assemble(&t, &assign_types(types()?, half.clone(), 300, 6)?)?;
    let phi = instantiate_real(&m, 7);
    let opts = EctOptions::default();
    let et = nd_et(&m, 8)?;
    println!("ER N=300 <k>=3, half of the nodes at 0 and half at 2");
    println!("  ET            {:>3}  (achieved at {:?})", et.n_d, et.achieving_eigenvalue);
    for c in &et.candidate_ranks {
        println!("    candidate {}: rank {:?}, bound {:?}", c.eigenvalue, c.rank, c.deficiency_bound);
    }
    println!("  ECT numeric   {:>3}", nd_ect_numeric(&phi, &opts)?.n_d);
    println!("  ECT symmetric {:>3}", nd_ect_symmetric(&phi, &opts)?.n_d);
    println!("  SCT matching  {:>3}", nd_sct_pattern(&m).n_d);

    let small = generate(&GraphSpec::er(8, 2.0, 9).directed(true))?;
    let m = assemble(&small, &assign_types(types()?, half, 8, 10)?)?;
    println!("\ndirected ER N=8: ET {}, oracle {}", nd_et(&m, 11)?.n_d, nd_oracle(&m, 12)?.n_d);
    Ok(())
}
