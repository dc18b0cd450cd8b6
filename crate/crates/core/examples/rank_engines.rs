//! The three rank routes on one structured matrix: generic rank over a
//! prime field, exact rational elimination of a random instantiation, and
//! SVD rank of a real instantiation.
//!
//! cargo run --example rank_engines

use ectrl::control::{instantiate_rational, instantiate_real};
use ectrl::dynamics::{assemble, make_unit_type, Assignment};
use ectrl::netgen::{generate, GraphSpec};
use ectrl::rank::{generic_rank, rank_exact, rank_fp, DEFAULT_REL_TOL};
use ectrl::{seeds, Rational};
use rand::Rng;

fn main() -> ectrl::Result<()> {
    let t = generate(&GraphSpec::er(12, 2.0, 3).directed(true))?;
    let types = vec![
        make_unit_type(1, vec![Rational::zero()])?,
        make_unit_type(1, vec![Rational::from_int(1)])?,
    ];
    let m = assemble(&t, &Assignment::explicit(types, (0..12).map(|i| i % 2).collect())?)?;

    for lambda in [Rational::zero(), Rational::from_int(1), Rational::from_int(7)] {
        let g = generic_rank(&m, &lambda, 3, 1)?;

        let mut rng = seeds::rng(2);
        let mut exact = instantiate_rational(&m, || Rational::from_int(rng.gen_range(1..=1_000_000)));
        for (i, row) in exact.iter_mut().enumerate() {
            row[i] = &row[i] - &lambda;
        }
        let mut real = instantiate_real(&m, 3);
        for i in 0..m.dim() {
            real[(i, i)] -= lambda.to_f64();
        }
        println!(
            "lambda {lambda}: generic {} (failure bound {:.1e}), exact {}, numeric {}",
            g.rank,
            g.failure_bound,
            rank_exact(&exact)?,
            rank_fp(&real, DEFAULT_REL_TOL)?
        );
    }
    Ok(())
}
