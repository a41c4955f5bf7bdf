//! Polynomial identities, the Wagner central polynomial and a central
//! partition of unity for 2x2 matrices.

use concomitant::identities::{is_central, is_identity, partition_of_unity, rv_normalize_report, wagner_scalar};
use concomitant::mattuple::{random_tuple, random_tuple_with, Ensemble, MatTuple};
use concomitant::ncpoly::{format_expression, parse_expression};
use concomitant::rng::seeded;

fn main() -> concomitant::Result<()> {
    let hall = parse_expression("(X1*X2 - X2*X1)^2*X3 - X3*(X1*X2 - X2*X1)^2", 3)?;
    for n in [2, 3] {
        println!("Hall identity holds for n = {n}: {}", is_identity(&hall, n, 20, 1, 1e-10)?);
    }

    let wagner = parse_expression("(X1*X2 - X2*X1)^2", 2)?;
    for n in [2, 3] {
        println!("[X1,X2]^2 central for n = {n}: {}", is_central(&wagner, n, 20, 1, 1e-10)?);
    }

    let z = random_tuple(2, 2, Ensemble::Ginibre, 3)?;
    println!("wagner scalar c = {}", wagner_scalar(&z, 1, 2)?);
    let r = rv_normalize_report(&z, 2)?;
    println!(
        "p = c*[u, v]^2 with u = {}, v = {}, c = -1/det = {:.4}; |p(z) - I| = {:.1e}",
        r.u, r.v, -r.det.inv(), r.residual
    );
    println!("p has {} terms: {}", r.poly.num_terms(), format_expression(&r.poly));

    let mut rng = seeded(4);
    let samples: Vec<MatTuple> = (0..100)
        .map(|_| random_tuple_with(2, 2, Ensemble::Disc, &mut rng))
        .collect::<concomitant::Result<_>>()?;
    let cover = partition_of_unity(&samples, 2, 0.5)?;
    println!("{} central polynomials cover 100 disc samples (min-max {:.3})", cover.polys.len(), cover.min_max);
    Ok(())
}
