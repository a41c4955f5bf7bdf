//! Recover the conjugator between two tuples in the same orbit, and compare
//! points of the associated bundle.

use concomitant::concomitants::{fiber_pair_equivalent, Group};
use concomitant::invariants::similarity_transport_report;
use concomitant::mattuple::{conjugate, evaluate, random_invertible, random_tuple, Ensemble, FiberPoint};
use concomitant::ncpoly::parse_expression;
use concomitant::rng::seeded;

fn main() -> concomitant::Result<()> {
    let z = random_tuple(2, 3, Ensemble::Ginibre, 5)?;
    let s = random_invertible(3, &mut seeded(6), 1e3);
    let w = conjugate(&z, &s)?;

    let t = similarity_transport_report(&z, &w, 1e-8)?;
    println!("solution space dimension {}, residual {:.2e}", t.null_dim, t.residual.unwrap_or(f64::NAN));
    let found = t.conjugator.expect("same orbit");
    // S is unique up to scale
    let ratio = s[(0, 0)] / found[(0, 0)];
    println!("|S - c*S_found| = {:.2e}", (&s - &found * ratio).norm());

    let other = random_tuple(2, 3, Ensemble::Ginibre, 8)?;
    let t = similarity_transport_report(&z, &other, 1e-8)?;
    println!("unrelated tuple: conjugator found = {}", t.conjugator.is_some());

    let phi = parse_expression("X1*X2 - tr(X2)*X1", 2)?;
    let a = FiberPoint::new(z.clone(), evaluate(&phi, &z)?)?;
    let b = FiberPoint::new(w.clone(), evaluate(&phi, &w)?)?;
    println!("bundle points equivalent under G: {}", fiber_pair_equivalent(&a, &b, Group::G, 1e-7)?);
    println!("bundle points equivalent under K: {}", fiber_pair_equivalent(&a, &b, Group::K, 1e-7)?);
    Ok(())
}
