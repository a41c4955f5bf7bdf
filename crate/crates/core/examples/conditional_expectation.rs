//! The conditional expectation onto the center replaces each word by its
//! normalized trace.

use concomitant::concomitants::conditional_expectation;
use concomitant::mattuple::{evaluate, random_tuple, Ensemble};
use concomitant::ncpoly::{format_expression, parse_expression};

fn main() -> concomitant::Result<()> {
    let p = parse_expression("X1*X2 + tr(X1)*X2^2 - 3", 2)?;
    let t = conditional_expectation(&p);
    println!("T({}) = {}", format_expression(&p), format_expression(&t));
    println!("idempotent: {}", conditional_expectation(&t) == t);

    let z = random_tuple(2, 4, Ensemble::Ginibre, 9)?;
    let v = evaluate(&t, &z)?;
    let off_diagonal = v.norm() - (v.trace() / 2.0).norm();
    println!("T(p)(z) is scalar: off-scalar mass {off_diagonal:.2e}");
    Ok(())
}
