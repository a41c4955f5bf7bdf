//! Invariant functions restricted to analytic discs obey the maximum
//! principle.

use concomitant::concomitants::max_modulus_disc_check;
use concomitant::mattuple::{random_tuple_with, Ensemble};
use concomitant::ncpoly::parse_expression;
use concomitant::rng::seeded;

fn main() -> concomitant::Result<()> {
    let mut rng = seeded(12);
    let center = random_tuple_with(2, 2, Ensemble::Disc, &mut rng)?;
    let direction = random_tuple_with(2, 2, Ensemble::Ginibre, &mut rng)?;
    for expr in ["tr(X1)", "tr(X1*X2)", "tr(X1)^2 - tr(X1^2)"] {
        let f = parse_expression(expr, 2)?;
        let r = max_modulus_disc_check(&f, &center, &direction, 0.5, 256, 256, 1e-9)?;
        println!("{expr:20} {:?}", r.verdict);
    }
    Ok(())
}
