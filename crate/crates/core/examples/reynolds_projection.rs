//! Averaging over the unitary group projects maps onto unitary concomitants.

use concomitant::concomitants::{reynolds_average, reynolds_estimate};
use concomitant::linalg::{c64, identity};
use concomitant::mattuple::{ginibre_matrix, random_tuple, Ensemble, MatTuple};
use concomitant::rng::seeded;

fn main() -> concomitant::Result<()> {
    let z = random_tuple(2, 3, Ensemble::Ginibre, 1)?;

    let mut c = ginibre_matrix(3, &mut seeded(2));
    c /= c64(c.norm(), 0.0);
    let constant = c.clone();
    let f = move |_: &MatTuple| constant.clone();
    for samples in [64, 1024, 4096] {
        let avg = reynolds_average(&f, &z, samples, 3)?;
        let limit = identity(3) * (c.trace() / c64(3.0, 0.0));
        println!("N = {samples:5}: distance to (tr C/n) I = {:.4}", (avg - limit).norm());
    }

    let transpose = |z: &MatTuple| z.get(1).transpose();
    let adjoint = |z: &MatTuple| z.get(1).adjoint();
    println!("Z1^T spread: {:.3}", reynolds_estimate(&transpose, &z, 256, 4)?.spread);
    println!("Z1^* spread: {:.3e}", reynolds_estimate(&adjoint, &z, 256, 4)?.spread);
    Ok(())
}
