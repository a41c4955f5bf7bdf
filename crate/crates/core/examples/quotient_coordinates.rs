//! Trace generators of the invariant ring and the quotient map.

use concomitant::invariants::{
    coords22, coords_jacobian_rank, enumerate_trace_generators, expected_quotient_dimension,
    quotient_coords, JacobianMethod, RANK_TOL,
};
use concomitant::mattuple::{conjugate, haar_unitary, random_tuple, Ensemble};

fn main() -> concomitant::Result<()> {
    let g = enumerate_trace_generators(2, 2);
    println!("{} generators for pairs of 2x2 matrices:", g.len());
    for name in g.to_strings() {
        println!("  {name}");
    }

    let z = random_tuple(2, 2, Ensemble::Ginibre, 1)?;
    let w = conjugate(&z, &haar_unitary(2, 2))?;
    let (a, b) = (quotient_coords(&z, &g)?, quotient_coords(&w, &g)?);
    println!("coordinate drift under conjugation: {:.2e}", a.relative_distance(&b));
    let c = coords22(&z)?;
    println!("(tr Z1, tr Z2, det Z1, det Z2, tr Z1Z2) = {}", c.map(|x| format!("{x:.4}")).join(", "));

    for (d, n) in [(2, 2), (3, 2), (2, 3)] {
        let g = enumerate_trace_generators(d, n);
        let z = random_tuple(d, n, Ensemble::Ginibre, 3)?;
        let rank = coords_jacobian_rank(&z, &g, RANK_TOL, JacobianMethod::Analytic)?;
        println!(
            "(d, n) = ({d}, {n}): {} generators, Jacobian rank {rank}, (d-1)n^2+1 = {}",
            g.len(),
            expected_quotient_dimension(d, n)
        );
    }
    Ok(())
}
