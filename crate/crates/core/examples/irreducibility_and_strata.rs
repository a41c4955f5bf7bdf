//! Irreducibility, invariant subspaces and dimensions of the strata X_k.

use concomitant::mattuple::{random_tuple, Ensemble};
use concomitant::structure::{
    find_invariant_subspace, invariance_defect, is_irreducible, word_span_dimension,
    xk_dimension_estimate, xk_dimension_formula,
};

fn main() -> concomitant::Result<()> {
    let generic = random_tuple(2, 3, Ensemble::Ginibre, 1)?;
    let reducible = random_tuple(2, 3, Ensemble::Reducible(1), 1)?;
    for (name, z) in [("ginibre", &generic), ("reducible(1)", &reducible)] {
        println!(
            "{name:13} irreducible {} (word span {})",
            is_irreducible(z),
            word_span_dimension(z)
        );
    }
    if let Some(q) = find_invariant_subspace(&reducible, 1e-8) {
        println!("invariant subspace of dimension {}, defect {:.1e}", q.ncols(), invariance_defect(&reducible, &q));
    }

    for (d, n, k) in [(2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, 1)] {
        let est = xk_dimension_estimate(d, n, k, 11, 1e-7)?;
        println!("dim X_{k}({d}, {n}) = {est} (formula {})", xk_dimension_formula(d, n, k));
    }
    Ok(())
}
