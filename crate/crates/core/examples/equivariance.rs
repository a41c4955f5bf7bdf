//! Randomized checks of f(s⁻¹zs) = s⁻¹f(z)s.

use concomitant::concomitants::{check_equivariance, Group};
use concomitant::linalg::matrix_unit;
use concomitant::mattuple::MatTuple;
use concomitant::ncpoly::parse_expression;

fn main() -> concomitant::Result<()> {
    for expr in ["X1*X2", "tr(X1)*X2 - X2*X1^2", "tr(X1*X2)*ntr(X2)"] {
        let p = parse_expression(expr, 2)?;
        let r = check_equivariance(&p, 2, 3, Group::G, 100, 1e-8, 7)?;
        println!("{expr:24} {:?} max defect {:.2e}", r.verdict, r.max_defect);
    }

    // adding a fixed matrix unit breaks equivariance
    let shifted = |z: &MatTuple| z.get(1) + matrix_unit(z.n(), 1, 1);
    let r = check_equivariance(&shifted, 2, 2, Group::G, 20, 1e-8, 7)?;
    println!("Z1 + E11: {:?}, first witness from trial {}", r.verdict, r.witnesses[0].trial);

    // the adjoint commutes with unitary conjugation only
    let adjoint = |z: &MatTuple| z.get(1).adjoint();
    for group in [Group::K, Group::G] {
        let r = check_equivariance(&adjoint, 2, 3, group, 50, 1e-10, 7)?;
        println!("Z1* under {group:?}: {:?}", r.verdict);
    }
    Ok(())
}
