//! Parse trace polynomials, print their normal forms and evaluate them.

use concomitant::mattuple::{evaluate, random_tuple, Ensemble};
use concomitant::ncpoly::{format_expression, parse_expression};

fn main() -> concomitant::Result<()> {
    let p = parse_expression("(X1 + X2)^2 - tr(X1)*X2", 2)?;
    println!("normal form: {}", format_expression(&p));

    let z = random_tuple(2, 3, Ensemble::Ginibre, 42)?;
    let v = evaluate(&p, &z)?;
    println!("value at a random 3x3 pair has Frobenius norm {:.6}", v.norm());

    // Cayley-Hamilton for 2x2 matrices, written with traces
    let ch = parse_expression("X1^2 - tr(X1)*X1 + 0.5*(tr(X1)^2 - tr(X1^2))", 2)?;
    for n in [2, 3] {
        let z = random_tuple(2, n, Ensemble::Ginibre, 7)?;
        println!("Cayley-Hamilton residual at n = {n}: {:.3e}", evaluate(&ch, &z)?.norm());
    }

    match parse_expression("X1 + * X2", 2) {
        Err(e) => println!("malformed input: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
