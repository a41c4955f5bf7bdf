//! 1/det[Z1, Z2] is holomorphic on irreducible pairs but blows up along a
//! path into the reducible locus.

use concomitant::concomitants::nonextension_witness;

fn main() -> concomitant::Result<()> {
    println!("{:>12} {:>14} {:>14}", "t", "1/|det|", "1/(4t^2)");
    for (t, v) in nonextension_witness(11)? {
        println!("{t:12.6e} {v:14.6e} {:14.6e}", 1.0 / (4.0 * t * t));
    }
    Ok(())
}
