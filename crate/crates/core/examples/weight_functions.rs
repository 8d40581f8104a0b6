//! Weight functions, their fixed-point restrictions and the GKM condition.

use hbar_schubert::flags::{enumerate_tuples, FlagShape, Permutation};
use hbar_schubert::weights::{class_tuple, gkm_check, weight_u, weight_w_restriction, Theory};

fn main() -> Result<(), hbar_schubert::Error> {
    let shape = FlagShape::new(vec![1, 2])?;
    let i = "{2}|{1,3}".parse()?;
    let id = Permutation::identity(shape.n());

    for theory in [Theory::H, Theory::K] {
        println!("{theory}: U = {}", weight_u(theory, &shape, &i)?);
        for at in enumerate_tuples(&shape) {
            let v = weight_w_restriction(theory, &shape, &i, &at, &id)?;
            println!("  W_{i} at {at}: {v}");
        }
        let t = class_tuple(theory, &shape, &i, &Permutation::longest(shape.n()))?;
        match gkm_check(&t) {
            Ok(()) => println!("  the s0-twisted class satisfies the GKM condition"),
            Err(v) => println!("  GKM violations: {}", v.len()),
        }
    }
    Ok(())
}
