//! Gram matrices of the stable bases against their twisted duals.

use hbar_schubert::elliptic::EllipticContext;
use hbar_schubert::flags::FlagShape;
use hbar_schubert::pairing::{elliptic_orthogonality_check, orthogonality_check};
use hbar_schubert::weights::Theory;

fn main() -> Result<(), hbar_schubert::Error> {
    let shape = FlagShape::new(vec![2, 1, 1])?;
    for theory in [Theory::H, Theory::K] {
        let gram = orthogonality_check(theory, &shape)?;
        let nonzero = gram.iter().flatten().filter(|v| !v.is_zero()).count();
        println!("{theory} on ({shape}): {0}×{0} Gram matrix, {nonzero} entries off the identity", gram.len());
    }
    let gr = FlagShape::grassmannian(2, 5)?;
    let gram = orthogonality_check(Theory::Fund, &gr)?;
    println!("fund on Gr(2,5): {} entries off the identity", gram.iter().flatten().filter(|v| !v.is_zero()).count());

    let ctx = EllipticContext::default().sample_point(shape.n(), shape.len(), 0);
    let gram = elliptic_orthogonality_check(&shape, &ctx)?;
    let worst = gram.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    println!("ell on ({shape}) at q = 0.1: max deviation {worst:.2e}");
    Ok(())
}
