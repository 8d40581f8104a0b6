//! Theta functions, Fay's trisecant identity, the elliptic classes of T*P^1
//! and the removable limit of their non-equivariant structure constant.

use hbar_schubert::elliptic::{
    elliptic_class_tuple, fay_residual, removable_limit, theta, theta_prime_1, EllipticContext, LimitPath,
    MonomialArg, C64,
};
use hbar_schubert::flags::{enumerate_tuples, FlagShape, Permutation};
use hbar_schubert::scalars::VariableId;

fn main() -> Result<(), hbar_schubert::Error> {
    let base = EllipticContext::new(C64::new(0.1, 0.0), 40, 1e-9, 7)?;
    let ctx = base.sample_point(2, 2, 0);
    println!("theta'(1) = {:.12}", theta_prime_1(&ctx));
    let x = MonomialArg::ratio(VariableId::z(2), VariableId::z(1));
    println!("theta(z2/z1) = {:.12}", theta(&x, &ctx)?);

    let v = MonomialArg::var;
    let r = fay_residual(&v(VariableId::z(1)), &v(VariableId::z(2)), &v(VariableId::mu(1)), &v(VariableId::mu(2)), &ctx)?;
    println!("Fay residual: {:.2e}", r.norm());

    let shape = FlagShape::new(vec![1, 1])?;
    for i in enumerate_tuples(&shape) {
        let t = elliptic_class_tuple(&shape, &i, &Permutation::identity(2), &ctx)?;
        println!("E_{i}: ({:.6}, {:.6})", t.values[0], t.values[1]);
    }

    let limit = removable_limit(&ctx, &LimitPath::default())?;
    println!("non-equivariant limit: {:.10} (spread {:.1e})", limit.value, limit.spread);
    Ok(())
}
