//! Elliptic structure constants of T*P^{n-1}: inner products against the
//! closed form.

use hbar_schubert::elliptic::EllipticContext;
use hbar_schubert::structure::{elliptic_lr_coefficient, elliptic_pn_closed_form, pn_shape, pn_tuple};
use hbar_schubert::Error;

fn main() -> Result<(), Error> {
    let n = 3;
    let shape = pn_shape(n)?;
    let ctx = EllipticContext::default().sample_point(n, 2, 0);
    println!("{:>3} {:>3} {:>3}  {:>34}  {:>34}", "k", "l", "m", "inner product", "closed form");
    for k in 1..=n {
        for l in k..=n {
            for m in 1..=n {
                let v = elliptic_lr_coefficient(&shape, &pn_tuple(n, k)?, &pn_tuple(n, l)?, &pn_tuple(n, m)?, &ctx)?;
                let closed = match elliptic_pn_closed_form(n, k, l, m, &ctx) {
                    Ok(c) => format!("{c:.8}"),
                    Err(Error::Unsupported(_)) => "-".into(),
                    Err(e) => return Err(e),
                };
                println!("{k:>3} {l:>3} {m:>3}  {:>34}  {closed:>34}", format!("{v:.8}"));
            }
        }
    }
    Ok(())
}
