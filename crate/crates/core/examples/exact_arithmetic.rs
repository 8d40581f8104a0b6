//! Laurent polynomials and rational functions with factored denominators.

use hbar_schubert::scalars::{divide_exact, DenomFactor, Division, FactoredRational, MultiPoly, VariableId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a: MultiPoly = "z2 - z1 + h".parse()?;
    let b: MultiPoly = "z2 - z1".parse()?;
    println!("({a})·({b}) = {}", &a * &b);

    let f = DenomFactor::normalize(&b).factor.expect("non-monomial");
    match divide_exact(&(&a * &b), &f) {
        Division::Quotient(q) => println!("exact quotient: {q}"),
        Division::NotDivisible => println!("not divisible"),
    }

    let x = FactoredRational::new(MultiPoly::hbar(), [b.clone()])?;
    let y = FactoredRational::new(MultiPoly::hbar(), [-&b])?;
    println!("{x} + {y} = {}", x.add(&y));

    let at = x.substitute(&|v| (v == VariableId::z(2)).then(|| "z1 + 2".parse().unwrap()))?;
    println!("z2 -> z1 + 2: {at}");
    Ok(())
}
