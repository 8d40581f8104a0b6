//! Structure constants of CSM classes (ħ-deformed cohomology) and of
//! motivic Chern classes (ħ-deformed K theory).

use hbar_schubert::flags::FlagShape;
use hbar_schubert::structure::{expand_product, render_table, specialize_nonequivariant, Format, Specialization};
use hbar_schubert::weights::Theory;

fn main() -> Result<(), hbar_schubert::Error> {
    let shape = FlagShape::new(vec![2, 2])?;
    let i = "{2,4}|{1,3}".parse()?;

    for theory in [Theory::H, Theory::K] {
        let table = expand_product(theory, &shape, &i, &i, None, 1)?;
        let special = specialize_nonequivariant(&table, Specialization::non_equivariant(theory))?;
        println!("{theory}: (1)·(1) on T*Gr(2,4), non-equivariant");
        print!("{}", render_table(&special, Format::Text));
        println!();
    }

    // an equivariant expansion on the full flag variety of C^3
    let flag = FlagShape::new(vec![1, 1, 1])?;
    let (a, b) = ("{2}|{1}|{3}".parse()?, "{1}|{3}|{2}".parse()?);
    let table = expand_product(Theory::H, &flag, &a, &b, None, 1)?;
    println!("h: W_{a} · W_{b} on T*Fl(3)");
    print!("{}", render_table(&table, Format::Text));
    Ok(())
}
