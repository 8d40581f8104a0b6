//! Ordinary and torus-equivariant Schubert calculus on Gr(3,6).
//!
//! Run with `cargo run --release --example schubert_calculus`.

use hbar_schubert::flags::{partition_to_subset, FlagShape, IndexTuple, Partition};
use hbar_schubert::structure::{expand_product, render_table, specialize_nonequivariant, Format, Specialization};
use hbar_schubert::weights::Theory;

fn main() -> Result<(), hbar_schubert::Error> {
    let (m, n) = (3, 6);
    let shape = FlagShape::grassmannian(m, n)?;
    let p: Partition = "(2,1)".parse()?;
    let i = IndexTuple::from_subset(&partition_to_subset(&p, m, n)?, n)?;
    println!("(2,1) is the fixed point {i}");

    let table = expand_product(Theory::Fund, &shape, &i, &i, None, 1)?;
    println!("\nequivariant (2,1)·(2,1):");
    print!("{}", render_table(&table, Format::Text));

    let ordinary = specialize_nonequivariant(&table, Specialization::Z0)?;
    println!("\nat z = 0:");
    print!("{}", render_table(&ordinary, Format::Text));
    Ok(())
}
