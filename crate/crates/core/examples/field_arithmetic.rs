//! Arithmetic in prime and extension fields.
//!
//! Run with `cargo run --example field_arithmetic`.

use sdmm::{Field, Result};

fn main() -> Result<()> {
    let gf7 = Field::with_order(7)?;
    let a = gf7.from_int(3);
    let b = gf7.from_int(5);
    println!("GF(7): 3 + 5 = {}, 3 * 5 = {}, 3 / 5 = {}", &a + &b, &a * &b, a.try_div(&b)?);
    println!("GF(7): primitive element {}, 3^-1 = {}", gf7.primitive_element(), a.inv()?);

    // GF(9) = GF(3)[x] / (x^2 + 1); elements print as their coefficients c0,c1.
    let gf9 = Field::new(3, 2, Some(&[1, 0, 1]))?;
    println!("GF(9) spec: {gf9}");
    let x = gf9.from_coefficients(&[0, 1])?;
    println!("x^2 = {} (that is, -1)", x.pow(2)?);
    let g = gf9.primitive_element();
    println!("primitive element {g} has order {:?}", g.multiplicative_order());

    // A field spec string parses back into the same field.
    let again: Field = gf9.to_string().parse()?;
    assert_eq!(again, gf9);

    let zeta = Field::with_order(13)?.nth_root_of_unity(6)?;
    let powers: Vec<String> = (0..6).map(|i| zeta.pow(i).map(|p| p.to_string())).collect::<Result<_>>()?;
    println!("6th roots of unity in GF(13): {}", powers.join(" "));
    Ok(())
}
