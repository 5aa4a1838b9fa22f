//! Arithmetic in GF(p^h): modulus choice, index encoding, inverses and powers.

use hlrc::gf::has_primitive_root_of_unity;
use hlrc::make_field;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = make_field(5, 2, None)?;
    println!("GF({}) modulus {:?}", f.q(), f.params().modulus);

    let g = f.primitive_element();
    println!("primitive element {} (index {})", f.display(g), g.index());

    let a = f.from_coeffs(&[2, 3])?;
    let b = f.from_index(17)?;
    println!("a = {}, b = {}", f.display(a), f.display(b));
    println!("a + b = {}", f.display(f.add(a, b)));
    println!("a * b = {}", f.display(f.mul(a, b)));
    println!("a / b = {}", f.display(f.div(a, b)?));
    println!("a^-1 * a = {}", f.display(f.mul(f.inv(a)?, a)));
    println!("a^(q-1) = {}", f.display(f.pow(a, f.q() as i64 - 1)?));

    for lambda in [3, 4, 6, 7] {
        println!("primitive root of unity of order {lambda}: {}", has_primitive_root_of_unity(&f, lambda)?);
    }
    Ok(())
}
