//! The Kummer code over GF(25) with rho = (10, 6, 23) has k = 2 and the
//! codeword of 1 - z meets the distance bound exactly.

use hlrc::families::kummer_example;
use hlrc::verify::weight;
use hlrc::{validate_spec, CodeSpec, Eta};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let surface = kummer_example(5)?;
    let spec = CodeSpec { eta: Eta::AUTO, ..CodeSpec::new(0, 10, 6, 23) };
    let code = validate_spec(&surface, spec)?;
    println!("{}", code.param_report());

    let field = code.field();
    // basis is {1, z}; 1 - z vanishes exactly on the fiber z = 1
    let message = [field.one(), field.neg(field.one())];
    let word = code.generator_matrix()?.encode(&message);
    println!("weight of 1 - z: {} (bound {})", weight(&word), code.distance_bound().value);
    Ok(())
}
