//! Build the additive-cover code over GF(9), encode a message and check the
//! minimum distance exhaustively on a smaller-dimension variant.

use hlrc::families::artin_schreier_example;
use hlrc::verify::{min_distance_exhaustive, weight, DEFAULT_BUDGET};
use hlrc::{validate_spec, CodeSpec, Elem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let surface = artin_schreier_example(3)?;
    let code = validate_spec(&surface, CodeSpec::new(5, 4, 2, 1))?;
    println!("{}", code.param_report());

    let g = code.generator_matrix()?;
    let message: Vec<Elem> = (0..code.k() as u32).map(|i| Elem(i % 9)).collect();
    let word = g.encode(&message);
    println!("codeword weight {} of {}", weight(&word), code.n());

    let small = validate_spec(&surface, CodeSpec::new(5, 5, 2, 3))?;
    let g = small.generator_matrix()?;
    let d = min_distance_exhaustive(&g, DEFAULT_BUDGET)?;
    println!(
        "rho {}: k = {}, exhaustive d = {} over {} messages, bound {}",
        small.rho(),
        small.k(),
        d.measured_min_weight,
        d.searched,
        small.distance_bound().value
    );
    Ok(())
}
