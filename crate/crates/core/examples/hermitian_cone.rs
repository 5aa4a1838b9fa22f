//! The cone over the Hermitian curve at q = 2: small enough to enumerate every
//! codeword.

use hlrc::families::hermitian_cone;
use hlrc::verify::{check_bound, min_distance_exhaustive, DEFAULT_BUDGET};
use hlrc::{validate_spec, CodeSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let surface = hermitian_cone(2)?;
    let code = validate_spec(&surface, CodeSpec::new(4, 2, 2, 1))?;
    println!("{}", code.param_report());
    let g = code.generator_matrix()?;
    let result = min_distance_exhaustive(&g, DEFAULT_BUDGET)?;
    let audit = check_bound(&result, &code.distance_bound())?;
    println!("{}", serde_json::to_string_pretty(&audit)?);
    Ok(())
}
