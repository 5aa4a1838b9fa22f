//! Projective point counts of the fibers of the Kummer example, against the
//! closed forms, plus the additive-cover census.

use hlrc::verify::{as_census, point_counts};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for q in [2, 5] {
        let results = point_counts(q)?;
        let r = &results[0];
        let agree = results.iter().filter(|r| r.all_match()).count();
        println!(
            "q = {q}: {} fibers, plane count {} (formula {}), |T_gamma| {} (formula {}), all match on {agree}",
            results.len(),
            r.counted,
            r.formula_value,
            r.t_gamma,
            r.t_gamma_formula
        );
    }
    for p in [3, 5] {
        let c = as_census(p)?;
        println!("p = {p}: |Gamma| = {} (formula {}), |T| = {} (formula {})", c.gamma_len, c.gamma_formula, c.t_len, c.t_formula);
    }
    Ok(())
}
