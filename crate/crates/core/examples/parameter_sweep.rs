//! Rate and relative distance over the full rho grid of a preset.

use hlrc::job::{preset, sweep, sweep_table, SweepRanges};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "as-p3-maxdim".to_string());
    let config = preset(&name)?;
    let rows = sweep(&config, &SweepRanges::default())?;
    print!("{}", sweep_table(&rows));
    let valid = rows.iter().filter(|r| r.valid).count();
    println!("{valid} of {} tuples valid", rows.len());
    Ok(())
}
