//! Erase symbols at increasing depth and watch recovery escalate from the
//! lower level to the middle level, then fail.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hlrc::families::artin_schreier_example;
use hlrc::recovery::{build_hierarchy, generate_pattern, run_trials, simulate, PatternKind, TrialConfig};
use hlrc::{validate_spec, CodeSpec, Elem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let surface = artin_schreier_example(3)?;
    let code = validate_spec(&surface, CodeSpec::new(5, 4, 2, 1))?;
    let g = code.generator_matrix()?;
    let map = build_hierarchy(&code);
    println!("{} lower groups of size {}, {} middle groups", map.lower.len(), map.lower[0].len(), map.middle.len());

    let message: Vec<Elem> = (0..code.k() as u32).map(|i| Elem((3 * i + 1) % 9)).collect();
    let truth = g.encode(&message);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for kind in [PatternKind::WorstLower, PatternKind::WorstMiddle, PatternKind::MiddleFailure] {
        let pattern = generate_pattern(&code, &map, &kind, &mut rng)?;
        let report = simulate(&code, &map, &pattern.apply(&truth), Some(&truth))?;
        println!(
            "{kind:?}: {} erasures, lower {}, middle {}, failed {}, incorrect {}",
            pattern.len(),
            report.recovered_lower,
            report.recovered_middle,
            report.failed,
            report.incorrect
        );
    }

    let cfg = TrialConfig { codewords: 100, patterns_per_codeword: 10, pattern: PatternKind::Random { count: 12 }, seed: 1 };
    let summary = run_trials(&code, &g, &map, &cfg)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
