use std::sync::OnceLock;

use proptest::prelude::*;

use hlrc::families::artin_schreier_example;
use hlrc::recovery::{build_hierarchy, simulate, ErasurePattern, HierarchyMap, Outcome};
use hlrc::verify::{min_distance_exhaustive, min_weight_sampled, weight, DEFAULT_BUDGET};
use hlrc::{validate_spec, Code, CodeSpec, Elem, GeneratorMatrix};

struct Fixture {
    code: Code,
    g: GeneratorMatrix,
    map: HierarchyMap,
}

fn fixture(rho: (usize, usize, usize)) -> Fixture {
    let surface = artin_schreier_example(3).unwrap();
    let code = validate_spec(&surface, CodeSpec::new(5, rho.0, rho.1, rho.2)).unwrap();
    let g = code.generator_matrix().unwrap();
    let map = build_hierarchy(&code);
    Fixture { code, g, map }
}

fn maxdim() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| fixture((4, 2, 1)))
}

fn small() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| fixture((5, 2, 3)))
}

fn message(k: usize) -> impl Strategy<Value = Vec<Elem>> {
    prop::collection::vec((0u32..9).prop_map(Elem), k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoding_matches_evaluation(m in message(16)) {
        let f = maxdim();
        prop_assert_eq!(f.g.encode(&m), f.code.evaluate(&m).unwrap());
    }

    #[test]
    fn encoding_is_linear(a in message(16), b in message(16), c in 1u32..9) {
        let f = maxdim();
        let field = f.code.field();
        let c = Elem(c);
        let combo: Vec<Elem> = a.iter().zip(&b).map(|(&x, &y)| field.add(field.mul(c, x), y)).collect();
        let (ea, eb) = (f.g.encode(&a), f.g.encode(&b));
        let expected: Vec<Elem> = ea.iter().zip(&eb).map(|(&x, &y)| field.add(field.mul(c, x), y)).collect();
        prop_assert_eq!(f.g.encode(&combo), expected);
    }

    #[test]
    fn weight_is_scalar_invariant(m in message(16), c in 1u32..9) {
        let f = maxdim();
        let field = f.code.field();
        let scaled: Vec<Elem> = m.iter().map(|&x| field.mul(Elem(c), x)).collect();
        prop_assert_eq!(weight(&f.g.encode(&m)), weight(&f.g.encode(&scaled)));
    }

    #[test]
    fn recovery_never_returns_wrong_symbols(m in message(16), erased in prop::collection::vec(0usize..60, 0..40)) {
        let f = maxdim();
        let truth = f.g.encode(&m);
        let pattern = ErasurePattern::new(erased, f.code.n()).unwrap();
        let report = simulate(&f.code, &f.map, &pattern.apply(&truth), Some(&truth)).unwrap();
        prop_assert_eq!(report.incorrect, 0);
        prop_assert_eq!(report.entries.len(), pattern.len());
        for e in &report.entries {
            prop_assert_eq!(e.value.is_some(), e.outcome != Outcome::Failed);
        }
    }

    #[test]
    fn one_erasure_per_lower_group_is_local(m in message(16), picks in prop::collection::vec(any::<prop::sample::Index>(), 20)) {
        let f = maxdim();
        let truth = f.g.encode(&m);
        let positions: Vec<usize> = f.map.lower.iter().zip(&picks).map(|(g, ix)| g.start + ix.index(g.len())).collect();
        let pattern = ErasurePattern::new(positions, f.code.n()).unwrap();
        let report = simulate(&f.code, &f.map, &pattern.apply(&truth), Some(&truth)).unwrap();
        prop_assert_eq!(report.recovered_lower, pattern.len());
        prop_assert!(report.entries.iter().all(|e| e.cost == 2));
    }

    #[test]
    fn pattern_roundtrips_through_json(positions in prop::collection::vec(0usize..60, 0..20)) {
        let p = ErasurePattern::new(positions, 60).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: ErasurePattern = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn sampling_never_beats_exhaustive(seed in any::<u64>()) {
        let f = small();
        let exact = min_distance_exhaustive(&f.g, DEFAULT_BUDGET).unwrap().measured_min_weight;
        let sampled = min_weight_sampled(&f.g, 500, seed).unwrap().measured_min_weight;
        prop_assert!(sampled >= exact);
        prop_assert!(exact as i64 >= f.code.distance_bound().value);
    }
}
