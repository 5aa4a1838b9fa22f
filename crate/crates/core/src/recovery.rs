//! Two-level erasure recovery.
//!
//! A codeword restricted to the fiber `z = gamma` is `sum_j g_j(x) y^j` with
//! `deg g_j <= eta - rho1` and `j <= deg - rho2`. Each lower group (the points
//! over one `(x, gamma)`) therefore carries a polynomial in `y` of degree at
//! most `deg - rho2`, and each middle group (one fiber) is recovered by first
//! interpolating in `y` on intact buckets and then in `x` across buckets.

use std::ops::Range;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{Code, GeneratorMatrix};
use crate::gf::Elem;
use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecoveryError {
    #[error("position {0} is out of range")]
    OutOfRange(usize),
    #[error("position {0} is not erased")]
    NotErased(usize),
    #[error("word has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("lower group of position {position} has {survivors} survivors, needs {needed}")]
    InsufficientSurvivors { position: usize, survivors: usize, needed: usize },
    #[error("middle group of position {position} has {usable} usable buckets, needs {needed}")]
    InsufficientBuckets { position: usize, usable: usize, needed: usize },
}

pub type Result<T, E = RecoveryError> = std::result::Result<T, E>;

/// Lower and middle repair groups of every position of `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyMap {
    /// Position ranges sharing `(x, z)`; these are also the buckets `W_a`.
    pub lower: Vec<Range<usize>>,
    /// Position ranges sharing `z`.
    pub middle: Vec<Range<usize>>,
    /// For each middle group, the range of its lower-group indices.
    pub buckets: Vec<Range<usize>>,
    lower_of: Vec<u32>,
    middle_of: Vec<u32>,
}

impl HierarchyMap {
    pub fn lower_group(&self, position: usize) -> Range<usize> {
        self.lower[self.lower_of[position] as usize].clone()
    }

    pub fn middle_group(&self, position: usize) -> Range<usize> {
        self.middle[self.middle_of[position] as usize].clone()
    }

    pub fn lower_index(&self, position: usize) -> usize {
        self.lower_of[position] as usize
    }

    pub fn middle_index(&self, position: usize) -> usize {
        self.middle_of[position] as usize
    }

    pub fn n(&self) -> usize {
        self.lower_of.len()
    }
}

pub fn build_hierarchy(code: &Code) -> HierarchyMap {
    let evalset = code.evaluation_set();
    let n = evalset.len();
    let mut lower_of = vec![0u32; n];
    let mut middle_of = vec![0u32; n];
    for (g, r) in evalset.lower.iter().enumerate() {
        lower_of[r.clone()].iter_mut().for_each(|v| *v = g as u32);
    }
    let mut buckets = Vec::with_capacity(evalset.slices.len());
    for (m, r) in evalset.slices.iter().enumerate() {
        middle_of[r.clone()].iter_mut().for_each(|v| *v = m as u32);
        if r.is_empty() {
            buckets.push(0..0);
        } else {
            buckets.push(lower_of[r.start] as usize..lower_of[r.end - 1] as usize + 1);
        }
    }
    HierarchyMap { lower: evalset.lower.clone(), middle: evalset.slices.clone(), buckets, lower_of, middle_of }
}

/// A recovered symbol and the positions read to obtain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovered {
    pub value: Elem,
    pub accessed: Vec<usize>,
}

fn check_erased(word: &[Option<Elem>], map: &HierarchyMap, position: usize) -> Result<()> {
    if word.len() != map.n() {
        return Err(RecoveryError::LengthMismatch { got: word.len(), expected: map.n() });
    }
    if position >= word.len() {
        return Err(RecoveryError::OutOfRange(position));
    }
    if word[position].is_some() {
        return Err(RecoveryError::NotErased(position));
    }
    Ok(())
}

fn survivors(word: &[Option<Elem>], range: Range<usize>) -> impl Iterator<Item = usize> + '_ {
    range.filter(|&i| word[i].is_some())
}

/// Interpolates in `y` over the first `deg - rho2 + 1` survivors of the
/// position's lower group.
pub fn recover_lower(code: &Code, map: &HierarchyMap, word: &[Option<Elem>], position: usize) -> Result<Recovered> {
    check_erased(word, map, position)?;
    let field = code.field();
    let points = code.points();
    let needed = code.cover_degree() - code.rho().rho2 + 1;
    let group = map.lower_group(position);
    let accessed: Vec<usize> = survivors(word, group.clone()).take(needed).collect();
    if accessed.len() < needed {
        let survivors = survivors(word, group).count();
        return Err(RecoveryError::InsufficientSurvivors { position, survivors, needed });
    }
    let ys: Vec<Elem> = accessed.iter().map(|&i| points[i].y).collect();
    let vals: Vec<Elem> = accessed.iter().map(|&i| word[i].unwrap()).collect();
    let value = linalg::lagrange_eval(field, &ys, &vals, points[position].y);
    Ok(Recovered { value, accessed })
}

/// Two-layer interpolation over the position's fiber: `y` within each usable
/// bucket, then `x` across `eta - rho1 + 1` buckets.
pub fn recover_middle(code: &Code, map: &HierarchyMap, word: &[Option<Elem>], position: usize) -> Result<Recovered> {
    check_erased(word, map, position)?;
    let field = code.field();
    let points = code.points();
    let rho = code.rho();
    let per_bucket = code.cover_degree() - rho.rho2 + 1;
    let needed = code.eta() - rho.rho1 + 1;
    let buckets = map.buckets[map.middle_index(position)].clone();
    let usable: Vec<Vec<usize>> = buckets
        .map(|b| survivors(word, map.lower[b].clone()).take(per_bucket).collect::<Vec<_>>())
        .filter(|s| s.len() == per_bucket)
        .take(needed)
        .collect();
    if usable.len() < needed {
        return Err(RecoveryError::InsufficientBuckets { position, usable: usable.len(), needed });
    }
    // coeffs[b][j] = g_j(a_b)
    let xs: Vec<Elem> = usable.iter().map(|s| points[s[0]].x).collect();
    let coeffs: Vec<Vec<Elem>> = usable
        .iter()
        .map(|s| {
            let ys: Vec<Elem> = s.iter().map(|&i| points[i].y).collect();
            let vals: Vec<Elem> = s.iter().map(|&i| word[i].unwrap()).collect();
            linalg::interpolate(field, &ys, &vals)
        })
        .collect();
    let target = points[position];
    let g_at_x: Vec<Elem> = (0..per_bucket)
        .map(|j| {
            let vals: Vec<Elem> = coeffs.iter().map(|c| c[j]).collect();
            linalg::lagrange_eval(field, &xs, &vals, target.x)
        })
        .collect();
    let value = linalg::horner(field, &g_at_x, target.y);
    Ok(Recovered { value, accessed: usable.concat() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    RecoveredLower,
    RecoveredMiddle,
    Failed,
}

/// Set of erased positions, serialized as a sorted JSON list of indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ErasurePattern(Vec<usize>);

impl ErasurePattern {
    /// Sorts and deduplicates; every index must be below `n`.
    pub fn new(mut positions: Vec<usize>, n: usize) -> Result<Self> {
        positions.sort_unstable();
        positions.dedup();
        if let Some(&bad) = positions.iter().find(|&&i| i >= n) {
            return Err(RecoveryError::OutOfRange(bad));
        }
        Ok(ErasurePattern(positions))
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, codeword: &[Elem]) -> Vec<Option<Elem>> {
        let mut word: Vec<Option<Elem>> = codeword.iter().copied().map(Some).collect();
        for &i in &self.0 {
            word[i] = None;
        }
        word
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoveryEntry {
    pub position: usize,
    pub outcome: Outcome,
    pub value: Option<Elem>,
    /// Number of symbols read for this position.
    pub cost: usize,
    /// Agreement with the supplied ground truth.
    pub correct: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    pub entries: Vec<RecoveryEntry>,
    pub recovered_lower: usize,
    pub recovered_middle: usize,
    pub failed: usize,
    pub incorrect: usize,
}

impl RecoveryReport {
    pub fn fully_recovered(&self) -> bool {
        self.failed == 0
    }

    fn tally(entries: Vec<RecoveryEntry>) -> Self {
        let count = |o| entries.iter().filter(|e| e.outcome == o).count();
        RecoveryReport {
            recovered_lower: count(Outcome::RecoveredLower),
            recovered_middle: count(Outcome::RecoveredMiddle),
            failed: count(Outcome::Failed),
            incorrect: entries.iter().filter(|e| e.correct == Some(false)).count(),
            entries,
        }
    }
}

/// Lower recovery for every erasure, escalating to the middle level on
/// failure. Both levels only read symbols that were not erased, so the order
/// in which positions are handled does not matter. Middle groups run in
/// parallel.
pub fn simulate(
    code: &Code,
    map: &HierarchyMap,
    word: &[Option<Elem>],
    truth: Option<&[Elem]>,
) -> Result<RecoveryReport> {
    if word.len() != map.n() {
        return Err(RecoveryError::LengthMismatch { got: word.len(), expected: map.n() });
    }
    let entries: Vec<RecoveryEntry> = map
        .middle
        .par_iter()
        .flat_map_iter(|group| {
            group.clone().filter(|&i| word[i].is_none()).map(|i| {
                let (outcome, rec) = match recover_lower(code, map, word, i) {
                    Ok(r) => (Outcome::RecoveredLower, Some(r)),
                    Err(_) => match recover_middle(code, map, word, i) {
                        Ok(r) => (Outcome::RecoveredMiddle, Some(r)),
                        Err(_) => (Outcome::Failed, None),
                    },
                };
                let value = rec.as_ref().map(|r| r.value);
                RecoveryEntry {
                    position: i,
                    outcome,
                    value,
                    cost: rec.map_or(0, |r| r.accessed.len()),
                    correct: truth.and_then(|t| value.map(|v| v == t[i])),
                }
            })
        })
        .collect();
    Ok(RecoveryReport::tally(entries))
}

/// Erasure pattern generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternKind {
    /// `count` distinct positions, uniformly at random.
    Random { count: usize },
    /// A random number (at most `rho2 - 1`) of erasures in every lower group.
    WithinLower,
    /// Exactly `rho2 - 1` erasures in every lower group.
    WorstLower,
    /// Per middle group, `rho1 - 1` buckets with `rho2` erasures and one more
    /// with `rho2 - 1`: `rho1 * rho2 - 1` erasures that are still recoverable.
    WorstMiddle,
    /// Per middle group, `rho2` erasures in each of `rho1` buckets.
    MiddleFailure,
    /// Every position of one random middle group.
    WholeMiddle,
    Explicit(Vec<usize>),
}

pub fn generate_pattern<R: Rng>(code: &Code, map: &HierarchyMap, kind: &PatternKind, rng: &mut R) -> Result<ErasurePattern> {
    let rho = code.rho();
    let n = map.n();
    let pick = |rng: &mut R, range: Range<usize>, count: usize| -> Vec<usize> {
        let all: Vec<usize> = range.collect();
        all.choose_multiple(rng, count.min(all.len())).copied().collect()
    };
    let mut out = Vec::new();
    match kind {
        PatternKind::Random { count } => {
            out = rand::seq::index::sample(rng, n, (*count).min(n)).into_vec();
        }
        PatternKind::WithinLower => {
            for g in &map.lower {
                let c = rng.gen_range(0..rho.rho2);
                out.extend(pick(rng, g.clone(), c));
            }
        }
        PatternKind::WorstLower => {
            for g in &map.lower {
                out.extend(pick(rng, g.clone(), rho.rho2 - 1));
            }
        }
        PatternKind::WorstMiddle | PatternKind::MiddleFailure => {
            let fail_all = matches!(kind, PatternKind::MiddleFailure);
            for b in &map.buckets {
                let chosen = pick(rng, b.clone(), rho.rho1);
                for (t, &bucket) in chosen.iter().enumerate() {
                    let count = if !fail_all && t + 1 == chosen.len() { rho.rho2 - 1 } else { rho.rho2 };
                    out.extend(pick(rng, map.lower[bucket].clone(), count));
                }
            }
        }
        PatternKind::WholeMiddle => {
            let m = rng.gen_range(0..map.middle.len());
            out.extend(map.middle[m].clone());
        }
        PatternKind::Explicit(v) => out = v.clone(),
    }
    ErasurePattern::new(out, n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub codewords: usize,
    pub patterns_per_codeword: usize,
    pub pattern: PatternKind,
    pub seed: u64,
}

/// Aggregate over `codewords * patterns_per_codeword` simulations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub erasures: usize,
    pub recovered_lower: usize,
    pub recovered_middle: usize,
    pub failed: usize,
    pub incorrect: usize,
    pub fully_recovered_trials: usize,
    /// Trials in which every erasure was recovered at the lower level.
    pub lower_only_trials: usize,
    pub max_lower_cost: usize,
    pub max_middle_cost: usize,
}

impl TrialSummary {
    fn absorb(&mut self, r: &RecoveryReport) {
        self.trials += 1;
        self.erasures += r.entries.len();
        self.recovered_lower += r.recovered_lower;
        self.recovered_middle += r.recovered_middle;
        self.failed += r.failed;
        self.incorrect += r.incorrect;
        self.fully_recovered_trials += usize::from(r.fully_recovered());
        self.lower_only_trials += usize::from(r.recovered_lower == r.entries.len());
        for e in &r.entries {
            match e.outcome {
                Outcome::RecoveredLower => self.max_lower_cost = self.max_lower_cost.max(e.cost),
                Outcome::RecoveredMiddle => self.max_middle_cost = self.max_middle_cost.max(e.cost),
                Outcome::Failed => {}
            }
        }
    }

    fn merge(mut self, other: TrialSummary) -> TrialSummary {
        self.trials += other.trials;
        self.erasures += other.erasures;
        self.recovered_lower += other.recovered_lower;
        self.recovered_middle += other.recovered_middle;
        self.failed += other.failed;
        self.incorrect += other.incorrect;
        self.fully_recovered_trials += other.fully_recovered_trials;
        self.lower_only_trials += other.lower_only_trials;
        self.max_lower_cost = self.max_lower_cost.max(other.max_lower_cost);
        self.max_middle_cost = self.max_middle_cost.max(other.max_middle_cost);
        self
    }
}

/// Random codewords (uniform messages encoded through `g`), each hit with
/// fresh patterns, every recovered value checked against the codeword.
pub fn run_trials(code: &Code, g: &GeneratorMatrix, map: &HierarchyMap, cfg: &TrialConfig) -> Result<TrialSummary> {
    let q = code.field().q();
    let results: Result<Vec<TrialSummary>> = (0..cfg.codewords)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (c as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let message: Vec<Elem> = (0..g.k()).map(|_| Elem(rng.gen_range(0..q))).collect();
            let codeword = g.encode(&message);
            let mut summary = TrialSummary::default();
            for _ in 0..cfg.patterns_per_codeword {
                let pattern = generate_pattern(code, map, &cfg.pattern, &mut rng)?;
                let report = simulate(code, map, &pattern.apply(&codeword), Some(&codeword))?;
                summary.absorb(&report);
            }
            Ok(summary)
        })
        .collect();
    Ok(results?.into_iter().fold(TrialSummary::default(), TrialSummary::merge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{validate_spec, CodeSpec};
    use crate::families;

    fn setup(rho: (usize, usize, usize)) -> (Code, GeneratorMatrix, HierarchyMap) {
        let s = families::artin_schreier_example(3).unwrap();
        let code = validate_spec(&s, CodeSpec::new(5, rho.0, rho.1, rho.2)).unwrap();
        let g = code.generator_matrix().unwrap();
        let map = build_hierarchy(&code);
        (code, g, map)
    }

    fn codeword(g: &GeneratorMatrix, seed: u64) -> Vec<Elem> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = g.field.q();
        let msg: Vec<Elem> = (0..g.k()).map(|_| Elem(rng.gen_range(0..q))).collect();
        g.encode(&msg)
    }

    #[test]
    fn hierarchy_shapes() {
        let (_, _, map) = setup((4, 2, 1));
        assert!(map.lower.iter().all(|r| r.len() == 3));
        assert!(map.middle.iter().all(|r| r.len() == 15));
        assert!(map.buckets.iter().all(|r| r.len() == 5));
        for i in 0..map.n() {
            assert!(map.lower_group(i).contains(&i));
            assert!(map.middle_group(i).contains(&i));
        }
        let s = families::kummer_example(5).unwrap();
        let code = validate_spec(&s, CodeSpec::new(10, 6, 2, 1)).unwrap();
        let map = build_hierarchy(&code);
        assert!(map.lower.iter().all(|r| r.len() == 6));
        assert!(map.middle.iter().all(|r| r.len() == 60));
    }

    #[test]
    fn lower_round_trip_and_failure() {
        let (code, g, map) = setup((4, 2, 1));
        let cw = codeword(&g, 1);
        let word = ErasurePattern::new(vec![7], 60).unwrap().apply(&cw);
        let r = recover_lower(&code, &map, &word, 7).unwrap();
        assert_eq!(r.value, cw[7]);
        assert_eq!(r.accessed.len(), 2);
        let group = map.lower_group(7);
        let two = ErasurePattern::new(vec![group.start, group.start + 1], 60).unwrap().apply(&cw);
        assert!(matches!(
            recover_lower(&code, &map, &two, group.start),
            Err(RecoveryError::InsufficientSurvivors { survivors: 1, needed: 2, .. })
        ));
        assert_eq!(recover_lower(&code, &map, &word, 8), Err(RecoveryError::NotErased(8)));
    }

    #[test]
    fn constant_in_y_recovers_from_single_survivor() {
        let (code, g, map) = setup((4, 3, 1));
        let cw = codeword(&g, 2);
        let group = map.lower_group(0);
        let word = ErasurePattern::new(vec![group.start, group.start + 1], 60).unwrap().apply(&cw);
        let r = recover_lower(&code, &map, &word, group.start).unwrap();
        assert_eq!((r.value, r.accessed.len()), (cw[group.start], 1));
    }

    #[test]
    fn middle_recovers_whole_bucket() {
        let (code, g, map) = setup((4, 2, 1));
        let cw = codeword(&g, 3);
        let group = map.lower[6].clone();
        let word = ErasurePattern::new(group.clone().collect(), 60).unwrap().apply(&cw);
        let report = simulate(&code, &map, &word, Some(&cw)).unwrap();
        assert_eq!(report.recovered_middle, 3);
        assert_eq!(report.incorrect, 0);
        assert!(report.entries.iter().all(|e| e.cost == 4 && e.cost <= 14));
    }

    #[test]
    fn adversarial_patterns() {
        let (code, g, map) = setup((4, 2, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cw = codeword(&g, 4);
        let p = generate_pattern(&code, &map, &PatternKind::WorstMiddle, &mut rng).unwrap();
        assert_eq!(p.len(), 4 * (4 * 2 - 1));
        let r = simulate(&code, &map, &p.apply(&cw), Some(&cw)).unwrap();
        assert!(r.fully_recovered());
        assert_eq!((r.recovered_lower, r.recovered_middle, r.incorrect), (4, 24, 0));

        let p = generate_pattern(&code, &map, &PatternKind::MiddleFailure, &mut rng).unwrap();
        let r = simulate(&code, &map, &p.apply(&cw), Some(&cw)).unwrap();
        assert_eq!(r.failed, p.len());
        let word = p.apply(&cw);
        assert!(matches!(
            recover_middle(&code, &map, &word, p.positions()[0]),
            Err(RecoveryError::InsufficientBuckets { usable: 1, needed: 2, .. })
        ));
    }

    #[test]
    fn empty_and_whole_middle() {
        let (code, g, map) = setup((4, 2, 1));
        let cw = codeword(&g, 5);
        let r = simulate(&code, &map, &ErasurePattern::default().apply(&cw), Some(&cw)).unwrap();
        assert!(r.entries.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = generate_pattern(&code, &map, &PatternKind::WholeMiddle, &mut rng).unwrap();
        let r = simulate(&code, &map, &p.apply(&cw), Some(&cw)).unwrap();
        assert_eq!(r.failed, 15);
    }

    #[test]
    fn pattern_validation() {
        assert_eq!(ErasurePattern::new(vec![3, 1, 3], 4).unwrap().positions(), &[1, 3]);
        assert_eq!(ErasurePattern::new(vec![4], 4), Err(RecoveryError::OutOfRange(4)));
    }

    #[test]
    fn exhaustive_soundness_on_single_lower_group() {
        // every erasure subset of one middle group, one codeword
        let (code, g, map) = setup((4, 2, 1));
        let cw = codeword(&g, 6);
        let group = map.middle[0].clone();
        for mask in 0u32..(1 << group.len()) {
            let erased: Vec<usize> = group.clone().filter(|i| mask >> (i - group.start) & 1 == 1).collect();
            let p = ErasurePattern::new(erased, 60).unwrap();
            let r = simulate(&code, &map, &p.apply(&cw), Some(&cw)).unwrap();
            assert_eq!(r.incorrect, 0);
        }
    }

    #[test]
    fn random_trials() {
        let (code, g, map) = setup((4, 2, 1));
        let cfg = TrialConfig { codewords: 8, patterns_per_codeword: 16, pattern: PatternKind::WithinLower, seed: 5 };
        let s = run_trials(&code, &g, &map, &cfg).unwrap();
        assert_eq!(s.trials, 128);
        assert_eq!(s.lower_only_trials, 128);
        assert_eq!(s.incorrect, 0);
        assert!(s.max_lower_cost <= 2);
    }
}
