//! JSON job configs, bundled presets, parameter sweeps and the action runner
//! behind the `hlrc` binary.
//!
//! Exit codes: 0 when every audit passes, 1 when a claim is violated, 2 for
//! usage or configuration errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::code::{validate_spec, Code, CodeError, CodeSpec, Eta, ParamContext, Rho};
use crate::export;
use crate::families;
use crate::gf::{AdditiveLhs, Elem, Field, GfError};
use crate::recovery::{self, ErasurePattern, PatternKind, TrialConfig};
use crate::surface::{BivariatePoly, KummerProductForm, SurfaceError, SurfaceSpec};
use crate::verify::{self, AuditRecord, Verdict, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum JobError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Recovery(#[from] recovery::RecoveryError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Io { .. } => EXIT_VIOLATION,
            JobError::Verify(VerifyError::BoundViolated { .. })
            | JobError::Verify(VerifyError::FormulaMismatch { .. })
            | JobError::Verify(VerifyError::CensusMismatch(_)) => EXIT_VIOLATION,
            _ => EXIT_USAGE,
        }
    }
}

pub type Result<T, E = JobError> = std::result::Result<T, E>;

/// A field element in a config: a coefficient vector (constant term first) or
/// the canonical integer index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemConfig {
    Index(u32),
    Coeffs(Vec<u32>),
}

impl ElemConfig {
    pub fn resolve(&self, field: &Field) -> Result<Elem> {
        Ok(match self {
            ElemConfig::Index(i) => field.from_index(*i)?,
            ElemConfig::Coeffs(c) => field.from_coeffs(c)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub p: u32,
    pub h: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub x: u32,
    pub z: u32,
    pub coeff: ElemConfig,
}

fn default_lhs() -> AdditiveLhs {
    AdditiveLhs::ArtinSchreier
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceConfig {
    /// `L(y) = sum coeff x^x z^z`.
    ArtinSchreier {
        #[serde(default = "default_lhs")]
        lhs: AdditiveLhs,
        f: Vec<TermConfig>,
        #[serde(default)]
        relaxed_degree: bool,
    },
    /// `y^lambda = c x^x_power z^z_power prod (x - a z)`.
    Kummer { lambda: u32, c: ElemConfig, x_power: u32, z_power: u32, roots: Vec<ElemConfig> },
    /// `y^p - y = x^(p+1) z^2 + x^2 z^(p+1)` over GF(p^2).
    ArtinSchreierExample { p: u32 },
    /// `y^(q+1) = -x^m z^m (x^m + z^m)` over GF(q^2), `m = (q+1)/3`.
    KummerExample { q: u32 },
    /// `y^q + y = x^(q+1)` over GF(q^2).
    HermitianCone { q: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeConfig {
    pub eta: Eta,
    pub rho1: usize,
    pub rho2: usize,
    pub rho3: usize,
    #[serde(default)]
    pub waive_condition2: bool,
}

impl CodeConfig {
    pub fn spec(&self) -> CodeSpec {
        CodeSpec { eta: self.eta, rho: Rho::new(self.rho1, self.rho2, self.rho3), waive_condition2: self.waive_condition2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    Params,
    Build,
    Simulate,
    VerifyDistance,
    VerifyCensus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum CensusConfig {
    ArtinSchreier { p: u32 },
    Kummer { q: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Simulation trials, or random samples for sampled distance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<PatternKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusConfig>,
    /// Extra distance bounds to report against the measured weight.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidate_bounds: Vec<i64>,
    /// Expected exact weight of the first structured witness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_weight: Option<usize>,
}

fn default_seed() -> u64 {
    1
}

fn default_budget() -> u64 {
    verify::DEFAULT_BUDGET
}

impl Default for Options {
    fn default() -> Self {
        Options {
            trials: None,
            seed: default_seed(),
            budget: default_budget(),
            pattern: None,
            census: None,
            candidate_bounds: Vec::new(),
            witness_weight: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Table]
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: None, formats: default_formats() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldConfig>,
    pub surface: SurfaceConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<CodeConfig>,
    #[serde(default)]
    pub actions: Vec<Action>,
    #[serde(default)]
    pub options: Options,
    #[serde(default)]
    pub output: OutputConfig,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| JobError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| JobError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Builds the surface, checking it against the `field` section if present.
    pub fn surface(&self) -> Result<SurfaceSpec> {
        let explicit_field = || -> Result<Field> {
            let fc = self.field.as_ref().ok_or_else(|| JobError::Config("this surface kind needs a field section".into()))?;
            Ok(Field::new(fc.p, fc.h, fc.modulus.clone())?)
        };
        let surface = match &self.surface {
            SurfaceConfig::ArtinSchreier { lhs, f, relaxed_degree } => {
                let field = explicit_field()?;
                let terms = f
                    .iter()
                    .map(|t| Ok(((t.x, t.z), t.coeff.resolve(&field)?)))
                    .collect::<Result<Vec<_>>>()?;
                let poly = BivariatePoly::new(&field, terms);
                SurfaceSpec::artin_schreier(&field, *lhs, poly, *relaxed_degree)?
            }
            SurfaceConfig::Kummer { lambda, c, x_power, z_power, roots } => {
                let field = explicit_field()?;
                let form = KummerProductForm {
                    c: c.resolve(&field)?,
                    x_power: *x_power,
                    z_power: *z_power,
                    roots: roots.iter().map(|r| r.resolve(&field)).collect::<Result<_>>()?,
                };
                SurfaceSpec::kummer(&field, *lambda, form)?
            }
            SurfaceConfig::ArtinSchreierExample { p } => families::artin_schreier_example(*p)?,
            SurfaceConfig::KummerExample { q } => families::kummer_example(*q)?,
            SurfaceConfig::HermitianCone { q } => families::hermitian_cone(*q)?,
        };
        if let Some(fc) = &self.field {
            let params = surface.field().params();
            let agrees = fc.p == params.p
                && fc.h == params.h
                && fc.modulus.as_ref().is_none_or(|m| m == &params.modulus);
            if !agrees {
                return Err(JobError::Config(format!(
                    "field section {fc:?} disagrees with the surface field {}",
                    export::field_summary(params)
                )));
            }
        }
        Ok(surface)
    }

    pub fn build_code(&self) -> Result<Code> {
        let cc = self.code.ok_or_else(|| JobError::Config("this action needs a code section".into()))?;
        Ok(validate_spec(&self.surface()?, cc.spec())?)
    }
}

/// Command-line overrides applied on top of a config.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub budget: Option<u64>,
    pub format: Option<Format>,
}

impl Overrides {
    pub fn apply(&self, config: &mut JobConfig) {
        if let Some(out) = &self.out {
            config.output.dir = Some(out.clone());
        }
        if let Some(seed) = self.seed {
            config.options.seed = seed;
        }
        if let Some(trials) = self.trials {
            config.options.trials = Some(trials);
        }
        if let Some(budget) = self.budget {
            config.options.budget = budget;
        }
        if let Some(format) = self.format {
            config.output.formats = vec![format];
        }
    }
}

/// Result of running a job: audits, printed text, written files.
#[derive(Debug, Clone, Default)]
pub struct RunOutcome {
    pub audits: Vec<AuditRecord>,
    pub stdout: String,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.audits.iter().all(|a| a.verdict == Verdict::Pass) {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        }
    }
}

struct Runner<'a> {
    config: &'a JobConfig,
    outcome: RunOutcome,
    artifacts: Vec<(String, String)>,
}

impl Runner<'_> {
    fn wants(&self, f: Format) -> bool {
        self.config.output.formats.contains(&f)
    }

    fn artifact(&mut self, name: &str, body: String) {
        self.artifacts.push((name.to_string(), body));
    }

    fn json_artifact(&mut self, name: &str, value: &impl Serialize) {
        let body = serde_json::to_string_pretty(value).expect("artifact serializes") + "\n";
        self.artifact(name, body);
    }

    fn print(&mut self, text: &str) {
        self.outcome.stdout.push_str(text);
        if !text.ends_with('\n') {
            self.outcome.stdout.push('\n');
        }
    }

    fn audit(&mut self, record: AuditRecord) {
        let label = match record.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        self.print(&format!("[{label}] {}", record.claim));
        self.outcome.audits.push(record);
    }
}

/// Executes the configured actions in order and writes artifacts plus a
/// manifest when an output directory is set.
pub fn run(config: &JobConfig) -> Result<RunOutcome> {
    if config.actions.is_empty() {
        return Err(JobError::Config("no actions given".into()));
    }
    let mut r = Runner { config, outcome: RunOutcome::default(), artifacts: Vec::new() };
    let needs_code = config.actions.iter().any(|a| *a != Action::VerifyCensus);
    let code = if needs_code { Some(config.build_code()?) } else { None };
    for w in code.iter().flat_map(|c| c.warnings()) {
        r.print(&format!("warning: {w}"));
    }
    for action in &config.actions {
        match action {
            Action::Params => params_action(&mut r, code.as_ref().unwrap())?,
            Action::Build => build_action(&mut r, code.as_ref().unwrap())?,
            Action::Simulate => simulate_action(&mut r, code.as_ref().unwrap())?,
            Action::VerifyDistance => distance_action(&mut r, code.as_ref().unwrap())?,
            Action::VerifyCensus => census_action(&mut r)?,
        }
    }
    if let Some(dir) = &config.output.dir {
        write_artifacts(&mut r, dir, code.as_ref())?;
    }
    Ok(r.outcome)
}

fn params_action(r: &mut Runner, code: &Code) -> Result<()> {
    let report = code.param_report();
    if r.wants(Format::Table) {
        r.print(&report.to_string());
    }
    if r.wants(Format::Json) {
        r.print(&serde_json::to_string_pretty(&report).expect("report serializes"));
    }
    if r.wants(Format::Csv) {
        let row = sweep_row(code.context(), code.n(), code.rho());
        r.print(&sweep_csv(std::slice::from_ref(&row)));
    }
    r.json_artifact("params.json", &report);
    r.artifact("params.txt", report.to_string());
    Ok(())
}

fn build_action(r: &mut Runner, code: &Code) -> Result<()> {
    let g = code.generator_matrix()?;
    r.print(&format!("generator matrix {} x {}, rank {}", g.k(), g.n(), g.rank));
    r.json_artifact("generator.json", &export::generator_json(&g));
    r.artifact("generator.csv", export::generator_csv(&g));
    r.json_artifact("evaluation_set.json", &export::evaluation_set_json(code));
    let csv = export::evaluation_set_csv(code).map_err(|e| JobError::Config(e.to_string()))?;
    r.artifact("evaluation_set.csv", csv);
    Ok(())
}

/// Patterns whose recovery is guaranteed, and at which level.
fn guarantee(kind: &PatternKind) -> Option<&'static str> {
    match kind {
        PatternKind::WithinLower | PatternKind::WorstLower => Some("lower"),
        PatternKind::WorstMiddle => Some("middle"),
        _ => None,
    }
}

fn simulate_action(r: &mut Runner, code: &Code) -> Result<()> {
    let opts = &r.config.options;
    let g = code.generator_matrix()?;
    let map = recovery::build_hierarchy(code);
    let pattern = opts.pattern.clone().unwrap_or(PatternKind::WithinLower);
    if let PatternKind::Explicit(v) = &pattern {
        ErasurePattern::new(v.clone(), code.n())?;
    }
    let trials = opts.trials.unwrap_or(1000).max(1) as usize;
    let codewords = trials.min(100);
    let cfg = TrialConfig {
        codewords,
        patterns_per_codeword: trials.div_ceil(codewords),
        pattern: pattern.clone(),
        seed: opts.seed,
    };
    let summary = recovery::run_trials(code, &g, &map, &cfg)?;
    let expected_ok = match guarantee(&pattern) {
        Some("lower") => summary.lower_only_trials == summary.trials,
        Some(_) => summary.fully_recovered_trials == summary.trials,
        None => true,
    };
    if r.wants(Format::Table) {
        r.print(&format!(
            "trials {}  erasures {}  lower {}  middle {}  failed {}  incorrect {}  max cost lower {} middle {}",
            summary.trials,
            summary.erasures,
            summary.recovered_lower,
            summary.recovered_middle,
            summary.failed,
            summary.incorrect,
            summary.max_lower_cost,
            summary.max_middle_cost
        ));
    }
    if r.wants(Format::Json) {
        r.print(&serde_json::to_string_pretty(&summary).expect("summary serializes"));
    }
    r.json_artifact("simulation.json", &json!({ "config": cfg, "summary": summary }));
    r.audit(AuditRecord {
        claim: format!("recovery returns only correct symbols for {pattern:?} patterns"),
        source: "two-level Lagrange recovery".into(),
        expected: json!({ "incorrect": 0, "guaranteed_level": guarantee(&pattern) }),
        measured: json!({
            "incorrect": summary.incorrect,
            "trials": summary.trials,
            "fully_recovered_trials": summary.fully_recovered_trials,
            "lower_only_trials": summary.lower_only_trials,
        }),
        verdict: Verdict::from_bool(summary.incorrect == 0 && expected_ok),
    });
    Ok(())
}

fn distance_action(r: &mut Runner, code: &Code) -> Result<()> {
    let opts = r.config.options.clone();
    let g = code.generator_matrix()?;
    let bound = code.distance_bound();
    let feasible = verify::projective_count(code.field().q(), g.k()) <= opts.budget as u128;
    let result = if feasible {
        verify::min_distance_exhaustive(&g, opts.budget)?
    } else {
        verify::estimate_min_distance(code, &g, opts.trials.unwrap_or(100_000), opts.seed)?
    };
    r.print(&format!(
        "distance ({:?}): measured {} vs bound {} (strategies {:?})",
        result.mode, result.measured_min_weight, bound.value, result.strategies
    ));
    let record = verify::audit_bound(&result, &bound);
    r.audit(record);
    for &cand in &opts.candidate_bounds {
        let respected = result.measured_min_weight as i64 >= cand;
        r.print(&format!("candidate bound {cand}: {}", if respected { "respected" } else { "not respected" }));
    }
    if let Some(w) = opts.witness_weight {
        let structured = verify::structured_search(code, &g);
        let measured = structured.measured_min_weight;
        r.audit(AuditRecord {
            claim: format!("the structured witness has weight exactly {w}"),
            source: "fiber-product witness Z(z) A(x) B(y)".into(),
            expected: json!(w),
            measured: json!({ "weight": measured, "message": structured.witnesses.first() }),
            verdict: Verdict::from_bool(measured == w),
        });
    }
    let candidates: Vec<Value> = opts
        .candidate_bounds
        .iter()
        .map(|&c| json!({ "bound": c, "respected": result.measured_min_weight as i64 >= c }))
        .collect();
    r.json_artifact("distance.json", &json!({ "bound": bound, "result": result, "candidates": candidates }));
    Ok(())
}

fn census_action(r: &mut Runner) -> Result<()> {
    let census = match r.config.options.census {
        Some(c) => c,
        None => infer_census(&r.config.surface)?,
    };
    match census {
        CensusConfig::ArtinSchreier { p } => {
            let result = verify::as_census(p)?;
            let record = result.audit();
            r.json_artifact("census.json", &json!({ "census": result, "audit": record }));
            r.audit(record);
        }
        CensusConfig::Kummer { q } => {
            let results = verify::point_counts(q)?;
            let record = verify::point_count_audit(q, &results);
            if r.wants(Format::Table) {
                for p in results.iter().take(1) {
                    r.print(&format!(
                        "q = {q}: {} points per fiber (formula {}), |T_gamma| = {}, |x-image| = {}",
                        p.counted, p.formula_value, p.t_gamma, p.x_image
                    ));
                }
            }
            r.json_artifact("census.json", &json!({ "fibers": results, "audit": record }));
            r.audit(record);
        }
    }
    Ok(())
}

fn infer_census(surface: &SurfaceConfig) -> Result<CensusConfig> {
    match surface {
        SurfaceConfig::ArtinSchreierExample { p } => Ok(CensusConfig::ArtinSchreier { p: *p }),
        SurfaceConfig::KummerExample { q } => Ok(CensusConfig::Kummer { q: *q }),
        _ => Err(JobError::Config("verify-census needs options.census for this surface".into())),
    }
}

fn write_artifacts(r: &mut Runner, dir: &Path, code: Option<&Code>) -> Result<()> {
    let io = |path: &Path| {
        let path = path.to_owned();
        move |source| JobError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": r.config,
        "field": code.map(|c| c.field().params().clone()),
        "seed": r.config.options.seed,
        "files": r.artifacts.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
        "audits": r.outcome.audits,
        "exit_code": r.outcome.exit_code(),
    });
    let manifest = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    r.artifacts.push(("manifest.json".into(), manifest));
    for (name, body) in &r.artifacts {
        let path = dir.join(name);
        fs::write(&path, body).map_err(io(&path))?;
        r.outcome.files.push(path);
    }
    Ok(())
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub rho: Rho,
    pub valid: bool,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub d_bound: Option<i64>,
    pub rate: Option<f64>,
    pub rel_distance: Option<f64>,
    pub branch: Option<crate::code::BoundBranch>,
    pub violation: Option<String>,
}

/// `n` for a sweep row: the evaluation set does not depend on the rho triple.
fn sweep_row(ctx: &ParamContext, n: usize, rho: Rho) -> SweepRow {
    match ctx.check(rho, false) {
        Ok(_) => {
            let k = ctx.k(rho);
            let b = ctx.distance_bound(rho);
            SweepRow {
                rho,
                valid: true,
                n: Some(n),
                k: Some(k),
                d_bound: Some(b.value),
                rate: Some(k as f64 / n as f64),
                rel_distance: Some(b.value as f64 / n as f64),
                branch: Some(b.branch),
                violation: None,
            }
        }
        Err(e) => SweepRow {
            rho,
            valid: false,
            n: None,
            k: None,
            d_bound: None,
            rate: None,
            rel_distance: None,
            branch: None,
            violation: Some(e.to_string()),
        },
    }
}

/// Inclusive ranges for each rho; `None` means the full valid range.
#[derive(Debug, Clone, Default)]
pub struct SweepRanges {
    pub rho1: Option<(usize, usize)>,
    pub rho2: Option<(usize, usize)>,
    pub rho3: Option<(usize, usize)>,
}

/// Parses `a..b` (inclusive) or a single number.
pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || JobError::Config(format!("bad range {s:?}, expected N or A..B"));
    match s.split_once("..") {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok((v, v))
        }
    }
}

/// Every tuple in the ranges, valid or not, in lexicographic order.
pub fn sweep(config: &JobConfig, ranges: &SweepRanges) -> Result<Vec<SweepRow>> {
    let surface = config.surface()?;
    let eta = match config.code.map(|c| c.eta) {
        Some(Eta::Fixed(e)) => e,
        _ => surface.max_eta(),
    };
    let evalset = crate::surface::evaluation_set(&surface, eta)?;
    let ctx = ParamContext {
        kummer: surface.is_kummer(),
        deg: surface.cover_degree() as usize,
        s: surface.s() as usize,
        eta,
        gamma_len: evalset.gammas.len(),
    };
    let full1 = (if ctx.kummer { ctx.deg } else { 2 }, ctx.eta);
    let (a1, b1) = ranges.rho1.unwrap_or(full1);
    let (a2, b2) = ranges.rho2.unwrap_or((2, ctx.deg));
    let (a3, b3) = ranges.rho3.unwrap_or((1, ctx.gamma_len));
    let mut rows = Vec::new();
    for r1 in a1..=b1 {
        for r2 in a2..=b2 {
            for r3 in a3..=b3 {
                rows.push(sweep_row(&ctx, evalset.len(), Rho::new(r1, r2, r3)));
            }
        }
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("rho1,rho2,rho3,valid,n,k,d_bound,rate,rel_distance,branch,violation\n");
    let opt = |v: Option<String>| v.unwrap_or_default();
    for row in rows {
        let branch = row.branch.map(|b| serde_json::to_value(b).unwrap().as_str().unwrap().to_string());
        let violation = row.violation.as_ref().map(|v| format!("\"{}\"", v.replace('"', "\"\"")));
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            row.rho.rho1,
            row.rho.rho2,
            row.rho.rho3,
            row.valid,
            opt(row.n.map(|v| v.to_string())),
            opt(row.k.map(|v| v.to_string())),
            opt(row.d_bound.map(|v| v.to_string())),
            opt(row.rate.map(|v| format!("{v:.6}"))),
            opt(row.rel_distance.map(|v| format!("{v:.6}"))),
            opt(branch),
            opt(violation),
        );
    }
    out
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut out = format!("{:>4} {:>4} {:>4} {:>6} {:>6} {:>8} {:>8} {:>8}  {}\n", "rho1", "rho2", "rho3", "n", "k", "d>=", "rate", "rel.d", "note");
    for row in rows {
        match (row.valid, row.n, row.k, row.d_bound, row.rate, row.rel_distance) {
            (true, Some(n), Some(k), Some(d), Some(rate), Some(rd)) => {
                let _ = writeln!(
                    out,
                    "{:>4} {:>4} {:>4} {:>6} {:>6} {:>8} {:>8.4} {:>8.4}  {:?}",
                    row.rho.rho1, row.rho.rho2, row.rho.rho3, n, k, d, rate, rd, row.branch.unwrap()
                );
            }
            _ => {
                let _ = writeln!(
                    out,
                    "{:>4} {:>4} {:>4} {:>6} {:>6} {:>8} {:>8} {:>8}  invalid: {}",
                    row.rho.rho1, row.rho.rho2, row.rho.rho3, "-", "-", "-", "-", "-",
                    row.violation.as_deref().unwrap_or("")
                );
            }
        }
    }
    out
}

/// Names of the bundled presets.
pub const PRESETS: [&str; 6] =
    ["as-p3-maxdim", "as-p3-rho3", "kummer-q5-sharp", "kummer-q5-maxdim", "kummer-q2-pointcount", "hermitian-cone-q2"];

pub fn preset_description(name: &str) -> Option<&'static str> {
    Some(match name {
        "as-p3-maxdim" => "additive example over GF(9), eta 5, rho (4,2,1): n 60, k 16, d >= 8",
        "as-p3-rho3" => "additive example over GF(9), rho (5,2,3): k 4, exhaustive distance",
        "kummer-q5-sharp" => "Kummer example over GF(25), rho (10,6,23): the 1 - z witness meets the bound 1380",
        "kummer-q5-maxdim" => "Kummer example over GF(25), rho (6,2,1): k 600, bound 20 vs candidate 28",
        "kummer-q2-pointcount" => "fiber point counts of the Kummer example over GF(4)",
        "hermitian-cone-q2" => "cone y^2 + y = x^3 over GF(4), rho (2,2,1): n 32, k 12, d >= 4",
        _ => return None,
    })
}

pub fn preset(name: &str) -> Result<JobConfig> {
    let v = match name {
        "as-p3-maxdim" => json!({
            "surface": { "kind": "artin_schreier_example", "p": 3 },
            "code": { "eta": 5, "rho1": 4, "rho2": 2, "rho3": 1 },
            "actions": ["params", "build", "simulate", "verify-distance", "verify-census"],
            "options": { "trials": 10000, "seed": 1 }
        }),
        "as-p3-rho3" => json!({
            "surface": { "kind": "artin_schreier_example", "p": 3 },
            "code": { "eta": 5, "rho1": 5, "rho2": 2, "rho3": 3 },
            "actions": ["params", "verify-distance"]
        }),
        "kummer-q5-sharp" => json!({
            "surface": { "kind": "kummer_example", "q": 5 },
            "code": { "eta": 10, "rho1": 10, "rho2": 6, "rho3": 23 },
            "actions": ["params", "verify-distance"],
            "options": { "witness_weight": 1380 }
        }),
        "kummer-q5-maxdim" => json!({
            "surface": { "kind": "kummer_example", "q": 5 },
            "code": { "eta": 10, "rho1": 6, "rho2": 2, "rho3": 1 },
            "actions": ["params", "simulate", "verify-distance"],
            "options": { "trials": 10000, "seed": 1, "candidate_bounds": [20, 28] }
        }),
        "kummer-q2-pointcount" => json!({
            "surface": { "kind": "kummer_example", "q": 2 },
            "actions": ["verify-census"]
        }),
        "hermitian-cone-q2" => json!({
            "surface": { "kind": "hermitian_cone", "q": 2 },
            "code": { "eta": 4, "rho1": 2, "rho2": 2, "rho3": 1 },
            "actions": ["params", "build", "verify-distance"]
        }),
        _ => return Err(JobError::Config(format!("unknown preset {name:?}; known: {}", PRESETS.join(", ")))),
    };
    serde_json::from_value(v).map_err(|e| JobError::Config(e.to_string()))
}

/// Loads `path` if given, else the named preset.
pub fn load_config(path: Option<&Path>, preset_name: Option<&str>) -> Result<JobConfig> {
    match (path, preset_name) {
        (Some(p), None) => JobConfig::load(p),
        (None, Some(n)) => preset(n),
        _ => Err(JobError::Config("give exactly one of --config or --preset".into())),
    }
}
