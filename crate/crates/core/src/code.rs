//! Evaluation codes `C(T, V)` on a fibered surface: parameter validation, the
//! monomial space `V`, the generator matrix and the closed-form parameters.
//!
//! Two shapes of surface are supported and share every formula once the
//! cover degree (`p`, `q0` or `lambda`) and the Bezout degree (`deg_x f` or
//! `mu`) are fixed:
//!
//! * `k = (eta - rho1 + 1)(deg - rho2 + 1)(|Gamma| - rho3 + 1)`
//! * `d >= rho3 * max(rho1 * rho2, deg * rho1 - s * (deg - rho2))`
//! * local codes `((>= eta * deg, k1, d1), (deg, deg - rho2 + 1, rho2))`

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Elem, Field, FieldParams};
use crate::linalg;
use crate::surface::{evaluation_set, EvaluationSet, Point, SurfaceError, SurfaceSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("eta must be positive")]
    ZeroEta,
    #[error("{name} = {value} is outside the valid range [{min}, {max}]")]
    RhoOutOfRange { name: &'static str, value: usize, min: usize, max: usize },
    #[error("condition deg*eta >= s*(deg - rho2) + deg*(eta - rho1) + 1 fails: {lhs} < {rhs}")]
    Condition2Violated { lhs: i64, rhs: i64 },
    #[error("generator matrix has rank {rank}, expected {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("message has length {got}, expected {expected}")]
    MessageLength { got: usize, expected: usize },
}

pub type Result<T, E = CodeError> = std::result::Result<T, E>;

/// `eta`, either fixed or the largest admissible value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Eta {
    Fixed(usize),
    Auto(AutoTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl Eta {
    pub const AUTO: Eta = Eta::Auto(AutoTag::Auto);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rho {
    pub rho1: usize,
    pub rho2: usize,
    pub rho3: usize,
}

impl Rho {
    pub fn new(rho1: usize, rho2: usize, rho3: usize) -> Self {
        Rho { rho1, rho2, rho3 }
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.rho1, self.rho2, self.rho3)
    }
}

/// Unvalidated code parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeSpec {
    pub eta: Eta,
    pub rho: Rho,
    pub waive_condition2: bool,
}

impl CodeSpec {
    pub fn new(eta: usize, rho1: usize, rho2: usize, rho3: usize) -> Self {
        CodeSpec { eta: Eta::Fixed(eta), rho: Rho::new(rho1, rho2, rho3), waive_condition2: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundBranch {
    /// `rho1 * rho2` is strictly larger.
    Product,
    /// The Bezout term is strictly larger.
    Bezout,
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceBound {
    /// `rho3 * per_fiber`.
    pub value: i64,
    /// Middle-code bound `max(product, bezout)`.
    pub per_fiber: i64,
    pub product: i64,
    pub bezout: i64,
    pub branch: BoundBranch,
}

/// Everything the closed forms depend on besides the rho triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamContext {
    pub kummer: bool,
    /// `p`, `q0` or `lambda`.
    pub deg: usize,
    /// `deg_x f` or `mu`.
    pub s: usize,
    pub eta: usize,
    pub gamma_len: usize,
}

impl ParamContext {
    /// Range checks and, for additive covers, the positivity condition.
    /// Returns warnings for waived checks.
    pub fn check(&self, rho: Rho, waive_condition2: bool) -> Result<Vec<String>> {
        let range = |name, value, min, max| {
            if value < min || value > max {
                Err(CodeError::RhoOutOfRange { name, value, min, max })
            } else {
                Ok(())
            }
        };
        let rho1_min = if self.kummer { self.deg } else { 2 };
        range("rho1", rho.rho1, rho1_min, self.eta)?;
        range("rho2", rho.rho2, 2, self.deg)?;
        range("rho3", rho.rho3, 1, self.gamma_len)?;
        let mut warnings = Vec::new();
        if !self.kummer {
            let (deg, s, eta) = (self.deg as i64, self.s as i64, self.eta as i64);
            let lhs = deg * eta;
            let rhs = s * (deg - rho.rho2 as i64) + deg * (eta - rho.rho1 as i64) + 1;
            if lhs < rhs {
                if !waive_condition2 {
                    return Err(CodeError::Condition2Violated { lhs, rhs });
                }
                warnings.push(format!(
                    "positivity condition waived ({lhs} < {rhs}); the Bezout term may be non-positive"
                ));
            }
        }
        Ok(warnings)
    }

    pub fn k(&self, rho: Rho) -> usize {
        (self.eta - rho.rho1 + 1) * (self.deg - rho.rho2 + 1) * (self.gamma_len - rho.rho3 + 1)
    }

    pub fn distance_bound(&self, rho: Rho) -> DistanceBound {
        let (deg, s) = (self.deg as i64, self.s as i64);
        let (r1, r2, r3) = (rho.rho1 as i64, rho.rho2 as i64, rho.rho3 as i64);
        let product = r1 * r2;
        let bezout = deg * r1 - s * (deg - r2);
        let branch = match bezout.cmp(&product) {
            std::cmp::Ordering::Greater => BoundBranch::Bezout,
            std::cmp::Ordering::Less => BoundBranch::Product,
            std::cmp::Ordering::Equal => BoundBranch::Tie,
        };
        let per_fiber = product.max(bezout);
        DistanceBound { value: r3 * per_fiber, per_fiber, product, bezout, branch }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl Monomial {
    pub fn eval(&self, field: &Field, p: &Point) -> Elem {
        let a = field.pow_u(p.x, self.i as u64);
        let b = field.pow_u(p.y, self.j as u64);
        let c = field.pow_u(p.z, self.k as u64);
        field.mul(a, field.mul(b, c))
    }
}

/// `x^i y^j z^k` with `i <= eta - rho1`, `j <= deg - rho2`, `k <= |Gamma| - rho3`,
/// in lexicographic `(i, j, k)` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    pub max_i: u32,
    pub max_j: u32,
    pub max_k: u32,
    pub monomials: Vec<Monomial>,
}

impl MonomialBasis {
    pub fn new(max_i: u32, max_j: u32, max_k: u32) -> Self {
        let mut monomials = Vec::new();
        for i in 0..=max_i {
            for j in 0..=max_j {
                for k in 0..=max_k {
                    monomials.push(Monomial { i, j, k });
                }
            }
        }
        MonomialBasis { max_i, max_j, max_k, monomials }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Position of `x^i y^j z^k`, if it belongs to the basis.
    pub fn index_of(&self, m: Monomial) -> Option<usize> {
        if m.i > self.max_i || m.j > self.max_j || m.k > self.max_k {
            return None;
        }
        let (nj, nk) = (self.max_j as usize + 1, self.max_k as usize + 1);
        Some((m.i as usize * nj + m.j as usize) * nk + m.k as usize)
    }
}

/// A validated code: surface, resolved parameters, evaluation set and basis.
#[derive(Debug, Clone)]
pub struct Code {
    surface: SurfaceSpec,
    spec: CodeSpec,
    ctx: ParamContext,
    evalset: EvaluationSet,
    basis: MonomialBasis,
    warnings: Vec<String>,
}

/// Checks every parameter constraint and builds the evaluation set.
pub fn validate_spec(surface: &SurfaceSpec, spec: CodeSpec) -> Result<Code> {
    let eta = match spec.eta {
        Eta::Fixed(0) => return Err(CodeError::ZeroEta),
        Eta::Fixed(e) => e,
        Eta::Auto(_) => surface.max_eta(),
    };
    let evalset = evaluation_set(surface, eta)?;
    let ctx = ParamContext {
        kummer: surface.is_kummer(),
        deg: surface.cover_degree() as usize,
        s: surface.s() as usize,
        eta,
        gamma_len: evalset.gammas.len(),
    };
    let warnings = ctx.check(spec.rho, spec.waive_condition2)?;
    let basis = monomial_basis(&ctx, spec.rho);
    Ok(Code { surface: surface.clone(), spec, ctx, evalset, basis, warnings })
}

pub fn monomial_basis(ctx: &ParamContext, rho: Rho) -> MonomialBasis {
    MonomialBasis::new(
        (ctx.eta - rho.rho1) as u32,
        (ctx.deg - rho.rho2) as u32,
        (ctx.gamma_len - rho.rho3) as u32,
    )
}

impl Code {
    pub fn surface(&self) -> &SurfaceSpec {
        &self.surface
    }

    pub fn field(&self) -> &Field {
        self.surface.field()
    }

    pub fn spec(&self) -> CodeSpec {
        self.spec
    }

    pub fn rho(&self) -> Rho {
        self.spec.rho
    }

    pub fn eta(&self) -> usize {
        self.ctx.eta
    }

    pub fn context(&self) -> &ParamContext {
        &self.ctx
    }

    pub fn evaluation_set(&self) -> &EvaluationSet {
        &self.evalset
    }

    pub fn points(&self) -> &[Point] {
        &self.evalset.points
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn n(&self) -> usize {
        self.evalset.len()
    }

    pub fn k(&self) -> usize {
        self.basis.len()
    }

    pub fn cover_degree(&self) -> usize {
        self.ctx.deg
    }

    pub fn distance_bound(&self) -> DistanceBound {
        self.ctx.distance_bound(self.spec.rho)
    }

    /// Evaluates `sum_r message[r] * basis[r]` at every point of `T`.
    pub fn evaluate(&self, message: &[Elem]) -> Result<Vec<Elem>> {
        if message.len() != self.k() {
            return Err(CodeError::MessageLength { got: message.len(), expected: self.k() });
        }
        let field = self.field();
        Ok(self
            .points()
            .iter()
            .map(|p| {
                self.basis.monomials.iter().zip(message).fold(Elem::ZERO, |acc, (m, &c)| {
                    if c.is_zero() {
                        acc
                    } else {
                        field.add(acc, field.mul(c, m.eval(field, p)))
                    }
                })
            })
            .collect())
    }

    /// Builds the generator matrix and checks that it has full row rank.
    pub fn generator_matrix(&self) -> Result<GeneratorMatrix> {
        let g = GeneratorMatrix::fill(self);
        let rank = linalg::rank(self.field(), &g.rows);
        if rank != self.k() {
            return Err(CodeError::RankDeficient { rank, k: self.k() });
        }
        Ok(GeneratorMatrix { rank, ..g })
    }

    pub fn param_report(&self) -> ParamReport {
        let ctx = &self.ctx;
        let rho = self.spec.rho;
        let bound = self.distance_bound();
        let n = self.n();
        let k = self.k();
        ParamReport {
            field: self.field().params().clone(),
            kind: if ctx.kummer { "kummer" } else { "artin_schreier" }.to_string(),
            cover_degree: ctx.deg,
            s: ctx.s,
            eta: ctx.eta,
            gamma_len: ctx.gamma_len,
            rho,
            n,
            k,
            d_lower: bound.value,
            n1_lower: ctx.eta * ctx.deg,
            n1_per_gamma: self.evalset.slices.iter().map(|r| r.len()).collect(),
            k1: (ctx.eta - rho.rho1 + 1) * (ctx.deg - rho.rho2 + 1),
            d1: bound.per_fiber,
            n2: ctx.deg,
            k2: ctx.deg - rho.rho2 + 1,
            d2: rho.rho2,
            rate: k as f64 / n as f64,
            relative_distance_bound: bound.value as f64 / n as f64,
            branch: bound.branch,
            bound,
            warnings: self.warnings.clone(),
        }
    }
}

/// `k x n` matrix of basis monomials evaluated at `T`, rows in basis order
/// and columns in canonical point order.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    pub field: Field,
    pub basis: Vec<Monomial>,
    pub points: Vec<Point>,
    pub rows: Vec<Vec<Elem>>,
    pub rank: usize,
}

impl GeneratorMatrix {
    fn fill(code: &Code) -> Self {
        let field = code.field();
        let basis = &code.basis;
        let columns: Vec<Vec<Elem>> = code
            .points()
            .par_iter()
            .map(|p| {
                let xs = powers(field, p.x, basis.max_i);
                let ys = powers(field, p.y, basis.max_j);
                let zs = powers(field, p.z, basis.max_k);
                basis
                    .monomials
                    .iter()
                    .map(|m| field.mul(xs[m.i as usize], field.mul(ys[m.j as usize], zs[m.k as usize])))
                    .collect()
            })
            .collect();
        let rows = (0..basis.len()).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
        GeneratorMatrix {
            field: field.clone(),
            basis: basis.monomials.clone(),
            points: code.points().to_vec(),
            rows,
            rank: 0,
        }
    }

    /// Builds a matrix from explicit rows (used for hand-made codes).
    pub fn from_rows(field: &Field, rows: Vec<Vec<Elem>>) -> Self {
        let rank = linalg::rank(field, &rows);
        GeneratorMatrix { field: field.clone(), basis: Vec::new(), points: Vec::new(), rows, rank }
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn encode(&self, message: &[Elem]) -> Vec<Elem> {
        let mut word = vec![Elem::ZERO; self.n()];
        for (row, &c) in self.rows.iter().zip(message) {
            self.field.axpy(&mut word, c, row);
        }
        word
    }
}

fn powers(field: &Field, base: Elem, max: u32) -> Vec<Elem> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut cur = field.one();
    for _ in 0..=max {
        out.push(cur);
        cur = field.mul(cur, base);
    }
    out
}

pub fn distance_bound(code: &Code) -> DistanceBound {
    code.distance_bound()
}

pub fn param_report(code: &Code) -> ParamReport {
    code.param_report()
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamReport {
    pub field: FieldParams,
    pub kind: String,
    pub cover_degree: usize,
    pub s: usize,
    pub eta: usize,
    pub gamma_len: usize,
    pub rho: Rho,
    pub n: usize,
    pub k: usize,
    pub d_lower: i64,
    pub n1_lower: usize,
    pub n1_per_gamma: Vec<usize>,
    pub k1: usize,
    pub d1: i64,
    pub n2: usize,
    pub k2: usize,
    pub d2: usize,
    pub rate: f64,
    pub relative_distance_bound: f64,
    pub branch: BoundBranch,
    pub bound: DistanceBound,
    pub warnings: Vec<String>,
}

impl fmt::Display for ParamReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n1_min = self.n1_per_gamma.iter().min().copied().unwrap_or(0);
        let n1_max = self.n1_per_gamma.iter().max().copied().unwrap_or(0);
        writeln!(f, "field        GF({}^{}) modulus {:?}", self.field.p, self.field.h, self.field.modulus)?;
        writeln!(f, "surface      {} (cover degree {}, s = {})", self.kind, self.cover_degree, self.s)?;
        writeln!(f, "eta, |Gamma| {}, {}", self.eta, self.gamma_len)?;
        writeln!(f, "rho          {}", self.rho)?;
        writeln!(f, "n            {}", self.n)?;
        writeln!(f, "k            {}", self.k)?;
        writeln!(f, "d            >= {} ({:?} branch)", self.d_lower, self.branch)?;
        writeln!(f, "rate         {:.4}", self.rate)?;
        writeln!(f, "rel. dist.   >= {:.4}", self.relative_distance_bound)?;
        writeln!(
            f,
            "middle       (n1 >= {}, k1 = {}, d1 >= {})  measured n1 in [{}, {}]",
            self.n1_lower, self.k1, self.d1, n1_min, n1_max
        )?;
        writeln!(f, "lower        (n2 = {}, k2 = {}, d2 = {})", self.n2, self.k2, self.d2)?;
        for w in &self.warnings {
            writeln!(f, "warning      {w}")?;
        }
        Ok(())
    }
}
