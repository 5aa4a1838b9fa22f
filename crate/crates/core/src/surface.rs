//! Fibered surfaces `L(y) = f(x, z)` (Artin-Schreier type) and
//! `y^lambda = f(x, z)` (Kummer type), their fibers `z = gamma`, the set of
//! admissible fibers and the evaluation set built from them.

use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{has_primitive_root_of_unity, AdditiveLhs, Elem, Field, GfError, PreimageTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("deg_x f = {s} but the construction needs at least {required} (set relaxed_degree to override)")]
    DegreeHypothesis { s: u32, required: u32 },
    #[error("y^{q0} + y has a kernel of size {kernel} in this field, expected {q0}")]
    KernelNotFull { q0: u32, kernel: usize },
    #[error("f is the zero polynomial")]
    ZeroPolynomial,
    #[error("invalid Kummer product form: {0}")]
    KummerForm(String),
    #[error("no fiber has at least {eta} distinct x-coordinates")]
    EmptyGammaSet { eta: usize },
}

pub type Result<T, E = SurfaceError> = std::result::Result<T, E>;

/// Dense univariate polynomial, constant term first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, field: &Field, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn mul(&self, field: &Field, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::default();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        UniPoly::new(out)
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(field: &Field, roots: &[Elem]) -> UniPoly {
        roots.iter().fold(UniPoly::new(vec![field.one()]), |acc, &r| {
            acc.mul(field, &UniPoly::new(vec![field.neg(r), field.one()]))
        })
    }
}

/// Sparse polynomial in `x` and `z`, keyed by `(x-degree, z-degree)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), Elem>,
}

impl BivariatePoly {
    /// Collects terms, summing repeated exponents and dropping zeros.
    pub fn new(field: &Field, terms: impl IntoIterator<Item = ((u32, u32), Elem)>) -> Self {
        let mut map: BTreeMap<(u32, u32), Elem> = BTreeMap::new();
        for (exp, c) in terms {
            let e = map.entry(exp).or_insert(Elem::ZERO);
            *e = field.add(*e, c);
        }
        map.retain(|_, c| !c.is_zero());
        BivariatePoly { terms: map }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn deg_z(&self) -> u32 {
        self.terms.keys().map(|&(_, k)| k).max().unwrap_or(0)
    }

    pub fn eval(&self, field: &Field, x: Elem, z: Elem) -> Elem {
        self.terms.iter().fold(Elem::ZERO, |acc, (&(i, k), &c)| {
            let t = field.mul(c, field.mul(field.pow_u(x, i as u64), field.pow_u(z, k as u64)));
            field.add(acc, t)
        })
    }

    /// `f(x, gamma)` as a polynomial in `x`.
    pub fn specialize(&self, field: &Field, gamma: Elem) -> UniPoly {
        let mut coeffs = vec![Elem::ZERO; self.deg_x() as usize + 1];
        for (&(i, k), &c) in &self.terms {
            let t = field.mul(c, field.pow_u(gamma, k as u64));
            coeffs[i as usize] = field.add(coeffs[i as usize], t);
        }
        UniPoly::new(coeffs)
    }
}

/// `c * x^x_power * z^z_power * prod_i (x - a_i z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KummerProductForm {
    pub c: Elem,
    pub x_power: u32,
    pub z_power: u32,
    pub roots: Vec<Elem>,
}

impl KummerProductForm {
    /// Total degree in `x`.
    pub fn mu(&self) -> u32 {
        self.x_power + self.roots.len() as u32
    }

    pub fn validate(&self, field: &Field, lambda: u32) -> Result<()> {
        let bad = |msg: String| Err(SurfaceError::KummerForm(msg));
        if !has_primitive_root_of_unity(field, lambda)? {
            return Err(GfError::LambdaNotDividingGroupOrder { lambda, order: field.q() as u64 - 1 }.into());
        }
        if self.c.is_zero() || !field.contains(self.c) {
            return bad("c must be a nonzero field element".into());
        }
        if self.roots.is_empty() {
            return bad("need at least one linear factor (x_power <= mu - 1)".into());
        }
        let mut sorted = self.roots.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.roots.len() {
            return bad("roots must be pairwise distinct".into());
        }
        if sorted.iter().any(|&a| a.is_zero() || !field.contains(a)) {
            return bad("roots must be nonzero field elements".into());
        }
        if self.mu() >= lambda || self.z_power >= lambda {
            return bad(format!(
                "mu = {} and z_power = {} must both be below lambda = {lambda}",
                self.mu(),
                self.z_power
            ));
        }
        Ok(())
    }

    pub fn eval(&self, field: &Field, x: Elem, z: Elem) -> Elem {
        let mut acc = field.mul(
            self.c,
            field.mul(field.pow_u(x, self.x_power as u64), field.pow_u(z, self.z_power as u64)),
        );
        for &a in &self.roots {
            acc = field.mul(acc, field.sub(x, field.mul(a, z)));
        }
        acc
    }

    /// `f(x, gamma)` expanded from the product form.
    pub fn specialize(&self, field: &Field, gamma: Elem) -> UniPoly {
        let scale = field.mul(self.c, field.pow_u(gamma, self.z_power as u64));
        let shifted: Vec<Elem> = self.roots.iter().map(|&a| field.mul(a, gamma)).collect();
        let mut coeffs = vec![Elem::ZERO; self.x_power as usize];
        coeffs.push(scale);
        UniPoly::new(coeffs).mul(field, &UniPoly::from_roots(field, &shifted))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceKind {
    ArtinSchreier { lhs: AdditiveLhs, f: BivariatePoly },
    Kummer { lambda: u32, f: KummerProductForm },
}

/// A validated surface together with the preimage table of its cover map.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    field: Field,
    kind: SurfaceKind,
    relaxed_degree: bool,
    preimages: Arc<PreimageTable>,
}

impl SurfaceSpec {
    pub fn artin_schreier(
        field: &Field,
        lhs: AdditiveLhs,
        f: BivariatePoly,
        relaxed_degree: bool,
    ) -> Result<Self> {
        lhs.validate(field)?;
        if f.is_zero() {
            return Err(SurfaceError::ZeroPolynomial);
        }
        let preimages = PreimageTable::additive(field, lhs)?;
        let degree = lhs.degree(field);
        if let AdditiveLhs::Trace { q0 } = lhs {
            if preimages.kernel_size() != q0 as usize {
                return Err(SurfaceError::KernelNotFull { q0, kernel: preimages.kernel_size() });
            }
        }
        let s = f.deg_x();
        if !relaxed_degree && s < degree + 1 {
            return Err(SurfaceError::DegreeHypothesis { s, required: degree + 1 });
        }
        Ok(SurfaceSpec {
            field: field.clone(),
            kind: SurfaceKind::ArtinSchreier { lhs, f },
            relaxed_degree,
            preimages: Arc::new(preimages),
        })
    }

    pub fn kummer(field: &Field, lambda: u32, f: KummerProductForm) -> Result<Self> {
        f.validate(field, lambda)?;
        let preimages = PreimageTable::kummer(field, lambda)?;
        Ok(SurfaceSpec {
            field: field.clone(),
            kind: SurfaceKind::Kummer { lambda, f },
            relaxed_degree: false,
            preimages: Arc::new(preimages),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn kind(&self) -> &SurfaceKind {
        &self.kind
    }

    pub fn relaxed_degree(&self) -> bool {
        self.relaxed_degree
    }

    pub fn is_kummer(&self) -> bool {
        matches!(self.kind, SurfaceKind::Kummer { .. })
    }

    /// Number of points over an unramified base point: `p` (or `q0`) for
    /// additive covers, `lambda` for Kummer covers.
    pub fn cover_degree(&self) -> u32 {
        match &self.kind {
            SurfaceKind::ArtinSchreier { lhs, .. } => lhs.degree(&self.field),
            SurfaceKind::Kummer { lambda, .. } => *lambda,
        }
    }

    /// The degree that enters the Bezout term of the distance bound:
    /// `deg_x f` for additive covers, `mu` for Kummer covers.
    pub fn s(&self) -> u32 {
        match &self.kind {
            SurfaceKind::ArtinSchreier { f, .. } => f.deg_x(),
            SurfaceKind::Kummer { f, .. } => f.mu(),
        }
    }

    pub fn specialize(&self, gamma: Elem) -> UniPoly {
        match &self.kind {
            SurfaceKind::ArtinSchreier { f, .. } => f.specialize(&self.field, gamma),
            SurfaceKind::Kummer { f, .. } => f.specialize(&self.field, gamma),
        }
    }

    pub fn eval_f(&self, x: Elem, z: Elem) -> Elem {
        match &self.kind {
            SurfaceKind::ArtinSchreier { f, .. } => f.eval(&self.field, x, z),
            SurfaceKind::Kummer { f, .. } => f.eval(&self.field, x, z),
        }
    }

    /// Whether `(x, y, z)` satisfies the surface equation.
    pub fn contains(&self, point: &Point) -> bool {
        let fld = &self.field;
        let rhs = self.eval_f(point.x, point.z);
        let lhs = match &self.kind {
            SurfaceKind::ArtinSchreier { lhs, .. } => lhs.apply(fld, point.y),
            SurfaceKind::Kummer { lambda, .. } => fld.pow_u(point.y, *lambda as u64),
        };
        lhs == rhs
    }

    /// Whether `gamma` can carry a fiber of the code, before the `eta` test.
    fn fiber_is_regular(&self, gamma: Elem) -> bool {
        match &self.kind {
            SurfaceKind::ArtinSchreier { f, .. } => {
                f.specialize(&self.field, gamma).degree() == Some(f.deg_x() as usize)
            }
            SurfaceKind::Kummer { .. } => !gamma.is_zero(),
        }
    }

    /// Largest `|pi_x(Z_gamma)|` over regular fibers.
    pub fn max_eta(&self) -> usize {
        self.field
            .elements()
            .filter(|&g| self.fiber_is_regular(g))
            .map(|g| fiber_points(self, g).x_image.len())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: Elem,
    pub y: Elem,
    pub z: Elem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiberPoint {
    pub x: Elem,
    pub y: Elem,
    /// Kummer only: `y = 0` over a zero of `f(x, gamma)`.
    pub ramified: bool,
}

/// Affine points of the fiber `z = gamma`, sorted by `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberPoints {
    pub gamma: Elem,
    pub points: Vec<FiberPoint>,
    /// Distinct x-coordinates of the unramified points, sorted.
    pub x_image: Vec<Elem>,
}

pub fn specialize(surface: &SurfaceSpec, gamma: Elem) -> UniPoly {
    surface.specialize(gamma)
}

pub fn fiber_points(surface: &SurfaceSpec, gamma: Elem) -> FiberPoints {
    let field = surface.field();
    let g = surface.specialize(gamma);
    let kummer = surface.is_kummer();
    let mut points = Vec::new();
    let mut x_image = Vec::new();
    for x in field.elements() {
        let c = g.eval(field, x);
        if kummer && c.is_zero() {
            points.push(FiberPoint { x, y: Elem::ZERO, ramified: true });
            continue;
        }
        let ys = surface.preimages.get(c);
        if !ys.is_empty() {
            x_image.push(x);
        }
        points.extend(ys.iter().map(|&y| FiberPoint { x, y, ramified: false }));
    }
    FiberPoints { gamma, points, x_image }
}

/// Admissible fibers in canonical order: regular fibers (full x-degree for
/// additive covers, `gamma != 0` for Kummer covers) with at least `eta`
/// distinct unramified x-coordinates.
pub fn gamma_set(surface: &SurfaceSpec, eta: usize) -> Result<Vec<Elem>> {
    let gammas: Vec<Elem> = surface
        .field()
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|&g| surface.fiber_is_regular(g) && fiber_points(surface, g).x_image.len() >= eta)
        .collect();
    if gammas.is_empty() {
        return Err(SurfaceError::EmptyGammaSet { eta });
    }
    Ok(gammas)
}

/// The evaluation set `T`: all unramified points on admissible fibers, sorted
/// by `(z, x, y)`. Fibers and `pi_{x,z}` groups are contiguous ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationSet {
    pub eta: usize,
    pub gammas: Vec<Elem>,
    pub points: Vec<Point>,
    /// One range per entry of `gammas`.
    pub slices: Vec<Range<usize>>,
    /// Ranges of points sharing `(x, z)`, in order.
    pub lower: Vec<Range<usize>>,
}

impl EvaluationSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distinct x-coordinates on the fiber at `slice`.
    pub fn x_image_len(&self, slice: usize) -> usize {
        let r = self.slices[slice].clone();
        let mut xs: Vec<Elem> = self.points[r].iter().map(|p| p.x).collect();
        xs.dedup();
        xs.len()
    }
}

pub fn evaluation_set(surface: &SurfaceSpec, eta: usize) -> Result<EvaluationSet> {
    let gammas = gamma_set(surface, eta)?;
    let fibers: Vec<FiberPoints> = gammas.par_iter().map(|&g| fiber_points(surface, g)).collect();
    let mut points = Vec::new();
    let mut slices = Vec::with_capacity(gammas.len());
    let mut lower = Vec::new();
    for fiber in fibers {
        let start = points.len();
        for fp in fiber.points.iter().filter(|fp| !fp.ramified) {
            if points.last().is_none_or(|last: &Point| last.x != fp.x || last.z != fiber.gamma) {
                lower.push(points.len()..points.len());
            }
            points.push(Point { x: fp.x, y: fp.y, z: fiber.gamma });
            lower.last_mut().unwrap().end = points.len();
        }
        slices.push(start..points.len());
    }
    Ok(EvaluationSet { eta, gammas, points, slices, lower })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::gf::make_field;

    #[test]
    fn specialize_artin_schreier_example() {
        let s = families::artin_schreier_example(3).unwrap();
        let f = s.field().clone();
        let one = f.one();
        // x^4 + x^2
        let expected = UniPoly::new(vec![Elem::ZERO, Elem::ZERO, one, Elem::ZERO, one]);
        assert_eq!(s.specialize(one), expected);
        assert!(s.specialize(Elem::ZERO).is_zero());
    }

    #[test]
    fn specialize_kummer_example_by_coefficient_comparison() {
        let s = families::kummer_example(5).unwrap();
        let f = s.field().clone();
        // -x^2 (x^2 + 1) = -x^4 - x^2
        let m1 = f.neg(f.one());
        let expected = UniPoly::new(vec![Elem::ZERO, Elem::ZERO, m1, Elem::ZERO, m1]);
        assert_eq!(s.specialize(f.one()), expected);
        // product form and expansion agree everywhere
        for z in f.elements() {
            let g = s.specialize(z);
            for x in f.elements() {
                assert_eq!(g.eval(&f, x), s.eval_f(x, z));
            }
        }
    }

    #[test]
    fn degenerate_fibers_of_artin_schreier_example() {
        let s = families::artin_schreier_example(3).unwrap();
        let f = s.field().clone();
        let small: Vec<Elem> = f
            .nonzero_elements()
            .filter(|&g| fiber_points(&s, g).x_image.len() < 2 * 3 - 1)
            .collect();
        assert_eq!(small.len(), 4);
        for g in small {
            assert_eq!(f.pow_u(g, 4), f.one());
        }
    }

    #[test]
    fn kummer_fiber_sizes() {
        let s = families::kummer_example(5).unwrap();
        for g in s.field().nonzero_elements() {
            let fiber = fiber_points(&s, g);
            assert_eq!(fiber.x_image.len(), 10);
            assert_eq!(fiber.points.iter().filter(|p| !p.ramified).count(), 60);
            assert!(fiber.points.iter().filter(|p| p.ramified).all(|p| p.y.is_zero()));
        }
    }

    #[test]
    fn identically_zero_specialization_gives_full_fiber() {
        let f = make_field(3, 2, None).unwrap();
        // f = x^4 z vanishes identically on z = 0
        let poly = BivariatePoly::new(&f, [((4, 1), f.one())]);
        let s = SurfaceSpec::artin_schreier(&f, AdditiveLhs::ArtinSchreier, poly, false).unwrap();
        let fiber = fiber_points(&s, Elem::ZERO);
        assert_eq!(fiber.x_image.len(), 9);
        assert_eq!(fiber.points.len(), 27);
        // excluded from Gamma because the x-degree drops
        assert!(!gamma_set(&s, 1).unwrap().contains(&Elem::ZERO));
    }

    #[test]
    fn gamma_sets_of_examples() {
        let s = families::artin_schreier_example(3).unwrap();
        assert_eq!(gamma_set(&s, 5).unwrap().len(), 4);
        let k = families::kummer_example(5).unwrap();
        let g = gamma_set(&k, 10).unwrap();
        assert_eq!(g, k.field().nonzero_elements().collect::<Vec<_>>());
        assert_eq!(gamma_set(&s, 10), Err(SurfaceError::EmptyGammaSet { eta: 10 }));
        assert_eq!(s.max_eta(), 5);
    }

    #[test]
    fn evaluation_sets_of_examples() {
        let s = families::artin_schreier_example(3).unwrap();
        let t = evaluation_set(&s, 5).unwrap();
        assert_eq!(t.len(), 60);
        assert!(t.lower.iter().all(|r| r.len() == 3));
        assert!(t.slices.iter().all(|r| r.len() == 15));

        let k = families::kummer_example(5).unwrap();
        let t = evaluation_set(&k, 10).unwrap();
        assert_eq!(t.len(), 1440);
        assert!(t.points.iter().all(|p| !p.y.is_zero()));
        assert!(t.lower.iter().all(|r| r.len() == 6));

        let h = families::hermitian_cone(2).unwrap();
        let t = evaluation_set(&h, 4).unwrap();
        assert_eq!(t.len(), 32);
    }

    #[test]
    fn evaluation_set_points_lie_on_surface_and_are_sorted() {
        for s in [
            families::artin_schreier_example(3).unwrap(),
            families::kummer_example(5).unwrap(),
            families::hermitian_cone(2).unwrap(),
        ] {
            let eta = s.max_eta();
            let t = evaluation_set(&s, eta).unwrap();
            assert!(t.points.iter().all(|p| s.contains(p)));
            let keyed: Vec<_> = t.points.iter().map(|p| (p.z, p.x, p.y)).collect();
            assert!(keyed.windows(2).all(|w| w[0] < w[1]));
            assert!(t.len() >= eta * s.cover_degree() as usize * t.gammas.len());
            assert_eq!(t, evaluation_set(&s, eta).unwrap());
        }
    }

    #[test]
    fn additive_fibers_have_full_kernel_cosets() {
        let s = families::artin_schreier_example(5).unwrap();
        let t = evaluation_set(&s, 9).unwrap();
        assert!(t.lower.iter().all(|r| r.len() == 5));
        for (i, r) in t.slices.iter().enumerate() {
            assert_eq!(r.len(), t.x_image_len(i) * 5);
        }
    }

    #[test]
    fn surface_validation() {
        let f = make_field(3, 2, None).unwrap();
        let low = BivariatePoly::new(&f, [((3, 1), f.one())]);
        assert_eq!(
            SurfaceSpec::artin_schreier(&f, AdditiveLhs::ArtinSchreier, low.clone(), false).unwrap_err(),
            SurfaceError::DegreeHypothesis { s: 3, required: 4 }
        );
        assert!(SurfaceSpec::artin_schreier(&f, AdditiveLhs::ArtinSchreier, low, true).is_ok());

        let f25 = make_field(5, 2, None).unwrap();
        let form = KummerProductForm { c: f25.one(), x_power: 1, z_power: 1, roots: vec![f25.one(), f25.one()] };
        assert!(matches!(SurfaceSpec::kummer(&f25, 6, form), Err(SurfaceError::KummerForm(_))));
        let form = KummerProductForm { c: f25.one(), x_power: 5, z_power: 0, roots: vec![f25.one()] };
        assert!(matches!(SurfaceSpec::kummer(&f25, 6, form), Err(SurfaceError::KummerForm(_))));
        let form = KummerProductForm { c: f25.one(), x_power: 0, z_power: 0, roots: vec![f25.one()] };
        assert!(matches!(SurfaceSpec::kummer(&f25, 7, form), Err(SurfaceError::Field(_))));
    }
}
