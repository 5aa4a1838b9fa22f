//! Exact arithmetic in GF(p^h).
//!
//! Elements are stored as a compact [`Elem`] index into a [`Field`]. The index
//! is the coefficient vector in the polynomial basis read as a base-`p` number
//! with the constant term as the most significant digit, so comparing indices
//! is the same as comparing coefficient vectors lexicographically (constant
//! term first). That order is the canonical order used everywhere else in the
//! crate.
//!
//! Multiplication goes through exp/log tables built from a primitive element;
//! addition is digit-wise (table-driven for small fields).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default upper bound on `q` for any field the crate will construct.
pub const DEFAULT_CARDINALITY_CAP: u64 = 1 << 16;

/// Fields up to this size get a full addition table.
const ADD_TABLE_LIMIT: u64 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be monic of degree {expected} with coefficients in [0, p): got {got:?}")]
    MalformedModulus { expected: u32, got: Vec<u32> },
    #[error("modulus {0:?} is reducible")]
    ReducibleModulus(Vec<u32>),
    #[error("field of size {q} exceeds the cardinality cap {cap}")]
    CardinalityCapExceeded { q: u64, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid element encoding: {0}")]
    InvalidElement(String),
    #[error("lambda = {lambda} is divisible by the characteristic {p}")]
    LambdaDivisibleByCharacteristic { lambda: u32, p: u32 },
    #[error("lambda = {lambda} does not divide the multiplicative group order {order}")]
    LambdaNotDividingGroupOrder { lambda: u32, order: u64 },
    #[error("unsupported additive left-hand side: {0}")]
    UnsupportedLhs(String),
}

pub type Result<T, E = GfError> = std::result::Result<T, E>;

/// Serializable description of a finite field: characteristic, degree and
/// the monic modulus (coefficients constant term first, length `h + 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub h: u32,
    pub modulus: Vec<u32>,
}

impl FieldParams {
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.h)
    }
}

/// A field element index, interpreted against exactly one [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }
}

struct Tables {
    params: FieldParams,
    q: u32,
    /// `place[i]` is the weight of the coefficient of `x^i` in an index.
    place: Vec<u32>,
    one: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    primitive: Elem,
}

/// GF(p^h) with precomputed arithmetic tables. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.0.params.p)
            .field("h", &self.0.params.h)
            .field("modulus", &self.0.params.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.params == other.0.params
    }
}

impl Eq for Field {}

/// Builds GF(p^h). Without an explicit modulus the lexicographically smallest
/// monic irreducible polynomial of degree `h` is used.
pub fn make_field(p: u32, h: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
    Field::with_cap(p, h, modulus, DEFAULT_CARDINALITY_CAP)
}

impl Field {
    pub fn new(p: u32, h: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        make_field(p, h, modulus)
    }

    pub fn from_params(params: &FieldParams) -> Result<Self> {
        make_field(params.p, params.h, Some(params.modulus.clone()))
    }

    pub fn with_cap(p: u32, h: u32, modulus: Option<Vec<u32>>, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if h == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(h).unwrap_or(u64::MAX);
        if q > cap || q > u32::MAX as u64 {
            return Err(GfError::CardinalityCapExceeded { q, cap });
        }
        let modulus = match modulus {
            Some(m) => {
                let well_formed = m.len() == h as usize + 1
                    && m[h as usize] == 1
                    && m.iter().all(|&c| c < p);
                if !well_formed {
                    return Err(GfError::MalformedModulus { expected: h, got: m });
                }
                if !is_irreducible(&m, p) {
                    return Err(GfError::ReducibleModulus(m));
                }
                m
            }
            None => smallest_irreducible(p, h),
        };
        Ok(Field(Arc::new(Tables::build(FieldParams { p, h, modulus }, q as u32))))
    }

    pub fn params(&self) -> &FieldParams {
        &self.0.params
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.params.p
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.0.params.h
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        self.0.one
    }

    /// A fixed generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        self.0.primitive
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q()).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.q()).map(Elem)
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.q()
    }

    /// Coefficient vector of `a`, constant term first.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let p = self.p();
        self.0.place.iter().map(|&w| (a.0 / w) % p).collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() != self.h() as usize || coeffs.iter().any(|&c| c >= self.p()) {
            return Err(GfError::InvalidElement(format!(
                "expected {} coefficients in [0, {}), got {coeffs:?}",
                self.h(),
                self.p()
            )));
        }
        Ok(Elem(coeffs.iter().zip(&self.0.place).map(|(c, w)| c * w).sum()))
    }

    pub fn from_index(&self, index: u32) -> Result<Elem> {
        if index < self.q() {
            Ok(Elem(index))
        } else {
            Err(GfError::InvalidElement(format!("index {index} outside [0, {})", self.q())))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        let p = self.p() as i64;
        let c = n.rem_euclid(p) as u32;
        Elem(c * self.0.place[0])
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if let Some(table) = &self.0.add {
            return Elem(table[(a.0 * self.q() + b.0) as usize]);
        }
        let p = self.p();
        let mut out = 0;
        for &w in &self.0.place {
            let da = (a.0 / w) % p;
            let db = (b.0 / w) % p;
            out += ((da + db) % p) * w;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let t = &self.0;
        let s = t.log[a.0 as usize] + t.log[b.0 as usize];
        let order = t.q - 1;
        Elem(t.exp[(if s >= order { s - order } else { s }) as usize])
    }

    /// `acc[i] += c * row[i]` for every `i`, using one scaled lookup table.
    pub fn axpy(&self, acc: &mut [Elem], c: Elem, row: &[Elem]) {
        if c.is_zero() {
            return;
        }
        if self.q() as usize > row.len() {
            for (a, &r) in acc.iter_mut().zip(row) {
                *a = self.add(*a, self.mul(c, r));
            }
            return;
        }
        let scaled: Vec<u32> = (0..self.q()).map(|v| self.mul(c, Elem(v)).0).collect();
        match &self.0.add {
            Some(table) => {
                let q = self.q() as usize;
                for (a, &r) in acc.iter_mut().zip(row) {
                    a.0 = table[a.0 as usize * q + scaled[r.0 as usize] as usize];
                }
            }
            None => {
                for (a, &r) in acc.iter_mut().zip(row) {
                    *a = self.add(*a, Elem(scaled[r.0 as usize]));
                }
            }
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let t = &self.0;
        let order = t.q - 1;
        let l = t.log[a.0 as usize];
        Ok(Elem(t.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer exponent; negative exponents need `a != 0`.
    /// `0^0` is 1.
    pub fn pow(&self, a: Elem, e: i64) -> Result<Elem> {
        if a.is_zero() {
            return match e {
                0 => Ok(self.one()),
                e if e > 0 => Ok(Elem::ZERO),
                _ => Err(GfError::DivisionByZero),
            };
        }
        let order = (self.q() - 1) as i64;
        let l = self.0.log[a.0 as usize] as i64;
        let idx = (l * e.rem_euclid(order)).rem_euclid(order);
        Ok(Elem(self.0.exp[idx as usize]))
    }

    /// `a^e` for a non-negative exponent.
    #[inline]
    pub fn pow_u(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return self.one();
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let order = (self.q() - 1) as u64;
        let l = self.0.log[a.0 as usize] as u64;
        Elem(self.0.exp[((l * (e % order)) % order) as usize])
    }

    /// Discrete log with respect to [`Field::primitive_element`].
    pub fn log(&self, a: Elem) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize])
    }

    pub fn element(&self, a: Elem) -> FieldElement {
        FieldElement { field: self.clone(), value: a }
    }

    pub fn display(&self, a: Elem) -> String {
        let c = self.coeffs(a);
        if c.len() == 1 {
            c[0].to_string()
        } else {
            format!("{c:?}")
        }
    }
}

impl Tables {
    fn build(params: FieldParams, q: u32) -> Self {
        let p = params.p;
        let h = params.h as usize;
        let place: Vec<u32> = (0..h).map(|i| p.pow((h - 1 - i) as u32)).collect();
        let to_coeffs = |v: u32| -> Vec<u32> { place.iter().map(|&w| (v / w) % p).collect() };
        let from_coeffs =
            |c: &[u32]| -> u32 { c.iter().zip(&place).map(|(c, w)| c * w).sum() };

        let neg: Vec<u32> = (0..q)
            .map(|v| {
                let c: Vec<u32> = to_coeffs(v).iter().map(|&d| (p - d) % p).collect();
                from_coeffs(&c)
            })
            .collect();
        let add = (q as u64 <= ADD_TABLE_LIMIT).then(|| {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let ca = to_coeffs(a);
                for b in 0..q {
                    let cb = to_coeffs(b);
                    let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                    table[(a * q + b) as usize] = from_coeffs(&s);
                }
            }
            table
        });

        let one = place[0];
        let mulmod = |a: &[u32], b: &[u32]| -> Vec<u32> { poly_mulmod(a, b, &params.modulus, p) };
        let order = q - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        let mut primitive = one;
        if order == 1 {
            exp[0] = one;
        } else {
            for g in 1..q {
                let gc = to_coeffs(g);
                let mut cur = to_coeffs(one);
                let mut seen = 0u32;
                loop {
                    exp[seen as usize] = from_coeffs(&cur);
                    seen += 1;
                    cur = mulmod(&cur, &gc);
                    if from_coeffs(&cur) == one || seen >= order {
                        break;
                    }
                }
                if seen == order && from_coeffs(&cur) == one {
                    primitive = g;
                    break;
                }
            }
        }
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        Tables { params, q, place, one: Elem(one), exp, log, neg, add, primitive: Elem(primitive) }
    }
}

/// A field element bundled with its field, for checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.display(self.value))
    }
}

impl FieldElement {
    pub fn new(field: &Field, coeffs: &[u32]) -> Result<Self> {
        Ok(FieldElement { field: field.clone(), value: field.from_coeffs(coeffs)? })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    fn wrap(&self, value: Elem) -> Self {
        FieldElement { field: self.field.clone(), value }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Ok(self.wrap(self.field.pow(self.value, e)?))
    }
}

/// True iff the field contains a primitive `lambda`-th root of unity.
pub fn has_primitive_root_of_unity(field: &Field, lambda: u32) -> Result<bool> {
    if lambda == 0 {
        return Err(GfError::InvalidElement("lambda must be positive".into()));
    }
    if lambda.is_multiple_of(field.p()) {
        return Err(GfError::LambdaDivisibleByCharacteristic { lambda, p: field.p() });
    }
    Ok((field.q() - 1).is_multiple_of(lambda))
}

/// Additive left-hand sides `L(y)` for fibers of the form `L(y) = f(x, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AdditiveLhs {
    /// `y^p - y`
    ArtinSchreier,
    /// `y^q0 + y`, `q0` a power of the characteristic.
    Trace { q0: u32 },
}

impl AdditiveLhs {
    pub fn validate(&self, field: &Field) -> Result<()> {
        match *self {
            AdditiveLhs::ArtinSchreier => Ok(()),
            AdditiveLhs::Trace { q0 } => {
                let mut t = 1u64;
                while t < q0 as u64 {
                    t *= field.p() as u64;
                }
                if q0 < field.p() || t != q0 as u64 || q0 > field.q() {
                    Err(GfError::UnsupportedLhs(format!(
                        "y^{q0} + y needs q0 to be a power of {} not exceeding {}",
                        field.p(),
                        field.q()
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Degree of `L` as a polynomial in `y`.
    pub fn degree(&self, field: &Field) -> u32 {
        match *self {
            AdditiveLhs::ArtinSchreier => field.p(),
            AdditiveLhs::Trace { q0 } => q0,
        }
    }

    #[inline]
    pub fn apply(&self, field: &Field, y: Elem) -> Elem {
        match *self {
            AdditiveLhs::ArtinSchreier => field.sub(field.pow_u(y, field.p() as u64), y),
            AdditiveLhs::Trace { q0 } => field.add(field.pow_u(y, q0 as u64), y),
        }
    }
}

/// All `y` in the field with `L(y) = c`, by scanning the field.
pub fn solve_additive(field: &Field, lhs: AdditiveLhs, c: Elem) -> Result<Vec<Elem>> {
    lhs.validate(field)?;
    Ok(field.elements().filter(|&y| lhs.apply(field, y) == c).collect())
}

/// All `y` in the field with `y^lambda = c`, by scanning the field.
pub fn solve_kummer_root(field: &Field, lambda: u32, c: Elem) -> Result<Vec<Elem>> {
    check_kummer_degree(field, lambda)?;
    Ok(field.elements().filter(|&y| field.pow_u(y, lambda as u64) == c).collect())
}

fn check_kummer_degree(field: &Field, lambda: u32) -> Result<()> {
    if lambda == 0 || !(field.q() - 1).is_multiple_of(lambda) {
        return Err(GfError::LambdaNotDividingGroupOrder {
            lambda,
            order: field.q() as u64 - 1,
        });
    }
    Ok(())
}

/// Preimages of every field element under a fixed map, built with one scan
/// of the field. Used to enumerate fibers without rescanning per point.
#[derive(Debug, Clone)]
pub struct PreimageTable {
    preimages: Vec<Vec<Elem>>,
}

impl PreimageTable {
    fn from_map(field: &Field, map: impl Fn(Elem) -> Elem) -> Self {
        let mut preimages = vec![Vec::new(); field.q() as usize];
        for y in field.elements() {
            preimages[map(y).0 as usize].push(y);
        }
        PreimageTable { preimages }
    }

    pub fn additive(field: &Field, lhs: AdditiveLhs) -> Result<Self> {
        lhs.validate(field)?;
        Ok(Self::from_map(field, |y| lhs.apply(field, y)))
    }

    pub fn kummer(field: &Field, lambda: u32) -> Result<Self> {
        check_kummer_degree(field, lambda)?;
        Ok(Self::from_map(field, |y| field.pow_u(y, lambda as u64)))
    }

    /// Sorted preimages of `c`.
    pub fn get(&self, c: Elem) -> &[Elem] {
        &self.preimages[c.0 as usize]
    }

    pub fn kernel_size(&self) -> usize {
        self.preimages[0].len()
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Polynomials over Z/p, coefficient vectors constant term first.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm && r.iter().any(|&c| c != 0) {
        let top = r.len() - 1;
        let c = r[top];
        if c != 0 {
            let factor = (c as u64 * lead_inv as u64 % p as u64) as u32;
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (factor as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    trim(r)
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let h = m.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    let mut r = poly_rem(&prod, m, p);
    r.resize(h, 0);
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Irreducibility by trial division with every monic polynomial of degree at
/// most half the degree of `m`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for t in 0..count {
            let mut divisor: Vec<u32> = (0..d).map(|i| ((t / (p as u64).pow(i as u32)) % p as u64) as u32).collect();
            divisor.push(1);
            let r = poly_rem(m, &divisor, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `h`, comparing the
/// non-leading coefficients constant term first.
fn smallest_irreducible(p: u32, h: u32) -> Vec<u32> {
    let total = (p as u64).pow(h);
    for t in 0..total {
        // most significant digit is the constant term
        let mut m: Vec<u32> = (0..h)
            .map(|i| ((t / (p as u64).pow(h - 1 - i)) % p as u64) as u32)
            .collect();
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}
