//! Ready-made surfaces used throughout the examples, presets and tests.

use crate::gf::{make_field, AdditiveLhs, Elem, GfError};
use crate::surface::{BivariatePoly, KummerProductForm, Result, SurfaceError, SurfaceSpec};

/// `y^p - y = x^(p+1) z^2 + x^2 z^(p+1)` over GF(p^2).
pub fn artin_schreier_example(p: u32) -> Result<SurfaceSpec> {
    let field = make_field(p, 2, None)?;
    let one = field.one();
    let f = BivariatePoly::new(&field, [((p + 1, 2), one), ((2, p + 1), one)]);
    SurfaceSpec::artin_schreier(&field, AdditiveLhs::ArtinSchreier, f, false)
}

/// `y^(q+1) + z^m x^(2m) + x^m z^(2m) = 0` over GF(q^2) with `q = 2 (mod 3)`
/// and `m = (q+1)/3`, written as `y^(q+1) = -x^m z^m prod_{a^m = -1} (x - a z)`.
pub fn kummer_example(q: u32) -> Result<SurfaceSpec> {
    if q % 3 != 2 {
        return Err(SurfaceError::KummerForm(format!("q = {q} is not 2 mod 3")));
    }
    let (p, e) = prime_power(q).ok_or(GfError::NotPrime(q))?;
    let field = make_field(p, 2 * e, None)?;
    let m = (q + 1) / 3;
    let minus_one = field.neg(field.one());
    let roots: Vec<Elem> =
        field.nonzero_elements().filter(|&a| field.pow_u(a, m as u64) == minus_one).collect();
    let form = KummerProductForm { c: minus_one, x_power: m, z_power: m, roots };
    SurfaceSpec::kummer(&field, q + 1, form)
}

/// The cone `y^q + y = x^(q+1)` over GF(q^2).
pub fn hermitian_cone(q: u32) -> Result<SurfaceSpec> {
    let (p, e) = prime_power(q).ok_or(GfError::NotPrime(q))?;
    let field = make_field(p, 2 * e, None)?;
    let f = BivariatePoly::new(&field, [((q + 1, 0), field.one())]);
    SurfaceSpec::artin_schreier(&field, AdditiveLhs::Trace { q0: q }, f, false)
}

/// `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}
