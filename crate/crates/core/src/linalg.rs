//! Dense linear algebra and interpolation over a [`Field`].

use rayon::prelude::*;

use crate::gf::{Elem, Field};

/// Rank by Gaussian elimination. Consumes a copy of the rows.
pub fn rank(field: &Field, rows: &[Vec<Elem>]) -> usize {
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = field.inv(m[rank][col]).expect("pivot is nonzero");
        let pivot_row: Vec<Elem> = m[rank].iter().map(|&v| field.mul(v, inv)).collect();
        m[rank + 1..].par_iter_mut().for_each(|row| {
            let factor = row[col];
            if factor.is_zero() {
                return;
            }
            for (dst, &src) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *dst = field.sub(*dst, field.mul(factor, src));
            }
        });
        m[rank] = pivot_row;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Value at `at` of the unique polynomial of degree `< xs.len()` through the
/// points `(xs[i], ys[i])`. The `xs` must be distinct.
pub fn lagrange_eval(field: &Field, xs: &[Elem], ys: &[Elem], at: Elem) -> Elem {
    debug_assert_eq!(xs.len(), ys.len());
    let mut acc = Elem::ZERO;
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        let mut num = field.one();
        let mut den = field.one();
        for (j, &xj) in xs.iter().enumerate() {
            if i != j {
                num = field.mul(num, field.sub(at, xj));
                den = field.mul(den, field.sub(xi, xj));
            }
        }
        let term = field.mul(yi, field.div(num, den).expect("interpolation nodes are distinct"));
        acc = field.add(acc, term);
    }
    acc
}

/// Coefficients (constant term first, length `xs.len()`) of the interpolating
/// polynomial through `(xs[i], ys[i])`, via Newton divided differences.
pub fn interpolate(field: &Field, xs: &[Elem], ys: &[Elem]) -> Vec<Elem> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = field.sub(dd[i], dd[i - 1]);
            let den = field.sub(xs[i], xs[i - level]);
            dd[i] = field.div(num, den).expect("interpolation nodes are distinct");
        }
    }
    // expand the Newton form from the innermost term outward
    let mut coeffs = vec![Elem::ZERO; n];
    for i in (0..n).rev() {
        // coeffs <- coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![Elem::ZERO; n];
        for k in 0..n {
            if coeffs[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = field.add(next[k + 1], coeffs[k]);
            }
            next[k] = field.sub(next[k], field.mul(coeffs[k], xs[i]));
        }
        next[0] = field.add(next[0], dd[i]);
        coeffs = next;
    }
    coeffs
}

/// Horner evaluation of a coefficient vector, constant term first.
pub fn horner(field: &Field, coeffs: &[Elem], at: Elem) -> Elem {
    coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| field.add(field.mul(acc, at), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use proptest::prelude::*;

    #[test]
    fn rank_of_small_matrices() {
        let f = make_field(3, 1, None).unwrap();
        let e = |v: i64| f.from_int(v);
        let rows = vec![vec![e(1), e(2), e(0)], vec![e(2), e(1), e(0)], vec![e(0), e(0), e(1)]];
        // row 2 = 2 * row 1 over GF(3)
        assert_eq!(rank(&f, &rows), 2);
        assert_eq!(rank(&f, &[vec![e(1); 5]]), 1);
        assert_eq!(rank(&f, &[vec![e(0); 5]]), 0);
    }

    proptest! {
        #[test]
        fn interpolation_recovers_polynomial(coeffs in proptest::collection::vec(0u32..25, 1..8)) {
            let f = make_field(5, 2, None).unwrap();
            let coeffs: Vec<Elem> = coeffs.into_iter().map(Elem).collect();
            let xs: Vec<Elem> = f.elements().take(coeffs.len()).collect();
            let ys: Vec<Elem> = xs.iter().map(|&x| horner(&f, &coeffs, x)).collect();
            prop_assert_eq!(interpolate(&f, &xs, &ys), coeffs.clone());
            for at in f.elements() {
                prop_assert_eq!(lagrange_eval(&f, &xs, &ys, at), horner(&f, &coeffs, at));
            }
        }
    }
}
