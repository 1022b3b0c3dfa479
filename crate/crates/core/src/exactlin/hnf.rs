//! Column Hermite normal form and extended gcd over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// `(g, l1, l2)` with `g = gcd(m, n) > 0` and `m*l1 + n*l2 = g`.
///
/// Among all Bézout pairs the one with the smallest `|l2|` is returned (ties
/// go to the nonnegative `l2`), so `1 - n*l2 - m*l1 = 0` holds for coprime input.
pub fn extended_gcd(m: &BigInt, n: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    if m.is_zero() && n.is_zero() {
        return Err(Error::BothZero);
    }
    let e = m.extended_gcd(n);
    let (g, mut l1, mut l2) = (e.gcd, e.x, e.y);
    let (g, l1_sign) = if g.is_negative() { (-g, -1) } else { (g, 1) };
    if l1_sign < 0 {
        l1 = -l1;
        l2 = -l2;
    }
    if m.is_zero() {
        return Ok((g, BigInt::zero(), n.signum()));
    }
    // general solution: l2 + t*(m/g), l1 - t*(n/g)
    let step_l2 = (m / &g).abs();
    let step_l1 = if m.is_positive() { n / &g } else { -(n / &g) };
    let r = l2.mod_floor(&step_l2);
    let t = (&r - &l2) / &step_l2;
    l2 = r;
    l1 -= &t * &step_l1;
    if &l2 * 2 > step_l2 {
        l2 -= &step_l2;
        l1 += &step_l1;
    }
    debug_assert_eq!(m * &l1 + n * &l2, g);
    Ok((g, l1, l2))
}

/// Column-style HNF of a nonsingular integer matrix, with the unimodular
/// transform: returns `(H, U)` where `H = A U` is lower triangular with a
/// positive diagonal and every entry left of the diagonal reduced into
/// `[0, H[i][i])`.
pub fn hnf_int(a: &[Vec<BigInt>]) -> Result<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)> {
    let d = a.len();
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();

    // column operation helpers acting on both h and u
    fn col_combine(
        m: &mut [Vec<BigInt>],
        i: usize,
        j: usize,
        coeffs: (&BigInt, &BigInt, &BigInt, &BigInt),
    ) {
        // (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        let (a, b, c, dd) = coeffs;
        for row in m.iter_mut() {
            let x = row[i].clone();
            let y = row[j].clone();
            row[i] = a * &x + b * &y;
            row[j] = c * &x + dd * &y;
        }
    }

    for i in 0..d {
        for j in i + 1..d {
            if h[i][j].is_zero() {
                continue;
            }
            let x = h[i][i].clone();
            let y = h[i][j].clone();
            let e = x.extended_gcd(&y);
            let g = e.gcd;
            let (p, q) = (e.x, e.y);
            let xg = &x / &g;
            let yg = &y / &g;
            // [p, -y/g; q, x/g] has determinant 1
            let minus_yg = -&yg;
            col_combine(&mut h, i, j, (&p, &q, &minus_yg, &xg));
            col_combine(&mut u, i, j, (&p, &q, &minus_yg, &xg));
        }
        if h[i][i].is_zero() {
            return Err(Error::SingularMatrix);
        }
        if h[i][i].is_negative() {
            for row in h.iter_mut().chain(u.iter_mut()) {
                row[i] = -&row[i];
            }
        }
        for j in 0..i {
            let q = h[i][j].div_floor(&h[i][i]);
            if q.is_zero() {
                continue;
            }
            for row in h.iter_mut().chain(u.iter_mut()) {
                let t = &q * &row[i];
                row[j] -= t;
            }
        }
    }
    Ok((h, u))
}

/// Canonical column HNF of an integral nonsingular matrix.
pub fn hnf(m: &Matrix) -> Result<Matrix> {
    let rows = m.to_int_rows().ok_or(Error::NonIntegralInput)?;
    let (h, _) = hnf_int(&rows)?;
    Matrix::from_int_rows(&h)
}
