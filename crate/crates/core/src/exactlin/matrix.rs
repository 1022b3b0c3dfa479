use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Integer coefficient vector `k` of a lattice point `B k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    pub fn from_i64s(v: &[i64]) -> Self {
        IntVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Self {
        IntVector(self.0.iter().map(|x| -x).collect())
    }

    /// True if the first nonzero entry is positive.
    pub fn is_positive_leading(&self) -> bool {
        self.0
            .iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_positive())
    }

    pub fn to_scalars(&self) -> Vec<Scalar> {
        self.0.iter().cloned().map(Scalar::from_bigint).collect()
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for IntVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        parts.serialize(s)
    }
}

/// Square dense matrix of exact scalars, stored row-major. Column `j` is the
/// `j`-th basis vector when the matrix is used as a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    dim: usize,
    radicand: u64,
    data: Vec<Scalar>,
}

fn join(r1: u64, r2: u64) -> Result<u64> {
    match (r1, r2) {
        (0, r) | (r, 0) => Ok(r),
        (r, s) if r == s => Ok(r),
        (r, s) => Err(Error::RadicandMismatch(r, s)),
    }
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Self::from_data(dim, data)
    }

    fn from_data(dim: usize, data: Vec<Scalar>) -> Result<Self> {
        let mut radicand = 0;
        for x in &data {
            radicand = join(radicand, x.radicand())?;
        }
        Ok(Matrix {
            dim,
            radicand,
            data,
        })
    }

    /// Build from rows of `i64`. Panics on ragged input.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect();
        Self::from_rows(rows).expect("square integer matrix")
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(vec![Scalar::one(); dim]).expect("identity")
    }

    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            radicand: 0,
            data: vec![Scalar::zero(); dim * dim],
        }
    }

    pub fn diagonal(diag: Vec<Scalar>) -> Result<Self> {
        let dim = diag.len();
        let mut data = vec![Scalar::zero(); dim * dim];
        for (i, x) in diag.into_iter().enumerate() {
            data[i * dim + i] = x;
        }
        Self::from_data(dim, data)
    }

    /// Permutation matrix with a one at `(perm[j], j)` for every column `j`.
    pub fn permutation(perm: &[usize]) -> Self {
        let dim = perm.len();
        let mut m = Self::zeros(dim);
        for (j, &i) in perm.iter().enumerate() {
            m.data[i * dim + j] = Scalar::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) -> Result<()> {
        self.radicand = join(self.radicand, value.radicand())?;
        self.data[i * self.dim + j] = value;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let data = (0..d * d)
            .map(|idx| self.get(idx % d, idx / d).clone())
            .collect();
        Matrix {
            dim: d,
            radicand: self.radicand,
            data,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<Self> {
        join(self.radicand, c.radicand())?;
        Self::from_data(self.dim, self.data.iter().map(|x| x * c).collect())
    }

    pub fn neg(&self) -> Self {
        Matrix {
            dim: self.dim,
            radicand: self.radicand,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        join(self.radicand, other.radicand)?;
        let d = self.dim;
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Scalar::zero();
                for k in 0..d {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a * b;
                    }
                }
                data.push(acc);
            }
        }
        Self::from_data(d, data)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        for x in v {
            join(self.radicand, x.radicand())?;
        }
        Ok((0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn mul_int_vec(&self, k: &IntVector) -> Result<Vec<Scalar>> {
        self.mul_vec(&k.to_scalars())
    }

    /// Row-echelon elimination over the field; returns the determinant.
    pub fn det(&self) -> Scalar {
        let d = self.dim;
        let mut a = self.data.clone();
        let mut det = Scalar::one();
        for col in 0..d {
            let Some(pivot) = (col..d).find(|&r| !a[r * d + col].is_zero()) else {
                return Scalar::zero();
            };
            if pivot != col {
                for j in 0..d {
                    a.swap(pivot * d + j, col * d + j);
                }
                det = -det;
            }
            let p = a[col * d + col].clone();
            det = det * &p;
            let inv = p.recip().expect("nonzero pivot");
            for r in col + 1..d {
                if a[r * d + col].is_zero() {
                    continue;
                }
                let factor = &a[r * d + col] * &inv;
                for j in col..d {
                    let delta = &factor * &a[col * d + j];
                    a[r * d + j] = &a[r * d + j] - &delta;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix> {
        let d = self.dim;
        let mut a = self.data.clone();
        let mut inv = Matrix::identity(d).data;
        for col in 0..d {
            let pivot = (col..d)
                .find(|&r| !a[r * d + col].is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for j in 0..d {
                    a.swap(pivot * d + j, col * d + j);
                    inv.swap(pivot * d + j, col * d + j);
                }
            }
            let p = a[col * d + col].recip().expect("nonzero pivot");
            for j in 0..d {
                a[col * d + j] = &a[col * d + j] * &p;
                inv[col * d + j] = &inv[col * d + j] * &p;
            }
            for r in 0..d {
                if r == col || a[r * d + col].is_zero() {
                    continue;
                }
                let factor = a[r * d + col].clone();
                for j in 0..d {
                    let da = &factor * &a[col * d + j];
                    a[r * d + j] = &a[r * d + j] - &da;
                    let di = &factor * &inv[col * d + j];
                    inv[r * d + j] = &inv[r * d + j] - &di;
                }
            }
        }
        Self::from_data(d, inv)
    }

    /// `A ⊗ B` with `(A ⊗ B)[i*q + k][j*q + l] = A[i][j] * B[k][l]`, `q = dim(B)`.
    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix> {
        join(self.radicand, other.radicand)?;
        let (p, q) = (self.dim, other.dim);
        let n = p * q;
        let mut data = vec![Scalar::zero(); n * n];
        for i in 0..p {
            for j in 0..p {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..q {
                    for l in 0..q {
                        data[(i * q + k) * n + j * q + l] = a * other.get(k, l);
                    }
                }
            }
        }
        Self::from_data(n, data)
    }

    /// Block diagonal `A ⊕ B`.
    pub fn direct_sum(&self, other: &Matrix) -> Result<Matrix> {
        join(self.radicand, other.radicand)?;
        let (p, q) = (self.dim, other.dim);
        let n = p + q;
        let mut data = vec![Scalar::zero(); n * n];
        for i in 0..p {
            for j in 0..p {
                data[i * n + j] = self.get(i, j).clone();
            }
        }
        for i in 0..q {
            for j in 0..q {
                data[(p + i) * n + p + j] = other.get(i, j).clone();
            }
        }
        Self::from_data(n, data)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Scalar::is_integer)
    }

    pub fn is_rational(&self) -> bool {
        self.data.iter().all(Scalar::is_rational)
    }

    /// Integral entries and determinant `±1`.
    pub fn is_unimodular_integral(&self) -> bool {
        self.is_integral() && self.det().abs().is_one()
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.dim).all(|i| (i + 1..self.dim).all(|j| self.get(i, j).is_zero()))
    }

    pub fn has_unit_diagonal(&self) -> bool {
        (0..self.dim).all(|i| self.get(i, i).is_one())
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.dim)
    }

    pub fn to_int_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(Scalar::to_integer).collect())
            .collect()
    }

    pub fn from_int_rows(rows: &[Vec<BigInt>]) -> Result<Matrix> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().cloned().map(Scalar::from_bigint).collect())
                .collect(),
        )
    }

    /// Least common multiple of all entry denominators (rational matrices only).
    pub fn common_denominator(&self) -> Option<BigInt> {
        let mut lcm = BigInt::one();
        for x in &self.data {
            let q = x.to_rational()?;
            lcm = num_integer::lcm(lcm, q.denom().clone());
        }
        Some(lcm)
    }

    /// Same entries, tagged as living in `Q(sqrt(r))`.
    pub fn in_field(mut self, r: u64) -> Result<Self> {
        self.radicand = join(self.radicand, r)?;
        for x in &mut self.data {
            *x = std::mem::take(x).in_field(self.radicand);
        }
        Ok(self)
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    /// Panics on dimension or radicand mismatch; use [`Matrix::mat_mul`] for a `Result`.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.mat_mul(rhs).expect("compatible matrices")
    }
}

impl fmt::Display for Matrix {
    /// Text format: entries separated by `,`, rows by `;`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        f.write_str(&rows.join(";"))
    }
}

/// JSON form of a matrix: `{"dim": d, "radicand": r, "rows": [["1/2", ...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    #[serde(default)]
    pub radicand: u64,
    pub rows: Vec<Vec<String>>,
}

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> Self {
        MatrixJson {
            dim: m.dim,
            radicand: m.radicand,
            rows: m
                .rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

pub fn scalar_vec_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}
