//! Constructive families of good pairs `(M Z^d, Z^d)`, each with an explicit
//! witness. Every constructor re-checks its output with
//! [`check_witness`](crate::goodpair::check_witness) and fails loudly if the
//! witness does not pass.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{extended_gcd, Matrix, Scalar};
use crate::goodpair::{check_witness, WitnessCandidate};
use crate::lattice::LatticePair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Unipotent,
    Cascade,
    Diagonal,
    Coprime2,
    DirectSum,
    Tensor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructedPair {
    pub pair: LatticePair,
    pub witness: WitnessCandidate,
    pub family: Family,
    pub params: serde_json::Value,
}

impl ConstructedPair {
    /// `M` in `(M Z^d, Z^d)`.
    pub fn lattice_basis(&self) -> &Matrix {
        self.pair.gamma1().basis()
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }

    /// Rebuild a pair `(basis Z^d, Z^d)` with its witness, re-running the check.
    pub fn from_parts(
        basis: Matrix,
        witness: Matrix,
        family: Family,
        params: serde_json::Value,
    ) -> Result<Self> {
        verified(basis, witness, family, params)
    }
}

fn verified(
    basis: Matrix,
    witness: Matrix,
    family: Family,
    params: serde_json::Value,
) -> Result<ConstructedPair> {
    let pair = LatticePair::against_standard(basis)?;
    let witness = WitnessCandidate::new(witness);
    let report = check_witness(&witness, &pair)?;
    if !report.passed() {
        return Err(Error::ConstructionFailed(format!(
            "{family:?}: {:?}",
            report.failed_condition
        )));
    }
    Ok(ConstructedPair { pair, witness, family, params })
}

fn require_unimodular(m: &Matrix, dim: usize) -> Result<()> {
    if m.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
    }
    if !m.is_unimodular_integral() {
        return Err(Error::NotUnimodularIntegral);
    }
    Ok(())
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// `((P T Q) Z^d, Z^d)` with witness `P T`, for `T` triangular with unit diagonal.
pub fn unipotent_pair(t: &Matrix, p: &Matrix, q: &Matrix) -> Result<ConstructedPair> {
    if !(t.has_unit_diagonal() && (t.is_upper_triangular() || t.is_lower_triangular())) {
        return Err(Error::NotUnipotent);
    }
    let d = t.dim();
    require_unimodular(p, d)?;
    require_unimodular(q, d)?;
    let pt = p.mat_mul(t)?;
    let basis = pt.mat_mul(q)?;
    let params = serde_json::json!({ "t": t, "p": p, "q": q });
    verified(basis, pt, Family::Unipotent, params)
}

#[derive(Clone, Debug)]
pub struct CascadeParams {
    pub p: Vec<Scalar>,
    pub left: Option<Matrix>,
    pub right: Option<Matrix>,
}

fn product_inverse(p: &[Scalar]) -> Scalar {
    p.iter()
        .fold(Scalar::one(), |acc, x| acc * x)
        .recip()
        .expect("nonzero parameters")
}

/// Upper bidiagonal `M(p)`: diagonal `p_1, ..., p_{d-1}, 1/(p_1...p_{d-1})`,
/// ones on the superdiagonal.
pub fn cascade_matrix(p: &[Scalar]) -> Result<Matrix> {
    if let Some(i) = p.iter().position(Scalar::is_zero) {
        return Err(Error::ZeroParameter(i));
    }
    let d = p.len() + 1;
    let mut rows = vec![vec![Scalar::zero(); d]; d];
    for (i, pi) in p.iter().enumerate() {
        rows[i][i] = pi.clone();
        rows[i][i + 1] = Scalar::one();
    }
    rows[d - 1][d - 1] = product_inverse(p);
    Matrix::from_rows(rows)
}

/// Anti-diagonal companion `N(p)`: row 1 is `e_d`, row `i` (2 ≤ i ≤ d-1) has
/// `1` in column `d+1-i` and `p_i` in column `d+2-i`, and row `d` is
/// `(1, 1/(p_1...p_{d-1}), 0, ...)`.
pub fn cascade_witness_matrix(p: &[Scalar]) -> Result<Matrix> {
    if let Some(i) = p.iter().position(Scalar::is_zero) {
        return Err(Error::ZeroParameter(i));
    }
    let d = p.len() + 1;
    let mut rows = vec![vec![Scalar::zero(); d]; d];
    if d == 1 {
        rows[0][0] = Scalar::one();
        return Matrix::from_rows(rows);
    }
    rows[0][d - 1] = Scalar::one();
    for i in 1..d - 1 {
        // 0-based row i holds 1 at column d-1-i and p_{i+1} at column d-i
        rows[i][d - 1 - i] = Scalar::one();
        rows[i][d - i] = p[i].clone();
    }
    rows[d - 1][0] = Scalar::one();
    rows[d - 1][1] = product_inverse(p);
    Matrix::from_rows(rows)
}

/// `((P M(p) Q) Z^d, Z^d)` with witness `P N(p)`.
pub fn cascade_pair(params: &CascadeParams) -> Result<ConstructedPair> {
    let m = cascade_matrix(&params.p)?;
    let n = cascade_witness_matrix(&params.p)?;
    let d = m.dim();
    let left = params.left.clone().unwrap_or_else(|| Matrix::identity(d));
    let right = params.right.clone().unwrap_or_else(|| Matrix::identity(d));
    require_unimodular(&left, d)?;
    require_unimodular(&right, d)?;
    let basis = left.mat_mul(&m)?.mat_mul(&right)?;
    let witness = left.mat_mul(&n)?;
    let json = serde_json::json!({ "p": strings(&params.p), "P": left, "Q": right });
    verified(basis, witness, Family::Cascade, json)
}

#[derive(Clone, Debug)]
pub struct DiagParams {
    pub m: Vec<i64>,
    pub left: Option<Matrix>,
    pub right: Option<Matrix>,
}

/// `D(m) = diag(1/m_1, ..., 1/m_{d-1}, m_1...m_{d-1})`.
pub fn diagonal_matrix(m: &[i64]) -> Result<Matrix> {
    if let Some(i) = m.iter().position(|&x| x == 0) {
        return Err(Error::ZeroParameter(i));
    }
    let mut diag: Vec<Scalar> = m.iter().map(|&x| Scalar::from_ratio(1, x)).collect();
    let prod: BigInt = m.iter().map(|&x| BigInt::from(x)).product();
    diag.push(Scalar::from_bigint(prod));
    Matrix::diagonal(diag)
}

/// Upper unitriangular `U` with `U[i][j] = (-1)^(j-i) m_i m_{i+1} ... m_{j-1}`.
pub fn alternating_unimodular(m: &[i64]) -> Matrix {
    let d = m.len() + 1;
    let mut rows = vec![vec![Scalar::zero(); d]; d];
    for i in 0..d {
        let mut acc = BigInt::one();
        rows[i][i] = Scalar::one();
        for j in i + 1..d {
            acc = -acc * m[j - 1];
            rows[i][j] = Scalar::from_bigint(acc.clone());
        }
    }
    Matrix::from_rows(rows).expect("square")
}

/// `((P D(m) Q) Z^d, Z^d)` with witness `P N(1/m_1, ..., 1/m_{d-1})`.
///
/// `D(m) = Z U` with `Z = M(1/m)` and `U` integral unimodular, so the
/// pair equals the cascade pair for `p = 1/m` with right factor `U Q`.
pub fn diagonal_pair(params: &DiagParams) -> Result<ConstructedPair> {
    let dm = diagonal_matrix(&params.m)?;
    let p: Vec<Scalar> = params.m.iter().map(|&x| Scalar::from_ratio(1, x)).collect();
    let z = cascade_matrix(&p)?;
    let u = alternating_unimodular(&params.m);
    if z.mat_mul(&u)? != dm {
        return Err(Error::InternalIdentityFailure("Z U != D(m)".into()));
    }
    let d = dm.dim();
    let left = params.left.clone().unwrap_or_else(|| Matrix::identity(d));
    let right = params.right.clone().unwrap_or_else(|| Matrix::identity(d));
    require_unimodular(&left, d)?;
    require_unimodular(&right, d)?;
    let basis = left.mat_mul(&dm)?.mat_mul(&right)?;
    let witness = left.mat_mul(&cascade_witness_matrix(&p)?)?;
    let json = serde_json::json!({ "m": params.m, "P": left, "Q": right });
    verified(basis, witness, Family::Diagonal, json)
}

#[derive(Clone, Debug)]
pub struct CoprimeParams {
    pub m: i64,
    pub n: i64,
    pub left: Option<Matrix>,
    pub right: Option<Matrix>,
}

/// Bézout pair `(l1, l2)` with `1 - n*l2 - m*l1 = 0`.
pub fn bezout(m: i64, n: i64) -> Result<(i64, i64)> {
    if m == 0 || n == 0 {
        return Err(Error::ZeroParameter(if m == 0 { 0 } else { 1 }));
    }
    let (g, l1, l2) = extended_gcd(&BigInt::from(m), &BigInt::from(n))?;
    if !g.is_one() {
        return Err(Error::NotCoprime(m, n));
    }
    let l1 = i64::try_from(l1).expect("bounded by |n|");
    let l2 = i64::try_from(l2).expect("bounded by |m|");
    Ok((l1, l2))
}

/// `S' = [[m/n, 1], [0, n/m]]`.
pub fn coprime_shear_base(m: i64, n: i64) -> Matrix {
    Matrix::from_rows(vec![
        vec![Scalar::from_ratio(m, n), Scalar::one()],
        vec![Scalar::zero(), Scalar::from_ratio(n, m)],
    ])
    .expect("2x2")
}

/// `[[-m l2, 1 - n l2], [1, n/m]]`, a common fundamental domain matrix for
/// `(diag(m/n, n/m) Z^2, Z^2)`.
pub fn coprime_witness_matrix(m: i64, n: i64, l2: i64) -> Matrix {
    Matrix::from_rows(vec![
        vec![Scalar::from_int(-m * l2), Scalar::from_int(1 - n * l2)],
        vec![Scalar::one(), Scalar::from_ratio(n, m)],
    ])
    .expect("2x2")
}

/// `((U diag(m/n, n/m) V) Z^2, Z^2)` with witness `U W`.
pub fn coprime_pair(params: &CoprimeParams) -> Result<ConstructedPair> {
    let (m, n) = (params.m, params.n);
    let (l1, l2) = bezout(m, n)?;
    let core = Matrix::diagonal(vec![Scalar::from_ratio(m, n), Scalar::from_ratio(n, m)])?;
    let left = params.left.clone().unwrap_or_else(|| Matrix::identity(2));
    let right = params.right.clone().unwrap_or_else(|| Matrix::identity(2));
    require_unimodular(&left, 2)?;
    require_unimodular(&right, 2)?;
    let basis = left.mat_mul(&core)?.mat_mul(&right)?;
    let witness = left.mat_mul(&coprime_witness_matrix(m, n, l2))?;
    let json = serde_json::json!({ "m": m, "n": n, "l1": l1, "l2": l2, "U": left, "V": right });
    verified(basis, witness, Family::Coprime2, json)
}

/// `((A ⊕ B) Z^{p+q}, Z^{p+q})` with witness `W_a ⊕ W_b`.
pub fn direct_sum_pair(a: &ConstructedPair, b: &ConstructedPair) -> Result<ConstructedPair> {
    let basis = a.lattice_basis().direct_sum(b.lattice_basis())?;
    let witness = a.witness.n.direct_sum(&b.witness.n)?;
    let json = serde_json::json!({ "a": a.params, "b": b.params });
    verified(basis, witness, Family::DirectSum, json)
}

/// Permutation `Π` of order `d p` with `Π (M ⊗ I_p) Π^-1 = I_p ⊗ M` for every
/// `M` of order `d`: it sends `e_i ⊗ e_j` to `e_j ⊗ e_i`.
pub fn perm_similarity(d: usize, p: usize) -> Matrix {
    let mut perm = vec![0usize; d * p];
    for i in 0..d {
        for j in 0..p {
            perm[i * p + j] = j * d + i;
        }
    }
    Matrix::permutation(&perm)
}

/// `((M ⊗ n) Z^{dp}, Z^{dp})` with witness `Π^-1 (I_p ⊗ W)`.
pub fn tensor_pair(base: &ConstructedPair, n: &Matrix) -> Result<ConstructedPair> {
    if !n.is_unimodular_integral() {
        return Err(Error::NotUnimodularIntegral);
    }
    let (d, p) = (base.dim(), n.dim());
    let basis = base.lattice_basis().kronecker(n)?;
    let perm_inv = perm_similarity(d, p).transpose();
    let witness = perm_inv.mat_mul(&Matrix::identity(p).kronecker(&base.witness.n)?)?;
    let json = serde_json::json!({ "base": base.params, "n": n });
    verified(basis, witness, Family::Tensor, json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_matrix;

    fn m(text: &str) -> Matrix {
        parse_matrix(text, 0).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn unipotent_examples() {
        let i2 = Matrix::identity(2);
        let c = unipotent_pair(&m("1,7/3;0,1"), &i2, &i2).unwrap();
        assert_eq!(c.witness.n, m("1,7/3;0,1"));
        let c = unipotent_pair(&Matrix::identity(3), &Matrix::identity(3), &Matrix::identity(3))
            .unwrap();
        assert!(c.lattice_basis().is_identity());
        let p = m("1,1;0,1").direct_sum(&m("1")).unwrap();
        let c = unipotent_pair(&m("1,2,5;0,1,-3;0,0,1"), &p, &Matrix::identity(3)).unwrap();
        assert_eq!(c.family, Family::Unipotent);
        let lower = m("1,0;-4/5,1");
        assert!(unipotent_pair(&lower, &i2, &m("0,1;1,0")).is_ok());
        assert_eq!(unipotent_pair(&m("2,1;0,1/2"), &i2, &i2).unwrap_err(), Error::NotUnipotent);
        assert_eq!(
            unipotent_pair(&m("1,1;0,1"), &m("2,0;0,1"), &i2).unwrap_err(),
            Error::NotUnimodularIntegral
        );
    }

    #[test]
    fn cascade_examples() {
        let params = CascadeParams { p: ints(&[3]), left: None, right: None };
        let c = cascade_pair(&params).unwrap();
        assert_eq!(c.lattice_basis(), &m("3,1;0,1/3"));
        assert_eq!(c.witness.n, m("0,1;1,1/3"));

        let p = ints(&[2, 3]);
        assert_eq!(cascade_matrix(&p).unwrap(), m("2,1,0;0,3,1;0,0,1/6"));
        assert_eq!(cascade_witness_matrix(&p).unwrap(), m("0,0,1;0,1,3;1,1/6,0"));
        let q = cascade_matrix(&p)
            .unwrap()
            .inverse()
            .unwrap()
            .mat_mul(&cascade_witness_matrix(&p).unwrap())
            .unwrap();
        assert_eq!(q, m("1,0,0;-2,0,1;6,1,0"));
        assert!(q.is_unimodular_integral());

        let c = cascade_pair(&CascadeParams { p: ints(&[1]), left: None, right: None }).unwrap();
        assert_eq!(c.lattice_basis(), &m("1,1;0,1"));
        let u = unipotent_pair(&m("1,1;0,1"), &Matrix::identity(2), &Matrix::identity(2))
            .unwrap();
        assert!(check_witness(&c.witness, &u.pair).unwrap().passed());
        assert!(check_witness(&u.witness, &c.pair).unwrap().passed());

        assert_eq!(
            cascade_pair(&CascadeParams { p: ints(&[2, 0]), left: None, right: None })
                .unwrap_err(),
            Error::ZeroParameter(1)
        );
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(alternating_unimodular(&[2]), m("1,-2;0,1"));
        let z = cascade_matrix(&[Scalar::from_ratio(1, 2)]).unwrap();
        assert_eq!(z, m("1/2,1;0,2"));
        assert_eq!(z.mat_mul(&alternating_unimodular(&[2])).unwrap(), m("1/2,0;0,2"));

        let c = diagonal_pair(&DiagParams { m: vec![2, 3], left: None, right: None }).unwrap();
        assert_eq!(c.lattice_basis(), &m("1/2,0,0;0,1/3,0;0,0,6"));
        let c = diagonal_pair(&DiagParams { m: vec![1, 1, 1], left: None, right: None }).unwrap();
        assert!(c.lattice_basis().is_identity());
    }

    #[test]
    fn coprime_examples() {
        assert_eq!(bezout(3, 5).unwrap(), (2, -1));
        let c = coprime_pair(&CoprimeParams { m: 3, n: 5, left: None, right: None }).unwrap();
        assert_eq!(c.witness.n, m("3,6;1,5/3"));
        assert_eq!(c.lattice_basis(), &m("3/5,0;0,5/3"));
        let c = coprime_pair(&CoprimeParams { m: 1, n: 1, left: None, right: None }).unwrap();
        assert!(c.lattice_basis().is_identity());
        assert!(coprime_pair(&CoprimeParams { m: 2, n: 1, left: None, right: None }).is_ok());
        assert_eq!(
            coprime_pair(&CoprimeParams { m: 4, n: 6, left: None, right: None }).unwrap_err(),
            Error::NotCoprime(4, 6)
        );
        assert_eq!(
            coprime_pair(&CoprimeParams { m: 0, n: 6, left: None, right: None }).unwrap_err(),
            Error::ZeroParameter(0)
        );
    }

    #[test]
    fn direct_sum_examples() {
        let one = unipotent_pair(&Matrix::identity(1), &Matrix::identity(1), &Matrix::identity(1))
            .unwrap();
        let c = direct_sum_pair(&one, &one).unwrap();
        assert!(c.lattice_basis().is_identity() && c.witness.n.is_identity());

        let i2 = Matrix::identity(2);
        let a = unipotent_pair(&m("1,1/2;0,1"), &i2, &i2).unwrap();
        let b = coprime_pair(&CoprimeParams { m: 3, n: 5, left: None, right: None }).unwrap();
        assert_eq!(direct_sum_pair(&a, &b).unwrap().dim(), 4);

        let c3 = cascade_pair(&CascadeParams { p: ints(&[3]), left: None, right: None }).unwrap();
        assert!(direct_sum_pair(&c3, &c3).is_ok());
    }

    #[test]
    fn perm_similarity_examples() {
        assert!(perm_similarity(1, 1).is_identity());
        for (d, p, text) in [(2, 2, "1,2;3,4"), (3, 2, "1,-2,0;4,5,1;-3,2,2")] {
            let mm = m(text);
            let perm = perm_similarity(d, p);
            let lhs = perm
                .mat_mul(&mm.kronecker(&Matrix::identity(p)).unwrap())
                .unwrap()
                .mat_mul(&perm.inverse().unwrap())
                .unwrap();
            assert_eq!(lhs, Matrix::identity(p).kronecker(&mm).unwrap());
        }
    }

    #[test]
    fn tensor_examples() {
        let i2 = Matrix::identity(2);
        let base = unipotent_pair(&m("1,1/2;0,1"), &i2, &i2).unwrap();
        let same = tensor_pair(&base, &Matrix::identity(1)).unwrap();
        assert_eq!(same.lattice_basis(), base.lattice_basis());
        assert_eq!(same.witness, base.witness);
        assert_eq!(tensor_pair(&base, &m("1,1;0,1")).unwrap().dim(), 4);
        let cp = coprime_pair(&CoprimeParams { m: 3, n: 5, left: None, right: None }).unwrap();
        assert!(tensor_pair(&cp, &m("0,1;-1,0")).is_ok());
        assert_eq!(
            tensor_pair(&cp, &m("2,0;0,1")).unwrap_err(),
            Error::NotUnimodularIntegral
        );
    }
}
