//! Full-rank lattices `Γ = B Z^d` given by a basis matrix.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{hnf, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    basis: Matrix,
    covolume: Scalar,
}

impl Lattice {
    pub fn new(basis: Matrix) -> Result<Self> {
        let covolume = basis.det().abs();
        if covolume.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Lattice { basis, covolume })
    }

    /// `Z^d`.
    pub fn standard(dim: usize) -> Self {
        Lattice {
            basis: Matrix::identity(dim),
            covolume: Scalar::one(),
        }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn covolume(&self) -> &Scalar {
        &self.covolume
    }
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

/// True iff `a` and `b` generate the same lattice, i.e. `b^-1 a` is integral
/// unimodular. For integral bases the verdict is cross-checked against HNF
/// equality.
pub fn lattices_equal(a: &Lattice, b: &Lattice) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let Ok(inv) = b.basis.inverse() else {
        return false;
    };
    let Ok(quotient) = inv.mat_mul(&a.basis) else {
        return false;
    };
    let equal = quotient.is_unimodular_integral();
    if a.basis.is_integral() && b.basis.is_integral() {
        let by_hnf = hnf(&a.basis).ok() == hnf(&b.basis).ok();
        assert_eq!(
            equal, by_hnf,
            "lattice equality disagrees with HNF comparison"
        );
    }
    equal
}

/// Two full-rank lattices of the same dimension and covolume.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePair {
    gamma1: Lattice,
    gamma2: Lattice,
}

impl LatticePair {
    pub fn new(gamma1: Lattice, gamma2: Lattice) -> Result<Self> {
        if gamma1.dim() != gamma2.dim() {
            return Err(Error::DimensionMismatch {
                expected: gamma1.dim(),
                found: gamma2.dim(),
            });
        }
        let (r1, r2) = (gamma1.basis.radicand(), gamma2.basis.radicand());
        if r1 != 0 && r2 != 0 && r1 != r2 {
            return Err(Error::RadicandMismatch(r1, r2));
        }
        if gamma1.covolume != gamma2.covolume {
            return Err(Error::CovolumeMismatch(
                gamma1.covolume.to_string(),
                gamma2.covolume.to_string(),
            ));
        }
        Ok(LatticePair { gamma1, gamma2 })
    }

    pub fn from_bases(m1: Matrix, m2: Matrix) -> Result<Self> {
        Self::new(Lattice::new(m1)?, Lattice::new(m2)?)
    }

    /// `(M Z^d, Z^d)`.
    pub fn against_standard(m: Matrix) -> Result<Self> {
        let d = m.dim();
        Self::new(Lattice::new(m)?, Lattice::standard(d))
    }

    pub fn gamma1(&self) -> &Lattice {
        &self.gamma1
    }

    pub fn gamma2(&self) -> &Lattice {
        &self.gamma2
    }

    pub fn dim(&self) -> usize {
        self.gamma1.dim()
    }

    pub fn swapped(&self) -> Self {
        LatticePair {
            gamma1: self.gamma2.clone(),
            gamma2: self.gamma1.clone(),
        }
    }
}

/// Rewrites `(M1 Z^d, M2 Z^d)` as `(Z^d, M1^-1 M2 Z^d)` and returns the back
/// map `M1`: a witness `W` of the normalized pair is `M1 W` in the original
/// coordinates.
pub fn normalize_pair(pair: &LatticePair) -> Result<(LatticePair, Matrix)> {
    let m1 = pair.gamma1.basis.clone();
    let quotient = m1.inverse()?.mat_mul(&pair.gamma2.basis)?;
    let normalized = LatticePair::new(Lattice::standard(m1.dim()), Lattice::new(quotient)?)?;
    Ok((normalized, m1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(text: &str) -> Matrix {
        crate::cli::parse_matrix(text, 0).unwrap()
    }

    fn lat(text: &str) -> Lattice {
        Lattice::new(m(text)).unwrap()
    }

    #[test]
    fn covolumes() {
        assert_eq!(Lattice::standard(2).covolume(), &Scalar::one());
        assert_eq!(lat("2,0;0,1/2").covolume(), &Scalar::one());
        assert_eq!(lat("2,1,0;0,3,1;0,0,1/6").covolume(), &Scalar::one());
        assert_eq!(lat("0,-3;1,0").covolume(), &Scalar::from_int(3));
        assert_eq!(Lattice::new(m("1,1;1,1")), Err(Error::SingularMatrix));
    }

    #[test]
    fn equality_examples() {
        let p = lat("2,1,0;1,1,0;4,-3,1");
        assert!(lattices_equal(&p, &Lattice::standard(3)));
        let a = lat("1,7/3;0,2");
        let b = lat("2,14/3;0,4");
        assert!(!lattices_equal(&a, &b));
        assert!(lattices_equal(&lat("1,1;0,1"), &lat("1,1;0,1")));
        assert!(lattices_equal(&lat("1,1;0,1"), &Lattice::standard(2)));
        assert!(!lattices_equal(&Lattice::standard(2), &Lattice::standard(3)));
    }

    #[test]
    fn unequal_covolume_pair_is_rejected() {
        let err = LatticePair::new(lat("2,0;0,1"), Lattice::standard(2)).unwrap_err();
        assert!(matches!(err, Error::CovolumeMismatch(..)));
    }

    #[test]
    fn normalization_examples() {
        let mm = m("1,7/3;0,1");
        let pair = LatticePair::against_standard(mm.clone()).unwrap();
        let (norm, back) = normalize_pair(&pair).unwrap();
        assert_eq!(norm.gamma1().basis(), &Matrix::identity(2));
        assert_eq!(norm.gamma2().basis(), &mm.inverse().unwrap());
        assert_eq!(back, mm);

        let id = LatticePair::against_standard(Matrix::identity(2)).unwrap();
        let (norm, back) = normalize_pair(&id).unwrap();
        assert!(norm.gamma2().basis().is_identity());
        assert!(back.is_identity());

        let two = m("2,0;0,2");
        let u = m("1,1;0,1");
        let pair = LatticePair::from_bases(two.clone(), &two * &u).unwrap();
        let (norm, _) = normalize_pair(&pair).unwrap();
        assert_eq!(norm.gamma2().basis(), &u);
    }
}
