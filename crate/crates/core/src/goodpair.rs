//! Decision procedures for common parallelepiped fundamental domains.
//!
//! `N[0,1)^d` is a fundamental domain of `Γ = B Z^d` iff `|det N| = covol(Γ)`
//! and the open box `N(-1,1)^d` meets `Γ` only in `0`. A pair is checked by
//! normalizing it to `(Z^d, A Z^d)` and testing both lattices.

use serde::Serialize;

use crate::boxenum::{enumerate_with_limit, Parallelepiped, Topology, DEFAULT_MAX_CELLS};
use crate::error::{Error, Result};
use crate::exactlin::{IntVector, Matrix, Scalar};
use crate::lattice::{normalize_pair, Lattice, LatticePair};

/// Proposed common fundamental domain `N[0,1)^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCandidate {
    pub n: Matrix,
}

impl WitnessCandidate {
    pub fn new(n: Matrix) -> Self {
        WitnessCandidate { n }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailedCondition {
    None,
    VolumeMismatch,
    HitsGamma1,
    HitsGamma2,
    /// A sampled point is covered zero or several times by the translates.
    TilingCount,
}

fn ser_scalars<S: serde::Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    strings.serialize(s)
}

/// A nonzero lattice point `B k`, reported in original coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePoint {
    /// 1 or 2: which lattice of the pair the point belongs to.
    pub lattice: u8,
    pub k: IntVector,
    #[serde(serialize_with = "ser_scalars")]
    pub image: Vec<Scalar>,
}

/// A point `x` together with every `k` such that `x - B k` lies in `N[0,1)^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleCounterexample {
    #[serde(serialize_with = "ser_scalars")]
    pub x: Vec<Scalar>,
    pub ks: Vec<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub condition: FailedCondition,
    pub counterexample: LatticePoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub failed_condition: FailedCondition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<LatticePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_points: Option<Vec<LatticePoint>>,
    /// Sample point and covering translates from a Monte-Carlo tiling check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleCounterexample>,
    /// Further failures, filled only when all conditions are evaluated.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub other_failures: Vec<Failure>,
}

impl CheckReport {
    pub fn pass() -> Self {
        CheckReport {
            verdict: Verdict::Pass,
            failed_condition: FailedCondition::None,
            counterexample: None,
            boundary_points: None,
            sample: None,
            other_failures: Vec::new(),
        }
    }

    pub(crate) fn fail(condition: FailedCondition, counterexample: Option<LatticePoint>) -> Self {
        CheckReport {
            verdict: Verdict::Fail,
            failed_condition: condition,
            counterexample,
            boundary_points: None,
            sample: None,
            other_failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub max_cells: u64,
    /// Evaluate both lattice conditions even after the first failure.
    pub all_failures: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { max_cells: DEFAULT_MAX_CELLS, all_failures: false }
    }
}

/// First nonzero point with a positive leading entry, in lexicographic order.
fn canonical_hit(points: &[IntVector]) -> Option<&IntVector> {
    points.iter().find(|k| k.is_positive_leading())
}

/// Nonzero `k` with `B k ∈ N(-1,1)^d`, if any.
fn open_box_hit(n: &Matrix, latt: &Lattice, max_cells: u64) -> Result<Option<IntVector>> {
    let bx = Parallelepiped::new(n.clone(), Topology::OpenPm1)?;
    let res = enumerate_with_limit(latt, &bx, max_cells)?;
    Ok(canonical_hit(&res.points).cloned())
}

/// Is `N[0,1)^d` a fundamental domain of `latt`?
pub fn check_single(w: &WitnessCandidate, latt: &Lattice) -> Result<CheckReport> {
    check_single_with(w, latt, DEFAULT_MAX_CELLS)
}

pub fn check_single_with(
    w: &WitnessCandidate,
    latt: &Lattice,
    max_cells: u64,
) -> Result<CheckReport> {
    if w.n.dim() != latt.dim() {
        return Err(Error::DimensionMismatch { expected: latt.dim(), found: w.n.dim() });
    }
    if w.n.det().abs() != *latt.covolume() {
        return Ok(CheckReport::fail(FailedCondition::VolumeMismatch, None));
    }
    match open_box_hit(&w.n, latt, max_cells)? {
        None => Ok(CheckReport::pass()),
        Some(k) => {
            let image = latt.basis().mul_int_vec(&k)?;
            Ok(CheckReport::fail(
                FailedCondition::HitsGamma1,
                Some(LatticePoint { lattice: 1, k, image }),
            ))
        }
    }
}

/// Is `w.n[0,1)^d` a common fundamental domain of both lattices of `pair`?
pub fn check_witness(w: &WitnessCandidate, pair: &LatticePair) -> Result<CheckReport> {
    check_witness_with(w, pair, CheckOptions::default())
}

pub fn check_witness_with(
    w: &WitnessCandidate,
    pair: &LatticePair,
    opts: CheckOptions,
) -> Result<CheckReport> {
    if w.n.dim() != pair.dim() {
        return Err(Error::DimensionMismatch { expected: pair.dim(), found: w.n.dim() });
    }
    let (normalized, back_map) = normalize_pair(pair)?;
    let local = back_map.inverse()?.mat_mul(&w.n)?;
    if !local.det().abs().is_one() {
        return Ok(CheckReport::fail(FailedCondition::VolumeMismatch, None));
    }
    let lattices = [
        (FailedCondition::HitsGamma1, 1u8, normalized.gamma1()),
        (FailedCondition::HitsGamma2, 2u8, normalized.gamma2()),
    ];
    let mut failures = Vec::new();
    for (condition, index, latt) in lattices {
        if let Some(k) = open_box_hit(&local, latt, opts.max_cells)? {
            let local_image = latt.basis().mul_int_vec(&k)?;
            let image = back_map.mul_vec(&local_image)?;
            failures.push(Failure {
                condition,
                counterexample: LatticePoint { lattice: index, k, image },
            });
            if !opts.all_failures {
                break;
            }
        }
    }
    let mut failures = failures.into_iter();
    Ok(match failures.next() {
        None => CheckReport::pass(),
        Some(first) => {
            let mut report = CheckReport::fail(first.condition, Some(first.counterexample));
            report.other_failures = failures.collect();
            report
        }
    })
}

/// `n · w`: a witness for `(P Z^d, M Z^d)` becomes one for `(nP Z^d, nM Z^d)`.
pub fn transport_witness(w: &WitnessCandidate, n: &Matrix) -> Result<WitnessCandidate> {
    if n.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(WitnessCandidate::new(n.mat_mul(&w.n)?))
}

/// Lattice points of both lattices in the closed box `N[-1,1]^d`.
///
/// For a passing witness every nonzero point must sit on the boundary, and
/// each lattice must contribute at least one (the closed box has volume
/// `2^d covol`). Anything else is reported as [`Error::MinkowskiViolation`].
pub fn minkowski_boundary_report(w: &WitnessCandidate, pair: &LatticePair) -> Result<CheckReport> {
    minkowski_boundary_report_with(w, pair, DEFAULT_MAX_CELLS)
}

pub fn minkowski_boundary_report_with(
    w: &WitnessCandidate,
    pair: &LatticePair,
    max_cells: u64,
) -> Result<CheckReport> {
    let opts = CheckOptions { max_cells, all_failures: false };
    let check = check_witness_with(w, pair, opts)?;
    if !check.passed() {
        return Ok(check);
    }
    let (normalized, back_map) = normalize_pair(pair)?;
    let local = back_map.inverse()?.mat_mul(&w.n)?;
    let local_inv = local.inverse()?;
    let closed = Parallelepiped::new(local, Topology::ClosedPm1)?;
    let one = Scalar::one();
    let mut boundary = Vec::new();
    for (index, latt) in [(1u8, normalized.gamma1()), (2u8, normalized.gamma2())] {
        let res = enumerate_with_limit(latt, &closed, max_cells)?;
        let mut found = 0usize;
        for (k, image) in res.points.iter().zip(&res.images) {
            if k.is_zero() {
                continue;
            }
            let coords = local_inv.mul_vec(image)?;
            if !coords.iter().any(|c| c.abs() == one) {
                return Err(Error::MinkowskiViolation(format!(
                    "lattice {index}, k = ({k})"
                )));
            }
            found += 1;
            boundary.push(LatticePoint {
                lattice: index,
                k: k.clone(),
                image: back_map.mul_vec(image)?,
            });
        }
        if found == 0 {
            return Err(Error::MinkowskiViolation(format!(
                "lattice {index} has no nonzero point in the closed box"
            )));
        }
    }
    let mut report = CheckReport::pass();
    report.boundary_points = Some(boundary);
    Ok(report)
}
