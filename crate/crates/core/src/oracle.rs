//! Independent verification: random unimodular matrices, exact Monte-Carlo
//! tiling counts, and the corner-system test used to corroborate that
//! `(R(r) Z^2, Z^2)` has no parallelepiped common fundamental domain when
//! `sqrt(r)` is irrational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::boxenum::{solve_region, Interval, TriangularSearch, DEFAULT_MAX_CELLS};
use crate::error::{Error, Result};
use crate::exactlin::{
    is_perfect_square, r_matrix, square_free_decomposition, IntVector, Matrix, Scalar,
};
use crate::goodpair::{
    check_witness_with, CheckOptions, CheckReport, FailedCondition, SampleCounterexample,
    WitnessCandidate,
};
use crate::lattice::{Lattice, LatticePair};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random `num/den` with `|num| <= bound`, `1 <= den <= bound`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    let bound = bound.max(1);
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    BigRational::new(num.into(), den.into())
}

/// Nonzero variant of [`random_rational`].
pub fn random_nonzero_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    loop {
        let q = random_rational(rng, bound);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Random `a + b sqrt(r)` with bounded rational parts (`b = 0` when `r = 0`).
pub fn random_scalar<R: Rng>(rng: &mut R, bound: i64, radicand: u64) -> Scalar {
    let a = random_rational(rng, bound);
    if radicand == 0 {
        return Scalar::from_rational(a);
    }
    let b = random_rational(rng, bound);
    Scalar::from_rational(a) + Scalar::scaled_sqrt(b, radicand)
}

fn add_row_multiple(m: &mut [Vec<Scalar>], target: usize, source: usize, c: &Scalar) {
    let src = m[source].clone();
    for (x, s) in m[target].iter_mut().zip(&src) {
        if !s.is_zero() {
            *x = &*x + &(c * s);
        }
    }
}

/// Product of `steps` random elementary operations (shears with a bounded
/// scalar from `Q(sqrt(radicand))`, row swaps) and an optional single row
/// negation. The determinant is `±1` by construction.
pub fn random_unimodular(
    d: usize,
    seed: u64,
    steps: usize,
    radicand: u64,
    entry_bound: i64,
) -> Matrix {
    let mut rng = rng_from_seed(seed);
    random_unimodular_with(&mut rng, d, steps, radicand, entry_bound)
}

pub fn random_unimodular_with<R: Rng>(
    rng: &mut R,
    d: usize,
    steps: usize,
    radicand: u64,
    entry_bound: i64,
) -> Matrix {
    let mut rows = Matrix::identity(d).rows();
    if steps == 0 {
        return Matrix::identity(d);
    }
    for _ in 0..steps {
        if d == 1 {
            break;
        }
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        if rng.gen_bool(0.8) {
            let c = random_scalar(rng, entry_bound, radicand);
            add_row_multiple(&mut rows, i, j, &c);
        } else {
            rows.swap(i, j);
        }
    }
    if rng.gen_bool(0.5) {
        let i = rng.gen_range(0..d);
        for x in rows[i].iter_mut() {
            *x = -&*x;
        }
    }
    Matrix::from_rows(rows).expect("single radicand")
}

/// Random integral unimodular matrix whose entries stay within `max_entry`
/// in absolute value. Steps that would exceed the bound are skipped.
pub fn random_integral_unimodular<R: Rng>(
    rng: &mut R,
    d: usize,
    steps: usize,
    max_entry: i64,
) -> Matrix {
    let mut rows: Vec<Vec<i64>> = (0..d)
        .map(|i| (0..d).map(|j| (i == j) as i64).collect())
        .collect();
    for _ in 0..steps {
        if d == 1 {
            break;
        }
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..10) {
            0..=6 => {
                let c = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=2);
                let candidate: Vec<i64> =
                    rows[i].iter().zip(&rows[j]).map(|(a, b)| a + c * b).collect();
                if candidate.iter().all(|x| x.abs() <= max_entry) {
                    rows[i] = candidate;
                }
            }
            7 | 8 => rows.swap(i, j),
            _ => rows[i].iter_mut().for_each(|x| *x = -*x),
        }
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Matrix::from_ints(&refs)
}

#[derive(Clone, Debug)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    /// Sample coordinates are multiples of `1/denominator_bound`.
    pub denominator_bound: i64,
    /// Samples are drawn from `[-R, R]^d`.
    pub region_radius: BigRational,
    pub max_cells: u64,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64, denominator_bound: i64) -> Self {
        McConfig {
            samples,
            seed,
            denominator_bound,
            region_radius: BigRational::from_integer(2.into()),
            max_cells: DEFAULT_MAX_CELLS,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        if self.denominator_bound < 2 {
            return Err(Error::InvalidArgument("denominator bound must be at least 2".into()));
        }
        if !self.region_radius.is_positive() {
            return Err(Error::InvalidArgument("region radius must be positive".into()));
        }
        Ok(())
    }
}

/// Exact counter of the translates `N[0,1)^d + B k` that contain a point.
pub struct TilingCounter {
    n_inv: Matrix,
    g: Matrix,
    search: Option<TriangularSearch>,
    /// `L N^-1` as integers together with `L`, for rational `N`.
    scaled_inverse: Option<(Vec<Vec<BigInt>>, BigInt)>,
    max_cells: u64,
}

impl TilingCounter {
    pub fn new(w: &WitnessCandidate, latt: &Lattice, max_cells: u64) -> Result<Self> {
        let n_inv = w.n.inverse()?;
        let g = n_inv.mat_mul(latt.basis())?;
        let rational = g.is_rational() && n_inv.is_rational();
        let search = if rational { Some(TriangularSearch::new(&g)?) } else { None };
        let scaled_inverse = if rational {
            n_inv.common_denominator().map(|l| {
                let rows = n_inv
                    .rows()
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|x| (x.to_rational().expect("rational") * &l).to_integer())
                            .collect()
                    })
                    .collect();
                (rows, l)
            })
        } else {
            None
        };
        Ok(TilingCounter { n_inv, g, search, scaled_inverse, max_cells })
    }

    /// Every `k` with `x - B k ∈ N[0,1)^d`, sorted.
    pub fn covering(&self, x: &[Scalar]) -> Result<Vec<IntVector>> {
        let y = self.n_inv.mul_vec(x)?;
        let one = Scalar::one();
        let region: Vec<Interval> = y
            .into_iter()
            .map(|yi| Interval::open_closed(&yi - &one, yi))
            .collect();
        match &self.search {
            Some(search) if region.iter().all(|iv| iv.lo.is_rational()) => {
                search.solve(&region, self.max_cells)
            }
            _ => solve_region(&self.g, &region, self.max_cells),
        }
    }

    /// [`covering`](Self::covering) at the grid point `x = a / den`.
    pub fn covering_grid(&self, a: &[BigInt], den: &BigInt) -> Result<Vec<IntVector>> {
        let (Some(search), Some((rows, l))) = (&self.search, &self.scaled_inverse) else {
            let x: Vec<Scalar> = a
                .iter()
                .map(|ai| Scalar::from_rational(BigRational::new(ai.clone(), den.clone())))
                .collect();
            return self.covering(&x);
        };
        if a.len() != rows.len() {
            return Err(Error::DimensionMismatch { expected: rows.len(), found: a.len() });
        }
        // y = (L N^-1) a / (L den)
        let common = l * den;
        let hi: Vec<BigInt> = rows
            .iter()
            .map(|row| row.iter().zip(a).map(|(r, ai)| r * ai).sum())
            .collect();
        let lo: Vec<BigInt> = hi.iter().map(|h| h - &common).collect();
        search.solve_common(&lo, &hi, &common, (false, true), self.max_cells)
    }
}

/// Samples rational points and checks that each lies in exactly one
/// translate `N[0,1)^d + B k`. A pass is corroboration only; a failure comes
/// with the exact point and all covering `k`.
pub fn mc_tiling_check(w: &WitnessCandidate, latt: &Lattice, cfg: &McConfig) -> Result<CheckReport> {
    cfg.validate()?;
    if w.n.det().abs() != *latt.covolume() {
        return Ok(CheckReport::fail(FailedCondition::VolumeMismatch, None));
    }
    let d = latt.dim();
    let counter = TilingCounter::new(w, latt, cfg.max_cells)?;
    let mut rng = rng_from_seed(cfg.seed);
    let den = BigInt::from(cfg.denominator_bound);
    let reach = (&cfg.region_radius * BigRational::from_integer(den.clone()))
        .floor()
        .to_integer();
    let reach = i64::try_from(reach).map_err(|_| Error::InvalidArgument("radius too large".into()))?;
    let samples: Vec<Vec<BigInt>> = (0..cfg.samples)
        .map(|_| (0..d).map(|_| BigInt::from(rng.gen_range(-reach..=reach))).collect())
        .collect();
    let outcomes: Vec<Result<Option<(Vec<BigInt>, Vec<IntVector>)>>> = samples
        .into_par_iter()
        .map(|a| {
            let ks = counter.covering_grid(&a, &den)?;
            Ok((ks.len() != 1).then_some((a, ks)))
        })
        .collect();
    for outcome in outcomes {
        if let Some((a, ks)) = outcome? {
            let x = a
                .into_iter()
                .map(|ai| Scalar::from_rational(BigRational::new(ai, den.clone())))
                .collect();
            let mut report = CheckReport::fail(FailedCondition::TilingCount, None);
            report.sample = Some(SampleCounterexample { x, ks });
            return Ok(report);
        }
    }
    Ok(CheckReport::pass())
}

/// Exact cover count at one point.
pub fn tiling_count_at(
    w: &WitnessCandidate,
    latt: &Lattice,
    x: &[Scalar],
) -> Result<SampleCounterexample> {
    let counter = TilingCounter::new(w, latt, DEFAULT_MAX_CELLS)?;
    let ks = counter.covering(x)?;
    Ok(SampleCounterexample { x: x.to_vec(), ks })
}

/// A point inside both `E = N[0,1)^d` and `E + B k`, for a nonzero `k` with
/// `B k ∈ N(-1,1)^d`; it is covered at least twice.
pub fn overlap_point(w: &WitnessCandidate, latt: &Lattice, k: &IntVector) -> Result<Vec<Scalar>> {
    let shift = latt.basis().mul_int_vec(k)?;
    let v = w.n.inverse()?.mul_vec(&shift)?;
    let half = Scalar::from_ratio(1, 2);
    let one = Scalar::one();
    let mut u = Vec::with_capacity(v.len());
    for vi in &v {
        if vi.abs() >= one {
            return Err(Error::InvalidArgument(format!(
                "B k is not inside the open box N(-1,1)^d (coordinate {vi})"
            )));
        }
        let start = if vi.is_positive() { vi.clone() } else { Scalar::zero() };
        u.push(start + (&one - &vi.abs()) * &half);
    }
    w.n.mul_vec(&u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Corner {
    E1,
    E2,
}

impl Corner {
    fn vector(self) -> [Scalar; 2] {
        match self {
            Corner::E1 => [Scalar::one(), Scalar::zero()],
            Corner::E2 => [Scalar::zero(), Scalar::one()],
        }
    }
}

/// The system `N p + k = 0`, `N q + j = 0` with `k ∈ Z^2 \ {0}` and
/// `j ∈ R(r) Z^2 \ {0}`.
#[derive(Clone, Debug)]
pub struct CornerSystem {
    pub n: Matrix,
    pub r: u64,
    pub p: Corner,
    pub q: Corner,
}

impl CornerSystem {
    /// `n` must be 2x2 with `|det n| = 1`; `r >= 1`. Perfect squares are
    /// allowed so that the rational contrast case can be expressed.
    pub fn new(n: Matrix, r: u64, p: Corner, q: Corner) -> Result<Self> {
        if n.dim() != 2 {
            return Err(Error::DimensionNot2(n.dim()));
        }
        if r == 0 {
            return Err(Error::InvalidArgument("r must be positive".into()));
        }
        if !n.det().abs().is_one() {
            return Err(Error::InvalidArgument("corner system needs |det N| = 1".into()));
        }
        let field = square_free_decomposition(r).1;
        let field = if field == 1 { 0 } else { field };
        if n.radicand() != 0 && n.radicand() != field {
            return Err(Error::RadicandMismatch(n.radicand(), field));
        }
        Ok(CornerSystem { n, r, p, q })
    }

    /// Like [`CornerSystem::new`] but rejects perfect-square `r`.
    pub fn new_irrational(n: Matrix, r: u64, p: Corner, q: Corner) -> Result<Self> {
        if is_perfect_square(r) {
            return Err(Error::PerfectSquareRadicand(r));
        }
        Self::new(n, r, p, q)
    }
}

/// Does the corner system have a solution? Inputs with `det N = -1` are first
/// replaced by `J N`, `J = diag(-1, 1)`.
pub fn corner_system_check(cs: &CornerSystem) -> Result<bool> {
    let n = if cs.n.det().is_negative() {
        let j = Matrix::diagonal(vec![Scalar::from_int(-1), Scalar::one()])?;
        j.mat_mul(&cs.n)?
    } else {
        cs.n.clone()
    };
    let k: Vec<Scalar> = n.mul_vec(&cs.p.vector())?.iter().map(|x| -x).collect();
    let j: Vec<Scalar> = n.mul_vec(&cs.q.vector())?.iter().map(|x| -x).collect();
    let k_ok = k.iter().all(Scalar::is_integer) && k.iter().any(|x| !x.is_zero());
    let root = Scalar::sqrt_of(cs.r);
    let first = &j[0] / &root;
    let second = &j[1] * &root;
    let j_ok = first.is_integer() && second.is_integer() && j.iter().any(|x| !x.is_zero());
    Ok(k_ok && j_ok)
}

/// Results for all four `(p, q)` corner choices.
pub fn corner_system_check_all(n: &Matrix, r: u64) -> Result<Vec<(Corner, Corner, bool)>> {
    let mut out = Vec::with_capacity(4);
    for p in [Corner::E1, Corner::E2] {
        for q in [Corner::E1, Corner::E2] {
            let cs = CornerSystem::new(n.clone(), r, p, q)?;
            out.push((p, q, corner_system_check(&cs)?));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanFinding {
    pub index: usize,
    pub candidate: Matrix,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub r: u64,
    pub count: usize,
    pub seed: u64,
    /// Candidates whose witness passed `check_witness` (expected empty).
    pub passing_witnesses: Vec<ScanFinding>,
    /// Candidates with a solvable corner system (expected empty).
    pub solvable_corner_systems: Vec<ScanFinding>,
    /// Candidates whose witness check exceeded the cell limit (corner systems
    /// are still evaluated for them).
    pub skipped_checks: usize,
}

impl ScanReport {
    pub fn clean(&self) -> bool {
        self.passing_witnesses.is_empty() && self.solvable_corner_systems.is_empty()
    }
}

struct ScanCandidate {
    n: Matrix,
    left: Matrix,
    right: Matrix,
}

/// Checks `count` random unimodular candidates `N` (alternately over
/// `Q(sqrt(r))` and over `Q`) against randomly conjugated pairs
/// `(P R(r) Q Z^2, Z^2)`, using the transported witness `P N`, and runs the
/// four corner systems for each `N`. Corroborative only: no finite scan
/// proves the absence of a witness.
pub fn notgood_scan(r: u64, count: usize, seed: u64) -> Result<ScanReport> {
    notgood_scan_with(r, count, seed, DEFAULT_MAX_CELLS)
}

pub fn notgood_scan_with(r: u64, count: usize, seed: u64, max_cells: u64) -> Result<ScanReport> {
    if r < 2 || is_perfect_square(r) {
        return Err(Error::PerfectSquareRadicand(r));
    }
    let field = square_free_decomposition(r).1;
    let mut rng = rng_from_seed(seed);
    let candidates: Vec<ScanCandidate> = (0..count)
        .map(|idx| {
            let radicand = if idx % 2 == 0 { field } else { 0 };
            ScanCandidate {
                n: random_unimodular_with(&mut rng, 2, 4, radicand, 3),
                left: random_integral_unimodular(&mut rng, 2, 4, 3),
                right: random_integral_unimodular(&mut rng, 2, 4, 3),
            }
        })
        .collect();
    let rr = r_matrix(r);
    let opts = CheckOptions { max_cells, all_failures: false };
    let results: Vec<Result<(Option<ScanFinding>, Option<ScanFinding>, bool)>> = candidates
        .into_par_iter()
        .enumerate()
        .map(|(index, cand)| {
            let basis = cand.left.mat_mul(&rr)?.mat_mul(&cand.right)?;
            let pair = LatticePair::against_standard(basis)?;
            let witness = WitnessCandidate::new(cand.left.mat_mul(&cand.n)?);
            let (passed, skipped) = match check_witness_with(&witness, &pair, opts) {
                Ok(report) => (report.passed(), false),
                Err(Error::BoxTooLarge { .. }) => (false, true),
                Err(e) => return Err(e),
            };
            let pass_finding = passed.then(|| ScanFinding {
                index,
                candidate: cand.n.clone(),
                reason: "check_witness passed".into(),
            });
            let corners = corner_system_check_all(&cand.n, r)?;
            let solvable: Vec<String> = corners
                .iter()
                .filter(|(_, _, ok)| *ok)
                .map(|(p, q, _)| format!("p={p:?} q={q:?}"))
                .collect();
            let corner_finding = (!solvable.is_empty()).then(|| ScanFinding {
                index,
                candidate: cand.n.clone(),
                reason: solvable.join("; "),
            });
            Ok((pass_finding, corner_finding, skipped))
        })
        .collect();
    let mut report = ScanReport {
        r,
        count,
        seed,
        passing_witnesses: Vec::new(),
        solvable_corner_systems: Vec::new(),
        skipped_checks: 0,
    };
    for res in results {
        let (pass, corner, skipped) = res?;
        report.passing_witnesses.extend(pass);
        report.solvable_corner_systems.extend(corner);
        report.skipped_checks += skipped as usize;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_matrix;
    use crate::goodpair::check_single;

    fn m(text: &str) -> Matrix {
        parse_matrix(text, 0).unwrap()
    }

    #[test]
    fn random_unimodular_examples() {
        assert!(random_unimodular(3, 1, 0, 2, 3).is_identity());
        for seed in 0..20 {
            let u = random_unimodular(3, seed, 6, 5, 4);
            assert!(u.det().abs().is_one());
        }
        let a = random_unimodular(2, 42, 6, 2, 3);
        let b = random_unimodular(2, 42, 6, 2, 3);
        assert_eq!(a, b);
        assert!(a.det().abs().is_one());
    }

    #[test]
    fn integral_generator_respects_bound() {
        let mut rng = rng_from_seed(9);
        for _ in 0..50 {
            let u = random_integral_unimodular(&mut rng, 4, 30, 5);
            assert!(u.is_unimodular_integral());
            assert!(u.entries().all(|x| x.abs() <= Scalar::from_int(5)));
        }
    }

    #[test]
    fn mc_examples() {
        let cfg = McConfig::new(200, 1, 97);
        let z2 = Lattice::standard(2);
        let id = WitnessCandidate::new(Matrix::identity(2));
        assert!(mc_tiling_check(&id, &z2, &cfg).unwrap().passed());
        let shear = WitnessCandidate::new(m("1,7/3;0,1"));
        assert!(mc_tiling_check(&shear, &z2, &cfg).unwrap().passed());
        let bad = WitnessCandidate::new(m("2,0;0,1/2"));
        let report = mc_tiling_check(&bad, &z2, &cfg).unwrap();
        assert_eq!(report.failed_condition, FailedCondition::TilingCount);
        let sample = report.sample.unwrap();
        assert_ne!(sample.ks.len(), 1);
        assert_eq!(tiling_count_at(&bad, &z2, &sample.x).unwrap().ks, sample.ks);
    }

    #[test]
    fn grid_covering_matches_scalar_covering() {
        let cases = [("1,1/2;0,1", "1,0;0,1"), ("2,0;0,1/2", "1,0;0,1"), ("0,1;1,5/3", "3/5,1;0,5/3")];
        let den = BigInt::from(7);
        for (w, b) in cases {
            let w = WitnessCandidate::new(m(w));
            let counter = TilingCounter::new(&w, &Lattice::new(m(b)).unwrap(), 1_000_000).unwrap();
            for a0 in -15..=15i64 {
                for a1 in [-14i64, -3, 0, 5, 13] {
                    let a = [BigInt::from(a0), BigInt::from(a1)];
                    let x = [Scalar::from_ratio(a0, 7), Scalar::from_ratio(a1, 7)];
                    assert_eq!(counter.covering_grid(&a, &den).unwrap(), counter.covering(&x).unwrap());
                }
            }
        }
    }

    #[test]
    fn overlap_point_is_covered_twice() {
        let z2 = Lattice::standard(2);
        let bad = WitnessCandidate::new(m("2,0;0,1/2"));
        let k = check_single(&bad, &z2).unwrap().counterexample.unwrap().k;
        let x = overlap_point(&bad, &z2, &k).unwrap();
        assert!(tiling_count_at(&bad, &z2, &x).unwrap().ks.len() >= 2);
    }

    #[test]
    fn corner_examples() {
        let n = random_unimodular(2, 3, 5, 2, 3);
        for c in [Corner::E1, Corner::E2] {
            let cs = CornerSystem::new(n.clone(), 2, c, c).unwrap();
            assert!(!corner_system_check(&cs).unwrap());
        }
        let case12 = parse_matrix("1,1/2;-2,0", 0).unwrap();
        let cs = CornerSystem::new(case12, 2, Corner::E1, Corner::E2).unwrap();
        assert!(!corner_system_check(&cs).unwrap());

        let contrast = m("2,0;0,1/2");
        let cs = CornerSystem::new(contrast.clone(), 4, Corner::E1, Corner::E2).unwrap();
        assert!(corner_system_check(&cs).unwrap());
        assert_eq!(
            CornerSystem::new_irrational(contrast, 4, Corner::E1, Corner::E2).unwrap_err(),
            Error::PerfectSquareRadicand(4)
        );
    }

    #[test]
    fn scan_rejects_perfect_squares() {
        assert_eq!(notgood_scan(9, 10, 1).unwrap_err(), Error::PerfectSquareRadicand(9));
        assert_eq!(notgood_scan(1, 10, 1).unwrap_err(), Error::PerfectSquareRadicand(1));
    }

    #[test]
    fn small_scan_is_clean() {
        let report = notgood_scan(2, 40, 7).unwrap();
        assert!(report.clean(), "{report:?}");
    }
}
