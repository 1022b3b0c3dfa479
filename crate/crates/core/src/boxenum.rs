//! Exact enumeration of lattice points inside parallelepipeds.
//!
//! The basic question is: which integer vectors `k` satisfy `G k ∈ R`, where
//! `G` is a nonsingular matrix and `R` a product of intervals? Two exact
//! back ends answer it and always return the same set, sorted
//! lexicographically:
//!
//! * a bounding-box scan, valid over any scalar field, which walks every cell
//!   of a box that provably contains all solutions and filters exactly;
//! * for rational input, a depth-first search over a triangular (Hermite)
//!   basis of `G Z^d`, which visits only partial solutions.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{hnf_int, IntVector, Matrix, Scalar};
use crate::lattice::Lattice;

pub const DEFAULT_MAX_CELLS: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// `N(-1,1)^d`
    OpenPm1,
    /// `N[-1,1]^d`
    ClosedPm1,
    /// `N[0,1)^d`
    HalfOpen01,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parallelepiped {
    n: Matrix,
    topology: Topology,
}

impl Parallelepiped {
    pub fn new(n: Matrix, topology: Topology) -> Result<Self> {
        if n.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Parallelepiped { n, topology })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.n
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn region(&self) -> Vec<Interval> {
        let iv = match self.topology {
            Topology::OpenPm1 => Interval::open(Scalar::from_int(-1), Scalar::one()),
            Topology::ClosedPm1 => Interval::closed(Scalar::from_int(-1), Scalar::one()),
            Topology::HalfOpen01 => Interval::closed_open(Scalar::zero(), Scalar::one()),
        };
        vec![iv; self.n.dim()]
    }
}

/// Interval of the real line with exact endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Scalar,
    pub hi: Scalar,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn open(lo: Scalar, hi: Scalar) -> Self {
        Interval { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn closed(lo: Scalar, hi: Scalar) -> Self {
        Interval { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn closed_open(lo: Scalar, hi: Scalar) -> Self {
        Interval { lo, hi, lo_closed: true, hi_closed: false }
    }

    pub fn open_closed(lo: Scalar, hi: Scalar) -> Self {
        Interval { lo, hi, lo_closed: false, hi_closed: true }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        above
            && match x.cmp(&self.hi) {
                Ordering::Less => true,
                Ordering::Equal => self.hi_closed,
                Ordering::Greater => false,
            }
    }

    fn is_rational(&self) -> bool {
        self.lo.is_rational() && self.hi.is_rational()
    }

    /// Integer range `[a, b]` of `t` with `offset + slope * t` in the interval.
    /// `slope` must be nonzero. Returns `None` for an empty range.
    fn integer_range(&self, offset: &Scalar, slope: &Scalar) -> Option<(BigInt, BigInt)> {
        let inv = slope.recip().expect("nonzero slope");
        let a = (&self.lo - offset) * &inv;
        let b = (&self.hi - offset) * &inv;
        let (lo, lo_closed, hi, hi_closed) = if slope.is_positive() {
            (a, self.lo_closed, b, self.hi_closed)
        } else {
            (b, self.hi_closed, a, self.lo_closed)
        };
        let mut first = lo.ceil();
        if !lo_closed && Scalar::from_bigint(first.clone()) == lo {
            first += 1;
        }
        let mut last = hi.floor();
        if !hi_closed && Scalar::from_bigint(last.clone()) == hi {
            last -= 1;
        }
        (first <= last).then_some((first, last))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationResult {
    pub points: Vec<IntVector>,
    #[serde(serialize_with = "ser_images")]
    pub images: Vec<Vec<Scalar>>,
    pub truncated: bool,
}

fn ser_images<S: serde::Serializer>(
    images: &[Vec<Scalar>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = images
        .iter()
        .map(|v| v.iter().map(|x| x.to_string()).collect())
        .collect();
    serde::Serialize::serialize(&strings, s)
}

/// Is `v` inside the parallelepiped? Exact.
pub fn membership(v: &[Scalar], bx: &Parallelepiped) -> Result<bool> {
    let coords = bx.n.inverse()?.mul_vec(v)?;
    Ok(coords.iter().zip(bx.region()).all(|(x, iv)| iv.contains(x)))
}

/// Per-coordinate bounds `L_i` such that every integer `k` with
/// `b k ∈ (-1,1)^d` (or `[-1,1]^d`) has `|k_i| <= L_i`:
/// `L_i = ceil(ub(sum_j |b^-1_ij|))`.
pub fn integer_bounding_box(b: &Matrix) -> Result<Vec<BigInt>> {
    let inv = b.inverse()?;
    Ok((0..inv.dim())
        .map(|i| {
            let sum: BigRational = inv.row(i).iter().map(Scalar::abs_upper_bound).sum();
            sum.ceil().to_integer()
        })
        .collect())
}

/// All `k ∈ Z^d` with `latt.basis * k` in the box, sorted lexicographically.
pub fn enumerate(latt: &Lattice, bx: &Parallelepiped) -> Result<EnumerationResult> {
    enumerate_with_limit(latt, bx, DEFAULT_MAX_CELLS)
}

pub fn enumerate_with_limit(
    latt: &Lattice,
    bx: &Parallelepiped,
    max_cells: u64,
) -> Result<EnumerationResult> {
    let g = bx.n.inverse()?.mat_mul(latt.basis())?;
    let region = bx.region();
    let points = if is_rational_problem(&g, &region) {
        TriangularSearch::new(&g)?.solve(&region, max_cells)?
    } else {
        let bounds = match bx.topology {
            Topology::HalfOpen01 => exact_box(&g, &region)?,
            _ => integer_bounding_box(&g)?
                .into_iter()
                .map(|l| (-&l, l))
                .collect(),
        };
        scan(&g, &region, &bounds, max_cells)?
    };
    let images = points
        .iter()
        .map(|k| latt.basis().mul_int_vec(k))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnumerationResult { points, images, truncated: false })
}

/// All `k ∈ Z^d` with `(g k)_i ∈ region[i]` for every `i`, sorted lexicographically.
pub fn solve_region(g: &Matrix, region: &[Interval], max_cells: u64) -> Result<Vec<IntVector>> {
    if region.len() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: region.len() });
    }
    if is_rational_problem(g, region) {
        TriangularSearch::new(g)?.solve(region, max_cells)
    } else {
        let bounds = exact_box(g, region)?;
        scan(g, region, &bounds, max_cells)
    }
}

/// Same as [`solve_region`] but always uses the bounding-box scan.
pub fn solve_region_by_scan(
    g: &Matrix,
    region: &[Interval],
    max_cells: u64,
) -> Result<Vec<IntVector>> {
    let bounds = exact_box(g, region)?;
    scan(g, region, &bounds, max_cells)
}

fn is_rational_problem(g: &Matrix, region: &[Interval]) -> bool {
    g.is_rational() && region.iter().all(Interval::is_rational)
}

/// Tight integer box containing `g^-1(region)`: with centre `c` and
/// half-widths `w`, `k_j ∈ [floor(t_j - s_j), ceil(t_j + s_j)]` for
/// `t = g^-1 c` and `s_j = sum_i |g^-1_ji| w_i`.
fn exact_box(g: &Matrix, region: &[Interval]) -> Result<Vec<(BigInt, BigInt)>> {
    let inv = g.inverse()?;
    let half = Scalar::from_ratio(1, 2);
    let centre: Vec<Scalar> = region.iter().map(|iv| (&iv.lo + &iv.hi) * &half).collect();
    let widths: Vec<Scalar> = region.iter().map(|iv| (&iv.hi - &iv.lo) * &half).collect();
    let t = inv.mul_vec(&centre)?;
    Ok((0..inv.dim())
        .map(|j| {
            let s: Scalar = inv
                .row(j)
                .iter()
                .zip(&widths)
                .map(|(a, w)| a.abs() * w)
                .sum();
            ((&t[j] - &s).floor(), (&t[j] + &s).ceil())
        })
        .collect())
}

fn cell_count(bounds: &[(BigInt, BigInt)]) -> BigInt {
    bounds
        .iter()
        .map(|(lo, hi)| (hi - lo + 1u32).max(BigInt::zero()))
        .product()
}

/// Lexicographic scan of the box; the last coordinate is solved exactly from
/// the interval constraints instead of being walked.
fn scan(
    g: &Matrix,
    region: &[Interval],
    bounds: &[(BigInt, BigInt)],
    max_cells: u64,
) -> Result<Vec<IntVector>> {
    let d = g.dim();
    let cells = cell_count(bounds);
    if cells > BigInt::from(max_cells) {
        return Err(Error::BoxTooLarge { cells: cells.to_string(), limit: max_cells });
    }
    if bounds.iter().any(|(lo, hi)| lo > hi) {
        return Ok(Vec::new());
    }
    let columns: Vec<Vec<Scalar>> = (0..d).map(|j| g.column(j)).collect();
    let last = d - 1;
    let mut out = Vec::new();
    let mut k: Vec<BigInt> = bounds.iter().map(|(lo, _)| lo.clone()).collect();
    loop {
        // partial image from the leading d-1 coordinates
        let mut partial = vec![Scalar::zero(); d];
        for (j, col) in columns.iter().enumerate().take(last) {
            if k[j].is_zero() {
                continue;
            }
            let kj = Scalar::from_bigint(k[j].clone());
            for (p, c) in partial.iter_mut().zip(col) {
                if !c.is_zero() {
                    *p = &*p + &(c * &kj);
                }
            }
        }
        let (mut first, mut end) = bounds[last].clone();
        let mut feasible = true;
        for i in 0..d {
            let slope = &columns[last][i];
            if slope.is_zero() {
                if !region[i].contains(&partial[i]) {
                    feasible = false;
                    break;
                }
                continue;
            }
            match region[i].integer_range(&partial[i], slope) {
                Some((a, b)) => {
                    first = first.max(a);
                    end = end.min(b);
                }
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if feasible {
            let mut t = first;
            while t <= end {
                let ts = Scalar::from_bigint(t.clone());
                let inside = (0..d).all(|i| {
                    let y = &partial[i] + &(&columns[last][i] * &ts);
                    region[i].contains(&y)
                });
                if inside {
                    let mut point = k.clone();
                    point[last] = t.clone();
                    out.push(IntVector(point));
                }
                t += 1;
            }
        }
        // advance the odometer over coordinates 0..last
        let mut idx = last;
        loop {
            if idx == 0 {
                return Ok(out);
            }
            idx -= 1;
            if k[idx] < bounds[idx].1 {
                k[idx] += 1;
                break;
            }
            k[idx] = bounds[idx].0.clone();
        }
    }
}

/// Triangular basis of the rational lattice `G Z^d` for one coordinate order.
struct TriangularBasis {
    /// Coordinate visited at each level.
    order: Vec<usize>,
    /// Lower-triangular `H` with `P (D G) U = H`, `P` the row permutation for `order`.
    h: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
}

impl TriangularBasis {
    fn new(g_int: &[Vec<BigInt>], order: Vec<usize>) -> Result<Self> {
        let permuted: Vec<Vec<BigInt>> = order.iter().map(|&i| g_int[i].clone()).collect();
        let (h, u) = hnf_int(&permuted)?;
        Ok(TriangularBasis { order, h, u })
    }

    /// Rough node count of the search for a region of width 2 per coordinate.
    fn cost(&self, denominator: &BigInt) -> f64 {
        let den = denominator.to_f64().unwrap_or(f64::MAX);
        let mut total = 0.0;
        let mut level = 1.0;
        for i in 0..self.h.len() {
            let diag = self.h[i][i].to_f64().unwrap_or(f64::MAX);
            level *= 2.0 * den / diag + 1.0;
            total += level;
        }
        total
    }
}

/// Depth-first enumeration over a Hermite basis, rational input only.
pub(crate) struct TriangularSearch {
    denominator: BigInt,
    basis: TriangularBasis,
}

impl TriangularSearch {
    pub(crate) fn new(g: &Matrix) -> Result<Self> {
        let d = g.dim();
        let denominator = g.common_denominator().ok_or(Error::InvalidArgument(
            "triangular search needs a rational matrix".into(),
        ))?;
        let g_int: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                g.row(i)
                    .iter()
                    .map(|x| {
                        let q = x.to_rational().expect("rational") * &denominator;
                        q.to_integer()
                    })
                    .collect()
            })
            .collect();
        let forward = TriangularBasis::new(&g_int, (0..d).collect())?;
        let backward = TriangularBasis::new(&g_int, (0..d).rev().collect())?;
        let basis = if backward.cost(&denominator) < forward.cost(&denominator) {
            backward
        } else {
            forward
        };
        Ok(TriangularSearch { denominator, basis })
    }

    pub(crate) fn solve(&self, region: &[Interval], max_nodes: u64) -> Result<Vec<IntVector>> {
        let den = BigRational::from_integer(self.denominator.clone());
        let bounds: Vec<LevelBounds> = self
            .basis
            .order
            .iter()
            .map(|&i| {
                let iv = &region[i];
                let lo = iv.lo.to_rational().expect("rational") * &den;
                let hi = iv.hi.to_rational().expect("rational") * &den;
                LevelBounds {
                    lo: (lo.numer().clone(), lo.denom().clone(), iv.lo_closed),
                    hi: (hi.numer().clone(), hi.denom().clone(), iv.hi_closed),
                }
            })
            .collect();
        self.run(&bounds, max_nodes)
    }

    /// Same as [`solve`](Self::solve) for the box with ends `lo_i / den` and
    /// `hi_i / den`, `den > 0`, all sharing the same topology.
    pub(crate) fn solve_common(
        &self,
        lo: &[BigInt],
        hi: &[BigInt],
        den: &BigInt,
        closed: (bool, bool),
        max_nodes: u64,
    ) -> Result<Vec<IntVector>> {
        let bounds: Vec<LevelBounds> = self
            .basis
            .order
            .iter()
            .map(|&i| LevelBounds {
                lo: (&lo[i] * &self.denominator, den.clone(), closed.0),
                hi: (&hi[i] * &self.denominator, den.clone(), closed.1),
            })
            .collect();
        self.run(&bounds, max_nodes)
    }

    fn run(&self, bounds: &[LevelBounds], max_nodes: u64) -> Result<Vec<IntVector>> {
        let mut out = Vec::new();
        let mut nodes = 0u64;
        let mut c = vec![BigInt::zero(); self.basis.h.len()];
        self.descend(0, bounds, &mut c, &mut nodes, max_nodes, &mut out)?;
        out.sort();
        Ok(out)
    }

    fn descend(
        &self,
        level: usize,
        bounds: &[LevelBounds],
        c: &mut Vec<BigInt>,
        nodes: &mut u64,
        max_nodes: u64,
        out: &mut Vec<IntVector>,
    ) -> Result<()> {
        let d = c.len();
        if level == d {
            let k = self
                .basis
                .u
                .iter()
                .map(|row| row.iter().zip(c.iter()).map(|(a, b)| a * b).sum())
                .collect();
            out.push(IntVector(k));
            return Ok(());
        }
        let h = &self.basis.h[level];
        let partial: BigInt = (0..level).map(|j| &h[j] * &c[j]).sum();
        let diag = &h[level];
        // t ranges over (lo - partial) / diag .. (hi - partial) / diag, diag > 0
        let (p, q, lo_closed) = &bounds[level].lo;
        let num = p - &partial * q;
        let dq = diag * q;
        let (mut first, rem) = num.div_mod_floor(&dq);
        if !rem.is_zero() || !lo_closed {
            first += 1;
        }
        let (p, q, hi_closed) = &bounds[level].hi;
        let num = p - &partial * q;
        let dq = diag * q;
        let (mut last, rem) = num.div_mod_floor(&dq);
        if rem.is_zero() && !hi_closed {
            last -= 1;
        }
        let mut t = first;
        while t <= last {
            *nodes += 1;
            if *nodes > max_nodes {
                return Err(Error::BoxTooLarge {
                    cells: format!(">{max_nodes} search nodes"),
                    limit: max_nodes,
                });
            }
            c[level] = t.clone();
            self.descend(level + 1, bounds, c, nodes, max_nodes, out)?;
            t += 1;
        }
        c[level] = BigInt::zero();
        Ok(())
    }
}

/// Scaled interval ends `(numerator, positive denominator, closed)`.
struct LevelBounds {
    lo: (BigInt, BigInt, bool),
    hi: (BigInt, BigInt, bool),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_matrix;

    fn m(text: &str) -> Matrix {
        parse_matrix(text, 0).unwrap()
    }

    fn pts(v: &[&[i64]]) -> Vec<IntVector> {
        v.iter().map(|x| IntVector::from_i64s(x)).collect()
    }

    #[test]
    fn membership_examples() {
        let open = Parallelepiped::new(Matrix::identity(2), Topology::OpenPm1).unwrap();
        assert!(membership(&[Scalar::zero(), Scalar::zero()], &open).unwrap());
        assert!(!membership(&[Scalar::one(), Scalar::zero()], &open).unwrap());
        let open2 = Parallelepiped::new(Matrix::identity(2).in_field(2).unwrap(), Topology::OpenPm1)
            .unwrap();
        let v = vec![Scalar::zero(), "1/2*sqrt(2)".parse().unwrap()];
        assert!(membership(&v, &open2).unwrap());
        assert!(matches!(
            membership(&[Scalar::zero()], &open),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bounding_box_examples() {
        let one = BigInt::from(1);
        assert_eq!(integer_bounding_box(&Matrix::identity(3)).unwrap(), vec![one.clone(); 3]);
        assert_eq!(
            integer_bounding_box(&m("1/2,0;0,2")).unwrap(),
            vec![BigInt::from(2), BigInt::from(1)]
        );
        let r_inv = parse_matrix("1/2*sqrt(2),0;0,sqrt(2)", 2).unwrap();
        assert_eq!(
            integer_bounding_box(&r_inv).unwrap(),
            vec![BigInt::from(2), BigInt::from(1)]
        );
        assert_eq!(integer_bounding_box(&m("1,1;1,1")), Err(Error::SingularMatrix));
    }

    #[test]
    fn enumerate_examples() {
        let z2 = Lattice::standard(2);
        let shear = Parallelepiped::new(m("1,7/3;0,1"), Topology::OpenPm1).unwrap();
        assert_eq!(enumerate(&z2, &shear).unwrap().points, pts(&[&[0, 0]]));

        let diag = Parallelepiped::new(m("2,0;0,1/2"), Topology::OpenPm1).unwrap();
        let res = enumerate(&z2, &diag).unwrap();
        assert_eq!(res.points, pts(&[&[-1, 0], &[0, 0], &[1, 0]]));
        assert_eq!(res.images[2], vec![Scalar::one(), Scalar::zero()]);

        let closed = Parallelepiped::new(Matrix::identity(2), Topology::ClosedPm1).unwrap();
        let res = enumerate(&z2, &closed).unwrap();
        assert_eq!(res.points.len(), 9);
        assert!(res.points.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumerate_over_quadratic_field() {
        let z2 = Lattice::standard(2);
        let r = crate::exactlin::r_matrix(2).inverse().unwrap();
        let bx = Parallelepiped::new(r, Topology::OpenPm1).unwrap();
        let res = enumerate(&z2, &bx).unwrap();
        assert_eq!(res.points, pts(&[&[0, -1], &[0, 0], &[0, 1]]));
    }

    #[test]
    fn half_open_box_counts_translates() {
        let z2 = Lattice::standard(2);
        let bx = Parallelepiped::new(m("2,0;0,1/2"), Topology::HalfOpen01).unwrap();
        // k with k ∈ [0,2) x [0,1/2)
        assert_eq!(enumerate(&z2, &bx).unwrap().points, pts(&[&[0, 0], &[1, 0]]));
    }

    #[test]
    fn box_too_large_is_reported() {
        let z2 = Lattice::standard(2);
        let bx = Parallelepiped::new(m("1000,0;0,1/1000"), Topology::OpenPm1).unwrap();
        assert!(matches!(
            enumerate_with_limit(&z2, &bx, 100),
            Err(Error::BoxTooLarge { .. })
        ));
        let g = m("1/1000,0;0,1000");
        let region = Parallelepiped::new(Matrix::identity(2), Topology::OpenPm1)
            .unwrap()
            .region();
        assert!(matches!(
            solve_region_by_scan(&g, &region, 100),
            Err(Error::BoxTooLarge { .. })
        ));
    }

    #[test]
    fn interval_integer_ranges() {
        let iv = Interval::open(Scalar::from_int(-1), Scalar::one());
        assert_eq!(
            iv.integer_range(&Scalar::zero(), &Scalar::from_ratio(1, 2)),
            Some((BigInt::from(-1), BigInt::from(1)))
        );
        assert_eq!(
            iv.integer_range(&Scalar::zero(), &Scalar::from_int(-1)),
            Some((BigInt::zero(), BigInt::zero()))
        );
        assert_eq!(iv.integer_range(&Scalar::from_ratio(1, 2), &Scalar::from_int(3)), Some((BigInt::zero(), BigInt::zero())));
        let closed = Interval::closed(Scalar::from_int(-1), Scalar::one());
        assert_eq!(
            closed.integer_range(&Scalar::zero(), &Scalar::from_int(-1)),
            Some((BigInt::from(-1), BigInt::from(1)))
        );
    }
}
