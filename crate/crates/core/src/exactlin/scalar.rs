//! Exact scalars in `Q` or a real quadratic field `Q(sqrt(r))`.
//!
//! A value is stored as `a + b*sqrt(r)` with rational `a`, `b` and a
//! square-free radicand `r`. Radicand `0` means a plain rational. A scalar with
//! a zero radical part is compatible with every radicand; combining two
//! scalars that carry different nonzero radicands is a programming error and
//! panics. Matrix-level constructors check radicands up front and return
//! [`Error::RadicandMismatch`](crate::Error::RadicandMismatch) instead.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Scalar {
    rational: BigRational,
    radical: BigRational,
    radicand: u64,
}

/// Splits `n` as `f^2 * s` with `s` square-free.
pub fn square_free_decomposition(n: u64) -> (u64, u64) {
    let mut square_root = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        while rest % (p * p) == 0 {
            rest /= p * p;
            square_root *= p;
        }
        p += 1;
    }
    (square_root, rest)
}

pub fn is_square_free(n: u64) -> bool {
    n != 0 && square_free_decomposition(n).0 == 1
}

pub fn is_perfect_square(n: u64) -> bool {
    let s = n.sqrt();
    s * s == n
}

fn join_radicands(r1: u64, r2: u64) -> u64 {
    match (r1, r2) {
        (0, r) | (r, 0) => r,
        (r, s) if r == s => r,
        (r, s) => panic!("mixed radicands {r} and {s} in one expression"),
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar {
            rational: q,
            radical: BigRational::zero(),
            radicand: 0,
        }
    }

    /// `a + b*sqrt(r)`. `r` must be 0 or square-free and at least 2.
    pub fn quadratic(a: BigRational, b: BigRational, r: u64) -> Result<Self> {
        if r == 0 {
            if !b.is_zero() {
                return Err(Error::InvalidArgument(
                    "radical part requires a nonzero radicand".into(),
                ));
            }
            return Ok(Self::from_rational(a));
        }
        if r == 1 || !is_square_free(r) {
            return Err(Error::RadicandNotSquareFree(r));
        }
        Ok(Scalar {
            rational: a,
            radical: b,
            radicand: r,
        })
    }

    /// `c * sqrt(n)` for any natural `n`, reduced to square-free form.
    pub fn scaled_sqrt(c: BigRational, n: u64) -> Self {
        let (f, s) = square_free_decomposition(n);
        let c = c * BigRational::from_integer(BigInt::from(f));
        if n == 0 {
            Self::zero()
        } else if s == 1 {
            Self::from_rational(c)
        } else {
            Scalar {
                rational: BigRational::zero(),
                radical: c,
                radicand: s,
            }
        }
    }

    pub fn sqrt_of(n: u64) -> Self {
        Self::scaled_sqrt(BigRational::one(), n)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.radical
    }

    /// Radicand of the field this value lives in (0 for plain rationals).
    pub fn radicand(&self) -> u64 {
        if self.radical.is_zero() {
            0
        } else {
            self.radicand
        }
    }

    /// Same value, tagged as an element of `Q(sqrt(r))`.
    pub fn in_field(mut self, r: u64) -> Self {
        if self.radical.is_zero() {
            self.radicand = r;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.radical.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rational.is_one() && self.radical.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radical.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.radical.is_zero() && self.rational.is_integer()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.rational.to_integer())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.rational.clone())
    }

    pub fn signum(&self) -> Ordering {
        let sa = sign_of(&self.rational);
        let sb = sign_of(&self.radical);
        match (sa, sb) {
            (s, Ordering::Equal) | (Ordering::Equal, s) => s,
            (a, b) if a == b => a,
            (sa, _) => {
                // opposite signs: compare a^2 with b^2 * r
                let a2 = &self.rational * &self.rational;
                let b2r = &self.radical
                    * &self.radical
                    * BigRational::from_integer(BigInt::from(self.radicand));
                match a2.cmp(&b2r) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn conjugate(&self) -> Self {
        Scalar {
            rational: self.rational.clone(),
            radical: -&self.radical,
            radicand: self.radicand,
        }
    }

    /// Field norm `a^2 - b^2 r`.
    pub fn norm(&self) -> BigRational {
        &self.rational * &self.rational
            - &self.radical * &self.radical * BigRational::from_integer(BigInt::from(self.radicand))
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conjugate();
        Some(Scalar {
            rational: c.rational / &n,
            radical: c.radical / n,
            radicand: self.radicand,
        })
    }

    /// Rational upper bound on `|self|`: `|a| + |b| * (isqrt(r) + 1)`.
    pub fn abs_upper_bound(&self) -> BigRational {
        let mut ub = self.rational.abs();
        if !self.radical.is_zero() {
            let root = BigInt::from(self.radicand.sqrt() + 1);
            ub += self.radical.abs() * BigRational::from_integer(root);
        }
        ub
    }

    pub fn floor(&self) -> BigInt {
        if self.radical.is_zero() {
            return self.rational.floor().to_integer();
        }
        // floor(a) + floor(b sqrt r) is floor(self) or floor(self) - 1
        let b2r = &self.radical
            * &self.radical
            * BigRational::from_integer(BigInt::from(self.radicand));
        let root_floor: BigInt = b2r.floor().to_integer().sqrt();
        let radical_floor = if self.radical.is_positive() {
            root_floor
        } else {
            // b sqrt r is irrational, so its ceiling is one above the floor of its magnitude
            -(root_floor + 1u32)
        };
        let candidate: BigInt = self.rational.floor().to_integer() + radical_floor + 1u32;
        if Scalar::from_bigint(candidate.clone()) <= *self {
            candidate
        } else {
            candidate - 1
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        if self.radical.is_zero() {
            return a;
        }
        let b = self.radical.to_f64().unwrap_or(f64::NAN);
        a + b * (self.radicand as f64).sqrt()
    }

    fn combine(&self, other: &Self) -> u64 {
        join_radicands(self.radicand(), other.radicand())
    }
}

fn sign_of(q: &BigRational) -> Ordering {
    match q.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.rational == other.rational
            && self.radical == other.radical
            && (self.radical.is_zero() || self.radicand == other.radicand)
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            rational: -&self.rational,
            radical: -&self.radical,
            radicand: self.radicand,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let r = self.combine(rhs);
        Scalar {
            rational: &self.rational + &rhs.rational,
            radical: &self.radical + &rhs.radical,
            radicand: r,
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let r = self.combine(rhs);
        Scalar {
            rational: &self.rational - &rhs.rational,
            radical: &self.radical - &rhs.radical,
            radicand: r,
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let r = self.combine(rhs);
        if self.radical.is_zero() && rhs.radical.is_zero() {
            return Scalar {
                rational: &self.rational * &rhs.rational,
                radical: BigRational::zero(),
                radicand: r,
            };
        }
        let rr = BigRational::from_integer(BigInt::from(r));
        Scalar {
            rational: &self.rational * &rhs.rational + &self.radical * &rhs.radical * rr,
            radical: &self.rational * &rhs.radical + &self.radical * &rhs.rational,
            radicand: r,
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.recip().expect("division by zero scalar");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radical.is_zero() {
            return f.write_str(&fmt_rational(&self.rational));
        }
        let mut out = String::new();
        let coef = self.radical.abs();
        let neg = self.radical.is_negative();
        if !self.rational.is_zero() {
            out.push_str(&fmt_rational(&self.rational));
            out.push(if neg { '-' } else { '+' });
        } else if neg {
            out.push('-');
        }
        if !coef.is_one() {
            out.push_str(&fmt_rational(&coef));
            out.push('*');
        }
        out.push_str(&format!("sqrt({})", self.radicand));
        f.write_str(&out)
    }
}

fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("bad integer {num:?}"))?;
    let den = BigInt::from_str(den).map_err(|_| format!("bad integer {den:?}"))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(num, den))
}

impl FromStr for Scalar {
    type Err = String;

    /// Accepts `a`, `a/b`, `c*sqrt(n)`, `a/b+c/d*sqrt(n)` and similar; whitespace is ignored.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err("empty scalar".into());
        }
        let Some(pos) = text.find("sqrt(") else {
            return parse_rational(&text).map(Scalar::from_rational);
        };
        let close = text[pos..]
            .find(')')
            .map(|i| i + pos)
            .ok_or_else(|| "unclosed sqrt(".to_string())?;
        if close + 1 != text.len() {
            return Err(format!("unexpected trailing text {:?}", &text[close + 1..]));
        }
        let n: u64 = text[pos + 5..close]
            .parse()
            .map_err(|_| format!("bad radicand {:?}", &text[pos + 5..close]))?;
        let head = &text[..pos];
        let split = head
            .char_indices()
            .rev()
            .find(|&(i, c)| (c == '+' || c == '-') && i > 0)
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (rational_text, coef_text) = head.split_at(split);
        let coef_text = coef_text.strip_suffix('*').unwrap_or(coef_text);
        let coef = match coef_text {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t.strip_prefix('+').unwrap_or(t))?,
        };
        let rational = if rational_text.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(rational_text)?
        };
        Ok(Scalar::from_rational(rational) + Scalar::scaled_sqrt(coef, n))
    }
}
