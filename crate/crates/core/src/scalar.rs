//! Scalar rings used as chain coefficients: arbitrary-precision integers and
//! rationals (exact) and `f64` (tolerance based).

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeff::{Coefficient, ModuleKind};
use crate::linalg::{self, Matrix};

pub type Integer = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalarKind {
    Integer,
    Rational,
    Real64,
}

/// A commutative ring with unity usable as a coefficient ring.
pub trait Scalar: Coefficient {
    const KIND: ScalarKind;
    /// Field of fractions used for exact solves (`f64` is its own "field").
    type Field: FieldScalar;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_integer(v: &Integer) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    fn to_field(&self) -> Self::Field;
    /// Exact kinds ignore the tolerance.
    fn is_exact() -> bool {
        Self::KIND != ScalarKind::Real64
    }
}

/// Scalars that admit division, plus the dense solvers built on them.
pub trait FieldScalar: Scalar<Field = Self> {
    fn div(&self, other: &Self) -> Self;
    fn from_f64(v: f64) -> Self;
    fn solve(a: &Matrix<Self>, b: &[Self], tol: f64) -> Option<Vec<Self>>;
    /// Kernel basis, normalized (integral with unit content for exact kinds,
    /// unit max-norm for `f64`), first nonzero entry positive.
    fn nullspace(a: &Matrix<Self>, tol: f64) -> Vec<Vec<Self>>;
    fn rank(a: &Matrix<Self>, tol: f64) -> usize;
}

impl Coefficient for Integer {
    fn kind(&self) -> ModuleKind {
        ModuleKind::Integer
    }
    fn zero_of(_kind: &ModuleKind) -> Self {
        <BigInt as Zero>::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn scale_int(&self, m: &Integer) -> Self {
        self * m
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }
    fn max_norm(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }
}

impl Scalar for Integer {
    const KIND: ScalarKind = ScalarKind::Integer;
    type Field = Rational;

    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        <BigInt as One>::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_integer(v: &Integer) -> Self {
        v.clone()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_field(&self) -> Rational {
        Rational::from_integer(self.clone())
    }
}

impl Coefficient for Rational {
    fn kind(&self) -> ModuleKind {
        ModuleKind::Rational
    }
    fn zero_of(_kind: &ModuleKind) -> Self {
        <Rational as Zero>::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn scale_int(&self, m: &Integer) -> Self {
        self * Rational::from_integer(m.clone())
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }
    fn max_norm(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;
    type Field = Rational;

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_integer(v: &Integer) -> Self {
        Rational::from_integer(v.clone())
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        // Ratio::to_f64 handles huge numerators and denominators correctly.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_field(&self) -> Rational {
        self.clone()
    }
}

impl FieldScalar for Rational {
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).unwrap_or_else(<Rational as Zero>::zero)
    }
    fn solve(a: &Matrix<Self>, b: &[Self], _tol: f64) -> Option<Vec<Self>> {
        linalg::solve_rational(a, b)
    }
    fn nullspace(a: &Matrix<Self>, _tol: f64) -> Vec<Vec<Self>> {
        linalg::nullspace_rational(a)
            .into_iter()
            .map(|v| v.into_iter().map(Rational::from_integer).collect())
            .collect()
    }
    fn rank(a: &Matrix<Self>, _tol: f64) -> usize {
        linalg::rank_rational(a)
    }
}

impl Coefficient for f64 {
    fn kind(&self) -> ModuleKind {
        ModuleKind::Real64
    }
    fn zero_of(_kind: &ModuleKind) -> Self {
        0.0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn scale_int(&self, m: &Integer) -> Self {
        self * Scalar::to_f64(m)
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn max_norm(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Real64;
    type Field = f64;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_integer(v: &Integer) -> Self {
        Scalar::to_f64(v)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_field(&self) -> f64 {
        *self
    }
}

impl FieldScalar for f64 {
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn solve(a: &Matrix<Self>, b: &[Self], tol: f64) -> Option<Vec<Self>> {
        linalg::solve_f64(a, b, tol)
    }
    fn nullspace(a: &Matrix<Self>, tol: f64) -> Vec<Vec<Self>> {
        linalg::nullspace_f64(a, tol)
    }
    fn rank(a: &Matrix<Self>, tol: f64) -> usize {
        linalg::rank_f64(a, tol)
    }
}

/// `x - y` for any scalar.
pub fn sub<S: Scalar>(x: &S, y: &S) -> S {
    x.plus(&y.negate())
}

/// Parses `"p/q"`, `"p"` or a decimal such as `"-1.25e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if Zero::is_zero(&q) {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut all = alloc::string::String::from(int_part);
    all.push_str(frac_part);
    let mut numer: BigInt = if all.is_empty() { <BigInt as Zero>::zero() } else { all.parse().ok()? };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}
