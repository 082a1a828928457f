//! Exact rational arithmetic, dense rational matrices and determinants.
//!
//! [`Rational`] is always kept in lowest terms with a positive denominator so
//! that equality is structural. Determinants of size at most 4 use cofactor
//! expansion; larger ones clear denominators and run Bareiss elimination over
//! the integers.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Commutative ring operations shared by every coefficient carrier in the crate.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn from_i64(v: i64) -> Self {
        let mut acc = Self::zero();
        let unit = if v < 0 { Self::one().neg() } else { Self::one() };
        for _ in 0..v.unsigned_abs() {
            acc = acc.add(&unit);
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    /// Integer power; `None` when a negative power of zero is requested.
    fn powi(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut sq = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Some(acc)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let d = denom.into();
        if d.is_zero() {
            return Err(Error::Arithmetic("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer.into(), d)))
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_int(v)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                Rational::new(p, q)
            }
            None => Ok(Rational::from_int(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($tr::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rational {
    type Output = Rational;
    /// Panics on division by zero, like the primitive numeric types.
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
    fn from_i64(v: i64) -> Self {
        Rational::from(v)
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(RationalMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect())
    }

    /// Builds an `m x n` matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Rational>]) -> Result<Self> {
        let n = columns.len();
        let m = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != m) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        let mut out = Self::zeros(m, n);
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                out.set(i, j, v.clone());
            }
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[Rational]>::to_vec).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> RationalMatrix {
        let cols: Vec<Vec<Rational>> = idx.iter().map(|&j| self.column(j)).collect();
        let mut out = Self::zeros(self.rows, idx.len());
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += &(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn det(&self) -> Result<Rational> {
        det(self)
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        let k = self.rows;
        if self.cols != k || b.len() != k {
            return Err(Error::Dimension("solve needs a square system".into()));
        }
        let mut a: Vec<Vec<Rational>> = self.row_vecs();
        for (row, rhs) in a.iter_mut().zip(b) {
            row.push(rhs.clone());
        }
        for col in 0..k {
            let pivot = (col..k)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| Error::Degenerate("singular matrix".into()))?;
            a.swap(col, pivot);
            let inv = a[col][col].recip().expect("nonzero pivot");
            for v in a[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..k {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in col..=k {
                        let t = &factor * &a[col][c];
                        a[r][c] -= &t;
                    }
                }
            }
        }
        Ok(a.into_iter().map(|mut row| row.pop().expect("augmented column")).collect())
    }

    /// Inverse of a square nonsingular matrix.
    pub fn inverse(&self) -> Result<RationalMatrix> {
        let k = self.rows;
        if self.cols != k {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let mut cols = Vec::with_capacity(k);
        for j in 0..k {
            let mut e = vec![Rational::zero(); k];
            e[j] = Rational::one();
            cols.push(self.solve(&e)?);
        }
        RationalMatrix::from_columns(&cols)
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_vecs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<Rational>> = Vec::deserialize(d)?;
        RationalMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Determinant by cofactor expansion along the first column; generic over the ring.
pub fn det_cofactor<R: Ring>(rows: &[Vec<R>]) -> R {
    let k = rows.len();
    match k {
        0 => R::one(),
        1 => rows[0][0].clone(),
        2 => rows[0][0].mul(&rows[1][1]).sub(&rows[0][1].mul(&rows[1][0])),
        _ => {
            let mut acc = R::zero();
            for i in 0..k {
                if rows[i][0].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<R>> = rows
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r != i)
                    .map(|(_, row)| row[1..].to_vec())
                    .collect();
                let term = rows[i][0].mul(&det_cofactor(&minor));
                acc = if i % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Fraction-free Gaussian elimination over the integers.
pub fn det_bareiss(rows: &[Vec<BigInt>]) -> BigInt {
    let k = rows.len();
    if k == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for c in 0..k - 1 {
        if a[c][c].is_zero() {
            match (c + 1..k).find(|&r| !a[r][c].is_zero()) {
                Some(r) => {
                    a.swap(c, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in c + 1..k {
            for j in c + 1..k {
                let v = &a[i][j] * &a[c][c] - &a[i][c] * &a[c][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[c][c].clone();
    }
    sign * &a[k - 1][k - 1]
}

pub fn det(m: &RationalMatrix) -> Result<Rational> {
    if m.rows != m.cols {
        return Err(Error::Dimension(format!("determinant of {}x{} matrix", m.rows, m.cols)));
    }
    if m.rows == 0 {
        return Err(Error::Dimension("determinant of empty matrix".into()));
    }
    if m.rows <= 4 {
        return Ok(det_cofactor(&m.row_vecs()));
    }
    // Scale every row to integers, eliminate, then undo the scaling.
    let mut scale = BigInt::one();
    let int_rows: Vec<Vec<BigInt>> = m
        .row_vecs()
        .into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &l;
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    Rational::new(det_bareiss(&int_rows), scale)
}

/// The covector `w -> det[w | vs]` of `m - 1` vectors in `Q^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Covector {
    pub coeffs: Vec<Rational>,
    /// Set when the input vectors are linearly dependent (the covector is then zero).
    pub degenerate: bool,
}

impl Covector {
    pub fn apply(&self, w: &[Rational]) -> Rational {
        self.coeffs.iter().zip(w).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }
}

/// Cofactor expansion along the first column: `xi_k = (-1)^(k+1) det(minor_k)`.
pub fn xi_covector(vs: &[Vec<Rational>]) -> Result<Covector> {
    let m = vs.len() + 1;
    if vs.iter().any(|v| v.len() != m) {
        return Err(Error::Dimension(format!("expected {} vectors of length {}", m - 1, m)));
    }
    let mut coeffs = Vec::with_capacity(m);
    for k in 0..m {
        let minor: Vec<Vec<Rational>> = (0..m)
            .filter(|&r| r != k)
            .map(|r| vs.iter().map(|v| v[r].clone()).collect())
            .collect();
        let d = if m == 1 { Rational::one() } else { det_cofactor_or_bareiss(&minor) };
        coeffs.push(if k % 2 == 0 { d } else { -d });
    }
    let degenerate = coeffs.iter().all(Ring::is_zero);
    Ok(Covector { coeffs, degenerate })
}

fn det_cofactor_or_bareiss(rows: &[Vec<Rational>]) -> Rational {
    let m = RationalMatrix::from_rows(rows.to_vec()).expect("square minor");
    det(&m).expect("square minor")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d).unwrap()
    }

    fn mat(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn normalized_representation() {
        let a = q(6, -4);
        assert_eq!(a.numer(), &BigInt::from(-3));
        assert_eq!(a.denom(), &BigInt::from(2));
        assert_eq!(q(0, 7), Rational::zero());
        assert_eq!(Rational::zero().denom(), &BigInt::from(1));
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn string_form() {
        assert_eq!(q(3, 1).to_string(), "3");
        assert_eq!(q(-7, 2).to_string(), "-7/2");
        assert_eq!("-14/4".parse::<Rational>().unwrap(), q(-7, 2));
        assert_eq!(serde_json::to_string(&q(5, 3)).unwrap(), "\"5/3\"");
        let m: RationalMatrix = serde_json::from_str(r#"[["1","2"],["-1/2","0"]]"#).unwrap();
        assert_eq!(m.get(1, 0), &q(-1, 2));
        assert!("x/2".parse::<Rational>().is_err());
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det(&RationalMatrix::identity(3)).unwrap(), Rational::one());
        assert_eq!(det(&mat(&[&[1, 2], &[3, 4]])).unwrap(), Rational::from(-2));
        assert!(det(&RationalMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn bareiss_agrees_with_cofactor() {
        let rows: Vec<Vec<Rational>> = (0..6)
            .map(|i| (0..6).map(|j| q(((i * 7 + j * 3) % 11) as i64 - 5, (j % 3 + 1) as i64)).collect())
            .collect();
        let m = RationalMatrix::from_rows(rows.clone()).unwrap();
        assert_eq!(det(&m).unwrap(), det_cofactor(&rows));
    }

    #[test]
    fn xi_examples() {
        let c = xi_covector(&[vec![q(0, 1), q(1, 1)]]).unwrap();
        assert_eq!(c.coeffs, vec![q(1, 1), q(0, 1)]);
        let e2 = vec![q(0, 1), q(1, 1), q(0, 1)];
        let e3 = vec![q(0, 1), q(0, 1), q(1, 1)];
        let c = xi_covector(&[e2.clone(), e3]).unwrap();
        assert_eq!(c.coeffs, vec![q(1, 1), q(0, 1), q(0, 1)]);
        let d = xi_covector(&[e2.clone(), e2]).unwrap();
        assert!(d.degenerate);
    }

    #[test]
    fn solve_and_inverse() {
        let a = mat(&[&[2, 1], &[1, 3]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(2));
        assert!(mat(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..9).prop_map(|(p, d)| q(p, d))
    }

    fn square(k: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
        proptest::collection::vec(proptest::collection::vec(small_rat(), k), k)
    }

    proptest! {
        #[test]
        fn add_then_subtract_is_exact(a in small_rat(), b in small_rat()) {
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn row_swap_flips_sign(rows in square(3)) {
            let d = det_cofactor(&rows);
            let mut swapped = rows.clone();
            swapped.swap(0, 2);
            prop_assert_eq!(det_cofactor(&swapped), -d);
        }

        #[test]
        fn det_is_linear_in_first_column(rows in square(3), s in small_rat(), col in proptest::collection::vec(small_rat(), 3)) {
            let mut scaled = rows.clone();
            let mut other = rows.clone();
            let mut sum = rows.clone();
            for i in 0..3 {
                scaled[i][0] = &rows[i][0] * &s;
                other[i][0] = col[i].clone();
                sum[i][0] = &scaled[i][0] + &col[i];
            }
            prop_assert_eq!(det_cofactor(&sum), det_cofactor(&scaled) + det_cofactor(&other));
            prop_assert_eq!(det_cofactor(&scaled), &det_cofactor(&rows) * &s);
        }

        #[test]
        fn xi_matches_determinant(vs in proptest::collection::vec(proptest::collection::vec(small_rat(), 4), 3),
                                  w in proptest::collection::vec(small_rat(), 4)) {
            let xi = xi_covector(&vs).unwrap();
            let mut cols = vec![w.clone()];
            cols.extend(vs.iter().cloned());
            let full = RationalMatrix::from_columns(&cols).unwrap();
            prop_assert_eq!(xi.apply(&w), det(&full).unwrap());
            for v in &vs {
                prop_assert!(xi.apply(v).is_zero());
            }
        }
    }
}
