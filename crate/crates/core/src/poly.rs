//! Sparse multivariate Laurent polynomials with big-integer coefficients, and
//! unreduced rational functions built from them.

use std::collections::{BTreeMap, HashMap};
use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{Field, Rational, Ring};
use crate::error::{Error, Result};

#[derive(Default)]
struct Interner {
    names: Vec<Arc<str>>,
    ids: HashMap<Arc<str>, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static CELL: OnceLock<RwLock<Interner>> = OnceLock::new();
    CELL.get_or_init(Default::default)
}

/// Handle to an interned variable name such as `f_1_2`.
///
/// Handles are ordered by interning order, which fixes the term order used for
/// normalization within a process.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn new(name: &str) -> Var {
        if let Some(&id) = interner().read().expect("interner lock").ids.get(name) {
            return Var(id);
        }
        let mut w = interner().write().expect("interner lock");
        if let Some(&id) = w.ids.get(name) {
            return Var(id);
        }
        let id = w.names.len() as u32;
        let name: Arc<str> = Arc::from(name);
        w.names.push(name.clone());
        w.ids.insert(name, id);
        Var(id)
    }

    pub fn name(&self) -> Arc<str> {
        interner().read().expect("interner lock").names[self.0 as usize].clone()
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Product of variable powers; exponents are nonzero and sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, i32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, i32)>) -> Monomial {
        let mut acc: BTreeMap<Var, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v).or_insert(0) += e;
        }
        Monomial(acc.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0.binary_search_by_key(&v, |&(w, _)| w).map_or(0, |i| self.0[i].1)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn pairs(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }
}

/// Graded order: total degree first, then lexicographic on the exponent list.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl SparsePoly {
    pub fn constant(c: impl Into<BigInt>) -> SparsePoly {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: impl Into<BigInt>, mono: Monomial) -> SparsePoly {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        SparsePoly { terms }
    }

    pub fn var(name: &str) -> SparsePoly {
        Self::term(1, Monomial::var(Var::new(name)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest term in the graded order.
    pub fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, mono: Monomial, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::default();
        }
        SparsePoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> SparsePoly {
        SparsePoly { terms: self.terms.iter().map(|(m, v)| (m.mul(mono), v.clone())).collect() }
    }

    /// Nonnegative powers only; Laurent inverses exist just for monomials.
    pub fn pow(&self, k: u32) -> SparsePoly {
        let mut acc = SparsePoly::constant(1);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = Ring::mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = Ring::mul(&base, &base);
            }
        }
        acc
    }

    /// Single term with coefficient ±1, which is invertible in the Laurent ring.
    pub fn as_unit(&self) -> Option<(bool, &Monomial)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().expect("one term");
        if c.is_one() {
            Some((true, m))
        } else if (-c).is_one() {
            Some((false, m))
        } else {
            None
        }
    }

    /// Maximum exponent of `v` over all terms; absent variables count as 0.
    pub fn max_exponent(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    pub fn min_exponent(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|m| m.exponent(v)).min()
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(Signed::is_positive)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.pairs().iter().map(|&(v, _)| v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Substitutes rationals for every variable; a missing variable is an input error.
    pub fn eval(&self, values: &HashMap<Var, Rational>) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = Rational::from(c.clone());
            for &(v, e) in m.pairs() {
                let x = values.get(&v).ok_or_else(|| Error::Input(format!("no value for {v}")))?;
                let p = x
                    .powi(e as i64)
                    .ok_or_else(|| Error::Singular(format!("{v} = 0 raised to {e}")))?;
                t *= &p;
            }
            acc += &t;
        }
        Ok(acc)
    }
}

impl Ring for SparsePoly {
    fn zero() -> Self {
        SparsePoly::default()
    }
    fn one() -> Self {
        SparsePoly::constant(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = SparsePoly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        SparsePoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
    fn from_i64(v: i64) -> Self {
        SparsePoly::constant(v)
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(m, c)| format!("{c}*{m:?}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: String,
    monomial: BTreeMap<String, i32>,
}

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut reprs: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                coeff: c.to_string(),
                monomial: m.pairs().iter().map(|&(v, e)| (v.name().to_string(), e)).collect(),
            })
            .collect();
        // Stable across processes: sort by names, not by interning order.
        reprs.sort_by(|a, b| {
            let da: i32 = a.monomial.values().sum();
            let db: i32 = b.monomial.values().sum();
            da.cmp(&db).then_with(|| a.monomial.iter().cmp(b.monomial.iter()))
        });
        reprs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let reprs: Vec<TermRepr> = Vec::deserialize(d)?;
        let mut out = SparsePoly::default();
        for r in reprs {
            let c: BigInt = r.coeff.parse().map_err(|_| D::Error::custom(format!("bad coefficient {:?}", r.coeff)))?;
            let mono = Monomial::from_pairs(r.monomial.iter().map(|(k, &e)| (Var::new(k), e)));
            out.add_term(mono, c);
        }
        Ok(out)
    }
}

/// Quotient of two Laurent polynomials, kept without gcd reduction.
#[derive(Clone)]
pub struct RatFunc {
    num: SparsePoly,
    den: SparsePoly,
}

impl RatFunc {
    pub fn new(num: SparsePoly, den: SparsePoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::Arithmetic("zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: SparsePoly) -> RatFunc {
        RatFunc { num: p, den: SparsePoly::constant(1) }
    }

    pub fn var(name: &str) -> RatFunc {
        Self::from_poly(SparsePoly::var(name))
    }

    fn normalized(num: SparsePoly, den: SparsePoly) -> RatFunc {
        // A unit denominator folds into the numerator as a Laurent monomial.
        if let Some((positive, mono)) = den.as_unit() {
            let inv = mono.inv();
            let num = num.mul_monomial(&inv);
            let num = if positive { num } else { Ring::neg(&num) };
            return RatFunc { num, den: SparsePoly::constant(1) };
        }
        let negative = den.leading().is_some_and(|(_, c)| c.is_negative());
        if negative {
            RatFunc { num: Ring::neg(&num), den: Ring::neg(&den) }
        } else {
            RatFunc { num, den }
        }
    }

    pub fn num(&self) -> &SparsePoly {
        &self.num
    }

    pub fn den(&self) -> &SparsePoly {
        &self.den
    }

    /// The numerator, when the denominator is the constant 1.
    pub fn as_poly(&self) -> Option<&SparsePoly> {
        (self.den == SparsePoly::constant(1)).then_some(&self.num)
    }

    /// `maxexp_v(num) - maxexp_v(den)`.
    pub fn deg_in(&self, v: Var) -> Result<i64> {
        if self.num.is_zero() {
            return Err(Error::Arithmetic("degree of the zero function".into()));
        }
        let a = self.num.max_exponent(v).unwrap_or(0) as i64;
        let b = self.den.max_exponent(v).unwrap_or(0) as i64;
        Ok(a - b)
    }

    pub fn eval(&self, values: &HashMap<Var, Rational>) -> Result<Rational> {
        let d = self.den.eval(values)?;
        if d.is_zero() {
            return Err(Error::Singular("denominator vanishes".into()));
        }
        Ok(self.num.eval(values)? / d)
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<RatFunc> {
        Field::div(self, other).ok_or_else(|| Error::Arithmetic("division by zero".into()))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        Ring::mul(&self.num, &other.den) == Ring::mul(&other.num, &self.den)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == SparsePoly::constant(1) {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?}) / ({:?})", self.num, self.den)
        }
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(SparsePoly::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(SparsePoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return RatFunc::normalized(Ring::add(&self.num, &other.num), self.den.clone());
        }
        let num = Ring::add(&Ring::mul(&self.num, &other.den), &Ring::mul(&other.num, &self.den));
        RatFunc::normalized(num, Ring::mul(&self.den, &other.den))
    }
    fn sub(&self, other: &Self) -> Self {
        Ring::add(self, &Ring::neg(other))
    }
    fn mul(&self, other: &Self) -> Self {
        RatFunc::normalized(Ring::mul(&self.num, &other.num), Ring::mul(&self.den, &other.den))
    }
    fn neg(&self) -> Self {
        RatFunc { num: Ring::neg(&self.num), den: self.den.clone() }
    }
    fn from_i64(v: i64) -> Self {
        RatFunc::from_poly(SparsePoly::constant(v))
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::normalized(self.den.clone(), self.num.clone()))
        }
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RatFunc", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den)?;
        st.end()
    }
}
