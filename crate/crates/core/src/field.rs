//! Coefficient fields: Q, prime fields F_p and extensions F_{p^n}.
//!
//! A field value is the context that knows how to do arithmetic on its
//! elements. Finite field elements are `u64` indices: the base-`p` digits of
//! the index are the coefficients of the residue polynomial in the
//! generator `g` (lowest digit = constant term), so enumeration order and
//! element order coincide.

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, is_prime_u64, Rational};
use crate::error::{Error, Result};

pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Image of a rational; fails when the denominator is not invertible.
    fn from_rational(&self, q: &Rational) -> Result<Self::Elem>;
    /// Element given as a residue polynomial in the generator `g`.
    fn from_residue(&self, coeffs: &[Rational]) -> Result<Self::Elem>;
    /// 0 for Q.
    fn characteristic(&self) -> u64;
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn ctx(&self) -> FieldCtx;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// True when elements print with more than one term (needs parentheses
    /// as a coefficient).
    fn is_compound(&self, a: &Self::Elem) -> bool {
        let s = self.format_elem(a);
        s.contains('+') || s[1..].contains('-')
    }
}

/// Serializable description of a working field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldCtx {
    Rational,
    PrimeField { p: u64 },
    ExtensionField { p: u64, n: u32, modulus: Vec<u64> },
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldCtx::Rational => f.write_str("Q"),
            FieldCtx::PrimeField { p } => write!(f, "F_{p}"),
            FieldCtx::ExtensionField { p, n, modulus } => {
                let field = PrimeField::new(*p).map_err(|_| fmt::Error)?;
                let poly = crate::poly::Poly::new(field, modulus.clone());
                write!(f, "F_{}[{}]", p.pow(*n), poly.to_string().replace('x', "g"))
            }
        }
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_i64(&self, n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_rational(&self, q: &Rational) -> Result<Rational> {
        Ok(q.clone())
    }
    fn from_residue(&self, coeffs: &[Rational]) -> Result<Rational> {
        if coeffs.iter().skip(1).any(|c| !c.is_zero()) {
            return Err(Error::Parse("generator g is not defined over Q".into()));
        }
        Ok(coeffs.first().cloned().unwrap_or_else(Rational::zero))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format_elem(&self, a: &Rational) -> String {
        format_rational(a)
    }
    fn ctx(&self) -> FieldCtx {
        FieldCtx::Rational
    }
    fn is_compound(&self, _a: &Rational) -> bool {
        false
    }
}

fn reduce_rational_mod(q: &Rational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let num = q.numer().mod_floor(&pb).to_u64().unwrap();
    let den = q.denom().mod_floor(&pb).to_u64().unwrap();
    if den == 0 {
        return Err(Error::Domain(format!(
            "denominator of {} is not invertible mod {p}",
            format_rational(q)
        )));
    }
    Ok(mulmod(num, inv_mod(den, p), p))
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime, a != 0
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i128) as u64
}

/// The prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidModulus(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| inv_mod(*a, self.p))
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, q: &Rational) -> Result<u64> {
        reduce_rational_mod(q, self.p)
    }
    fn from_residue(&self, coeffs: &[Rational]) -> Result<u64> {
        if coeffs.iter().skip(1).any(|c| !c.is_zero()) {
            return Err(Error::Parse("generator g is not defined over a prime field".into()));
        }
        match coeffs.first() {
            Some(c) => self.from_rational(c),
            None => Ok(0),
        }
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn ctx(&self) -> FieldCtx {
        FieldCtx::PrimeField { p: self.p }
    }
    fn is_compound(&self, _a: &u64) -> bool {
        false
    }
}

/// Conway polynomials for p = 2, n = 1..=8, as ascending coefficient bit masks.
const CONWAY_P2: [&[u64]; 8] = [
    &[1, 1],
    &[1, 1, 1],
    &[1, 1, 0, 1],
    &[1, 1, 0, 0, 1],
    &[1, 0, 1, 0, 0, 1],
    &[1, 1, 0, 1, 1, 0, 1],
    &[1, 1, 0, 0, 0, 0, 0, 1],
    &[1, 0, 1, 1, 1, 0, 0, 0, 1],
];

const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug)]
struct ExtInner {
    p: u64,
    n: u32,
    q: u64,
    modulus: Vec<u64>,
    /// exp/log tables over a primitive element, present for small fields.
    exp: Vec<u64>,
    log: Vec<u32>,
}

/// The extension field F_p[g]/(modulus), modulus monic irreducible of degree n.
#[derive(Clone, Debug)]
pub struct ExtensionField {
    inner: Arc<ExtInner>,
}

impl PartialEq for ExtensionField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl ExtensionField {
    /// Builds F_{p^n} from a monic modulus (ascending coefficients mod p),
    /// verifying that it is irreducible.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let n = modulus.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| {
            Error::InvalidModulus("modulus must have degree at least 1".into())
        })? as u32;
        if modulus.iter().any(|&c| c >= p) || modulus[n as usize] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic with entries in [0, p)".into()));
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q < (1u64 << 62))
            .ok_or_else(|| Error::InvalidModulus("field too large".into()))?;
        let mpoly = crate::poly::Poly::new(base, modulus.clone());
        if !crate::factor::finite::is_irreducible(&mpoly) {
            return Err(Error::InvalidModulus(format!(
                "{} is not irreducible over F_{p}",
                mpoly
            )));
        }
        let mut inner = ExtInner {
            p,
            n,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        if q <= TABLE_LIMIT {
            build_tables(&mut inner);
        }
        Ok(ExtensionField { inner: Arc::new(inner) })
    }

    /// F_q with the default modulus: the Conway polynomial for p = 2 and
    /// n <= 8, otherwise the lexicographically first monic irreducible.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, n) = prime_power(q)
            .ok_or_else(|| Error::InvalidModulus(format!("{q} is not a prime power")))?;
        Self::new(p, default_modulus(p, n)?)
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn n(&self) -> u32 {
        self.inner.n
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// The class of `g` (for n = 1, the root of the linear modulus).
    pub fn generator(&self) -> u64 {
        if self.inner.n == 1 {
            (self.inner.p - self.inner.modulus[0]) % self.inner.p
        } else {
            self.inner.p
        }
    }

    fn digits(&self, a: u64) -> Vec<u64> {
        let p = self.inner.p;
        let mut a = a;
        (0..self.inner.n)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    fn pack(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.inner.p + d)
    }
}

fn slow_mul(inner: &ExtInner, a: u64, b: u64) -> u64 {
    let p = inner.p;
    let n = inner.n as usize;
    let unpack = |mut v: u64| {
        (0..n)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect::<Vec<u64>>()
    };
    let (da, db) = (unpack(a), unpack(b));
    let mut prod = vec![0u64; 2 * n];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
        }
    }
    for k in (n..2 * n).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &m) in inner.modulus[..n].iter().enumerate() {
            let idx = k - n + i;
            prod[idx] = (prod[idx] + p - mulmod(c, m, p)) % p;
        }
    }
    prod[..n].iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn build_tables(inner: &mut ExtInner) {
    let order = inner.q - 1;
    let factors = crate::arith::prime_divisors(order);
    let pow = |inner: &ExtInner, a: u64, mut e: u64| {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = slow_mul(inner, acc, base);
            }
            base = slow_mul(inner, base, base);
            e >>= 1;
        }
        acc
    };
    let prim = (2..inner.q)
        .chain(std::iter::once(1))
        .find(|&c| factors.iter().all(|&l| pow(inner, c, order / l) != 1))
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = Vec::with_capacity(order as usize);
    let mut log = vec![0u32; inner.q as usize];
    let mut x = 1u64;
    for i in 0..order {
        exp.push(x);
        log[x as usize] = i as u32;
        x = slow_mul(inner, x, prim);
    }
    inner.exp = exp;
    inner.log = log;
}

/// `(p, n)` with `q = p^n`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let divs = crate::arith::prime_divisors(q);
    if divs.len() != 1 {
        return None;
    }
    let p = divs[0];
    let mut n = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        n += 1;
    }
    Some((p, n))
}

fn default_modulus(p: u64, n: u32) -> Result<Vec<u64>> {
    if p == 2 && (1..=8).contains(&n) {
        return Ok(CONWAY_P2[n as usize - 1].to_vec());
    }
    if n == 1 {
        return Ok(vec![0, 1]);
    }
    let base = PrimeField::new(p)?;
    let count = p.checked_pow(n).ok_or_else(|| Error::InvalidModulus("field too large".into()))?;
    for idx in 0..count {
        let mut coeffs: Vec<u64> = Vec::with_capacity(n as usize + 1);
        let mut v = idx;
        for _ in 0..n {
            coeffs.push(v % p);
            v /= p;
        }
        coeffs.push(1);
        let poly = crate::poly::Poly::new(base, coeffs.clone());
        if crate::factor::finite::is_irreducible(&poly) {
            return Ok(coeffs);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field for ExtensionField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let p = self.inner.p;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (*a, *b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.inner.n {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &u64) -> u64 {
        let p = self.inner.p;
        if p == 2 {
            return *a;
        }
        let d: Vec<u64> = self.digits(*a).into_iter().map(|x| (p - x) % p).collect();
        self.pack(&d)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let inner = &*self.inner;
        if inner.exp.is_empty() {
            return slow_mul(inner, *a, *b);
        }
        let order = inner.q - 1;
        let e = (inner.log[*a as usize] as u64 + inner.log[*b as usize] as u64) % order;
        inner.exp[e as usize]
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let inner = &*self.inner;
        if inner.exp.is_empty() {
            return Some(self.pow(a, inner.q - 2));
        }
        let order = inner.q - 1;
        let e = (order - inner.log[*a as usize] as u64) % order;
        Some(inner.exp[e as usize])
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.inner.p as i64) as u64
    }
    fn from_rational(&self, q: &Rational) -> Result<u64> {
        reduce_rational_mod(q, self.inner.p)
    }
    fn from_residue(&self, coeffs: &[Rational]) -> Result<u64> {
        let g = self.generator();
        let mut acc = 0u64;
        for c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, &g), &self.from_rational(c)?);
        }
        Ok(acc)
    }
    fn characteristic(&self) -> u64 {
        self.inner.p
    }
    fn format_elem(&self, a: &u64) -> String {
        if self.inner.n == 1 {
            return a.to_string();
        }
        let digits = self.digits(*a);
        let mut terms = Vec::new();
        for (i, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            terms.push(match (d, i) {
                (_, 0) => d.to_string(),
                (1, _) => mono,
                _ => format!("{d}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
    fn ctx(&self) -> FieldCtx {
        FieldCtx::ExtensionField {
            p: self.inner.p,
            n: self.inner.n,
            modulus: self.inner.modulus.clone(),
        }
    }
}

/// Finite fields with elements indexed `0..order`.
pub trait FiniteField: Field<Elem = u64> {
    fn order(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> u32;

    fn elements(&self) -> std::ops::Range<u64> {
        0..self.order()
    }

    /// The unique `b` with `b^p = a`.
    fn frobenius_root(&self, a: &u64) -> u64 {
        self.pow(a, self.order() / self.characteristic())
    }
}

impl FiniteField for PrimeField {
    fn order(&self) -> u64 {
        self.p
    }
    fn degree(&self) -> u32 {
        1
    }
    fn frobenius_root(&self, a: &u64) -> u64 {
        *a
    }
}

impl FiniteField for ExtensionField {
    fn order(&self) -> u64 {
        self.inner.q
    }
    fn degree(&self) -> u32 {
        self.inner.n
    }
}

impl FieldCtx {
    /// Parses `Q`, `p=<prime>`, `q=<prime power>` or
    /// `q=<prime power>:<modulus in g>`.
    pub fn parse(s: &str) -> Result<FieldCtx> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") || s.eq_ignore_ascii_case("rational") {
            return Ok(FieldCtx::Rational);
        }
        let bad = || Error::Parse(format!("bad field spec {s:?}; use Q, p=<prime> or q=<p^n>[:modulus]"));
        let (key, rest) = s.split_once('=').ok_or_else(bad)?;
        let (num, modulus) = match rest.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (rest, None),
        };
        let value: u64 = num.trim().parse().map_err(|_| bad())?;
        match (key.trim(), modulus) {
            ("p", None) => {
                PrimeField::new(value)?;
                Ok(FieldCtx::PrimeField { p: value })
            }
            ("q", None) => {
                let f = ExtensionField::with_order(value)?;
                Ok(f.ctx())
            }
            ("q", Some(m)) => {
                let (p, n) = prime_power(value)
                    .ok_or_else(|| Error::InvalidModulus(format!("{value} is not a prime power")))?;
                let base = PrimeField::new(p)?;
                let poly = crate::parse::parse_poly_in(&base, &m.replace('g', "x"))?;
                if poly.degree() != Some(n as usize) {
                    return Err(Error::InvalidModulus(format!("modulus must have degree {n}")));
                }
                let f = ExtensionField::new(p, poly.monic().coeffs().to_vec())?;
                Ok(f.ctx())
            }
            _ => Err(bad()),
        }
    }
}

/// A field built from a context, for dynamic dispatch at the edges.
#[derive(Clone, Debug)]
pub enum AnyField {
    Rational(RationalField),
    Prime(PrimeField),
    Extension(ExtensionField),
}

impl FieldCtx {
    pub fn build(&self) -> Result<AnyField> {
        Ok(match self {
            FieldCtx::Rational => AnyField::Rational(RationalField),
            FieldCtx::PrimeField { p } => AnyField::Prime(PrimeField::new(*p)?),
            FieldCtx::ExtensionField { p, n, modulus } => {
                if modulus.len() != *n as usize + 1 {
                    return Err(Error::InvalidModulus("modulus degree does not match n".into()));
                }
                AnyField::Extension(ExtensionField::new(*p, modulus.clone())?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.neg(&0), 0);
        assert_eq!(f.from_rational(&Rational::new(1.into(), 2.into())).unwrap(), 4);
        assert!(f.from_rational(&Rational::new(1.into(), 7.into())).is_err());
        assert!(PrimeField::new(8).is_err());
    }

    #[test]
    fn f4_structure() {
        let f = ExtensionField::with_order(4).unwrap();
        let g = f.generator();
        assert_eq!(g, 2);
        // g^2 = g + 1
        assert_eq!(f.mul(&g, &g), 3);
        assert_eq!(f.inv(&g), Some(3));
        assert_eq!(f.format_elem(&3), "g+1");
        assert_eq!(f.format_elem(&0), "0");
    }

    #[test]
    fn table_and_slow_paths_agree() {
        for q in [8u64, 9, 16, 25, 27, 49, 64] {
            let f = ExtensionField::with_order(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(&a, &b), slow_mul(&f.inner, a, b), "q={q}");
                }
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(matches!(
            ExtensionField::new(2, vec![1, 0, 1]),
            Err(Error::InvalidModulus(_))
        ));
        assert!(ExtensionField::with_order(12).is_err());
    }

    #[test]
    fn distinct_moduli_are_distinct_fields() {
        let a = ExtensionField::new(2, vec![1, 1, 0, 0, 1]).unwrap();
        let b = ExtensionField::new(2, vec![1, 0, 0, 1, 1]).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, ExtensionField::with_order(16).unwrap());
    }

    #[test]
    fn ctx_parsing() {
        assert_eq!(FieldCtx::parse("Q").unwrap(), FieldCtx::Rational);
        assert_eq!(FieldCtx::parse("p=5").unwrap(), FieldCtx::PrimeField { p: 5 });
        assert_eq!(
            FieldCtx::parse("q=4").unwrap(),
            FieldCtx::ExtensionField { p: 2, n: 2, modulus: vec![1, 1, 1] }
        );
        assert_eq!(
            FieldCtx::parse("q=16:g^4+g^3+1").unwrap(),
            FieldCtx::ExtensionField { p: 2, n: 4, modulus: vec![1, 0, 0, 1, 1] }
        );
        assert!(FieldCtx::parse("q=16:g^4+1").is_err());
        assert!(FieldCtx::parse("p=9").is_err());
        assert_eq!(FieldCtx::parse("q=16").unwrap().to_string(), "F_16[g^4 + g + 1]");
    }
}
