//! Dense univariate polynomials over a [`Field`].
//!
//! `coeffs[i]` is the coefficient of `x^i`; the highest stored coefficient is
//! nonzero unless the polynomial is zero (empty vector).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> std::hash::Hash for Poly<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl<F: Field> Poly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: F) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: F) -> Self {
        let one = field.one();
        Poly::new(field, vec![one])
    }

    pub fn x(field: F) -> Self {
        Poly::new(field.clone(), vec![field.zero(), field.one()])
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Poly::new(field, vec![c])
    }

    /// `c * x^deg`
    pub fn monomial(field: F, c: F::Elem, deg: usize) -> Self {
        let mut coeffs = vec![field.zero(); deg + 1];
        coeffs[deg] = c;
        Poly::new(field, coeffs)
    }

    /// From integer coefficients, ascending.
    pub fn from_ints(field: F, coeffs: &[i64]) -> Self {
        let cs = coeffs.iter().map(|&c| field.from_i64(c)).collect();
        Poly::new(field, cs)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| self.field.is_one(c))
    }

    pub fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Divides by the leading coefficient; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.field.inv(&self.lc()) {
            Some(inv) if !self.is_zero() => self.scale(&inv),
            _ => self.clone(),
        }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { field: self.field.clone(), coeffs }
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        let dd = d.deg();
        if self.coeffs.len() <= dd {
            return (Poly::zero(f.clone()), self.clone());
        }
        let inv_lc = f.inv(&d.lc()).expect("nonzero leading coefficient is invertible");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); self.coeffs.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(&rem[i + dd], &inv_lc);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(&rem[i + j], &f.mul(&c, dc));
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(f.clone(), quot), Poly::new(f.clone(), rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// `self / d` when the division is exact.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g`, g monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let fld = self.field.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(fld.clone()), Poly::zero(fld.clone()));
        let (mut t0, mut t1) = (Poly::zero(fld.clone()), Poly::one(fld.clone()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match fld.inv(&r0.lc()) {
            Some(inv) if !r0.is_zero() => (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)),
            _ => (r0, s0, t0),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        (self * other).rem(m)
    }

    pub fn pow_mod(&self, e: u64, m: &Self) -> Self {
        self.pow_mod_big(&BigUint::from(e), m)
    }

    pub fn pow_mod_big(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Poly::one(self.field.clone()).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
        }
        acc
    }

    pub fn evaluate(&self, x0: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x0), c))
    }

    /// `self(g(x))`, by Horner's rule over polynomials.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.same_field(g)?;
        let mut acc = Poly::zero(self.field.clone());
        for c in self.coeffs.iter().rev() {
            acc = &acc * g;
            acc = acc.add_const(c);
        }
        Ok(acc)
    }

    /// The `n`-fold self-composition; `iterate(0)` is `x`.
    pub fn iterate(&self, n: u32) -> Self {
        let mut acc = Poly::x(self.field.clone());
        for _ in 0..n {
            acc = self.compose(&acc).expect("same field");
        }
        acc
    }

    /// `self(x + c)`.
    pub fn shift(&self, c: &F::Elem) -> Self {
        let lin = Poly::new(self.field.clone(), vec![c.clone(), self.field.one()]);
        self.compose(&lin).expect("same field")
    }

    /// `self(-x)`.
    pub fn reflect(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { f.neg(c) } else { c.clone() })
            .collect();
        Poly::new(f.clone(), coeffs)
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(&f.from_i64(i as i64), c))
            .collect();
        Poly::new(f.clone(), coeffs)
    }

    pub fn add_const(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(c.clone());
        } else {
            coeffs[0] = f.add(&coeffs[0], c);
        }
        Poly::new(f.clone(), coeffs)
    }

    /// Coefficients as strings, index = degree.
    pub fn to_json(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| self.field.format_elem(c)).collect()
    }

    pub fn from_json(field: F, coeffs: &[String]) -> Result<Self> {
        let cs = coeffs
            .iter()
            .map(|s| crate::parse::parse_elem(&field, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(field, cs))
    }
}

impl<F: Field> PartialOrd for Poly<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the leading one downwards.
impl<F: Field> Ord for Poly<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        assert!(self.field == rhs.field, "field context mismatch");
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => f.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(f.clone(), coeffs)
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        let f = &self.field;
        Poly { field: f.clone(), coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        assert!(self.field == rhs.field, "field context mismatch");
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f.clone());
        }
        let mut out = vec![f.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f.clone(), out)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<F: Field> $tr for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, rhs: Poly<F>) -> Poly<F> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return out.write_str("0");
        }
        let f = &self.field;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let mut text = f.format_elem(c);
            let negative = !f.is_compound(c) && text.starts_with('-');
            if negative {
                text.remove(0);
            }
            if f.is_compound(c) && i > 0 {
                text = format!("({text})");
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            let term = if i == 0 {
                text
            } else if text == "1" {
                mono
            } else {
                format!("{text}*{mono}")
            };
            match (first, negative) {
                (true, true) => write!(out, "-{term}")?,
                (true, false) => write!(out, "{term}")?,
                (false, true) => write!(out, " - {term}")?,
                (false, false) => write!(out, " + {term}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Rational};
    use crate::field::{ExtensionField, FiniteField, PrimeField, RationalField};
    use proptest::prelude::*;

    fn q(coeffs: &[i64]) -> Poly<RationalField> {
        Poly::from_ints(RationalField, coeffs)
    }

    #[test]
    fn compose_examples() {
        // x^2 o (x + 1)
        assert_eq!(q(&[0, 0, 1]).compose(&q(&[1, 1])).unwrap(), q(&[1, 2, 1]));
        let f = q(&[1, 0, 1]);
        assert_eq!(f.compose(&f).unwrap(), q(&[2, 0, 2, 0, 1]));
    }

    #[test]
    fn compose_char2_matches_evaluation_on_f16() {
        let f2 = PrimeField::new(2).unwrap();
        let f = Poly::from_ints(f2, &[1, 1, 1]);
        let ff = f.compose(&f).unwrap();
        assert_eq!(ff, Poly::from_ints(f2, &[1, 1, 0, 0, 1]));
        // lift to F_16 and compare values pointwise
        let k = ExtensionField::with_order(16).unwrap();
        let lift = |p: &Poly<PrimeField>| Poly::new(k.clone(), p.coeffs().to_vec());
        let (fk, ffk) = (lift(&f), lift(&ff));
        for a in k.elements() {
            assert_eq!(ffk.evaluate(&a), fk.evaluate(&fk.evaluate(&a)));
        }
    }

    #[test]
    fn compose_rejects_mixed_fields() {
        let a = Poly::from_ints(ExtensionField::new(2, vec![1, 1, 0, 0, 1]).unwrap(), &[1, 1]);
        let b = Poly::from_ints(ExtensionField::new(2, vec![1, 0, 0, 1, 1]).unwrap(), &[1, 1]);
        assert!(matches!(a.compose(&b), Err(Error::ContextMismatch)));
    }

    #[test]
    fn iterate_examples() {
        let f = q(&[-1, -1, 1]);
        assert_eq!(f.iterate(0), q(&[0, 1]));
        assert_eq!(f.iterate(1), f);
        let golden = &q(&[-1, 4, 0, -3, 1]) * &q(&[1, 1, -3, -1, 1]);
        assert_eq!(f.iterate(3), golden);

        // (x - 4)^6 + 4 iterated twice is (x - 4)^36 + 4
        let lin = q(&[-4, 1]);
        let g = &lin.pow(6) + &q(&[4]);
        assert_eq!(g.iterate(2), &lin.pow(36) + &q(&[4]));
    }

    #[test]
    fn shift_reflect_derivative_evaluate() {
        let f = q(&[-1, -1, 1]);
        let shifted = f.shift(&rat(1, 2));
        assert_eq!(shifted, Poly::new(RationalField, vec![rat(-5, 4), rat(0, 1), rat(1, 1)]));
        assert_eq!(f.shift(&rat(0, 1)), f);
        // ((x - c)^4 + m + c)(x + c) = x^4 + m + c
        let (c, m) = (rat(3, 7), rat(-2, 5));
        let quartic = &q(&[0, 1]).shift(&-c.clone()).pow(4)
            + &Poly::constant(RationalField, &m + &c);
        assert_eq!(
            quartic.shift(&c),
            &q(&[0, 0, 0, 0, 1]) + &Poly::constant(RationalField, &m + &c)
        );
        assert_eq!(q(&[0, 1, 0, 1]).reflect(), q(&[0, -1, 0, -1]));
        assert_eq!(q(&[2, 0, 2, 0, 1]).derivative(), q(&[0, 4, 0, 4]));
        assert_eq!(f.evaluate(&rat(2, 1)), rat(1, 1));
    }

    #[test]
    fn display_canonical_form() {
        assert_eq!(q(&[-1, -1, 1]).to_string(), "x^2 - x - 1");
        assert_eq!(q(&[-1, 4, 0, -3, 1]).to_string(), "x^4 - 3*x^3 + 4*x - 1");
        assert_eq!(
            Poly::new(RationalField, vec![rat(-5, 4), Rational::from_integer(0.into()), rat(1, 2)])
                .to_string(),
            "1/2*x^2 - 5/4"
        );
        let k = ExtensionField::with_order(4).unwrap();
        assert_eq!(Poly::new(k, vec![2, 3, 1]).to_string(), "x^2 + (g+1)*x + g");
        assert_eq!(q(&[]).to_string(), "0");
    }

    #[test]
    fn ordering_is_degree_then_leading_coefficients() {
        let mut v = vec![q(&[38, -12, 1]), q(&[66, -16, 1]), q(&[1, 1])];
        v.sort();
        assert_eq!(v, vec![q(&[1, 1]), q(&[66, -16, 1]), q(&[38, -12, 1])]);
    }

    #[test]
    fn ext_gcd_identity() {
        let a = q(&[-1, 0, 1]);
        let b = q(&[1, 2, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, q(&[1, 1]));
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    fn arb_qpoly(max_deg: usize) -> impl Strategy<Value = Poly<RationalField>> {
        prop::collection::vec((-9i64..10, 1i64..4), 1..=max_deg + 1).prop_map(|cs| {
            Poly::new(RationalField, cs.into_iter().map(|(n, d)| rat(n, d)).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn compose_is_associative(a in arb_qpoly(3), b in arb_qpoly(2), c in arb_qpoly(2)) {
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn iterate_adds(f in arb_qpoly(2), m in 0u32..3, n in 0u32..3) {
            prop_assume!(f.deg() >= 1);
            prop_assert_eq!(f.iterate(m + n), f.iterate(m).compose(&f.iterate(n)).unwrap());
            prop_assert_eq!(f.iterate(m * n), f.iterate(m).iterate(n));
        }

        #[test]
        fn shift_and_reflect_invert(f in arb_qpoly(6), n in -9i64..10, d in 1i64..5) {
            let c = rat(n, d);
            prop_assert_eq!(f.shift(&c).shift(&-c), f.clone());
            prop_assert_eq!(f.reflect().reflect(), f);
        }

        #[test]
        fn char2_squares_have_zero_derivative(cs in prop::collection::vec(0u64..2, 1..10)) {
            let f = Poly::new(PrimeField::new(2).unwrap(), cs);
            prop_assert!((&f * &f).derivative().is_zero());
        }

        #[test]
        fn divrem_reconstructs(a in arb_qpoly(7), b in arb_qpoly(4)) {
            prop_assume!(!b.is_zero());
            let (qq, r) = a.divrem(&b);
            prop_assert_eq!(&(&qq * &b) + &r, a);
            prop_assert!(r.is_zero() || r.deg() < b.deg());
        }
    }
}
