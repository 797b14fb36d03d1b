//! Exact integers and rationals, plus the power-membership and valuation
//! predicates that the irreducibility criteria reduce to.
//!
//! `Integer` and `Rational` are the num crate's arbitrary precision types;
//! rationals are always kept reduced with a positive denominator.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// `v_p` of a rational number; zero has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Equal,
            (Valuation::Infinite, _) => Greater,
            (_, Valuation::Infinite) => Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn int(n: i64) -> Integer {
    Integer::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(int(n), int(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(int(n))
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Iterator over the primes 2, 3, 5, ...
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime_u64(n))
}

/// Exact `k`-th root of an integer, if it exists. Odd roots of negative
/// numbers keep the sign; even roots are nonnegative.
pub fn integer_nth_root(n: &Integer, k: u32) -> Option<Integer> {
    if k == 0 {
        return None;
    }
    if k == 1 {
        return Some(n.clone());
    }
    if n.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let mag = n.abs();
    let root = mag.nth_root(k);
    if num_traits::pow(root.clone(), k as usize) != mag {
        return None;
    }
    Some(if n.is_negative() { -root } else { root })
}

pub fn rational_is_square(q: &Rational) -> Option<Rational> {
    is_nth_power(q, 2)
}

/// An `n`-th root of `q` in Q, if one exists. For even `n` the nonnegative
/// root is returned; for odd `n` the root has the sign of `q`.
pub fn is_nth_power(q: &Rational, n: u32) -> Option<Rational> {
    let num = integer_nth_root(q.numer(), n)?;
    let den = integer_nth_root(q.denom(), n)?;
    Some(Rational::new(num, den))
}

/// Returns `k >= 0` with `c = -4 k^4`, if such a rational exists.
pub fn in_minus4_fourth_powers(c: &Rational) -> Option<Rational> {
    if c.is_positive() {
        return None;
    }
    let quarter = -c / rat_int(4);
    is_nth_power(&quarter, 4)
}

fn integer_valuation(n: &Integer, p: &Integer) -> i64 {
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

pub fn padic_valuation(q: &Rational, p: u64) -> Result<Valuation> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidModulus(format!("{p} is not prime")));
    }
    if q.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let pp = Integer::from(p);
    Ok(Valuation::Finite(
        integer_valuation(q.numer(), &pp) - integer_valuation(q.denom(), &pp),
    ))
}

/// `num/den`, with the denominator omitted when it is 1.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = Integer::from_str(n.trim()).map_err(|_| bad())?;
            let d = Integer::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            Integer::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// `serde(with = "rational_str")` support for rationals as `"num/den"` strings.
pub mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Same as [`rational_str`] for vectors of rationals.
pub mod rational_vec_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        qs: &[Rational],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(qs.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Modular inverse of `a` modulo `m` (m > 1), if gcd(a, m) = 1.
pub fn inv_mod_i64(a: i64, m: i64) -> Option<i64> {
    let e = Integer::from(a).extended_gcd(&Integer::from(m));
    if !e.gcd.is_one() {
        return None;
    }
    let x = e.x.mod_floor(&Integer::from(m));
    i64::try_from(x).ok()
}

/// Evaluates `sum(c * prod(vars[i]^e[i]))` over a list of monomials.
pub fn eval_monomials(vars: &[&Rational], terms: &[(i64, &[u32])]) -> Rational {
    terms
        .iter()
        .map(|(c, exps)| {
            debug_assert_eq!(exps.len(), vars.len());
            exps.iter()
                .zip(vars)
                .fold(rat_int(*c), |acc, (&e, v)| acc * num_traits::pow((*v).clone(), e as usize))
        })
        .sum()
}
